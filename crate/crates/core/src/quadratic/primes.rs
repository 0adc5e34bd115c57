use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use super::{AlgInt, Field};

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

fn jacobi(mut a: u64, mut n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    a %= n;
    let mut s = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                s = -s;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            s = -s;
        }
        a %= n;
    }
    if n == 1 {
        s
    } else {
        0
    }
}

/// Kronecker symbol `(a / n)` for `n >= 0`.
pub fn kronecker(a: i64, n: u64) -> i32 {
    if n == 0 {
        return i32::from(a == 1 || a == -1);
    }
    let mut n = n;
    let mut s = 1;
    if n % 2 == 0 {
        if a % 2 == 0 {
            return 0;
        }
        let v = n.trailing_zeros();
        n >>= v;
        let r = a.rem_euclid(8);
        if v % 2 == 1 && (r == 3 || r == 5) {
            s = -s;
        }
    }
    if n == 1 {
        return s;
    }
    s * jacobi(a.rem_euclid(n as i64) as u64, n)
}

/// Prime factorization of `n > 0` by trial division, primes ascending.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplitKind {
    Split,
    Inert,
    Ramified,
}

/// The prime ideals of `𝒪_K` above a rational prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSplit {
    pub p: u64,
    pub kind: SplitKind,
    /// Normalized generators, one per prime ideal.
    pub generators: Vec<AlgInt>,
    /// Norm of each prime ideal above `p`.
    pub ideal_norm: u64,
}

fn cache() -> &'static RwLock<HashMap<(i64, u64), PrimeSplit>> {
    static CACHE: OnceLock<RwLock<HashMap<(i64, u64), PrimeSplit>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// An element of norm `p`, searching `|y| <= √(4p/|D|)` and solving the
/// norm form for `x`.
fn element_of_norm(k: Field, p: u64) -> Option<AlgInt> {
    let d = k.disc().unsigned_abs();
    let t = k.trace();
    let ymax = isqrt(4 * p / d) + 1;
    for y in 0..=ymax as i64 {
        // 4p − |D| y² is the discriminant of x² + t y x − n y² − p in x.
        let disc = 4 * p as i64 - d as i64 * y * y;
        if disc < 0 {
            break;
        }
        let r = isqrt(disc as u64) as i64;
        if r * r != disc {
            continue;
        }
        for sgn in [1, -1] {
            let num = -t * y + sgn * r;
            if num % 2 == 0 {
                let a = k.element(num / 2, y);
                if a.norm() == p {
                    return Some(a);
                }
            }
        }
    }
    None
}

/// How the rational prime `p` decomposes in `𝒪_K`. Results are cached.
pub fn split_prime(k: Field, p: u64) -> PrimeSplit {
    if let Some(s) = cache().read().expect("split cache poisoned").get(&(k.disc(), p)) {
        return s.clone();
    }
    let s = compute_split(k, p);
    cache().write().expect("split cache poisoned").insert((k.disc(), p), s.clone());
    s
}

fn compute_split(k: Field, p: u64) -> PrimeSplit {
    match kronecker(k.disc(), p) {
        0 => {
            let pi = element_of_norm(k, p).expect("ramified primes have an element of norm p");
            PrimeSplit { p, kind: SplitKind::Ramified, generators: vec![pi.normalized()], ideal_norm: p }
        }
        1 => {
            let pi = element_of_norm(k, p).expect("split primes have an element of norm p");
            let (a, b) = (pi.normalized(), pi.conj().normalized());
            let mut generators = vec![a, b];
            generators.sort_by_key(|g| std::cmp::Reverse((g.x, g.y)));
            PrimeSplit { p, kind: SplitKind::Split, generators, ideal_norm: p }
        }
        _ => PrimeSplit {
            p,
            kind: SplitKind::Inert,
            generators: vec![k.integer(p as i64).normalized()],
            ideal_norm: p * p,
        },
    }
}
