use std::f64::consts::PI;
use std::sync::{OnceLock, RwLock};

use serde::Serialize;

use super::factor::factor;
use super::primes::{factor_u64, kronecker, primes_up_to, split_prime};
use super::{AlgInt, Field};
use crate::error::{Error, Result};

/// A truncated Euler product together with a bound on the neglected tail of
/// its logarithm: `|ln(true value) − ln(value)| <= log_tail_bound`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EulerProduct {
    pub value: f64,
    pub log_tail_bound: f64,
    pub prime_bound: u64,
}

impl EulerProduct {
    fn new(value: f64, prime_bound: u64) -> Self {
        // At most two prime ideals per rational prime p > B, each with
        // |ln factor| <= 4/p²; Σ_{p>B} 8/p² <= 8/B.
        EulerProduct { value, log_tail_bound: 8.0 / prime_bound as f64, prime_bound }
    }
}

fn cached_primes(bound: u64) -> Vec<u64> {
    static SIEVE: OnceLock<RwLock<Vec<u64>>> = OnceLock::new();
    let lock = SIEVE.get_or_init(|| RwLock::new(Vec::new()));
    {
        let v = lock.read().expect("sieve cache poisoned");
        if v.last().is_some_and(|&p| p >= bound) {
            return v.iter().copied().take_while(|&p| p <= bound).collect();
        }
    }
    let fresh = primes_up_to(bound);
    let mut v = lock.write().expect("sieve cache poisoned");
    if fresh.len() > v.len() {
        *v = fresh.clone();
    }
    fresh
}

/// Norms of the prime ideals above `p`, one entry per ideal.
fn prime_ideal_norms(k: Field, p: u64) -> ([u64; 2], usize) {
    match kronecker(k.disc(), p) {
        1 => ([p, p], 2),
        0 => ([p, 0], 1),
        _ => ([p * p, 0], 1),
    }
}

fn largest_prime_factor(n: u64) -> u64 {
    factor_u64(n).last().map_or(1, |&(p, _)| p)
}

/// `ζ_K(2) = ζ(2)·L(2, χ_D)` with absolute error at most `tol`.
///
/// With `q = |D|`, `L(2, χ) = q⁻² Σ_r χ(r) ζ(2, r/q)`. Each Hurwitz value is
/// a direct sum of `M` terms plus the Euler–Maclaurin tail
/// `1/X + 1/(2X²) + Σ_{j<=5} B_{2j}/X^{2j+1}` at `X = M + a`, whose
/// remainder is below `2|B₁₂|/X¹³`; `M` is chosen to push that under `tol`.
pub fn zeta_k_2(k: Field, tol: f64) -> Result<f64> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidTolerance(tol));
    }
    const BERNOULLI: [f64; 5] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0];
    const B12: f64 = 691.0 / 2730.0;
    let zeta2 = PI * PI / 6.0;
    let q = k.disc().unsigned_abs();
    let m = ((2.0 * B12 / tol).powf(1.0 / 13.0).ceil() as u64).max(4);
    let mut l = 0.0f64;
    for r in 1..q {
        let c = kronecker(k.disc(), r);
        if c == 0 {
            continue;
        }
        let a = r as f64 / q as f64;
        let x = m as f64 + a;
        let mut h = 1.0 / x + 0.5 / (x * x);
        let mut pow = x * x * x;
        for b in BERNOULLI {
            h += b / pow;
            pow *= x * x;
        }
        for n in (0..m).rev() {
            let t = n as f64 + a;
            h += 1.0 / (t * t);
        }
        l += c as f64 * h;
    }
    Ok(zeta2 * l / (q * q) as f64)
}

/// `c_𝔪 = N(𝔪) ∏_{𝔭|𝔪} (1 + 1/N𝔭)` as an exact integer.
pub fn mertens_constant_exact(m: &AlgInt) -> Result<u64> {
    let f = factor(m)?;
    Ok(f.prime_norms().map(|(n, e)| n.pow(e - 1) * (n + 1)).product())
}

pub fn mertens_constant_c_m(m: &AlgInt) -> Result<f64> {
    Ok(mertens_constant_exact(m)? as f64)
}

/// The factor of `c_{𝔪,k}` at a prime of norm `n`, given whether it divides
/// `𝔪` and `k`. With `g = N((𝔭, 𝔪))` and the κ corrections this is
/// `(1 − g/n²)^{[(𝔭,𝔪)|k]} · (1 − κ κ' g/n²)`.
fn mirsky_local(n: f64, divides_m: bool, divides_k: bool) -> f64 {
    let g = if divides_m { n } else { 1.0 };
    let coprime_part_divides = !divides_m || divides_k;
    let n2 = n * n;
    let (first, kappa) = if coprime_part_divides {
        (1.0 - g / n2, 1.0 / (1.0 - g / n2))
    } else {
        (1.0, 1.0)
    };
    let kappa_k = if divides_k { 1.0 - 1.0 / n } else { 1.0 };
    first * (1.0 - kappa * kappa_k * g / n2)
}

fn check_bound(bound: u64, needed: u64) -> Result<()> {
    if bound < 2 || bound < needed {
        Err(Error::BoundTooSmall { bound, needed: needed.max(2) })
    } else {
        Ok(())
    }
}

/// The Mirsky constant `c_{𝔪,k}`, evaluated prime by prime over all
/// rational primes up to `prime_bound`. `k = 0` is divisible by every prime.
pub fn mirsky_constant_c_mk(m: &AlgInt, k: &AlgInt, prime_bound: u64) -> Result<EulerProduct> {
    if m.is_zero() {
        return Err(Error::ZeroElement);
    }
    if m.field() != k.field() {
        return Err(Error::FieldMismatch);
    }
    let field = m.field();
    let k_zero = k.is_zero();
    let special = if k_zero { m.norm() } else { m.norm() * k.norm() };
    check_bound(prime_bound, largest_prime_factor(special))?;
    let mut value = 1.0 / m.norm() as f64;
    for p in cached_primes(prime_bound) {
        if special % p == 0 {
            let s = split_prime(field, p);
            for pi in &s.generators {
                let dm = pi.divides(m);
                let dk = k_zero || pi.divides(k);
                value *= mirsky_local(s.ideal_norm as f64, dm, dk);
            }
        } else {
            let (norms, count) = prime_ideal_norms(field, p);
            for &n in &norms[..count] {
                value *= mirsky_local(n as f64, false, k_zero);
            }
        }
    }
    Ok(EulerProduct::new(value, prime_bound))
}

/// The specialisation of `c_{𝔪,k}` to `𝔪 = 𝒪_K`:
/// `∏_𝔭 (1 − 2/N𝔭²) · ∏_{𝔭|k} (1 + 1/(N𝔭(N𝔭² − 2)))`.
pub fn mirsky_constant_unit_ideal(k: &AlgInt, prime_bound: u64) -> Result<EulerProduct> {
    let field = k.field();
    let k_zero = k.is_zero();
    let mut needed = 2;
    let mut dividing: Vec<u64> = Vec::new();
    if !k_zero {
        let f = factor(k)?;
        needed = largest_prime_factor(k.norm());
        dividing = f.prime_norms().map(|(n, _)| n).collect();
    }
    check_bound(prime_bound, needed)?;
    let mut value = 1.0;
    for p in cached_primes(prime_bound) {
        let (norms, count) = prime_ideal_norms(field, p);
        for &n in &norms[..count] {
            let nf = n as f64;
            value *= 1.0 - 2.0 / (nf * nf);
            if k_zero {
                value *= 1.0 + 1.0 / (nf * (nf * nf - 2.0));
            }
        }
    }
    for n in dividing {
        let nf = n as f64;
        value *= 1.0 + 1.0 / (nf * (nf * nf - 2.0));
    }
    Ok(EulerProduct::new(value, prime_bound))
}

/// Height of the horizontal asymptote of the Euler-weighted linear density:
/// `(π/|D|) ∏_𝔭 (1 − 2/N𝔭²)(1 + 1/(N𝔭²(N𝔭² − 2)))`.
pub fn limit_constant(k: Field, prime_bound: u64) -> Result<EulerProduct> {
    check_bound(prime_bound, 2)?;
    let mut value = PI / k.disc().unsigned_abs() as f64;
    for p in cached_primes(prime_bound) {
        let (norms, count) = prime_ideal_norms(k, p);
        for &n in &norms[..count] {
            let n2 = (n as f64) * (n as f64);
            value *= (1.0 - 2.0 / n2) * (1.0 + 1.0 / (n2 * (n2 - 2.0)));
        }
    }
    Ok(EulerProduct::new(value, prime_bound))
}

/// `C₁ = (2π/(|𝒪_K^×|√|D|)) ∏_𝔭 (1 + 1/(N𝔭²(N𝔭² − 2)))`.
pub fn cubic_ideal_constant(k: Field, prime_bound: u64) -> Result<EulerProduct> {
    check_bound(prime_bound, 2)?;
    let mut value = 2.0 * PI / (k.unit_count() as f64 * k.sqrt_abs_disc());
    for p in cached_primes(prime_bound) {
        let (norms, count) = prime_ideal_norms(k, p);
        for &n in &norms[..count] {
            let n2 = (n as f64) * (n as f64);
            value *= 1.0 + 1.0 / (n2 * (n2 - 2.0));
        }
    }
    Ok(EulerProduct::new(value, prime_bound))
}

/// `c_{𝔪,k}` for many `k` at a fixed `𝔪`: the product over primes not
/// dividing `k` is computed once, and each query multiplies in corrections
/// for the primes of `k`.
#[derive(Clone, Debug)]
pub struct MirskyTable {
    m: AlgInt,
    base: f64,
    zero: f64,
    prime_bound: u64,
}

impl MirskyTable {
    pub fn new(m: &AlgInt, prime_bound: u64) -> Result<Self> {
        let one = m.field().one();
        let base = mirsky_constant_c_mk(m, &one, prime_bound)?.value;
        let zero = mirsky_constant_c_mk(m, &m.field().zero(), prime_bound)?.value;
        Ok(MirskyTable { m: *m, base, zero, prime_bound })
    }

    pub fn prime_bound(&self) -> u64 {
        self.prime_bound
    }

    pub fn c(&self, k: &AlgInt) -> Result<f64> {
        if k.is_zero() {
            return Ok(self.zero);
        }
        if k.field() != self.m.field() {
            return Err(Error::FieldMismatch);
        }
        check_bound(self.prime_bound, largest_prime_factor(k.norm()))?;
        let mut value = self.base;
        for (pi, _) in factor(k)?.factors {
            let n = pi.norm() as f64;
            let dm = pi.divides(&self.m);
            value *= mirsky_local(n, dm, true) / mirsky_local(n, dm, false);
        }
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `Σ_{a ≠ 0} N(a)^{-2} / |units|` over a large disk, plus the tail
    /// estimated from the lattice point density.
    fn zeta_by_lattice_sum(k: Field, radius: i64) -> f64 {
        let mut s = 0.0;
        let g = k.grid();
        for p in g.enumerate_disk(radius as f64, true) {
            let n = crate::grid::ratio_f64(p.norm);
            s += 1.0 / (n * n);
        }
        let r2 = (radius * radius) as f64;
        let tail = 2.0 * PI / (k.sqrt_abs_disc()) / r2;
        (s + tail) / k.unit_count() as f64
    }

    #[test]
    fn zeta_values() {
        let zi = zeta_k_2(Field::gaussian(), 1e-6).unwrap();
        assert!(zi > 1.50 && zi < 1.52);
        // ζ(2)·G with Catalan's constant G
        assert!((zi - PI * PI / 6.0 * 0.915_965_594_177_219).abs() < 2e-6);
        let tight = zeta_k_2(Field::gaussian(), 1e-13).unwrap();
        assert!((tight - PI * PI / 6.0 * 0.915_965_594_177_219_015).abs() < 1e-13);
        // plain Dirichlet series as a second oracle
        for k in [Field::eisenstein(), Field::new(-7).unwrap()] {
            let q = k.disc().unsigned_abs();
            let mut l = 0.0;
            for n in (1..=2_000_000u64).rev() {
                l += kronecker(k.disc(), n % q) as f64 / (n as f64 * n as f64);
            }
            assert!((zeta_k_2(k, 1e-12).unwrap() - PI * PI / 6.0 * l).abs() < 1e-6);
        }
        let ze = zeta_k_2(Field::eisenstein(), 1e-6).unwrap();
        assert!(ze > 1.28 && ze < 1.30);
        for k in Field::all() {
            let z = zeta_k_2(k, 1e-6).unwrap();
            assert!(z > 1.0);
            assert!((z - zeta_by_lattice_sum(k, 400)).abs() < 1e-4, "{k}");
        }
        assert_eq!(zeta_k_2(Field::gaussian(), 0.0), Err(Error::InvalidTolerance(0.0)));
    }

    #[test]
    fn mertens_constants() {
        let k = Field::gaussian();
        assert_eq!(mertens_constant_c_m(&k.one()).unwrap(), 1.0);
        assert_eq!(mertens_constant_c_m(&k.element(1, 1)).unwrap(), 3.0);
        assert_eq!(mertens_constant_c_m(&k.integer(2)).unwrap(), 6.0);
    }

    #[test]
    fn local_factor_reduces_to_unit_ideal_form() {
        for n in [2.0, 3.0, 5.0, 9.0, 13.0] {
            assert!((mirsky_local(n, false, false) - (1.0 - 2.0 / (n * n))).abs() < 1e-15);
            let with_k = (1.0 - 2.0 / (n * n)) * (1.0 + 1.0 / (n * (n * n - 2.0)));
            assert!((mirsky_local(n, false, true) - with_k).abs() < 1e-15);
        }
    }

    #[test]
    fn two_routes_agree() {
        let bound = 1_000_000;
        for f in [Field::gaussian(), Field::eisenstein(), Field::new(-163).unwrap()] {
            let ks = [f.one(), f.element(1, 1), f.integer(2), f.integer(3), f.zero()];
            for k in ks {
                let a = mirsky_constant_c_mk(&f.one(), &k, bound).unwrap().value;
                let b = mirsky_constant_unit_ideal(&k, bound).unwrap().value;
                assert!((a - b).abs() <= 1e-9 * b, "{f} k={k}: {a} vs {b}");
                assert!(a > 0.0 && a < 1.0 + 1e-12 || k.is_zero());
            }
        }
    }

    #[test]
    fn table_matches_direct_loop() {
        let k = Field::gaussian();
        for m in [k.one(), k.element(1, 1), k.integer(3), k.element(2, 1)] {
            let t = MirskyTable::new(&m, 10_000).unwrap();
            for x in -4..=4 {
                for y in -4..=4 {
                    let kk = k.element(x, y);
                    let a = t.c(&kk).unwrap();
                    let b = mirsky_constant_c_mk(&m, &kk, 10_000).unwrap().value;
                    assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300), "m={m} k={kk}");
                }
            }
        }
    }

    #[test]
    fn bound_checks() {
        let k = Field::gaussian();
        assert_eq!(
            mirsky_constant_c_mk(&k.one(), &k.integer(13), 11),
            Err(Error::BoundTooSmall { bound: 11, needed: 13 })
        );
        assert_eq!(mirsky_constant_c_mk(&k.zero(), &k.one(), 100), Err(Error::ZeroElement));
        assert!(mirsky_constant_c_mk(&k.element(2, 1), &k.zero(), 5).is_ok());
    }

    #[test]
    fn limit_constants() {
        let a = limit_constant(Field::gaussian(), 1_000_000).unwrap();
        assert!((a.value - 0.346).abs() < 0.002, "{}", a.value);
        let b = limit_constant(Field::eisenstein(), 1_000_000).unwrap();
        assert!((b.value - 0.634).abs() < 0.002, "{}", b.value);
        for k in Field::all() {
            let c = limit_constant(k, 1000).unwrap();
            assert!(c.value < PI / k.disc().unsigned_abs() as f64);
            assert_eq!(c.log_tail_bound, 8e-3);
        }
    }
}
