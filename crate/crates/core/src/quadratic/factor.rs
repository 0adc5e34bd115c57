use num_integer::Integer;

use super::primes::{factor_u64, split_prime};
use super::AlgInt;
use crate::error::{Error, Result};

/// `a = unit · ∏ πᵢ^eᵢ` with pairwise non-associate normalized primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealFactorization {
    pub unit: AlgInt,
    pub factors: Vec<(AlgInt, u32)>,
}

impl IdealFactorization {
    pub fn product(&self) -> AlgInt {
        self.factors.iter().fold(self.unit, |acc, (p, e)| acc * p.pow(*e))
    }

    /// `(N(𝔭), e)` for every prime factor.
    pub fn prime_norms(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.factors.iter().map(|(p, e)| (p.norm(), *e))
    }
}

pub fn factor(a: &AlgInt) -> Result<IdealFactorization> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    let k = a.field();
    let mut rest = *a;
    let mut factors = Vec::new();
    for (p, _) in factor_u64(a.norm()) {
        for pi in split_prime(k, p).generators {
            let mut e = 0;
            while let Some(q) = rest.div_exact(&pi) {
                rest = q;
                e += 1;
            }
            if e > 0 {
                factors.push((pi, e));
            }
        }
    }
    debug_assert!(rest.is_unit());
    Ok(IdealFactorization { unit: rest, factors })
}

/// `φ_K(a𝒪_K) = N(a) ∏_{𝔭|a} (1 − 1/N𝔭)`.
pub fn euler_phi(a: &AlgInt) -> Result<u64> {
    let f = factor(a)?;
    Ok(f.prime_norms().map(|(n, e)| n.pow(e - 1) * (n - 1)).product())
}

pub fn moebius(a: &AlgInt) -> Result<i32> {
    let f = factor(a)?;
    if f.factors.iter().any(|&(_, e)| e > 1) {
        return Ok(0);
    }
    Ok(if f.factors.len() % 2 == 0 { 1 } else { -1 })
}

/// One generator for each ideal dividing `a𝒪_K`.
pub fn divisors(a: &AlgInt) -> Result<Vec<AlgInt>> {
    let f = factor(a)?;
    let mut out = vec![a.field().one()];
    for (p, e) in &f.factors {
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        for d in &out {
            let mut q = *d;
            for _ in 0..=*e {
                next.push(q);
                q = q * *p;
            }
        }
        out = next;
    }
    Ok(out)
}

/// A complete residue system of `𝒪_K / q𝒪_K`.
///
/// The sublattice `q𝒪_K ⊂ ℤ²` (coordinates over `(1, ω)`) has a basis
/// `{(d₁, 0), (e, d₂)}`; the representatives are `a + bω` with
/// `0 <= a < d₁`, `0 <= b < d₂`.
pub fn residues_mod(q: &AlgInt) -> Result<Vec<AlgInt>> {
    if q.is_zero() {
        return Err(Error::ZeroElement);
    }
    let k = q.field();
    let qw = *q * k.omega();
    let (y1, y2) = (q.y as i128, qw.y as i128);
    let g = y1.gcd(&y2);
    let det = (q.x as i128 * y2 - qw.x as i128 * y1).abs();
    let d1 = det / g;
    let d2 = g;
    debug_assert_eq!(d1 * d2, q.norm() as i128);
    let mut out = Vec::with_capacity((d1 * d2) as usize);
    for a in 0..d1 as i64 {
        for b in 0..d2 as i64 {
            out.push(k.element(a, b));
        }
    }
    Ok(out)
}

/// Whether `r` is a unit modulo `q`: the ℤ-span of `r, rω, q, qω` is `𝒪_K`,
/// i.e. the gcd of the 2×2 minors of those four coordinate vectors is 1.
pub fn is_invertible_mod(r: &AlgInt, q: &AlgInt) -> Result<bool> {
    if q.is_zero() {
        return Err(Error::ZeroElement);
    }
    let w = q.field().omega();
    let cols = [*r, *r * w, *q, *q * w];
    let mut g: i128 = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            let m = cols[i].x as i128 * cols[j].y as i128 - cols[j].x as i128 * cols[i].y as i128;
            g = g.gcd(&m);
        }
    }
    Ok(g == 1)
}

#[cfg(test)]
mod tests {
    use super::super::{Field, DISCRIMINANTS};
    use super::*;
    use proptest::prelude::*;

    fn elements_up_to(k: Field, max_norm: u64) -> Vec<AlgInt> {
        let mut out = Vec::new();
        let b = (max_norm as f64).sqrt() as i64 * 2 + 2;
        for x in -b..=b {
            for y in -b..=b {
                let a = k.element(x, y);
                if !a.is_zero() && a.norm() <= max_norm {
                    out.push(a);
                }
            }
        }
        out
    }

    /// One representative per nonzero ideal of norm at most `max_norm`.
    fn ideals_up_to(k: Field, max_norm: u64) -> Vec<AlgInt> {
        let mut out: Vec<AlgInt> = elements_up_to(k, max_norm).iter().map(|a| a.normalized()).collect();
        out.sort_by_key(|a| (a.x, a.y));
        out.dedup();
        out
    }

    fn brute_phi(q: &AlgInt) -> u64 {
        residues_mod(q).unwrap().iter().filter(|r| is_invertible_mod(r, q).unwrap()).count() as u64
    }

    #[test]
    fn gaussian_examples() {
        let k = Field::gaussian();
        let two = factor(&k.integer(2)).unwrap();
        assert_eq!(two.factors, vec![(k.element(1, 1), 2)]);
        assert_eq!(two.unit, k.element(0, -1));
        assert_eq!(two.product(), k.integer(2));
        let five = factor(&k.integer(5)).unwrap();
        assert_eq!(five.factors, vec![(k.element(2, 1), 1), (k.element(2, -1), 1)]);
        let three = factor(&k.integer(3)).unwrap();
        assert_eq!(three.factors, vec![(k.integer(3), 1)]);
        assert_eq!(factor(&k.zero()), Err(Error::ZeroElement));
    }

    #[test]
    fn phi_and_mu_examples() {
        let k = Field::gaussian();
        assert_eq!(euler_phi(&k.element(1, 1)).unwrap(), 1);
        assert_eq!(euler_phi(&k.integer(3)).unwrap(), 8);
        assert_eq!(euler_phi(&k.element(2, 1)).unwrap(), 4);
        assert_eq!(euler_phi(&k.element(0, 1)).unwrap(), 1);
        assert_eq!(moebius(&k.element(0, -1)).unwrap(), 1);
        assert_eq!(moebius(&k.integer(2)).unwrap(), 0);
        assert_eq!(moebius(&k.integer(5)).unwrap(), 1);
        for a in [k.element(1, 1), k.integer(3), k.element(2, 1)] {
            assert_eq!(euler_phi(&a).unwrap(), brute_phi(&a));
        }
    }

    #[test]
    fn residue_systems() {
        let k = Field::gaussian();
        assert_eq!(residues_mod(&k.element(1, 1)).unwrap().len(), 2);
        assert_eq!(residues_mod(&k.integer(2)).unwrap().len(), 4);
        for f in Field::all() {
            assert_eq!(residues_mod(&f.one()).unwrap().len(), 1);
        }
        assert!(is_invertible_mod(&k.one(), &k.integer(7)).unwrap());
        assert!(!is_invertible_mod(&k.element(1, 1), &k.integer(2)).unwrap());
        assert!(is_invertible_mod(&k.integer(3), &k.integer(2)).unwrap());
    }

    #[test]
    fn residues_are_distinct_mod_q() {
        for k in Field::all() {
            for q in ideals_up_to(k, 30) {
                let rs = residues_mod(&q).unwrap();
                for (i, a) in rs.iter().enumerate() {
                    for b in &rs[i + 1..] {
                        assert!(!q.divides(&(*a - *b)), "{k} q={q}");
                    }
                }
            }
        }
    }

    #[test]
    fn phi_matches_residue_count() {
        for k in Field::all() {
            for q in ideals_up_to(k, 200) {
                assert_eq!(euler_phi(&q).unwrap(), brute_phi(&q), "{k} q={q}");
            }
        }
    }

    #[test]
    fn divisor_sums() {
        for k in Field::all() {
            for a in ideals_up_to(k, 500) {
                let ds = divisors(&a).unwrap();
                let phi_sum: u64 = ds.iter().map(|d| euler_phi(d).unwrap()).sum();
                assert_eq!(phi_sum, a.norm(), "{k} a={a}");
                let mu_sum: i32 = ds.iter().map(|d| moebius(d).unwrap()).sum();
                assert_eq!(mu_sum, i32::from(a.is_unit()), "{k} a={a}");
            }
        }
    }

    proptest! {
        #[test]
        fn factorization_round_trips(di in 0usize..9, x in -200i64..200, y in -200i64..200) {
            let k = Field::new(DISCRIMINANTS[di]).unwrap();
            let a = k.element(x, y);
            prop_assume!(!a.is_zero());
            let f = factor(&a).unwrap();
            prop_assert_eq!(f.product(), a);
            prop_assert!(f.unit.is_unit());
            for (i, (p, e)) in f.factors.iter().enumerate() {
                prop_assert!(*e >= 1);
                for (q, _) in &f.factors[i + 1..] {
                    prop_assert!(!p.is_associate(q));
                }
            }
        }

        #[test]
        fn unit_invariance(di in 0usize..9, x in -60i64..60, y in -60i64..60) {
            let k = Field::new(DISCRIMINANTS[di]).unwrap();
            let a = k.element(x, y);
            prop_assume!(!a.is_zero());
            for u in k.units() {
                let b = u * a;
                prop_assert_eq!(euler_phi(&b).unwrap(), euler_phi(&a).unwrap());
                prop_assert_eq!(moebius(&b).unwrap(), moebius(&a).unwrap());
                prop_assert_eq!(b.norm(), a.norm());
            }
        }

        #[test]
        fn multiplicativity(di in 0usize..9, a in (-25i64..25, -25i64..25), b in (-25i64..25, -25i64..25)) {
            let k = Field::new(DISCRIMINANTS[di]).unwrap();
            let (a, b) = (k.element(a.0, a.1), k.element(b.0, b.1));
            prop_assume!(!a.is_zero() && !b.is_zero());
            let fa = factor(&a).unwrap();
            let fb = factor(&b).unwrap();
            let coprime = fa.factors.iter().all(|(p, _)| fb.factors.iter().all(|(q, _)| !p.is_associate(q)));
            prop_assume!(coprime);
            prop_assert_eq!(euler_phi(&(a * b)).unwrap(), euler_phi(&a).unwrap() * euler_phi(&b).unwrap());
            prop_assert_eq!(moebius(&(a * b)).unwrap(), moebius(&a).unwrap() * moebius(&b).unwrap());
        }
    }
}
