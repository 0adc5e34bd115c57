//! Exact arithmetic in the rings of integers of the nine imaginary quadratic
//! fields with class number one.
//!
//! Elements are `x + y·ω` with integer coordinates, where `ω = √D/2` for
//! `D ≡ 0 mod 4` and `ω = (1 + √D)/2` for `D ≡ 1 mod 4`. Writing
//! `ω² = tω + n`, the norm form is `x² + txy − ny²`.

mod constants;
mod factor;
mod primes;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::grid::{Grid, PlanarVector, Rational};

pub use constants::{
    limit_constant, mertens_constant_c_m, mertens_constant_exact, mirsky_constant_c_mk,
    mirsky_constant_unit_ideal, cubic_ideal_constant, zeta_k_2, EulerProduct, MirskyTable,
};
pub use factor::{
    divisors, euler_phi, factor, is_invertible_mod, moebius, residues_mod, IdealFactorization,
};
pub use primes::{factor_u64, kronecker, primes_up_to, split_prime, PrimeSplit, SplitKind};

/// Discriminants of the imaginary quadratic fields whose rings of integers are principal.
pub const DISCRIMINANTS: [i64; 9] = [-4, -8, -3, -7, -11, -19, -43, -67, -163];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Field {
    disc: i64,
}

impl Field {
    pub fn new(disc: i64) -> Result<Field> {
        if DISCRIMINANTS.contains(&disc) {
            Ok(Field { disc })
        } else {
            Err(Error::UnsupportedDiscriminant(disc))
        }
    }

    pub fn gaussian() -> Field {
        Field { disc: -4 }
    }

    pub fn eisenstein() -> Field {
        Field { disc: -3 }
    }

    pub fn all() -> impl Iterator<Item = Field> {
        DISCRIMINANTS.iter().map(|&disc| Field { disc })
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// `t` in `ω² = tω + n`, which is also the trace of `ω`.
    pub fn trace(&self) -> i64 {
        if self.disc % 4 == 0 {
            0
        } else {
            1
        }
    }

    /// `n` in `ω² = tω + n` (always negative).
    pub fn omega_sq_const(&self) -> i64 {
        if self.disc % 4 == 0 {
            self.disc / 4
        } else {
            (self.disc - 1) / 4
        }
    }

    pub fn sqrt_abs_disc(&self) -> f64 {
        (self.disc.unsigned_abs() as f64).sqrt()
    }

    pub fn unit_count(&self) -> usize {
        match self.disc {
            -4 => 4,
            -3 => 6,
            _ => 2,
        }
    }

    /// All units, found by searching the norm form for norm 1.
    pub fn units(&self) -> Vec<AlgInt> {
        let mut out = Vec::new();
        for x in -2..=2 {
            for y in -2..=2 {
                let a = self.element(x, y);
                if a.norm() == 1 {
                    out.push(a);
                }
            }
        }
        out
    }

    pub fn element(&self, x: i64, y: i64) -> AlgInt {
        AlgInt { x, y, field: *self }
    }

    pub fn zero(&self) -> AlgInt {
        self.element(0, 0)
    }

    pub fn one(&self) -> AlgInt {
        self.element(1, 0)
    }

    pub fn omega(&self) -> AlgInt {
        self.element(0, 1)
    }

    pub fn integer(&self, n: i64) -> AlgInt {
        self.element(n, 0)
    }

    /// Squarefree `s` such that the plane coordinates of every element are
    /// `(x, y·√s)` with rational `x`, `y`.
    pub fn plane_scale(&self) -> u32 {
        match self.disc {
            -4 => 1,
            -8 => 2,
            d => d.unsigned_abs() as u32,
        }
    }

    /// Exact planar coordinates of `a` (scale [`Field::plane_scale`]).
    pub fn to_planar(&self, a: &AlgInt) -> PlanarVector {
        let (ox, oy) = match self.disc {
            -4 | -8 => (Rational::from_integer(0), Rational::from_integer(1)),
            _ => (Rational::new(1, 2), Rational::new(1, 2)),
        };
        let x = Rational::from_integer(a.x as i128);
        let y = Rational::from_integer(a.y as i128);
        PlanarVector::new(x + y * ox, y * oy)
    }

    /// The lattice `𝒪_K` in the plane.
    pub fn grid(&self) -> Grid {
        self.ideal_grid(&self.one()).expect("unit ideal")
    }

    /// The lattice `m·𝒪_K`, built from the basis `(m, m·ω)`, so that
    /// [`Grid::input_coeffs`] maps grid coefficients back to `a·m + b·mω`.
    pub fn ideal_grid(&self, m: &AlgInt) -> Result<Grid> {
        self.check(m)?;
        if m.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mw = *m * self.omega();
        Grid::new(self.to_planar(m), self.to_planar(&mw), PlanarVector::zero(), self.plane_scale())
    }

    fn check(&self, a: &AlgInt) -> Result<()> {
        if a.field == *self {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}))", self.disc)
    }
}

/// The element `x + y·ω` of `𝒪_K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlgInt {
    pub x: i64,
    pub y: i64,
    field: Field,
}

impl AlgInt {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// Exact `|a|² = x² + txy − ny²`.
    pub fn norm(&self) -> u64 {
        self.norm_i128() as u64
    }

    pub(crate) fn norm_i128(&self) -> i128 {
        let (x, y) = (self.x as i128, self.y as i128);
        let t = self.field.trace() as i128;
        let n = self.field.omega_sq_const() as i128;
        x * x + t * x * y - n * y * y
    }

    pub fn conj(&self) -> AlgInt {
        let t = self.field.trace();
        AlgInt { x: self.x + t * self.y, y: -self.y, field: self.field }
    }

    /// `self / b` when it lies in `𝒪_K`.
    pub fn div_exact(&self, b: &AlgInt) -> Option<AlgInt> {
        assert_eq!(self.field, b.field, "elements of different fields");
        if b.is_zero() {
            return None;
        }
        let num = *self * b.conj();
        let nb = b.norm() as i64;
        if num.x % nb == 0 && num.y % nb == 0 {
            Some(AlgInt { x: num.x / nb, y: num.y / nb, field: self.field })
        } else {
            None
        }
    }

    pub fn divides(&self, a: &AlgInt) -> bool {
        a.div_exact(self).is_some()
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == 1
    }

    /// Floating-point complex value `(re, im)`.
    pub fn to_complex(&self) -> (f64, f64) {
        self.field.to_planar(self).to_f64(self.field.plane_scale())
    }

    /// The associate with lexicographically largest `(x, y)`.
    pub fn normalized(&self) -> AlgInt {
        self.field
            .units()
            .iter()
            .map(|u| *u * *self)
            .max_by_key(|a| (a.x, a.y))
            .expect("at least two units")
    }

    pub fn is_associate(&self, b: &AlgInt) -> bool {
        self.normalized() == b.normalized()
    }

    pub fn pow(&self, e: u32) -> AlgInt {
        let mut r = self.field.one();
        for _ in 0..e {
            r = r * *self;
        }
        r
    }
}

impl fmt::Display for AlgInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}w", self.x, self.y)
    }
}

impl Add for AlgInt {
    type Output = AlgInt;
    fn add(self, o: AlgInt) -> AlgInt {
        assert_eq!(self.field, o.field, "elements of different fields");
        AlgInt { x: self.x + o.x, y: self.y + o.y, field: self.field }
    }
}

impl Sub for AlgInt {
    type Output = AlgInt;
    fn sub(self, o: AlgInt) -> AlgInt {
        assert_eq!(self.field, o.field, "elements of different fields");
        AlgInt { x: self.x - o.x, y: self.y - o.y, field: self.field }
    }
}

impl Neg for AlgInt {
    type Output = AlgInt;
    fn neg(self) -> AlgInt {
        AlgInt { x: -self.x, y: -self.y, field: self.field }
    }
}

impl Mul for AlgInt {
    type Output = AlgInt;
    fn mul(self, o: AlgInt) -> AlgInt {
        assert_eq!(self.field, o.field, "elements of different fields");
        let t = self.field.trace();
        let n = self.field.omega_sq_const();
        let bd = self.y * o.y;
        AlgInt {
            x: self.x * o.x + bd * n,
            y: self.x * o.y + self.y * o.x + bd * t,
            field: self.field,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn norms() {
        let k = Field::gaussian();
        assert_eq!(k.one().norm(), 1);
        assert_eq!(k.element(2, 1).norm(), 5);
        assert_eq!(Field::eisenstein().omega().norm(), 1);
    }

    #[test]
    fn unit_counts_match_enumeration() {
        for k in Field::all() {
            assert_eq!(k.units().len(), k.unit_count(), "{k}");
        }
    }

    #[test]
    fn unsupported_field() {
        assert_eq!(Field::new(-5), Err(Error::UnsupportedDiscriminant(-5)));
    }

    #[test]
    fn planar_norm_matches_algebraic_norm() {
        for k in Field::all() {
            for x in -4..=4 {
                for y in -4..=4 {
                    let a = k.element(x, y);
                    let p = k.to_planar(&a);
                    assert_eq!(p.dot(&p, k.plane_scale()), Rational::from_integer(a.norm() as i128));
                }
            }
        }
    }

    #[test]
    fn omega_is_a_root() {
        for k in Field::all() {
            let w = k.omega();
            let lhs = w * w;
            let rhs = k.element(k.omega_sq_const(), k.trace());
            assert_eq!(lhs, rhs);
            let (re, im) = w.to_complex();
            let d = k.disc() as f64;
            let want_re = if k.disc() % 4 == 0 { 0.0 } else { 0.5 };
            assert!((re - want_re).abs() < 1e-15);
            assert!((im - (-d).sqrt() / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ideal_grid_covolume() {
        for k in Field::all() {
            let m = k.element(2, 1);
            let g = k.ideal_grid(&m).unwrap();
            let want = k.sqrt_abs_disc() / 2.0 * m.norm() as f64;
            assert!((g.covol() - want).abs() < 1e-9 * want);
        }
    }

    proptest! {
        #[test]
        fn multiplicative_norm(di in 0usize..9, a in -30i64..30, b in -30i64..30, c in -30i64..30, d in -30i64..30) {
            let k = Field::new(DISCRIMINANTS[di]).unwrap();
            let (x, y) = (k.element(a, b), k.element(c, d));
            prop_assert_eq!((x * y).norm(), x.norm() * y.norm());
            prop_assert_eq!((x * y).div_exact(&y).filter(|_| !y.is_zero()), if y.is_zero() { None } else { Some(x) });
            prop_assert_eq!((x * x.conj()).y, 0);
        }
    }
}
