//! Affine lattices ("grids") in the plane with exact coordinates.
//!
//! A [`PlanarVector`] `(x, y)` has rational entries and stands for the point
//! `(x, y·√s)`, where the squarefree scale `s` is shared by every vector of a
//! grid. `s = 1` covers rational bases; the Eisenstein lattice uses `s = 3`.
//! Dot products and squared lengths are therefore exact rationals.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// Angular slack when deciding sector boundaries.
pub const ANGLE_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PlanarVector {
    pub x: Rational,
    pub y: Rational,
}

impl PlanarVector {
    pub fn new(x: Rational, y: Rational) -> Self {
        PlanarVector { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        PlanarVector::new(Rational::from_integer(x as i128), Rational::from_integer(y as i128))
    }

    pub fn zero() -> Self {
        PlanarVector::from_ints(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Exact inner product when both vectors live in the plane with scale `s`.
    pub fn dot(&self, o: &PlanarVector, s: u32) -> Rational {
        self.x * o.x + self.y * o.y * Rational::from_integer(s as i128)
    }

    /// Rational part of `det(self, o)`; the true determinant is this times `√s`.
    pub fn cross(&self, o: &PlanarVector) -> Rational {
        self.x * o.y - self.y * o.x
    }

    pub fn to_f64(&self, s: u32) -> (f64, f64) {
        (ratio_f64(self.x), ratio_f64(self.y) * (s as f64).sqrt())
    }
}

impl Add for PlanarVector {
    type Output = PlanarVector;
    fn add(self, o: PlanarVector) -> PlanarVector {
        PlanarVector::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for PlanarVector {
    type Output = PlanarVector;
    fn sub(self, o: PlanarVector) -> PlanarVector {
        PlanarVector::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for PlanarVector {
    type Output = PlanarVector;
    fn neg(self) -> PlanarVector {
        PlanarVector::new(-self.x, -self.y)
    }
}

impl Mul<i128> for PlanarVector {
    type Output = PlanarVector;
    fn mul(self, k: i128) -> PlanarVector {
        PlanarVector::new(self.x * k, self.y * k)
    }
}

pub(crate) fn ratio_f64(r: Rational) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

/// A Lagrange-Gauss reduced basis: `|v1| <= |v2| <= |v2 ± v1|` and `v1·v2 <= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridBasis {
    pub v1: PlanarVector,
    pub v2: PlanarVector,
    /// Squarefree scale of the second coordinate.
    pub scale: u32,
}

/// Squared length of `shift·(i + alpha/shift, j + beta/shift)` in basis
/// coordinates, as the integer numerator `a u² + b u v + c v²` over `den`.
#[derive(Clone, Copy, Debug)]
struct NormForm {
    a: i128,
    b: i128,
    c: i128,
    den: i128,
    shift: i128,
    alpha: i128,
    beta: i128,
}

impl NormForm {
    #[inline]
    fn numerator(&self, i: i64, j: i64) -> i128 {
        let u = self.shift * i as i128 + self.alpha;
        let v = self.shift * j as i128 + self.beta;
        self.a * u * u + self.b * u * v + self.c * v * v
    }

    #[inline]
    fn lattice_numerator(&self, i: i64, j: i64) -> i128 {
        let u = self.shift * i as i128;
        let v = self.shift * j as i128;
        self.a * u * u + self.b * u * v + self.c * v * v
    }
}

/// The grid `a + Λ`.
#[derive(Clone, Debug)]
pub struct Grid {
    basis: GridBasis,
    offset: PlanarVector,
    offset_coeffs: (Rational, Rational),
    to_input: [[i64; 2]; 2],
    covol: f64,
    diam: f64,
    systole: f64,
    form: NormForm,
    v1f: (f64, f64),
    v2f: (f64, f64),
    af: (f64, f64),
    gram: (f64, f64, f64),
    coeff_f: (f64, f64),
}

impl PartialEq for Grid {
    fn eq(&self, o: &Grid) -> bool {
        self.basis == o.basis && self.offset == o.offset
    }
}

/// A point of a grid, `i·v1 + j·v2 + a` in the reduced basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridPoint {
    pub i: i64,
    pub j: i64,
    /// Exact `|p|²`.
    pub norm: Rational,
    pub x: f64,
    pub y: f64,
}

/// The truncated sector of points `ρ e^{it} z` with `t ∈ (−θ/2, θ/2]` and
/// `0 < |ρ z| <= radius`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sector {
    pub direction: PlanarVector,
    pub aperture: f64,
    pub radius: f64,
}

impl Sector {
    pub fn new(direction: PlanarVector, aperture: f64, radius: f64) -> Result<Self> {
        if direction.is_zero() {
            return Err(Error::InvalidArgument("sector direction must be nonzero".into()));
        }
        if !(aperture > 0.0 && aperture <= 2.0 * PI + ANGLE_EPS) {
            return Err(Error::InvalidArgument(format!("aperture {aperture} outside (0, 2π]")));
        }
        if !(radius >= 0.0) {
            return Err(Error::InvalidArgument(format!("negative sector radius {radius}")));
        }
        Ok(Sector { direction, aperture, radius })
    }

    /// The whole punctured disk of the given radius.
    pub fn full(radius: f64) -> Self {
        Sector { direction: PlanarVector::from_ints(1, 0), aperture: 2.0 * PI, radius }
    }

    fn is_full(&self) -> bool {
        self.aperture >= 2.0 * PI - ANGLE_EPS
    }

    /// Angle of `p` relative to the direction, in `(−π, π]`.
    fn relative_angle(&self, p: &PlanarVector, s: u32) -> f64 {
        let z = &self.direction;
        let cross = z.cross(p);
        let dot = z.dot(p, s);
        if cross.is_zero() {
            return if dot.is_positive() { 0.0 } else { PI };
        }
        (ratio_f64(cross) * (s as f64).sqrt()).atan2(ratio_f64(dot))
    }

    fn contains_angle(&self, t: f64) -> bool {
        if self.is_full() {
            return true;
        }
        let h = self.aperture / 2.0;
        t > -h + ANGLE_EPS && t <= h + ANGLE_EPS
    }
}

/// Rounds to the nearest integer with exact halves going toward zero, so
/// an already reduced basis is left untouched.
fn round_half_to_zero(r: Rational) -> i128 {
    let fl = r.floor();
    let frac = r - fl;
    let half = Rational::new(1, 2);
    let f = fl.to_integer();
    if frac > half || (frac == half && f < 0) {
        f + 1
    } else {
        f
    }
}

fn lcm(a: i128, b: i128) -> i128 {
    a.lcm(&b)
}

/// Builds the grid `a + Λ` with `Λ = ℤ v1 + ℤ v2` in the rational plane.
pub fn make_grid(v1: PlanarVector, v2: PlanarVector, a: PlanarVector) -> Result<Grid> {
    Grid::new(v1, v2, a, 1)
}

impl Grid {
    /// Builds the grid `a + ℤ v1 + ℤ v2` in the plane with second-coordinate scale `s`.
    pub fn new(v1: PlanarVector, v2: PlanarVector, a: PlanarVector, scale: u32) -> Result<Grid> {
        if scale == 0 {
            return Err(Error::InvalidArgument("scale must be positive".into()));
        }
        if v1.cross(&v2).is_zero() {
            return Err(Error::DegenerateBasis);
        }
        let s = scale;
        let n = |v: &PlanarVector| v.dot(v, s);
        let (mut p, mut q) = (v1, v2);
        let (mut tp, mut tq) = ([1i64, 0], [0i64, 1]);
        if n(&p) > n(&q) {
            std::mem::swap(&mut p, &mut q);
            std::mem::swap(&mut tp, &mut tq);
        }
        loop {
            let mu = round_half_to_zero(p.dot(&q, s) / n(&p));
            if mu != 0 {
                q = q - p * mu;
                tq = [tq[0] - mu as i64 * tp[0], tq[1] - mu as i64 * tp[1]];
            }
            if n(&q) < n(&p) {
                std::mem::swap(&mut p, &mut q);
                std::mem::swap(&mut tp, &mut tq);
            } else {
                break;
            }
        }
        if p.dot(&q, s).is_positive() {
            q = -q;
            tq = [-tq[0], -tq[1]];
        }
        let basis = GridBasis { v1: p, v2: q, scale };
        let det = p.cross(&q);
        let reduce = |c: Rational| c - (c - Rational::new(1, 2)).ceil();
        let alpha = reduce(a.cross(&q) / det);
        let beta = reduce(p.cross(&a) / det);
        let offset = PlanarVector::new(p.x * alpha + q.x * beta, p.y * alpha + q.y * beta);

        let g11 = n(&p);
        let g12 = p.dot(&q, s) * 2;
        let g22 = n(&q);
        let l = lcm(lcm(*g11.denom(), *g12.denom()), *g22.denom());
        let shift = lcm(*alpha.denom(), *beta.denom());
        let form = NormForm {
            a: (g11 * l).to_integer(),
            b: (g12 * l).to_integer(),
            c: (g22 * l).to_integer(),
            den: l * shift * shift,
            shift,
            alpha: (alpha * shift).to_integer(),
            beta: (beta * shift).to_integer(),
        };
        let covol = ratio_f64(det.abs()) * (s as f64).sqrt();
        let diam = ratio_f64(n(&(p + q)).max(n(&(p - q)))).sqrt();
        let systole = ratio_f64(g11).sqrt();
        Ok(Grid {
            basis,
            offset,
            offset_coeffs: (alpha, beta),
            to_input: [[tp[0], tq[0]], [tp[1], tq[1]]],
            covol,
            diam,
            systole,
            form,
            v1f: p.to_f64(s),
            v2f: q.to_f64(s),
            af: offset.to_f64(s),
            gram: (ratio_f64(g11), ratio_f64(g12) / 2.0, ratio_f64(g22)),
            coeff_f: (ratio_f64(alpha), ratio_f64(beta)),
        })
    }

    /// The Gaussian integers `ℤ[i]`.
    pub fn gauss() -> Grid {
        Grid::new(PlanarVector::from_ints(1, 0), PlanarVector::from_ints(0, 1), PlanarVector::zero(), 1)
            .expect("unit square basis")
    }

    /// The Eisenstein integers `ℤ[(1+i√3)/2]`.
    pub fn eisenstein() -> Grid {
        let half = Rational::new(1, 2);
        Grid::new(
            PlanarVector::from_ints(1, 0),
            PlanarVector::new(half, half),
            PlanarVector::zero(),
            3,
        )
        .expect("Eisenstein basis")
    }

    pub fn basis(&self) -> &GridBasis {
        &self.basis
    }

    pub fn scale(&self) -> u32 {
        self.basis.scale
    }

    /// Offset reduced into the fundamental parallelogram (coefficients in `(−1/2, 1/2]`).
    pub fn offset(&self) -> &PlanarVector {
        &self.offset
    }

    pub fn offset_coeffs(&self) -> (Rational, Rational) {
        self.offset_coeffs
    }

    pub fn is_lattice(&self) -> bool {
        self.offset.is_zero()
    }

    pub fn covol(&self) -> f64 {
        self.covol
    }

    pub fn diam(&self) -> f64 {
        self.diam
    }

    pub fn systole(&self) -> f64 {
        self.systole
    }

    /// The lattice `Λ` underlying this grid.
    pub fn lattice(&self) -> Grid {
        Grid::new(self.basis.v1, self.basis.v2, PlanarVector::zero(), self.basis.scale)
            .expect("reduced basis is nondegenerate")
    }

    /// The dilated grid `k·(a + Λ)`.
    pub fn scaled(&self, k: i64) -> Result<Grid> {
        let k = k as i128;
        Grid::new(self.basis.v1 * k, self.basis.v2 * k, self.offset * k, self.basis.scale)
    }

    /// Coefficients over the basis given to the constructor of the lattice
    /// vector with reduced coefficients `(i, j)`.
    pub fn input_coeffs(&self, i: i64, j: i64) -> (i64, i64) {
        let t = &self.to_input;
        (t[0][0] * i + t[0][1] * j, t[1][0] * i + t[1][1] * j)
    }

    /// Exact planar vector of the grid point with coefficients `(i, j)`.
    pub fn vector(&self, i: i64, j: i64) -> PlanarVector {
        self.basis.v1 * i as i128 + self.basis.v2 * j as i128 + self.offset
    }

    /// Exact `|p|²` of the grid point `(i, j)`.
    pub fn norm(&self, i: i64, j: i64) -> Rational {
        Rational::new(self.form.numerator(i, j), self.form.den)
    }

    /// Exact `|p|²` of the lattice vector `i v1 + j v2` (offset ignored).
    pub fn lattice_norm(&self, i: i64, j: i64) -> Rational {
        Rational::new(self.form.lattice_numerator(i, j), self.form.den)
    }

    /// Floating-point `|p|²` of the grid point `(i, j)`, the correctly rounded
    /// value of the exact rational.
    #[inline]
    pub fn norm_f64(&self, i: i64, j: i64) -> f64 {
        self.form.numerator(i, j) as f64 / self.form.den as f64
    }

    #[inline]
    pub fn lattice_norm_f64(&self, i: i64, j: i64) -> f64 {
        self.form.lattice_numerator(i, j) as f64 / self.form.den as f64
    }

    #[inline]
    pub fn position(&self, i: i64, j: i64) -> (f64, f64) {
        let (i, j) = (i as f64, j as f64);
        (
            self.v1f.0 * i + self.v2f.0 * j + self.af.0,
            self.v1f.1 * i + self.v2f.1 * j + self.af.1,
        )
    }

    fn point(&self, i: i64, j: i64, num: i128) -> GridPoint {
        let (x, y) = self.position(i, j);
        GridPoint { i, j, norm: Rational::new(num, self.form.den), x, y }
    }

    /// Visits `(i, j, numerator of |p|²)` for every grid point with
    /// `accept(numerator)`, assuming acceptance implies `|p| <= r_box`.
    /// Order is lexicographic in `(i, j)`.
    fn scan<A, F>(&self, r_box: f64, lattice_only: bool, accept: A, mut f: F)
    where
        A: Fn(i128) -> bool,
        F: FnMut(i64, i64, i128),
    {
        if !(r_box >= 0.0) {
            return;
        }
        let r = r_box * (1.0 + 1e-9) + 1e-9;
        let (g11, g12, g22) = self.gram;
        let (al, be) = if lattice_only { (0.0, 0.0) } else { self.coeff_f };
        let v2len = g22.sqrt();
        let bi = r * v2len / self.covol;
        let imin = (-al - bi).floor() as i64 - 1;
        let imax = (-al + bi).ceil() as i64 + 1;
        for i in imin..=imax {
            let u = i as f64 + al;
            let disc = g12 * g12 * u * u - g22 * (g11 * u * u - r * r);
            if disc < -1e-9 * r * r * g22.max(1.0) {
                continue;
            }
            let sq = disc.max(0.0).sqrt();
            let jlo = ((-g12 * u - sq) / g22 - be).floor() as i64 - 1;
            let jhi = ((-g12 * u + sq) / g22 - be).ceil() as i64 + 1;
            for j in jlo..=jhi {
                let num = if lattice_only {
                    self.form.lattice_numerator(i, j)
                } else {
                    self.form.numerator(i, j)
                };
                if accept(num) {
                    f(i, j, num);
                }
            }
        }
    }

    fn float_test(&self, r: f64) -> impl Fn(i128) -> bool {
        let den = self.form.den as f64;
        let rr = r * r;
        move |num| num as f64 / den <= rr
    }

    fn exact_test(&self, r_sq: Rational) -> impl Fn(i128) -> bool {
        let (rn, rd) = (*r_sq.numer(), *r_sq.denom());
        let den = self.form.den;
        move |num| num * rd <= rn * den
    }

    /// All points with `|p| <= r`, in lexicographic `(i, j)` order.
    ///
    /// Membership compares the correctly rounded value of the exact `|p|²`
    /// against `r * r` in floating point. This is exact whenever `r * r` is
    /// representable and the numerator of `|p|²` is below 2^53, which covers
    /// integer and half-integer radii on all built-in grids. Use
    /// [`Grid::enumerate_disk_sq`] for a fully exact test.
    pub fn enumerate_disk(&self, r: f64, exclude_zero: bool) -> Vec<GridPoint> {
        let mut out = Vec::new();
        self.scan(r, false, self.float_test(r), |i, j, num| {
            if !(exclude_zero && num == 0) {
                out.push(self.point(i, j, num));
            }
        });
        out
    }

    /// All points with `|p|² <= r_sq`, decided in exact arithmetic.
    pub fn enumerate_disk_sq(&self, r_sq: Rational, exclude_zero: bool) -> Vec<GridPoint> {
        let mut out = Vec::new();
        let r_box = ratio_f64(r_sq.max(Rational::zero())).sqrt();
        self.scan(r_box, false, self.exact_test(r_sq), |i, j, num| {
            if !(exclude_zero && num == 0) {
                out.push(self.point(i, j, num));
            }
        });
        out
    }

    /// Like [`Grid::enumerate_disk_sq`] but without materialising points:
    /// visits `(i, j, |p|²)` with exact `|p|²`.
    pub fn for_each_in_disk_sq<F: FnMut(i64, i64, Rational)>(&self, r_sq: Rational, mut f: F) {
        let r_box = ratio_f64(r_sq.max(Rational::zero())).sqrt();
        let den = self.form.den;
        self.scan(r_box, false, self.exact_test(r_sq), |i, j, num| f(i, j, Rational::new(num, den)));
    }

    /// Nonzero lattice vectors `i v1 + j v2` with `|p| <= r` (offset ignored),
    /// as `(i, j, |p|² as f64)`.
    pub fn lattice_vectors(&self, r: f64) -> Vec<(i64, i64, f64)> {
        let mut out = Vec::new();
        let den = self.form.den as f64;
        self.scan(r, true, self.float_test(r), |i, j, num| {
            if num != 0 {
                out.push((i, j, num as f64 / den));
            }
        });
        out
    }

    /// Grid points inside the sector, in lexicographic `(i, j)` order.
    pub fn enumerate_sector(&self, sector: &Sector) -> Vec<GridPoint> {
        let s = self.basis.scale;
        let mut out = Vec::new();
        self.scan(sector.radius, false, self.float_test(sector.radius), |i, j, num| {
            if num == 0 {
                return;
            }
            if !sector.is_full() {
                let t = sector.relative_angle(&self.vector(i, j), s);
                if !sector.contains_angle(t) {
                    return;
                }
            }
            out.push(self.point(i, j, num));
        });
        out
    }

    /// `Σ_{p ∈ a+Λ, |p| <= x} |p|^k`, summed in lexicographic `(i, j)` order.
    /// Even `k` is accumulated exactly while it fits in 128 bits.
    pub fn power_sum(&self, k: u32, x: f64) -> f64 {
        let den = self.form.den;
        if k % 2 == 0 {
            let h = k / 2;
            let mut acc: Option<i128> = Some(0);
            let mut dpow: Option<i128> = den.checked_pow(h);
            self.scan(x, false, self.float_test(x), |_, _, num| {
                if let Some(a) = acc {
                    acc = num.checked_pow(h).and_then(|t| a.checked_add(t));
                }
            });
            if let (Some(a), Some(d)) = (acc, dpow.take()) {
                return ratio_f64(Rational::new(a, d));
            }
        }
        let mut total = 0.0f64;
        let denf = den as f64;
        self.scan(x, false, self.float_test(x), |_, _, num| {
            let n2 = num as f64 / denf;
            total += if k == 0 { 1.0 } else { n2.sqrt().powi(k as i32) };
        });
        total
    }

    /// Leading term `2π x^{k+2} / ((k+2) covol)` of [`Grid::power_sum`].
    pub fn power_sum_asymptotic(&self, k: u32, x: f64) -> f64 {
        2.0 * PI * x.powi(k as i32 + 2) / ((k as f64 + 2.0) * self.covol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(x: i64, y: i64) -> PlanarVector {
        PlanarVector::from_ints(x, y)
    }

    fn brute_shortest(v1: (i64, i64), v2: (i64, i64)) -> i64 {
        let mut best = i64::MAX;
        for a in -30..=30i64 {
            for b in -30..=30i64 {
                if a == 0 && b == 0 {
                    continue;
                }
                let x = a * v1.0 + b * v2.0;
                let y = a * v1.1 + b * v2.1;
                best = best.min(x * x + y * y);
            }
        }
        best
    }

    #[test]
    fn unit_square() {
        let g = make_grid(v(1, 0), v(0, 1), PlanarVector::zero()).unwrap();
        assert_eq!(g.covol(), 1.0);
        assert_eq!(g.systole(), 1.0);
        assert!((g.diam() - 2f64.sqrt()).abs() < 1e-15);
        assert!(g.is_lattice());
    }

    #[test]
    fn eisenstein_constants() {
        let g = Grid::eisenstein();
        assert!((g.covol() - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((g.systole() - 1.0).abs() < 1e-15);
        assert!((g.diam() - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn skew_basis_reduces_to_shortest_vectors() {
        let g = make_grid(v(2, 0), v(3, 1), PlanarVector::zero()).unwrap();
        let b = g.basis();
        let n1 = b.v1.dot(&b.v1, 1);
        assert_eq!(n1, Rational::from_integer(brute_shortest((2, 0), (3, 1)) as i128));
        assert_eq!(n1, Rational::from_integer(2));
        assert_eq!(b.v2.dot(&b.v2, 1), Rational::from_integer(2));
        assert_eq!(g.covol(), 2.0);
        assert!((g.diam() - 2.0).abs() < 1e-15);
        // (0, 1) is not in this lattice; only 0 lies in the unit disk.
        let pts = g.enumerate_disk(1.0, false);
        assert_eq!(pts.len(), 1);
    }

    #[test]
    fn degenerate_basis_rejected() {
        assert_eq!(make_grid(v(1, 2), v(2, 4), PlanarVector::zero()), Err(Error::DegenerateBasis));
    }

    #[test]
    fn disk_counts() {
        let g = Grid::gauss();
        assert_eq!(g.enumerate_disk(1.0, false).len(), 5);
        assert_eq!(g.enumerate_disk(2.0, false).len(), 13);
        assert_eq!(g.enumerate_disk(2.0, true).len(), 12);
        assert_eq!(g.enumerate_disk(0.0, false).len(), 1);
    }

    #[test]
    fn shifted_grid_disk() {
        let g = make_grid(v(2, 0), v(0, 2), v(1, 1)).unwrap();
        let mut pts: Vec<(i64, i64)> = g
            .enumerate_disk(1.5, false)
            .iter()
            .map(|p| (p.x.round() as i64, p.y.round() as i64))
            .collect();
        pts.sort();
        assert_eq!(pts, vec![(-1, -1), (-1, 1), (1, -1), (1, 1)]);
    }

    #[test]
    fn offset_is_reduced() {
        let g = make_grid(v(1, 0), v(0, 1), v(7, -3)).unwrap();
        assert!(g.is_lattice());
        let h = make_grid(v(2, 0), v(0, 2), v(-1, 3)).unwrap();
        let (a, b) = h.offset_coeffs();
        assert_eq!((a, b), (Rational::new(1, 2), Rational::new(1, 2)));
    }

    #[test]
    fn exact_and_float_disks_agree_on_integer_radius() {
        let g = Grid::eisenstein();
        let a = g.enumerate_disk(7.0, false);
        let b = g.enumerate_disk_sq(Rational::from_integer(49), false);
        assert_eq!(a, b);
    }

    #[test]
    fn sector_cases() {
        let g = Grid::gauss();
        let quarter = Sector::new(v(1, 0), PI / 2.0, 1.5).unwrap();
        let got: Vec<(i64, i64)> =
            g.enumerate_sector(&quarter).iter().map(|p| (p.x as i64, p.y as i64)).collect();
        assert_eq!(got, vec![(1, 0), (1, 1)]);
        let rotated = Sector::new(v(0, 1), PI / 2.0, 1.5).unwrap();
        let mut got: Vec<(i64, i64)> =
            g.enumerate_sector(&rotated).iter().map(|p| (p.x as i64, p.y as i64)).collect();
        got.sort();
        assert_eq!(got, vec![(-1, 1), (0, 1)]);
        let full = Sector::new(v(1, 0), 2.0 * PI, 2.0).unwrap();
        assert_eq!(g.enumerate_sector(&full), g.enumerate_disk(2.0, true));
    }

    #[test]
    fn half_planes_tile() {
        let g = Grid::gauss();
        let a = Sector::new(v(1, 0), PI, 5.0).unwrap();
        let b = Sector::new(v(-1, 0), PI, 5.0).unwrap();
        let na = g.enumerate_sector(&a).len();
        let nb = g.enumerate_sector(&b).len();
        assert_eq!(na + nb, g.enumerate_disk(5.0, true).len());
    }

    #[test]
    fn power_sums() {
        let g = Grid::gauss();
        assert_eq!(g.power_sum(0, 2.0), 13.0);
        assert_eq!(g.power_sum(2, 1.0), 4.0);
        assert_eq!(g.power_sum(2, 2.0), 28.0);
        let odd = g.power_sum(1, 1.5);
        assert!((odd - (4.0 + 4.0 * 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn power_sum_leading_terms() {
        let g = Grid::gauss();
        assert!((g.power_sum_asymptotic(0, 1000.0) - PI * 1e6).abs() < 1e-6);
        assert!((g.power_sum_asymptotic(2, 10.0) - PI / 2.0 * 1e4).abs() < 1e-9);
        let h = make_grid(v(2, 0), v(0, 1), PlanarVector::zero()).unwrap();
        assert!((h.power_sum_asymptotic(0, 1.0) - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn gauss_circle_bound() {
        for g in [Grid::gauss(), Grid::eisenstein()] {
            for x in [10.0, 100.0, 1000.0] {
                let count = g.power_sum(0, x);
                let bound = 2.0 * g.diam() / g.covol() * x + 4.0;
                assert!((count - PI * x * x / g.covol()).abs() <= bound, "x={x}");
            }
        }
    }

    proptest! {
        #[test]
        fn reduction_is_idempotent(a in -6i64..=6, b in -6i64..=6, c in -6i64..=6, d in -6i64..=6) {
            prop_assume!(a * d - b * c != 0);
            let g = make_grid(v(a, b), v(c, d), PlanarVector::zero()).unwrap();
            let h = make_grid(g.basis().v1, g.basis().v2, PlanarVector::zero()).unwrap();
            prop_assert_eq!(&g, &h);
            let bs = g.basis();
            let n = |w: &PlanarVector| w.dot(w, 1);
            prop_assert!(n(&bs.v1) <= n(&bs.v2));
            prop_assert!(n(&bs.v2) <= n(&(bs.v2 + bs.v1)));
            prop_assert!(n(&bs.v2) <= n(&(bs.v2 - bs.v1)));
            prop_assert!(g.systole() <= g.diam());
            prop_assert_eq!(n(&bs.v1), Rational::from_integer(brute_shortest((a, b), (c, d)) as i128));
        }

        #[test]
        fn reduced_basis_spans_same_points(a in -5i64..=5, b in -5i64..=5, c in -5i64..=5, d in -5i64..=5) {
            let det = a * d - b * c;
            prop_assume!(det != 0);
            let g = make_grid(v(a, b), v(c, d), PlanarVector::zero()).unwrap();
            let mut got: Vec<(i64, i64)> = g
                .enumerate_disk(10.0, false)
                .iter()
                .map(|p| (p.x.round() as i64, p.y.round() as i64))
                .collect();
            got.sort();
            let mut want = Vec::new();
            for x in -10i64..=10 {
                for y in -10i64..=10 {
                    // (x, y) = s (a, b) + t (c, d) with integer s, t
                    let sn = x * d - y * c;
                    let tn = a * y - b * x;
                    if x * x + y * y <= 100 && sn % det == 0 && tn % det == 0 {
                        want.push((x, y));
                    }
                }
            }
            prop_assert_eq!(got, want);
        }

        #[test]
        fn scaling_covariance(k in 1i64..=4, r in 0.5f64..6.0) {
            let g = Grid::gauss();
            let gk = g.scaled(k).unwrap();
            let a: Vec<(i64, i64)> = gk.enumerate_disk(r * k as f64, false).iter()
                .map(|p| (p.x.round() as i64, p.y.round() as i64)).collect();
            let b: Vec<(i64, i64)> = g.enumerate_disk(r, false).iter()
                .map(|p| (p.x.round() as i64 * k, p.y.round() as i64 * k)).collect();
            let (mut a, mut b) = (a, b);
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn full_sector_matches_disk(zx in -3i64..=3, zy in -3i64..=3, r in 0.5f64..5.0) {
            prop_assume!(zx != 0 || zy != 0);
            let g = Grid::eisenstein();
            let z = v(zx, zy);
            let zl = ((zx * zx + zy * zy) as f64).sqrt();
            let s = Sector::new(z, 2.0 * PI, r * zl).unwrap();
            let a = g.enumerate_sector(&s);
            let b = g.enumerate_disk(r * zl, true);
            prop_assert_eq!(a, b);
        }
    }
}
