use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{ratio_f64, Rational};

/// Bin layout of a 2D histogram. Bins are half-open `[lo, hi)` in each
/// coordinate; index order is row-major with the first coordinate slowest.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum HistGeometry {
    /// The square window `[−A, A]²` of the plane.
    Plane { half_width: f64, bins_re: usize, bins_im: usize },
    /// The strip `[−X, X] × [−π s, π s)` of the cylinder `ℂ / 2πi s ℤ`.
    Cylinder { half_width: f64, scale: f64, bins_re: usize, bins_im: usize },
    /// The disk `|z| < R` split into `bins_r` rings and `bins_theta` sectors,
    /// angles measured in `[−π, π)`.
    Polar { radius: f64, bins_r: usize, bins_theta: usize },
}

/// Corners of one bin: `(lo0, hi0, lo1, hi1)` in the geometry's coordinates
/// (`(re, im)` or `(r, θ)`).
pub type BinBounds = (f64, f64, f64, f64);

impl HistGeometry {
    pub fn plane(half_width: f64, bins: usize) -> Self {
        HistGeometry::Plane { half_width, bins_re: bins, bins_im: bins }
    }

    pub fn cylinder(half_width: f64, bins_re: usize, bins_im: usize) -> Self {
        HistGeometry::Cylinder { half_width, scale: 1.0, bins_re, bins_im }
    }

    pub fn polar(radius: f64, bins_r: usize, bins_theta: usize) -> Self {
        HistGeometry::Polar { radius, bins_r, bins_theta }
    }

    pub fn validate(&self) -> Result<()> {
        let (size, a, b) = match *self {
            HistGeometry::Plane { half_width, bins_re, bins_im } => (half_width, bins_re, bins_im),
            HistGeometry::Cylinder { half_width, scale, bins_re, bins_im } => {
                if !(scale > 0.0 && scale.is_finite()) {
                    return Err(Error::InvalidArgument(format!("cylinder scale {scale} must be positive")));
                }
                (half_width, bins_re, bins_im)
            }
            HistGeometry::Polar { radius, bins_r, bins_theta } => (radius, bins_r, bins_theta),
        };
        if !(size > 0.0 && size.is_finite()) {
            return Err(Error::InvalidArgument(format!("window size {size} must be positive")));
        }
        if a == 0 || b == 0 {
            return Err(Error::InvalidArgument("bin counts must be positive".into()));
        }
        Ok(())
    }

    pub fn shape(&self) -> (usize, usize) {
        match *self {
            HistGeometry::Plane { bins_re, bins_im, .. } => (bins_re, bins_im),
            HistGeometry::Cylinder { bins_re, bins_im, .. } => (bins_re, bins_im),
            HistGeometry::Polar { bins_r, bins_theta, .. } => (bins_r, bins_theta),
        }
    }

    pub fn len(&self) -> usize {
        let (a, b) = self.shape();
        a * b
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest `|z|` of a point of the window.
    pub fn circumradius(&self) -> f64 {
        match *self {
            HistGeometry::Plane { half_width, .. } => half_width * 2f64.sqrt(),
            HistGeometry::Cylinder { half_width, scale, .. } => half_width.hypot(PI * scale),
            HistGeometry::Polar { radius, .. } => radius,
        }
    }

    /// Largest `|Im z|` of a point of the window.
    pub fn im_extent(&self) -> f64 {
        match *self {
            HistGeometry::Plane { half_width, .. } => half_width,
            HistGeometry::Cylinder { scale, .. } => PI * scale,
            HistGeometry::Polar { radius, .. } => radius,
        }
    }

    pub fn bounds(&self, idx: usize) -> BinBounds {
        let (_, n1) = self.shape();
        let (a, b) = (idx / n1, idx % n1);
        let edge = |lo: f64, hi: f64, n: usize, k: usize| {
            let h = (hi - lo) / n as f64;
            (lo + h * k as f64, if k + 1 == n { hi } else { lo + h * (k + 1) as f64 })
        };
        match *self {
            HistGeometry::Plane { half_width: w, bins_re, bins_im } => {
                let (r0, r1) = edge(-w, w, bins_re, a);
                let (i0, i1) = edge(-w, w, bins_im, b);
                (r0, r1, i0, i1)
            }
            HistGeometry::Cylinder { half_width: w, scale, bins_re, bins_im } => {
                let (r0, r1) = edge(-w, w, bins_re, a);
                let (i0, i1) = edge(-PI * scale, PI * scale, bins_im, b);
                (r0, r1, i0, i1)
            }
            HistGeometry::Polar { radius, bins_r, bins_theta } => {
                let (r0, r1) = edge(0.0, radius, bins_r, a);
                let (t0, t1) = edge(-PI, PI, bins_theta, b);
                (r0, r1, t0, t1)
            }
        }
    }

    pub fn area(&self, idx: usize) -> f64 {
        let (a0, a1, b0, b1) = self.bounds(idx);
        match self {
            HistGeometry::Polar { .. } => 0.5 * (b1 - b0) * (a1 * a1 - a0 * a0),
            _ => (a1 - a0) * (b1 - b0),
        }
    }

    /// Bin centre as a point `(re, im)`.
    pub fn center(&self, idx: usize) -> (f64, f64) {
        let (a0, a1, b0, b1) = self.bounds(idx);
        let (u, v) = (0.5 * (a0 + a1), 0.5 * (b0 + b1));
        match self {
            HistGeometry::Polar { .. } => (u * v.cos(), u * v.sin()),
            _ => (u, v),
        }
    }

    /// Bin of the point `(re, im)`, if it lies in the window.
    #[inline]
    pub fn bin(&self, re: f64, im: f64) -> Option<usize> {
        match *self {
            HistGeometry::Plane { half_width, bins_re, bins_im } => {
                RectBinner::new(half_width, half_width, bins_re, bins_im, false).bin(re, im)
            }
            HistGeometry::Cylinder { half_width, scale, bins_re, bins_im } => {
                RectBinner::new(half_width, PI * scale, bins_re, bins_im, true).bin(re, im)
            }
            HistGeometry::Polar { radius, bins_r, bins_theta } => {
                PolarBinner::new(radius, bins_r, bins_theta).bin(re, im)
            }
        }
    }
}

pub(crate) trait Binner: Sync {
    fn bin(&self, re: f64, im: f64) -> Option<usize>;
}

/// `[−w0, w0) × [−w1, w1)` split evenly; with `periodic`, the second
/// coordinate is known to lie in range and only rounding is clamped.
#[derive(Clone, Copy, Debug)]
pub(crate) struct RectBinner {
    lo0: f64,
    inv0: f64,
    n0: usize,
    lo1: f64,
    inv1: f64,
    n1: usize,
    periodic: bool,
}

impl RectBinner {
    pub(crate) fn new(w0: f64, w1: f64, n0: usize, n1: usize, periodic: bool) -> Self {
        RectBinner {
            lo0: -w0,
            inv0: n0 as f64 / (2.0 * w0),
            n0,
            lo1: -w1,
            inv1: n1 as f64 / (2.0 * w1),
            n1,
            periodic,
        }
    }
}

impl Binner for RectBinner {
    #[inline(always)]
    fn bin(&self, re: f64, im: f64) -> Option<usize> {
        let a = (re - self.lo0) * self.inv0;
        let b = (im - self.lo1) * self.inv1;
        if !(a >= 0.0 && b >= 0.0) {
            return None;
        }
        let ia = a as usize;
        let mut ib = b as usize;
        if self.periodic && ib >= self.n1 {
            ib = self.n1 - 1;
        }
        if ia < self.n0 && ib < self.n1 {
            Some(ia * self.n1 + ib)
        } else {
            None
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct PolarBinner {
    radius: f64,
    inv_r: f64,
    n_r: usize,
    inv_t: f64,
    n_t: usize,
}

impl PolarBinner {
    pub(crate) fn new(radius: f64, n_r: usize, n_t: usize) -> Self {
        PolarBinner { radius, inv_r: n_r as f64 / radius, n_r, inv_t: n_t as f64 / (2.0 * PI), n_t }
    }
}

impl Binner for PolarBinner {
    #[inline(always)]
    fn bin(&self, re: f64, im: f64) -> Option<usize> {
        let r = re.hypot(im);
        if !(r < self.radius) {
            return None;
        }
        let ir = ((r * self.inv_r) as usize).min(self.n_r - 1);
        let t = im.atan2(re);
        let mut it = ((t + PI) * self.inv_t) as usize;
        if it >= self.n_t {
            // θ = π is identified with −π
            it = 0;
        }
        Some(ir * self.n_t + it)
    }
}

/// A binned pair measure with exact integer masses.
///
/// `masses()[b] = raw[b] / renormalizer`. `total_raw_mass` counts every pair
/// (inside or outside the window) before renormalization.
#[derive(Clone, Debug, PartialEq)]
pub struct Hist2D {
    geometry: HistGeometry,
    raw: Vec<u128>,
    total_raw_mass: u128,
    renormalizer: f64,
    diagonal_included: bool,
}

impl Hist2D {
    pub fn new(geometry: HistGeometry, renormalizer: f64, diagonal_included: bool) -> Result<Self> {
        geometry.validate()?;
        Ok(Hist2D {
            raw: vec![0; geometry.len()],
            geometry,
            total_raw_mass: 0,
            renormalizer,
            diagonal_included,
        })
    }

    pub(crate) fn from_parts(
        geometry: HistGeometry,
        raw: Vec<u128>,
        total_raw_mass: u128,
        renormalizer: f64,
        diagonal_included: bool,
    ) -> Self {
        Hist2D { geometry, raw, total_raw_mass, renormalizer, diagonal_included }
    }

    pub fn geometry(&self) -> &HistGeometry {
        &self.geometry
    }

    pub fn raw(&self) -> &[u128] {
        &self.raw
    }

    pub fn total_raw_mass(&self) -> u128 {
        self.total_raw_mass
    }

    /// Raw mass that landed inside the window.
    pub fn window_raw_mass(&self) -> u128 {
        self.raw.iter().sum()
    }

    pub fn renormalizer(&self) -> f64 {
        self.renormalizer
    }

    pub fn diagonal_included(&self) -> bool {
        self.diagonal_included
    }

    pub fn masses(&self) -> Vec<f64> {
        self.raw.iter().map(|&m| m as f64 / self.renormalizer).collect()
    }

    /// Mass divided by bin area.
    pub fn densities(&self) -> Vec<f64> {
        self.masses().iter().enumerate().map(|(i, m)| m / self.geometry.area(i)).collect()
    }

    /// Entrywise sum. Geometry, renormalizer and diagonal flag must agree.
    pub fn merge(&self, other: &Hist2D) -> Result<Hist2D> {
        if self.geometry != other.geometry
            || self.renormalizer != other.renormalizer
            || self.diagonal_included != other.diagonal_included
        {
            return Err(Error::GeometryMismatch("histograms differ in layout or normalization".into()));
        }
        Ok(Hist2D {
            geometry: self.geometry,
            raw: self.raw.iter().zip(&other.raw).map(|(a, b)| a + b).collect(),
            total_raw_mass: self.total_raw_mass + other.total_raw_mass,
            renormalizer: self.renormalizer,
            diagonal_included: self.diagonal_included,
        })
    }
}

/// A finite measure on `ℝ` with atoms at `ln(key)` for exact positive
/// rational keys; masses are `mass_num / mass_den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomMeasure1D {
    pub atoms: BTreeMap<Rational, u128>,
    pub mass_den: u128,
}

impl AtomMeasure1D {
    pub fn new(mass_den: u128) -> Self {
        AtomMeasure1D { atoms: BTreeMap::new(), mass_den }
    }

    pub fn add(&mut self, key: Rational, mass_num: u128) {
        if mass_num > 0 {
            *self.atoms.entry(key).or_insert(0) += mass_num;
        }
    }

    pub fn total_mass_num(&self) -> u128 {
        self.atoms.values().sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass_num() as f64 / self.mass_den as f64
    }

    /// Same measure with the mass denominator replaced by `den`, when exact.
    pub fn with_denominator(&self, den: u128) -> Option<AtomMeasure1D> {
        let mut out = AtomMeasure1D::new(den);
        for (k, &m) in &self.atoms {
            let scaled = m.checked_mul(den)?;
            if scaled % self.mass_den != 0 {
                return None;
            }
            out.add(*k, scaled / self.mass_den);
        }
        Some(out)
    }

    /// Equality of measures irrespective of how masses are written.
    pub fn same_measure(&self, other: &AtomMeasure1D) -> bool {
        if self.atoms.len() != other.atoms.len() {
            return false;
        }
        self.atoms.iter().zip(&other.atoms).all(|((ka, ma), (kb, mb))| {
            ka == kb && ma.checked_mul(other.mass_den) == mb.checked_mul(self.mass_den)
        })
    }

    /// Bins atoms by `ln(key)` on `[lo, hi)`; masses divided by the total
    /// mass when `probability`.
    pub fn to_hist(&self, lo: f64, hi: f64, bins: usize, probability: bool) -> Result<Hist1D> {
        if !(hi > lo) || bins == 0 {
            return Err(Error::InvalidArgument("1D histogram needs lo < hi and bins > 0".into()));
        }
        let mut raw = vec![0u128; bins];
        let inv = bins as f64 / (hi - lo);
        for (k, &m) in &self.atoms {
            let t = ratio_f64(*k).ln();
            let a = (t - lo) * inv;
            if a >= 0.0 && (a as usize) < bins {
                raw[a as usize] += m;
            }
        }
        let div = if probability {
            self.total_mass_num() as f64
        } else {
            self.mass_den as f64
        };
        let div = if div > 0.0 { div } else { 1.0 };
        Ok(Hist1D { lo, hi, masses: raw.iter().map(|&m| m as f64 / div).collect() })
    }
}

/// Masses of a binned measure on `[lo, hi)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Hist1D {
    pub lo: f64,
    pub hi: f64,
    pub masses: Vec<f64>,
}

impl Hist1D {
    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.masses.len() as f64
    }

    pub fn bounds(&self, idx: usize) -> (f64, f64) {
        let h = self.width();
        (self.lo + h * idx as f64, if idx + 1 == self.masses.len() { self.hi } else { self.lo + h * (idx + 1) as f64 })
    }
}
