//! Finite-bin distances between an empirical histogram and a density.

use serde::Serialize;

use super::density::Density2D;
use super::hist::{Hist1D, Hist2D, HistGeometry};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Quadrature {
    /// Density at the bin centre times bin area.
    Midpoint,
    /// Each bin split into `n × n` cells, each evaluated at its centre.
    Subsample(usize),
}

/// Average densities over one ring (or one `Re` column on a cylinder).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadialBin {
    pub r_lo: f64,
    pub r_hi: f64,
    pub empirical: f64,
    pub theory: f64,
    pub bins: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorReport {
    /// `Σ_b |empirical mass − expected mass|`.
    pub l1: f64,
    /// `max_b |empirical density − expected density|`.
    pub sup: f64,
    /// Mean over bins of the density deviation.
    pub mean_abs_density_deviation: f64,
    pub empirical_mass: f64,
    pub expected_mass: f64,
    pub radial_profile: Vec<RadialBin>,
}

/// Expected mass of every bin under `density`.
pub fn bin_integrals(geometry: &HistGeometry, density: &dyn Density2D, q: Quadrature) -> Vec<f64> {
    let n = match q {
        Quadrature::Midpoint => 1,
        Quadrature::Subsample(n) => n.max(1),
    };
    let polar = matches!(geometry, HistGeometry::Polar { .. });
    (0..geometry.len())
        .map(|b| {
            let (a0, a1, b0, b1) = geometry.bounds(b);
            let (ha, hb) = ((a1 - a0) / n as f64, (b1 - b0) / n as f64);
            let mut s = 0.0;
            for i in 0..n {
                let (lo, hi) = (a0 + ha * i as f64, a0 + ha * (i + 1) as f64);
                let u = 0.5 * (lo + hi);
                for j in 0..n {
                    let v = b0 + hb * (j as f64 + 0.5);
                    s += if polar {
                        0.5 * hb * (hi * hi - lo * lo) * density.eval(u * v.cos(), u * v.sin())
                    } else {
                        ha * hb * density.eval(u, v)
                    };
                }
            }
            s
        })
        .collect()
}

/// Compares two mass vectors laid out on the same geometry.
pub fn compare_masses(geometry: &HistGeometry, empirical: &[f64], expected: &[f64]) -> Result<ErrorReport> {
    if empirical.len() != geometry.len() || expected.len() != geometry.len() {
        return Err(Error::GeometryMismatch(format!(
            "expected {} bins, got {} and {}",
            geometry.len(),
            empirical.len(),
            expected.len()
        )));
    }
    let mut l1 = 0.0;
    let mut sup: f64 = 0.0;
    let mut dev_sum = 0.0;
    for b in 0..geometry.len() {
        let diff = (empirical[b] - expected[b]).abs();
        l1 += diff;
        let dd = diff / geometry.area(b);
        sup = sup.max(dd);
        dev_sum += dd;
    }
    Ok(ErrorReport {
        l1,
        sup,
        mean_abs_density_deviation: dev_sum / geometry.len() as f64,
        empirical_mass: empirical.iter().sum(),
        expected_mass: expected.iter().sum(),
        radial_profile: radial_profile(geometry, empirical, expected),
    })
}

/// Ring averages of bin densities. Polar windows use their own rings; plane
/// windows group bins by the radius of their centre in rings one bin wide;
/// cylinder strips group by `Re` column.
pub fn radial_profile(geometry: &HistGeometry, empirical: &[f64], expected: &[f64]) -> Vec<RadialBin> {
    let (n0, n1) = geometry.shape();
    let mut rings: Vec<RadialBin> = Vec::new();
    let mut push = |r_lo: f64, r_hi: f64, members: &mut dyn Iterator<Item = usize>| {
        let (mut e, mut t, mut c) = (0.0, 0.0, 0usize);
        for b in members {
            let a = geometry.area(b);
            e += empirical[b] / a;
            t += expected[b] / a;
            c += 1;
        }
        if c > 0 {
            rings.push(RadialBin { r_lo, r_hi, empirical: e / c as f64, theory: t / c as f64, bins: c });
        }
    };
    match *geometry {
        HistGeometry::Polar { .. } | HistGeometry::Cylinder { .. } => {
            for a in 0..n0 {
                let (r_lo, r_hi, _, _) = geometry.bounds(a * n1);
                push(r_lo, r_hi, &mut (a * n1..(a + 1) * n1));
            }
        }
        HistGeometry::Plane { half_width, bins_re, .. } => {
            let h = 2.0 * half_width / bins_re as f64;
            let count = (half_width / h).ceil() as usize;
            for k in 0..count {
                let (r_lo, r_hi) = (h * k as f64, h * (k + 1) as f64);
                let mut members = (0..geometry.len()).filter(|&b| {
                    let (x, y) = geometry.center(b);
                    let r = x.hypot(y);
                    r >= r_lo && r < r_hi
                });
                push(r_lo, r_hi, &mut members);
            }
        }
    }
    rings
}

pub fn compare(hist: &Hist2D, density: &dyn Density2D, q: Quadrature) -> Result<ErrorReport> {
    let expected = bin_integrals(hist.geometry(), density, q);
    compare_masses(hist.geometry(), &hist.masses(), &expected)
}

/// 1D analogue: `L1` and sup of density deviation against `density` on the
/// bins of `hist`, with `n`-point midpoint sub-sampling per bin.
pub fn compare_1d(hist: &Hist1D, density: impl Fn(f64) -> f64, subsamples: usize) -> ErrorReport {
    let n = subsamples.max(1);
    let h = hist.width();
    let expected: Vec<f64> = (0..hist.masses.len())
        .map(|b| {
            let (lo, _) = hist.bounds(b);
            (0..n).map(|i| density(lo + h * (i as f64 + 0.5) / n as f64)).sum::<f64>() * h / n as f64
        })
        .collect();
    let mut l1 = 0.0;
    let mut sup: f64 = 0.0;
    for (m, e) in hist.masses.iter().zip(&expected) {
        l1 += (m - e).abs();
        sup = sup.max((m - e).abs() / h);
    }
    ErrorReport {
        l1,
        sup,
        mean_abs_density_deviation: l1 / h / hist.masses.len() as f64,
        empirical_mass: hist.masses.iter().sum(),
        expected_mass: expected.iter().sum(),
        radial_profile: Vec::new(),
    }
}
