//! Ortholength spectra of the cusp neighbourhood and their pair correlations,
//! built from the arithmetic of the ideal `𝔟`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Rational;
use crate::pair::{build_logset, pushforward_2re, AtomMeasure1D, Source, WeightKind};
use crate::quadratic::{euler_phi, AlgInt, Field};

/// One length class `ℓ = ln n` with multiplicity `numerator / unit_count`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OrthoEntry {
    pub norm: u64,
    pub length: f64,
    pub numerator: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrthoSpectrum {
    /// Sorted by norm.
    pub entries: Vec<OrthoEntry>,
    pub unit_count: usize,
    pub horizon: u64,
}

impl OrthoSpectrum {
    pub fn multiplicity(&self, idx: usize) -> f64 {
        self.entries[idx].numerator as f64 / self.unit_count as f64
    }

    /// Sum of all multiplicity numerators.
    pub fn total_numerator(&self) -> u128 {
        self.entries.iter().map(|e| e.numerator).sum()
    }
}

/// Lengths `ln N(q)` for `q ∈ 𝔟 − {0}`, `|q| <= N`, each norm class carrying
/// `2 Σ φ_K(q)` over its elements.
pub fn ortho_spectrum(b: &AlgInt, n: u64) -> Result<OrthoSpectrum> {
    if b.is_zero() {
        return Err(Error::ZeroElement);
    }
    if n < 1 {
        return Err(Error::InvalidArgument("horizon N must be >= 1".into()));
    }
    let field: Field = b.field();
    let g = field.ideal_grid(b)?;
    let bw = *b * field.omega();
    let r_sq = Rational::from_integer((n as i128) * (n as i128));
    let mut groups: BTreeMap<u64, u128> = BTreeMap::new();
    for p in g.enumerate_disk_sq(r_sq, true) {
        let (x, y) = g.input_coeffs(p.i, p.j);
        let q = field.integer(x) * *b + field.integer(y) * bw;
        *groups.entry(q.norm()).or_insert(0) += 2 * euler_phi(&q)? as u128;
    }
    let entries = groups
        .into_iter()
        .map(|(norm, numerator)| OrthoEntry { norm, length: (norm as f64).ln(), numerator })
        .collect();
    Ok(OrthoSpectrum { entries, unit_count: field.unit_count(), horizon: n })
}

/// Atoms at `ℓ' − ℓ`, keyed by `n'/n`, of mass `ω(ℓ)ω(ℓ')`, diagonal
/// included; masses are over `unit_count²`.
pub fn ortho_pair_measure(spectrum: &OrthoSpectrum) -> AtomMeasure1D {
    let u = spectrum.unit_count as u128;
    let mut out = AtomMeasure1D::new(u * u);
    for a in &spectrum.entries {
        for b in &spectrum.entries {
            out.add(Rational::new(b.norm as i128, a.norm as i128), a.numerator * b.numerator);
        }
    }
    out
}

/// Outcome of the atomwise comparison of the two sides of the identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrthoIdentityReport {
    pub equal: bool,
    pub atoms_left: usize,
    pub atoms_right: usize,
    /// Atoms whose masses differ, counting atoms missing on one side.
    pub mismatched: usize,
    pub max_abs_diff: f64,
    pub total_mass: f64,
}

/// Compares the ortholength pair measure with `(4/|𝒪_K^×|²)·(2 Re)_*` of the
/// Euler-weighted pair measure of `𝔟`, diagonal included.
pub fn verify_ortho_identity(b: &AlgInt, n: u64) -> Result<OrthoIdentityReport> {
    let left = ortho_pair_measure(&ortho_spectrum(b, n)?);
    let set = build_logset(&Source::ideal(*b), n, WeightKind::EulerPhi)?;
    let pushed = pushforward_2re(&set, true);
    let u = b.field().unit_count() as u128;
    let mut right = AtomMeasure1D::new(u * u);
    for (k, m) in &pushed.atoms {
        right.add(*k, 4 * m);
    }
    let (mut mismatched, mut max_abs_diff) = (0usize, 0.0f64);
    let keys: std::collections::BTreeSet<&Rational> = left.atoms.keys().chain(right.atoms.keys()).collect();
    for k in keys {
        let l = left.atoms.get(k).copied().unwrap_or(0);
        let r = right.atoms.get(k).copied().unwrap_or(0);
        if l != r {
            mismatched += 1;
            max_abs_diff = max_abs_diff.max(l.abs_diff(r) as f64 / (u * u) as f64);
        }
    }
    Ok(OrthoIdentityReport {
        equal: left.same_measure(&right),
        atoms_left: left.atoms.len(),
        atoms_right: right.atoms.len(),
        mismatched,
        max_abs_diff,
        total_mass: left.total_mass(),
    })
}
