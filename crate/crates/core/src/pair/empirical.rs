//! Enumeration of ordered pairs `(x, y)` and deposit of `ω(x)ω(y)` at
//! `ψ(N)·(log y − log x)`.
//!
//! Two strategies share [`pair_location`], so they produce bit-identical
//! atoms: the naive double loop over all pairs, and a windowed loop that
//! visits only pairs `(q, q + p)` with `|p| <= |q|·(e^{R/ψ} − 1)`, where `R`
//! is the circumradius of the window. Any pair landing in the window
//! satisfies that bound since `|e^w − 1| <= e^{|w|} − 1`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ops::Range;

use rayon::prelude::*;

use super::hist::{AtomMeasure1D, Binner, Hist2D, HistGeometry, PolarBinner, RectBinner};
use super::logset::WeightedLogSet;
use super::scaling::{RenormSpec, ScalingSpec};
use crate::error::{Error, Result};
use crate::grid::Rational;

/// Everything that defines an empirical pair histogram besides the point set.
#[derive(Clone, Debug)]
pub struct PairConfig {
    pub scaling: ScalingSpec,
    pub renorm: RenormSpec,
    pub geometry: HistGeometry,
    pub diagonal: bool,
    /// Worker threads; 0 uses the global rayon pool.
    pub workers: usize,
}

/// One ordered pair that lands in the window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairAtom {
    pub from: usize,
    pub to: usize,
    pub re: f64,
    pub im: f64,
    pub bin: usize,
    pub mass: u128,
}

/// `ψ·(log y − log x)` with the angular difference wrapped into `[−π, π)`.
#[inline(always)]
pub fn pair_location(re_x: f64, im_x: f64, re_y: f64, im_y: f64, psi: f64) -> (f64, f64) {
    let mut d = im_y - im_x;
    if d >= PI {
        d -= 2.0 * PI;
    } else if d < -PI {
        d += 2.0 * PI;
    }
    (psi * (re_y - re_x), psi * d)
}

/// Struct-of-arrays view of a log set for the hot loops.
struct Columns {
    re: Vec<f64>,
    im: Vec<f64>,
    w: Vec<u64>,
}

impl Columns {
    fn new(set: &WeightedLogSet) -> Self {
        let e = set.entries();
        Columns {
            re: e.iter().map(|x| x.re).collect(),
            im: e.iter().map(|x| x.im).collect(),
            w: e.iter().map(|x| x.weight).collect(),
        }
    }
}

/// Dense lookup from reduced-basis coefficients to entry index.
struct CoeffIndex {
    imin: i64,
    jmin: i64,
    width: i64,
    height: i64,
    slots: Vec<u32>,
}

impl CoeffIndex {
    const EMPTY: u32 = u32::MAX;

    fn new(set: &WeightedLogSet) -> Self {
        let e = set.entries();
        let imin = e.iter().map(|x| x.i).min().unwrap_or(0);
        let imax = e.iter().map(|x| x.i).max().unwrap_or(0);
        let jmin = e.iter().map(|x| x.j).min().unwrap_or(0);
        let jmax = e.iter().map(|x| x.j).max().unwrap_or(0);
        let (width, height) = (imax - imin + 1, jmax - jmin + 1);
        let mut slots = vec![Self::EMPTY; (width * height) as usize];
        for (k, x) in e.iter().enumerate() {
            slots[((x.i - imin) * height + (x.j - jmin)) as usize] = k as u32;
        }
        CoeffIndex { imin, jmin, width, height, slots }
    }

    #[inline(always)]
    fn get(&self, i: i64, j: i64) -> Option<usize> {
        let (a, b) = (i - self.imin, j - self.jmin);
        if a < 0 || b < 0 || a >= self.width || b >= self.height {
            return None;
        }
        let s = self.slots[(a * self.height + b) as usize];
        (s != Self::EMPTY).then_some(s as usize)
    }
}

fn check_window(geometry: &HistGeometry, psi: f64) -> Result<()> {
    geometry.validate()?;
    match *geometry {
        HistGeometry::Cylinder { scale, .. } => {
            if (scale - psi).abs() > 1e-12 * psi {
                return Err(Error::GeometryMismatch(format!(
                    "cylinder strip has scale {scale} but psi(N) = {psi}"
                )));
            }
        }
        HistGeometry::Plane { half_width: a, .. } | HistGeometry::Polar { radius: a, .. } => {
            if a > PI * psi {
                return Err(Error::WindowTooLarge { window: a, limit: PI * psi });
            }
        }
    }
    Ok(())
}

fn chunks(n: usize, workers: usize) -> Vec<Range<usize>> {
    let parts = (workers.max(1) * 16).min(n.max(1));
    let size = n.div_ceil(parts).max(1);
    (0..n).step_by(size).map(|s| s..(s + size).min(n)).collect()
}

/// Runs `body` over a partition of `0..n` and sums the per-part histograms.
/// Integer sums make the result independent of the partition.
fn partitioned<F>(n: usize, nbins: usize, workers: usize, body: F) -> Result<Vec<u128>>
where
    F: Fn(Range<usize>, &mut [u128]) + Sync,
{
    let parts = chunks(n, workers);
    let run = || {
        parts
            .par_iter()
            .map(|r| {
                let mut raw = vec![0u128; nbins];
                body(r.clone(), &mut raw);
                raw
            })
            .reduce(
                || vec![0u128; nbins],
                |mut a, b| {
                    a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    };
    if workers == 1 {
        let mut raw = vec![0u128; nbins];
        for r in parts {
            body(r, &mut raw);
        }
        return Ok(raw);
    }
    if workers == 0 {
        return Ok(run());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    Ok(pool.install(run))
}

fn naive_rows<B: Binner>(
    c: &Columns,
    rows: Range<usize>,
    psi: f64,
    binner: &B,
    diagonal: bool,
    raw: &mut [u128],
) {
    let n = c.re.len();
    for x in rows {
        let (rx, ix, wx) = (c.re[x], c.im[x], c.w[x] as u128);
        let mut visit = |y: usize| {
            let (a, b) = pair_location(rx, ix, c.re[y], c.im[y], psi);
            if let Some(bin) = binner.bin(a, b) {
                raw[bin] += wx * c.w[y] as u128;
            }
        };
        for y in 0..x {
            visit(y);
        }
        if diagonal {
            visit(x);
        }
        for y in x + 1..n {
            visit(y);
        }
    }
}

/// Offsets `p ≠ 0` of the lattice with `|p| <= bound`, sorted by `|p|`.
fn sorted_offsets(set: &WeightedLogSet, bound: f64) -> Vec<(i64, i64, f64)> {
    let mut offs = set.grid().lattice_vectors(bound);
    offs.sort_by(|a, b| a.2.total_cmp(&b.2).then((a.0, a.1).cmp(&(b.0, b.1))));
    offs
}

/// Growth factor `e^{R/ψ} − 1` bounding `|p| / |q|` for window pairs.
fn ratio_bound(geometry: &HistGeometry, psi: f64) -> f64 {
    (geometry.circumradius() / psi).exp_m1() * (1.0 + 1e-9)
}

struct Windowed<'a> {
    set: &'a WeightedLogSet,
    cols: Columns,
    index: CoeffIndex,
    offsets: Vec<(i64, i64, f64)>,
    ratio_sq: f64,
    norms: Vec<f64>,
}

impl<'a> Windowed<'a> {
    fn new(set: &'a WeightedLogSet, geometry: &HistGeometry, psi: f64) -> Self {
        let f = ratio_bound(geometry, psi);
        let n = set.horizon() as f64;
        let reach = (n * f).min(2.0 * n);
        Windowed {
            set,
            cols: Columns::new(set),
            index: CoeffIndex::new(set),
            offsets: sorted_offsets(set, reach),
            ratio_sq: f * f,
            norms: set.entries().iter().map(|e| crate::grid::ratio_f64(e.norm)).collect(),
        }
    }

    /// Calls `visit(q, m)` for every candidate pair with outer point `q`.
    #[inline(always)]
    fn for_each_partner<F: FnMut(usize)>(&self, q: usize, diagonal: bool, mut visit: F) {
        let e = &self.set.entries()[q];
        if diagonal {
            visit(q);
        }
        let limit = self.norms[q] * self.ratio_sq;
        for &(di, dj, pn) in &self.offsets {
            if pn > limit {
                break;
            }
            if let Some(m) = self.index.get(e.i + di, e.j + dj) {
                visit(m);
            }
        }
    }

    fn rows<B: Binner>(&self, rows: Range<usize>, psi: f64, binner: &B, diagonal: bool, raw: &mut [u128]) {
        let c = &self.cols;
        for q in rows {
            let (rq, iq, wq) = (c.re[q], c.im[q], c.w[q] as u128);
            self.for_each_partner(q, diagonal, |m| {
                let (a, b) = pair_location(rq, iq, c.re[m], c.im[m], psi);
                if let Some(bin) = binner.bin(a, b) {
                    raw[bin] += wq * c.w[m] as u128;
                }
            });
        }
    }
}

fn finish(set: &WeightedLogSet, cfg: &PairConfig, psi: f64, raw: Vec<u128>) -> Result<Hist2D> {
    let total = set.total_raw_mass(cfg.diagonal);
    let renorm = cfg.renorm.divisor(set.horizon(), psi, total)?;
    Ok(Hist2D::from_parts(cfg.geometry, raw, total, renorm, cfg.diagonal))
}

/// All ordered pairs, `O(M²)` for `M` points.
pub fn empirical_naive(set: &WeightedLogSet, cfg: &PairConfig) -> Result<Hist2D> {
    let psi = cfg.scaling.psi(set.horizon())?;
    check_window(&cfg.geometry, psi)?;
    let cols = Columns::new(set);
    let nbins = cfg.geometry.len();
    let raw = match cfg.geometry {
        HistGeometry::Plane { half_width, bins_re, bins_im } => {
            let b = RectBinner::new(half_width, half_width, bins_re, bins_im, false);
            partitioned(set.len(), nbins, cfg.workers, |r, raw| naive_rows(&cols, r, psi, &b, cfg.diagonal, raw))?
        }
        HistGeometry::Cylinder { half_width, scale, bins_re, bins_im } => {
            let b = RectBinner::new(half_width, PI * scale, bins_re, bins_im, true);
            partitioned(set.len(), nbins, cfg.workers, |r, raw| naive_rows(&cols, r, psi, &b, cfg.diagonal, raw))?
        }
        HistGeometry::Polar { radius, bins_r, bins_theta } => {
            let b = PolarBinner::new(radius, bins_r, bins_theta);
            partitioned(set.len(), nbins, cfg.workers, |r, raw| naive_rows(&cols, r, psi, &b, cfg.diagonal, raw))?
        }
    };
    finish(set, cfg, psi, raw)
}

/// Pairs near the diagonal only: for each `q`, offsets `p` with
/// `|p| <= |q|(e^{R/ψ} − 1)`. Same output as [`empirical_naive`] on plane and
/// polar windows.
pub fn empirical_windowed(set: &WeightedLogSet, cfg: &PairConfig) -> Result<Hist2D> {
    let psi = cfg.scaling.psi(set.horizon())?;
    check_window(&cfg.geometry, psi)?;
    let nbins = cfg.geometry.len();
    let w = Windowed::new(set, &cfg.geometry, psi);
    let raw = match cfg.geometry {
        HistGeometry::Plane { half_width, bins_re, bins_im } => {
            let b = RectBinner::new(half_width, half_width, bins_re, bins_im, false);
            partitioned(set.len(), nbins, cfg.workers, |r, raw| w.rows(r, psi, &b, cfg.diagonal, raw))?
        }
        HistGeometry::Polar { radius, bins_r, bins_theta } => {
            let b = PolarBinner::new(radius, bins_r, bins_theta);
            partitioned(set.len(), nbins, cfg.workers, |r, raw| w.rows(r, psi, &b, cfg.diagonal, raw))?
        }
        HistGeometry::Cylinder { .. } => {
            return Err(Error::GeometryMismatch("windowed enumeration needs a plane or polar window".into()))
        }
    };
    finish(set, cfg, psi, raw)
}

/// Picks the windowed strategy when the window is small relative to `ψ`.
pub fn empirical_auto(set: &WeightedLogSet, cfg: &PairConfig) -> Result<Hist2D> {
    let psi = cfg.scaling.psi(set.horizon())?;
    let windowed_ok = !matches!(cfg.geometry, HistGeometry::Cylinder { .. });
    if windowed_ok && ratio_bound(&cfg.geometry, psi) < 1.0 {
        empirical_windowed(set, cfg)
    } else {
        empirical_naive(set, cfg)
    }
}

fn atom(set_cols: &Columns, x: usize, y: usize, psi: f64, geometry: &HistGeometry) -> Option<PairAtom> {
    let (re, im) = pair_location(set_cols.re[x], set_cols.im[x], set_cols.re[y], set_cols.im[y], psi);
    geometry.bin(re, im).map(|bin| PairAtom {
        from: x,
        to: y,
        re,
        im,
        bin,
        mass: set_cols.w[x] as u128 * set_cols.w[y] as u128,
    })
}

/// Every in-window pair of the naive enumeration, ordered by `(from, to)`.
pub fn atoms_naive(set: &WeightedLogSet, cfg: &PairConfig) -> Result<Vec<PairAtom>> {
    let psi = cfg.scaling.psi(set.horizon())?;
    check_window(&cfg.geometry, psi)?;
    let c = Columns::new(set);
    let mut out = Vec::new();
    for x in 0..set.len() {
        for y in 0..set.len() {
            if x == y && !cfg.diagonal {
                continue;
            }
            out.extend(atom(&c, x, y, psi, &cfg.geometry));
        }
    }
    Ok(out)
}

/// Every in-window pair of the windowed enumeration, ordered by `(from, to)`.
pub fn atoms_windowed(set: &WeightedLogSet, cfg: &PairConfig) -> Result<Vec<PairAtom>> {
    let psi = cfg.scaling.psi(set.horizon())?;
    check_window(&cfg.geometry, psi)?;
    if matches!(cfg.geometry, HistGeometry::Cylinder { .. }) {
        return Err(Error::GeometryMismatch("windowed enumeration needs a plane or polar window".into()));
    }
    let w = Windowed::new(set, &cfg.geometry, psi);
    let mut out = Vec::new();
    for q in 0..set.len() {
        w.for_each_partner(q, cfg.diagonal, |m| out.extend(atom(&w.cols, q, m, psi, &cfg.geometry)));
    }
    out.sort_by_key(|a| (a.from, a.to));
    Ok(out)
}

/// Push-forward of the unscaled pair measure under `z ↦ 2 Re z`, kept exact:
/// an atom at `N(y)/N(x)` carrying `Σ ω(x)ω(y)`, with mass denominator 1.
pub fn pushforward_2re(set: &WeightedLogSet, diagonal: bool) -> AtomMeasure1D {
    let mut by_norm: BTreeMap<Rational, (u128, u128)> = BTreeMap::new();
    for e in set.entries() {
        let w = e.weight as u128;
        let slot = by_norm.entry(e.norm).or_insert((0, 0));
        slot.0 += w;
        slot.1 += w * w;
    }
    let mut out = AtomMeasure1D::new(1);
    for (nx, &(wx, sx)) in &by_norm {
        for (ny, &(wy, _)) in &by_norm {
            let mut m = wx * wy;
            if nx == ny && !diagonal {
                m -= sx;
            }
            out.add(ny / nx, m);
        }
    }
    out
}
