//! Limiting pair correlation densities.

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::quadratic::{AlgInt, Field, MirskyTable};

/// A density on the plane or cylinder, evaluated at `(re, im)`.
pub trait Density2D: Sync {
    fn eval(&self, re: f64, im: f64) -> f64;
}

impl<F: Fn(f64, f64) -> f64 + Sync> Density2D for F {
    fn eval(&self, re: f64, im: f64) -> f64 {
        self(re, im)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnscaledMode {
    /// Unit weights: `(1/2π) e^{−2|Re z|}`.
    Unit,
    /// Euler weights: `(1/π) e^{−4|Re z|}`.
    Euler,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RealMode {
    /// `½ e^{−|t|}`.
    R2d,
    /// `e^{−2|s|}`.
    Ortho,
}

pub fn density_unscaled(re: f64, _im: f64, mode: UnscaledMode) -> f64 {
    match mode {
        UnscaledMode::Unit => (-2.0 * re.abs()).exp() / (2.0 * PI),
        UnscaledMode::Euler => (-4.0 * re.abs()).exp() / PI,
    }
}

/// `π / (2 covol²)`.
pub fn density_poissonian(g: &Grid) -> f64 {
    PI / (2.0 * g.covol() * g.covol())
}

pub fn density_real(t: f64, mode: RealMode) -> f64 {
    match mode {
        RealMode::R2d => 0.5 * (-t.abs()).exp(),
        RealMode::Ortho => (-2.0 * t.abs()).exp(),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Unscaled(pub UnscaledMode);

impl Density2D for Unscaled {
    fn eval(&self, re: f64, im: f64) -> f64 {
        density_unscaled(re, im, self.0)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Constant(pub f64);

impl Density2D for Constant {
    fn eval(&self, _: f64, _: f64) -> f64 {
        self.0
    }
}

/// A radial density `S(|z|) / |z|^p` where `S(r)` is a step function
/// jumping by `w` at each `|k| = r_k`, boundaries included.
#[derive(Clone, Debug)]
struct RadialSteps {
    /// Sorted `|k|²` thresholds.
    norms: Vec<f64>,
    /// `prefix[i]` = sum of the first `i` weights.
    prefix: Vec<f64>,
    max_norm: f64,
}

impl RadialSteps {
    fn new(mut items: Vec<(f64, f64)>, max_norm: f64) -> Self {
        items.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut prefix = Vec::with_capacity(items.len() + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for &(_, w) in &items {
            acc += w;
            prefix.push(acc);
        }
        RadialSteps { norms: items.iter().map(|x| x.0).collect(), prefix, max_norm }
    }

    fn sum_up_to(&self, norm: f64) -> f64 {
        debug_assert!(norm <= self.max_norm * (1.0 + 1e-9));
        self.prefix[self.norms.partition_point(|&n| n <= norm)]
    }
}

/// `θ_∞ / covol`: zero at the origin, otherwise
/// `(1/(covol |z|⁴)) Σ_{p ∈ Λ, 0 < |p| <= |z|/λ} |p|²`.
#[derive(Clone, Debug)]
pub struct ThetaInfty {
    lambda: f64,
    covol: f64,
    steps: RadialSteps,
    max_radius: f64,
}

impl ThetaInfty {
    /// Precomputes lattice vectors for `|z| <= max_radius`.
    pub fn new(g: &Grid, lambda: f64, max_radius: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
        }
        let reach = max_radius / lambda;
        let items = g.lattice().lattice_vectors(reach).into_iter().map(|(_, _, n)| (n, n)).collect();
        Ok(ThetaInfty { lambda, covol: g.covol(), steps: RadialSteps::new(items, reach * reach), max_radius })
    }

    pub fn max_radius(&self) -> f64 {
        self.max_radius
    }

    pub fn value(&self, re: f64, im: f64) -> f64 {
        let r2 = re * re + im * im;
        if r2 == 0.0 {
            return 0.0;
        }
        let s = self.steps.sum_up_to(r2 / (self.lambda * self.lambda));
        s / (self.covol * r2 * r2)
    }
}

impl Density2D for ThetaInfty {
    fn eval(&self, re: f64, im: f64) -> f64 {
        self.value(re, im)
    }
}

pub fn density_theta_infty(g: &Grid, lambda: f64, re: f64, im: f64) -> Result<f64> {
    Ok(ThetaInfty::new(g, lambda, re.hypot(im) * (1.0 + 1e-9) + 1e-12)?.value(re, im))
}

/// The Euler-weighted linear-scaling density for the lattice `Λ = m𝒪_K`:
/// `(1/|z|⁸) Σ_{k ∈ Λ, 0 < |k| <= |z|} (2 c_{Λ,k}/√|D|) |k|⁶`.
#[derive(Clone, Debug)]
pub struct WeightedLinear {
    steps: RadialSteps,
    max_radius: f64,
}

impl WeightedLinear {
    pub fn new(m: &AlgInt, max_radius: f64, prime_bound: u64) -> Result<Self> {
        let field: Field = m.field();
        let g = field.ideal_grid(m)?;
        let table = MirskyTable::new(m, prime_bound)?;
        let mw = *m * field.omega();
        let mut memo: HashMap<AlgInt, f64> = HashMap::new();
        let mut items = Vec::new();
        let sqrt_d = field.sqrt_abs_disc();
        for (i, j, n) in g.lattice_vectors(max_radius) {
            let (a, b) = g.input_coeffs(i, j);
            let k = field.integer(a) * *m + field.integer(b) * mw;
            let key = k.normalized();
            let c = match memo.get(&key) {
                Some(&c) => c,
                None => {
                    let c = table.c(&k)?;
                    memo.insert(key, c);
                    c
                }
            };
            let k_norm = k.norm() as f64;
            debug_assert!((k_norm - n).abs() <= 1e-9 * k_norm);
            items.push((k_norm, 2.0 * c / sqrt_d * k_norm.powi(3)));
        }
        Ok(WeightedLinear { steps: RadialSteps::new(items, max_radius * max_radius), max_radius })
    }

    pub fn max_radius(&self) -> f64 {
        self.max_radius
    }

    pub fn value(&self, re: f64, im: f64) -> f64 {
        let r2 = re * re + im * im;
        if r2 == 0.0 {
            return 0.0;
        }
        self.steps.sum_up_to(r2) / (r2 * r2 * r2 * r2)
    }
}

impl Density2D for WeightedLinear {
    fn eval(&self, re: f64, im: f64) -> f64 {
        self.value(re, im)
    }
}

pub fn density_weighted_linear(m: &AlgInt, re: f64, im: f64, prime_bound: u64) -> Result<f64> {
    Ok(WeightedLinear::new(m, re.hypot(im) * (1.0 + 1e-9) + 1e-12, prime_bound)?.value(re, im))
}
