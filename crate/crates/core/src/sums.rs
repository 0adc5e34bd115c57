//! Brute-force arithmetic sums over quadratic integers and their leading terms.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{Grid, GridPoint, PlanarVector, Rational, Sector};
use crate::pair::AtomMeasure1D;
use crate::quadratic::{
    euler_phi, factor, mertens_constant_c_m, mirsky_constant_c_mk, cubic_ideal_constant, zeta_k_2, AlgInt, Field,
};

/// A brute-force value next to its predicted leading term.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumReport {
    /// Exact integer value of the sum.
    pub exact: u128,
    pub brute: f64,
    pub predicted: f64,
    /// `brute / predicted`, or NaN when the prediction vanishes.
    pub ratio: f64,
    pub inputs: BTreeMap<String, String>,
}

impl SumReport {
    fn new(exact: u128, predicted: f64, inputs: &[(&str, String)]) -> Self {
        let brute = exact as f64;
        let ratio = if predicted != 0.0 { brute / predicted } else { f64::NAN };
        let inputs = inputs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        SumReport { exact, brute, predicted, ratio, inputs }
    }
}

fn check_x(x: f64) -> Result<()> {
    if x >= 1.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("x must be >= 1, got {x}")))
    }
}

/// Elements of `m𝒪_K` inside the sector, which lives in the field's plane.
fn ideal_points_in_sector(m: &AlgInt, sector: &Sector) -> Result<Vec<AlgInt>> {
    let field = m.field();
    let g = field.ideal_grid(m)?;
    let mw = *m * field.omega();
    let to_elem = |p: &GridPoint| {
        let (a, b) = g.input_coeffs(p.i, p.j);
        field.integer(a) * *m + field.integer(b) * mw
    };
    Ok(g.enumerate_sector(sector).iter().map(to_elem).collect())
}

fn sector_inputs(field: Field, m: &AlgInt, sector: &Sector) -> Vec<(&'static str, String)> {
    let (zx, zy) = sector.direction.to_f64(field.plane_scale());
    vec![
        ("field", field.disc().to_string()),
        ("m", m.to_string()),
        ("direction", format!("{zx},{zy}")),
        ("aperture", sector.aperture.to_string()),
        ("x", sector.radius.to_string()),
    ]
}

/// `Σ_{a ∈ 𝔪 ∩ C(z, θ, x)} φ_K(a)` against `θ x⁴ / (2 √|D| ζ_K(2) c_𝔪)`.
pub fn mertens_sum(m: &AlgInt, sector: &Sector) -> Result<SumReport> {
    if m.is_zero() {
        return Err(Error::ZeroElement);
    }
    check_x(sector.radius)?;
    let field = m.field();
    let mut exact = 0u128;
    for a in ideal_points_in_sector(m, sector)? {
        exact += euler_phi(&a)? as u128;
    }
    let theta = sector.aperture.min(2.0 * PI);
    let x4 = sector.radius.powi(4);
    let predicted = theta * x4 / (2.0 * field.sqrt_abs_disc() * zeta_k_2(field, 1e-12)? * mertens_constant_c_m(m)?);
    Ok(SumReport::new(exact, predicted, &sector_inputs(field, m, sector)))
}

/// `Σ_{a ∈ 𝔪 ∩ C(z, θ, x)} φ_K(a) φ_K(a + k)` against `θ c_{𝔪,k} x⁶ / (3 √|D|)`.
/// A term with `a + k = 0` is dropped.
pub fn mirsky_sum(m: &AlgInt, k: &AlgInt, sector: &Sector, prime_bound: u64) -> Result<SumReport> {
    if m.is_zero() {
        return Err(Error::ZeroElement);
    }
    if m.field() != k.field() {
        return Err(Error::FieldMismatch);
    }
    check_x(sector.radius)?;
    let field = m.field();
    let c = mirsky_constant_c_mk(m, k, prime_bound)?;
    let mut exact = 0u128;
    for a in ideal_points_in_sector(m, sector)? {
        let b = a + *k;
        if b.is_zero() {
            continue;
        }
        exact += euler_phi(&a)? as u128 * euler_phi(&b)? as u128;
    }
    let theta = sector.aperture.min(2.0 * PI);
    let predicted = theta * c.value * sector.radius.powi(6) / (3.0 * field.sqrt_abs_disc());
    let mut inputs = sector_inputs(field, m, sector);
    inputs.push(("k", k.to_string()));
    inputs.push(("prime_bound", prime_bound.to_string()));
    Ok(SumReport::new(exact, predicted, &inputs))
}

/// Atoms `Σ r_{2,d}(m) r_{2,d}(n) Δ_{m/n}` for `0 < m, n <= N²`, where
/// `r_{2,d}(n)` counts integer solutions of `x² + d y² = n`.
pub fn r2d_pair_measure(d: u64, n: u64) -> Result<AtomMeasure1D> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidArgument("d and N must be positive".into()));
    }
    let bound = (n as u128) * (n as u128);
    let mut r: BTreeMap<u128, u128> = BTreeMap::new();
    let ymax = ((bound / d as u128) as f64).sqrt() as i128 + 1;
    for y in -ymax..=ymax {
        let dy2 = d as u128 * (y * y) as u128;
        if dy2 > bound {
            continue;
        }
        let xmax = ((bound - dy2) as f64).sqrt() as i128 + 1;
        for x in -xmax..=xmax {
            let v = (x * x) as u128 + dy2;
            if v > 0 && v <= bound {
                *r.entry(v).or_insert(0) += 1;
            }
        }
    }
    let mut out = AtomMeasure1D::new(1);
    for (&a, &ra) in &r {
        for (&b, &rb) in &r {
            out.add(Rational::new(b as i128, a as i128), ra * rb);
        }
    }
    Ok(out)
}

/// The lattice `ℤ + i√d ℤ`.
pub fn r2d_grid(d: u64) -> Result<Grid> {
    let scale = u32::try_from(d).map_err(|_| Error::InvalidArgument(format!("d = {d} too large")))?;
    Grid::new(PlanarVector::from_ints(1, 0), PlanarVector::from_ints(0, 1), PlanarVector::zero(), scale)
}

/// Nonzero elements of `𝒪_K` with norm at most `y`.
fn elements_up_to_norm(field: Field, y: f64) -> Vec<AlgInt> {
    let g = field.grid();
    let r_sq = Rational::from_integer(y.floor() as i128);
    g.enumerate_disk_sq(r_sq, true)
        .iter()
        .map(|p| {
            let (a, b) = g.input_coeffs(p.i, p.j);
            field.element(a, b)
        })
        .collect()
}

/// `#{𝔞 : N(𝔞) <= y}` against `2π y / (|𝒪_K^×| √|D|)`.
pub fn ideal_count(field: Field, y: f64) -> Result<SumReport> {
    check_x(y)?;
    let elements = elements_up_to_norm(field, y).len();
    let u = field.unit_count();
    debug_assert_eq!(elements % u, 0);
    let exact = (elements / u) as u128;
    let predicted = 2.0 * PI * y / (u as f64 * field.sqrt_abs_disc());
    Ok(SumReport::new(exact, predicted, &[("field", field.disc().to_string()), ("y", y.to_string())]))
}

/// `Σ_{N(𝔞) <= x} N(𝔞)³ f(𝔞)` with `f(𝔞) = ∏_{𝔭|𝔞} (1 + 1/(N𝔭(N𝔭² − 2)))`,
/// against `(C₁/4) x⁴`. The sum is rational; `exact` holds its floor.
pub fn cubic_ideal_sum(field: Field, x: f64, prime_bound: u64) -> Result<SumReport> {
    check_x(x)?;
    let c1 = cubic_ideal_constant(field, prime_bound)?;
    let mut total = 0.0f64;
    let mut reps: Vec<AlgInt> = elements_up_to_norm(field, x).into_iter().filter(|a| *a == a.normalized()).collect();
    reps.sort_by_key(|a| (a.norm(), a.x, a.y));
    for a in &reps {
        let n = a.norm() as f64;
        total += n * n * n * local_f(a)?;
    }
    let predicted = c1.value / 4.0 * x.powi(4);
    let mut r = SumReport::new(total.floor() as u128, predicted, &[
        ("field", field.disc().to_string()),
        ("x", x.to_string()),
        ("prime_bound", prime_bound.to_string()),
    ]);
    r.brute = total;
    r.ratio = total / predicted;
    Ok(r)
}

/// `f(𝔞) = ∏_{𝔭|𝔞} (1 + 1/(N𝔭(N𝔭² − 2)))`.
pub fn local_f(a: &AlgInt) -> Result<f64> {
    Ok(factor(a)?.prime_norms().map(|(n, _)| 1.0 + 1.0 / (n as f64 * ((n * n) as f64 - 2.0))).product())
}
