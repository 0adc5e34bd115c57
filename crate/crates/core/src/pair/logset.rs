use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{Grid, Rational};
use crate::quadratic::{euler_phi, AlgInt, Field};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WeightKind {
    Unit,
    EulerPhi,
}

/// Where the points come from.
#[derive(Clone, Debug)]
pub enum Source {
    Grid(Grid),
    /// The ideal `generator·𝒪_K`.
    Ideal { field: Field, generator: AlgInt },
}

impl Source {
    pub fn ideal(generator: AlgInt) -> Source {
        Source::Ideal { field: generator.field(), generator }
    }

    pub fn grid(&self) -> Result<Grid> {
        match self {
            Source::Grid(g) => Ok(g.clone()),
            Source::Ideal { field, generator } => field.ideal_grid(generator),
        }
    }
}

/// A nonzero source point with its logarithm `(ln|z|, arg z)` and weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogEntry {
    /// Coefficients in the reduced basis of the source grid.
    pub i: i64,
    pub j: i64,
    pub point: Option<AlgInt>,
    pub norm: Rational,
    pub re: f64,
    /// In `(−π, π]`.
    pub im: f64,
    pub weight: u64,
}

/// The weighted family `{log z : 0 < |z| <= N}`.
#[derive(Clone, Debug)]
pub struct WeightedLogSet {
    entries: Vec<LogEntry>,
    horizon: u64,
    weight_kind: WeightKind,
    grid: Grid,
    field: Option<Field>,
}

impl WeightedLogSet {
    pub fn entries(&self) -> &[LogEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn weight_kind(&self) -> WeightKind {
        self.weight_kind
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn field(&self) -> Option<Field> {
        self.field
    }

    pub fn total_weight(&self) -> u128 {
        self.entries.iter().map(|e| e.weight as u128).sum()
    }

    /// `(Σω)² − Σω²`, or `(Σω)²` when the diagonal is included.
    pub fn total_raw_mass(&self, diagonal: bool) -> u128 {
        let s = self.total_weight();
        let sq: u128 = self.entries.iter().map(|e| (e.weight as u128) * (e.weight as u128)).sum();
        if diagonal {
            s * s
        } else {
            s * s - sq
        }
    }
}

/// Collects every nonzero point of modulus at most `n`, in lexicographic
/// order of reduced-basis coefficients.
pub fn build_logset(source: &Source, n: u64, weight_kind: WeightKind) -> Result<WeightedLogSet> {
    if n < 1 {
        return Err(Error::InvalidArgument("horizon N must be >= 1".into()));
    }
    let grid = source.grid()?;
    let (field, generator) = match source {
        Source::Grid(_) => {
            if weight_kind == WeightKind::EulerPhi {
                return Err(Error::WeightMismatch);
            }
            (None, None)
        }
        Source::Ideal { field, generator } => (Some(*field), Some(*generator)),
    };
    let basis_w = generator.map(|m| (m, m * m.field().omega()));
    let r_sq = Rational::from_integer((n as i128) * (n as i128));
    let mut entries = Vec::new();
    for p in grid.enumerate_disk_sq(r_sq, true) {
        let point = basis_w.map(|(m, mw)| {
            let (a, b) = grid.input_coeffs(p.i, p.j);
            let f = m.field();
            f.integer(a) * m + f.integer(b) * mw
        });
        let weight = match (weight_kind, point) {
            (WeightKind::EulerPhi, Some(z)) => euler_phi(&z)?,
            _ => 1,
        };
        let re = 0.5 * crate::grid::ratio_f64(p.norm).ln();
        let mut im = p.y.atan2(p.x);
        if im <= -PI {
            im += 2.0 * PI;
        }
        entries.push(LogEntry { i: p.i, j: p.j, point, norm: p.norm, re, im, weight });
    }
    Ok(WeightedLogSet { entries, horizon: n, weight_kind, grid, field })
}
