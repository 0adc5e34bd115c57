//! Pair correlations of complex logarithms of planar lattice points.

pub mod error;
pub mod grid;
pub mod ortho;
pub mod pair;
pub mod quadratic;
pub mod sums;

pub use error::{Error, Result};
pub use grid::{make_grid, Grid, GridBasis, GridPoint, PlanarVector, Rational, Sector};
pub use ortho::{ortho_pair_measure, ortho_spectrum, verify_ortho_identity, OrthoSpectrum, OrthoIdentityReport};
pub use pair::{
    build_logset, compare, empirical_auto, empirical_naive, empirical_windowed, AtomMeasure1D, Density2D, ErrorReport,
    Hist1D, Hist2D, HistGeometry, PairConfig, Quadrature, RenormSpec, ScalingSpec, Source, WeightKind, WeightedLogSet,
};
pub use quadratic::{AlgInt, Field};
pub use sums::SumReport;
