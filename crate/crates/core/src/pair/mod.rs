//! Empirical and limiting pair correlations of logarithms of grid points.

mod compare;
mod density;
mod empirical;
mod hist;
mod logset;
mod scaling;

pub use compare::{bin_integrals, compare, compare_1d, compare_masses, radial_profile, ErrorReport, Quadrature, RadialBin};
pub use density::{
    density_poissonian, density_real, density_theta_infty, density_unscaled, density_weighted_linear, Constant,
    Density2D, RealMode, ThetaInfty, Unscaled, UnscaledMode, WeightedLinear,
};
pub use empirical::{
    atoms_naive, atoms_windowed, empirical_auto, empirical_naive, empirical_windowed, pair_location, pushforward_2re,
    PairAtom, PairConfig,
};
pub use hist::{AtomMeasure1D, BinBounds, Hist1D, Hist2D, HistGeometry};
pub use logset::{build_logset, LogEntry, Source, WeightKind, WeightedLogSet};
pub use scaling::{Regime, RenormSpec, ScalingSpec};
