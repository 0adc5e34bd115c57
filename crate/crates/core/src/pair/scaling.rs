use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

/// Behaviour of `N / ψ(N)` as `N → ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Regime {
    /// `ψ = 1`: pair differences live on the fixed cylinder.
    Unscaled,
    /// `ψ(N) = o(N)`: Poissonian limit.
    Zero,
    /// `ψ(N) ~ N / λ`.
    Finite(f64),
    /// `N = o(ψ(N))`: all mass escapes.
    Infinite,
}

/// The scaling function `ψ`.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalingSpec {
    ConstantOne,
    /// `ψ(N) = N^α`.
    Power(f64),
    /// `ψ(N) = N / ln N`.
    NOverLog,
    Custom { table: BTreeMap<u64, f64>, regime: Regime },
}

impl ScalingSpec {
    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!("power exponent must be >= 0, got {alpha}")));
        }
        Ok(ScalingSpec::Power(alpha))
    }

    pub fn psi(&self, n: u64) -> Result<f64> {
        let v = match self {
            ScalingSpec::ConstantOne => 1.0,
            ScalingSpec::Power(a) if *a == 1.0 => n as f64,
            ScalingSpec::Power(a) if *a == 0.5 => (n as f64).sqrt(),
            ScalingSpec::Power(a) => (n as f64).powf(*a),
            ScalingSpec::NOverLog => {
                if n < 2 {
                    return Err(Error::InvalidArgument("N / ln N needs N >= 2".into()));
                }
                n as f64 / (n as f64).ln()
            }
            ScalingSpec::Custom { table, .. } => *table
                .get(&n)
                .ok_or_else(|| Error::InvalidArgument(format!("no custom scaling value for N = {n}")))?,
        };
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidArgument(format!("psi({n}) = {v} is not positive")));
        }
        Ok(v)
    }

    pub fn regime(&self) -> Regime {
        match self {
            ScalingSpec::ConstantOne => Regime::Unscaled,
            ScalingSpec::Power(a) if *a == 0.0 => Regime::Unscaled,
            ScalingSpec::Power(a) if *a < 1.0 => Regime::Zero,
            ScalingSpec::Power(a) if *a == 1.0 => Regime::Finite(1.0),
            ScalingSpec::Power(_) => Regime::Infinite,
            ScalingSpec::NOverLog => Regime::Zero,
            ScalingSpec::Custom { regime, .. } => *regime,
        }
    }

    pub fn is_scaled(&self) -> bool {
        self.regime() != Regime::Unscaled
    }
}

/// The divisor applied to raw pair masses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RenormSpec {
    /// Total raw mass of all pairs, in or out of the window.
    Probability,
    ByPsi,
    ByN4OverPsi2,
    ByPsi2,
    ByN6,
    Explicit(f64),
}

impl RenormSpec {
    pub fn divisor(&self, n: u64, psi: f64, total_raw_mass: u128) -> Result<f64> {
        let nf = n as f64;
        let d = match self {
            RenormSpec::Probability => {
                if total_raw_mass == 0 {
                    1.0
                } else {
                    total_raw_mass as f64
                }
            }
            RenormSpec::ByPsi => psi,
            RenormSpec::ByN4OverPsi2 => nf.powi(4) / (psi * psi),
            RenormSpec::ByPsi2 => psi * psi,
            RenormSpec::ByN6 => nf.powi(6),
            RenormSpec::Explicit(v) => *v,
        };
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::InvalidArgument(format!("renormalizer {d} is not positive")));
        }
        Ok(d)
    }

    /// The divisor under which the empirical measure converges in `regime`.
    pub fn natural_for(regime: Regime) -> RenormSpec {
        match regime {
            Regime::Unscaled => RenormSpec::Probability,
            Regime::Zero => RenormSpec::ByN4OverPsi2,
            Regime::Finite(_) => RenormSpec::ByPsi2,
            Regime::Infinite => RenormSpec::ByPsi,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regimes() {
        assert_eq!(ScalingSpec::ConstantOne.regime(), Regime::Unscaled);
        assert_eq!(ScalingSpec::Power(0.5).regime(), Regime::Zero);
        assert_eq!(ScalingSpec::Power(1.0).regime(), Regime::Finite(1.0));
        assert_eq!(ScalingSpec::Power(1.5).regime(), Regime::Infinite);
        assert_eq!(ScalingSpec::NOverLog.regime(), Regime::Zero);
        assert!(ScalingSpec::power(-1.0).is_err());
    }

    #[test]
    fn psi_values() {
        assert_eq!(ScalingSpec::Power(1.0).psi(60).unwrap(), 60.0);
        assert_eq!(ScalingSpec::Power(0.5).psi(144).unwrap(), 12.0);
        assert!((ScalingSpec::NOverLog.psi(100).unwrap() - 100.0 / 100f64.ln()).abs() < 1e-12);
        assert!(ScalingSpec::NOverLog.psi(1).is_err());
        let custom = ScalingSpec::Custom { table: BTreeMap::from([(10, 3.0)]), regime: Regime::Zero };
        assert_eq!(custom.psi(10).unwrap(), 3.0);
        assert!(custom.psi(11).is_err());
    }

    #[test]
    fn divisors() {
        assert_eq!(RenormSpec::ByN4OverPsi2.divisor(150, 150f64.sqrt(), 0).unwrap().round(), 3_375_000.0);
        assert_eq!(RenormSpec::ByPsi2.divisor(60, 60.0, 0).unwrap(), 3600.0);
        assert_eq!(RenormSpec::Probability.divisor(1, 1.0, 12).unwrap(), 12.0);
        assert!(RenormSpec::Explicit(0.0).divisor(1, 1.0, 1).is_err());
    }
}
