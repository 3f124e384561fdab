use crate::reconstruction::select_beta;
use crate::spectral::LowPassFilter;
use crate::{Error, Result, Scalar};

/// How the sampling shift `mu` is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShiftPolicy<T> {
    /// Smallest shift keeping `cond(G_S) <= kappa0`: `mu = 1 / (kappa0 - 1)`.
    ConditionNumber(T),
    Fixed(T),
    /// The reconstruction shift from the smallest filter diagonals.
    DiagonalAverage,
}

pub fn resolve_mu<T: Scalar>(
    policy: ShiftPolicy<T>,
    filter: &LowPassFilter<T>,
    budget: usize,
) -> Result<T> {
    let mu = match policy {
        ShiftPolicy::ConditionNumber(kappa0) => T::one() / (kappa0 - T::one()),
        ShiftPolicy::Fixed(mu) => mu,
        ShiftPolicy::DiagonalAverage => select_beta(filter, budget)?,
    };
    if mu > T::zero() && mu < T::one() {
        Ok(mu)
    } else {
        Err(Error::InvalidShift(mu.as_f64()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::BasisKind;
    use nalgebra::DMatrix;

    fn filter() -> LowPassFilter<f64> {
        LowPassFilter {
            matrix: DMatrix::from_element(2, 2, 0.5),
            bandwidth: 1,
            source: BasisKind::Exact,
        }
    }

    #[test]
    fn condition_number_policy() {
        let mu = resolve_mu(ShiftPolicy::ConditionNumber(100.0), &filter(), 1).unwrap();
        assert_eq!(mu, 1.0 / 99.0);
        assert!(matches!(
            resolve_mu(ShiftPolicy::ConditionNumber(2.0), &filter(), 1),
            Err(Error::InvalidShift(_))
        ));
    }

    #[test]
    fn fixed_policy() {
        assert_eq!(resolve_mu(ShiftPolicy::Fixed(1e-5), &filter(), 1).unwrap(), 1e-5);
        assert!(resolve_mu(ShiftPolicy::Fixed(0.0), &filter(), 1).is_err());
        assert!(resolve_mu(ShiftPolicy::Fixed(1.0), &filter(), 1).is_err());
    }

    #[test]
    fn diagonal_average_policy() {
        let mu = resolve_mu(ShiftPolicy::DiagonalAverage, &filter(), 1).unwrap();
        assert_eq!(mu, 0.5);
    }
}
