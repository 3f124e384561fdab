use crate::Scalar;

/// Lower bound `mu^3 (mu + 2) / (mu + 1)^4` on the supermodularity ratio of
/// the shifted A-optimal set function.
pub fn supermodularity_bound<T: Scalar>(mu: T) -> T {
    let one = T::one();
    mu * mu * mu * (mu + T::lit(2.0)) / (mu + one).powi(4)
}

/// Greedy sub-optimality factor `exp(-alpha)`.
pub fn greedy_guarantee<T: Scalar>(mu: T) -> T {
    (-supermodularity_bound(mu)).exp()
}
