use std::time::Duration;

use crate::{Error, Result, Scalar};

/// Tunables of the superiorization loop.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperiorizationParams<T> {
    /// Feasibility and relative-change tolerance of the stopping test.
    pub epsilon: T,
    /// Geometric decay factor of the step sizes.
    pub alpha: T,
    /// Initial step size; zero turns the run into plain AMS.
    pub eta0: T,
    /// Overshoot depth of the projections.
    pub overshoot: T,
    /// Iterations between step-size resets.
    pub tau_reset: usize,
    pub max_iterations: usize,
    pub time_limit: Option<Duration>,
}

impl<T: Scalar> Default for SuperiorizationParams<T> {
    fn default() -> Self {
        SuperiorizationParams {
            epsilon: T::lit(1e-8),
            alpha: T::lit(0.99),
            eta0: T::lit(10.0),
            overshoot: T::lit(crate::feasibility::DEFAULT_OVERSHOOT),
            tau_reset: 20,
            max_iterations: 100_000,
            time_limit: None,
        }
    }
}

impl<T: Scalar> SuperiorizationParams<T> {
    /// The unperturbed baseline: same parameters with `eta0 = 0`.
    pub fn unperturbed(&self) -> Self {
        SuperiorizationParams { eta0: T::zero(), ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: T| Err(Error::invalid(format!("{what} out of range: {v}")));
        if !(self.alpha > T::zero() && self.alpha < T::one()) {
            return bad("alpha", self.alpha);
        }
        if !(self.eta0 >= T::zero()) || !self.eta0.is_finite() {
            return bad("eta0", self.eta0);
        }
        if !(self.epsilon > T::zero()) {
            return bad("epsilon", self.epsilon);
        }
        if !(self.overshoot > T::zero()) || !self.overshoot.is_finite() {
            return bad("overshoot", self.overshoot);
        }
        if self.tau_reset == 0 {
            return Err(Error::invalid("tau_reset must be at least 1"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_reference_setting() {
        let p = SuperiorizationParams::<f64>::default();
        assert_eq!((p.epsilon, p.alpha, p.eta0, p.overshoot, p.tau_reset), (1e-8, 0.99, 10.0, 1e-3, 20));
        assert_eq!(p.max_iterations, 100_000);
        assert!(p.validate().is_ok());
    }

    #[test]
    fn invalid_values() {
        let base = SuperiorizationParams::<f64>::default();
        for p in [
            SuperiorizationParams { alpha: 1.0, ..base.clone() },
            SuperiorizationParams { alpha: 0.0, ..base.clone() },
            SuperiorizationParams { eta0: -1.0, ..base.clone() },
            SuperiorizationParams { epsilon: 0.0, ..base.clone() },
            SuperiorizationParams { overshoot: 0.0, ..base.clone() },
            SuperiorizationParams { tau_reset: 0, ..base.clone() },
        ] {
            assert!(p.validate().is_err(), "{p:?}");
        }
        assert!(base.unperturbed().validate().is_ok());
    }
}
