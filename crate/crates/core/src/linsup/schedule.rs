use crate::Scalar;

/// Reset bookkeeping: `tau` counts iterations since the last reset, `rho`
/// counts resets so far.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ScheduleState {
    pub tau: usize,
    pub rho: u32,
}

/// Step size for the next iteration given the current one.
///
/// Within a period the step shrinks by `alpha`; on the `tau_reset`-th
/// iteration it restarts at `eta0 * alpha^rho` with `rho` incremented.
pub fn step_size_schedule<T: Scalar>(
    eta: T,
    state: ScheduleState,
    eta0: T,
    alpha: T,
    tau_reset: usize,
) -> (T, ScheduleState) {
    let tau = state.tau + 1;
    if tau < tau_reset {
        (eta * alpha, ScheduleState { tau, rho: state.rho })
    } else {
        let rho = state.rho + 1;
        (eta0 * alpha.powi(rho as i32), ScheduleState { tau: 0, rho })
    }
}

/// Infinite iterator over `eta_0, eta_1, ...`.
#[derive(Debug, Clone)]
pub struct StepSizes<T> {
    eta: T,
    state: ScheduleState,
    eta0: T,
    alpha: T,
    tau_reset: usize,
}

impl<T: Scalar> StepSizes<T> {
    pub fn new(eta0: T, alpha: T, tau_reset: usize) -> Self {
        StepSizes { eta: eta0, state: ScheduleState::default(), eta0, alpha, tau_reset }
    }

    pub fn current(&self) -> T {
        self.eta
    }

    pub fn state(&self) -> ScheduleState {
        self.state
    }

    pub fn advance(&mut self) {
        let (eta, state) = step_size_schedule(self.eta, self.state, self.eta0, self.alpha, self.tau_reset);
        self.eta = eta;
        self.state = state;
    }
}

impl<T: Scalar> Iterator for StepSizes<T> {
    type Item = T;
    fn next(&mut self) -> Option<T> {
        let out = self.eta;
        self.advance();
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_period_is_geometric() {
        let etas: Vec<f64> = StepSizes::new(10.0, 0.99, 20).take(20).collect();
        for (k, eta) in etas.iter().enumerate() {
            let expect = 10.0 * 0.99f64.powi(k as i32);
            assert!((eta - expect).abs() <= 1e-13 * expect, "k={k}");
        }
    }

    #[test]
    fn first_reset() {
        let etas: Vec<f64> = StepSizes::new(10.0, 0.99, 20).take(21).collect();
        assert_eq!(etas[20], 10.0 * 0.99);
    }

    #[test]
    fn resets_are_exact_powers() {
        let mut s = StepSizes::new(10.0, 0.99, 20);
        for k in 1..=20 * 300 {
            s.advance();
            if k % 20 == 0 {
                let rho = k / 20;
                assert_eq!(s.state().rho, rho as u32);
                assert_eq!(s.current(), 10.0 * 0.99f64.powi(rho));
            }
            assert!(s.current() <= 10.0);
        }
        assert!(s.current() < 10.0 * 0.99f64.powi(299));
    }

    #[test]
    fn reset_every_iteration() {
        let etas: Vec<f64> = StepSizes::new(2.0, 0.5, 1).take(4).collect();
        assert_eq!(etas, vec![2.0, 1.0, 0.5, 0.25]);
    }
}
