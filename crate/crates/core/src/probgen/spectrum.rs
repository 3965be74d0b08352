use crate::{Error, Result, Scalar};

/// Default magnitude parameter: the smallest singular value is `1 / s`.
pub const DEFAULT_SCALE: f64 = 10.0;

/// Designed singular values `sigma_1 >= ... >= sigma_q = 1/s` whose ratio
/// is exactly `kappa`.
///
/// The profile decays like `1/i`:
/// `sigma_i = t / z_i + (1 - t) / s` with `z_i = s i / q` and
/// `t = (kappa - 1) / (q - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSpec<T> {
    pub kappa: T,
    pub q: usize,
    pub s: T,
    pub t: T,
    pub sigma: Vec<T>,
}

pub fn design_spectrum<T: Scalar>(kappa: T, q: usize, s: T) -> Result<SpectrumSpec<T>> {
    if !(kappa >= T::one()) || !kappa.is_finite() {
        return Err(Error::invalid(format!("kappa must be a finite value >= 1, got {kappa}")));
    }
    if q < 2 {
        return Err(Error::invalid(format!("rank q must be at least 2, got {q}")));
    }
    if !(s > T::zero()) || !s.is_finite() {
        return Err(Error::invalid(format!("scale s must be positive, got {s}")));
    }
    let qf = T::lit(q as f64);
    let t = (kappa - T::one()) / (qf - T::one());
    // Same value as t/z_i + (1-t)/s, rearranged so that i = q gives 1/s
    // without cancellation.
    let sigma = (1..=q)
        .map(|i| {
            let fi = T::lit(i as f64);
            (T::one() + t * (qf - fi) / fi) / s
        })
        .collect();
    Ok(SpectrumSpec { kappa, q, s, t, sigma })
}

impl<T: Scalar> SpectrumSpec<T> {
    pub fn sigma_max(&self) -> T {
        self.sigma[0]
    }

    pub fn sigma_min(&self) -> T {
        self.sigma[self.q - 1]
    }

    pub fn ratio(&self) -> T {
        self.sigma_max() / self.sigma_min()
    }
}
