use crate::dynamics::grid_time;
use crate::error::{Error, Result};
use crate::pulse::Pulse;
use crate::scalar::Scalar;

/// Heuristic bound on `max eta` below which transfer is expected to exceed
/// 0.99. Tunable, not a physical constant.
pub const ADIABATIC_THRESHOLD: f64 = 0.1;

/// `eta(t) = |dOmega/dt| / |Omega|^2` on a uniform grid over the pulse.
///
/// `eta << 1` is the dimensionless form of `|dOmega/dt| / |Omega| << |Omega|`.
/// Instants with `|Omega| = 0` carry `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdiabaticityProfile<T> {
    pub times: Vec<T>,
    pub metric: Vec<T>,
}

impl<T: Scalar> AdiabaticityProfile<T> {
    pub fn peak(&self) -> T {
        self.metric.iter().copied().fold(T::zero(), T::max)
    }

    /// Time at which the metric peaks.
    pub fn peak_time(&self) -> T {
        let (i, _) =
            self.metric
                .iter()
                .enumerate()
                .fold((0, T::neg_infinity()), |(bi, bv), (i, &v)| {
                    if v > bv {
                        (i, v)
                    } else {
                        (bi, bv)
                    }
                });
        self.times[i]
    }

    pub fn is_adiabatic(&self, threshold: T) -> bool {
        self.peak() < threshold
    }
}

/// Evaluates the adiabaticity metric with analytic derivatives of the
/// envelope and the chirp.
pub fn adiabaticity_profile<T: Scalar>(
    pulse: &Pulse<T>,
    n_samples: usize,
) -> Result<AdiabaticityProfile<T>> {
    pulse.validate()?;
    if n_samples < 3 {
        return Err(Error::domain("n_samples", n_samples as f64, ">= 3"));
    }
    let n = n_samples - 1;
    let chirp_rate = pulse.detuning_rate();
    let (times, metric) = (0..=n)
        .map(|i| {
            let t = grid_time(pulse.duration, i, n);
            let envelope = pulse.envelope_unchecked(t);
            let delta = pulse.detuning_unchecked(t);
            let envelope_rate = pulse.envelope_rate_unchecked(t);
            let magnitude_sq = envelope * envelope + delta * delta;
            let rate = (envelope_rate * envelope_rate + chirp_rate * chirp_rate).sqrt();
            let eta = if magnitude_sq > T::zero() {
                rate / magnitude_sq
            } else {
                T::infinity()
            };
            (t, eta)
        })
        .unzip();
    Ok(AdiabaticityProfile { times, metric })
}
