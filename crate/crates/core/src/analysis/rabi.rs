//! Resonant Rabi oscillations and `sin^2` frequency fitting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::transfer_efficiency;
use crate::error::{Error, Result};
use crate::pulse::Pulse;
use crate::scalar::Scalar;

/// Excited population after a resonant, flat pulse of each duration.
///
/// Ideally `sin^2(pi * rabi * t)`.
pub fn simulate_rabi_scan<T: Scalar>(
    rabi: T,
    durations: &[T],
    steps_per_rad: T,
) -> Result<Vec<(T, T)>> {
    if !(rabi > T::zero()) || !rabi.is_finite() {
        return Err(Error::domain("rabi", rabi.as_f64(), "finite and > 0"));
    }
    durations
        .iter()
        .map(|&t| {
            if t == T::zero() {
                return Ok((t, T::zero()));
            }
            let pulse = Pulse::constant(t, rabi, T::zero())?;
            transfer_efficiency(&pulse, steps_per_rad).map(|p| (t, p))
        })
        .collect()
}

/// Measurement noise applied to synthetic scan data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Noise<T> {
    None,
    /// Additive noise drawn uniformly from `[-amplitude, amplitude]`.
    Uniform {
        amplitude: T,
    },
    /// Quantum projection noise: each point becomes `k / shots` with
    /// `k ~ Binomial(shots, p)`.
    Projection {
        shots: u64,
    },
}

/// Applies `noise` with a ChaCha8 stream seeded from `seed`.
pub fn add_noise<T: Scalar>(data: &[(T, T)], noise: Noise<T>, seed: u64) -> Result<Vec<(T, T)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match noise {
        Noise::None => Ok(data.to_vec()),
        Noise::Uniform { amplitude } => {
            let a = amplitude.as_f64();
            if !(a >= 0.0) || !a.is_finite() {
                return Err(Error::domain("noise amplitude", a, "finite and >= 0"));
            }
            Ok(data
                .iter()
                .map(|&(t, p)| (t, p + T::lit(rng.random_range(-a..=a))))
                .collect())
        }
        Noise::Projection { shots } => {
            if shots == 0 {
                return Err(Error::domain("shots", 0.0, ">= 1"));
            }
            data.iter()
                .map(|&(t, p)| {
                    let prob = p.as_f64().clamp(0.0, 1.0);
                    let dist = Binomial::new(shots, prob)
                        .map_err(|_| Error::domain("probability", prob, "in [0, 1]"))?;
                    let k = dist.sample(&mut rng);
                    Ok((t, T::lit(k as f64 / shots as f64)))
                })
                .collect()
        }
    }
}

/// Least-squares fit of `p(t) = A sin^2(pi f t + phi) + B`.
///
/// Normalised so that `f > 0`, `A >= 0` and `phi` lies in `[0, pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiFit<T> {
    /// `f`, in Hz.
    pub fitted_rabi: T,
    pub fitted_amplitude: T,
    pub fitted_offset: T,
    pub fitted_phase: T,
    pub residual_rms: T,
    pub iterations: usize,
}

impl<T: Scalar> RabiFit<T> {
    pub fn model(&self, t: T) -> T {
        let s = (T::PI() * self.fitted_rabi * t + self.fitted_phase).sin();
        self.fitted_amplitude * s * s + self.fitted_offset
    }

    pub fn report(&self) -> FitReport {
        FitReport {
            fitted_rabi_hz: self.fitted_rabi.as_f64(),
            amplitude: self.fitted_amplitude.as_f64(),
            offset: self.fitted_offset.as_f64(),
            phase_rad: self.fitted_phase.as_f64(),
            residual_rms: self.residual_rms.as_f64(),
            iterations: self.iterations,
        }
    }
}

/// Serialised fit report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub fitted_rabi_hz: f64,
    pub amplitude: f64,
    pub offset: f64,
    pub phase_rad: f64,
    pub residual_rms: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions<T> {
    pub max_iterations: usize,
    /// Converged once every parameter step is below `tolerance` relative to
    /// the parameter's magnitude.
    pub tolerance: T,
    /// Fitted amplitudes below this leave the frequency unconstrained.
    pub min_amplitude: T,
}

impl<T: Scalar> Default for FitOptions<T> {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            tolerance: T::lit(1e-10),
            min_amplitude: T::lit(1e-6),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError<T: Scalar> {
    #[error(transparent)]
    Input(#[from] Error),
    #[error("Rabi fit did not converge within {} iterations", last.iterations)]
    NoConvergence { last: RabiFit<T> },
    #[error("degenerate Rabi data: amplitude {} leaves the frequency unconstrained", last.fitted_amplitude)]
    Degenerate { last: RabiFit<T> },
}

impl<T: Scalar> FitError<T> {
    pub fn last_iterate(&self) -> Option<&RabiFit<T>> {
        match self {
            FitError::Input(_) => None,
            FitError::NoConvergence { last } | FitError::Degenerate { last } => Some(last),
        }
    }
}

const N_PARAMS: usize = 4;
type Params<T> = [T; N_PARAMS]; // amplitude, offset, frequency, phase

fn model_and_gradient<T: Scalar>(p: &Params<T>, t: T) -> (T, Params<T>) {
    let [a, b, f, phi] = *p;
    let theta = T::PI() * f * t + phi;
    let s = theta.sin();
    let sin2 = (theta + theta).sin();
    (
        a * s * s + b,
        [s * s, T::one(), a * T::PI() * t * sin2, a * sin2],
    )
}

fn sum_sq<T: Scalar>(p: &Params<T>, data: &[(T, T)]) -> T {
    data.iter().fold(T::zero(), |acc, &(t, y)| {
        let r = model_and_gradient(p, t).0 - y;
        acc + r * r
    })
}

/// Gaussian elimination with partial pivoting. `None` if singular.
fn solve<T: Scalar>(mut m: [[T; N_PARAMS]; N_PARAMS], mut rhs: Params<T>) -> Option<Params<T>> {
    for col in 0..N_PARAMS {
        let pivot = (col..N_PARAMS).max_by(|&i, &j| {
            m[i][col]
                .abs()
                .partial_cmp(&m[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if !(m[pivot][col].abs() > T::min_positive_value()) {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..N_PARAMS {
            let factor = m[row][col] / m[col][col];
            let pivot_row = m[col];
            for (a, &b) in m[row].iter_mut().zip(&pivot_row).skip(col) {
                *a = *a - factor * b;
            }
            rhs[row] = rhs[row] - factor * rhs[col];
        }
    }
    let mut x = [T::zero(); N_PARAMS];
    for row in (0..N_PARAMS).rev() {
        let tail = (row + 1..N_PARAMS).fold(T::zero(), |acc, k| acc + m[row][k] * x[k]);
        x[row] = (rhs[row] - tail) / m[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Linear least squares for `(A, B)` at fixed frequency and phase.
fn linear_start<T: Scalar>(f: T, phi: T, data: &[(T, T)]) -> Params<T> {
    let n = T::from_usize_lossy(data.len());
    let (mut sx, mut sxx, mut sy, mut sxy) = (T::zero(), T::zero(), T::zero(), T::zero());
    for &(t, y) in data {
        let s = (T::PI() * f * t + phi).sin();
        let x = s * s;
        sx = sx + x;
        sxx = sxx + x * x;
        sy = sy + y;
        sxy = sxy + x * y;
    }
    let det = n * sxx - sx * sx;
    let (a, b) = if det.abs() > T::epsilon() * n * sxx {
        ((n * sxy - sx * sy) / det, (sxx * sy - sx * sxy) / det)
    } else {
        (T::zero(), sy / n)
    };
    [a, b, f, phi]
}

fn normalise<T: Scalar>(p: Params<T>) -> Params<T> {
    let [mut a, mut b, mut f, mut phi] = p;
    if f < T::zero() {
        // sin^2(-x) = sin^2(x)
        f = -f;
        phi = -phi;
    }
    if a < T::zero() {
        // -|A| sin^2(x) = |A| sin^2(x + pi/2) - |A|
        b = b + a;
        a = -a;
        phi = phi + T::FRAC_PI_2();
    }
    let pi = T::PI();
    phi = phi - (phi / pi).floor() * pi;
    [a, b, f, phi]
}

fn to_fit<T: Scalar>(p: Params<T>, data: &[(T, T)], iterations: usize) -> RabiFit<T> {
    let [a, b, f, phi] = normalise(p);
    let rms = (sum_sq(&p, data) / T::from_usize_lossy(data.len())).sqrt();
    RabiFit {
        fitted_rabi: f,
        fitted_amplitude: a,
        fitted_offset: b,
        fitted_phase: phi,
        residual_rms: rms,
        iterations,
    }
}

/// Fits `A sin^2(pi f t + phi) + B` by damped Gauss-Newton
/// (Levenberg-Marquardt with diagonal scaling) starting at
/// `f = initial_guess`.
///
/// Requires at least 8 points spanning at least one period `1/initial_guess`.
pub fn fit_rabi<T: Scalar>(
    data: &[(T, T)],
    initial_guess: T,
    options: &FitOptions<T>,
) -> std::result::Result<RabiFit<T>, FitError<T>> {
    if data.len() < 8 {
        return Err(Error::domain("data points", data.len() as f64, ">= 8").into());
    }
    if !(initial_guess > T::zero()) || !initial_guess.is_finite() {
        return Err(
            Error::domain("initial_guess", initial_guess.as_f64(), "finite and > 0").into(),
        );
    }
    if data.iter().any(|(t, y)| !t.is_finite() || !y.is_finite()) {
        return Err(Error::domain("data", f64::NAN, "finite values").into());
    }
    let (t_min, t_max) = data
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &(t, _)| {
            (lo.min(t), hi.max(t))
        });
    let periods = (t_max - t_min) * initial_guess;
    if periods < T::one() {
        return Err(Error::domain("data span in periods", periods.as_f64(), ">= 1").into());
    }

    // Phase grid for the starting point; amplitude and offset are linear.
    let mut params = (0..8)
        .map(|k| {
            linear_start(
                initial_guess,
                T::PI() * T::from_usize_lossy(k) / T::lit(8.0),
                data,
            )
        })
        .map(|p| (sum_sq(&p, data), p))
        .fold(None, |best: Option<(T, Params<T>)>, cand| match best {
            Some(b) if b.0 <= cand.0 => Some(b),
            _ => Some(cand),
        })
        .map(|(_, p)| p)
        .expect("non-empty phase grid");

    let mut cost = sum_sq(&params, data);
    let mut lambda = T::lit(1e-3);
    let ten = T::lit(10.0);
    let floor = T::epsilon();

    for iteration in 1..=options.max_iterations {
        let mut jtj = [[T::zero(); N_PARAMS]; N_PARAMS];
        let mut jtr = [T::zero(); N_PARAMS];
        for &(t, y) in data {
            let (m, g) = model_and_gradient(&params, t);
            let r = m - y;
            for i in 0..N_PARAMS {
                jtr[i] = jtr[i] - g[i] * r;
                for j in 0..N_PARAMS {
                    jtj[i][j] = jtj[i][j] + g[i] * g[j];
                }
            }
        }
        let scale_max = (0..N_PARAMS).map(|i| jtj[i][i]).fold(T::zero(), T::max);

        loop {
            let mut damped = jtj;
            for i in 0..N_PARAMS {
                damped[i][i] = jtj[i][i] + lambda * jtj[i][i].max(floor * scale_max);
            }
            let Some(step) = solve(damped, jtr) else {
                return Err(FitError::Degenerate {
                    last: to_fit(params, data, iteration),
                });
            };
            let trial = [
                params[0] + step[0],
                params[1] + step[1],
                params[2] + step[2],
                params[3] + step[3],
            ];
            let trial_cost = sum_sq(&trial, data);
            if trial_cost <= cost {
                let small = (0..N_PARAMS).all(|i| {
                    step[i].abs() <= options.tolerance * (params[i].abs() + options.tolerance)
                });
                params = trial;
                cost = trial_cost;
                lambda = (lambda / ten).max(T::lit(1e-12));
                if small {
                    let fit = to_fit(params, data, iteration);
                    if fit.fitted_amplitude < options.min_amplitude {
                        return Err(FitError::Degenerate { last: fit });
                    }
                    return Ok(fit);
                }
                break;
            }
            lambda = lambda * ten;
            if lambda > T::lit(1e12) {
                // No downhill step left: at a minimum to working precision.
                let fit = to_fit(params, data, iteration);
                if fit.fitted_amplitude < options.min_amplitude {
                    return Err(FitError::Degenerate { last: fit });
                }
                return Ok(fit);
            }
        }
    }
    Err(FitError::NoConvergence {
        last: to_fit(params, data, options.max_iterations),
    })
}
