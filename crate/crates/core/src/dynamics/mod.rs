//! Coherent two-level dynamics under a chirped pulse.
//!
//! Two independent routes are provided. [`evolve_bloch`] integrates the real
//! Bloch equation `dR/dt = Omega x R` with `Omega = (Omega_R cos phi,
//! Omega_R sin phi, delta)`. [`evolve_amplitudes`] integrates the
//! Schrodinger equation for `(c0, c1)` under
//! `H = 1/2 [[delta, Omega_R e^{-i phi}], [Omega_R e^{i phi}, -delta]]`.
//! The two agree through `R = (2 Re(c0 c1*), -2 Im(c0 c1*), |c0|^2 - |c1|^2)`.
//!
//! Pole convention: `|0>` is `R_z = +1` and `P_1 = (1 - R_z) / 2`.
//!
//! Both integrators use a fixed step `h = T / n` with
//! `n = ceil(T * max|Omega| * steps_per_rad)`, so runs are reproducible
//! bit-for-bit.

mod amplitudes;
mod bloch;

pub use amplitudes::{evolve_amplitudes, evolve_amplitudes_steps, AmplitudeState};
pub use bloch::{
    drive_at, evolve_bloch, evolve_bloch_steps, final_bloch, transfer_efficiency,
    write_trajectory_csv, BlochState, DriveVector, Trajectory, TRAJECTORY_CSV_HEADER,
};

use crate::error::{Error, Result};
use crate::pulse::Pulse;
use crate::scalar::Scalar;

/// Smallest accepted `steps_per_rad`.
pub const MIN_STEPS_PER_RAD: f64 = 10.0;

/// Norm drift above which integration is aborted.
pub const NORM_DRIFT_LIMIT: f64 = 1e-4;

/// Number of fixed steps so that `max|Omega| * h <= 1 / steps_per_rad`.
pub fn step_count<T: Scalar>(pulse: &Pulse<T>, steps_per_rad: T) -> Result<usize> {
    pulse.validate()?;
    if !(steps_per_rad >= T::lit(MIN_STEPS_PER_RAD)) || !steps_per_rad.is_finite() {
        return Err(Error::domain(
            "steps_per_rad",
            steps_per_rad.as_f64(),
            "finite and >= 10",
        ));
    }
    let rotations = pulse.duration * pulse.max_drive_bound() * steps_per_rad;
    let n = rotations
        .ceil()
        .to_usize()
        .ok_or_else(|| Error::domain("step count", rotations.as_f64(), "representable"))?;
    Ok(n.max(1))
}

/// Time of grid point `i` out of `n`, hitting `T` exactly at the end.
#[inline]
pub(crate) fn grid_time<T: Scalar>(duration: T, i: usize, n: usize) -> T {
    if i >= n {
        duration
    } else {
        duration * T::from_usize_lossy(i) / T::from_usize_lossy(n)
    }
}

pub(crate) fn check_steps(n_steps: usize) -> Result<()> {
    if n_steps == 0 {
        Err(Error::domain("n_steps", 0.0, ">= 1"))
    } else {
        Ok(())
    }
}
