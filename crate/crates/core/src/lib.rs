//! Rapid adiabatic passage in a driven two-level system.
//!
//! The crate models a single qubit driven by a linearly chirped pulse with a
//! truncated Gaussian amplitude envelope and provides:
//!
//! - [`pulse`]: pulse definition, waveform sampling, amplitude quantization
//!   and waveform CSV export.
//! - [`dynamics`]: fixed-step integration of the Bloch equation
//!   `dR/dt = Omega x R`, plus an independent complex-amplitude integrator
//!   used as an oracle.
//! - [`analysis`]: adiabaticity diagnostics, transfer-efficiency sweeps and
//!   resonant Rabi-oscillation fitting.
//! - [`cooling`]: sideband cooling on a vibrational ladder, comparing
//!   fixed-duration pi pulses against adiabatic-passage pulses.
//!
//! All numerics are generic over the floating-point type through [`Scalar`].
//! Frequencies passed in by the user are ordinary frequencies in Hz; the
//! dynamics work internally in rad/s.
//!
//! ```
//! use rap_core::{Pulse64, transfer_efficiency};
//!
//! let pulse = Pulse64::new(150e-6, 512e3, 400e3).unwrap();
//! let p1 = transfer_efficiency(&pulse, 100.0).unwrap();
//! assert!(p1 > 0.999);
//! ```

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cooling;
pub mod dynamics;
mod error;
pub mod pulse;
mod scalar;

pub use analysis::{
    adiabaticity_profile, fit_rabi, simulate_rabi_scan, sweep_chirp_span, sweep_peak_rabi,
    AdiabaticityProfile, FitError, FitOptions, RabiFit, SweepAxis, SweepOptions, SweepResult,
};
pub use cooling::{
    run_cooling, sideband_transfer_pi, sideband_transfer_rap, thermal_ladder, CoolingReport,
    CoolingStrategy, LadderState, Scaling, SidebandCoupling,
};
pub use dynamics::{
    drive_at, evolve_amplitudes, evolve_bloch, transfer_efficiency, AmplitudeState, BlochState,
    DriveVector, Trajectory,
};
pub use error::{Error, Result};
pub use pulse::{quantize_amplitude, sample_waveform, EnvelopeKind, Pulse, WaveformSample};
pub use scalar::Scalar;

/// Default integrator resolution: steps per radian of the largest drive
/// rotation rate, so `max|Omega| * h <= 0.01`.
pub const DEFAULT_STEPS_PER_RAD: f64 = 100.0;

pub type Pulse64 = Pulse<f64>;
pub type Pulse32 = Pulse<f32>;
pub type BlochState64 = BlochState<f64>;
pub type BlochState32 = BlochState<f32>;
pub type AmplitudeState64 = AmplitudeState<f64>;
pub type Trajectory64 = Trajectory<f64>;
pub type SweepResult64 = SweepResult<f64>;
pub type RabiFit64 = RabiFit<f64>;
pub type LadderState64 = LadderState<f64>;
pub type CoolingReport64 = CoolingReport<f64>;
