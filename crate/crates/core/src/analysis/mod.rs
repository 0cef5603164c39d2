//! Adiabaticity diagnostics, transfer-efficiency sweeps and resonant Rabi
//! fitting.

mod adiabaticity;
mod rabi;
mod sweep;

pub use adiabaticity::{adiabaticity_profile, AdiabaticityProfile, ADIABATIC_THRESHOLD};
pub use rabi::{
    add_noise, fit_rabi, simulate_rabi_scan, FitError, FitOptions, FitReport, Noise, RabiFit,
};
pub use sweep::{
    sweep, sweep_chirp_span, sweep_peak_rabi, write_sweep_csv, PointStatus, SweepAxis,
    SweepOptions, SweepResult, SWEEP_CSV_HEADER,
};
