//! Red-sideband cooling on a truncated vibrational ladder.
//!
//! Each cycle drives `|0, n> -> |1, n-1>` on every level at once and then
//! recycles `|1, n-1> -> |0, n-1>` instantly with no branching or heating.
//! The per-level transfer depends on the strategy: a fixed-duration pi pulse
//! gives `sin^2(pi f_n tau)`, which vanishes whenever `f_n tau` is an
//! integer (a trapping state), while an adiabatic-passage pulse transfers
//! nearly independently of `n`.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::dynamics::transfer_efficiency;
use crate::error::{Error, Result};
use crate::pulse::Pulse;
use crate::scalar::Scalar;

/// Per-cycle transfer below which a level counts as trapped.
pub const TRAPPED_TRANSFER: f64 = 1e-3;

/// Phonon-number populations `p(0..=n_max)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderState<T> {
    pub populations: Vec<T>,
    /// Cooling cycles applied so far.
    pub cycles: usize,
}

impl<T: Scalar> LadderState<T> {
    /// All population in `n = 0`.
    pub fn ground(n_max: usize) -> Self {
        let mut populations = vec![T::zero(); n_max + 1];
        populations[0] = T::one();
        Self {
            populations,
            cycles: 0,
        }
    }

    pub fn n_max(&self) -> usize {
        self.populations.len() - 1
    }

    pub fn total(&self) -> T {
        self.populations.iter().fold(T::zero(), |a, &p| a + p)
    }

    pub fn mean_n(&self) -> T {
        self.populations
            .iter()
            .enumerate()
            .fold(T::zero(), |a, (n, &p)| a + T::from_usize_lossy(n) * p)
    }

    pub fn ground_population(&self) -> T {
        self.populations[0]
    }
}

/// `n_max = max(ceil(10 nbar), 50)`.
pub fn default_n_max(nbar: f64) -> usize {
    ((10.0 * nbar).ceil() as usize).max(50)
}

/// Geometric distribution `nbar^n / (nbar + 1)^(n+1)`, truncated at `n_max`
/// and renormalised.
pub fn thermal_ladder<T: Scalar>(nbar: T, n_max: usize) -> Result<LadderState<T>> {
    if !(nbar >= T::zero()) || !nbar.is_finite() {
        return Err(Error::domain("nbar", nbar.as_f64(), "finite and >= 0"));
    }
    if n_max < 1 {
        return Err(Error::domain("n_max", n_max as f64, ">= 1"));
    }
    let ratio = nbar / (nbar + T::one());
    let mut populations = Vec::with_capacity(n_max + 1);
    let mut p = T::one() / (nbar + T::one());
    for _ in 0..=n_max {
        populations.push(p);
        p = p * ratio;
    }
    let total = populations.iter().fold(T::zero(), |a, &x| a + x);
    for p in &mut populations {
        *p = *p / total;
    }
    Ok(LadderState {
        populations,
        cycles: 0,
    })
}

/// How the sideband Rabi frequency grows with phonon number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scaling {
    /// `sqrt(n)`, the Lamb-Dicke sideband factor.
    #[default]
    Sqrt,
    /// `sqrt(n - 1)` for `n >= 1`, `0` at `n = 0`. Makes `n = 1` dark too.
    SqrtShifted,
}

impl Scaling {
    pub fn factor<T: Scalar>(&self, n: usize) -> T {
        match self {
            Scaling::Sqrt => T::from_usize_lossy(n).sqrt(),
            Scaling::SqrtShifted => T::from_usize_lossy(n.saturating_sub(1)).sqrt(),
        }
    }
}

/// Red-sideband coupling `Omega_{n -> n-1} = base_rabi * scaling(n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SidebandCoupling<T> {
    /// Hz.
    pub base_rabi: T,
    pub scaling: Scaling,
}

impl<T: Scalar> SidebandCoupling<T> {
    pub fn new(base_rabi: T) -> Self {
        Self {
            base_rabi,
            scaling: Scaling::Sqrt,
        }
    }

    pub fn with_scaling(mut self, scaling: Scaling) -> Self {
        self.scaling = scaling;
        self
    }

    /// Sideband Rabi frequency of level `n`, Hz.
    pub fn rabi(&self, n: usize) -> T {
        self.base_rabi * self.scaling.factor(n)
    }
}

/// Transfer of a resonant flat sideband pulse of length `pulse_duration`.
pub fn sideband_transfer_pi<T: Scalar>(
    coupling: &SidebandCoupling<T>,
    pulse_duration: T,
    n: usize,
) -> T {
    if n == 0 {
        return T::zero();
    }
    let s = (T::PI() * coupling.rabi(n) * pulse_duration).sin();
    s * s
}

/// Transfer of an adiabatic-passage sideband pulse on level `n`.
///
/// The pulse keeps its envelope shape and chirp; its peak Rabi frequency is
/// multiplied by `scaling(n)`. With `rap_pulse.peak_rabi == base_rabi` this
/// is the sideband Rabi frequency `base_rabi * scaling(n)`.
pub fn sideband_transfer_rap<T: Scalar>(
    coupling: &SidebandCoupling<T>,
    rap_pulse: &Pulse<T>,
    n: usize,
    steps_per_rad: T,
) -> Result<T> {
    rap_pulse.validate()?;
    if n == 0 {
        return Ok(T::zero());
    }
    let scaled = rap_pulse.with_peak_rabi(rap_pulse.peak_rabi * coupling.scaling.factor(n));
    transfer_efficiency(&scaled, steps_per_rad)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoolingStrategy<T> {
    /// Flat resonant sideband pulse of fixed length in seconds.
    PiFixed { duration: T },
    /// Chirped adiabatic-passage sideband pulse.
    Rap { pulse: Pulse<T>, steps_per_rad: T },
}

impl<T: Scalar> CoolingStrategy<T> {
    /// Transfer probability for each level `0..=n_max`, computed in parallel.
    pub fn transfers(&self, coupling: &SidebandCoupling<T>, n_max: usize) -> Result<Vec<T>> {
        match *self {
            CoolingStrategy::PiFixed { duration } => {
                if !(duration >= T::zero()) || !duration.is_finite() {
                    return Err(Error::domain(
                        "pi pulse duration",
                        duration.as_f64(),
                        "finite and >= 0",
                    ));
                }
                Ok((0..=n_max)
                    .map(|n| sideband_transfer_pi(coupling, duration, n))
                    .collect())
            }
            CoolingStrategy::Rap {
                pulse,
                steps_per_rad,
            } => (0..=n_max)
                .into_par_iter()
                .map(|n| sideband_transfer_rap(coupling, &pulse, n, steps_per_rad))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoolingReport<T> {
    pub cycles: usize,
    /// `cycles + 1` entries, starting with the initial state.
    pub mean_n_history: Vec<T>,
    pub ground_state_population_history: Vec<T>,
    /// Levels `n >= 1` whose per-cycle transfer is below [`TRAPPED_TRANSFER`].
    pub trapped_levels: Vec<usize>,
    /// Per-level transfer probability used in every cycle.
    pub transfers: Vec<T>,
    pub final_state: LadderState<T>,
}

/// One cooling cycle with per-level transfers `transfers[n]`.
///
/// `transfers` must have at least `n_max + 1` entries.
pub fn apply_cycle<T: Scalar>(state: &LadderState<T>, transfers: &[T]) -> LadderState<T> {
    let p = &state.populations;
    let n_max = p.len() - 1;
    let populations = (0..=n_max)
        .map(|n| {
            let stay = p[n] * (T::one() - transfers[n]);
            let arrive = if n < n_max {
                p[n + 1] * transfers[n + 1]
            } else {
                T::zero()
            };
            stay + arrive
        })
        .collect();
    LadderState {
        populations,
        cycles: state.cycles + 1,
    }
}

/// Applies `cycles` cooling cycles and records the history after each.
pub fn run_cooling<T: Scalar>(
    initial: &LadderState<T>,
    coupling: &SidebandCoupling<T>,
    strategy: &CoolingStrategy<T>,
    cycles: usize,
) -> Result<CoolingReport<T>> {
    if cycles < 1 {
        return Err(Error::domain("cycles", 0.0, ">= 1"));
    }
    if initial.populations.is_empty() {
        return Err(Error::domain("ladder size", 0.0, ">= 1"));
    }
    let transfers = strategy.transfers(coupling, initial.n_max())?;
    let trapped_levels = transfers
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &tr)| tr < T::lit(TRAPPED_TRANSFER))
        .map(|(n, _)| n)
        .collect();

    let mut state = initial.clone();
    let mut mean_n_history = Vec::with_capacity(cycles + 1);
    let mut ground_history = Vec::with_capacity(cycles + 1);
    mean_n_history.push(state.mean_n());
    ground_history.push(state.ground_population());
    for _ in 0..cycles {
        state = apply_cycle(&state, &transfers);
        mean_n_history.push(state.mean_n());
        ground_history.push(state.ground_population());
    }

    Ok(CoolingReport {
        cycles,
        mean_n_history,
        ground_state_population_history: ground_history,
        trapped_levels,
        transfers,
        final_state: state,
    })
}

pub const COOLING_CSV_HEADER: &str = "cycle,mean_n,p_ground";

pub fn write_cooling_csv<T: Scalar, W: Write>(
    mut out: W,
    report: &CoolingReport<T>,
) -> io::Result<()> {
    writeln!(out, "{COOLING_CSV_HEADER}")?;
    for (cycle, (m, g)) in report
        .mean_n_history
        .iter()
        .zip(&report.ground_state_population_history)
        .enumerate()
    {
        writeln!(out, "{},{:.15e},{:.15e}", cycle, m.as_f64(), g.as_f64())?;
    }
    Ok(())
}

/// Trapped levels as a JSON array, e.g. `[4,16]`.
pub fn trapped_levels_json(levels: &[usize]) -> String {
    let items: Vec<String> = levels.iter().map(|n| n.to_string()).collect();
    format!("[{}]", items.join(","))
}
