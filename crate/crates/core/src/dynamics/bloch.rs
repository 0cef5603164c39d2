use std::io::{self, Write};

use super::{check_steps, grid_time, step_count, NORM_DRIFT_LIMIT};
use crate::error::{Error, Result};
use crate::pulse::Pulse;
use crate::scalar::Scalar;

/// Real Bloch vector of a pure two-level state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState<T> {
    pub rx: T,
    pub ry: T,
    pub rz: T,
}

impl<T: Scalar> BlochState<T> {
    pub fn new(rx: T, ry: T, rz: T) -> Self {
        Self { rx, ry, rz }
    }

    /// `|0>`, at `R_z = +1`.
    pub fn ground() -> Self {
        Self::new(T::zero(), T::zero(), T::one())
    }

    /// `|1>`, at `R_z = -1`.
    pub fn excited() -> Self {
        Self::new(T::zero(), T::zero(), -T::one())
    }

    pub fn norm(&self) -> T {
        (self.rx * self.rx + self.ry * self.ry + self.rz * self.rz).sqrt()
    }

    /// `P_1 = (1 - R_z) / 2`, clamped to `[0, 1]`.
    pub fn excited_population(&self) -> T {
        ((T::one() - self.rz) / T::lit(2.0))
            .max(T::zero())
            .min(T::one())
    }

    pub fn as_array(&self) -> [T; 3] {
        [self.rx, self.ry, self.rz]
    }

    pub fn from_array(r: [T; 3]) -> Self {
        Self::new(r[0], r[1], r[2])
    }

    /// Largest per-component difference.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self.rx - other.rx)
            .abs()
            .max((self.ry - other.ry).abs())
            .max((self.rz - other.rz).abs())
    }
}

/// Instantaneous torque vector `Omega = (Re H01, Im H01, delta)`, rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveVector<T> {
    pub omega_x: T,
    pub omega_y: T,
    pub delta: T,
}

impl<T: Scalar> DriveVector<T> {
    pub fn magnitude(&self) -> T {
        (self.omega_x * self.omega_x + self.omega_y * self.omega_y + self.delta * self.delta).sqrt()
    }

    #[inline]
    fn cross(&self, r: &[T; 3]) -> [T; 3] {
        [
            self.omega_y * r[2] - self.delta * r[1],
            self.delta * r[0] - self.omega_x * r[2],
            self.omega_x * r[1] - self.omega_y * r[0],
        ]
    }
}

/// Drive vector at time `t`.
pub fn drive_at<T: Scalar>(pulse: &Pulse<T>, t: T) -> Result<DriveVector<T>> {
    let envelope = pulse.envelope(t)?;
    let delta = pulse.detuning(t)?;
    Ok(DriveVector {
        omega_x: envelope * pulse.phase_offset.cos(),
        omega_y: envelope * pulse.phase_offset.sin(),
        delta,
    })
}

struct DriveEval<'a, T> {
    pulse: &'a Pulse<T>,
    cos_phi: T,
    sin_phi: T,
}

impl<'a, T: Scalar> DriveEval<'a, T> {
    fn new(pulse: &'a Pulse<T>) -> Self {
        Self {
            pulse,
            cos_phi: pulse.phase_offset.cos(),
            sin_phi: pulse.phase_offset.sin(),
        }
    }

    #[inline]
    fn at(&self, t: T) -> DriveVector<T> {
        let envelope = self.pulse.envelope_unchecked(t);
        DriveVector {
            omega_x: envelope * self.cos_phi,
            omega_y: envelope * self.sin_phi,
            delta: self.pulse.detuning_unchecked(t),
        }
    }
}

#[inline]
fn axpy<T: Scalar>(r: &[T; 3], k: &[T; 3], h: T) -> [T; 3] {
    [r[0] + h * k[0], r[1] + h * k[1], r[2] + h * k[2]]
}

/// Classical RK4 over the whole pulse, calling `observe(t, R)` at every grid
/// point including both ends. Returns the final vector.
fn propagate<T: Scalar>(
    pulse: &Pulse<T>,
    initial: BlochState<T>,
    n_steps: usize,
    mut observe: impl FnMut(T, &[T; 3]),
) -> Result<[T; 3]> {
    pulse.validate()?;
    check_steps(n_steps)?;
    let norm = initial.norm();
    if (norm - T::one()).abs() > T::lit(1e-9) {
        return Err(Error::domain("initial norm", norm.as_f64(), "1 +/- 1e-9"));
    }

    let drive = DriveEval::new(pulse);
    let h = pulse.duration / T::from_usize_lossy(n_steps);
    let half = h / T::lit(2.0);
    let sixth = h / T::lit(6.0);
    let two = T::lit(2.0);
    let limit = T::lit(NORM_DRIFT_LIMIT);

    let mut r = initial.as_array();
    let mut t = T::zero();
    let mut omega_start = drive.at(t);
    observe(t, &r);
    for i in 0..n_steps {
        let t_next = grid_time(pulse.duration, i + 1, n_steps);
        let omega_mid = drive.at(t + half);
        let omega_end = drive.at(t_next);

        let k1 = omega_start.cross(&r);
        let k2 = omega_mid.cross(&axpy(&r, &k1, half));
        let k3 = omega_mid.cross(&axpy(&r, &k2, half));
        let k4 = omega_end.cross(&axpy(&r, &k3, h));
        for c in 0..3 {
            r[c] = r[c] + sixth * (k1[c] + two * k2[c] + two * k3[c] + k4[c]);
        }

        let drift = ((r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt() - T::one()).abs();
        if !(drift <= limit) {
            return Err(Error::Integration {
                t: t_next.as_f64(),
                drift: drift.as_f64(),
                limit: NORM_DRIFT_LIMIT,
            });
        }

        t = t_next;
        omega_start = omega_end;
        observe(t, &r);
    }
    Ok(r)
}

/// Time-ordered Bloch trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<BlochState<T>>,
    /// `P_1` at each time.
    pub populations: Vec<T>,
}

impl<T: Scalar> Trajectory<T> {
    fn with_capacity(n: usize) -> Self {
        Self {
            times: Vec::with_capacity(n),
            states: Vec::with_capacity(n),
            populations: Vec::with_capacity(n),
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> BlochState<T> {
        *self.states.last().expect("trajectory is never empty")
    }

    pub fn final_population(&self) -> T {
        *self.populations.last().expect("trajectory is never empty")
    }

    /// Largest `| |R| - 1 |` along the trajectory.
    pub fn max_norm_drift(&self) -> T {
        self.states
            .iter()
            .map(|s| (s.norm() - T::one()).abs())
            .fold(T::zero(), T::max)
    }

    /// Max minus min of `P_1` over the last `fraction` of the pulse duration.
    pub fn tail_spread(&self, fraction: T) -> T {
        let end = *self.times.last().expect("trajectory is never empty");
        let start = end * (T::one() - fraction);
        let (lo, hi) = self
            .times
            .iter()
            .zip(&self.populations)
            .filter(|(t, _)| **t >= start)
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), (_, &p)| {
                (lo.min(p), hi.max(p))
            });
        hi - lo
    }

    /// Keeps every `stride`-th point plus the final one.
    pub fn decimate(&self, stride: usize) -> Self {
        let stride = stride.max(1);
        let last = self.len() - 1;
        let keep: Vec<usize> = (0..self.len())
            .filter(|&i| i % stride == 0 || i == last)
            .collect();
        Self {
            times: keep.iter().map(|&i| self.times[i]).collect(),
            states: keep.iter().map(|&i| self.states[i]).collect(),
            populations: keep.iter().map(|&i| self.populations[i]).collect(),
        }
    }
}

/// Integrates the Bloch equation with `steps_per_rad` steps per radian of
/// the largest drive rate, recording every step.
pub fn evolve_bloch<T: Scalar>(
    pulse: &Pulse<T>,
    initial: BlochState<T>,
    steps_per_rad: T,
) -> Result<Trajectory<T>> {
    let n = step_count(pulse, steps_per_rad)?;
    evolve_bloch_steps(pulse, initial, n)
}

/// As [`evolve_bloch`] with an explicit number of equal steps.
pub fn evolve_bloch_steps<T: Scalar>(
    pulse: &Pulse<T>,
    initial: BlochState<T>,
    n_steps: usize,
) -> Result<Trajectory<T>> {
    let mut traj = Trajectory::with_capacity(n_steps + 1);
    propagate(pulse, initial, n_steps, |t, r| {
        let state = BlochState::from_array(*r);
        traj.times.push(t);
        traj.populations.push(state.excited_population());
        traj.states.push(state);
    })?;
    Ok(traj)
}

/// Final Bloch vector only, without recording the trajectory.
pub fn final_bloch<T: Scalar>(
    pulse: &Pulse<T>,
    initial: BlochState<T>,
    steps_per_rad: T,
) -> Result<BlochState<T>> {
    let n = step_count(pulse, steps_per_rad)?;
    propagate(pulse, initial, n, |_, _| {}).map(BlochState::from_array)
}

/// Final `P_1` after the pulse, starting from `|0>`.
pub fn transfer_efficiency<T: Scalar>(pulse: &Pulse<T>, steps_per_rad: T) -> Result<T> {
    final_bloch(pulse, BlochState::ground(), steps_per_rad).map(|s| s.excited_population())
}

pub const TRAJECTORY_CSV_HEADER: &str = "t_s,rx,ry,rz,p1";

pub fn write_trajectory_csv<T: Scalar, W: Write>(
    mut out: W,
    traj: &Trajectory<T>,
) -> io::Result<()> {
    writeln!(out, "{TRAJECTORY_CSV_HEADER}")?;
    for ((t, s), p) in traj.times.iter().zip(&traj.states).zip(&traj.populations) {
        writeln!(
            out,
            "{:.15e},{:.15e},{:.15e},{:.15e},{:.15e}",
            t.as_f64(),
            s.rx.as_f64(),
            s.ry.as_f64(),
            s.rz.as_f64(),
            p.as_f64()
        )?;
    }
    Ok(())
}
