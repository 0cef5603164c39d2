use num_complex::Complex;

use super::BlochState;
use super::{check_steps, grid_time, step_count, NORM_DRIFT_LIMIT};
use crate::error::{Error, Result};
use crate::pulse::Pulse;
use crate::scalar::Scalar;

/// Probability amplitudes of `psi = c0 |0> + c1 |1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeState<T> {
    pub c0: Complex<T>,
    pub c1: Complex<T>,
}

impl<T: Scalar> AmplitudeState<T> {
    pub fn new(c0: Complex<T>, c1: Complex<T>) -> Self {
        Self { c0, c1 }
    }

    pub fn ground() -> Self {
        Self::new(
            Complex::new(T::one(), T::zero()),
            Complex::new(T::zero(), T::zero()),
        )
    }

    pub fn norm_sqr(&self) -> T {
        self.c0.norm_sqr() + self.c1.norm_sqr()
    }

    pub fn excited_population(&self) -> T {
        self.c1.norm_sqr()
    }

    /// `R_x = c0 c1* + c0* c1`, `R_y = i (c0 c1* - c0* c1)`,
    /// `R_z = |c0|^2 - |c1|^2`.
    pub fn to_bloch(&self) -> BlochState<T> {
        let cross = self.c0 * self.c1.conj();
        let i = Complex::new(T::zero(), T::one());
        let rx = cross + cross.conj();
        let ry = i * (cross - cross.conj());
        BlochState::new(rx.re, ry.re, self.c0.norm_sqr() - self.c1.norm_sqr())
    }

    /// A state with the given Bloch vector (global phase: `c0` real, >= 0).
    pub fn from_bloch(r: &BlochState<T>) -> Self {
        let norm = r.norm();
        let cos_theta = (r.rz / norm).max(-T::one()).min(T::one());
        let half = cos_theta.acos() / T::lit(2.0);
        let azimuth = r.ry.atan2(r.rx);
        Self::new(
            Complex::new(half.cos(), T::zero()),
            Complex::from_polar(half.sin(), azimuth),
        )
    }
}

/// `d/dt (c0, c1) = -i H (c0, c1)` with
/// `H = 1/2 [[delta, W e^{-i phi}], [W e^{i phi}, -delta]]`.
#[inline]
fn schrodinger_rhs<T: Scalar>(
    coupling: Complex<T>,
    delta: T,
    c: &[Complex<T>; 2],
) -> [Complex<T>; 2] {
    let minus_half_i = Complex::new(T::zero(), -T::lit(0.5));
    let d = Complex::new(delta, T::zero());
    [
        minus_half_i * (d * c[0] + coupling.conj() * c[1]),
        minus_half_i * (coupling * c[0] - d * c[1]),
    ]
}

/// Integrates the amplitudes with the same stepping rule as
/// [`evolve_bloch`](super::evolve_bloch). Returns one state per grid point.
pub fn evolve_amplitudes<T: Scalar>(
    pulse: &Pulse<T>,
    initial: AmplitudeState<T>,
    steps_per_rad: T,
) -> Result<Vec<AmplitudeState<T>>> {
    let n = step_count(pulse, steps_per_rad)?;
    evolve_amplitudes_steps(pulse, initial, n)
}

pub fn evolve_amplitudes_steps<T: Scalar>(
    pulse: &Pulse<T>,
    initial: AmplitudeState<T>,
    n_steps: usize,
) -> Result<Vec<AmplitudeState<T>>> {
    pulse.validate()?;
    check_steps(n_steps)?;
    let norm = initial.norm_sqr();
    if (norm - T::one()).abs() > T::lit(2e-9) {
        return Err(Error::domain(
            "initial |c0|^2 + |c1|^2",
            norm.as_f64(),
            "1 +/- 1e-9",
        ));
    }

    let rotation = Complex::from_polar(T::one(), pulse.phase_offset);
    let coupling_at = |t: T| rotation * pulse.envelope_unchecked(t);
    let h = pulse.duration / T::from_usize_lossy(n_steps);
    let hc = Complex::new(h, T::zero());
    let half = Complex::new(h / T::lit(2.0), T::zero());
    let sixth = Complex::new(h / T::lit(6.0), T::zero());
    let two = Complex::new(T::lit(2.0), T::zero());

    let mut out = Vec::with_capacity(n_steps + 1);
    let mut c = [initial.c0, initial.c1];
    out.push(initial);
    let mut t = T::zero();
    for i in 0..n_steps {
        let t_mid = t + h / T::lit(2.0);
        let t_next = grid_time(pulse.duration, i + 1, n_steps);
        let (w0, d0) = (coupling_at(t), pulse.detuning_unchecked(t));
        let (wm, dm) = (coupling_at(t_mid), pulse.detuning_unchecked(t_mid));
        let (w1, d1) = (coupling_at(t_next), pulse.detuning_unchecked(t_next));

        let k1 = schrodinger_rhs(w0, d0, &c);
        let y2 = [c[0] + half * k1[0], c[1] + half * k1[1]];
        let k2 = schrodinger_rhs(wm, dm, &y2);
        let y3 = [c[0] + half * k2[0], c[1] + half * k2[1]];
        let k3 = schrodinger_rhs(wm, dm, &y3);
        let y4 = [c[0] + hc * k3[0], c[1] + hc * k3[1]];
        let k4 = schrodinger_rhs(w1, d1, &y4);
        for j in 0..2 {
            c[j] = c[j] + sixth * (k1[j] + two * k2[j] + two * k3[j] + k4[j]);
        }

        let state = AmplitudeState::new(c[0], c[1]);
        let drift = (state.norm_sqr().sqrt() - T::one()).abs();
        if !(drift <= T::lit(NORM_DRIFT_LIMIT)) {
            return Err(Error::Integration {
                t: t_next.as_f64(),
                drift: drift.as_f64(),
                limit: NORM_DRIFT_LIMIT,
            });
        }
        out.push(state);
        t = t_next;
    }
    Ok(out)
}
