//! Chirped, Gaussian-enveloped drive pulses.
//!
//! A pulse of length `T` has a Rabi envelope
//! `Omega(t) = 2 pi f_peak exp(-(t - T/2)^2 / (2 sigma^2))` with
//! `sigma = T / (6 sqrt 2)`, truncated (not baseline-shifted) at `t = 0` and
//! `t = T`, so the edge value is exactly `exp(-9)` of the peak. The detuning
//! is a symmetric linear chirp `delta(t) = 2 pi dnu (t/T - 1/2)` that starts
//! below resonance and crosses zero where the envelope peaks. An optional
//! static `detuning_offset` shifts the whole sweep, e.g. to model a
//! mis-set laser frequency.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Amplitude envelope shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnvelopeKind {
    /// Gaussian centred at `T/2` with `sigma = T/(6 sqrt 2)`, cut at 0 and `T`.
    #[default]
    GaussianTruncated,
    /// Flat envelope at the peak value. Used for closed-form checks.
    Constant,
}

/// One shaped, chirped pulse.
///
/// Frequencies are ordinary frequencies in Hz; [`Pulse::envelope`] and
/// [`Pulse::detuning`] return angular frequencies in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse<T> {
    /// Pulse length `T` in seconds.
    pub duration: T,
    /// Peak Rabi frequency in Hz, reached at `t = T/2`.
    pub peak_rabi: T,
    /// Full detuning span swept during the pulse, in Hz.
    pub chirp_span: T,
    pub envelope: EnvelopeKind,
    /// Constant drive phase in radians.
    pub phase_offset: T,
    /// Static detuning added to the chirp, in Hz. Zero by default.
    pub detuning_offset: T,
}

impl<T: Scalar> Pulse<T> {
    /// Gaussian pulse with zero phase offset.
    pub fn new(duration: T, peak_rabi: T, chirp_span: T) -> Result<Self> {
        let pulse = Self {
            duration,
            peak_rabi,
            chirp_span,
            envelope: EnvelopeKind::GaussianTruncated,
            phase_offset: T::zero(),
            detuning_offset: T::zero(),
        };
        pulse.validate()?;
        Ok(pulse)
    }

    /// Flat-envelope pulse.
    pub fn constant(duration: T, peak_rabi: T, chirp_span: T) -> Result<Self> {
        Self::new(duration, peak_rabi, chirp_span).map(|p| p.with_envelope(EnvelopeKind::Constant))
    }

    pub fn with_envelope(mut self, envelope: EnvelopeKind) -> Self {
        self.envelope = envelope;
        self
    }

    pub fn with_phase_offset(mut self, phase: T) -> Self {
        self.phase_offset = phase;
        self
    }

    pub fn with_detuning_offset(mut self, offset: T) -> Self {
        self.detuning_offset = offset;
        self
    }

    pub fn with_peak_rabi(mut self, peak_rabi: T) -> Self {
        self.peak_rabi = peak_rabi;
        self
    }

    pub fn with_chirp_span(mut self, chirp_span: T) -> Self {
        self.chirp_span = chirp_span;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration > T::zero()) || !self.duration.is_finite() {
            return Err(Error::domain(
                "duration",
                self.duration.as_f64(),
                "finite and > 0",
            ));
        }
        if !(self.peak_rabi >= T::zero()) || !self.peak_rabi.is_finite() {
            return Err(Error::domain(
                "peak_rabi",
                self.peak_rabi.as_f64(),
                "finite and >= 0",
            ));
        }
        if !self.chirp_span.is_finite() {
            return Err(Error::domain(
                "chirp_span",
                self.chirp_span.as_f64(),
                "finite",
            ));
        }
        if !self.phase_offset.is_finite() {
            return Err(Error::domain(
                "phase_offset",
                self.phase_offset.as_f64(),
                "finite",
            ));
        }
        if !self.detuning_offset.is_finite() {
            return Err(Error::domain(
                "detuning_offset",
                self.detuning_offset.as_f64(),
                "finite",
            ));
        }
        Ok(())
    }

    /// Gaussian width `T / (6 sqrt 2)`.
    pub fn sigma(&self) -> T {
        self.duration / (T::lit(6.0) * T::SQRT_2())
    }

    /// Peak angular Rabi frequency `2 pi f_peak`.
    pub fn peak_angular(&self) -> T {
        T::TAU() * self.peak_rabi
    }

    /// Envelope shape normalised to 1 at the peak.
    pub fn shape(&self, t: T) -> Result<T> {
        self.check_time(t)?;
        Ok(self.shape_unchecked(t))
    }

    /// Rabi envelope in rad/s.
    pub fn envelope(&self, t: T) -> Result<T> {
        self.check_time(t)?;
        Ok(self.envelope_unchecked(t))
    }

    /// Instantaneous detuning in rad/s.
    pub fn detuning(&self, t: T) -> Result<T> {
        self.check_time(t)?;
        Ok(self.detuning_unchecked(t))
    }

    /// Time derivative of the envelope, rad/s^2.
    pub fn envelope_rate(&self, t: T) -> Result<T> {
        self.check_time(t)?;
        Ok(self.envelope_rate_unchecked(t))
    }

    /// Chirp rate `d delta / dt = 2 pi dnu / T`, rad/s^2.
    pub fn detuning_rate(&self) -> T {
        T::TAU() * self.chirp_span / self.duration
    }

    /// Upper bound on `|Omega(t)|` over the pulse.
    pub fn max_drive_bound(&self) -> T {
        let peak = self.peak_angular();
        let edge = T::PI() * self.chirp_span.abs() + T::TAU() * self.detuning_offset.abs();
        (peak * peak + edge * edge).sqrt()
    }

    /// The pulse that undoes this one when played forward from its final
    /// state.
    ///
    /// Reversing time in `dR/dt = Omega x R` needs `Omega'(s) = -Omega(T - s)`.
    /// The envelope is symmetric and the chirp antisymmetric about `T/2`, so
    /// this flips the transverse drive (adds `pi` to the phase) and negates
    /// any static detuning offset.
    pub fn time_reversed(&self) -> Self {
        Self {
            phase_offset: self.phase_offset + T::PI(),
            detuning_offset: -self.detuning_offset,
            ..*self
        }
    }

    pub(crate) fn shape_unchecked(&self, t: T) -> T {
        match self.envelope {
            EnvelopeKind::Constant => T::one(),
            EnvelopeKind::GaussianTruncated => {
                let sigma = self.sigma();
                let u = t - self.duration / T::lit(2.0);
                (-(u * u) / (T::lit(2.0) * sigma * sigma)).exp()
            }
        }
    }

    pub(crate) fn envelope_unchecked(&self, t: T) -> T {
        self.peak_angular() * self.shape_unchecked(t)
    }

    pub(crate) fn detuning_unchecked(&self, t: T) -> T {
        T::TAU() * (self.chirp_span * (t / self.duration - T::lit(0.5)) + self.detuning_offset)
    }

    pub(crate) fn envelope_rate_unchecked(&self, t: T) -> T {
        match self.envelope {
            EnvelopeKind::Constant => T::zero(),
            EnvelopeKind::GaussianTruncated => {
                let sigma = self.sigma();
                let u = t - self.duration / T::lit(2.0);
                -self.envelope_unchecked(t) * u / (sigma * sigma)
            }
        }
    }

    fn check_time(&self, t: T) -> Result<()> {
        if t >= T::zero() && t <= self.duration {
            Ok(())
        } else {
            Err(Error::domain("t", t.as_f64(), "within [0, duration]"))
        }
    }
}

/// A single point of the discretised waveform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveformSample<T> {
    /// Time in seconds.
    pub t: T,
    /// Envelope as a fraction of the peak, in `[0, 1]`.
    pub amplitude: T,
    /// Instantaneous detuning `delta / 2 pi` in Hz.
    pub detuning: T,
    /// Accumulated chirp phase `integral delta dt` in radians.
    pub phase: T,
}

/// Samples the pulse on a uniform grid that includes both `t = 0` and `t = T`.
///
/// The grid spacing is the largest `T/n` not exceeding `1/sample_rate`. The
/// phase is the cumulative trapezoidal integral of the angular detuning.
pub fn sample_waveform<T: Scalar>(
    pulse: &Pulse<T>,
    sample_rate: T,
) -> Result<Vec<WaveformSample<T>>> {
    pulse.validate()?;
    if !(sample_rate > T::zero()) || !sample_rate.is_finite() {
        return Err(Error::domain(
            "sample_rate",
            sample_rate.as_f64(),
            "finite and > 0",
        ));
    }
    let cycles = sample_rate * pulse.duration;
    if cycles < T::lit(2.0) {
        return Err(Error::domain(
            "sample_rate * duration",
            cycles.as_f64(),
            ">= 2",
        ));
    }
    // Guard against 150.00000000000003-style products adding a spurious interval.
    let intervals = (cycles * (T::one() - T::lit(1e-12))).ceil();
    let n = intervals
        .to_usize()
        .ok_or_else(|| Error::domain("sample_rate * duration", cycles.as_f64(), "representable"))?;

    let time_at = |i: usize| {
        if i == n {
            pulse.duration
        } else {
            pulse.duration * T::from_usize_lossy(i) / intervals
        }
    };

    let mut samples = Vec::with_capacity(n + 1);
    let mut phase = T::zero();
    let mut prev: Option<(T, T)> = None;
    for i in 0..=n {
        let t = time_at(i);
        let delta = pulse.detuning_unchecked(t);
        if let Some((t0, d0)) = prev {
            phase = phase + (t - t0) * (d0 + delta) / T::lit(2.0);
        }
        prev = Some((t, delta));
        samples.push(WaveformSample {
            t,
            amplitude: pulse.shape_unchecked(t),
            detuning: delta / T::TAU(),
            phase,
        });
    }
    Ok(samples)
}

/// Rounds every amplitude to the nearest multiple of `1/(2^bits - 1)`.
pub fn quantize_amplitude<T: Scalar>(
    samples: &[WaveformSample<T>],
    bits: u32,
) -> Result<Vec<WaveformSample<T>>> {
    if !(1..=32).contains(&bits) {
        return Err(Error::domain("bits", bits, "in 1..=32"));
    }
    let levels = T::lit(((1u64 << bits) - 1) as f64);
    Ok(samples
        .iter()
        .map(|s| WaveformSample {
            amplitude: (s.amplitude * levels).round() / levels,
            ..*s
        })
        .collect())
}

pub const WAVEFORM_CSV_HEADER: &str = "t_s,amplitude,detuning_hz,phase_rad";

/// Writes samples as CSV (`t_s,amplitude,detuning_hz,phase_rad`).
pub fn write_waveform_csv<T: Scalar, W: Write>(
    mut out: W,
    samples: &[WaveformSample<T>],
) -> io::Result<()> {
    writeln!(out, "{WAVEFORM_CSV_HEADER}")?;
    for s in samples {
        writeln!(
            out,
            "{:.15e},{:.15e},{:.15e},{:.15e}",
            s.t.as_f64(),
            s.amplitude.as_f64(),
            s.detuning.as_f64(),
            s.phase.as_f64()
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn plateau_pulse() -> Pulse<f64> {
        Pulse::new(150e-6, 512e3, 400e3).unwrap()
    }

    #[test]
    fn envelope_center_edge_and_sigma_points() {
        let p = plateau_pulse();
        let t = p.duration;
        let peak = 2.0 * std::f64::consts::PI * 512e3;
        assert!((p.envelope(t / 2.0).unwrap() - peak).abs() <= 1e-9 * peak);

        let edge = p.envelope(0.0).unwrap();
        assert!((edge / peak - (-9.0f64).exp()).abs() < 1e-12 * (-9.0f64).exp());
        assert!((edge / peak - 1.2341e-4).abs() < 1e-8);

        let s = p.sigma();
        for tt in [t / 2.0 - s, t / 2.0 + s] {
            let ratio = p.envelope(tt).unwrap() / peak;
            assert!((ratio - (-0.5f64).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_envelope_is_flat() {
        let p = Pulse::constant(1e-6, 3e5, 0.0).unwrap();
        let w = 2.0 * std::f64::consts::PI * 3e5;
        for t in [0.0, 0.3e-6, 1e-6] {
            assert_eq!(p.envelope(t).unwrap(), w);
        }
    }

    #[test]
    fn detuning_endpoints() {
        let p = plateau_pulse();
        let two_pi = 2.0 * std::f64::consts::PI;
        assert!((p.detuning(0.0).unwrap() + two_pi * 200e3).abs() < 1e-6);
        assert_eq!(p.detuning(p.duration / 2.0).unwrap(), 0.0);
        assert!((p.detuning(p.duration).unwrap() - two_pi * 200e3).abs() < 1e-6);
    }

    #[test]
    fn detuning_offset_shifts_the_sweep() {
        let p = plateau_pulse().with_detuning_offset(10e3);
        let two_pi = 2.0 * std::f64::consts::PI;
        assert!((p.detuning(p.duration / 2.0).unwrap() - two_pi * 10e3).abs() < 1e-9);
        assert!(Pulse::new(1e-6, 1.0, 0.0)
            .unwrap()
            .with_detuning_offset(f64::INFINITY)
            .validate()
            .is_err());
    }

    #[test]
    fn out_of_window_time_is_a_domain_error() {
        let p = plateau_pulse();
        assert!(matches!(
            p.envelope(-1e-9),
            Err(Error::Domain { name: "t", .. })
        ));
        assert!(matches!(
            p.detuning(p.duration * 1.001),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn invalid_pulses_rejected() {
        assert!(Pulse::new(0.0, 1.0, 1.0).is_err());
        assert!(Pulse::new(-1e-6, 1.0, 1.0).is_err());
        assert!(Pulse::new(1e-6, -1.0, 1.0).is_err());
        assert!(Pulse::new(f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn sampling_grid_at_one_megahertz() {
        let samples = sample_waveform(&plateau_pulse(), 1e6).unwrap();
        assert_eq!(samples.len(), 151);
        assert_eq!(samples[0].t, 0.0);
        assert_eq!(samples[150].t, 150e-6);
        // Oracle: direct formula at t = 0 and t = 75 us.
        assert!((samples[0].amplitude - (-9.0f64).exp()).abs() < 1e-15);
        assert!((samples[75].amplitude - 1.0).abs() < 1e-15);
        assert!((samples[0].detuning + 200e3).abs() < 1e-9);
        assert!((samples[75].detuning).abs() < 1e-9);
        // Symmetric chirp integrates to zero.
        assert!(samples[150].phase.abs() < 1e-9);
        // Phase minimum at resonance: -pi * dnu * T / 4.
        let expected_min = -std::f64::consts::PI * 400e3 * 150e-6 / 4.0;
        assert!((samples[75].phase - expected_min).abs() < 1e-9);
    }

    #[test]
    fn sampling_special_cases() {
        let flat = Pulse::constant(10e-6, 1e5, 2e5).unwrap();
        assert!(sample_waveform(&flat, 3.3e6)
            .unwrap()
            .iter()
            .all(|s| s.amplitude == 1.0));

        let unchirped = Pulse::new(10e-6, 1e5, 0.0).unwrap();
        assert!(sample_waveform(&unchirped, 1e6)
            .unwrap()
            .iter()
            .all(|s| s.detuning == 0.0 && s.phase == 0.0));

        assert!(sample_waveform(&unchirped, 0.0).is_err());
        assert!(sample_waveform(&unchirped, -1.0).is_err());
        assert!(sample_waveform(&unchirped, 1e5).is_err()); // one interval only
    }

    #[test]
    fn quantization_examples() {
        let s = |a: f64| WaveformSample {
            t: 0.0,
            amplitude: a,
            detuning: 0.0,
            phase: 0.0,
        };
        let q = quantize_amplitude(&[s(1.0), s(0.5 + 1e-9)], 16).unwrap();
        assert_eq!(q[0].amplitude, 1.0);
        let expected = ((0.5 + 1e-9) * 65535.0f64).round() / 65535.0;
        assert_eq!(q[1].amplitude, expected);
        assert_eq!(expected, 32768.0 / 65535.0);

        let q1 = quantize_amplitude(&[s(0.2), s(0.49), s(0.51), s(0.9)], 1).unwrap();
        let amps: Vec<f64> = q1.iter().map(|x| x.amplitude).collect();
        assert_eq!(amps, vec![0.0, 0.0, 1.0, 1.0]);

        assert!(quantize_amplitude(&[s(0.5)], 0).is_err());
        assert!(quantize_amplitude(&[s(0.5)], 33).is_err());
    }

    #[test]
    fn csv_layout() {
        let samples = sample_waveform(&plateau_pulse(), 1e6).unwrap();
        let mut buf = Vec::new();
        write_waveform_csv(&mut buf, &samples).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(WAVEFORM_CSV_HEADER));
        let first: Vec<f64> = lines
            .next()
            .unwrap()
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(first.len(), 4);
        assert!((first[1] - (-9.0f64).exp()).abs() < 1e-16);
        assert_eq!(text.lines().count(), 152);
        assert!(!text.contains('\r'));
    }

    #[test]
    fn time_reversal_flips_transverse_drive() {
        let p = plateau_pulse().with_phase_offset(0.3);
        let r = p.time_reversed();
        assert!((r.phase_offset - (0.3 + std::f64::consts::PI)).abs() < 1e-15);
        assert_eq!(r.duration, p.duration);
        assert_eq!(
            p.with_detuning_offset(5e3).time_reversed().detuning_offset,
            -5e3
        );
    }

    #[test]
    fn works_in_single_precision() {
        let p = Pulse::<f32>::new(150e-6, 512e3, 400e3).unwrap();
        let ratio = p.envelope(0.0).unwrap() / p.envelope(75e-6).unwrap();
        assert!((ratio - (-9.0f32).exp()).abs() < 1e-6 * (-9.0f32).exp() + 1e-9);
    }

    proptest! {
        #[test]
        fn envelope_symmetric_and_chirp_antisymmetric(
            duration in 1e-6f64..1e-3,
            peak in 0.0f64..2e6,
            span in -3e6f64..3e6,
            frac in 0.0f64..=1.0,
        ) {
            let p = Pulse::new(duration, peak, span).unwrap();
            let t = frac * duration;
            let tr = duration - t;
            let a = p.envelope(t).unwrap();
            let b = p.envelope(tr).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * p.peak_angular().max(1.0));
            let da = p.detuning(t).unwrap();
            let db = p.detuning(tr).unwrap();
            prop_assert!((da + db).abs() <= 1e-9 * (span.abs() * 6.3).max(1.0));
        }

        #[test]
        fn edge_ratio_is_exp_minus_nine(duration in 1e-7f64..1e-2, peak in 1.0f64..1e7) {
            let p = Pulse::new(duration, peak, 0.0).unwrap();
            let ratio = p.envelope(0.0).unwrap() / p.envelope(duration / 2.0).unwrap();
            let expected = (-9.0f64).exp();
            prop_assert!(((ratio - expected) / expected).abs() < 1e-12);
        }

        #[test]
        fn quantization_idempotent_and_within_half_step(
            amps in proptest::collection::vec(0.0f64..=1.0, 1..40),
            bits in 1u32..=32,
        ) {
            let samples: Vec<_> = amps
                .iter()
                .map(|&a| WaveformSample { t: 0.0, amplitude: a, detuning: 0.0, phase: 0.0 })
                .collect();
            let once = quantize_amplitude(&samples, bits).unwrap();
            let twice = quantize_amplitude(&once, bits).unwrap();
            let step = 1.0 / (((1u64 << bits) - 1) as f64);
            for ((orig, q1), q2) in samples.iter().zip(&once).zip(&twice) {
                prop_assert_eq!(q1.amplitude, q2.amplitude);
                prop_assert!((q1.amplitude - orig.amplitude).abs() <= 0.5 * step * (1.0 + 1e-9));
                prop_assert!((0.0..=1.0).contains(&q1.amplitude));
            }
        }

        #[test]
        fn sampled_phase_returns_to_zero(duration in 1e-6f64..1e-3, span in -2e6f64..2e6, rate_mul in 2.0f64..500.0) {
            let p = Pulse::new(duration, 1e5, span).unwrap();
            let samples = sample_waveform(&p, rate_mul / duration).unwrap();
            let last = samples.last().unwrap();
            prop_assert_eq!(last.t, duration);
            let scale = std::f64::consts::PI * span.abs() * duration;
            prop_assert!(last.phase.abs() <= 1e-9 * scale.max(1.0));
            for w in samples.windows(2) {
                prop_assert!(w[1].t > w[0].t);
                prop_assert!((w[1].t - w[0].t) <= duration / rate_mul * (1.0 + 1e-9) + 1e-18);
            }
        }
    }
}
