//! Command-line arguments, the TOML run file, and their merge into resolved
//! per-command settings. Flags override file values, which override defaults.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rap_core::cooling::{default_n_max, Scaling};
use rap_core::{EnvelopeKind, Pulse64, DEFAULT_STEPS_PER_RAD};
use serde::Deserialize;

/// Bad input: exits with status 2 instead of 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Debug, Parser)]
#[command(
    name = "rapsim",
    version,
    about = "Chirped-pulse adiabatic passage simulator"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// TOML run file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output file.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Worker threads for parallel work (default: all processors).
    #[arg(long, global = true, value_name = "N")]
    pub workers: Option<usize>,
    /// Seed for synthetic measurement noise.
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    /// Integration steps per radian of the largest drive rate.
    #[arg(long, global = true, value_name = "R")]
    pub steps_per_rad: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one pulse and write the Bloch trajectory.
    #[command(allow_negative_numbers = true)]
    Simulate(SimulateArgs),
    /// Transfer efficiency over a range of chirp spans or Rabi frequencies.
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// Synthesize a Rabi flop scan and fit the Rabi frequency.
    #[command(allow_negative_numbers = true)]
    Rabi(RabiArgs),
    /// Sideband cooling of a thermal phonon distribution.
    #[command(allow_negative_numbers = true)]
    Cool(CoolArgs),
    /// Sample the pulse as an arbitrary-waveform-generator table.
    #[command(allow_negative_numbers = true)]
    Waveform(WaveformArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeArg {
    Gaussian,
    Constant,
}

#[derive(Debug, Args, Default)]
pub struct PulseArgs {
    /// Pulse duration in seconds.
    #[arg(long)]
    pub duration: Option<f64>,
    /// Peak Rabi frequency in Hz.
    #[arg(long)]
    pub peak_rabi: Option<f64>,
    /// Full chirp span in Hz.
    #[arg(long)]
    pub chirp_span: Option<f64>,
    /// Drive phase in radians.
    #[arg(long)]
    pub phase_offset: Option<f64>,
    /// Constant detuning added to the chirp, Hz.
    #[arg(long)]
    pub detuning_offset: Option<f64>,
    #[arg(long, value_enum)]
    pub envelope: Option<EnvelopeArg>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub pulse: PulseArgs,
    /// Write every N-th trajectory point (the last point is always written).
    #[arg(long)]
    pub stride: Option<usize>,
    /// Fraction of the pulse at the end used for the nutation spread.
    #[arg(long)]
    pub tail_fraction: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisArg {
    ChirpSpan,
    PeakRabi,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub pulse: PulseArgs,
    #[arg(long, value_enum)]
    pub axis: Option<AxisArg>,
    /// Explicit axis values in Hz, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub values: Option<Vec<f64>>,
    /// Range start in Hz.
    #[arg(long)]
    pub start: Option<f64>,
    /// Range end in Hz, inclusive.
    #[arg(long)]
    pub stop: Option<f64>,
    /// Range step in Hz.
    #[arg(long)]
    pub step: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RabiArgs {
    /// True Rabi frequency of the synthetic scan, Hz.
    #[arg(long)]
    pub rabi: Option<f64>,
    /// Starting guess for the fit, Hz.
    #[arg(long)]
    pub guess: Option<f64>,
    /// Number of pulse durations in the scan.
    #[arg(long)]
    pub points: Option<usize>,
    /// Longest pulse duration in seconds; the scan starts at 0.
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Projection-noise shots per point.
    #[arg(long)]
    pub shots: Option<u64>,
    /// Fit the simulated populations without noise.
    #[arg(long)]
    pub noiseless: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyArg {
    Rap,
    PiFixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingArg {
    Sqrt,
    SqrtShifted,
}

#[derive(Debug, Args)]
pub struct CoolArgs {
    #[command(flatten)]
    pub pulse: PulseArgs,
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyArg>,
    /// Initial mean phonon number.
    #[arg(long)]
    pub nbar: Option<f64>,
    /// Highest phonon level kept.
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub cycles: Option<usize>,
    /// Sideband Rabi frequency at n = 1, Hz.
    #[arg(long)]
    pub base_rabi: Option<f64>,
    /// Pi-pulse length in seconds (default: 1 / (2 base_rabi)).
    #[arg(long)]
    pub pi_duration: Option<f64>,
    #[arg(long, value_enum)]
    pub scaling: Option<ScalingArg>,
}

#[derive(Debug, Args)]
pub struct WaveformArgs {
    #[command(flatten)]
    pub pulse: PulseArgs,
    /// Samples per second.
    #[arg(long)]
    pub sample_rate: Option<f64>,
    /// Quantize amplitudes to this many bits.
    #[arg(long)]
    pub bits: Option<u32>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub pulse: PulseFile,
    pub integrator: IntegratorFile,
    pub simulate: SimulateFile,
    pub sweep: SweepFile,
    pub rabi: RabiFile,
    pub cool: CoolFile,
    pub waveform: WaveformFile,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PulseFile {
    pub duration: Option<f64>,
    pub peak_rabi: Option<f64>,
    pub chirp_span: Option<f64>,
    pub phase_offset: Option<f64>,
    pub detuning_offset: Option<f64>,
    pub envelope: Option<EnvelopeArg>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorFile {
    pub steps_per_rad: Option<f64>,
    pub workers: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateFile {
    pub stride: Option<usize>,
    pub tail_fraction: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepFile {
    pub axis: Option<AxisArg>,
    pub values: Option<Vec<f64>>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub step: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RabiFile {
    pub rabi: Option<f64>,
    pub guess: Option<f64>,
    pub points: Option<usize>,
    pub t_max: Option<f64>,
    pub shots: Option<u64>,
    pub noiseless: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoolFile {
    pub strategy: Option<StrategyArg>,
    pub nbar: Option<f64>,
    pub n_max: Option<usize>,
    pub cycles: Option<usize>,
    pub base_rabi: Option<f64>,
    pub pi_duration: Option<f64>,
    pub scaling: Option<ScalingArg>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WaveformFile {
    pub sample_rate: Option<f64>,
    pub bits: Option<u32>,
}

pub fn load_file(path: Option<&Path>) -> anyhow::Result<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    toml::from_str(&text).map_err(|e| usage(format!("config {}: {e}", path.display())))
}

/// Ordered `key=value` pairs describing a resolved run.
#[derive(Debug, Clone, Default)]
pub struct Params(Vec<(String, String)>);

impl Params {
    pub fn push(&mut self, key: &str, value: impl fmt::Display) {
        self.0.push((key.to_string(), value.to_string()));
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.0
    }

    pub fn comment_line(&self) -> String {
        let body: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("# {}", body.join(" "))
    }
}

fn check(ok: bool, field: &str, value: impl fmt::Display, expected: &str) -> anyhow::Result<()> {
    if ok {
        Ok(())
    } else {
        Err(usage(format!(
            "invalid {field} = {value}: expected {expected}"
        )))
    }
}

fn positive(field: &str, v: f64) -> anyhow::Result<f64> {
    check(v.is_finite() && v > 0.0, field, v, "finite and > 0")?;
    Ok(v)
}

fn non_negative(field: &str, v: f64) -> anyhow::Result<f64> {
    check(v.is_finite() && v >= 0.0, field, v, "finite and >= 0")?;
    Ok(v)
}

fn finite(field: &str, v: f64) -> anyhow::Result<f64> {
    check(v.is_finite(), field, v, "finite")?;
    Ok(v)
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Common {
    pub out: PathBuf,
    pub seed: u64,
    pub steps_per_rad: f64,
    pub workers: Option<usize>,
}

pub fn resolve_common(
    args: &CommonArgs,
    file: &FileConfig,
    default_out: &str,
) -> anyhow::Result<Common> {
    let steps_per_rad = args
        .steps_per_rad
        .or(file.integrator.steps_per_rad)
        .unwrap_or(DEFAULT_STEPS_PER_RAD);
    check(
        steps_per_rad.is_finite() && steps_per_rad >= rap_core::dynamics::MIN_STEPS_PER_RAD,
        "integrator.steps_per_rad",
        steps_per_rad,
        ">= 10",
    )?;
    let workers = args.workers.or(file.integrator.workers);
    if let Some(w) = workers {
        check(w >= 1, "integrator.workers", w, ">= 1")?;
    }
    Ok(Common {
        out: args
            .out
            .clone()
            .or_else(|| file.out.clone())
            .unwrap_or_else(|| PathBuf::from(default_out)),
        seed: args.seed.or(file.seed).unwrap_or(1),
        steps_per_rad,
        workers,
    })
}

pub fn resolve_pulse(args: &PulseArgs, file: &PulseFile) -> anyhow::Result<Pulse64> {
    let duration = positive(
        "pulse.duration",
        args.duration.or(file.duration).unwrap_or(150e-6),
    )?;
    let peak = non_negative(
        "pulse.peak_rabi",
        args.peak_rabi.or(file.peak_rabi).unwrap_or(512e3),
    )?;
    let span = finite(
        "pulse.chirp_span",
        args.chirp_span.or(file.chirp_span).unwrap_or(400e3),
    )?;
    let phase = finite(
        "pulse.phase_offset",
        args.phase_offset.or(file.phase_offset).unwrap_or(0.0),
    )?;
    let offset = finite(
        "pulse.detuning_offset",
        args.detuning_offset.or(file.detuning_offset).unwrap_or(0.0),
    )?;
    let envelope = match args
        .envelope
        .or(file.envelope)
        .unwrap_or(EnvelopeArg::Gaussian)
    {
        EnvelopeArg::Gaussian => EnvelopeKind::GaussianTruncated,
        EnvelopeArg::Constant => EnvelopeKind::Constant,
    };
    let pulse = Pulse64::new(duration, peak, span)
        .map_err(|e| usage(format!("invalid pulse: {e}")))?
        .with_envelope(envelope)
        .with_phase_offset(phase)
        .with_detuning_offset(offset);
    Ok(pulse)
}

pub fn push_pulse(params: &mut Params, p: &Pulse64) {
    params.push("duration_s", p.duration);
    params.push("peak_rabi_hz", p.peak_rabi);
    params.push("chirp_span_hz", p.chirp_span);
    params.push("phase_offset_rad", p.phase_offset);
    params.push("detuning_offset_hz", p.detuning_offset);
    params.push(
        "envelope",
        match p.envelope {
            EnvelopeKind::GaussianTruncated => "gaussian",
            EnvelopeKind::Constant => "constant",
        },
    );
}

#[derive(Debug, Clone)]
pub struct SimulateSettings {
    pub pulse: Pulse64,
    pub stride: usize,
    pub tail_fraction: f64,
}

pub fn resolve_simulate(
    args: &SimulateArgs,
    file: &FileConfig,
) -> anyhow::Result<SimulateSettings> {
    let stride = args.stride.or(file.simulate.stride).unwrap_or(1);
    check(stride >= 1, "simulate.stride", stride, ">= 1")?;
    let tail_fraction = args
        .tail_fraction
        .or(file.simulate.tail_fraction)
        .unwrap_or(0.1);
    check(
        tail_fraction > 0.0 && tail_fraction <= 1.0,
        "simulate.tail_fraction",
        tail_fraction,
        "in (0, 1]",
    )?;
    Ok(SimulateSettings {
        pulse: resolve_pulse(&args.pulse, &file.pulse)?,
        stride,
        tail_fraction,
    })
}

#[derive(Debug, Clone)]
pub struct SweepSettings {
    pub pulse: Pulse64,
    pub axis: AxisArg,
    pub values: Vec<f64>,
}

/// Inclusive range `start, start + step, ..` up to `stop`.
pub fn axis_range(start: f64, stop: f64, step: f64) -> anyhow::Result<Vec<f64>> {
    non_negative("sweep.start", start)?;
    finite("sweep.stop", stop)?;
    positive("sweep.step", step)?;
    if stop < start {
        return Ok(Vec::new());
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

pub fn resolve_sweep(args: &SweepArgs, file: &FileConfig) -> anyhow::Result<SweepSettings> {
    let pulse = resolve_pulse(&args.pulse, &file.pulse)?;
    let axis = args.axis.or(file.sweep.axis).unwrap_or(AxisArg::ChirpSpan);
    let ranged = args.start.is_some() || args.stop.is_some() || args.step.is_some();
    let values = match (&args.values, ranged) {
        (Some(v), _) => v.clone(),
        (None, true) => axis_range(
            args.start.or(file.sweep.start).unwrap_or(50e3),
            args.stop.or(file.sweep.stop).unwrap_or(1500e3),
            args.step.or(file.sweep.step).unwrap_or(25e3),
        )?,
        (None, false) => match &file.sweep.values {
            Some(v) => v.clone(),
            None => axis_range(
                file.sweep.start.unwrap_or(50e3),
                file.sweep.stop.unwrap_or(1500e3),
                file.sweep.step.unwrap_or(25e3),
            )?,
        },
    };
    if values.is_empty() {
        return Err(usage("invalid sweep.values: the sweep axis is empty"));
    }
    for &v in &values {
        non_negative("sweep.values", v)?;
    }
    Ok(SweepSettings {
        pulse,
        axis,
        values,
    })
}

#[derive(Debug, Clone)]
pub struct RabiSettings {
    pub rabi: f64,
    pub guess: f64,
    pub points: usize,
    pub t_max: f64,
    pub shots: u64,
    pub noiseless: bool,
}

impl RabiSettings {
    pub fn durations(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| self.t_max * i as f64 / last)
            .collect()
    }
}

pub fn resolve_rabi(args: &RabiArgs, file: &FileConfig) -> anyhow::Result<RabiSettings> {
    let f = &file.rabi;
    let points = args.points.or(f.points).unwrap_or(41);
    check(points >= 8, "rabi.points", points, "at least 8 scan points")?;
    let shots = args.shots.or(f.shots).unwrap_or(100);
    check(shots >= 1, "rabi.shots", shots, ">= 1")?;
    Ok(RabiSettings {
        rabi: positive("rabi.rabi", args.rabi.or(f.rabi).unwrap_or(512e3))?,
        guess: positive("rabi.guess", args.guess.or(f.guess).unwrap_or(500e3))?,
        points,
        t_max: positive("rabi.t_max", args.t_max.or(f.t_max).unwrap_or(8e-6))?,
        shots,
        noiseless: args.noiseless || f.noiseless.unwrap_or(false),
    })
}

#[derive(Debug, Clone)]
pub struct CoolSettings {
    pub strategy: StrategyArg,
    pub nbar: f64,
    pub n_max: usize,
    pub cycles: usize,
    pub base_rabi: f64,
    pub pi_duration: f64,
    pub scaling: Scaling,
    /// Adiabatic-passage pulse with its peak set to `base_rabi`.
    pub rap_pulse: Pulse64,
}

pub fn resolve_cool(args: &CoolArgs, file: &FileConfig) -> anyhow::Result<CoolSettings> {
    let f = &file.cool;
    let pulse = resolve_pulse(&args.pulse, &file.pulse)?;
    let cycles = args.cycles.or(f.cycles).unwrap_or(30);
    check(cycles >= 1, "cool.cycles", cycles, ">= 1")?;
    let nbar = non_negative("cool.nbar", args.nbar.or(f.nbar).unwrap_or(5.0))?;
    let n_max = args
        .n_max
        .or(f.n_max)
        .unwrap_or_else(|| default_n_max(nbar));
    check(n_max >= 1, "cool.n_max", n_max, ">= 1")?;
    let base_rabi = positive(
        "cool.base_rabi",
        args.base_rabi.or(f.base_rabi).unwrap_or(pulse.peak_rabi),
    )?;
    let pi_duration = non_negative(
        "cool.pi_duration",
        args.pi_duration
            .or(f.pi_duration)
            .unwrap_or(1.0 / (2.0 * base_rabi)),
    )?;
    let scaling = match args.scaling.or(f.scaling).unwrap_or(ScalingArg::Sqrt) {
        ScalingArg::Sqrt => Scaling::Sqrt,
        ScalingArg::SqrtShifted => Scaling::SqrtShifted,
    };
    Ok(CoolSettings {
        strategy: args.strategy.or(f.strategy).unwrap_or(StrategyArg::Rap),
        nbar,
        n_max,
        cycles,
        base_rabi,
        pi_duration,
        scaling,
        rap_pulse: pulse.with_peak_rabi(base_rabi),
    })
}

#[derive(Debug, Clone)]
pub struct WaveformSettings {
    pub pulse: Pulse64,
    pub sample_rate: f64,
    pub bits: Option<u32>,
}

pub fn resolve_waveform(
    args: &WaveformArgs,
    file: &FileConfig,
) -> anyhow::Result<WaveformSettings> {
    let pulse = resolve_pulse(&args.pulse, &file.pulse)?;
    let sample_rate = positive(
        "waveform.sample_rate",
        args.sample_rate
            .or(file.waveform.sample_rate)
            .unwrap_or(1e6),
    )?;
    check(
        sample_rate * pulse.duration >= 2.0,
        "waveform.sample_rate",
        sample_rate,
        "at least two samples per pulse",
    )?;
    let bits = args.bits.or(file.waveform.bits);
    if let Some(b) = bits {
        check((1..=32).contains(&b), "waveform.bits", b, "in 1..=32")?;
    }
    Ok(WaveformSettings {
        pulse,
        sample_rate,
        bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("rapsim").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn range_is_inclusive() {
        let v = axis_range(50e3, 1500e3, 25e3).unwrap();
        assert_eq!(v.len(), 59);
        assert_eq!(v[0], 50e3);
        assert!((v[58] - 1500e3).abs() < 1e-6);
        assert!(axis_range(10.0, 5.0, 1.0).unwrap().is_empty());
    }

    #[test]
    fn flags_override_file() {
        let file: FileConfig = toml::from_str(
            "seed = 7\n[pulse]\nchirp_span = 1.4e6\nduration = 1e-4\n[integrator]\nsteps_per_rad = 50\n",
        )
        .unwrap();
        let cli = parse(&["--seed", "3", "simulate", "--duration", "2e-4"]);
        let Command::Simulate(args) = &cli.command else {
            panic!()
        };
        let common = resolve_common(&cli.common, &file, "x.csv").unwrap();
        assert_eq!(common.seed, 3);
        assert_eq!(common.steps_per_rad, 50.0);
        let s = resolve_simulate(args, &file).unwrap();
        assert_eq!(s.pulse.duration, 2e-4);
        assert_eq!(s.pulse.chirp_span, 1.4e6);
        assert_eq!(s.pulse.peak_rabi, 512e3);
    }

    #[test]
    fn errors_name_the_field() {
        let file = FileConfig::default();
        let cli = parse(&["simulate", "--duration", "-1"]);
        let Command::Simulate(args) = &cli.command else {
            panic!()
        };
        let err = resolve_simulate(args, &file).unwrap_err();
        assert!(err.to_string().contains("pulse.duration"), "{err}");
        assert!(err.downcast_ref::<UsageError>().is_some());

        let cli = parse(&["cool", "--cycles", "0"]);
        let Command::Cool(args) = &cli.command else {
            panic!()
        };
        assert!(resolve_cool(args, &file)
            .unwrap_err()
            .to_string()
            .contains("cool.cycles"));

        let cli = parse(&["rabi", "--points", "7"]);
        let Command::Rabi(args) = &cli.command else {
            panic!()
        };
        assert!(resolve_rabi(args, &file)
            .unwrap_err()
            .to_string()
            .contains("rabi.points"));
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let err = toml::from_str::<FileConfig>("[pulse]\nduraton = 1e-4\n").unwrap_err();
        assert!(err.to_string().contains("duraton"));
    }

    #[test]
    fn empty_sweep_values_rejected() {
        let file: FileConfig = toml::from_str("[sweep]\nvalues = []\n").unwrap();
        let cli = parse(&["sweep"]);
        let Command::Sweep(args) = &cli.command else {
            panic!()
        };
        let err = resolve_sweep(args, &file).unwrap_err();
        assert!(err.to_string().contains("sweep.values"));
    }

    #[test]
    fn cooling_defaults() {
        let cli = parse(&["cool"]);
        let Command::Cool(args) = &cli.command else {
            panic!()
        };
        let s = resolve_cool(args, &FileConfig::default()).unwrap();
        assert_eq!(s.cycles, 30);
        assert_eq!(s.n_max, 50);
        assert_eq!(s.rap_pulse.peak_rabi, 512e3);
        assert_eq!(s.pi_duration, 1.0 / 1024e3);
    }
}
