use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rap_core::analysis::{add_noise, write_sweep_csv, Noise, ADIABATIC_THRESHOLD};
use rap_core::cooling::{thermal_ladder, trapped_levels_json, write_cooling_csv};
use rap_core::dynamics::write_trajectory_csv;
use rap_core::pulse::write_waveform_csv;
use rap_core::{
    adiabaticity_profile, evolve_bloch, fit_rabi, quantize_amplitude, run_cooling, sample_waveform,
    simulate_rabi_scan, BlochState, CoolingStrategy, FitOptions, SidebandCoupling, SweepAxis,
    SweepOptions,
};
use serde_json::json;

use crate::config::{self, push_pulse, AxisArg, Cli, Command, Common, Params, StrategyArg};

const METRIC_SAMPLES: usize = 2001;

pub fn run(cli: Cli) -> Result<()> {
    let file = config::load_file(cli.common.config.as_deref())?;
    let default_out = match cli.command {
        Command::Simulate(_) => "trajectory.csv",
        Command::Sweep(_) => "sweep.csv",
        Command::Rabi(_) => "rabi.csv",
        Command::Cool(_) => "cooling.csv",
        Command::Waveform(_) => "waveform.csv",
    };
    let common = config::resolve_common(&cli.common, &file, default_out)?;
    if let Some(n) = common.workers {
        // Ignore failure: a pool may already exist when embedded in tests.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match &cli.command {
        Command::Simulate(args) => simulate(&common, &config::resolve_simulate(args, &file)?),
        Command::Sweep(args) => sweep(&common, &config::resolve_sweep(args, &file)?),
        Command::Rabi(args) => rabi(&common, &config::resolve_rabi(args, &file)?),
        Command::Cool(args) => cool(&common, &config::resolve_cool(args, &file)?),
        Command::Waveform(args) => waveform(&common, &config::resolve_waveform(args, &file)?),
    }
}

fn params_for(command: &str, common: &Common) -> Params {
    let mut p = Params::default();
    p.push("command", command);
    p.push("steps_per_rad", common.steps_per_rad);
    p.push("seed", common.seed);
    p
}

/// Writes `# key=value ...` followed by `body`.
fn write_with_header(path: &Path, params: &Params, body: Vec<u8>) -> Result<()> {
    let mut bytes = params.comment_line().into_bytes();
    bytes.push(b'\n');
    bytes.extend(body);
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

/// `cooling.csv` -> `cooling.<suffix>`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn simulate(common: &Common, s: &config::SimulateSettings) -> Result<()> {
    let mut params = params_for("simulate", common);
    push_pulse(&mut params, &s.pulse);
    params.push("stride", s.stride);
    params.push("tail_fraction", s.tail_fraction);

    let traj = evolve_bloch(&s.pulse, BlochState::ground(), common.steps_per_rad)?;
    let profile = adiabaticity_profile(&s.pulse, METRIC_SAMPLES)?;
    let mut body = Vec::new();
    write_trajectory_csv(&mut body, &traj.decimate(s.stride))?;
    write_with_header(&common.out, &params, body)?;

    let eta = profile.peak();
    println!(
        "final_p1={:.9} max_eta={:.4e} adiabatic={} tail_spread={:.3e} norm_drift={:.1e}",
        traj.final_population(),
        eta,
        if eta < ADIABATIC_THRESHOLD {
            "yes"
        } else {
            "no"
        },
        traj.tail_spread(s.tail_fraction),
        traj.max_norm_drift(),
    );
    Ok(())
}

fn sweep(common: &Common, s: &config::SweepSettings) -> Result<()> {
    let axis = match s.axis {
        AxisArg::ChirpSpan => SweepAxis::ChirpSpan,
        AxisArg::PeakRabi => SweepAxis::PeakRabi,
    };
    let mut params = params_for("sweep", common);
    push_pulse(&mut params, &s.pulse);
    params.push("axis", axis.name());
    params.push("points", s.values.len());

    let options = SweepOptions {
        steps_per_rad: common.steps_per_rad,
        workers: None,
        metric_samples: METRIC_SAMPLES,
    };
    let result = rap_core::analysis::sweep(&s.pulse, axis, &s.values, &options)?;
    let mut body = Vec::new();
    write_sweep_csv(&mut body, &result)?;
    write_with_header(&common.out, &params, body)?;

    let failed = result.status.iter().filter(|st| !st.is_ok()).count();
    match (result.min_efficiency(), result.mean_efficiency()) {
        (Some(min), Some(mean)) => println!(
            "points={} failed={failed} min_efficiency={min:.6} mean_efficiency={mean:.6}",
            result.len()
        ),
        _ => println!("points={} failed={failed}", result.len()),
    }
    if failed > 0 {
        bail!("{failed} of {} sweep points failed", result.len());
    }
    Ok(())
}

fn rabi(common: &Common, s: &config::RabiSettings) -> Result<()> {
    let mut params = params_for("rabi", common);
    params.push("rabi_hz", s.rabi);
    params.push("guess_hz", s.guess);
    params.push("points", s.points);
    params.push("t_max_s", s.t_max);
    params.push("shots", s.shots);
    params.push("noiseless", s.noiseless);

    let clean = simulate_rabi_scan(s.rabi, &s.durations(), common.steps_per_rad)?;
    let noise = if s.noiseless {
        Noise::None
    } else {
        Noise::Projection { shots: s.shots }
    };
    let data = add_noise(&clean, noise, common.seed)?;
    let fit = fit_rabi(&data, s.guess, &FitOptions::default())?;

    let mut body = b"t_s,p_measured,p_fit\n".to_vec();
    for &(t, p) in &data {
        body.extend(format!("{:.15e},{:.15e},{:.15e}\n", t, p, fit.model(t)).into_bytes());
    }
    write_with_header(&common.out, &params, body)?;

    let report = fit.report();
    let parameters: serde_json::Map<String, serde_json::Value> = params
        .pairs()
        .iter()
        .map(|(k, v)| (k.clone(), json!(v)))
        .collect();
    let doc = json!({ "parameters": parameters, "fit": report });
    let fit_path = sibling(&common.out, "fit.json");
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    fs::write(&fit_path, text).with_context(|| format!("writing {}", fit_path.display()))?;

    println!("{}", serde_json::to_string(&report)?);
    Ok(())
}

fn cool(common: &Common, s: &config::CoolSettings) -> Result<()> {
    let mut params = params_for("cool", common);
    params.push(
        "strategy",
        match s.strategy {
            StrategyArg::Rap => "rap",
            StrategyArg::PiFixed => "pi_fixed",
        },
    );
    params.push("nbar", s.nbar);
    params.push("n_max", s.n_max);
    params.push("cycles", s.cycles);
    params.push("base_rabi_hz", s.base_rabi);
    params.push("scaling", format!("{:?}", s.scaling).to_lowercase());
    let strategy = match s.strategy {
        StrategyArg::Rap => {
            push_pulse(&mut params, &s.rap_pulse);
            CoolingStrategy::Rap {
                pulse: s.rap_pulse,
                steps_per_rad: common.steps_per_rad,
            }
        }
        StrategyArg::PiFixed => {
            params.push("pi_duration_s", s.pi_duration);
            CoolingStrategy::PiFixed {
                duration: s.pi_duration,
            }
        }
    };

    let coupling = SidebandCoupling::new(s.base_rabi).with_scaling(s.scaling);
    let initial = thermal_ladder(s.nbar, s.n_max)?;
    let report = run_cooling(&initial, &coupling, &strategy, s.cycles)?;

    let mut body = Vec::new();
    write_cooling_csv(&mut body, &report)?;
    write_with_header(&common.out, &params, body)?;
    let trapped = trapped_levels_json(&report.trapped_levels);
    let trapped_path = sibling(&common.out, "trapped.json");
    fs::write(&trapped_path, format!("{trapped}\n"))
        .with_context(|| format!("writing {}", trapped_path.display()))?;

    println!(
        "cycles={} mean_n={:.6} p_ground={:.9}",
        report.cycles,
        report.final_state.mean_n(),
        report.final_state.ground_population()
    );
    println!("{trapped}");
    Ok(())
}

fn waveform(common: &Common, s: &config::WaveformSettings) -> Result<()> {
    let mut params = params_for("waveform", common);
    push_pulse(&mut params, &s.pulse);
    params.push("sample_rate_hz", s.sample_rate);
    params.push(
        "bits",
        s.bits.map_or_else(|| "none".to_string(), |b| b.to_string()),
    );

    let mut samples = sample_waveform(&s.pulse, s.sample_rate)?;
    if let Some(bits) = s.bits {
        samples = quantize_amplitude(&samples, bits)?;
    }
    let mut body = Vec::new();
    write_waveform_csv(&mut body, &samples)?;
    write_with_header(&common.out, &params, body)?;
    println!("samples={}", samples.len());
    Ok(())
}
