use std::io::{self, Write};

use rayon::prelude::*;

use super::adiabaticity::adiabaticity_profile;
use crate::dynamics::transfer_efficiency;
use crate::error::{Error, Result};
use crate::pulse::Pulse;
use crate::scalar::Scalar;

/// Which pulse parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    ChirpSpan,
    PeakRabi,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::ChirpSpan => "chirp_span_hz",
            SweepAxis::PeakRabi => "peak_rabi_hz",
        }
    }

    fn apply<T: Scalar>(&self, base: &Pulse<T>, value: T) -> Pulse<T> {
        match self {
            SweepAxis::ChirpSpan => base.with_chirp_span(value),
            SweepAxis::PeakRabi => base.with_peak_rabi(value),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions<T> {
    pub steps_per_rad: T,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
    /// Grid size for the peak adiabaticity metric.
    pub metric_samples: usize,
}

impl<T: Scalar> Default for SweepOptions<T> {
    fn default() -> Self {
        Self {
            steps_per_rad: T::lit(crate::DEFAULT_STEPS_PER_RAD),
            workers: None,
            metric_samples: 2001,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PointStatus {
    Ok,
    Failed(Error),
}

impl PointStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, PointStatus::Ok)
    }

    pub fn label(&self) -> &'static str {
        match self {
            PointStatus::Ok => "ok",
            PointStatus::Failed(Error::Integration { .. }) => "integration_failure",
            PointStatus::Failed(Error::Domain { .. }) => "invalid_parameter",
        }
    }
}

/// One row per axis value, in input order. Failed points carry `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult<T> {
    pub axis: SweepAxis,
    pub axis_values: Vec<T>,
    pub efficiencies: Vec<Option<T>>,
    pub peak_metric: Vec<T>,
    pub status: Vec<PointStatus>,
}

impl<T: Scalar> SweepResult<T> {
    pub fn axis_name(&self) -> &'static str {
        self.axis.name()
    }

    pub fn len(&self) -> usize {
        self.axis_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axis_values.is_empty()
    }

    pub fn all_ok(&self) -> bool {
        self.status.iter().all(PointStatus::is_ok)
    }

    fn completed(&self) -> impl Iterator<Item = T> + '_ {
        self.efficiencies.iter().filter_map(|e| *e)
    }

    /// Mean over completed points.
    pub fn mean_efficiency(&self) -> Option<T> {
        let (sum, n) = self
            .completed()
            .fold((T::zero(), 0usize), |(s, n), e| (s + e, n + 1));
        (n > 0).then(|| sum / T::from_usize_lossy(n))
    }

    pub fn min_efficiency(&self) -> Option<T> {
        self.completed().reduce(T::min)
    }

    pub fn max_efficiency(&self) -> Option<T> {
        self.completed().reduce(T::max)
    }
}

pub fn sweep_chirp_span<T: Scalar>(
    base: &Pulse<T>,
    spans: &[T],
    options: &SweepOptions<T>,
) -> Result<SweepResult<T>> {
    sweep(base, SweepAxis::ChirpSpan, spans, options)
}

pub fn sweep_peak_rabi<T: Scalar>(
    base: &Pulse<T>,
    peaks: &[T],
    options: &SweepOptions<T>,
) -> Result<SweepResult<T>> {
    sweep(base, SweepAxis::PeakRabi, peaks, options)
}

/// Runs `transfer_efficiency` and the peak adiabaticity metric for each
/// value of `axis`. Points are evaluated in parallel; a failing point is
/// recorded in `status` and the sweep continues.
pub fn sweep<T: Scalar>(
    base: &Pulse<T>,
    axis: SweepAxis,
    values: &[T],
    options: &SweepOptions<T>,
) -> Result<SweepResult<T>> {
    base.validate()?;
    if values.is_empty() {
        return Err(Error::domain("sweep values", 0.0, "at least one value"));
    }
    if let Some(bad) = values
        .iter()
        .find(|v| !(**v >= T::zero()) || !v.is_finite())
    {
        return Err(Error::domain(axis.name(), bad.as_f64(), "finite and >= 0"));
    }
    if options.workers == Some(0) {
        return Err(Error::domain("workers", 0.0, ">= 1"));
    }

    let evaluate = |value: &T| -> (Option<T>, T, PointStatus) {
        let pulse = axis.apply(base, *value);
        let metric = adiabaticity_profile(&pulse, options.metric_samples.max(3))
            .map(|p| p.peak())
            .unwrap_or_else(|_| T::nan());
        match transfer_efficiency(&pulse, options.steps_per_rad) {
            Ok(e) => (Some(e), metric, PointStatus::Ok),
            Err(err) => (None, metric, PointStatus::Failed(err)),
        }
    };

    let rows: Vec<(Option<T>, T, PointStatus)> = match options.workers {
        None => values.par_iter().map(evaluate).collect(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool construction")
            .install(|| values.par_iter().map(evaluate).collect()),
    };

    let mut result = SweepResult {
        axis,
        axis_values: values.to_vec(),
        efficiencies: Vec::with_capacity(rows.len()),
        peak_metric: Vec::with_capacity(rows.len()),
        status: Vec::with_capacity(rows.len()),
    };
    for (eff, metric, status) in rows {
        result.efficiencies.push(eff);
        result.peak_metric.push(metric);
        result.status.push(status);
    }
    Ok(result)
}

pub const SWEEP_CSV_HEADER: &str = "axis_value,efficiency,peak_adiabaticity_metric,status";

pub fn write_sweep_csv<T: Scalar, W: Write>(mut out: W, result: &SweepResult<T>) -> io::Result<()> {
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for i in 0..result.len() {
        let eff = result.efficiencies[i].map_or(f64::NAN, |e| e.as_f64());
        writeln!(
            out,
            "{:.15e},{:.15e},{:.15e},{}",
            result.axis_values[i].as_f64(),
            eff,
            result.peak_metric[i].as_f64(),
            result.status[i].label()
        )?;
    }
    Ok(())
}
