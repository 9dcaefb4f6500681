use std::path::Path;

use pcfr::solvers::IterationRecord;

use crate::error::{BenchError, Result};

/// Sync-phase statistics of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseStats {
    /// `(meta_iteration, effective_iteration)` after every meta-iteration.
    pub mapping: Vec<(u64, u64)>,
    /// `(low, high, count)`: phase lengths in `[low, high)`, bins `[2^k, 2^(k+1))`.
    pub histogram: Vec<(u64, u64, u64)>,
    pub max_w: u64,
    pub median_w: u64,
    /// Mean and standard deviation of `ln w`, for a log-normal reading of the histogram.
    pub log_mean: f64,
    pub log_sd: f64,
    /// Effective iterations per meta-iteration over the final tenth of the run.
    pub final_decile_slope: f64,
    /// Effective iterations per meta-iteration over the whole run.
    pub overall_slope: f64,
    /// Least-squares exponent `b` of `effective ~ meta^b` over the second half of the run.
    pub power_exponent: f64,
}

impl PhaseStats {
    /// The mapping grows faster than linearly at the end of the run.
    pub fn superlinear(&self) -> bool {
        self.final_decile_slope > self.overall_slope
    }
}

pub fn phase_stats(records: &[IterationRecord]) -> Result<PhaseStats> {
    if records.is_empty() {
        return Err(BenchError::Usage("phase statistics need at least one record".into()));
    }
    let mapping: Vec<(u64, u64)> = records
        .iter()
        .map(|r| (r.meta_iteration, r.effective_iteration))
        .collect();
    let mut ws: Vec<u64> = records.iter().map(|r| r.w_pst).collect();
    if ws.contains(&0) {
        return Err(BenchError::Usage("phase lengths must be positive".into()));
    }
    let max_w = *ws.iter().max().expect("non-empty");
    let top_bin = 63 - max_w.leading_zeros() as usize;
    let mut counts = vec![0u64; top_bin + 1];
    for &w in &ws {
        counts[63 - w.leading_zeros() as usize] += 1;
    }
    let histogram = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| (1u64 << k, 1u64.checked_shl(k as u32 + 1).unwrap_or(u64::MAX), c))
        .collect();

    let n = ws.len() as f64;
    let logs: Vec<f64> = ws.iter().map(|&w| (w as f64).ln()).collect();
    let log_mean = logs.iter().sum::<f64>() / n;
    let log_sd = if ws.len() > 1 {
        (logs.iter().map(|l| (l - log_mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    ws.sort_unstable();
    let median_w = ws[ws.len() / 2];

    let (last_meta, last_eff) = *mapping.last().expect("non-empty");
    let overall_slope = last_eff as f64 / last_meta as f64;
    let start = mapping.len() - mapping.len().div_ceil(10);
    let (m0, e0) = if start == 0 { (0, 0) } else { mapping[start - 1] };
    let final_decile_slope = (last_eff - e0) as f64 / (last_meta - m0) as f64;

    let half = &mapping[mapping.len() / 2..];
    let points: Vec<(f64, f64)> = half
        .iter()
        .map(|&(m, e)| ((m as f64).ln(), (e as f64).ln()))
        .collect();
    let power_exponent = least_squares_slope(&points);

    Ok(PhaseStats {
        mapping,
        histogram,
        max_w,
        median_w,
        log_mean,
        log_sd,
        final_decile_slope,
        overall_slope,
        power_exponent,
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx > 0.0 {
        sxy / sxx
    } else {
        f64::NAN
    }
}

/// Writes `mapping.csv` and `histogram.csv` into `dir`.
pub fn write_phase_stats(dir: &Path, stats: &PhaseStats) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    let path = dir.join("mapping.csv");
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(["meta_iteration", "effective_iteration"])?;
    for (m, e) in &stats.mapping {
        w.write_record([m.to_string(), e.to_string()])?;
    }
    w.flush().map_err(|e| BenchError::io(&path, e))?;

    let path = dir.join("histogram.csv");
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(["w_low", "w_high", "count"])?;
    for (lo, hi, c) in &stats.histogram {
        w.write_record([lo.to_string(), hi.to_string(), c.to_string()])?;
    }
    w.flush().map_err(|e| BenchError::io(&path, e))?;
    Ok(())
}
