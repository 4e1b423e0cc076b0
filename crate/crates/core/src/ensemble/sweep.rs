use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{config_err, Error, Result};
use crate::metaorder::ImpactSeries;

use super::{run_ensemble, EnsembleConfig, EnsembleResult};

/// Parameter varied by [`sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    H,
    Ns,
    /// Meta-order duration `T`; the horizon keeps its ratio to `T`.
    Duration,
    /// Pattern count `P`; every step count keeps its ratio to `P`.
    Patterns,
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h" => Ok(SweepAxis::H),
            "n_s" | "ns" => Ok(SweepAxis::Ns),
            "T" | "duration" => Ok(SweepAxis::Duration),
            "P" | "patterns" => Ok(SweepAxis::Patterns),
            other => config_err(format!("unknown sweep axis '{other}', expected one of h, n_s, T, P")),
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::H => "h",
            SweepAxis::Ns => "n_s",
            SweepAxis::Duration => "T",
            SweepAxis::Patterns => "P",
        })
    }
}

fn positive_count(v: f64, what: &str) -> Result<u64> {
    if !(v.is_finite() && v >= 1.0 && v.fract() == 0.0) {
        return config_err(format!("{what} must be a positive integer, got {v}"));
    }
    Ok(v as u64)
}

fn rescale(steps: u64, from: u64, to: u64) -> u64 {
    ((steps as u128 * to as u128 + from as u128 / 2) / from as u128).max(1) as u64
}

impl SweepAxis {
    /// `base` with this axis set to `value`.
    pub fn apply(&self, base: &EnsembleConfig, value: f64) -> Result<EnsembleConfig> {
        let mut c = base.clone();
        match self {
            SweepAxis::H => c.metaorder.h = value,
            SweepAxis::Ns => c.game.n_s = value,
            SweepAxis::Duration => {
                let dur = positive_count(value, "duration")?;
                c.t_max = rescale(base.t_max, base.metaorder.duration, dur);
                c.metaorder.duration = dur;
            }
            SweepAxis::Patterns => {
                let p = positive_count(value, "pattern count")?;
                let old = base.game.patterns as u64;
                c.game.patterns = p as usize;
                c.game.burn_in_steps = rescale(base.game.burn_in_steps, old, p);
                c.metaorder.duration = rescale(base.metaorder.duration, old, p);
                c.metaorder.start = base.metaorder.start * p / old;
                c.t_max = rescale(base.t_max, old, p);
                c.baseline_window = rescale(base.baseline_window, old, p);
            }
        }
        Ok(c)
    }
}

/// Independent ensembles over `values`; value `k` uses streams starting at
/// `k << 32` so no two ensembles share a realization.
pub fn sweep(base: &EnsembleConfig, axis: SweepAxis, values: &[f64]) -> Result<Vec<(f64, EnsembleResult)>> {
    if values.is_empty() {
        return config_err("sweep needs at least one value");
    }
    values
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let mut c = axis.apply(base, v)?;
            c.game.stream = (k as u64) << 32;
            log::info!("sweep {axis} = {v}");
            Ok((v, run_ensemble(&c)?))
        })
        .collect()
}

/// Largest pairwise gap of `Delta(t)/h` across the series, in units of the
/// combined standard error, over all `t`. Values up to 3 indicate that the
/// curves collapse.
pub fn collapse_metric(series: &[&ImpactSeries]) -> Result<f64> {
    if series.len() < 2 {
        return config_err("collapse needs at least two series");
    }
    let first = series[0];
    for s in series {
        if s.mean.len() != first.mean.len() || s.patterns != first.patterns || s.duration != first.duration {
            return config_err("collapse needs series on a common grid, T and P");
        }
        if s.h == 0.0 {
            return config_err("collapse needs nonzero h");
        }
    }
    let mut worst: f64 = 0.0;
    for t in 0..first.mean.len() {
        for (i, a) in series.iter().enumerate() {
            for b in &series[i + 1..] {
                let diff = a.mean[t] / a.h - b.mean[t] / b.h;
                if diff == 0.0 {
                    continue;
                }
                let se = (a.stderr[t] / a.h).hypot(b.stderr[t] / b.h);
                worst = worst.max(if se > 0.0 { diff.abs() / se } else { f64::INFINITY });
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameConfig;
    use crate::metaorder::MetaOrderSpec;

    fn base() -> EnsembleConfig {
        let game = GameConfig::new(16, 1.0, 1.0).with_seed(9).with_burn_in(320);
        EnsembleConfig::new(game, MetaOrderSpec::new(1.0, 32), 4).with_baseline_window(1600).with_workers(1)
    }

    #[test]
    fn axis_names() {
        assert_eq!("n_s".parse::<SweepAxis>().unwrap(), SweepAxis::Ns);
        assert_eq!("T".parse::<SweepAxis>().unwrap(), SweepAxis::Duration);
        let err = "chi".parse::<SweepAxis>().unwrap_err();
        assert!(err.is_config());
    }

    #[test]
    fn apply_rescales_in_units_of_p() {
        let c = SweepAxis::Patterns.apply(&base(), 32.0).unwrap();
        assert_eq!((c.game.burn_in_steps, c.metaorder.duration, c.t_max, c.baseline_window), (640, 64, 384, 3200));
        let c = SweepAxis::Duration.apply(&base(), 8.0).unwrap();
        assert_eq!((c.metaorder.duration, c.t_max), (8, 48));
        assert!(SweepAxis::Duration.apply(&base(), 2.5).is_err());
    }

    #[test]
    fn sweep_uses_disjoint_streams() {
        let out = sweep(&base(), SweepAxis::H, &[1.0, 1.0]).unwrap();
        assert_eq!(out.len(), 2);
        assert_ne!(out[0].1.series.mean, out[1].1.series.mean);
        assert_eq!(out[1].1.config.game.stream, 1 << 32);
    }

    #[test]
    fn collapse_of_scaled_copies_is_zero() {
        let mk = |h: f64| {
            let mut s = ImpactSeries::exact((0..50).map(|t| h * (t as f64).sqrt()).collect(), 4, 10, h);
            s.stderr = vec![0.1; 50];
            s
        };
        let (a, b, c) = (mk(1.0), mk(2.0), mk(4.0));
        assert_eq!(collapse_metric(&[&a, &b, &c]).unwrap(), 0.0);
        let mut d = mk(2.0);
        d.mean[20] += 1.0;
        assert!(collapse_metric(&[&a, &d]).unwrap() > 3.0);
        assert!(collapse_metric(&[&a]).is_err());
        let short = ImpactSeries::exact(vec![0.0; 10], 4, 10, 1.0);
        assert!(collapse_metric(&[&a, &short]).is_err());
    }
}
