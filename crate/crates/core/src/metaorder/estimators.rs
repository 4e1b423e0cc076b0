use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::replica::ResponseKernel;
use crate::stats::Estimate;

use super::{ImpactSeries, MetaOrderSpec};

/// Minimum number of trajectory samples in a fit window.
pub const MIN_FIT_SAMPLES: usize = 10;

/// Least-squares slope of `y[t]` against `t / P` for `t` in `window`.
fn ls_slope(y: &[f64], window: &RangeInclusive<usize>, patterns: usize) -> f64 {
    let n = (window.end() - window.start() + 1) as f64;
    let p = patterns as f64;
    let xm = (*window.start() + *window.end()) as f64 / (2.0 * p);
    let ym = window.clone().map(|t| y[t]).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for t in window.clone() {
        let dx = t as f64 / p - xm;
        sxy += dx * (y[t] - ym);
        sxx += dx * dx;
    }
    sxy / sxx
}

fn check_window(series: &ImpactSeries, window: &RangeInclusive<usize>) -> Result<()> {
    if window.is_empty() || *window.end() > series.t_max() {
        return Err(Error::Measurement(format!(
            "window {window:?} is empty or beyond t_max = {}",
            series.t_max()
        )));
    }
    let len = window.end() - window.start() + 1;
    if len < MIN_FIT_SAMPLES {
        return Err(Error::Measurement(format!(
            "window of {len} samples is shorter than {MIN_FIT_SAMPLES}"
        )));
    }
    Ok(())
}

/// Default tail window `[t_max - T, t_max]`, or the part of it after `T`.
pub fn default_tail_window(series: &ImpactSeries) -> RangeInclusive<usize> {
    let t_max = series.t_max();
    let dur = series.duration as usize;
    (t_max.saturating_sub(dur)).max(dur + 1)..=t_max
}

/// Long-time limit of the impact: mean of `Delta(t)` over `tail`.
///
/// Fails with [`Error::NotSaturated`] when the least-squares slope over the
/// window exceeds twice its standard error.
pub fn permanent_impact(series: &ImpactSeries, tail: Option<RangeInclusive<usize>>) -> Result<Estimate> {
    let window = tail.unwrap_or_else(|| default_tail_window(series));
    check_window(series, &window)?;
    if *window.start() <= series.duration as usize {
        return Err(Error::Measurement(format!(
            "tail window {window:?} must start after the meta-order ends at {}",
            series.duration
        )));
    }
    let slope = series.estimate(|d| Ok(ls_slope(d, &window, series.patterns)))?;
    if slope.value.abs() > 2.0 * slope.stderr {
        return Err(Error::NotSaturated { slope: slope.value, stderr: slope.stderr });
    }
    let n = (window.end() - window.start() + 1) as f64;
    series.estimate(|d| Ok(window.clone().map(|t| d[t]).sum::<f64>() / n))
}

/// Slope of `Delta(t)` against `t / P` during execution, i.e. the
/// stationary shift of the mean excess demand. Default window `[T/2, T]`.
pub fn saturation_slope(series: &ImpactSeries, window: Option<RangeInclusive<usize>>) -> Result<Estimate> {
    let dur = series.duration as usize;
    let window = window.unwrap_or(dur / 2..=dur);
    check_window(series, &window)?;
    if *window.end() > dur {
        return Err(Error::Measurement(format!(
            "fit window {window:?} extends past the end of the meta-order at {dur}"
        )));
    }
    series.estimate(|d| Ok(ls_slope(d, &window, series.patterns)))
}

/// `(1/T) sum_{t=1..T} Delta(t) / Delta(T)`.
pub fn execution_cost_ratio(series: &ImpactSeries) -> Result<Estimate> {
    let dur = series.duration as usize;
    if dur > series.t_max() {
        return Err(Error::Measurement("trajectory ends before the meta-order".into()));
    }
    let end = series.mean[dur];
    let se = series.stderr[dur];
    if end == 0.0 || end.abs() < 3.0 * se {
        return Err(Error::UndefinedRatio(format!(
            "Delta(T) = {end:.4e} is within three standard errors ({se:.4e}) of zero"
        )));
    }
    series.estimate(|d| {
        if d[dur] == 0.0 {
            return Err(Error::UndefinedRatio("Delta(T) vanishes in a resample".into()));
        }
        Ok(d[1..=dur].iter().sum::<f64>() / dur as f64 / d[dur])
    })
}

/// Regular kernel `K_r` recovered from a step response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelEstimate {
    /// Susceptibility used for normalization; infinite when the response
    /// vanishes at saturation.
    pub chi: f64,
    pub tau: Vec<f64>,
    pub regular: Vec<f64>,
    /// `K_r(0)` extrapolated from the first smoothed samples.
    pub kr0: f64,
    /// Trapezoid integral of `K_r` over the execution window.
    pub integral: f64,
    /// False when the smoothed response rises by more than its noise.
    pub monotone: bool,
}

impl KernelEstimate {
    /// Fails in the symmetric phase, where the delta weight is infinite.
    pub fn to_kernel(&self) -> Result<ResponseKernel> {
        ResponseKernel::new(self.chi, self.tau.clone(), self.regular.clone())
    }
}

fn boxcar(x: &[f64], width: usize) -> Vec<f64> {
    let n = x.len();
    let half = width / 2;
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for v in x {
        prefix.push(prefix.last().unwrap() + v);
    }
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + width - half).min(n);
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}

/// Extracts `K_r` from the ensemble-mean excess demand during a step
/// meta-order, using `A_h - A_0 = h [1 - chi/(1+chi) int_0^tau K_r]`.
///
/// `chi` defaults to the value implied by the response averaged over the
/// last tenth of the execution window.
pub fn estimate_kernel(
    mean_excess: &[f64],
    spec: &MetaOrderSpec,
    patterns: usize,
    smoothing: usize,
    chi: Option<f64>,
) -> Result<KernelEstimate> {
    spec.validate()?;
    if smoothing == 0 {
        return Err(Error::Config("smoothing width must be at least one step".into()));
    }
    if spec.h == 0.0 {
        return Err(Error::Config("kernel needs a nonzero meta-order".into()));
    }
    let dur = spec.duration as usize;
    if mean_excess.len() < dur || dur < 4 * smoothing.max(MIN_FIT_SAMPLES / 2) {
        return Err(Error::Measurement(format!(
            "execution window of {dur} steps is too short for smoothing {smoothing}"
        )));
    }
    let response: Vec<f64> = mean_excess[..dur].iter().map(|a| a / spec.h).collect();
    let smooth = boxcar(&response, smoothing);

    let chi = match chi {
        Some(c) if c >= 0.0 => c,
        Some(c) => return Err(Error::Domain(format!("susceptibility must be nonnegative, got {c}"))),
        None => {
            let tail = (dur / 10).max(1);
            let end = smooth[dur - tail..].iter().sum::<f64>() / tail as f64;
            let adaptive = 1.0 - end;
            if adaptive <= 0.0 {
                0.0
            } else if end <= 0.0 {
                f64::INFINITY
            } else {
                adaptive / end
            }
        }
    };

    let p = patterns as f64;
    let tau: Vec<f64> = (0..dur).map(|s| s as f64 / p).collect();
    let regular: Vec<f64> = if chi == 0.0 {
        vec![0.0; dur]
    } else {
        let factor = if chi.is_infinite() { 1.0 } else { (1.0 + chi) / chi };
        (0..dur)
            .map(|s| {
                let (a, b) = match s {
                    0 => (0, 1),
                    s if s == dur - 1 => (s - 1, s),
                    s => (s - 1, s + 1),
                };
                -factor * (smooth[b] - smooth[a]) * p / (b - a) as f64
            })
            .collect()
    };

    // linear extrapolation from the first samples clear of the edge
    let first = smoothing / 2 + 1;
    let last = (first + 2 * smoothing).max(first + 4).min(dur - 1);
    let window = first..=last;
    let n = (last - first + 1) as f64;
    let slope = ls_slope(&regular, &window, patterns);
    let mean_k = window.clone().map(|s| regular[s]).sum::<f64>() / n;
    let mean_tau = (first + last) as f64 / (2.0 * p);
    let kr0 = mean_k - slope * mean_tau;

    // close the grid at tau = T / P so the kernel covers the whole order
    let mut tau = tau;
    let mut regular = regular;
    tau.push(dur as f64 / p);
    regular.push(regular[dur - 1]);

    let integral = tau
        .windows(2)
        .zip(regular.windows(2))
        .map(|(t, k)| 0.5 * (t[1] - t[0]) * (k[0] + k[1]))
        .sum();

    let noise = {
        let ss: f64 = response.iter().zip(&smooth).map(|(r, s)| (r - s).powi(2)).sum();
        (ss / dur as f64).sqrt() / (smoothing as f64).sqrt()
    };
    let max_rise = smooth
        .iter()
        .zip(smooth.iter().skip(smoothing))
        .map(|(a, b)| b - a)
        .fold(0.0, f64::max);
    let monotone = max_rise <= 3.0 * std::f64::consts::SQRT_2 * noise + 1e-12;
    if !monotone {
        log::warn!("step response rises by {max_rise:.3e}, beyond its noise {noise:.3e}; kernel may be unreliable");
    }

    Ok(KernelEstimate { chi, tau, regular, kr0, integral, monotone })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(f: impl Fn(f64) -> f64, t_max: usize, p: usize, dur: u64) -> ImpactSeries {
        ImpactSeries::exact((0..=t_max).map(|t| f(t as f64)).collect(), p, dur, 1.0)
    }

    #[test]
    fn slope_of_linear_input() {
        let s = series(|t| 0.7 * t / 16.0, 200, 16, 100);
        let e = saturation_slope(&s, None).unwrap();
        assert!((e.value - 0.7).abs() < 1e-12);
        assert_eq!(e.stderr, 0.0);
        assert!(saturation_slope(&s, Some(95..=100)).is_err());
        assert!(saturation_slope(&s, Some(50..=150)).is_err());
    }

    #[test]
    fn permanent_impact_of_a_plateau() {
        let plateau = |t: f64| if t < 50.0 { t / 10.0 } else { 5.0 };
        let s = series(plateau, 300, 10, 50);
        let e = permanent_impact(&s, None).unwrap();
        assert_eq!(e.value, 5.0);
        let shifted = series(|t| plateau(t) + 1.25, 300, 10, 50);
        assert_eq!(permanent_impact(&shifted, None).unwrap().value, 6.25);
        // still rising: refused
        let rising = series(|t| t.sqrt(), 300, 10, 50);
        assert!(matches!(permanent_impact(&rising, None), Err(Error::NotSaturated { .. })));
        assert!(permanent_impact(&s, Some(40..=60)).is_err());
    }

    #[test]
    fn cost_ratio_of_power_laws() {
        let dur = 4000;
        let lin = series(|t| 0.3 * t, dur + 10, 8, dur as u64);
        let r = execution_cost_ratio(&lin).unwrap().value;
        assert!((r - (dur as f64 + 1.0) / (2.0 * dur as f64)).abs() < 1e-12);
        let sqrt = series(|t| t.sqrt(), dur + 10, 8, dur as u64);
        assert!((execution_cost_ratio(&sqrt).unwrap().value - 2.0 / 3.0).abs() < 1e-3);
        let sq = series(|t| t * t, dur + 10, 8, dur as u64);
        assert!((execution_cost_ratio(&sq).unwrap().value - 1.0 / 3.0).abs() < 1e-3);
        let flat = series(|_| 0.0, dur + 10, 8, dur as u64);
        assert!(matches!(execution_cost_ratio(&flat), Err(Error::UndefinedRatio(_))));
    }

    fn exponential_response(chi: f64, tau_r: f64, p: usize, dur: usize) -> Vec<f64> {
        (0..dur)
            .map(|s| {
                let tau = s as f64 / p as f64;
                (1.0 + chi * (-tau / tau_r).exp()) / (1.0 + chi)
            })
            .collect()
    }

    #[test]
    fn kernel_from_exponential_response() {
        let (chi, tau_r, p, dur) = (1.5, 2.0, 200, 200 * 30);
        let resp = exponential_response(chi, tau_r, p, dur);
        let spec = MetaOrderSpec::new(1.0, dur as u64);
        let k = estimate_kernel(&resp, &spec, p, 5, None).unwrap();
        assert!((k.chi - chi).abs() < 1e-4, "chi {}", k.chi);
        assert!((k.integral - 1.0).abs() < 5e-3, "integral {}", k.integral);
        assert!((k.kr0 - 1.0 / tau_r).abs() < 5e-3, "kr0 {}", k.kr0);
        for s in [100, 1000, 3000] {
            let want = (-(s as f64) / p as f64 / tau_r).exp() / tau_r;
            assert!((k.regular[s] - want).abs() < 1e-3);
        }
        assert!(k.monotone);
        assert!(k.to_kernel().is_ok());
        // with the true chi supplied the result is the same
        let k2 = estimate_kernel(&resp, &spec, p, 5, Some(chi)).unwrap();
        assert!((k2.integral - 1.0).abs() < 5e-3);
    }

    #[test]
    fn flat_response_has_no_adaptive_part() {
        let spec = MetaOrderSpec::new(2.0, 500);
        let k = estimate_kernel(&vec![2.0; 500], &spec, 50, 3, None).unwrap();
        assert_eq!(k.chi, 0.0);
        assert!(k.regular.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn rising_response_is_flagged() {
        let spec = MetaOrderSpec::new(1.0, 400);
        let resp: Vec<f64> = (0..400).map(|s| 0.5 + 0.4 * ((s as f64) / 40.0).sin()).collect();
        let k = estimate_kernel(&resp, &spec, 20, 4, None).unwrap();
        assert!(!k.monotone);
    }

    #[test]
    fn symmetric_phase_response() {
        let spec = MetaOrderSpec::new(1.0, 2000);
        let resp: Vec<f64> = (0..2000).map(|s| (1.0 - s as f64 / 1000.0).max(0.0)).collect();
        let k = estimate_kernel(&resp, &spec, 100, 3, None).unwrap();
        assert!(k.chi.is_infinite());
        assert!((k.integral - 1.0).abs() < 1e-2);
        assert!((k.kr0 - 0.1).abs() < 1e-9);
        assert!(k.to_kernel().is_err());
    }
}
