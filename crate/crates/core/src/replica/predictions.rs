//! Closed-form impact predictions in terms of the susceptibility and of the
//! linear-response kernel `K(tau) = (1 + chi) delta(tau) - chi K_r(tau)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn finite_chi(chi: f64) -> Result<()> {
    if chi.is_finite() && chi >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("susceptibility must be finite and nonnegative, got {chi}")))
    }
}

/// Stationary shift of the mean excess demand under a constant extra
/// demand `h`: `h / (1 + chi)`. Vanishes for infinite `chi`.
pub fn saturation_shift(h: f64, chi: f64) -> f64 {
    if chi.is_infinite() {
        0.0
    } else {
        h / (1.0 + chi)
    }
}

/// Permanent impact `h T / (P (1 + chi))` of a step meta-order. Zero for
/// infinite `chi`.
pub fn permanent_impact_theory(h: f64, duration: u64, patterns: usize, chi: f64) -> f64 {
    saturation_shift(h * duration as f64 / patterns as f64, chi)
}

/// Linear-response kernel sampled on a grid of rescaled times `tau = t/P`.
///
/// The singular part `(1 + chi) delta(tau)` is carried implicitly by `chi`;
/// `regular` holds samples of `K_r` (normalized to unit integral in the
/// ideal case).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseKernel {
    pub chi: f64,
    pub tau: Vec<f64>,
    pub regular: Vec<f64>,
}

impl ResponseKernel {
    pub fn new(chi: f64, tau: Vec<f64>, regular: Vec<f64>) -> Result<Self> {
        finite_chi(chi)?;
        if tau.len() != regular.len() || tau.len() < 2 {
            return Err(Error::Domain("kernel grid needs at least two matching samples".into()));
        }
        if tau.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("kernel grid must be strictly increasing".into()));
        }
        Ok(ResponseKernel { chi, tau, regular })
    }

    /// Samples `f(tau)` on `n + 1` equally spaced points of `[0, tau_max]`.
    pub fn from_fn(chi: f64, tau_max: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let tau: Vec<f64> = (0..=n).map(|k| tau_max * k as f64 / n as f64).collect();
        let regular = tau.iter().map(|&t| f(t)).collect();
        Self::new(chi, tau, regular)
    }

    /// A kernel with no adaptive part.
    pub fn pure_delta(tau_max: f64) -> Self {
        Self::new(0.0, vec![0.0, tau_max], vec![0.0, 0.0]).expect("valid grid")
    }

    pub fn delta_weight(&self) -> f64 {
        1.0 + self.chi
    }

    /// Linear interpolation of `K_r`; zero outside the sampled range.
    pub fn regular_at(&self, t: f64) -> f64 {
        let n = self.tau.len();
        if t < self.tau[0] || t > self.tau[n - 1] {
            return 0.0;
        }
        let k = self.tau.partition_point(|&x| x <= t).clamp(1, n - 1);
        let (t0, t1) = (self.tau[k - 1], self.tau[k]);
        let w = (t - t0) / (t1 - t0);
        self.regular[k - 1] * (1.0 - w) + self.regular[k] * w
    }

    /// Trapezoid integral of `K_r` over the grid.
    pub fn regular_integral(&self) -> f64 {
        self.tau
            .windows(2)
            .zip(self.regular.windows(2))
            .map(|(t, k)| 0.5 * (t[1] - t[0]) * (k[0] + k[1]))
            .sum()
    }
}

/// `kappa_T^m = int_0^1 x^m K(x T / P) dx` for `m` in `{0, 1, 2}`.
///
/// The delta sits at `x = 0` and contributes its full weight `(1+chi) P/T`
/// to `m = 0` only. The regular part is integrated with the trapezoid rule
/// on the kernel's own grid, mapped to `x = tau P / T`.
pub fn kappa_moments(kernel: &ResponseKernel, duration: u64, patterns: usize, m: u32) -> Result<f64> {
    if m > 2 {
        return Err(Error::Domain(format!("kappa moment order must be 0, 1 or 2, got {m}")));
    }
    if duration == 0 {
        return Err(Error::Domain("duration must be positive".into()));
    }
    let t_scaled = duration as f64 / patterns as f64;
    let last = *kernel.tau.last().expect("non-empty grid");
    if kernel.tau[0].abs() > 1e-12 || last < t_scaled * (1.0 - 1e-12) {
        return Err(Error::Domain(format!(
            "kernel grid [{}, {last}] does not cover [0, {t_scaled}]",
            kernel.tau[0]
        )));
    }
    let weight = |tau: f64| (tau / t_scaled).powi(m as i32);
    let mut integral = 0.0;
    for (t, k) in kernel.tau.windows(2).zip(kernel.regular.windows(2)) {
        if t[0] >= t_scaled {
            break;
        }
        let (t1, k1) = if t[1] > t_scaled {
            (t_scaled, kernel.regular_at(t_scaled))
        } else {
            (t[1], k[1])
        };
        integral += 0.5 * (t1 - t[0]) * (weight(t[0]) * k[0] + weight(t1) * k1);
    }
    // dx = dtau / t_scaled
    let regular = kernel.chi * integral / t_scaled;
    let singular = if m == 0 { kernel.delta_weight() / t_scaled } else { 0.0 };
    Ok(singular - regular)
}

/// The three moments `(kappa^0, kappa^1, kappa^2)`.
pub fn kappa_triple(kernel: &ResponseKernel, duration: u64, patterns: usize) -> Result<[f64; 3]> {
    Ok([
        kappa_moments(kernel, duration, patterns, 0)?,
        kappa_moments(kernel, duration, patterns, 1)?,
        kappa_moments(kernel, duration, patterns, 2)?,
    ])
}

/// Execution-cost ratio `1 - (kappa0 - kappa2) / (2 (kappa0 - kappa1))`.
pub fn exec_cost_ratio_theory(kappa0: f64, kappa1: f64, kappa2: f64) -> Result<f64> {
    let denom = kappa0 - kappa1;
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::UndefinedRatio("kappa0 equals kappa1".into()));
    }
    Ok(1.0 - 0.5 * (kappa0 - kappa2) / denom)
}

/// Short-execution expansion `1/2 + (T / 12P) (chi / (1+chi)) K_r(0)`.
pub fn small_t_ratio(duration: u64, patterns: usize, chi: f64, kr0: f64) -> f64 {
    let adaptive = if chi.is_infinite() { 1.0 } else { chi / (1.0 + chi) };
    0.5 + duration as f64 / (12.0 * patterns as f64) * adaptive * kr0
}

/// Exponent `alpha` of a power-law impact `t^alpha` with the given
/// execution-cost ratio `1 / (1 + alpha)`.
pub fn concavity_exponent(ratio: f64) -> Result<f64> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::Domain(format!("ratio must lie in (0, 1), got {ratio}")));
    }
    Ok(1.0 / ratio - 1.0)
}
