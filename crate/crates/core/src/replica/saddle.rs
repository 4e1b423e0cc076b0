use serde::{Deserialize, Serialize};

use super::special::{erf_scaled, self_overlap};
use crate::error::{Error, Result};

pub const ROOT_TOLERANCE: f64 = 1e-12;
pub const MAX_ROOT_ITERATIONS: usize = 200;

/// Replica-symmetric stationary state at densities `(n_s, n_p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplicaSolution {
    pub n_s: f64,
    pub n_p: f64,
    /// `zeta = rho / sqrt(R n_s)`.
    pub zeta: f64,
    /// Agent susceptibility.
    pub chi: f64,
    /// Self-overlap `G = F(zeta)`.
    pub g: f64,
    /// `(n_p + n_s F) (1 - (n_s/2) Erf(zeta/sqrt2))^2`.
    ///
    /// Simulations match this as the measured predictability divided by
    /// `P` (not by `N_s`); it tends to `n_p` as `n_s -> 0`.
    pub h_per_ns: f64,
    pub rho: f64,
    pub r: f64,
}

/// Point where the susceptibility diverges for a given producer density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub n_p: f64,
    pub zeta: f64,
    pub n_s: f64,
}

/// Bracketed root of a function that is negative at `lo` and positive at
/// `hi`: bisection down to a narrow bracket, then Illinois-weighted secant
/// steps kept inside the bracket.
pub(crate) fn find_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::Numerical(format!(
            "no sign change on [{lo}, {hi}]: f = ({f_lo}, {f_hi})"
        )));
    }
    let mut side = 0i8;
    for iter in 0..MAX_ROOT_ITERATIONS {
        let width = hi - lo;
        let x = if width > 1e-6 * hi.abs() {
            0.5 * (lo + hi)
        } else {
            let s = hi - f_hi * width / (f_hi - f_lo);
            if s > lo && s < hi {
                s
            } else {
                0.5 * (lo + hi)
            }
        };
        let fx = f(x);
        if fx == 0.0 || (fx.abs() < ROOT_TOLERANCE * 1e-2 && iter > 0) || width <= 4.0 * f64::EPSILON * hi.abs() {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
            f_lo = fx;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            f_hi = fx;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        }
    }
    let x = if f_lo.abs() < f_hi.abs() { lo } else { hi };
    if f(x).abs() < ROOT_TOLERANCE {
        Ok(x)
    } else {
        Err(Error::Numerical("root finder did not converge".into()))
    }
}

/// Expands `[lo, hi]` until `f(lo) < 0 < f(hi)`.
fn bracket(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<(f64, f64)> {
    for _ in 0..200 {
        if f(lo) < 0.0 {
            break;
        }
        lo *= 0.5;
    }
    for _ in 0..200 {
        if f(hi) > 0.0 {
            break;
        }
        hi *= 2.0;
    }
    if f(lo) < 0.0 && f(hi) > 0.0 {
        Ok((lo, hi))
    } else {
        Err(Error::Numerical("could not bracket root".into()))
    }
}

fn check_density(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Residual of the transcendental equation `n_s F(zeta) = 1/zeta^2 - n_p`.
pub fn zeta_residual(zeta: f64, n_s: f64, n_p: f64) -> f64 {
    n_s * self_overlap(zeta).unwrap_or(f64::NAN) - 1.0 / (zeta * zeta) + n_p
}

/// Solves the transcendental equation for `zeta` in the asymmetric phase.
pub fn solve_zeta(n_s: f64, n_p: f64) -> Result<f64> {
    check_density("n_s", n_s)?;
    check_density("n_p", n_p)?;
    let g = |z: f64| zeta_residual(z, n_s, n_p);
    let (lo, hi) = bracket(&g, 1e-3, 10.0)?;
    let zeta = find_root(g, lo, hi)?;
    if 0.5 * n_s * erf_scaled(zeta) >= 1.0 {
        return Err(Error::SymmetricPhase { n_s, n_p });
    }
    Ok(zeta)
}

/// `chi = n_s Erf(zeta/sqrt2) / (2 - n_s Erf(zeta/sqrt2))`; infinite once the
/// denominator reaches zero (to within a few ulps).
pub fn susceptibility(zeta: f64, n_s: f64) -> Result<f64> {
    if !(zeta > 0.0) {
        return Err(Error::Domain(format!("susceptibility needs zeta > 0, got {zeta}")));
    }
    if !(n_s >= 0.0) {
        return Err(Error::Domain(format!("n_s must be nonnegative, got {n_s}")));
    }
    let e = n_s * erf_scaled(zeta);
    let denom = 2.0 - e;
    Ok(if denom <= 8.0 * f64::EPSILON { f64::INFINITY } else { e / denom })
}

/// Full stationary-state solution for `(n_s, n_p)` in the asymmetric phase.
pub fn theory(n_s: f64, n_p: f64) -> Result<ReplicaSolution> {
    let zeta = solve_zeta(n_s, n_p)?;
    Ok(solution_at(zeta, n_s, n_p))
}

pub(crate) fn solution_at(zeta: f64, n_s: f64, n_p: f64) -> ReplicaSolution {
    let g = self_overlap(zeta).expect("zeta is positive");
    let chi = susceptibility(zeta, n_s).expect("zeta is positive");
    let inv = 1.0 - 0.5 * n_s * erf_scaled(zeta);
    ReplicaSolution {
        n_s,
        n_p,
        zeta,
        chi,
        g,
        h_per_ns: (n_p + n_s * g) * inv * inv,
        rho: 1.0 / (1.0 + chi),
        r: (n_p / n_s + g) / ((1.0 + chi) * (1.0 + chi)),
    }
}

impl ReplicaSolution {
    /// Same quantity as `h_per_ns`, through `(n_p + G n_s) / (1 + chi)^2`.
    pub fn h_per_ns_from_chi(&self) -> f64 {
        (self.n_p + self.g * self.n_s) / ((1.0 + self.chi) * (1.0 + self.chi))
    }
}

/// Critical speculator density `n_s*` at which `chi` diverges.
///
/// Eliminates `n_s = 2 / Erf(zeta/sqrt2)` and root-finds the remaining
/// equation in `zeta`.
pub fn critical_ns(n_p: f64) -> Result<CriticalPoint> {
    check_density("n_p", n_p)?;
    let q = |z: f64| {
        let n_s = 2.0 / erf_scaled(z);
        n_s * self_overlap(z).unwrap_or(f64::NAN) - 1.0 / (z * z) + n_p
    };
    let (lo, hi) = bracket(&q, 1e-3, 10.0)?;
    let zeta = find_root(q, lo, hi)?;
    Ok(CriticalPoint {
        n_p,
        zeta,
        n_s: 2.0 / erf_scaled(zeta),
    })
}

impl CriticalPoint {
    /// Residuals of `(n_s/2) Erf = 1` and of the transcendental equation.
    pub fn residuals(&self) -> (f64, f64) {
        (
            0.5 * self.n_s * erf_scaled(self.zeta) - 1.0,
            zeta_residual(self.zeta, self.n_s, self.n_p),
        )
    }
}
