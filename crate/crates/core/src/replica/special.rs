use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};

/// Below this argument the closed form of [`self_overlap`] loses digits to
/// cancellation and the Taylor series takes over.
pub const SERIES_SWITCH: f64 = 0.1;

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// `Erf(zeta / sqrt 2)`, the probability that a standard normal lies in
/// `(-zeta, zeta)`.
pub fn erf_scaled(zeta: f64) -> f64 {
    erf(zeta * FRAC_1_SQRT_2)
}

/// Self-overlap `G = F(zeta)` of the replica-symmetric stationary state:
///
/// ```text
/// F(z) = -exp(-z^2/2) / (sqrt(2 pi) z) + Erf(z/sqrt2) / (2 z^2) + Erfc(z/sqrt2) / 2
/// ```
///
/// Equivalently `F(z) = E[clip(u/z, 0, 1)^2]` for standard normal `u`.
/// Strictly decreasing from 1/2 at `z -> 0+` to 0 at infinity.
pub fn self_overlap(zeta: f64) -> Result<f64> {
    if !(zeta > 0.0) {
        return Err(Error::Domain(format!("self-overlap needs zeta > 0, got {zeta}")));
    }
    let inv_sqrt_2pi = 1.0 / (2.0 * PI).sqrt();
    if zeta < SERIES_SWITCH {
        let z2 = zeta * zeta;
        // odd Taylor coefficients of sqrt(2 pi) (F(z) - 1/2), through z^13
        const COEFFS: [f64; 7] = [
            -2.0 / 3.0,
            1.0 / 15.0,
            -1.0 / 140.0,
            1.0 / 1512.0,
            -1.0 / 19008.0,
            1.0 / 274560.0,
            -1.0 / 4492800.0,
        ];
        let poly = zeta * COEFFS.iter().rev().fold(0.0, |acc, &c| acc * z2 + c);
        return Ok(0.5 + inv_sqrt_2pi * poly);
    }
    let half = zeta * FRAC_1_SQRT_2;
    Ok(-inv_sqrt_2pi * (-0.5 * zeta * zeta).exp() / zeta
        + erf(half) / (2.0 * zeta * zeta)
        + 0.5 * erfc(half))
}
