//! Physical fiber constants, the normalization of the propagation problem
//! onto (t, zeta) in [-1, 1] x [0, 1], and the bit-rate-parameterized
//! coefficients of the normalized equation.
//!
//! The physical model is the scalar NLSE in the retarded frame,
//!
//! ```text
//! dS/dz = -(alpha/2) S - i (beta2/2) S_TT + (beta3/6) S_TTT + i gamma |S|^2 S
//! ```
//!
//! With `z = L_max zeta`, `T = T_max t`, `S = sqrt(P0) s` and
//! `L_D = 1/(R_b^2 |beta2|)` the field `s(t, zeta)` satisfies
//!
//! ```text
//! i s_z + i k1 a2 s + k1 a3 s_tt / k2^2 + i k1 a4 s_ttt / k2^3
//!       + k1 a5 |s|^2 s = 0
//! ```
//!
//! with `k1 = L_max/L_D`, `k2 = T_max R_b` and the `a` coefficients below.
//! All bit-rate dependence lives in the coefficients; the boundary
//! waveform f(t) is rate-independent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 2.99792458e8;

/// Physical fiber constants. `gamma` is derived, the rest are inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberParams {
    /// Loss per meter (1/m).
    pub alpha: f64,
    /// Second-order dispersion (s^2/m).
    pub beta2: f64,
    /// Third-order dispersion (s^3/m).
    pub beta3: f64,
    /// Nonlinear refractive index (m^2/W).
    pub n2: f64,
    /// Effective core area (m^2).
    pub a_eff: f64,
    /// Carrier wavelength (m).
    pub lambda_c: f64,
    /// Nonlinear coefficient gamma = n2 * w_c / (c * A_eff)  (1/(W m)).
    pub gamma: f64,
}

/// Builds [`FiberParams`], deriving gamma from n2, the carrier frequency
/// and the effective area.
pub fn derive_fiber_params(
    alpha: f64,
    beta2: f64,
    beta3: f64,
    n2: f64,
    a_eff: f64,
    lambda_c: f64,
) -> Result<FiberParams> {
    if !(a_eff > 0.0) {
        return Err(Error::InvalidParameter(format!("a_eff must be > 0, got {a_eff}")));
    }
    if !(lambda_c > 0.0) {
        return Err(Error::InvalidParameter(format!("lambda_c must be > 0, got {lambda_c}")));
    }
    if alpha < 0.0 || n2 < 0.0 {
        return Err(Error::InvalidParameter(
            "alpha and n2 must be non-negative".to_string(),
        ));
    }
    // omega_c / c = 2 pi / lambda, so gamma = 2 pi n2 / (lambda A_eff).
    let omega_c = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / lambda_c;
    let gamma = n2 * omega_c / (SPEED_OF_LIGHT * a_eff);
    Ok(FiberParams { alpha, beta2, beta3, n2, a_eff, lambda_c, gamma })
}

/// Launched-signal description. The waveform itself is synthesized by
/// [`crate::signal`]; only the scalar parameters live here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalSpec {
    /// Bit rate R_b (bits/s).
    pub bit_rate: f64,
    /// Peak launch power P0 (W).
    pub peak_power: f64,
    /// Ordered OOK bit pattern.
    pub pattern: Vec<u8>,
    /// Rise/fall fraction of one bit slot, in [0, 0.5].
    pub edge_fraction: f64,
}

impl SignalSpec {
    pub fn new(bit_rate: f64, peak_power: f64, pattern: Vec<u8>, edge_fraction: f64) -> Result<Self> {
        if !(bit_rate > 0.0) {
            return Err(Error::InvalidParameter(format!("bit_rate must be > 0, got {bit_rate}")));
        }
        if !(peak_power > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "peak_power must be > 0, got {peak_power}"
            )));
        }
        if pattern.is_empty() {
            return Err(Error::InvalidParameter("pattern must be non-empty".to_string()));
        }
        if !(0.0..=0.5).contains(&edge_fraction) {
            return Err(Error::InvalidParameter(format!(
                "edge_fraction must be in [0, 0.5], got {edge_fraction}"
            )));
        }
        Ok(Self { bit_rate, peak_power, pattern, edge_fraction })
    }
}

/// Coordinate/intensity transform between the physical and the
/// normalized problem for one bit rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationMap {
    /// Dispersion length 1/(R_b^2 |beta2|)  (m).
    pub l_d: f64,
    /// Nonlinear length 1/(gamma P0)  (m); inf when gamma*P0 = 0.
    pub l_nl: f64,
    /// Propagation distance mapped to zeta = 1  (m).
    pub l_max: f64,
    /// Half time window mapped to t = 1  (s).
    pub t_max: f64,
    /// L_max / L_D.
    pub kappa1: f64,
    /// T_max * R_b.
    pub kappa2: f64,
    /// Peak power used for the amplitude scaling  (W).
    pub p0: f64,
    /// Bit rate the map was built for  (bits/s).
    pub bit_rate: f64,
}

/// Computes dispersion/nonlinear lengths and the normalized-coordinate
/// scales for `spec.bit_rate`.
pub fn compute_normalization(
    fiber: &FiberParams,
    spec: &SignalSpec,
    l_max: f64,
    t_max: f64,
) -> Result<NormalizationMap> {
    if fiber.beta2 == 0.0 {
        return Err(Error::DegenerateDispersion);
    }
    if !(l_max > 0.0) || !(t_max > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "l_max and t_max must be > 0, got {l_max}, {t_max}"
        )));
    }
    let rb = spec.bit_rate;
    let l_d = 1.0 / (rb * rb * fiber.beta2.abs());
    let gp = fiber.gamma * spec.peak_power;
    let l_nl = if gp > 0.0 { 1.0 / gp } else { f64::INFINITY };
    Ok(NormalizationMap {
        l_d,
        l_nl,
        l_max,
        t_max,
        kappa1: l_max / l_d,
        kappa2: t_max * rb,
        p0: spec.peak_power,
        bit_rate: rb,
    })
}

/// Coefficients of the normalized equation for one bit rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NlseCoefficients {
    /// Always 1 (time-evolution term).
    pub a1: f64,
    /// Attenuation: alpha L_D / 2.
    pub a2: f64,
    /// Dispersion sign: -sign(beta2)/2.
    pub a3: f64,
    /// Third-order dispersion: -beta3 L_D R_b^3 / 6.
    pub a4: f64,
    /// Kerr: gamma P0 L_D = L_D / L_NL.
    pub a5: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    /// Bit rate these coefficients encode (bits/s).
    pub bit_rate: f64,
}

/// Substitutes the normalization into the physical equation and reads
/// off the coefficients of the normalized one.
pub fn compute_coefficients(
    map: &NormalizationMap,
    fiber: &FiberParams,
    bit_rate: f64,
) -> NlseCoefficients {
    let l_d = map.l_d;
    NlseCoefficients {
        a1: 1.0,
        a2: fiber.alpha * l_d / 2.0,
        a3: -fiber.beta2.signum() / 2.0,
        a4: -fiber.beta3 * l_d * bit_rate.powi(3) / 6.0,
        a5: fiber.gamma * map.p0 * l_d,
        kappa1: map.kappa1,
        kappa2: map.kappa2,
        bit_rate,
    }
}

impl NlseCoefficients {
    /// Multiplier of `s` in the residual (attenuation).
    pub fn atten(&self) -> f64 {
        self.kappa1 * self.a2
    }
    /// Multiplier of `s_tt`.
    pub fn disp(&self) -> f64 {
        self.kappa1 * self.a3 / (self.kappa2 * self.kappa2)
    }
    /// Multiplier of `s_ttt`.
    pub fn disp3(&self) -> f64 {
        self.kappa1 * self.a4 / (self.kappa2 * self.kappa2 * self.kappa2)
    }
    /// Multiplier of `|s|^2 s`.
    pub fn kerr(&self) -> f64 {
        self.kappa1 * self.a5
    }
}
