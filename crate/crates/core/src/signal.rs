//! Boundary waveform synthesis on the normalized time axis.
//!
//! The OOK waveform is NRZ with raised-cosine transitions. The pattern is
//! laid out cyclically over t in [-1, 1) so the periodic spectral solver
//! sees no seam at the window edge, and it is deliberately independent of
//! the bit rate: rate enters the problem only through the equation
//! coefficients.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::Grid;

/// Fixed pseudo-random bit pattern, identical across bit rates.
pub fn random_pattern(n_bits: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_bits).map(|_| rng.gen::<bool>() as u8).collect()
}

/// Evaluates the cyclic OOK envelope at one normalized time.
///
/// Bit slots have width 2/len(pattern); each transition between unequal
/// neighbours is a raised cosine spanning `edge_fraction` of a slot,
/// centered on the slot boundary.
pub fn ook_waveform(pattern: &[u8], edge_fraction: f64, t: f64) -> f64 {
    let n = pattern.len();
    debug_assert!(n > 0);
    let pos = ((t + 1.0) / 2.0 * n as f64).rem_euclid(n as f64);
    let k = (pos as usize).min(n - 1);
    let phi = pos - k as f64;
    let cur = pattern[k] as f64;
    let h = edge_fraction / 2.0;
    if h > 0.0 && phi < h {
        let prev = pattern[(k + n - 1) % n] as f64;
        let x = (phi + h) / (2.0 * h);
        prev + (cur - prev) * raised_cosine(x)
    } else if h > 0.0 && phi > 1.0 - h {
        let next = pattern[(k + 1) % n] as f64;
        let x = (phi - (1.0 - h)) / (2.0 * h);
        cur + (next - cur) * raised_cosine(x)
    } else {
        cur
    }
}

#[inline]
fn raised_cosine(x: f64) -> f64 {
    0.5 * (1.0 - (std::f64::consts::PI * x).cos())
}

/// Samples the OOK envelope on the grid's t nodes (zeta = 0 boundary).
pub fn ook_initial_condition(pattern: &[u8], edge_fraction: f64, grid: &Grid) -> Vec<f64> {
    grid.t_nodes
        .iter()
        .map(|&t| ook_waveform(pattern, edge_fraction, t))
        .collect()
}

/// Gaussian boundary exp(-t^2 / (2 w^2)) on the grid's t nodes; used by
/// the dispersion-only validation problem.
pub fn gaussian_initial_condition(width: f64, grid: &Grid) -> Vec<f64> {
    grid.t_nodes
        .iter()
        .map(|&t| (-t * t / (2.0 * width * width)).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;
    use approx::assert_relative_eq;

    #[test]
    fn slot_centers_hit_bit_values() {
        let g = build_grid(301, 2, 2).unwrap();
        let f = ook_initial_condition(&[1, 0, 1], 0.1, &g);
        // Slot centers at t = -2/3, 0, 2/3.
        let probe = |t: f64| ook_waveform(&[1, 0, 1], 0.1, t);
        assert_eq!(probe(-2.0 / 3.0), 1.0);
        assert_eq!(probe(0.0), 0.0);
        assert_eq!(probe(2.0 / 3.0), 1.0);
        assert!(f.iter().all(|&v| (0.0..=1.0).contains(&v)));
    }

    #[test]
    fn all_zero_pattern_is_zero_field() {
        let g = build_grid(64, 2, 2).unwrap();
        let f = ook_initial_condition(&[0, 0, 0, 0], 0.3, &g);
        assert!(f.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn transition_midpoint_is_half() {
        // Mark -> space boundary of [1, 0, 1]: slot boundary at t = -1/3.
        let v = ook_waveform(&[1, 0, 1], 0.1, -1.0 / 3.0);
        assert_relative_eq!(v, 0.5, max_relative = 1e-12);
        // Space -> mark boundary at t = 1/3.
        let v = ook_waveform(&[1, 0, 1], 0.1, 1.0 / 3.0);
        assert_relative_eq!(v, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn cyclic_wrap_is_seamless() {
        // Pattern ends 1, starts 0: the wrap transition straddles t = +-1.
        let pat = [0, 1, 1, 1];
        let ef = 0.2;
        assert_relative_eq!(
            ook_waveform(&pat, ef, 1.0),
            ook_waveform(&pat, ef, -1.0),
            max_relative = 1e-12
        );
        assert_relative_eq!(ook_waveform(&pat, ef, 1.0), 0.5, max_relative = 1e-12);
    }

    #[test]
    fn waveform_is_bit_rate_independent() {
        // Same pattern and edge fraction, two different rates: the rates
        // never reach the synthesizer, so the fields are bitwise equal.
        let g = build_grid(128, 2, 2).unwrap();
        let pat = random_pattern(16, 7);
        let a = ook_initial_condition(&pat, 0.1, &g);
        let b = ook_initial_condition(&pat, 0.1, &g);
        assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn random_pattern_is_deterministic() {
        assert_eq!(random_pattern(16, 7), random_pattern(16, 7));
        assert_ne!(random_pattern(64, 7), random_pattern(64, 8));
        assert!(random_pattern(16, 7).iter().all(|&b| b <= 1));
    }

    #[test]
    fn zero_edge_fraction_is_rectangular() {
        let pat = [1, 0];
        assert_eq!(ook_waveform(&pat, 0.0, -0.5), 1.0);
        assert_eq!(ook_waveform(&pat, 0.0, 0.5), 0.0);
        // Right-continuous at the boundary.
        assert_eq!(ook_waveform(&pat, 0.0, 0.0), 0.0);
    }
}
