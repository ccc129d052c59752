//! Collocation grid on the normalized (t, zeta) domain and fields
//! sampled on it.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform collocation grid: t in [-1, 1], zeta in [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub t_nodes: Vec<f64>,
    pub zeta_nodes: Vec<f64>,
    /// Indices into `t_nodes` where the zeta = 0 boundary is sampled.
    pub initial_indices: Vec<usize>,
}

/// Builds a uniform grid with `n_initial` boundary sample indices spread
/// evenly over the t nodes.
pub fn build_grid(n_t: usize, n_zeta: usize, n_initial: usize) -> Result<Grid> {
    if n_t < 2 || n_zeta < 2 {
        return Err(Error::InvalidGrid(format!(
            "need at least 2 nodes per axis, got {n_t} x {n_zeta}"
        )));
    }
    if n_initial < 1 || n_initial > n_t {
        return Err(Error::InvalidGrid(format!(
            "n_initial must be in [1, n_t], got {n_initial}"
        )));
    }
    let t_nodes: Vec<f64> = (0..n_t)
        .map(|i| -1.0 + 2.0 * i as f64 / (n_t - 1) as f64)
        .collect();
    let zeta_nodes: Vec<f64> = (0..n_zeta)
        .map(|j| j as f64 / (n_zeta - 1) as f64)
        .collect();
    let initial_indices: Vec<usize> = if n_initial == 1 {
        vec![0]
    } else {
        (0..n_initial)
            .map(|i| ((i * (n_t - 1)) as f64 / (n_initial - 1) as f64).round() as usize)
            .collect()
    };
    Ok(Grid { t_nodes, zeta_nodes, initial_indices })
}

impl Grid {
    pub fn n_t(&self) -> usize {
        self.t_nodes.len()
    }
    pub fn n_zeta(&self) -> usize {
        self.zeta_nodes.len()
    }
    /// Total collocation count N_g.
    pub fn n_collocation(&self) -> usize {
        self.n_t() * self.n_zeta()
    }
    pub fn n_initial(&self) -> usize {
        self.initial_indices.len()
    }
    pub fn dt(&self) -> f64 {
        2.0 / (self.n_t() - 1) as f64
    }
    pub fn dzeta(&self) -> f64 {
        1.0 / (self.n_zeta() - 1) as f64
    }
}

/// Complex field sampled on a [`Grid`], stored as separate real and
/// imaginary parts in zeta-major layout.
#[derive(Debug, Clone, PartialEq)]
pub struct GriddedField {
    pub n_t: usize,
    pub n_zeta: usize,
    pub real_part: Vec<f64>,
    pub imag_part: Vec<f64>,
}

impl GriddedField {
    pub fn zeros(grid: &Grid) -> Self {
        let n = grid.n_collocation();
        Self {
            n_t: grid.n_t(),
            n_zeta: grid.n_zeta(),
            real_part: vec![0.0; n],
            imag_part: vec![0.0; n],
        }
    }

    #[inline]
    pub fn idx(&self, it: usize, iz: usize) -> usize {
        iz * self.n_t + it
    }

    #[inline]
    pub fn re(&self, it: usize, iz: usize) -> f64 {
        self.real_part[self.idx(it, iz)]
    }

    #[inline]
    pub fn im(&self, it: usize, iz: usize) -> f64 {
        self.imag_part[self.idx(it, iz)]
    }

    pub fn set(&mut self, it: usize, iz: usize, re: f64, im: f64) {
        let k = self.idx(it, iz);
        self.real_part[k] = re;
        self.imag_part[k] = im;
    }

    /// Mean of |s|^2 over all nodes.
    pub fn mean_sq(&self) -> f64 {
        let n = self.real_part.len();
        self.real_part
            .iter()
            .zip(&self.imag_part)
            .map(|(r, i)| r * r + i * i)
            .sum::<f64>()
            / n as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.real_part
            .iter()
            .zip(&self.imag_part)
            .map(|(r, i)| (r * r + i * i).sqrt())
            .fold(0.0, f64::max)
    }

    /// Relative L2 distance ||self - other|| / ||other||.
    pub fn rel_l2_distance(&self, other: &GriddedField) -> f64 {
        assert_eq!(self.real_part.len(), other.real_part.len());
        let mut num = 0.0;
        let mut den = 0.0;
        for k in 0..self.real_part.len() {
            let dr = self.real_part[k] - other.real_part[k];
            let di = self.imag_part[k] - other.imag_part[k];
            num += dr * dr + di * di;
            den += other.real_part[k] * other.real_part[k]
                + other.imag_part[k] * other.imag_part[k];
        }
        (num / den).sqrt()
    }

    /// CSV export with columns (t, zeta, s_real, s_imag).
    pub fn write_csv<W: Write>(&self, grid: &Grid, w: &mut W) -> Result<()> {
        writeln!(w, "t,zeta,s_real,s_imag")?;
        for iz in 0..self.n_zeta {
            for it in 0..self.n_t {
                writeln!(
                    w,
                    "{},{},{},{}",
                    grid.t_nodes[it],
                    grid.zeta_nodes[iz],
                    self.re(it, iz),
                    self.im(it, iz)
                )?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_scale_grid_counts() {
        let g = build_grid(312, 11, 100).unwrap();
        assert_eq!(g.n_collocation(), 3432);
        assert_eq!(g.n_initial(), 100);
        assert_eq!(g.t_nodes[0], -1.0);
        assert_eq!(*g.t_nodes.last().unwrap(), 1.0);
        assert_eq!(g.zeta_nodes[0], 0.0);
        assert_eq!(*g.zeta_nodes.last().unwrap(), 1.0);
    }

    #[test]
    fn endpoints_only() {
        let g = build_grid(2, 2, 1).unwrap();
        assert_eq!(g.t_nodes, vec![-1.0, 1.0]);
        assert_eq!(g.zeta_nodes, vec![0.0, 1.0]);
        assert_eq!(g.initial_indices, vec![0]);
    }

    #[test]
    fn uniform_spacing() {
        let g = build_grid(5, 3, 5).unwrap();
        assert_eq!(g.dt(), 0.5);
        assert_eq!(g.dzeta(), 0.5);
        assert_eq!(g.initial_indices, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn initial_indices_strictly_increasing() {
        for (nt, ni) in [(312, 100), (7, 3), (100, 100), (50, 2)] {
            let g = build_grid(nt, 3, ni).unwrap();
            assert!(g.initial_indices.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(g.initial_indices.len(), ni);
            assert!(*g.initial_indices.last().unwrap() < nt);
        }
    }

    #[test]
    fn rejects_undersized_grids() {
        assert!(build_grid(1, 11, 1).is_err());
        assert!(build_grid(312, 1, 1).is_err());
        assert!(build_grid(4, 4, 0).is_err());
        assert!(build_grid(4, 4, 5).is_err());
    }

    #[test]
    fn csv_roundtrip_shape() {
        let g = build_grid(3, 2, 2).unwrap();
        let mut f = GriddedField::zeros(&g);
        f.set(1, 1, 0.5, -0.25);
        let mut buf = Vec::new();
        f.write_csv(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + 6);
        assert_eq!(lines[0], "t,zeta,s_real,s_imag");
        assert!(lines.iter().any(|l| l.contains("0.5,-0.25")));
    }
}
