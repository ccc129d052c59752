//! Split-step Fourier reference solver for the physical propagation
//! equation, plus the finite-difference residual evaluator for the
//! normalized equation.
//!
//! The solver integrates
//!
//! ```text
//! dS/dz = -(alpha/2) S - i (beta2/2) S_TT + (beta3/6) S_TTT + i gamma |S|^2 S
//! ```
//!
//! with the linear part applied spectrally and the Kerr rotation applied
//! pointwise. Steps are shortened so that requested snapshot distances
//! are landed on exactly; nothing is interpolated in z.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{angular_frequencies, FftPair};
use crate::grid::{Grid, GriddedField};
use crate::physics::{FiberParams, NlseCoefficients, NormalizationMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitScheme {
    /// Strang splitting, 2nd order in the step length.
    Symmetric,
    /// Plain linear-then-nonlinear splitting, 1st order.
    Simple,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SsfmConfig {
    /// Target computing-unit length L_u (m); segments are subdivided so no
    /// step exceeds it.
    pub step_length: f64,
    /// Time samples per window, power of two.
    pub n_time_samples: usize,
    /// Full time window 2 T_max (s).
    pub window: f64,
    pub scheme: SplitScheme,
}

impl SsfmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step_length > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "step_length must be > 0, got {}",
                self.step_length
            )));
        }
        if self.n_time_samples < 8 || !self.n_time_samples.is_power_of_two() {
            return Err(Error::InvalidConfig(format!(
                "n_time_samples must be a power of two >= 8, got {}",
                self.n_time_samples
            )));
        }
        if !(self.window > 0.0) {
            return Err(Error::InvalidConfig(format!("window must be > 0, got {}", self.window)));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.window / self.n_time_samples as f64
    }
}

/// Field snapshots along the fiber. Units are W^(1/2); the first snapshot
/// is the launched field at z = 0.
#[derive(Debug, Clone)]
pub struct FieldEvolution {
    pub window: f64,
    pub snapshots: Vec<(f64, Vec<Complex64>)>,
}

impl FieldEvolution {
    /// CSV export with columns (z_m, sample_index, re, im).
    pub fn write_csv<W: std::io::Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "z_m,sample_index,re,im")?;
        for (z, field) in &self.snapshots {
            for (i, v) in field.iter().enumerate() {
                writeln!(w, "{},{},{},{}", z, i, v.re, v.im)?;
            }
        }
        Ok(())
    }
}

/// Propagates `launch` over `distance`, recording snapshots at the
/// requested distances (z = 0 is always recorded first).
pub fn propagate(
    launch: &[Complex64],
    fiber: &FiberParams,
    distance: f64,
    cfg: &SsfmConfig,
    snapshot_distances: &[f64],
) -> Result<FieldEvolution> {
    cfg.validate()?;
    if launch.len() != cfg.n_time_samples {
        return Err(Error::InvalidConfig(format!(
            "launch has {} samples, config says {}",
            launch.len(),
            cfg.n_time_samples
        )));
    }
    if distance < 0.0 {
        return Err(Error::InvalidParameter(format!("distance must be >= 0, got {distance}")));
    }
    for &d in snapshot_distances {
        if d < 0.0 || d > distance {
            return Err(Error::InvalidParameter(format!(
                "snapshot distance {d} outside [0, {distance}]"
            )));
        }
    }

    // Distances to land on, deduplicated and sorted.
    let mut marks: Vec<f64> = snapshot_distances.to_vec();
    marks.push(distance);
    marks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    marks.dedup();
    marks.retain(|&d| d > 0.0);

    let n = cfg.n_time_samples;
    let fft = FftPair::new(n);
    let omega = angular_frequencies(n, cfg.dt());

    // dS/dz linear symbol: -alpha/2 + i beta2/2 w^2 - i beta3/6 w^3
    // (d/dT maps to +i w in this bin layout).
    let symbol: Vec<Complex64> = omega
        .iter()
        .map(|&w| {
            Complex64::new(
                -fiber.alpha / 2.0,
                fiber.beta2 / 2.0 * w * w - fiber.beta3 / 6.0 * w * w * w,
            )
        })
        .collect();

    let wants = |z: f64| -> bool {
        snapshot_distances.iter().any(|&d| close(d, z, distance))
    };

    let mut field = launch.to_vec();
    let mut snapshots = vec![(0.0, field.clone())];
    let mut z = 0.0;
    let mut step_index = 0usize;

    for &mark in &marks {
        let seg = mark - z;
        if seg <= 0.0 {
            continue;
        }
        let n_steps = (seg / cfg.step_length).ceil().max(1.0) as usize;
        let h = seg / n_steps as f64;
        for _ in 0..n_steps {
            step_index += 1;
            match cfg.scheme {
                SplitScheme::Symmetric => {
                    linear_step(&mut field, &symbol, h / 2.0, &fft);
                    nonlinear_step(&mut field, fiber.gamma, h);
                    linear_step(&mut field, &symbol, h / 2.0, &fft);
                }
                SplitScheme::Simple => {
                    linear_step(&mut field, &symbol, h, &fft);
                    nonlinear_step(&mut field, fiber.gamma, h);
                }
            }
            if field.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
                return Err(Error::SsfmDivergence { step: step_index });
            }
        }
        z = mark;
        if wants(z) {
            snapshots.push((z, field.clone()));
        }
    }

    Ok(FieldEvolution { window: cfg.window, snapshots })
}

fn linear_step(field: &mut [Complex64], symbol: &[Complex64], h: f64, fft: &FftPair) {
    fft.forward(field);
    for (v, s) in field.iter_mut().zip(symbol) {
        *v *= (s * h).exp();
    }
    fft.inverse(field);
}

fn nonlinear_step(field: &mut [Complex64], gamma: f64, h: f64) {
    if gamma == 0.0 {
        return;
    }
    for v in field.iter_mut() {
        let p = v.norm_sqr();
        *v *= Complex64::new(0.0, gamma * p * h).exp();
    }
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-9 * scale.max(1.0)
}

/// Pulse energy sum(|A|^2) dt; conserved by the solver when alpha = 0.
pub fn energy(field: &[Complex64], dt: f64) -> f64 {
    field.iter().map(|v| v.norm_sqr()).sum::<f64>() * dt
}

/// Resamples a physical evolution onto the normalized collocation grid
/// and rescales amplitudes by 1/sqrt(P0).
///
/// Time interpolation is linear and periodic over the window; zeta nodes
/// must match recorded snapshot distances via z = L_max * zeta.
pub fn to_normalized(
    ev: &FieldEvolution,
    map: &NormalizationMap,
    grid: &Grid,
) -> Result<GriddedField> {
    let mut out = GriddedField::zeros(grid);
    let m = ev
        .snapshots
        .first()
        .map(|(_, f)| f.len())
        .ok_or_else(|| Error::InvalidParameter("empty evolution".to_string()))?;
    let dt_s = ev.window / m as f64;
    let half = ev.window / 2.0;
    let scale = 1.0 / map.p0.sqrt();

    for (iz, &zeta) in grid.zeta_nodes.iter().enumerate() {
        let z = map.l_max * zeta;
        let snap = ev
            .snapshots
            .iter()
            .find(|(zs, _)| close(*zs, z, map.l_max))
            .ok_or(Error::Coverage { t: f64::NAN, zeta })?;
        for (it, &t) in grid.t_nodes.iter().enumerate() {
            let time = t * map.t_max;
            if time < -half - 1e-12 * ev.window || time > half + 1e-12 * ev.window {
                return Err(Error::Coverage { t, zeta });
            }
            let u = (time + half) / dt_s;
            let i0 = u.floor() as isize;
            let frac = u - i0 as f64;
            let a = snap.1[(i0.rem_euclid(m as isize)) as usize];
            let b = snap.1[((i0 + 1).rem_euclid(m as isize)) as usize];
            let v = a * (1.0 - frac) + b * frac;
            out.set(it, iz, v.re * scale, v.im * scale);
        }
    }
    Ok(out)
}

/// Mean squared residual of the normalized equation evaluated by central
/// differences at interior grid nodes.
///
/// Stencils: 2nd-order for d/dzeta and d2/dt2, the 5-point central
/// stencil for d3/dt3; usable nodes are t indices 2..n_t-3 and zeta
/// indices 1..n_zeta-2.
pub fn nlse_residual_fd(
    field: &GriddedField,
    coeffs: &NlseCoefficients,
    grid: &Grid,
) -> Result<f64> {
    let nt = grid.n_t();
    let nz = grid.n_zeta();
    if nt < 6 || nz < 3 {
        return Err(Error::InvalidGrid(format!(
            "residual stencils need n_t >= 6 and n_zeta >= 3, got {nt} x {nz}"
        )));
    }
    if field.n_t != nt || field.n_zeta != nz {
        return Err(Error::InvalidGrid("field dimensions do not match grid".to_string()));
    }
    check_uniform(&grid.t_nodes, "t")?;
    check_uniform(&grid.zeta_nodes, "zeta")?;

    let dt = grid.dt();
    let dz = grid.dzeta();
    let atten = coeffs.atten();
    let disp = coeffs.disp();
    let disp3 = coeffs.disp3();
    let kerr = coeffs.kerr();

    let s = |it: usize, iz: usize| Complex64::new(field.re(it, iz), field.im(it, iz));

    let mut sum = 0.0;
    let mut count = 0usize;
    for iz in 1..nz - 1 {
        for it in 2..nt - 2 {
            let v = s(it, iz);
            let s_z = (s(it, iz + 1) - s(it, iz - 1)) / (2.0 * dz);
            let s_tt = (s(it - 1, iz) - 2.0 * v + s(it + 1, iz)) / (dt * dt);
            let s_ttt = (-s(it - 2, iz) + 2.0 * s(it - 1, iz) - 2.0 * s(it + 1, iz)
                + s(it + 2, iz))
                / (2.0 * dt * dt * dt);
            let r = Complex64::i() * s_z
                + Complex64::i() * atten * v
                + disp * s_tt
                + Complex64::i() * disp3 * s_ttt
                + kerr * v.norm_sqr() * v;
            sum += r.norm_sqr();
            count += 1;
        }
    }
    Ok(sum / count as f64)
}

fn check_uniform(nodes: &[f64], name: &str) -> Result<()> {
    let d0 = nodes[1] - nodes[0];
    for w in nodes.windows(2) {
        if ((w[1] - w[0]) - d0).abs() > 1e-9 * d0.abs() {
            return Err(Error::InvalidGrid(format!("{name} nodes are not uniform")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;
    use crate::physics::{compute_coefficients, compute_normalization, derive_fiber_params, SignalSpec};
    use approx::assert_relative_eq;

    fn fiber(alpha: f64, beta2: f64, beta3: f64, n2: f64) -> FiberParams {
        derive_fiber_params(alpha, beta2, beta3, n2, 8e-11, 1.55e-6).unwrap()
    }

    fn cfg(m: usize, window: f64, step: f64) -> SsfmConfig {
        SsfmConfig { step_length: step, n_time_samples: m, window, scheme: SplitScheme::Symmetric }
    }

    #[test]
    fn attenuation_matches_closed_form() {
        let f = fiber(4.605e-5, 0.0, 0.0, 0.0);
        let m = 64;
        let launch: Vec<Complex64> = (0..m)
            .map(|i| Complex64::new(0.3 + 0.5 * (i as f64 * 0.2).sin(), 0.1))
            .collect();
        let z = 1e4;
        let ev = propagate(&launch, &f, z, &cfg(m, 1e-9, 500.0), &[z]).unwrap();
        let expected = (-f.alpha * z / 2.0).exp();
        let out = &ev.snapshots.last().unwrap().1;
        for (o, l) in out.iter().zip(&launch) {
            assert_relative_eq!(o.norm() / l.norm(), expected, max_relative = 1e-10);
            // Phase unchanged.
            assert_relative_eq!((o / l).arg(), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn spm_matches_closed_form() {
        let f = fiber(0.0, 0.0, 0.0, 2.6e-20);
        let m = 64;
        let p0: f64 = 5e-3;
        let launch = vec![Complex64::new(p0.sqrt(), 0.0); m];
        let z = 8e4;
        let ev = propagate(&launch, &f, z, &cfg(m, 1e-9, 1000.0), &[z]).unwrap();
        let out = &ev.snapshots.last().unwrap().1;
        let expected_phase = f.gamma * p0 * z;
        for o in out {
            assert_relative_eq!(o.norm(), p0.sqrt(), max_relative = 1e-12);
            assert_relative_eq!(o.arg(), expected_phase, max_relative = 1e-6);
        }
    }

    fn rms_width(field: &[Complex64], window: f64) -> f64 {
        let m = field.len();
        let dt = window / m as f64;
        let mut p = 0.0;
        let mut t2 = 0.0;
        for (i, v) in field.iter().enumerate() {
            let t = -window / 2.0 + i as f64 * dt;
            let w = v.norm_sqr();
            p += w;
            t2 += t * t * w;
        }
        (t2 / p).sqrt()
    }

    #[test]
    fn gaussian_broadening_matches_closed_form() {
        // Width grows by sqrt(2) at z = L_D = T0^2/|beta2|.
        let f = fiber(0.0, -2e-26, 0.0, 0.0);
        let m = 1024;
        let t0 = 2e-11;
        let window = 32.0 * t0;
        let launch: Vec<Complex64> = (0..m)
            .map(|i| {
                let t = -window / 2.0 + i as f64 * (window / m as f64);
                Complex64::new((-t * t / (2.0 * t0 * t0)).exp(), 0.0)
            })
            .collect();
        let ld = t0 * t0 / f.beta2.abs();
        let ev = propagate(&launch, &f, ld, &cfg(m, window, ld / 200.0), &[ld]).unwrap();
        let w0 = rms_width(&launch, window);
        let w1 = rms_width(&ev.snapshots.last().unwrap().1, window);
        assert_relative_eq!(w1 / w0, 2f64.sqrt(), max_relative = 1e-3);
    }

    #[test]
    fn energy_conserved_without_loss() {
        let f = fiber(0.0, -2e-26, -2e-38, 2.6e-20);
        let m = 256;
        let window = 4e-10;
        let dt = window / m as f64;
        let launch: Vec<Complex64> = (0..m)
            .map(|i| {
                let t = -window / 2.0 + i as f64 * dt;
                Complex64::new(0.1 * (-t * t / 2e-21).exp(), 0.0)
            })
            .collect();
        let ev = propagate(&launch, &f, 1e5, &cfg(m, window, 100.0), &[1e5]).unwrap();
        let e0 = energy(&launch, dt);
        let e1 = energy(&ev.snapshots.last().unwrap().1, dt);
        assert!(((e1 - e0) / e0).abs() < 1e-8, "drift {}", (e1 - e0) / e0);
    }

    #[test]
    fn symmetric_scheme_is_second_order() {
        // Error against a fine reference drops ~4x when the step halves.
        let f = fiber(4.605e-5, -2e-26, 0.0, 2.6e-20);
        let m = 256;
        let window = 8e-10;
        let launch: Vec<Complex64> = (0..m)
            .map(|i| {
                let t = -window / 2.0 + i as f64 * (window / m as f64);
                Complex64::new(0.3 * (-t * t / (2.0 * 4e-21)).exp(), 0.0)
            })
            .collect();
        let z = 5e4;
        let run = |step: f64| {
            propagate(&launch, &f, z, &cfg(m, window, step), &[z])
                .unwrap()
                .snapshots
                .last()
                .unwrap()
                .1
                .clone()
        };
        let reference = run(250.0);
        let err = |field: &[Complex64]| {
            field
                .iter()
                .zip(&reference)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt()
        };
        let e1 = err(&run(4000.0));
        let e2 = err(&run(2000.0));
        let ratio = e1 / e2;
        assert!(
            (2.5..6.0).contains(&ratio),
            "expected ~4x reduction, got {ratio} (e1={e1}, e2={e2})"
        );
    }

    #[test]
    fn linear_regime_is_additive() {
        let f = fiber(4.605e-5, -2e-26, -2e-38, 0.0);
        let m = 128;
        let window = 4e-10;
        let mk = |phase: f64| -> Vec<Complex64> {
            (0..m)
                .map(|i| {
                    let t = -window / 2.0 + i as f64 * (window / m as f64);
                    Complex64::new(
                        0.2 * (-t * t / 8e-22).exp() * (phase + 1.0),
                        0.05 * (t / 1e-10 + phase).sin(),
                    )
                })
                .collect()
        };
        let a = mk(0.0);
        let b = mk(1.3);
        let sum: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let c = cfg(m, window, 500.0);
        let z = 2e4;
        let pa = propagate(&a, &f, z, &c, &[z]).unwrap();
        let pb = propagate(&b, &f, z, &c, &[z]).unwrap();
        let ps = propagate(&sum, &f, z, &c, &[z]).unwrap();
        let fa = &pa.snapshots.last().unwrap().1;
        let fb = &pb.snapshots.last().unwrap().1;
        let fs = &ps.snapshots.last().unwrap().1;
        for i in 0..m {
            assert!((fs[i] - (fa[i] + fb[i])).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_power_of_two() {
        let f = fiber(0.0, -2e-26, 0.0, 0.0);
        let launch = vec![Complex64::new(0.0, 0.0); 100];
        let c = SsfmConfig {
            step_length: 100.0,
            n_time_samples: 100,
            window: 1e-9,
            scheme: SplitScheme::Symmetric,
        };
        assert!(matches!(propagate(&launch, &f, 1e3, &c, &[]), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn nan_launch_reports_step() {
        let f = fiber(0.0, -2e-26, 0.0, 0.0);
        let mut launch = vec![Complex64::new(0.1, 0.0); 64];
        launch[3] = Complex64::new(f64::NAN, 0.0);
        match propagate(&launch, &f, 1e3, &cfg(64, 1e-9, 100.0), &[1e3]) {
            Err(Error::SsfmDivergence { step }) => assert_eq!(step, 1),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn first_snapshot_is_launch_and_z_increases() {
        let f = fiber(4.605e-5, -2e-26, 0.0, 0.0);
        let launch: Vec<Complex64> =
            (0..64).map(|i| Complex64::new((i as f64 * 0.1).cos(), 0.0)).collect();
        let ev = propagate(&launch, &f, 1e4, &cfg(64, 1e-9, 300.0), &[0.0, 2.5e3, 5e3, 1e4])
            .unwrap();
        assert_eq!(ev.snapshots.len(), 4);
        assert_eq!(ev.snapshots[0].0, 0.0);
        assert!(ev.snapshots[0].1.iter().zip(&launch).all(|(a, b)| a == b));
        assert!(ev.snapshots.windows(2).all(|w| w[0].0 < w[1].0));
        assert_eq!(ev.snapshots.last().unwrap().0, 1e4);
    }

    #[test]
    fn normalized_zero_field_is_zero() {
        let f = fiber(0.0, -2e-26, 0.0, 0.0);
        let spec = SignalSpec::new(10e9, 1e-2, vec![1], 0.1).unwrap();
        let map = compute_normalization(&f, &spec, 1e4, 4e-10).unwrap();
        let grid = build_grid(9, 3, 3).unwrap();
        let launch = vec![Complex64::new(0.0, 0.0); 64];
        let ev = propagate(&launch, &f, 1e4, &cfg(64, 8e-10, 500.0), &[0.0, 5e3, 1e4]).unwrap();
        let g = to_normalized(&ev, &map, &grid).unwrap();
        assert!(g.real_part.iter().all(|&v| v == 0.0));
        assert!(g.imag_part.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn normalization_scales_peak_to_unity() {
        let f = fiber(4.605e-5, -2e-26, 0.0, 0.0);
        let p0 = 1e-2;
        let spec = SignalSpec::new(10e9, p0, vec![1], 0.1).unwrap();
        let l_max = 1e4;
        let map = compute_normalization(&f, &spec, l_max, 4e-10).unwrap();
        let grid = build_grid(17, 3, 3).unwrap();
        let m = 128;
        let window = 8e-10;
        // Flat field at exactly P0.
        let launch = vec![Complex64::new(p0.sqrt(), 0.0); m];
        let zs: Vec<f64> = grid.zeta_nodes.iter().map(|&z| z * l_max).collect();
        let ev = propagate(&launch, &f, l_max, &cfg(m, window, 500.0), &zs).unwrap();
        let g = to_normalized(&ev, &map, &grid).unwrap();
        // zeta = 0: normalized amplitude exactly 1.
        for it in 0..grid.n_t() {
            assert_relative_eq!(g.re(it, 0), 1.0, max_relative = 1e-12);
        }
        // zeta = 1: attenuation only.
        let expected = (-f.alpha * l_max / 2.0).exp();
        for it in 0..grid.n_t() {
            let a = (g.re(it, 2).powi(2) + g.im(it, 2).powi(2)).sqrt();
            assert_relative_eq!(a, expected, max_relative = 1e-10);
        }
    }

    #[test]
    fn coverage_error_when_snapshot_missing() {
        let f = fiber(0.0, -2e-26, 0.0, 0.0);
        let spec = SignalSpec::new(10e9, 1e-2, vec![1], 0.1).unwrap();
        let map = compute_normalization(&f, &spec, 1e4, 4e-10).unwrap();
        let grid = build_grid(9, 5, 3).unwrap();
        let launch = vec![Complex64::new(0.1, 0.0); 64];
        // Only endpoints recorded; interior zeta nodes have no snapshot.
        let ev = propagate(&launch, &f, 1e4, &cfg(64, 8e-10, 500.0), &[0.0, 1e4]).unwrap();
        assert!(matches!(to_normalized(&ev, &map, &grid), Err(Error::Coverage { .. })));
    }

    #[test]
    fn residual_zero_for_zero_field() {
        let grid = build_grid(12, 4, 3).unwrap();
        let field = GriddedField::zeros(&grid);
        let c = dummy_coeffs(0.7, 11.0, 0.5, 1e-3, 6.0, 16.0);
        assert_eq!(nlse_residual_fd(&field, &c, &grid).unwrap(), 0.0);
    }

    #[test]
    fn residual_constant_field_closed_form() {
        // s = 1 kills every derivative; the residual reduces to
        // i k1 a2 + k1 a5, squared magnitude k1^2 (a2^2 + a5^2).
        let grid = build_grid(12, 4, 3).unwrap();
        let mut field = GriddedField::zeros(&grid);
        for v in field.real_part.iter_mut() {
            *v = 1.0;
        }
        let (k1, a2, a5) = (0.25, 3.0, 1.5);
        let c = dummy_coeffs(k1, a2, 0.5, 0.0, a5, 8.0);
        let got = nlse_residual_fd(&field, &c, &grid).unwrap();
        assert_relative_eq!(got, k1 * k1 * (a2 * a2 + a5 * a5), max_relative = 1e-12);
    }

    #[test]
    fn residual_rejects_small_grids() {
        let grid = build_grid(5, 4, 3).unwrap();
        let field = GriddedField::zeros(&grid);
        let c = dummy_coeffs(1.0, 1.0, 0.5, 0.0, 1.0, 8.0);
        assert!(nlse_residual_fd(&field, &c, &grid).is_err());
    }

    fn dummy_coeffs(k1: f64, a2: f64, a3: f64, a4: f64, a5: f64, k2: f64) -> NlseCoefficients {
        NlseCoefficients {
            a1: 1.0,
            a2,
            a3,
            a4,
            a5,
            kappa1: k1,
            kappa2: k2,
            bit_rate: 10e9,
        }
    }

    #[test]
    fn oracle_solution_has_small_normalized_residual() {
        // Full pipeline: physical SSFM run on a band-limited OOK launch,
        // normalized, then checked against the normalized equation by
        // finite differences. Refining both axes reduces the residual.
        //
        // The launch is low-passed well above the edge band: the raised
        // cosine's curvature jumps otherwise put an w^-3 spectral tail in
        // the field whose zeta rotation rate (disp * w^2) no affordable
        // difference grid can follow.
        let f = fiber(4.605e-5, -2e-26, -2e-38, 2.6e-20);
        let rb = 10e9;
        let ef = 0.4;
        let n_bits = 8;
        let pattern = crate::signal::random_pattern(n_bits, 7);
        let spec = SignalSpec::new(rb, 1e-2, pattern.clone(), ef).unwrap();
        let t_max = n_bits as f64 / (2.0 * rb);
        let l_max = 1e5;
        let map = compute_normalization(&f, &spec, l_max, t_max).unwrap();
        let coeffs = compute_coefficients(&map, &f, rb);

        let m = 4096;
        let omega_edge = std::f64::consts::PI / (ef * 2.0 / n_bits as f64);
        let mut launch: Vec<Complex64> = (0..m)
            .map(|i| {
                let t = -1.0 + 2.0 * i as f64 / m as f64;
                Complex64::new(
                    map.p0.sqrt() * crate::signal::ook_waveform(&pattern, ef, t),
                    0.0,
                )
            })
            .collect();
        crate::fft::spectral_lowpass(&mut launch, 2.0 / m as f64, 3.0 * omega_edge, 5.0 * omega_edge);

        let run = |nt: usize, nz: usize| -> (f64, f64) {
            let grid = build_grid(nt, nz, 4).unwrap();
            let zs: Vec<f64> = grid.zeta_nodes.iter().map(|&z| z * l_max).collect();
            let c = cfg(m, 2.0 * t_max, 100.0);
            let ev = propagate(&launch, &f, l_max, &c, &zs).unwrap();
            let g = to_normalized(&ev, &map, &grid).unwrap();
            (nlse_residual_fd(&g, &coeffs, &grid).unwrap(), g.mean_sq())
        };

        let (r1, ms1) = run(513, 161);
        assert!(r1 < 1e-2 * ms1, "residual {r1} vs field {ms1}");
        let (r2, _) = run(1025, 321);
        assert!(r2 < r1, "refinement did not reduce residual: {r2} vs {r1}");
    }
}
