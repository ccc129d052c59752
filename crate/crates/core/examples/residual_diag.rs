//! Scratch diagnostic: compare SSFM complex output against the analytic
//! dispersive Gaussian, and the FD residual against the analytic field.

use fiberpinn::grid::{build_grid, GriddedField};
use fiberpinn::physics::*;
use fiberpinn::ssfm::*;
use num_complex::Complex64;

fn main() {
    // Dispersion-only physical run: S_z = -i (beta2/2) S_TT.
    let f = derive_fiber_params(0.0, -2e-26, 0.0, 0.0, 8e-11, 1.55e-6).unwrap();
    let b_phys = -f.beta2 / 2.0; // i S_z + b S_TT = 0
    let m = 1024;
    let t0: f64 = 2e-11;
    let window = 32.0 * t0;
    let dt = window / m as f64;
    let launch: Vec<Complex64> = (0..m)
        .map(|i| {
            let t = -window / 2.0 + i as f64 * dt;
            Complex64::new((-t * t / (2.0 * t0 * t0)).exp(), 0.0)
        })
        .collect();
    let z = t0 * t0 / f.beta2.abs(); // one dispersion length
    let cfg = SsfmConfig {
        step_length: z / 400.0,
        n_time_samples: m,
        window,
        scheme: SplitScheme::Symmetric,
    };
    let ev = propagate(&launch, &f, z, &cfg, &[z]).unwrap();
    let out = &ev.snapshots.last().unwrap().1;

    let analytic = |t: f64, zz: f64, b: f64| -> Complex64 {
        let a = Complex64::new(t0 * t0, 2.0 * b * zz);
        (Complex64::new(t0 * t0, 0.0) / a).sqrt() * (-Complex64::new(t * t, 0.0) / (2.0 * a)).exp()
    };

    let mut err_plus = 0.0f64;
    let mut err_minus = 0.0f64;
    for (i, v) in out.iter().enumerate() {
        let t = -window / 2.0 + i as f64 * dt;
        err_plus = err_plus.max((v - analytic(t, z, b_phys)).norm());
        err_minus = err_minus.max((v - analytic(t, z, -b_phys)).norm());
    }
    println!("SSFM vs analytic(+b): max err {err_plus:.3e}");
    println!("SSFM vs analytic(-b): max err {err_minus:.3e}");

    // FD residual of the analytic normalized field under the matching
    // normalized coefficients: i s_z + disp s_tt = 0 with disp = b_norm.
    let grid = build_grid(257, 21, 4).unwrap();
    let b_norm = 0.05;
    let w: f64 = 0.3;
    let mut g = GriddedField::zeros(&grid);
    for (iz, &zeta) in grid.zeta_nodes.iter().enumerate() {
        for (it, &t) in grid.t_nodes.iter().enumerate() {
            let a = Complex64::new(w * w, 2.0 * b_norm * zeta);
            let v = (Complex64::new(w * w, 0.0) / a).sqrt()
                * (-Complex64::new(t * t, 0.0) / (2.0 * a)).exp();
            g.set(it, iz, v.re, v.im);
        }
    }
    for sign in [1.0f64, -1.0] {
        let coeffs = NlseCoefficients {
            a1: 1.0,
            a2: 0.0,
            a3: sign * 0.5,
            a4: 0.0,
            a5: 0.0,
            kappa1: 2.0 * b_norm,
            kappa2: 1.0,
            bit_rate: 1.0,
        };
        let r = nlse_residual_fd(&g, &coeffs, &grid).unwrap();
        println!("analytic field residual with disp={:+}: {:.3e} (mean|s|^2 {:.3e})",
            coeffs.disp(), r, g.mean_sq());
    }

    // OOK pipeline residual over grid resolutions.
    ook_sweep();
    spectrum_probe();
}

fn spectrum_probe() {
    use fiberpinn::fft::FftPair;
    use fiberpinn::signal;
    let f = derive_fiber_params(4.605e-5, -2e-26, -2e-38, 2.6e-20, 8e-11, 1.55e-6).unwrap();
    let n_bits = 8;
    let pattern = signal::random_pattern(n_bits, 7);
    let m = 4096;
    for (rb, l_max, p0) in [(10e9, 1e5, 1e-2), (50e9, 1e5, 1e-2), (10e9, 1e5, 1e-3), (50e9, 1e5, 0.0)] {
        let p0_launch = if p0 > 0.0 { p0 } else { 1e-2 };
        let spec = SignalSpec::new(rb, p0_launch, pattern.clone(), 0.4).unwrap();
        let t_max = n_bits as f64 / (2.0 * rb);
        let map = compute_normalization(&f, &spec, l_max, t_max).unwrap();
        // p0 = 0 marker: kill nonlinearity instead.
        let fiber = if p0 > 0.0 {
            f
        } else {
            derive_fiber_params(4.605e-5, -2e-26, -2e-38, 0.0, 8e-11, 1.55e-6).unwrap()
        };
        let launch: Vec<Complex64> = (0..m)
            .map(|i| {
                let t = -1.0 + 2.0 * i as f64 / m as f64;
                Complex64::new(map.p0.sqrt() * signal::ook_waveform(&pattern, 0.4, t), 0.0)
            })
            .collect();
        let cfg = SsfmConfig {
            step_length: 50.0,
            n_time_samples: m,
            window: 2.0 * t_max,
            scheme: SplitScheme::Symmetric,
        };
        let ev = propagate(&launch, &fiber, l_max, &cfg, &[l_max]).unwrap();
        let out = &ev.snapshots.last().unwrap().1;
        let fftp = FftPair::new(m);
        let mut spec_buf = out.clone();
        fftp.forward(&mut spec_buf);
        // Energy fraction beyond normalized-frequency cutoffs. Normalized
        // omega for bin k (t units): 2 pi k / 2 = pi k.
        let total: f64 = spec_buf.iter().map(|v| v.norm_sqr()).sum();
        let frac_above = |cut: f64| -> f64 {
            spec_buf
                .iter()
                .enumerate()
                .filter(|(k, _)| {
                    let ks = if *k < m / 2 { *k as f64 } else { *k as f64 - m as f64 };
                    (std::f64::consts::PI * ks).abs() > cut
                })
                .map(|(_, v)| v.norm_sqr())
                .sum::<f64>()
                / total
        };
        println!(
            "rb={rb:.1e} p0={p0:.0e}: frac(|w|>100)={:.2e} frac(>400)={:.2e} frac(>800)={:.2e} frac(>1600)={:.2e}",
            frac_above(100.0),
            frac_above(400.0),
            frac_above(800.0),
            frac_above(1600.0)
        );
    }
}

fn ook_sweep() {
    use fiberpinn::fft::spectral_lowpass;
    use fiberpinn::signal;
    let f = derive_fiber_params(4.605e-5, -2e-26, -2e-38, 2.6e-20, 8e-11, 1.55e-6).unwrap();
    // (rate, l_max, n_bits, ef, nt, nz, taper_lo, taper_hi)
    let cases: [(f64, f64, usize, f64, usize, usize, f64, f64); 8] = [
        (2e9, 1e5, 8, 0.4, 513, 41, 3.0, 5.0),
        (2e9, 1e5, 8, 0.4, 1025, 81, 3.0, 5.0),
        (10e9, 1e5, 8, 0.4, 513, 161, 3.0, 5.0),
        (10e9, 1e5, 8, 0.4, 1025, 321, 3.0, 5.0),
        (50e9, 2e4, 4, 0.5, 513, 161, 2.0, 3.0),
        (50e9, 2e4, 4, 0.5, 1025, 321, 2.0, 3.0),
        (50e9, 1e4, 4, 0.5, 513, 161, 2.0, 3.0),
        (50e9, 1e4, 4, 0.5, 1025, 321, 2.0, 3.0),
    ];
    for (rb, l_max, n_bits, ef, nt, nz, tl, th) in cases {
        let pattern = if n_bits == 4 { vec![1, 0, 1, 1] } else { signal::random_pattern(n_bits, 7) };
        let spec = SignalSpec::new(rb, 1e-2, pattern.clone(), ef).unwrap();
        let t_max = n_bits as f64 / (2.0 * rb);
        let map = compute_normalization(&f, &spec, l_max, t_max).unwrap();
        let coeffs = compute_coefficients(&map, &f, rb);
        let m = 4096;
        let mut launch: Vec<Complex64> = (0..m)
            .map(|i| {
                let t = -1.0 + 2.0 * i as f64 / m as f64;
                Complex64::new(map.p0.sqrt() * signal::ook_waveform(&pattern, ef, t), 0.0)
            })
            .collect();
        let omega_edge = std::f64::consts::PI / (ef * 2.0 / n_bits as f64);
        spectral_lowpass(&mut launch, 2.0 / m as f64, tl * omega_edge, th * omega_edge);
        let grid = build_grid(nt, nz, 4).unwrap();
        let zs: Vec<f64> = grid.zeta_nodes.iter().map(|&z| z * l_max).collect();
        let cfg = SsfmConfig {
            step_length: 50.0,
            n_time_samples: m,
            window: 2.0 * t_max,
            scheme: SplitScheme::Symmetric,
        };
        let ev = propagate(&launch, &f, l_max, &cfg, &zs).unwrap();
        let g = to_normalized(&ev, &map, &grid).unwrap();
        let r = nlse_residual_fd(&g, &coeffs, &grid).unwrap();
        println!(
            "rb={:5.1e} l_max={:.0e} nt={nt:5} nz={nz:4}: residual {:.4e}  ratio {:.4e}",
            rb, l_max, r, r / g.mean_sq()
        );
    }
}
