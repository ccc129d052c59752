//! Scratch diagnostic: localize the FD residual floor at 10 Gbps.

use fiberpinn::fft::{angular_frequencies, FftPair};
use fiberpinn::grid::build_grid;
use fiberpinn::physics::*;
use fiberpinn::signal;
use fiberpinn::ssfm::*;
use num_complex::Complex64;

fn main() {
    let f = derive_fiber_params(4.605e-5, -2e-26, -2e-38, 2.6e-20, 8e-11, 1.55e-6).unwrap();
    let rb = 10e9;
    let ef = 0.4;
    let n_bits = 8;
    let pattern = signal::random_pattern(n_bits, 7);
    let spec = SignalSpec::new(rb, 1e-2, pattern.clone(), ef).unwrap();
    let t_max = n_bits as f64 / (2.0 * rb);
    let l_max = 1e5;
    let map = compute_normalization(&f, &spec, l_max, t_max).unwrap();
    let coeffs = compute_coefficients(&map, &f, rb);
    let m = 4096;
    let launch: Vec<Complex64> = (0..m)
        .map(|i| {
            let t = -1.0 + 2.0 * i as f64 / m as f64;
            Complex64::new(map.p0.sqrt() * signal::ook_waveform(&pattern, ef, t), 0.0)
        })
        .collect();

    // Fine zeta sampling around a middle zeta for a spectral-in-t,
    // FD-in-zeta residual straight on the SSFM samples.
    let zeta0 = 0.5;
    let dzeta = 1e-3;
    let zs = [l_max * (zeta0 - dzeta), l_max * zeta0, l_max * (zeta0 + dzeta)];
    let cfg = SsfmConfig {
        step_length: 50.0,
        n_time_samples: m,
        window: 2.0 * t_max,
        scheme: SplitScheme::Symmetric,
    };
    let ev = propagate(&launch, &f, l_max, &cfg, &zs).unwrap();
    let s_prev = &ev.snapshots[1].1;
    let s_mid = &ev.snapshots[2].1;
    let s_next = &ev.snapshots[3].1;
    assert_eq!(ev.snapshots.len(), 4);

    let scale = 1.0 / map.p0.sqrt();
    let fftp = FftPair::new(m);
    // Normalized-time spectral derivatives of the middle snapshot.
    // Normalized time t = T / t_max, so omega_t = omega_T * t_max.
    let omega = angular_frequencies(m, 2.0 / m as f64); // directly in t units
    let mut sp = s_mid.clone();
    fftp.forward(&mut sp);
    let mut d2 = sp.clone();
    let mut d3 = sp.clone();
    for k in 0..m {
        let iw = Complex64::i() * omega[k];
        d2[k] *= iw * iw;
        d3[k] *= iw * iw * iw;
    }
    fftp.inverse(&mut d2);
    fftp.inverse(&mut d3);

    let mut worst = (0usize, 0.0f64);
    let mut sum = 0.0;
    for i in 0..m {
        let v = s_mid[i] * scale;
        let s_z = (s_next[i] - s_prev[i]) * scale / (2.0 * dzeta);
        let r = Complex64::i() * s_z
            + Complex64::i() * coeffs.atten() * v
            + coeffs.disp() * d2[i] * scale
            + Complex64::i() * coeffs.disp3() * d3[i] * scale
            + coeffs.kerr() * v.norm_sqr() * v;
        let rn = r.norm_sqr();
        sum += rn;
        if rn > worst.1 {
            worst = (i, rn);
        }
    }
    let ms: f64 = s_mid.iter().map(|v| (v * scale).norm_sqr()).sum::<f64>() / m as f64;
    println!(
        "spectral-t residual at zeta=0.5: mean|r|^2={:.3e} ratio={:.3e} worst node {} (t={:.4}) |r|={:.3e}",
        sum / m as f64,
        sum / m as f64 / ms,
        worst.0,
        -1.0 + 2.0 * worst.0 as f64 / m as f64,
        worst.1.sqrt()
    );

    // FD-on-grid residual rows at the tuned 10G config, localized.
    let (nt, nz) = (1025, 161);
    let grid = build_grid(nt, nz, 4).unwrap();
    let zs: Vec<f64> = grid.zeta_nodes.iter().map(|&z| z * l_max).collect();
    let ev = propagate(&launch, &f, l_max, &cfg, &zs).unwrap();
    let g = to_normalized(&ev, &map, &grid).unwrap();
    let dt = grid.dt();
    let dz = grid.dzeta();
    let s = |it: usize, iz: usize| Complex64::new(g.re(it, iz), g.im(it, iz));
    let mut row = vec![0.0f64; nz];
    let mut col_worst = (0usize, 0usize, 0.0f64);
    for iz in 1..nz - 1 {
        let mut acc = 0.0;
        for it in 2..nt - 2 {
            let v = s(it, iz);
            let s_z = (s(it, iz + 1) - s(it, iz - 1)) / (2.0 * dz);
            let s_tt = (s(it - 1, iz) - 2.0 * v + s(it + 1, iz)) / (dt * dt);
            let s_ttt = (-s(it - 2, iz) + 2.0 * s(it - 1, iz) - 2.0 * s(it + 1, iz)
                + s(it + 2, iz))
                / (2.0 * dt * dt * dt);
            let r = Complex64::i() * s_z
                + Complex64::i() * coeffs.atten() * v
                + coeffs.disp() * s_tt
                + Complex64::i() * coeffs.disp3() * s_ttt
                + coeffs.kerr() * v.norm_sqr() * v;
            let rn = r.norm_sqr();
            acc += rn;
            if rn > col_worst.2 {
                col_worst = (it, iz, rn);
            }
        }
        row[iz] = acc / (nt - 4) as f64;
    }
    for iz in [1, 2, 4, 8, 16, 40, 80, 120, 159] {
        println!("row zeta={:.4}: mean|r|^2 = {:.3e}", grid.zeta_nodes[iz], row[iz]);
    }
    println!(
        "worst node: t={:.4} zeta={:.4} |r|={:.3e}",
        grid.t_nodes[col_worst.0],
        grid.zeta_nodes[col_worst.1],
        col_worst.2.sqrt()
    );
}
