//! Scratch diagnostic: isolate the third-order-dispersion sign chain.

use fiberpinn::fft::{angular_frequencies, FftPair};
use fiberpinn::physics::*;
use fiberpinn::ssfm::*;
use num_complex::Complex64;

fn main() {
    // beta3-only physical run on a Gaussian.
    let f = derive_fiber_params(0.0, -2e-26, -2e-38, 0.0, 8e-11, 1.55e-6).unwrap();
    // Kill beta2 influence by checking the full residual including it.
    let rb = 10e9;
    let spec = SignalSpec::new(rb, 1e-2, vec![1], 0.0).unwrap();
    let n_bits = 8.0;
    let t_max = n_bits / (2.0 * rb);
    let l_max = 1e5;
    let map = compute_normalization(&f, &spec, l_max, t_max).unwrap();
    let coeffs = compute_coefficients(&map, &f, rb);
    println!("disp={:.4e} disp3={:.4e}", coeffs.disp(), coeffs.disp3());

    let m = 4096;
    let w: f64 = 0.08; // narrow Gaussian: strong third-derivative content
    let launch: Vec<Complex64> = (0..m)
        .map(|i| {
            let t = -1.0 + 2.0 * i as f64 / m as f64;
            Complex64::new(map.p0.sqrt() * (-t * t / (2.0 * w * w)).exp(), 0.0)
        })
        .collect();
    let zeta0 = 0.5;
    let dzeta = 5e-4;
    let zs = [l_max * (zeta0 - dzeta), l_max * zeta0, l_max * (zeta0 + dzeta)];
    let cfg = SsfmConfig {
        step_length: 25.0,
        n_time_samples: m,
        window: 2.0 * t_max,
        scheme: SplitScheme::Symmetric,
    };
    let ev = propagate(&launch, &f, l_max, &cfg, &zs).unwrap();
    let s_prev = &ev.snapshots[1].1;
    let s_mid = &ev.snapshots[2].1;
    let s_next = &ev.snapshots[3].1;

    let scale = 1.0 / map.p0.sqrt();
    let fftp = FftPair::new(m);
    let omega = angular_frequencies(m, 2.0 / m as f64);
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

    // Fit: i s_z + c2 * disp * s_tt + i * c3 * disp3 * s_ttt = 0.
    // Solve for c2, c3 by least squares over all samples (real system,
    // 2 unknowns). Build A x = b with b = -i s_z.
    let mut ata = [[0.0f64; 2]; 2];
    let mut atb = [0.0f64; 2];
    for i in 0..m {
        let s_z = (s_next[i] - s_prev[i]) * scale / (2.0 * dzeta);
        let b = -(Complex64::i() * s_z);
        let a1 = coeffs.disp() * d2[i] * scale;
        let a2 = Complex64::i() * coeffs.disp3() * d3[i] * scale;
        // Accumulate normal equations over real and imaginary parts.
        for (ar, br) in [(a1.re, a2.re), (a1.im, a2.im)] {
            ata[0][0] += ar * ar;
            ata[0][1] += ar * br;
            ata[1][0] += br * ar;
            ata[1][1] += br * br;
        }
        atb[0] += a1.re * b.re + a1.im * b.im;
        atb[1] += a2.re * b.re + a2.im * b.im;
    }
    let det = ata[0][0] * ata[1][1] - ata[0][1] * ata[1][0];
    let c2 = (atb[0] * ata[1][1] - ata[0][1] * atb[1]) / det;
    let c3 = (ata[0][0] * atb[1] - atb[0] * ata[1][0]) / det;
    println!("fitted factors: c2 = {c2:.6} (want 1), c3 = {c3:.6} (want 1)");
}
