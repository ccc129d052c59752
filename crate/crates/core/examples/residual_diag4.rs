//! Scratch diagnostic: which effect combination breaks residual
//! cancellation on the OOK launch at 10 Gbps.

use fiberpinn::fft::{angular_frequencies, FftPair};
use fiberpinn::physics::*;
use fiberpinn::signal;
use fiberpinn::ssfm::*;
use num_complex::Complex64;

fn run(alpha: f64, beta2: f64, beta3: f64, n2: f64, step: f64, label: &str) {
    let f = derive_fiber_params(alpha, beta2, beta3, n2, 8e-11, 1.55e-6).unwrap();
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
    let zeta0 = 0.5;
    let dzeta = 5e-4;
    let zs = [l_max * (zeta0 - dzeta), l_max * zeta0, l_max * (zeta0 + dzeta)];
    let cfg = SsfmConfig {
        step_length: step,
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

    let mut sum = 0.0;
    let mut ms = 0.0;
    for i in 0..m {
        let v = s_mid[i] * scale;
        let s_z = (s_next[i] - s_prev[i]) * scale / (2.0 * dzeta);
        let r = Complex64::i() * s_z
            + Complex64::i() * coeffs.atten() * v
            + coeffs.disp() * d2[i] * scale
            + Complex64::i() * coeffs.disp3() * d3[i] * scale
            + coeffs.kerr() * v.norm_sqr() * v;
        sum += r.norm_sqr();
        ms += v.norm_sqr();
    }
    println!("{label:24} step={step:6.1}: ratio = {:.3e}", sum / ms);
}

fn main() {
    let (a, b2, b3, n2) = (4.605e-5, -2e-26, -2e-38, 2.6e-20);
    run(a, b2, b3, n2, 50.0, "all effects");
    run(0.0, b2, b3, n2, 50.0, "no attenuation");
    run(a, b2, b3, 0.0, 50.0, "no kerr");
    run(a, b2, 0.0, n2, 50.0, "no beta3");
    run(0.0, b2, 0.0, 0.0, 50.0, "beta2 only");
    run(0.0, b2, b3, 0.0, 50.0, "beta2+beta3");
    run(a, b2, b3, n2, 12.5, "all, step/4");
    run(a, b2, b3, n2, 3.125, "all, step/16");
}
