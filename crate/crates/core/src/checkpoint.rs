//! Versioned textual checkpoints for network parameters and optimizer
//! state.
//!
//! Floats are written in Rust's shortest round-trip decimal form, so a
//! save/load cycle is bit-exact. One value per line keeps the files
//! diffable.

use std::fmt::Write as _;
use std::path::Path;

use crate::adam::AdamState;
use crate::error::{Error, Result};
use crate::net::NetworkParams;

const MAGIC: &str = "fiberpinn-checkpoint v1";

pub fn to_string(params: &NetworkParams, adam: Option<&AdamState>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(
        out,
        "layers {}",
        params.layer_sizes.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" ")
    );
    let _ = writeln!(out, "seed {}", params.seed);
    let _ = writeln!(out, "params {}", params.values.len());
    for v in &params.values {
        let _ = writeln!(out, "{v}");
    }
    if let Some(a) = adam {
        let _ = writeln!(
            out,
            "adam step={} lr={} beta_a={} beta_b={} epsilon={}",
            a.step_count, a.learning_rate, a.beta_a, a.beta_b, a.epsilon
        );
        for v in a.first_moment.iter().chain(&a.second_moment) {
            let _ = writeln!(out, "{v}");
        }
    }
    out
}

pub fn from_string(text: &str) -> Result<(NetworkParams, Option<AdamState>)> {
    let mut lines = text.lines();
    let bad = |msg: &str| Error::Checkpoint(msg.to_string());
    if lines.next() != Some(MAGIC) {
        return Err(bad("missing or unsupported header"));
    }
    let layers_line = lines.next().ok_or_else(|| bad("missing layers line"))?;
    let layer_sizes: Vec<usize> = layers_line
        .strip_prefix("layers ")
        .ok_or_else(|| bad("malformed layers line"))?
        .split_whitespace()
        .map(|s| s.parse().map_err(|_| bad("bad layer size")))
        .collect::<Result<_>>()?;
    let seed: u64 = lines
        .next()
        .and_then(|l| l.strip_prefix("seed "))
        .ok_or_else(|| bad("missing seed line"))?
        .parse()
        .map_err(|_| bad("bad seed"))?;
    let n: usize = lines
        .next()
        .and_then(|l| l.strip_prefix("params "))
        .ok_or_else(|| bad("missing params line"))?
        .parse()
        .map_err(|_| bad("bad param count"))?;
    if n != crate::net::param_count(&layer_sizes) {
        return Err(bad("param count does not match layer sizes"));
    }
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        let line = lines.next().ok_or_else(|| bad("truncated parameter block"))?;
        values.push(line.parse::<f64>().map_err(|_| bad("bad parameter value"))?);
    }
    let params = NetworkParams { layer_sizes, seed, values };

    let adam = match lines.next() {
        None | Some("") => None,
        Some(header) => {
            let rest = header.strip_prefix("adam ").ok_or_else(|| bad("malformed adam line"))?;
            let mut step = None;
            let mut lr = None;
            let mut ba = None;
            let mut bb = None;
            let mut eps = None;
            for kv in rest.split_whitespace() {
                let (k, v) = kv.split_once('=').ok_or_else(|| bad("malformed adam field"))?;
                match k {
                    "step" => step = Some(v.parse::<u64>().map_err(|_| bad("bad adam step"))?),
                    "lr" => lr = Some(v.parse::<f64>().map_err(|_| bad("bad adam lr"))?),
                    "beta_a" => ba = Some(v.parse::<f64>().map_err(|_| bad("bad beta_a"))?),
                    "beta_b" => bb = Some(v.parse::<f64>().map_err(|_| bad("bad beta_b"))?),
                    "epsilon" => eps = Some(v.parse::<f64>().map_err(|_| bad("bad epsilon"))?),
                    _ => return Err(bad("unknown adam field")),
                }
            }
            let mut moments = Vec::with_capacity(2 * n);
            for _ in 0..2 * n {
                let line = lines.next().ok_or_else(|| bad("truncated adam block"))?;
                moments.push(line.parse::<f64>().map_err(|_| bad("bad adam value"))?);
            }
            let second = moments.split_off(n);
            Some(AdamState {
                first_moment: moments,
                second_moment: second,
                step_count: step.ok_or_else(|| bad("adam step missing"))?,
                learning_rate: lr.ok_or_else(|| bad("adam lr missing"))?,
                beta_a: ba.ok_or_else(|| bad("beta_a missing"))?,
                beta_b: bb.ok_or_else(|| bad("beta_b missing"))?,
                epsilon: eps.ok_or_else(|| bad("epsilon missing"))?,
            })
        }
    };
    Ok((params, adam))
}

pub fn save(path: &Path, params: &NetworkParams, adam: Option<&AdamState>) -> Result<()> {
    std::fs::write(path, to_string(params, adam))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<(NetworkParams, Option<AdamState>)> {
    from_string(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::init_network;

    #[test]
    fn roundtrip_is_bit_exact() {
        let mut p = init_network(&[2, 7, 5, 2], 99).unwrap();
        // Exercise values without short decimal forms.
        p.values[0] = 1.0 / 3.0;
        p.values[1] = -1e-300;
        p.values[2] = 0.1 + 0.2;
        let mut a = AdamState::new(p.n_params(), 1e-3);
        a.step_count = 1234;
        a.first_moment[3] = std::f64::consts::PI;
        a.second_moment[5] = 2.2250738585072014e-308;
        let text = to_string(&p, Some(&a));
        let (p2, a2) = from_string(&text).unwrap();
        assert_eq!(p.layer_sizes, p2.layer_sizes);
        assert_eq!(p.seed, p2.seed);
        assert!(p.values.iter().zip(&p2.values).all(|(x, y)| x.to_bits() == y.to_bits()));
        let a2 = a2.unwrap();
        assert_eq!(a.step_count, a2.step_count);
        assert!(a
            .first_moment
            .iter()
            .zip(&a2.first_moment)
            .all(|(x, y)| x.to_bits() == y.to_bits()));
        assert!(a
            .second_moment
            .iter()
            .zip(&a2.second_moment)
            .all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn roundtrip_without_adam() {
        let p = init_network(&[2, 3, 2], 7).unwrap();
        let (p2, a2) = from_string(&to_string(&p, None)).unwrap();
        assert_eq!(p, p2);
        assert!(a2.is_none());
    }

    #[test]
    fn rejects_corrupt_input() {
        assert!(from_string("nonsense").is_err());
        let p = init_network(&[2, 3, 2], 7).unwrap();
        let text = to_string(&p, None);
        let truncated: String =
            text.lines().take(6).map(|l| format!("{l}\n")).collect();
        assert!(from_string(&truncated).is_err());
        let tampered = text.replace("params 17", "params 16");
        assert!(from_string(&tampered).is_err());
    }
}
