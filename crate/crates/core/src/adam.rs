//! Bias-corrected Adam update over a flat parameter vector. Used for
//! both network training and combination-coefficient fitting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub first_moment: Vec<f64>,
    pub second_moment: Vec<f64>,
    pub step_count: u64,
    pub learning_rate: f64,
    pub beta_a: f64,
    pub beta_b: f64,
    pub epsilon: f64,
}

impl AdamState {
    pub fn new(n_params: usize, learning_rate: f64) -> Self {
        Self {
            first_moment: vec![0.0; n_params],
            second_moment: vec![0.0; n_params],
            step_count: 0,
            learning_rate,
            beta_a: 0.9,
            beta_b: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// One elementwise update; increments the step count.
pub fn adam_step(params: &mut [f64], gradient: &[f64], state: &mut AdamState) -> Result<()> {
    if gradient.len() != params.len() || state.first_moment.len() != params.len() {
        return Err(Error::InvalidGradient { expected: params.len(), got: gradient.len() });
    }
    state.step_count += 1;
    let t = state.step_count as i32;
    let bc1 = 1.0 - state.beta_a.powi(t);
    let bc2 = 1.0 - state.beta_b.powi(t);
    for i in 0..params.len() {
        let g = gradient[i];
        state.first_moment[i] = state.beta_a * state.first_moment[i] + (1.0 - state.beta_a) * g;
        state.second_moment[i] =
            state.beta_b * state.second_moment[i] + (1.0 - state.beta_b) * g * g;
        let m_hat = state.first_moment[i] / bc1;
        let v_hat = state.second_moment[i] / bc2;
        params[i] -= state.learning_rate * m_hat / (v_hat.sqrt() + state.epsilon);
    }
    Ok(())
}
