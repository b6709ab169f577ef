//! Parameter update rules.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::nn::Parameters;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YogiConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub bias_correction: bool,
}

impl Default for YogiConfig {
    fn default() -> Self {
        Self { lr: 1e-3, beta1: 0.9, beta2: 0.999, eps: 1e-3, bias_correction: true }
    }
}

impl YogiConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lr >= 0.0 && self.lr.is_finite()) {
            return Err(Error::config("learning rate must be finite and >= 0"));
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return Err(Error::config("betas must lie in [0, 1)"));
        }
        if !(self.eps > 0.0) {
            return Err(Error::config("eps must be positive"));
        }
        Ok(())
    }
}

/// Yogi moments. `v` starts at zero unless built with [`YogiState::with_second_moment`].
///
/// One step, elementwise:
///
/// ```text
/// m <- b1 m + (1 - b1) g
/// v <- v - (1 - b2) sign(v - g^2) g^2
/// theta <- theta - lr * m_hat / (sqrt(v_hat) + eps)
/// ```
///
/// where `m_hat = m / (1 - b1^t)` and `v_hat = v / (1 - b2^t)` when bias correction is on,
/// and the raw moments otherwise. `sign(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct YogiState {
    pub config: YogiConfig,
    pub m: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
    pub t: u64,
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn check_grads<P: Parameters + ?Sized, G: Parameters + ?Sized>(params: &P, grads: &G) -> Result<()> {
    let (p, g) = (params.tensors(), grads.tensors());
    if p.len() != g.len() || p.iter().zip(&g).any(|(a, b)| a.len() != b.len()) {
        return Err(Error::shape("gradient layout differs from parameter layout"));
    }
    if g.iter().any(|t| t.iter().any(|v| !v.is_finite())) {
        return Err(Error::NumericFailure("gradients".into()));
    }
    Ok(())
}

impl YogiState {
    pub fn new<P: Parameters + ?Sized>(params: &P, config: YogiConfig) -> Result<Self> {
        Self::with_second_moment(params, config, 0.0)
    }

    /// Starts with every second-moment entry at `v0 >= 0`.
    pub fn with_second_moment<P: Parameters + ?Sized>(
        params: &P,
        config: YogiConfig,
        v0: f64,
    ) -> Result<Self> {
        config.validate()?;
        if !(v0 >= 0.0) {
            return Err(Error::config("initial second moment must be >= 0"));
        }
        let shapes: Vec<usize> = params.tensors().iter().map(|t| t.len()).collect();
        Ok(Self {
            config,
            m: shapes.iter().map(|&n| vec![0.0; n]).collect(),
            v: shapes.iter().map(|&n| vec![v0; n]).collect(),
            t: 0,
        })
    }

    /// Applies one update. Non-finite gradients are rejected before anything is touched.
    pub fn step<P: Parameters + ?Sized, G: Parameters + ?Sized>(
        &mut self,
        params: &mut P,
        grads: &G,
    ) -> Result<()> {
        check_grads(params, grads)?;
        if self.m.len() != grads.tensors().len() {
            return Err(Error::shape("optimizer state does not match parameters"));
        }
        let YogiConfig { lr, beta1, beta2, eps, bias_correction } = self.config;
        self.t += 1;
        let (c1, c2) = if bias_correction {
            let t = self.t as f64;
            (1.0 - libm::pow(beta1, t), 1.0 - libm::pow(beta2, t))
        } else {
            (1.0, 1.0)
        };
        for (((theta, g), m), v) in params
            .tensors_mut()
            .into_iter()
            .zip(grads.tensors())
            .zip(&mut self.m)
            .zip(&mut self.v)
        {
            for i in 0..theta.len() {
                let gi = g[i];
                let g2 = gi * gi;
                m[i] = beta1 * m[i] + (1.0 - beta1) * gi;
                v[i] -= (1.0 - beta2) * sign(v[i] - g2) * g2;
                let m_hat = m[i] / c1;
                let v_hat = v[i] / c2;
                theta[i] -= lr * m_hat / (libm::sqrt(v_hat) + eps);
            }
        }
        Ok(())
    }
}

/// `theta <- theta - lr * g`.
pub fn sgd_step<P: Parameters + ?Sized, G: Parameters + ?Sized>(
    params: &mut P,
    grads: &G,
    lr: f64,
) -> Result<()> {
    check_grads(params, grads)?;
    for (theta, g) in params.tensors_mut().into_iter().zip(grads.tensors()) {
        theta.iter_mut().zip(g).for_each(|(t, gi)| *t -= lr * gi);
    }
    Ok(())
}
