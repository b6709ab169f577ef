//! The `bounds` report: both learnability bounds evaluated for one network.

use std::fmt::Write as _;

use naivepll_core::losses::cc_loss_upper_bound;
use naivepll_core::theory::{
    cc_bound_rhs, eprm_eta, eprm_sample_complexity, natarajan_proxy, rademacher_norm_proxy,
    rademacher_proxy_for_radius, CcBoundInputs, EprmInputs,
};
use naivepll_core::{Error as CoreError, Matrix, ModelParams, Parameters};

use crate::error::Result;
use crate::plld::fmt_f64;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsConfig {
    /// Natarajan dimension; `None` uses the `P log2 P` proxy.
    pub d_h: Option<f64>,
    pub epsilon: f64,
    pub delta: f64,
    pub gamma: f64,
    pub rho: f64,
    /// Loss bound; `None` uses the floored CC loss bound for the model's `K`.
    pub m: Option<f64>,
    /// Sample size; ignored when features are supplied.
    pub n: usize,
    /// Input norm bound; ignored when features are supplied.
    pub radius: f64,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self { d_h: None, epsilon: 0.05, delta: 0.05, gamma: 0.5, rho: 1.0, m: None, n: 10_000, radius: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub parameters: usize,
    pub k: usize,
    pub d_h: f64,
    pub d_h_is_proxy: bool,
    pub epsilon: f64,
    pub delta: f64,
    pub gamma: f64,
    pub eta: f64,
    /// `None` when `gamma >= 1`.
    pub n0: Option<f64>,
    pub n: usize,
    pub rho: f64,
    pub m: f64,
    pub rademacher: Vec<f64>,
    pub cc_rhs: f64,
}

/// Evaluates both bounds for `params`. With `features`, `n` and the input radius come from
/// the data; otherwise from the config.
pub fn compute_bounds(params: &ModelParams, features: Option<&Matrix>, cfg: &BoundsConfig) -> Result<BoundsReport> {
    let parameters = params.scalar_count();
    let k = params.spec.output_dim;
    let d_h = cfg.d_h.unwrap_or_else(|| natarajan_proxy(parameters));
    let n0 = match eprm_sample_complexity(&EprmInputs {
        d_h,
        k,
        epsilon: cfg.epsilon,
        delta: cfg.delta,
        gamma: cfg.gamma,
    }) {
        Ok(v) => Some(v),
        Err(CoreError::AmbiguityTooLarge(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let (rademacher, n) = match features {
        Some(x) => (rademacher_norm_proxy(params, x), x.rows()),
        None => (rademacher_proxy_for_radius(params, cfg.radius, cfg.n), cfg.n),
    };
    let m = match cfg.m {
        Some(m) => m,
        None => cc_loss_upper_bound(k)?,
    };
    let cc_rhs = cc_bound_rhs(&CcBoundInputs {
        rho: cfg.rho,
        m,
        rademacher: rademacher.clone(),
        delta: cfg.delta,
        n,
    })?;
    Ok(BoundsReport {
        parameters,
        k,
        d_h,
        d_h_is_proxy: cfg.d_h.is_none(),
        epsilon: cfg.epsilon,
        delta: cfg.delta,
        gamma: cfg.gamma,
        eta: eprm_eta(cfg.gamma),
        n0,
        n,
        rho: cfg.rho,
        m,
        rademacher,
        cc_rhs,
    })
}

impl BoundsReport {
    /// Whether both bounds are vacuous at this `n`: `n0 > n` (or undefined) and RHS > 1.
    pub fn vacuous(&self) -> bool {
        self.n0.is_none_or(|n0| n0 > self.n as f64) && self.cc_rhs > 1.0
    }

    pub fn to_text(&self) -> String {
        let mut o = String::new();
        let proxy = if self.d_h_is_proxy { " (proxy P log2 P)" } else { "" };
        writeln!(o, "parameters P = {}", self.parameters).unwrap();
        writeln!(o, "labels K = {}", self.k).unwrap();
        writeln!(o, "[sample complexity]").unwrap();
        writeln!(o, "d_H = {}{proxy}", fmt_f64(self.d_h)).unwrap();
        writeln!(o, "epsilon = {} delta = {} gamma = {}", self.epsilon, self.delta, self.gamma).unwrap();
        writeln!(o, "eta = {}", fmt_f64(self.eta)).unwrap();
        match self.n0 {
            Some(n0) => writeln!(o, "n0 = {}", fmt_f64(n0)).unwrap(),
            None => writeln!(o, "n0 = undefined (small ambiguity degree condition violated)").unwrap(),
        }
        writeln!(o, "[cc risk estimation error]").unwrap();
        writeln!(o, "n = {} rho = {} M = {}", self.n, self.rho, fmt_f64(self.m)).unwrap();
        writeln!(o, "rademacher proxy per label = {} (product of Frobenius norms)", fmt_f64(self.rademacher.first().copied().unwrap_or(0.0))).unwrap();
        writeln!(o, "rhs = {}", fmt_f64(self.cc_rhs)).unwrap();
        writeln!(o, "vacuous at n = {}: {}", self.n, self.vacuous()).unwrap();
        o
    }
}
