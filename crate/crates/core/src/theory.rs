//! Numeric forms of the classic partial-label learnability results and of the
//! parameter-complexity proxy used for the simplicity-bias experiment.
//!
//! None of the capacity terms of a deep network are computable exactly. The Natarajan
//! dimension is replaced by `P log2 P` for `P` trainable parameters and the Rademacher
//! complexity by a product-of-Frobenius-norms bound. Both are crude upper-bound proxies;
//! they are only used to show the bounds are vacuous at realistic sizes.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::nn::{ModelParams, Parameters};

/// Inputs of the EPRM sample-complexity bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EprmInputs {
    /// Natarajan dimension of the hypothesis class, or a proxy for it.
    pub d_h: f64,
    pub k: usize,
    pub epsilon: f64,
    pub delta: f64,
    /// Ambiguity degree; must be `< 1`.
    pub gamma: f64,
}

/// `eta = ln(2 / (1 + gamma))`.
pub fn eprm_eta(gamma: f64) -> f64 {
    libm::log(2.0 / (1.0 + gamma))
}

/// Sample size above which the empirical partial-risk minimizer reaches error `< epsilon`
/// with probability `>= 1 - delta`:
///
/// ```text
/// n0 = 4 / (eta eps) * (d_H (ln(4 d_H) + 2 ln K + ln(1 / (eta eps))) + ln(1 / delta) + 1)
/// ```
///
/// Natural logarithms throughout. Fails when `gamma >= 1`, where `eta <= 0`.
pub fn eprm_sample_complexity(inp: &EprmInputs) -> Result<f64> {
    if !(inp.gamma >= 0.0) {
        return Err(Error::config("gamma must be >= 0"));
    }
    if inp.gamma >= 1.0 {
        return Err(Error::AmbiguityTooLarge(inp.gamma));
    }
    if !(inp.d_h >= 1.0 && inp.d_h.is_finite()) {
        return Err(Error::config("d_H must be >= 1"));
    }
    if inp.k < 2 {
        return Err(Error::config("K must be >= 2"));
    }
    for (name, v) in [("epsilon", inp.epsilon), ("delta", inp.delta)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::config(format!("{name} must lie in (0, 1)")));
        }
    }
    let eta = eprm_eta(inp.gamma);
    let ee = eta * inp.epsilon;
    let capacity = inp.d_h
        * (libm::log(4.0 * inp.d_h) + 2.0 * libm::log(inp.k as f64) + libm::log(1.0 / ee));
    Ok(4.0 / ee * (capacity + libm::log(1.0 / inp.delta) + 1.0))
}

/// Natarajan-dimension proxy for a network with `parameters` weights: `P log2 P`.
pub fn natarajan_proxy(parameters: usize) -> f64 {
    let p = parameters as f64;
    if p <= 1.0 {
        return 1.0;
    }
    p * libm::log2(p)
}

/// Inputs of the CC-risk estimation error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct CcBoundInputs {
    /// Lipschitz constant of the loss.
    pub rho: f64,
    /// Upper bound of the loss.
    pub m: f64,
    /// One Rademacher term per label.
    pub rademacher: Vec<f64>,
    pub delta: f64,
    pub n: usize,
}

/// `8 rho sum_y R_n(H_y) + 2 M sqrt(ln(2 / delta) / (2 n))`.
pub fn cc_bound_rhs(inp: &CcBoundInputs) -> Result<f64> {
    if !(inp.rho >= 0.0 && inp.m >= 0.0) {
        return Err(Error::config("rho and M must be >= 0"));
    }
    if inp.rademacher.iter().any(|r| !(*r >= 0.0)) {
        return Err(Error::config("Rademacher terms must be >= 0"));
    }
    if !(inp.delta > 0.0 && inp.delta < 1.0) {
        return Err(Error::config("delta must lie in (0, 1)"));
    }
    if inp.n == 0 {
        return Err(Error::config("n must be >= 1"));
    }
    let complexity: f64 = inp.rademacher.iter().sum();
    let confidence = libm::sqrt(libm::log(2.0 / inp.delta) / (2.0 * inp.n as f64));
    Ok(8.0 * inp.rho * complexity + 2.0 * inp.m * confidence)
}

/// Norm-based Rademacher proxy, one entry per label:
/// `prod_l ||W_l||_F * max_i ||x_i||_2 / sqrt(n)` over all dense layers.
///
/// Batch-norm rescaling and biases are ignored, so this is a rough surrogate rather than a
/// bound for this exact architecture. Every label gets the same value.
pub fn rademacher_norm_proxy(params: &ModelParams, features: &Matrix) -> Vec<f64> {
    let max_norm = features
        .iter_rows()
        .map(|r| libm::sqrt(r.iter().map(|v| v * v).sum()))
        .fold(0.0, f64::max);
    rademacher_proxy_for_radius(params, max_norm, features.rows())
}

/// [`rademacher_norm_proxy`] for `n` inputs of norm at most `radius`, without the data.
pub fn rademacher_proxy_for_radius(params: &ModelParams, radius: f64, n: usize) -> Vec<f64> {
    let k = params.spec.output_dim;
    if n == 0 {
        return vec![0.0; k];
    }
    let weight_norms: f64 = params.dense.iter().map(|d| d.weight.frobenius_norm()).product();
    vec![weight_norms * radius / libm::sqrt(n as f64); k]
}

/// Quantization width accepted by [`lz_complexity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantBits {
    Four,
    Eight,
    Sixteen,
}

impl QuantBits {
    pub fn from_bits(bits: u32) -> Result<Self> {
        match bits {
            4 => Ok(Self::Four),
            8 => Ok(Self::Eight),
            16 => Ok(Self::Sixteen),
            other => Err(Error::config(format!("quantization bits must be 4, 8 or 16, got {other}"))),
        }
    }

    pub fn bits(self) -> u32 {
        match self {
            Self::Four => 4,
            Self::Eight => 8,
            Self::Sixteen => 16,
        }
    }
}

/// Uniformly quantizes `values` over their own `[min, max]` to `2^bits` levels
/// (round-to-nearest). A constant tensor maps to all zeros.
pub fn quantize(values: &[f64], bits: QuantBits) -> Vec<u16> {
    let levels = ((1u32 << bits.bits()) - 1) as f64;
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if !(hi > lo) {
        return vec![0; values.len()];
    }
    let scale = levels / (hi - lo);
    values
        .iter()
        .map(|&v| libm::round((v - lo) * scale).clamp(0.0, levels) as u16)
        .collect()
}

/// Serializes quantized symbols: 4-bit symbols are packed two per byte (high nibble first,
/// a trailing odd symbol padded with a zero nibble), 8-bit symbols take one byte and
/// 16-bit symbols two little-endian bytes.
pub fn pack_symbols(symbols: &[u16], bits: QuantBits, out: &mut Vec<u8>) {
    match bits {
        QuantBits::Four => {
            for pair in symbols.chunks(2) {
                let hi = (pair[0] as u8) << 4;
                let lo = pair.get(1).map_or(0, |&s| s as u8);
                out.push(hi | lo);
            }
        }
        QuantBits::Eight => out.extend(symbols.iter().map(|&s| s as u8)),
        QuantBits::Sixteen => {
            for &s in symbols {
                out.extend_from_slice(&s.to_le_bytes());
            }
        }
    }
}

/// Byte string whose LZ76 complexity is reported by [`lz_complexity`]: every trainable
/// tensor, in canonical order, quantized on its own range and packed.
pub fn quantized_parameter_bytes(params: &ModelParams, bits: QuantBits) -> Vec<u8> {
    let mut out = Vec::with_capacity(params.scalar_count() * 2);
    for t in params.tensors() {
        pack_symbols(&quantize(t, bits), bits, &mut out);
    }
    out
}

/// Lempel-Ziv (1976) complexity of a byte string: the number of phrases in its exhaustive
/// history parsing (the Kaspar-Schuster variant).
///
/// Each phrase is the shortest prefix of the remaining input that does not occur starting
/// at an earlier position, where occurrences may overlap the phrase itself. The final
/// phrase may be a repeat. The empty string has complexity 0.
pub fn lz76_phrase_count(s: &[u8]) -> usize {
    let n = s.len();
    let mut by_byte: Vec<Vec<u32>> = vec![Vec::new(); 256];
    let mut indexed = 0;
    let mut count = 0;
    let mut p = 0;
    while p < n {
        while indexed < p {
            by_byte[s[indexed] as usize].push(indexed as u32);
            indexed += 1;
        }
        let remaining = n - p;
        let mut best = 0;
        for &j in &by_byte[s[p] as usize] {
            let j = j as usize;
            let mut l = 1;
            while l < remaining && s[j + l] == s[p + l] {
                l += 1;
            }
            if l > best {
                best = l;
                if best == remaining {
                    break;
                }
            }
        }
        count += 1;
        p += (best + 1).min(remaining);
    }
    count
}

/// LZ76 phrase count of the quantized parameter vector.
pub fn lz_complexity(params: &ModelParams, bits: u32) -> Result<usize> {
    let bits = QuantBits::from_bits(bits)?;
    Ok(lz76_phrase_count(&quantized_parameter_bytes(params, bits)))
}
