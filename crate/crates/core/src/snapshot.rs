//! Flat binary parameter snapshots.
//!
//! Layout, all integers and floats little-endian:
//!
//! ```text
//! magic        4 bytes  "PLLM"
//! version      u32      1
//! input_dim    u64
//! output_dim   u64
//! hidden_count u64
//! hidden_dims  u64 x hidden_count
//! elu_alpha    f64
//! bn_epsilon   f64
//! bn_momentum  f64
//! mode         u8       0 = training, 1 = inference
//! per hidden layer:
//!   weight (fan_in * fan_out f64, row-major fan_in x fan_out), bias,
//!   bn scale, bn shift, running mean, running variance
//! output layer:
//!   weight, bias
//! ```

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::nn::{BatchNorm, Dense, Mode, ModelParams, ModelSpec};

pub const MAGIC: &[u8; 4] = b"PLLM";
pub const VERSION: u32 = 1;

fn put_f64s(out: &mut Vec<u8>, vs: &[f64]) {
    for v in vs {
        out.extend_from_slice(&v.to_le_bytes());
    }
}

pub fn encode(params: &ModelParams) -> Vec<u8> {
    let spec = &params.spec;
    let mut out = Vec::with_capacity(64 + 8 * 2 * spec.parameter_count());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(spec.input_dim as u64).to_le_bytes());
    out.extend_from_slice(&(spec.output_dim as u64).to_le_bytes());
    out.extend_from_slice(&(spec.hidden_dims.len() as u64).to_le_bytes());
    for &h in &spec.hidden_dims {
        out.extend_from_slice(&(h as u64).to_le_bytes());
    }
    put_f64s(&mut out, &[spec.elu_alpha, spec.bn_epsilon, spec.bn_momentum]);
    out.push(match params.mode {
        Mode::Training => 0,
        Mode::Inference => 1,
    });
    for (d, n) in params.dense.iter().zip(&params.norms) {
        put_f64s(&mut out, d.weight.as_slice());
        put_f64s(&mut out, &d.bias);
        put_f64s(&mut out, &n.scale);
        put_f64s(&mut out, &n.shift);
        put_f64s(&mut out, &n.running_mean);
        put_f64s(&mut out, &n.running_var);
    }
    let last = params.dense.last().expect("output layer");
    put_f64s(&mut out, last.weight.as_slice());
    put_f64s(&mut out, &last.bias);
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len()).ok_or_else(|| {
            Error::contract(format!("snapshot truncated at byte {}", self.pos))
        })?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn dim(&mut self) -> Result<usize> {
        usize::try_from(self.u64()?).map_err(|_| Error::contract("snapshot dimension overflows"))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        let bytes = self.take(n.checked_mul(8).ok_or_else(|| Error::contract("snapshot too large"))?)?;
        Ok(bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect())
    }
}

pub fn decode(bytes: &[u8]) -> Result<ModelParams> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err(Error::contract("not a parameter snapshot (bad magic)"));
    }
    let version = u32::from_le_bytes(r.take(4)?.try_into().expect("4 bytes"));
    if version != VERSION {
        return Err(Error::contract(format!("unsupported snapshot version {version}")));
    }
    let input_dim = r.dim()?;
    let output_dim = r.dim()?;
    let hidden_count = r.dim()?;
    if hidden_count > 1024 {
        return Err(Error::contract("implausible hidden layer count"));
    }
    let hidden_dims = (0..hidden_count).map(|_| r.dim()).collect::<Result<Vec<_>>>()?;
    let spec = ModelSpec {
        input_dim,
        hidden_dims,
        output_dim,
        elu_alpha: r.f64()?,
        bn_epsilon: r.f64()?,
        bn_momentum: r.f64()?,
    };
    spec.validate()?;
    let mode = match r.take(1)?[0] {
        0 => Mode::Training,
        1 => Mode::Inference,
        other => return Err(Error::contract(format!("bad mode byte {other}"))),
    };
    let dims = spec.layer_dims();
    let mut dense = Vec::with_capacity(dims.len() - 1);
    let mut norms = Vec::with_capacity(spec.hidden_dims.len());
    for (l, w) in dims.windows(2).enumerate() {
        let weight = Matrix::from_vec(w[0], w[1], r.f64s(w[0] * w[1])?)?;
        let bias = r.f64s(w[1])?;
        dense.push(Dense { weight, bias });
        if l < spec.hidden_dims.len() {
            norms.push(BatchNorm {
                scale: r.f64s(w[1])?,
                shift: r.f64s(w[1])?,
                running_mean: r.f64s(w[1])?,
                running_var: r.f64s(w[1])?,
            });
        }
    }
    if r.pos != bytes.len() {
        return Err(Error::contract(format!("{} trailing bytes in snapshot", bytes.len() - r.pos)));
    }
    let params = ModelParams { spec, dense, norms, mode };
    params.validate()?;
    Ok(params)
}
