//! The PLLD text format for partially labeled datasets.
//!
//! ```text
//! PLLD v1 n=<n> d=<d> K=<K> labeled=<0|1>
//! <x_1> <x_2> ... <x_d> | <c_1>,<c_2>,... [| <y>]
//! ```
//!
//! One data line per example, LF endings. Features use 17 significant digits, so
//! save then load reproduces every `f64` exactly. Candidates are 0-based and strictly
//! ascending; the true label column is present iff `labeled=1`.

use std::fmt::Write as _;
use std::path::Path;

use naivepll_core::{CandidateMasks, Matrix, PllDataset};

use crate::error::{read_file, write_file, Error, Result};

/// `x` with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_string(data: &PllDataset) -> String {
    let (n, d, k) = (data.len(), data.dim(), data.num_labels());
    let mut out = format!("PLLD v1 n={n} d={d} K={k} labeled={}\n", u8::from(data.is_labeled()));
    for i in 0..n {
        for (j, x) in data.features().row(i).iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            out.push_str(&fmt_f64(*x));
        }
        out.push_str(" | ");
        for (c, label) in data.masks().labels(i).enumerate() {
            if c > 0 {
                out.push(',');
            }
            write!(out, "{label}").expect("writing to a String");
        }
        if let Some(y) = data.true_labels() {
            write!(out, " | {}", y[i]).expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

fn header_field<'a>(tok: Option<&'a str>, key: &str) -> Result<&'a str> {
    tok.and_then(|t| t.strip_prefix(key)).and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| Error::parse(1, format!("expected `{key}=<value>` in the header")))
}

fn header_usize(tok: Option<&str>, key: &str) -> Result<usize> {
    let v = header_field(tok, key)?;
    v.parse().map_err(|_| Error::parse(1, format!("bad {key} value `{v}`")))
}

pub fn from_str(text: &str) -> Result<PllDataset> {
    let mut lines = text.split('\n');
    let header = lines.next().unwrap_or_default();
    let mut toks = header.split(' ');
    if toks.next() != Some("PLLD") || toks.next() != Some("v1") {
        return Err(Error::parse(1, "missing `PLLD v1` header"));
    }
    let n = header_usize(toks.next(), "n")?;
    let d = header_usize(toks.next(), "d")?;
    let k = header_usize(toks.next(), "K")?;
    let labeled = match header_field(toks.next(), "labeled")? {
        "0" => false,
        "1" => true,
        other => return Err(Error::parse(1, format!("labeled must be 0 or 1, got `{other}`"))),
    };
    if toks.next().is_some() {
        return Err(Error::parse(1, "trailing tokens in the header"));
    }
    if d == 0 || k == 0 {
        return Err(Error::parse(1, "d and K must be >= 1"));
    }

    let mut features = Vec::with_capacity(n.saturating_mul(d).min(1 << 24));
    let mut masks = CandidateMasks::new(n, k);
    let mut labels = Vec::new();
    for i in 0..n {
        let line_no = i + 2;
        let line = lines
            .next()
            .filter(|l| !l.is_empty())
            .ok_or_else(|| Error::parse(line_no, format!("expected {n} data lines, found {i}")))?;
        let mut parts = line.split(" | ");
        let xs = parts.next().unwrap_or_default();
        let mut count = 0;
        for tok in xs.split(' ') {
            let x: f64 = tok
                .parse()
                .ok()
                .filter(|x: &f64| x.is_finite())
                .ok_or_else(|| Error::parse(line_no, format!("bad feature value `{tok}`")))?;
            features.push(x);
            count += 1;
        }
        if count != d {
            return Err(Error::parse(line_no, format!("expected {d} features, found {count}")));
        }
        let cands = parts
            .next()
            .ok_or_else(|| Error::parse(line_no, "missing ` | ` before the candidate set"))?;
        if cands.is_empty() {
            return Err(Error::parse(line_no, "empty candidate set"));
        }
        let mut prev = None;
        for tok in cands.split(',') {
            let c: usize = tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad candidate `{tok}`")))?;
            if c >= k {
                return Err(Error::parse(line_no, format!("candidate {c} >= K = {k}")));
            }
            if prev.is_some_and(|p| p >= c) {
                return Err(Error::parse(line_no, "candidates must be strictly ascending"));
            }
            prev = Some(c);
            masks.insert(i, c);
        }
        match (parts.next(), labeled) {
            (Some(tok), true) => {
                let y: usize = tok
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad true label `{tok}`")))?;
                if y >= k || !masks.contains(i, y) {
                    return Err(Error::parse(line_no, format!("true label {y} is not a candidate")));
                }
                labels.push(y);
            }
            (None, false) => {}
            (None, true) => return Err(Error::parse(line_no, "missing true label")),
            (Some(_), false) => {
                return Err(Error::parse(line_no, "true label given in an unlabeled file"))
            }
        }
        if parts.next().is_some() {
            return Err(Error::parse(line_no, "too many ` | ` separators"));
        }
    }
    match (lines.next(), lines.next()) {
        (Some(""), None) => {}
        (None, _) => return Err(Error::parse(n + 1, "missing final newline")),
        _ => return Err(Error::parse(n + 2, format!("more than n={n} data lines"))),
    }
    let features = Matrix::from_vec(n, d, features)?;
    Ok(PllDataset::new(features, masks, labeled.then_some(labels))?)
}

pub fn save_dataset(data: &PllDataset, path: &Path) -> Result<()> {
    write_file(path, to_string(data).as_bytes())
}

pub fn load_dataset(path: &Path) -> Result<PllDataset> {
    let bytes = read_file(path)?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| Error::parse(0, format!("{}: not UTF-8 ({e})", path.display())))?;
    from_str(text)
}
