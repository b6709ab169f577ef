//! Parameter snapshots on disk, in the layout of [`naivepll_core::snapshot`].

use std::path::Path;

use naivepll_core::{snapshot, ModelParams};

use crate::error::{read_file, write_file, Result};

pub fn save_model(params: &ModelParams, path: &Path) -> Result<()> {
    write_file(path, &snapshot::encode(params))
}

pub fn load_model(path: &Path) -> Result<ModelParams> {
    Ok(snapshot::decode(&read_file(path)?)?)
}
