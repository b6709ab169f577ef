use alloc::vec::Vec;

use rand_distr::{Distribution, StandardNormal};

use super::PllDataset;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng;

/// Isotropic Gaussian classes. Class `k` is centred at
/// `r * (cos(2 pi k / K), sin(2 pi k / K), 0, ..., 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlobSpec {
    pub classes: usize,
    pub dim: usize,
    pub radius: f64,
    pub sigma: f64,
    pub n_per_class: usize,
}

impl BlobSpec {
    pub fn validate(&self) -> Result<()> {
        if self.classes < 1 {
            return Err(Error::config("blobs need at least one class"));
        }
        if self.dim < 2 {
            return Err(Error::config("blob means live in the first two coordinates; dim must be >= 2"));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::config("blob radius must be positive"));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::config("blob sigma must be non-negative"));
        }
        Ok(())
    }

    pub fn class_mean(&self, class: usize) -> Vec<f64> {
        let angle = 2.0 * core::f64::consts::PI * class as f64 / self.classes as f64;
        let mut mean = alloc::vec![0.0; self.dim];
        mean[0] = self.radius * libm::cos(angle);
        mean[1] = self.radius * libm::sin(angle);
        mean
    }
}

/// Draws `n_per_class` points per class. Example `i` belongs to class `i mod K`, and every
/// candidate set is the singleton `{y}`.
///
/// `sigma = 0` is accepted and places every point exactly on its class mean.
pub fn gen_gaussian_blobs(spec: &BlobSpec, seed: u64) -> Result<PllDataset> {
    spec.validate()?;
    let n = spec.classes * spec.n_per_class;
    let means: Vec<Vec<f64>> = (0..spec.classes).map(|c| spec.class_mean(c)).collect();
    let mut rng = rng::stream(seed, "blobs", 0);
    let mut data = Vec::with_capacity(n * spec.dim);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let y = i % spec.classes;
        for &m in &means[y] {
            let z: f64 = StandardNormal.sample(&mut rng);
            data.push(m + spec.sigma * z);
        }
        labels.push(y);
    }
    let features = Matrix::from_vec(n, spec.dim, data)?;
    PllDataset::supervised(features, spec.classes, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(sigma: f64) -> BlobSpec {
        BlobSpec { classes: 3, dim: 4, radius: 2.0, sigma, n_per_class: 5 }
    }

    #[test]
    fn zero_noise_puts_points_on_means() {
        let s = spec(0.0);
        let d = gen_gaussian_blobs(&s, 1).unwrap();
        for i in 0..d.len() {
            let y = d.true_labels().unwrap()[i];
            assert_eq!(d.features().row(i), &s.class_mean(y)[..]);
        }
    }

    #[test]
    fn balanced_classes_and_singletons() {
        let d = gen_gaussian_blobs(&spec(1.0), 2).unwrap();
        let mut counts = [0; 3];
        for (i, &y) in d.true_labels().unwrap().iter().enumerate() {
            counts[y] += 1;
            assert_eq!(d.masks().labels(i).collect::<Vec<_>>(), alloc::vec![y]);
        }
        assert_eq!(counts, [5, 5, 5]);
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(gen_gaussian_blobs(&spec(1.0), 3).unwrap(), gen_gaussian_blobs(&spec(1.0), 3).unwrap());
        assert_ne!(gen_gaussian_blobs(&spec(1.0), 3).unwrap(), gen_gaussian_blobs(&spec(1.0), 4).unwrap());
    }

    #[test]
    fn rejects_bad_spec() {
        assert!(gen_gaussian_blobs(&BlobSpec { dim: 1, ..spec(1.0) }, 0).is_err());
        assert!(gen_gaussian_blobs(&BlobSpec { radius: 0.0, ..spec(1.0) }, 0).is_err());
    }
}
