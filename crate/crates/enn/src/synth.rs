//! Seeded synthetic datasets.
//!
//! Both generators draw from `ChaCha8Rng::seed_from_u64(seed)` in a fixed
//! order, so a seed fully determines the output on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::io::RawDataset;

/// The regression target used for the one-dimensional example.
pub fn fig2_curve(x: f64) -> f64 {
    0.4 + 0.1 * (10.0 * x).sin() - 0.7 * x * x + 0.7 * x * x * x
}

/// `n` points with `x ~ U[0, 1)` and label `fig2_curve(x) · u`,
/// `u ~ U[0.95, 1.05)`. Each point draws `x` first, then `u`.
pub fn fig2(seed: u64, n: usize) -> RawDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = RawDataset {
        feature_names: vec!["f1".into()],
        features: Vec::with_capacity(n),
        labels: Vec::with_capacity(n),
    };
    for _ in 0..n {
        let x: f64 = rng.random_range(0.0..1.0);
        let u: f64 = rng.random_range(0.95..1.05);
        data.features.push(vec![x]);
        data.labels.push((fig2_curve(x) * u).to_string());
    }
    data
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CloudError {
    #[error("covariance {0:?} is not positive semidefinite")]
    NotPsd([f64; 3]),
}

/// A 2-D Gaussian cloud. The covariance is `[σxx, σxy, σyy]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cloud {
    pub label: String,
    pub mean: [f64; 2],
    pub cov: [f64; 3],
    pub count: usize,
}

impl Cloud {
    /// Lower Cholesky factor `[l11, l21, l22]`.
    fn factor(&self) -> Result<[f64; 3], CloudError> {
        let [sxx, sxy, syy] = self.cov;
        if !(sxx >= 0.0 && syy >= 0.0) {
            return Err(CloudError::NotPsd(self.cov));
        }
        let l11 = sxx.sqrt();
        let l21 = if l11 > 0.0 {
            sxy / l11
        } else if sxy == 0.0 {
            0.0
        } else {
            return Err(CloudError::NotPsd(self.cov));
        };
        let rest = syy - l21 * l21;
        if rest < -1e-12 * syy.max(1.0) {
            return Err(CloudError::NotPsd(self.cov));
        }
        Ok([l11, l21, rest.max(0.0).sqrt()])
    }
}

/// Default pair of clouds: two overlapping blobs inside the unit square.
pub fn default_clouds() -> [Cloud; 2] {
    [
        Cloud {
            label: "A".into(),
            mean: [0.35, 0.4],
            cov: [0.012, 0.004, 0.01],
            count: 40,
        },
        Cloud {
            label: "B".into(),
            mean: [0.65, 0.6],
            cov: [0.01, -0.003, 0.014],
            count: 40,
        },
    ]
}

/// Samples each cloud in order; every point draws two standard normals.
pub fn fig1(seed: u64, clouds: &[Cloud]) -> Result<RawDataset, CloudError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = RawDataset {
        feature_names: vec!["f1".into(), "f2".into()],
        features: Vec::new(),
        labels: Vec::new(),
    };
    for cloud in clouds {
        let [l11, l21, l22] = cloud.factor()?;
        for _ in 0..cloud.count {
            let z1: f64 = rng.sample(StandardNormal);
            let z2: f64 = rng.sample(StandardNormal);
            data.features.push(vec![
                cloud.mean[0] + l11 * z1,
                cloud.mean[1] + l21 * z1 + l22 * z2,
            ]);
            data.labels.push(cloud.label.clone());
        }
    }
    Ok(data)
}
