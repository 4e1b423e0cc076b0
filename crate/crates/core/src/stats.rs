//! Online moments and resampling errors for ensembles of trajectories.

use serde::{Deserialize, Serialize};

/// A point estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

impl Estimate {
    pub fn new(value: f64, stderr: f64) -> Self {
        Estimate { value, stderr }
    }

    /// `|self - other| / sqrt(se1^2 + se2^2)`; infinite when both errors
    /// vanish and the values differ.
    pub fn z_score(&self, other: &Estimate) -> f64 {
        z_score(self.value - other.value, self.stderr.hypot(other.stderr))
    }

    /// Distance to an exact value in units of the standard error.
    pub fn z_against(&self, exact: f64) -> f64 {
        z_score(self.value - exact, self.stderr)
    }
}

fn z_score(diff: f64, se: f64) -> f64 {
    if diff == 0.0 {
        0.0
    } else if se > 0.0 {
        diff.abs() / se
    } else {
        f64::INFINITY
    }
}

/// Elementwise Welford accumulator over equal-length vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Welford {
    n: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Welford {
    pub fn new(len: usize) -> Self {
        Welford { n: 0, mean: vec![0.0; len], m2: vec![0.0; len] }
    }

    pub fn len(&self) -> usize {
        self.mean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mean.is_empty()
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    /// Panics if `x` has the wrong length.
    pub fn push(&mut self, x: &[f64]) {
        assert_eq!(x.len(), self.mean.len(), "sample length mismatch");
        self.n += 1;
        let inv = 1.0 / self.n as f64;
        for ((m, s), &v) in self.mean.iter_mut().zip(self.m2.iter_mut()).zip(x) {
            let d = v - *m;
            *m += d * inv;
            *s += d * (v - *m);
        }
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Unbiased sample variance; zero with fewer than two samples.
    pub fn variance(&self) -> Vec<f64> {
        if self.n < 2 {
            return vec![0.0; self.mean.len()];
        }
        let d = (self.n - 1) as f64;
        self.m2.iter().map(|s| (s / d).max(0.0)).collect()
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> Vec<f64> {
        let n = self.n.max(1) as f64;
        self.variance().into_iter().map(|v| (v / n).sqrt()).collect()
    }
}

/// Two-pass mean and standard error of the mean.
pub fn mean_stderr(xs: &[f64]) -> Estimate {
    let n = xs.len();
    if n == 0 {
        return Estimate::new(f64::NAN, f64::NAN);
    }
    let m = xs.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return Estimate::new(m, 0.0);
    }
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    Estimate::new(m, (v / n as f64).sqrt())
}

/// Standard error from delete-one-group jackknife replicates of equal
/// group size.
pub fn jackknife_stderr(replicates: &[f64]) -> f64 {
    let b = replicates.len();
    if b < 2 {
        return 0.0;
    }
    let m = replicates.iter().sum::<f64>() / b as f64;
    let ss = replicates.iter().map(|x| (x - m).powi(2)).sum::<f64>();
    (ss * (b - 1) as f64 / b as f64).sqrt()
}

/// Block index of realization `r` when `n` realizations are split into
/// `blocks` contiguous groups.
pub fn block_of(r: u64, n: u64, blocks: usize) -> usize {
    ((r as u128 * blocks as u128) / n as u128) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn welford_matches_two_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rows: Vec<Vec<f64>> =
            (0..57).map(|_| (0..5).map(|j| 1e3 * j as f64 + rng.random::<f64>()).collect()).collect();
        let mut w = Welford::new(5);
        for r in &rows {
            w.push(r);
        }
        for j in 0..5 {
            let col: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            let e = mean_stderr(&col);
            assert!((w.mean()[j] - e.value).abs() < 1e-10);
            assert!((w.stderr()[j] - e.stderr).abs() < 1e-10);
        }
    }

    #[test]
    fn jackknife_of_the_mean_is_the_classical_error() {
        let xs: Vec<f64> = (0..40).map(|i| ((i * 7919) % 31) as f64).collect();
        let total: f64 = xs.iter().sum();
        let reps: Vec<f64> = xs.iter().map(|x| (total - x) / 39.0).collect();
        assert!((jackknife_stderr(&reps) - mean_stderr(&xs).stderr).abs() < 1e-12);
    }

    #[test]
    fn blocks_are_contiguous_and_balanced() {
        let counts = (0..1000u64).fold(vec![0; 100], |mut c, r| {
            c[block_of(r, 1000, 100)] += 1;
            c
        });
        assert!(counts.iter().all(|&c| c == 10));
        assert_eq!(block_of(6, 7, 100), 85);
    }

    #[test]
    fn z_scores() {
        let a = Estimate::new(1.0, 0.3);
        let b = Estimate::new(0.0, 0.4);
        assert!((a.z_score(&b) - 2.0).abs() < 1e-12);
        assert_eq!(Estimate::new(2.0, 0.0).z_against(2.0), 0.0);
        assert!(Estimate::new(2.0, 0.0).z_against(1.0).is_infinite());
    }
}
