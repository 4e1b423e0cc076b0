use std::io::Write;

use crate::error::{Error, Result};
use crate::stats::{block_of, jackknife_stderr, Estimate, Welford};

use super::ImpactTrajectory;

/// Upper bound on jackknife groups; realizations are pooled into contiguous
/// blocks beyond this.
pub const MAX_JACKKNIFE_BLOCKS: usize = 100;

/// Ensemble average of impact trajectories with its resampling replicates.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpactSeries {
    pub patterns: usize,
    pub duration: u64,
    pub h: f64,
    pub realizations: u64,
    /// Mean `Delta(t)` for `t = 0..=t_max`.
    pub mean: Vec<f64>,
    /// Standard error of each `mean[t]` across realizations.
    pub stderr: Vec<f64>,
    /// Leave-one-block-out means of `Delta(t)`.
    replicates: Vec<Vec<f64>>,
}

impl ImpactSeries {
    /// Noise-free series, e.g. a closed-form test curve. Every estimate
    /// carries zero error.
    pub fn exact(delta: Vec<f64>, patterns: usize, duration: u64, h: f64) -> Self {
        let n = delta.len();
        ImpactSeries {
            patterns,
            duration,
            h,
            realizations: 1,
            mean: delta,
            stderr: vec![0.0; n],
            replicates: Vec::new(),
        }
    }

    /// Averages trajectories held in memory, in slice order.
    pub fn from_trajectories(trajs: &[ImpactTrajectory]) -> Result<Self> {
        let first = trajs
            .first()
            .ok_or_else(|| Error::Measurement("no trajectories to average".into()))?;
        let mut b = SeriesBuilder::new(first.delta.len(), trajs.len() as u64);
        for t in trajs {
            b.push(t)?;
        }
        b.finish(first.patterns, first.duration, first.h)
    }

    pub fn t_max(&self) -> usize {
        self.mean.len() - 1
    }

    pub fn num_replicates(&self) -> usize {
        self.replicates.len()
    }

    /// Applies `f` to the mean trajectory and to every jackknife replicate.
    pub fn estimate<F>(&self, f: F) -> Result<Estimate>
    where
        F: Fn(&[f64]) -> Result<f64>,
    {
        let value = f(&self.mean)?;
        let reps = self.replicates.iter().map(|r| f(r)).collect::<Result<Vec<f64>>>()?;
        Ok(Estimate::new(value, jackknife_stderr(&reps)))
    }

    /// Mean excess demand `A_h(s) - baseline` for `s = 0..t_max`.
    pub fn mean_excess(&self) -> Vec<f64> {
        excess_of(&self.mean, self.patterns)
    }

    /// Mean excess demand averaged over steps `from..to`, with error.
    pub fn excess_over(&self, from: usize, to: usize) -> Result<Estimate> {
        if from >= to || to > self.t_max() {
            return Err(Error::Measurement(format!(
                "excess window [{from}, {to}) is empty or beyond t_max = {}",
                self.t_max()
            )));
        }
        let p = self.patterns as f64;
        let width = (to - from) as f64;
        self.estimate(|d| Ok((d[to] - d[from]) * p / width))
    }

    /// Writes `t, t_over_T, delta_mean, delta_stderr, n_realizations`.
    /// Lines of `comment` are emitted first, each prefixed by `# `.
    pub fn write_csv<W: Write>(&self, out: W, comment: &[String]) -> Result<()> {
        let mut out = out;
        for line in comment {
            writeln!(out, "# {line}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "t_over_T", "delta_mean", "delta_stderr", "n_realizations"])?;
        let dur = self.duration as f64;
        for (t, (m, s)) in self.mean.iter().zip(&self.stderr).enumerate() {
            w.write_record(&[
                t.to_string(),
                format!("{}", t as f64 / dur),
                format!("{m:e}"),
                format!("{s:e}"),
                self.realizations.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub(crate) fn excess_of(delta: &[f64], patterns: usize) -> Vec<f64> {
    let p = patterns as f64;
    delta.windows(2).map(|w| (w[1] - w[0]) * p).collect()
}

/// Order-sensitive accumulator: push trajectories in realization order so
/// the result does not depend on how they were computed.
#[derive(Debug, Clone)]
pub struct SeriesBuilder {
    expected: u64,
    pushed: u64,
    moments: Welford,
    block_sums: Vec<Vec<f64>>,
    block_counts: Vec<u64>,
    total: Vec<f64>,
}

impl SeriesBuilder {
    pub fn new(len: usize, realizations: u64) -> Self {
        let blocks = (realizations as usize).clamp(1, MAX_JACKKNIFE_BLOCKS);
        SeriesBuilder {
            expected: realizations,
            pushed: 0,
            moments: Welford::new(len),
            block_sums: vec![vec![0.0; len]; blocks],
            block_counts: vec![0; blocks],
            total: vec![0.0; len],
        }
    }

    pub fn push(&mut self, traj: &ImpactTrajectory) -> Result<()> {
        if self.pushed >= self.expected {
            return Err(Error::Measurement("more trajectories than announced".into()));
        }
        if traj.delta.len() != self.moments.len() {
            return Err(Error::Measurement(format!(
                "trajectory length {} differs from {}",
                traj.delta.len(),
                self.moments.len()
            )));
        }
        let k = block_of(self.pushed, self.expected, self.block_sums.len());
        for ((s, t), &d) in self.block_sums[k].iter_mut().zip(self.total.iter_mut()).zip(&traj.delta) {
            *s += d;
            *t += d;
        }
        self.block_counts[k] += 1;
        self.moments.push(&traj.delta);
        self.pushed += 1;
        Ok(())
    }

    pub fn finish(self, patterns: usize, duration: u64, h: f64) -> Result<ImpactSeries> {
        if self.pushed != self.expected {
            return Err(Error::Measurement(format!(
                "expected {} trajectories, got {}",
                self.expected, self.pushed
            )));
        }
        let n = self.pushed;
        let replicates = if n < 2 {
            Vec::new()
        } else {
            self.block_sums
                .iter()
                .zip(&self.block_counts)
                .map(|(sums, &c)| {
                    let inv = 1.0 / (n - c) as f64;
                    self.total.iter().zip(sums).map(|(t, s)| (t - s) * inv).collect()
                })
                .collect()
        };
        Ok(ImpactSeries {
            patterns,
            duration,
            h,
            realizations: n,
            stderr: self.moments.stderr(),
            mean: self.moments.mean().to_vec(),
            replicates,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn traj(delta: Vec<f64>) -> ImpactTrajectory {
        let excess = excess_of(&delta, 2);
        ImpactTrajectory { delta, excess, baseline_mean_a: 0.0, patterns: 2, duration: 1, h: 1.0 }
    }

    #[test]
    fn mean_and_linear_estimates() {
        let ts: Vec<_> = (0..7).map(|i| traj(vec![0.0, i as f64, 2.0 * i as f64])).collect();
        let s = ImpactSeries::from_trajectories(&ts).unwrap();
        assert_eq!(s.mean, vec![0.0, 3.0, 6.0]);
        assert_eq!(s.num_replicates(), 7);
        // jackknife of a linear functional equals the classical error
        let e = s.estimate(|d| Ok(d[2])).unwrap();
        assert!((e.value - 6.0).abs() < 1e-12);
        assert!((e.stderr - s.stderr[2]).abs() < 1e-12);
        let x = s.excess_over(0, 2).unwrap();
        assert!((x.value - 6.0).abs() < 1e-12);
        assert_eq!(s.mean_excess(), vec![6.0, 6.0]);
    }

    #[test]
    fn builder_rejects_miscounts() {
        let mut b = SeriesBuilder::new(2, 2);
        b.push(&traj(vec![0.0, 1.0])).unwrap();
        assert!(b.clone().finish(2, 1, 1.0).is_err());
        assert!(b.push(&traj(vec![0.0, 1.0, 2.0])).is_err());
        b.push(&traj(vec![0.0, 1.0])).unwrap();
        assert!(b.push(&traj(vec![0.0, 1.0])).is_err());
    }

    #[test]
    fn csv_layout() {
        let s = ImpactSeries::exact(vec![0.0, 0.5, 1.0], 4, 2, 1.0);
        let mut buf = Vec::new();
        s.write_csv(&mut buf, &["hash abc".into()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# hash abc");
        assert_eq!(lines[1], "t,t_over_T,delta_mean,delta_stderr,n_realizations");
        assert_eq!(lines[3], "1,0.5,5e-1,0e0,1");
        assert_eq!(lines.len(), 5);
    }
}
