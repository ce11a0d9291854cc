//! Seeded, chunked Monte Carlo.
//!
//! A run of `n_samples` draws is cut into fixed-size chunks. Chunk `c` reads
//! its normals from the ChaCha substream `(seed, c)` and accumulates a
//! Welford summary; summaries are merged in chunk order. The result is
//! therefore a function of `(seed, chunk_size, n_samples)` only, whatever
//! executes the chunks.

use alloc::vec;
use alloc::vec::Vec;

use crate::chaos::{CompiledIntegral, HermiteTable};
use crate::dd::{diff_of_products, Dd};
use crate::malliavin::ChaosPair;
use crate::rng::{self, Rng};
use crate::{Error, GaussianSample, Result};

pub const DEFAULT_CHUNK_SIZE: usize = 4096;

/// Running mean and sum of squared deviations.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RunningStats {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl RunningStats {
    #[inline]
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Chan et al. pairwise merge.
    pub fn merge(&mut self, other: &RunningStats) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = self.count + other.count;
        let delta = other.mean - self.mean;
        self.mean += delta * (other.count as f64 / n as f64);
        self.m2 += other.m2 + delta * delta * (self.count as f64 * other.count as f64 / n as f64);
        self.count = n;
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub ci95: (f64, f64),
    pub n_samples: u64,
    pub seed: u64,
}

impl McEstimate {
    pub fn from_stats(stats: &RunningStats, seed: u64) -> Self {
        let stderr = libm::sqrt(stats.variance() / stats.count.max(1) as f64);
        McEstimate {
            mean: stats.mean,
            stderr,
            ci95: (stats.mean - 1.96 * stderr, stats.mean + 1.96 * stderr),
            n_samples: stats.count,
            seed,
        }
    }

    /// Whether `value` lies within `k` standard errors of the mean.
    pub fn brackets(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.stderr
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McPlan {
    pub n_samples: usize,
    pub seed: u64,
    pub chunk_size: usize,
}

impl McPlan {
    pub fn new(n_samples: usize, seed: u64) -> Result<Self> {
        McPlan::with_chunk_size(n_samples, seed, DEFAULT_CHUNK_SIZE)
    }

    pub fn with_chunk_size(n_samples: usize, seed: u64, chunk_size: usize) -> Result<Self> {
        if n_samples < 2 {
            return Err(Error::TooFewSamples(n_samples));
        }
        Ok(McPlan { n_samples, seed, chunk_size: chunk_size.max(1) })
    }

    pub fn chunks(&self) -> usize {
        self.n_samples.div_ceil(self.chunk_size)
    }

    pub fn chunk_len(&self, chunk: usize) -> usize {
        let start = chunk * self.chunk_size;
        self.chunk_size.min(self.n_samples.saturating_sub(start))
    }

    /// Runs one chunk on its own substream.
    pub fn run_chunk<F: FnMut(&mut Rng) -> f64>(&self, chunk: usize, mut draw: F) -> RunningStats {
        let mut rng = rng::substream(self.seed, chunk as u64);
        let mut stats = RunningStats::default();
        for _ in 0..self.chunk_len(chunk) {
            stats.push(draw(&mut rng));
        }
        stats
    }
}

/// Merges per-chunk summaries in chunk order.
pub fn merge_in_order<'a, I: IntoIterator<Item = &'a RunningStats>>(chunks: I) -> RunningStats {
    let mut total = RunningStats::default();
    for c in chunks {
        total.merge(c);
    }
    total
}

pub fn run_serial<F: FnMut(&mut Rng) -> f64>(plan: &McPlan, mut draw: F) -> RunningStats {
    let parts: Vec<RunningStats> = (0..plan.chunks()).map(|c| plan.run_chunk(c, &mut draw)).collect();
    merge_in_order(&parts)
}

/// Evaluates `det Λ` of a pair at Gaussian samples.
///
/// Holds the compiled slice integrals `S_{i,f} = I_{n-1}(s_{i,f})` and
/// `S_{i,g}` plus scratch space, so one sampler should be used per thread.
#[derive(Clone, Debug)]
pub struct DetLambdaSampler {
    dim: usize,
    f_slices: Vec<CompiledIntegral>,
    g_slices: Vec<CompiledIntegral>,
    table: HermiteTable,
    xi: Vec<f64>,
    sf: Vec<f64>,
    sg: Vec<f64>,
}

/// Both routes to `det Λ` at one sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetLambda {
    /// `‖DF‖²‖DG‖² - ⟨DF, DG⟩²`
    pub gram: f64,
    /// `½ Σ_{i,l} (S_{i,f} S_{l,g} - S_{l,f} S_{i,g})²`
    pub sum_of_squares: f64,
}

impl DetLambdaSampler {
    pub fn new(pair: &ChaosPair<f64>) -> Result<Self> {
        let dim = pair.dim();
        let compile = |t: &crate::SymTensor<f64>| -> Result<Vec<CompiledIntegral>> {
            Ok(t.slices()?.iter().map(CompiledIntegral::new).collect())
        };
        let max_order = (pair.n() - 1).max(pair.m() - 1);
        Ok(DetLambdaSampler {
            dim,
            f_slices: compile(pair.f())?,
            g_slices: compile(pair.g())?,
            table: HermiteTable::new(dim, max_order),
            xi: vec![0.0; dim],
            sf: vec![0.0; dim],
            sg: vec![0.0; dim],
        })
    }

    fn load(&mut self) {
        self.table.fill(&self.xi);
        for (out, c) in self.sf.iter_mut().zip(&self.f_slices) {
            *out = c.eval(&self.table);
        }
        for (out, c) in self.sg.iter_mut().zip(&self.g_slices) {
            *out = c.eval(&self.table);
        }
    }

    /// `(S_{i,f})_i` and `(S_{i,g})_i` at a sample.
    pub fn slice_values(&mut self, s: &GaussianSample) -> Result<(Vec<f64>, Vec<f64>)> {
        self.set_sample(s)?;
        self.load();
        Ok((self.sf.clone(), self.sg.clone()))
    }

    fn set_sample(&mut self, s: &GaussianSample) -> Result<()> {
        if s.dim() != self.dim {
            return Err(Error::SampleDim { expected: self.dim, got: s.dim() });
        }
        self.xi.copy_from_slice(s.coords());
        Ok(())
    }

    pub fn det_lambda_at(&mut self, s: &GaussianSample) -> Result<DetLambda> {
        self.set_sample(s)?;
        self.load();
        Ok(DetLambda { gram: self.gram(), sum_of_squares: self.sum_of_squares() })
    }

    fn gram(&self) -> f64 {
        let (mut a, mut b, mut q) = (Dd::default(), Dd::default(), Dd::default());
        for (&x, &y) in self.sf.iter().zip(&self.sg) {
            a = a.add(Dd::prod(x, x));
            b = b.add(Dd::prod(y, y));
            q = q.add(Dd::prod(x, y));
        }
        a.mul(b).add(q.mul(q).neg()).to_f64()
    }

    fn sum_of_squares(&self) -> f64 {
        let d = self.dim;
        let mut acc = 0.0;
        for i in 0..d {
            for l in 0..d {
                let minor = diff_of_products(self.sf[i], self.sg[l], self.sf[l], self.sg[i]);
                acc += minor * minor;
            }
        }
        0.5 * acc
    }

    /// One Monte Carlo draw; uses the sum-of-squares route, which is
    /// non-negative by construction.
    #[inline]
    pub fn draw(&mut self, rng: &mut Rng) -> f64 {
        for v in self.xi.iter_mut() {
            *v = rng::standard_normal(rng);
        }
        self.load();
        self.sum_of_squares()
    }
}

/// Serial Monte Carlo estimate of `E det Λ`.
pub fn estimate_edet(pair: &ChaosPair<f64>, n_samples: usize, seed: u64) -> Result<McEstimate> {
    let plan = McPlan::new(n_samples, seed)?;
    let mut sampler = DetLambdaSampler::new(pair)?;
    let stats = run_serial(&plan, |rng| sampler.draw(rng));
    Ok(McEstimate::from_stats(&stats, seed))
}

/// Statistics of one chunk of an `E det Λ` run; building block for
/// parallel drivers.
pub fn edet_chunk(sampler: &mut DetLambdaSampler, plan: &McPlan, chunk: usize) -> RunningStats {
    plan.run_chunk(chunk, |rng| sampler.draw(rng))
}
