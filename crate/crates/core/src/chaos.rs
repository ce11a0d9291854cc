//! Multiple Wiener-Ito integrals over a truncated basis.
//!
//! A sample of the isonormal process restricted to the first `d` basis
//! vectors is the vector `ξ = (W(e_1), …, W(e_d))` of i.i.d. standard
//! normals. The integral of a symmetric tensor is then the polynomial
//!
//! ```text
//! I_n(f)(ξ) = Σ_a mult(a) · λ_a · Π_i H_{a_i}(ξ_i)
//! ```
//!
//! with probabilists' Hermite polynomials `H_k`, so that
//! `I_n(h^{⊗n}) = H_n(W(h))` and `E[I_n(f)²] = n!‖f‖²`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::montecarlo::{self, McEstimate, McPlan};
use crate::multi_index::{binomial, factorial, multiplicity};
use crate::{rng, Error, Result, Scalar, SymTensor};

/// Probabilists' Hermite polynomial `H_n(x)`:
/// `H_0 = 1`, `H_1 = x`, `H_{k+1} = x H_k - k H_{k-1}`.
pub fn hermite(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Writes `H_0(x), …, H_{out.len()-1}(x)` into `out`.
pub fn hermite_into(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = x;
    }
    for k in 1..out.len().saturating_sub(1) {
        out[k + 1] = x * out[k] - k as f64 * out[k - 1];
    }
}

/// One realization of `(W(e_1), …, W(e_d))`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianSample {
    xi: Vec<f64>,
}

impl GaussianSample {
    pub fn new(xi: Vec<f64>) -> Self {
        debug_assert!(xi.iter().all(|x| x.is_finite()));
        GaussianSample { xi }
    }

    /// i.i.d. standard normal coordinates from `seed`.
    pub fn sample(seed: u64, dim: usize) -> Self {
        GaussianSample::draw(&mut rng::seeded(seed), dim)
    }

    pub fn draw<R: rand::Rng + ?Sized>(rng: &mut R, dim: usize) -> Self {
        GaussianSample { xi: (0..dim).map(|_| rng::standard_normal(rng)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.xi.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.xi
    }
}

/// Table of `H_k(ξ_i)` for `k = 0..=max_order`, laid out row per coordinate.
#[derive(Clone, Debug)]
pub struct HermiteTable {
    stride: usize,
    values: Vec<f64>,
}

impl HermiteTable {
    pub fn new(dim: usize, max_order: usize) -> Self {
        HermiteTable { stride: max_order + 1, values: vec![0.0; dim * (max_order + 1)] }
    }

    pub fn fill(&mut self, xi: &[f64]) {
        for (row, &x) in self.values.chunks_exact_mut(self.stride).zip(xi) {
            hermite_into(x, row);
        }
    }

    #[inline]
    fn get(&self, i: usize, k: usize) -> f64 {
        self.values[i * self.stride + k]
    }
}

/// `I_n(f)` flattened for repeated evaluation: zero coefficients dropped,
/// multiplicities folded into the weights.
#[derive(Clone, Debug)]
pub struct CompiledIntegral {
    dim: usize,
    order: usize,
    occupations: Vec<u32>,
    weights: Vec<f64>,
}

impl CompiledIntegral {
    pub fn new(f: &SymTensor<f64>) -> Self {
        let mut occupations = Vec::new();
        let mut weights = Vec::new();
        for (occ, &c) in f.iter() {
            if c != 0.0 {
                occupations.extend_from_slice(&occ);
                weights.push(multiplicity(&occ) as f64 * c);
            }
        }
        CompiledIntegral { dim: f.dim(), order: f.order(), occupations, weights }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Needs a table filled up to at least `self.order()`.
    #[inline]
    pub fn eval(&self, table: &HermiteTable) -> f64 {
        let d = self.dim;
        let mut acc = 0.0;
        for (occ, &w) in self.occupations.chunks_exact(d.max(1)).zip(&self.weights) {
            let mut term = w;
            for (i, &a) in occ.iter().enumerate() {
                if a > 0 {
                    term *= table.get(i, a as usize);
                }
            }
            acc += term;
        }
        acc
    }
}

/// Realization of `I_n(f)` at a sample; the constant for `n = 0`.
pub fn eval_integral(f: &SymTensor<f64>, s: &GaussianSample) -> Result<f64> {
    if s.dim() != f.dim() {
        return Err(Error::SampleDim { expected: f.dim(), got: s.dim() });
    }
    let mut table = HermiteTable::new(f.dim(), f.order());
    table.fill(s.coords());
    Ok(CompiledIntegral::new(f).eval(&table))
}

/// Finite sum `Σ_k I_k(u_k)`; the order-0 term is the constant.
#[derive(Clone, Debug, PartialEq)]
pub struct ChaosExpansion<S = f64> {
    dim: usize,
    terms: BTreeMap<usize, SymTensor<S>>,
}

impl<S: Scalar> ChaosExpansion<S> {
    pub fn zero(dim: usize) -> Self {
        ChaosExpansion { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: S) -> Result<Self> {
        let mut x = ChaosExpansion::zero(dim);
        x.add_term(SymTensor::scalar(dim, c)?)?;
        Ok(x)
    }

    /// The single integral `I_n(f)`.
    pub fn integral(f: SymTensor<S>) -> Self {
        let mut terms = BTreeMap::new();
        let dim = f.dim();
        terms.insert(f.order(), f);
        ChaosExpansion { dim, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<usize, SymTensor<S>> {
        &self.terms
    }

    pub fn term(&self, order: usize) -> Option<&SymTensor<S>> {
        self.terms.get(&order)
    }

    pub fn max_order(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    /// Adds `I_k(f)` to the expansion, merging with an existing order-`k`
    /// term.
    pub fn add_term(&mut self, f: SymTensor<S>) -> Result<()> {
        self.add_scaled_term(&S::one(), &f)
    }

    fn add_scaled_term(&mut self, c: &S, f: &SymTensor<S>) -> Result<()> {
        if f.dim() != self.dim {
            return Err(Error::DimMismatch { left: self.dim, right: f.dim() });
        }
        match self.terms.get_mut(&f.order()) {
            Some(t) => t.add_scaled(c, f),
            None => {
                self.terms.insert(f.order(), f.scale(c.clone()));
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for t in other.terms.values() {
            out.add_scaled_term(&S::one(), t)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: S) -> Self {
        ChaosExpansion {
            dim: self.dim,
            terms: self.terms.iter().map(|(&k, t)| (k, t.scale(c.clone()))).collect(),
        }
    }

    /// Product by the multiplication formula
    /// `I_n(f) I_m(g) = Σ_r r! C(n,r) C(m,r) I_{n+m-2r}(f ⊗̃_r g)`,
    /// extended bilinearly over all term pairs.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch { left: self.dim, right: other.dim });
        }
        let mut out = ChaosExpansion::zero(self.dim);
        for (&n, f) in &self.terms {
            for (&m, g) in &other.terms {
                for r in 0..=n.min(m) {
                    let w = factorial(r) * binomial(n, r) * binomial(m, r);
                    let h = f.contract_sym(g, r)?;
                    out.add_scaled_term(&S::from_u64(w), &h)?;
                }
            }
        }
        Ok(out)
    }

    /// `E[X]`: every chaos of order `k >= 1` is centered.
    pub fn expectation(&self) -> S {
        self.terms.get(&0).map(|t| t.coeffs()[0].clone()).unwrap_or_else(S::zero)
    }

    /// `E[XY] = Σ_k k! ⟨x_k, y_k⟩`, the order-0 term of `product` without
    /// forming the higher chaoses.
    pub fn mean_of_product(&self, other: &Self) -> Result<S> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch { left: self.dim, right: other.dim });
        }
        let mut acc = S::zero();
        for (k, x) in &self.terms {
            if let Some(y) = other.terms.get(k) {
                acc += S::from_u64(factorial(*k)) * x.inner(y)?;
            }
        }
        Ok(acc)
    }
}

impl ChaosExpansion<f64> {
    pub fn eval(&self, s: &GaussianSample) -> Result<f64> {
        if s.dim() != self.dim {
            return Err(Error::SampleDim { expected: self.dim, got: s.dim() });
        }
        let mut table = HermiteTable::new(self.dim, self.max_order().unwrap_or(0));
        table.fill(s.coords());
        Ok(self.terms.values().map(|t| CompiledIntegral::new(t).eval(&table)).sum())
    }
}

/// Empirical mean of `X` over `n_samples` seeded Gaussian samples.
pub fn moment_mc(x: &ChaosExpansion<f64>, n_samples: usize, seed: u64) -> Result<f64> {
    Ok(moment_mc_estimate(x, n_samples, seed)?.mean)
}

/// As [`moment_mc`], with the standard error and confidence interval.
pub fn moment_mc_estimate(x: &ChaosExpansion<f64>, n_samples: usize, seed: u64) -> Result<McEstimate> {
    let plan = McPlan::new(n_samples, seed)?;
    let compiled: Vec<CompiledIntegral> = x.terms.values().map(CompiledIntegral::new).collect();
    let dim = x.dim;
    let mut table = HermiteTable::new(dim, x.max_order().unwrap_or(0));
    let mut xi = vec![0.0; dim];
    let stats = montecarlo::run_serial(&plan, |rng| {
        for v in xi.iter_mut() {
            *v = rng::standard_normal(rng);
        }
        table.fill(&xi);
        compiled.iter().map(|c| c.eval(&table)).sum()
    });
    Ok(McEstimate::from_stats(&stats, seed))
}
