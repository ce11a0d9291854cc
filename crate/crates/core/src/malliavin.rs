//! Malliavin matrix determinants for couples of multiple integrals.
//!
//! For `F = I_n(f)` and `G = I_m(g)` the derivative is
//! `DF = Σ_i S_{i,f} e_i` with `S_{i,f} = I_{n-1}(s_{i,f})`, and
//!
//! ```text
//! det Λ = ‖DF‖²‖DG‖² - ⟨DF,DG⟩² = ½ Σ_{i,l} (S_{i,f} S_{l,g} - S_{l,f} S_{i,g})²
//! ```
//!
//! Taking expectations with the product formula and the isometry splits
//! `E det Λ` into non-negative terms
//!
//! ```text
//! T_k = ½ k!² C(m-1,k)² C(n-1,k)² (m+n-2-2k)! Σ_{i,l} ‖s_{i,f} ⊗̃_k s_{l,g} - s_{l,f} ⊗̃_k s_{i,g}‖²
//! ```
//!
//! for `k = 0..=(n-1)∧(m-1)`. `T_0` also has a closed form in contraction
//! norms of `f` and `g`, which is how `E det Λ` is related to the covariance
//! determinant `det C`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::montecarlo::{DetLambda, DetLambdaSampler, McEstimate};
use crate::multi_index::{binomial, factorial};
use crate::tensor::BiSymTensor;
use crate::{verify, Error, GaussianSample, Guard, Result, Scalar, SymTensor};

/// `s_{1,f}, …, s_{d,f}`: the coordinates of `DI_n(f)` as order-`n-1`
/// kernels.
pub fn malliavin_slices<S: Scalar>(f: &SymTensor<S>) -> Result<Vec<SymTensor<S>>> {
    f.slices()
}

/// The couple `(F, G) = (I_n(f), I_m(g))`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChaosPair<S = f64> {
    f: SymTensor<S>,
    g: SymTensor<S>,
}

/// The covariance matrix of `(F, G)` and its determinant.
#[derive(Clone, Debug, PartialEq)]
pub struct Covariance<S = f64> {
    pub matrix: [[S; 2]; 2],
    pub det: S,
}

/// Same-chaos split of `E det Λ`:
/// `m² det C + correction + R_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct SameChaosDecomposition<S = f64> {
    pub scaled_det_c: S,
    /// `(m m!)² Σ_{r=1}^{⌊(m-1)/2⌋} (C(m-1,r)² - C(m-1,r-1)²)(‖f⊗_r g‖² - ‖f⊗_{m-r} g‖²)`
    pub correction: S,
    pub remainder: S,
    pub total: S,
}

impl<S: Scalar> ChaosPair<S> {
    pub fn new(f: SymTensor<S>, g: SymTensor<S>) -> Result<Self> {
        if f.dim() != g.dim() {
            return Err(Error::DimMismatch { left: f.dim(), right: g.dim() });
        }
        if f.order() == 0 || g.order() == 0 {
            return Err(Error::ZeroOrder { n: f.order(), m: g.order() });
        }
        Ok(ChaosPair { f, g })
    }

    pub fn f(&self) -> &SymTensor<S> {
        &self.f
    }

    pub fn g(&self) -> &SymTensor<S> {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.f.order()
    }

    pub fn m(&self) -> usize {
        self.g.order()
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    /// Largest term index, `(n-1) ∧ (m-1)`.
    pub fn max_term(&self) -> usize {
        (self.n() - 1).min(self.m() - 1)
    }

    /// `‖f ⊗_r g‖²` for `r = 0..=n∧m`.
    pub fn contraction_norms(&self) -> Vec<S> {
        (0..=self.n().min(self.m()))
            .map(|r| self.f.contract(&self.g, r).expect("validated pair").norm_sq())
            .collect()
    }

    /// `T_k`, computed from the symmetrized slice minors.
    pub fn term_t(&self, k: usize) -> Result<S> {
        let sf = self.f.slices()?;
        let sg = self.g.slices()?;
        self.term_t_from_slices(k, &sf, &sg)
    }

    fn term_t_from_slices(&self, k: usize, sf: &[SymTensor<S>], sg: &[SymTensor<S>]) -> Result<S> {
        let max = self.max_term();
        if k > max {
            return Err(Error::TermOutOfRange { k, max });
        }
        let (n, m) = (self.n(), self.m());
        let d = self.dim();
        // ½ Σ_{i,l} over an antisymmetric minor is the sum over i < l.
        let mut sum = S::zero();
        for i in 0..d {
            for l in i + 1..d {
                let a = sf[i].contract(&sg[l], k)?;
                let b = sf[l].contract(&sg[i], k)?;
                let diff: BiSymTensor<S> = a.sub(&b)?;
                sum += diff.symmetrize().norm_sq();
            }
        }
        let kf = S::from_u64(factorial(k));
        let cm = S::from_u64(binomial(m - 1, k));
        let cn = S::from_u64(binomial(n - 1, k));
        let weight = kf.clone() * kf * cm.clone() * cm * cn.clone() * cn * S::from_u64(factorial(m + n - 2 - 2 * k));
        Ok(weight * sum)
    }

    /// `T_0, …, T_{(n-1)∧(m-1)}`.
    pub fn t_terms(&self) -> Vec<S> {
        let sf = self.f.slices().expect("order >= 1");
        let sg = self.g.slices().expect("order >= 1");
        (0..=self.max_term())
            .map(|k| self.term_t_from_slices(k, &sf, &sg).expect("k in range"))
            .collect()
    }

    /// `E det Λ = Σ_k T_k`.
    pub fn edet_closed(&self) -> S {
        sum(self.t_terms())
    }

    /// `R_{n,m} = Σ_{k≥1} T_k`.
    pub fn r_term(&self) -> S {
        sum(self.t_terms().into_iter().skip(1))
    }

    /// Contraction-norm form of `T_0`:
    /// `Σ_r mn m! n! C(n-1,r) C(m-1,r) [‖f⊗_r g‖² - ‖f⊗_{r+1} g‖²]`.
    pub fn t0_contraction(&self) -> S {
        self.t0_from_norms(&self.contraction_norms())
    }

    fn t0_from_norms(&self, norms: &[S]) -> S {
        let (n, m) = (self.n(), self.m());
        let lead = S::from_u64(n as u64 * m as u64 * factorial(n) * factorial(m));
        let mut acc = S::zero();
        for r in 0..=self.max_term() {
            let c = S::from_u64(binomial(n - 1, r) * binomial(m - 1, r));
            acc += c * (norms[r].clone() - norms[r + 1].clone());
        }
        lead * acc
    }

    /// `t0_contraction + R_{n,m}`.
    pub fn edet_regrouped(&self) -> S {
        self.t0_contraction() + self.r_term()
    }

    /// `Σ_r C(n-1,r) C(m-1,r) [‖f⊗_r g‖² - ‖f⊗_{r+1} g‖²]`, which is
    /// non-negative for every pair.
    pub fn contraction_norm_sum(&self) -> S {
        let (n, m) = (self.n(), self.m());
        let norms = self.contraction_norms();
        let mut acc = S::zero();
        for r in 0..=self.max_term() {
            let c = S::from_u64(binomial(n - 1, r) * binomial(m - 1, r));
            acc += c * (norms[r].clone() - norms[r + 1].clone());
        }
        acc
    }

    pub fn covariance(&self) -> Covariance<S> {
        let (n, m) = (self.n(), self.m());
        let c11 = S::from_u64(factorial(n)) * self.f.norm_sq();
        let c22 = S::from_u64(factorial(m)) * self.g.norm_sq();
        let c12 = if n == m { S::from_u64(factorial(n)) * self.f.inner(&self.g).expect("same space") } else { S::zero() };
        let det = c11.clone() * c22.clone() - c12.clone() * c12.clone();
        Covariance { matrix: [[c11, c12.clone()], [c12, c22]], det }
    }

    pub fn det_c(&self) -> S {
        self.covariance().det
    }

    fn require_same_chaos(&self) -> Result<usize> {
        if self.n() != self.m() {
            return Err(Error::NotSameChaos { n: self.n(), m: self.m() });
        }
        Ok(self.m())
    }

    /// `m² det C + correction + R_m` for `n = m`.
    pub fn same_chaos(&self) -> Result<SameChaosDecomposition<S>> {
        let m = self.require_same_chaos()?;
        let norms = self.contraction_norms();
        let mm = S::from_u64(m as u64 * m as u64);
        let scaled_det_c = mm.clone() * self.det_c();
        let lead = S::from_u64(m as u64 * factorial(m));
        let mut corr = S::zero();
        for r in 1..=(m - 1) / 2 {
            let hi = binomial(m - 1, r);
            let lo = binomial(m - 1, r - 1);
            let c = S::from_i64((hi * hi) as i64 - (lo * lo) as i64);
            corr += c * (norms[r].clone() - norms[m - r].clone());
        }
        let correction = lead.clone() * lead * corr;
        let remainder = self.r_term();
        let total = scaled_det_c.clone() + correction.clone() + remainder.clone();
        Ok(SameChaosDecomposition { scaled_det_c, correction, remainder, total })
    }

    /// Closed form of the last term for `n = m`:
    /// `m² m!² [‖f ⊗_{m-1} g‖² - ⟨f ⊗_1 g, g ⊗_1 f⟩]`.
    pub fn last_term_closed_form(&self) -> Result<S> {
        let m = self.require_same_chaos()?;
        let top = self.f.contract(&self.g, m - 1)?.norm_sq();
        let cross = self.f.contract(&self.g, 1)?.inner(&self.g.contract(&self.f, 1)?)?;
        let mf = factorial(m);
        Ok(S::from_u64(m as u64 * m as u64 * mf * mf) * (top - cross))
    }

    /// `E det Λ` for `(I_n(f), I_1(g))`: `n n! [‖f ⊗ g‖² - ‖f ⊗_1 g‖²]`.
    pub fn order_one_criterion(&self) -> Result<S> {
        if self.m() != 1 {
            return Err(Error::NotOrderOne { m: self.m() });
        }
        let n = self.n();
        let norms = self.contraction_norms();
        Ok(S::from_u64(n as u64 * factorial(n)) * (norms[0].clone() - norms[1].clone()))
    }
}

fn sum<S: Scalar, I: IntoIterator<Item = S>>(it: I) -> S {
    let mut acc = S::zero();
    for x in it {
        acc += x;
    }
    acc
}

impl ChaosPair<f64> {
    /// `det Λ` at one sample by the Gram and the sum-of-squares routes.
    pub fn det_lambda_at(&self, s: &GaussianSample) -> Result<DetLambda> {
        DetLambdaSampler::new(self)?.det_lambda_at(s)
    }

    /// Same-chaos density verdict for `n = m <= 4`.
    ///
    /// `det C` is compared with `n!²‖f‖²‖g‖²` and `E det Λ` with
    /// `n n!‖f‖² · m m!‖g‖²`, both at relative tolerance `tol`. Both vanish
    /// exactly for proportional components; if only one does the verdict is
    /// [`DensityVerdict::Undecided`].
    pub fn density_verdict(&self, tol: f64) -> Result<DensityVerdict> {
        let m = self.require_same_chaos()?;
        if m > 4 {
            return Err(Error::OutsideDensityScope { m });
        }
        let (nf2, ng2) = (self.f.norm_sq(), self.g.norm_sq());
        let mf = factorial(m) as f64;
        let c_scale = mf * mf * nf2 * ng2;
        let e_scale = (m as f64 * mf) * (m as f64 * mf) * nf2 * ng2;
        let proportional = self.det_c() <= tol * c_scale;
        let degenerate = self.edet_closed() <= tol * e_scale;
        Ok(match (proportional, degenerate) {
            (true, true) => DensityVerdict::NoDensityProportional,
            (false, false) => DensityVerdict::HasDensity,
            _ => DensityVerdict::Undecided,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityVerdict {
    NoDensityProportional,
    HasDensity,
    Undecided,
}

impl DensityVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            DensityVerdict::NoDensityProportional => "NoDensity_Proportional",
            DensityVerdict::HasDensity => "HasDensity",
            DensityVerdict::Undecided => "Undecided",
        }
    }
}

/// Quantities that need the exact (guarded) routes.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactRoutes {
    pub t_terms: Vec<f64>,
    pub r_term: f64,
    pub edet_closed: f64,
    pub edet_regrouped: f64,
    pub edet_oracle: f64,
    pub t0_contraction: f64,
    pub same_chaos: Option<SameChaosDecomposition<f64>>,
}

/// Every determinant quantity for one pair.
#[derive(Clone, Debug, PartialEq)]
pub struct MalliavinReport {
    pub dim: usize,
    pub n: usize,
    pub m: usize,
    pub det_c: f64,
    /// `None` when the pair exceeds the guard.
    pub exact: Option<ExactRoutes>,
    pub edet_mc: Option<McEstimate>,
    /// Present only for `n = m <= 4` with exact routes available.
    pub density_verdict: Option<DensityVerdict>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReportOptions {
    pub guard: Guard,
    pub tol: f64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { guard: Guard::DEFAULT, tol: DEFAULT_TOL }
    }
}

/// Relative tolerance of the proportionality test.
pub const DEFAULT_TOL: f64 = 1e-10;

impl MalliavinReport {
    /// Builds the report; `edet_mc` is computed by the caller so it can use
    /// any executor.
    pub fn compute(pair: &ChaosPair<f64>, opts: &ReportOptions, edet_mc: Option<McEstimate>) -> Self {
        let (dim, n, m) = (pair.dim(), pair.n(), pair.m());
        let mut warnings = Vec::new();
        let exact = match verify::oracle_edet(pair, opts.guard) {
            Ok(edet_oracle) => {
                let t_terms = pair.t_terms();
                let edet_closed = sum(t_terms.iter().copied());
                let r_term = sum(t_terms.iter().skip(1).copied());
                let t0_contraction = pair.t0_contraction();
                Some(ExactRoutes {
                    edet_regrouped: t0_contraction + r_term,
                    t_terms,
                    r_term,
                    edet_closed,
                    edet_oracle,
                    t0_contraction,
                    same_chaos: pair.same_chaos().ok(),
                })
            }
            Err(e) => {
                warnings.push(alloc::format!("exact routes skipped: {e}"));
                None
            }
        };
        let density_verdict = if exact.is_some() && n == m && m <= 4 {
            pair.density_verdict(opts.tol).ok()
        } else {
            None
        };
        MalliavinReport { dim, n, m, det_c: pair.det_c(), exact, edet_mc, density_verdict, warnings }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::CoeffDistribution;
    use crate::{rng, Rational};

    fn pair(f: SymTensor<f64>, g: SymTensor<f64>) -> ChaosPair<f64> {
        ChaosPair::new(f, g).unwrap()
    }

    fn e(d: usize, i: usize, k: usize) -> SymTensor<f64> {
        SymTensor::basis_power(d, i, k).unwrap()
    }

    fn unit_pair(seed: u64, d: usize, n: usize, m: usize) -> ChaosPair<f64> {
        let mut r = rng::seeded(seed);
        pair(SymTensor::random_unit_with(&mut r, d, n).unwrap(), SymTensor::random_unit_with(&mut r, d, m).unwrap())
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
    }

    #[test]
    fn pair_validation() {
        assert_eq!(ChaosPair::new(e(2, 0, 0), e(2, 0, 1)), Err(Error::ZeroOrder { n: 0, m: 1 }));
        assert!(matches!(ChaosPair::new(e(2, 0, 1), e(3, 0, 1)), Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn slices_of_basis_power() {
        let s = malliavin_slices(&e(3, 0, 3)).unwrap();
        assert_eq!(s[0], e(3, 0, 2).scale(3.0));
        assert!(s[1].is_zero() && s[2].is_zero());
        assert_eq!(malliavin_slices(&e(3, 0, 0)), Err(Error::SliceOfScalar));
    }

    #[test]
    fn parallel_derivatives_give_zero() {
        let p = pair(e(2, 0, 2), e(2, 0, 3));
        let mut rng = rng::seeded(4);
        for _ in 0..20 {
            let s = GaussianSample::draw(&mut rng, 2);
            let dl = p.det_lambda_at(&s).unwrap();
            assert_eq!(dl.sum_of_squares, 0.0);
            assert!(dl.gram.abs() < 1e-28);
        }
        assert_eq!(p.edet_closed(), 0.0);
        assert_eq!(p.det_c(), 12.0);
    }

    #[test]
    fn one_dimensional_determinant_vanishes() {
        let mut rng = rng::seeded(8);
        let f = SymTensor::random_with(&mut rng, 1, 3, CoeffDistribution::StandardNormal).unwrap();
        let g = SymTensor::random_with(&mut rng, 1, 2, CoeffDistribution::StandardNormal).unwrap();
        let p = pair(f, g);
        for _ in 0..10 {
            let dl = p.det_lambda_at(&GaussianSample::draw(&mut rng, 1)).unwrap();
            assert_eq!(dl.sum_of_squares, 0.0);
            assert!(dl.gram.abs() < 1e-12);
        }
    }

    #[test]
    fn gram_and_sum_of_squares_agree() {
        let p = unit_pair(5, 3, 2, 2);
        let mut rng = rng::seeded(6);
        for _ in 0..50 {
            let dl = p.det_lambda_at(&GaussianSample::draw(&mut rng, 3)).unwrap();
            assert!(rel(dl.gram, dl.sum_of_squares) <= 1e-9, "{dl:?}");
        }
    }

    #[test]
    fn norm_of_derivative_is_sum_of_slice_squares() {
        let p = unit_pair(9, 3, 3, 2);
        let s = GaussianSample::sample(1, 3);
        let mut sampler = DetLambdaSampler::new(&p).unwrap();
        let (sf, _) = sampler.slice_values(&s).unwrap();
        let direct: f64 = p
            .f()
            .slices()
            .unwrap()
            .iter()
            .map(|t| crate::chaos::eval_integral(t, &s).unwrap().powi(2))
            .sum();
        let via: f64 = sf.iter().map(|x| x * x).sum();
        assert!(rel(direct, via) < 1e-14);
    }

    #[test]
    fn expected_norm_of_derivative() {
        // E‖DF‖² = Σ_i (n-1)! ‖s_{i,f}‖² = n·n!·‖f‖²
        for n in 1..=4 {
            let f = SymTensor::<Rational>::random_int(n as u64, 3, n, -4, 4).unwrap();
            let sum: Rational = f
                .slices()
                .unwrap()
                .iter()
                .fold(Rational::zero(), |acc, s| {
                    let x = crate::ChaosExpansion::integral(s.clone());
                    acc + x.mean_of_product(&x).unwrap()
                });
            assert_eq!(sum, Rational::from_u64(n as u64 * factorial(n)) * f.norm_sq());
        }
    }

    #[test]
    fn gaussian_pair_t0() {
        let p = unit_pair(3, 4, 1, 1);
        let (f2, g2, fg) = (p.f().norm_sq(), p.g().norm_sq(), p.f().inner(p.g()).unwrap());
        let expected = f2 * g2 - fg * fg;
        assert!(rel(p.t0_contraction(), expected) < 1e-14);
        assert!(rel(p.term_t(0).unwrap(), expected) < 1e-12);
        assert_eq!(p.r_term(), 0.0);
    }

    #[test]
    fn orthogonal_elementary_pair() {
        // F = H_2(x), G = H_2(y): DF = 2x e_1, DG = 2y e_2, det Λ = 16 x² y².
        let p = pair(e(2, 0, 2), e(2, 1, 2));
        assert_eq!(p.contraction_norms(), [1.0, 0.0, 0.0]);
        assert_eq!(p.t0_contraction(), 16.0);
        assert_eq!(p.term_t(0).unwrap(), 16.0);
        assert_eq!(p.term_t(1).unwrap(), 0.0);
        assert_eq!(p.edet_closed(), 16.0);
        assert_eq!(p.det_c(), 4.0);
        assert_eq!(p.density_verdict(DEFAULT_TOL).unwrap(), DensityVerdict::HasDensity);
    }

    #[test]
    fn t0_forms_agree() {
        for (seed, d, n, m) in [(1, 3, 2, 3), (2, 2, 4, 2), (3, 3, 3, 3), (4, 2, 1, 4)] {
            let p = unit_pair(seed, d, n, m);
            assert!(rel(p.t0_contraction(), p.term_t(0).unwrap()) <= 1e-9, "{n} {m}");
        }
    }

    #[test]
    fn proportional_pair_has_zero_terms() {
        let mut rng = rng::seeded(12);
        let f = SymTensor::random_unit_with(&mut rng, 3, 3).unwrap();
        let p = pair(f.clone(), f.scale(-1.7));
        for t in p.t_terms() {
            assert!(t.abs() < 1e-25, "{t}");
        }
        assert!(p.det_c().abs() < 1e-12);
        assert_eq!(p.density_verdict(DEFAULT_TOL).unwrap(), DensityVerdict::NoDensityProportional);
        let p3 = pair(f.clone(), f.scale(3.0));
        assert_eq!(p3.density_verdict(DEFAULT_TOL).unwrap(), DensityVerdict::NoDensityProportional);
    }

    #[test]
    fn term_index_out_of_range() {
        let p = unit_pair(1, 2, 2, 3);
        assert_eq!(p.term_t(2), Err(Error::TermOutOfRange { k: 2, max: 1 }));
    }

    #[test]
    fn edet_routes_exact_in_rationals() {
        for (seed, d, n, m) in [(1u64, 2, 2, 2), (2, 3, 2, 3), (3, 2, 3, 3), (4, 3, 1, 3), (5, 2, 4, 4)] {
            let f = SymTensor::<Rational>::random_int(seed, d, n, -3, 3).unwrap();
            let g = SymTensor::<Rational>::random_int(seed + 100, d, m, -3, 3).unwrap();
            let p = ChaosPair::new(f, g).unwrap();
            let closed = p.edet_closed();
            assert_eq!(closed, p.edet_regrouped());
            assert_eq!(closed, verify::oracle_edet(&p, Guard::DEFAULT).unwrap());
            assert_eq!(p.t0_contraction(), p.term_t(0).unwrap());
            if n == m {
                assert_eq!(p.same_chaos().unwrap().total, closed);
                assert_eq!(p.last_term_closed_form().unwrap(), p.term_t(m - 1).unwrap());
            }
        }
    }

    #[test]
    fn order_two_same_chaos() {
        let p = unit_pair(21, 3, 2, 2);
        let dec = p.same_chaos().unwrap();
        assert_eq!(dec.correction, 0.0);
        let f1g = p.f().contract(p.g(), 1).unwrap();
        let r2 = 32.0 * (f1g.norm_sq() - f1g.symmetrize().norm_sq());
        assert!(rel(dec.remainder, r2) <= 1e-10);
        assert!(rel(dec.total, 4.0 * p.det_c() + r2) <= 1e-10);
    }

    #[test]
    fn order_three_correction() {
        let p = unit_pair(22, 3, 3, 3);
        let a = p.contraction_norms();
        let dec = p.same_chaos().unwrap();
        assert!(rel(dec.correction, 9.0 * 36.0 * 3.0 * (a[1] - a[2])) < 1e-12);
        assert!(rel(dec.total, p.edet_closed()) < 1e-8);
    }

    #[test]
    fn order_five_correction() {
        // (mm!)² [15 (a1 - a4) + 20 (a2 - a3)]
        let p = unit_pair(23, 2, 5, 5);
        let a = p.contraction_norms();
        let dec = p.same_chaos().unwrap();
        let lead = 25.0 * 120.0 * 120.0;
        assert!(rel(dec.correction, lead * (15.0 * (a[1] - a[4]) + 20.0 * (a[2] - a[3]))) < 1e-10);
        assert!(rel(dec.total, p.edet_closed()) < 1e-8);
        assert_eq!(p.density_verdict(DEFAULT_TOL), Err(Error::OutsideDensityScope { m: 5 }));
    }

    #[test]
    fn same_chaos_requires_equal_orders() {
        let p = unit_pair(1, 2, 2, 3);
        assert_eq!(p.same_chaos(), Err(Error::NotSameChaos { n: 2, m: 3 }));
        assert_eq!(p.density_verdict(1e-10), Err(Error::NotSameChaos { n: 2, m: 3 }));
    }

    #[test]
    fn last_term_closed_form() {
        for m in 2..=4 {
            let p = unit_pair(30 + m as u64, 3, m, m);
            assert!(rel(p.term_t(m - 1).unwrap(), p.last_term_closed_form().unwrap()) <= 1e-9);
        }
    }

    #[test]
    fn order_one_criterion_cases() {
        assert_eq!(pair(e(2, 0, 2), e(2, 1, 1)).order_one_criterion().unwrap(), 4.0);
        assert_eq!(pair(e(2, 0, 3), e(2, 0, 1)).order_one_criterion().unwrap(), 0.0);
        let p = unit_pair(40, 3, 3, 1);
        assert!(rel(p.order_one_criterion().unwrap(), p.edet_closed()) < 1e-12);
        assert_eq!(pair(e(2, 0, 2), e(2, 0, 2)).order_one_criterion(), Err(Error::NotOrderOne { m: 2 }));
    }

    #[test]
    fn density_for_tilted_power() {
        let s = 1.0 / libm::sqrt(2.0);
        let g = SymTensor::tensor_power(&[s, s], 4).unwrap();
        let p = pair(e(2, 0, 4), g);
        assert!(p.det_c() > 0.0);
        assert_eq!(p.density_verdict(DEFAULT_TOL).unwrap(), DensityVerdict::HasDensity);
    }

    #[test]
    fn report_degrades_outside_guard() {
        let p = unit_pair(1, 6, 2, 2);
        let r = MalliavinReport::compute(&p, &ReportOptions::default(), None);
        assert!(r.exact.is_none() && r.density_verdict.is_none());
        assert_eq!(r.warnings.len(), 1);
        let p = unit_pair(1, 2, 2, 3);
        let r = MalliavinReport::compute(&p, &ReportOptions::default(), None);
        let ex = r.exact.unwrap();
        assert_eq!(ex.t_terms.len(), 2);
        assert!(r.density_verdict.is_none());
        assert!(rel(ex.edet_closed, ex.edet_oracle) < 1e-8);
    }
}
