//! Executable identity checks.
//!
//! Each checker draws its inputs from a [`Case`] seed, evaluates both sides
//! of one identity by independent code paths and returns a [`CheckResult`].
//! Failures are recorded, never raised.

use alloc::string::String;
use alloc::vec::Vec;

use crate::malliavin::DEFAULT_TOL;
use crate::montecarlo::DetLambdaSampler;
use crate::multi_index::{binomial, factorial};
use crate::rng::{self, Rng};
use crate::{ChaosExpansion, ChaosPair, DensityVerdict, Error, GaussianSample, Guard, Rational, Result, Scalar, SymTensor};

/// Coefficientwise tensor identities on unit-normalized inputs.
pub const TOL_COEFF: f64 = 1e-12;
/// Scalar contraction identities.
pub const TOL_SCALAR: f64 = 1e-10;
/// Pointwise identities at Gaussian samples.
pub const TOL_POINTWISE: f64 = 1e-9;
/// Agreement of expectation routes.
pub const TOL_EXPECTATION: f64 = 1e-8;
/// Regrouped sums of the same terms in floating point.
pub const TOL_REGROUP: f64 = 1e-12;

/// `E det Λ` computed in chaos algebra only: `‖DF‖²`, `‖DG‖²` and
/// `⟨DF, DG⟩` are expanded with the product formula from the slice
/// integrals, and `E[AB] - E[Q²]` is read off by the isometry.
pub fn oracle_edet<S: Scalar>(pair: &ChaosPair<S>, guard: Guard) -> Result<S> {
    let (d, n, m) = (pair.dim(), pair.n(), pair.m());
    if !guard.admits(d, n, m) {
        return Err(Error::GuardExceeded { dim: d, n, m, max_dim: guard.max_dim, max_order: guard.max_order });
    }
    let xs: Vec<ChaosExpansion<S>> = pair.f().slices()?.into_iter().map(ChaosExpansion::integral).collect();
    let ys: Vec<ChaosExpansion<S>> = pair.g().slices()?.into_iter().map(ChaosExpansion::integral).collect();
    let mut a = ChaosExpansion::zero(d);
    let mut b = ChaosExpansion::zero(d);
    let mut q = ChaosExpansion::zero(d);
    for (x, y) in xs.iter().zip(&ys) {
        a = a.add(&x.product(x)?)?;
        b = b.add(&y.product(y)?)?;
        q = q.add(&x.product(y)?)?;
    }
    Ok(a.mean_of_product(&b)? - q.mean_of_product(&q)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// `rel_err <= tol`, or `abs_err <= tol` when `rhs` is exactly 0.
    Relative,
    Absolute,
    /// `lhs >= rhs - tol`
    AtLeast,
    /// Exact equality, used by the rational-arithmetic checks.
    Exact,
}

/// Grid point of a suite: basis dimension, chaos orders and seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Case {
    pub dim: usize,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
}

impl Case {
    pub fn new(dim: usize, n: usize, m: usize, seed: u64) -> Self {
        Case { dim, n, m, seed }
    }

    /// Stream for this case; distinct grid points with the same seed draw
    /// distinct tensors.
    pub fn rng(&self) -> Rng {
        let key = ((self.dim as u64) << 16) | ((self.n as u64) << 8) | self.m as u64;
        rng::substream(self.seed, key)
    }

    /// Unit-norm random pair.
    pub fn pair(&self) -> ChaosPair<f64> {
        let mut r = self.rng();
        let f = SymTensor::random_unit_with(&mut r, self.dim, self.n).expect("valid case");
        let g = SymTensor::random_unit_with(&mut r, self.dim, self.m).expect("valid case");
        ChaosPair::new(f, g).expect("valid case")
    }

    /// Integer-coefficient pair in exact arithmetic.
    pub fn exact_pair(&self) -> ChaosPair<Rational> {
        let mut r = self.rng();
        let f = SymTensor::random_int_with(&mut r, self.dim, self.n, -3, 3).expect("valid case");
        let g = SymTensor::random_int_with(&mut r, self.dim, self.m, -3, 3).expect("valid case");
        ChaosPair::new(f, g).expect("valid case")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub check_id: &'static str,
    pub case: Case,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tol: f64,
    pub comparison: Comparison,
    pub passed: bool,
    /// Extra condition folded into `passed`, e.g. an expected verdict.
    pub note: Option<String>,
}

impl CheckResult {
    pub fn compare(check_id: &'static str, case: Case, lhs: f64, rhs: f64, tol: f64, comparison: Comparison) -> Self {
        let abs_err = (lhs - rhs).abs();
        let scale = lhs.abs().max(rhs.abs());
        let rel_err = if scale > 0.0 { abs_err / scale } else { 0.0 };
        let passed = match comparison {
            Comparison::Relative if rhs == 0.0 => abs_err <= tol,
            Comparison::Relative => rel_err <= tol,
            Comparison::Absolute => abs_err <= tol,
            Comparison::AtLeast => lhs >= rhs - tol,
            Comparison::Exact => lhs == rhs,
        };
        // NaN never passes.
        let passed = passed && !lhs.is_nan() && !rhs.is_nan();
        CheckResult { check_id, case, lhs, rhs, abs_err, rel_err, tol, comparison, passed, note: None }
    }

    fn exact(check_id: &'static str, case: Case, lhs: &Rational, rhs: &Rational) -> Self {
        let mut r = CheckResult::compare(check_id, case, lhs.to_f64(), rhs.to_f64(), 0.0, Comparison::Exact);
        r.abs_err = (lhs.clone() - rhs.clone()).abs().to_f64();
        r.passed = lhs == rhs;
        r
    }

    fn require(mut self, ok: bool, note: String) -> Self {
        self.passed &= ok;
        self.note = Some(note);
        self
    }
}

fn worst(results: impl IntoIterator<Item = CheckResult>) -> CheckResult {
    let mut it = results.into_iter();
    let mut w = it.next().expect("at least one comparison");
    for r in it {
        let worse = (!r.passed && w.passed) || (r.passed == w.passed && r.rel_err.max(r.abs_err) > w.rel_err.max(w.abs_err));
        if worse {
            w = r;
        }
    }
    w
}

/// `⟨f1 ⊗_{n-r} f3, f2 ⊗_{m-r} f4⟩ = ⟨f1 ⊗_r f2, f3 ⊗_r f4⟩` for all
/// `r <= (n-1)∧(m-1)`; reports the worst `r`.
pub fn check_contraction_duality(case: Case) -> CheckResult {
    let Case { dim, n, m, .. } = case;
    let mut r = case.rng();
    let f1 = SymTensor::random_unit_with(&mut r, dim, n).unwrap();
    let f3 = SymTensor::random_unit_with(&mut r, dim, n).unwrap();
    let f2 = SymTensor::random_unit_with(&mut r, dim, m).unwrap();
    let f4 = SymTensor::random_unit_with(&mut r, dim, m).unwrap();
    worst((0..=(n - 1).min(m - 1)).map(|k| {
        let lhs = f1.contract(&f3, n - k).unwrap().inner(&f2.contract(&f4, m - k).unwrap()).unwrap();
        let rhs = f1.contract(&f2, k).unwrap().inner(&f3.contract(&f4, k).unwrap()).unwrap();
        CheckResult::compare("contraction_duality", case, lhs, rhs, TOL_SCALAR, Comparison::Relative)
    }))
}

/// `⟨f1 ⊗̃ f2, f3 ⊗̃ f4⟩ = m!n!/(m+n)! Σ_r C(n,r) C(m,r) ⟨f1 ⊗_r f3, f4 ⊗_r f2⟩`
/// with `f1, f4` of order `n` and `f2, f3` of order `m`.
pub fn check_symmetrized_inner(case: Case) -> CheckResult {
    let Case { dim, n, m, .. } = case;
    let mut r = case.rng();
    let f1 = SymTensor::random_unit_with(&mut r, dim, n).unwrap();
    let f4 = SymTensor::random_unit_with(&mut r, dim, n).unwrap();
    let f2 = SymTensor::random_unit_with(&mut r, dim, m).unwrap();
    let f3 = SymTensor::random_unit_with(&mut r, dim, m).unwrap();
    let lhs = f1.sym_product(&f2).unwrap().inner(&f3.sym_product(&f4).unwrap()).unwrap();
    let mut sum = 0.0;
    for k in 0..=n.min(m) {
        let c = (binomial(n, k) * binomial(m, k)) as f64;
        sum += c * f1.contract(&f3, k).unwrap().inner(&f4.contract(&f2, k).unwrap()).unwrap();
    }
    let rhs = factorial(n) as f64 * factorial(m) as f64 / factorial(n + m) as f64 * sum;
    CheckResult::compare("symmetrized_inner", case, lhs, rhs, TOL_SCALAR, Comparison::Relative)
}

/// `f ⊗_{r+1} g = (1/nm) Σ_i s_{i,f} ⊗_r s_{i,g}`, coefficientwise; `lhs`
/// and `rhs` carry the worst coefficient pair.
pub fn check_slice_contraction(case: Case) -> CheckResult {
    let p = case.pair();
    let (n, m) = (p.n(), p.m());
    let sf = p.f().slices().unwrap();
    let sg = p.g().slices().unwrap();
    worst((0..n.min(m)).map(|k| {
        let direct = p.f().contract(p.g(), k + 1).unwrap();
        let mut acc = sf[0].contract(&sg[0], k).unwrap();
        for (a, b) in sf.iter().zip(&sg).skip(1) {
            acc = acc.add(&a.contract(b, k).unwrap()).unwrap();
        }
        let via = acc.scale(1.0 / (n * m) as f64);
        let (mut lhs, mut rhs, mut err) = (0.0, 0.0, -1.0);
        for (x, y) in via.coeffs().iter().zip(direct.coeffs()) {
            if (x - y).abs() > err {
                err = (x - y).abs();
                lhs = *x;
                rhs = *y;
            }
        }
        CheckResult::compare("slice_contraction", case, lhs, rhs, TOL_COEFF, Comparison::Absolute)
    }))
}

/// Gram determinant against the half-sum of squared minors, at
/// `samples` Gaussian draws.
pub fn check_sum_of_squares(case: Case, samples: usize) -> CheckResult {
    let p = case.pair();
    let mut sampler = DetLambdaSampler::new(&p).unwrap();
    let mut r = rng::substream(case.seed, u64::MAX);
    worst((0..samples).map(|_| {
        let s = GaussianSample::draw(&mut r, case.dim);
        let dl = sampler.det_lambda_at(&s).unwrap();
        CheckResult::compare("sum_of_squares", case, dl.gram, dl.sum_of_squares, TOL_POINTWISE, Comparison::Relative)
    }))
}

/// `Σ_r C(n-1,r) C(m-1,r) [‖f⊗_r g‖² - ‖f⊗_{r+1} g‖²] >= 0`
pub fn check_contraction_norm_sum(case: Case) -> CheckResult {
    let p = case.pair();
    CheckResult::compare("contraction_norm_sum", case, p.contraction_norm_sum(), 0.0, TOL_COEFF, Comparison::AtLeast)
}

/// Every `T_k >= 0`; reports the smallest.
pub fn check_terms_nonnegative(case: Case) -> CheckResult {
    let p = case.pair();
    let min = p.t_terms().into_iter().fold(f64::INFINITY, f64::min);
    CheckResult::compare("terms_nonnegative", case, min, 0.0, TOL_COEFF, Comparison::AtLeast)
}

/// Contraction-norm form of `T_0` against its minor form.
pub fn check_t0_forms(case: Case) -> CheckResult {
    let p = case.pair();
    CheckResult::compare("t0_forms", case, p.t0_contraction(), p.term_t(0).unwrap(), TOL_POINTWISE, Comparison::Relative)
}

/// `T_0(contraction form) + R_{n,m}` against `Σ_k T_k` in floating point.
pub fn check_edet_regrouping(case: Case) -> CheckResult {
    let p = case.pair();
    CheckResult::compare("edet_regrouping", case, p.edet_regrouped(), p.edet_closed(), TOL_REGROUP, Comparison::Relative)
}

/// `T_0(contraction form) + R_{n,m}` against the chaos-algebra oracle.
pub fn check_edet_oracle(case: Case) -> CheckResult {
    let p = case.pair();
    let oracle = oracle_edet(&p, Guard::DEFAULT).unwrap_or(f64::NAN);
    CheckResult::compare("edet_oracle", case, p.edet_regrouped(), oracle, TOL_EXPECTATION, Comparison::Relative)
}

/// The closed route, the regrouped route and the oracle coincide exactly on
/// an integer-coefficient pair.
pub fn check_edet_exact(case: Case) -> CheckResult {
    let p = case.exact_pair();
    let closed = p.edet_closed();
    let regrouped = p.edet_regrouped();
    let oracle = match oracle_edet(&p, Guard::DEFAULT) {
        Ok(v) => v,
        Err(_) => return CheckResult::compare("edet_exact", case, f64::NAN, f64::NAN, 0.0, Comparison::Exact),
    };
    let r = CheckResult::exact("edet_exact", case, &closed, &oracle);
    let ok = closed == regrouped;
    r.require(ok, alloc::format!("closed == regrouped: {ok}"))
}

/// Same-chaos decomposition total against `Σ_k T_k` (`n = m` only).
pub fn check_same_chaos(case: Case) -> CheckResult {
    let p = case.pair();
    let dec = p.same_chaos().unwrap();
    CheckResult::compare("same_chaos", case, dec.total, p.edet_closed(), TOL_EXPECTATION, Comparison::Relative)
}

/// `T_{m-1}` against its closed form (`n = m` only).
pub fn check_last_term(case: Case) -> CheckResult {
    let p = case.pair();
    let m = p.m();
    CheckResult::compare(
        "last_term",
        case,
        p.term_t(m - 1).unwrap(),
        p.last_term_closed_form().unwrap(),
        TOL_POINTWISE,
        Comparison::Relative,
    )
}

/// For `n = m = 2`: `R_2 = 32 (‖f ⊗_1 g‖² - ‖f ⊗̃_1 g‖²)`.
pub fn check_order_two_remainder(case: Case) -> CheckResult {
    let p = case.pair();
    let c = p.f().contract(p.g(), 1).unwrap();
    let rhs = 32.0 * (c.norm_sq() - c.symmetrize().norm_sq());
    CheckResult::compare("order_two_remainder", case, p.r_term(), rhs, TOL_SCALAR, Comparison::Relative)
}

/// For `n = m = 2`: the oracle equals `4 det C + 32 (‖f ⊗_1 g‖² - ‖f ⊗̃_1 g‖²)`.
pub fn check_order_two_oracle(case: Case) -> CheckResult {
    let p = case.pair();
    let c = p.f().contract(p.g(), 1).unwrap();
    let rhs = 4.0 * p.det_c() + 32.0 * (c.norm_sq() - c.symmetrize().norm_sq());
    let oracle = oracle_edet(&p, Guard::DEFAULT).unwrap_or(f64::NAN);
    CheckResult::compare("order_two_oracle", case, oracle, rhs, TOL_EXPECTATION, Comparison::Relative)
}

/// `(e_1^{⊗n}, e_1^{⊗m})`: `E det Λ = 0` although components differ.
pub fn check_mixed_edet(dim: usize, n: usize, m: usize) -> CheckResult {
    let case = Case::new(dim, n, m, 0);
    let p = elementary_pair(dim, n, m);
    CheckResult::compare("mixed_edet", case, p.edet_closed(), 0.0, TOL_COEFF, Comparison::Absolute)
}

/// `(e_1^{⊗n}, e_1^{⊗m})`, `n != m`: `det C = n! m!`.
pub fn check_mixed_covariance(dim: usize, n: usize, m: usize) -> CheckResult {
    let case = Case::new(dim, n, m, 0);
    let p = elementary_pair(dim, n, m);
    let expected = (factorial(n) * factorial(m)) as f64;
    CheckResult::compare("mixed_covariance", case, p.det_c(), expected, 0.0, Comparison::Exact)
}

fn elementary_pair(dim: usize, n: usize, m: usize) -> ChaosPair<f64> {
    ChaosPair::new(SymTensor::basis_power(dim, 0, n).unwrap(), SymTensor::basis_power(dim, 0, m).unwrap()).unwrap()
}

/// Density dichotomy for `n = m <= 4`. With `proportional` the second
/// component is a random multiple of the first and the verdict must be
/// `NoDensity_Proportional` with `E det Λ <= TOL_COEFF`; otherwise the pair
/// is generic and the verdict must be `HasDensity` with `det C > 0` and
/// `E det Λ > 0`.
pub fn check_density_dichotomy(case: Case, proportional: bool) -> CheckResult {
    let p = if proportional {
        let mut r = case.rng();
        let f = SymTensor::random_unit_with(&mut r, case.dim, case.n).unwrap();
        let mut c = 0.0;
        while c == 0.0 {
            c = rng::standard_normal(&mut r) * 4.0;
        }
        ChaosPair::new(f.clone(), f.scale(c)).unwrap()
    } else {
        case.pair()
    };
    let verdict = match p.density_verdict(DEFAULT_TOL) {
        Ok(v) => v,
        Err(_) => DensityVerdict::Undecided,
    };
    let edet = p.edet_closed();
    if proportional {
        let r = CheckResult::compare("density_dichotomy", case, edet, 0.0, TOL_COEFF, Comparison::Absolute);
        let ok = verdict == DensityVerdict::NoDensityProportional;
        r.require(ok, alloc::format!("verdict {}", verdict.as_str()))
    } else {
        let det_c = p.det_c();
        let r = CheckResult::compare("density_dichotomy", case, edet, 0.0, 0.0, Comparison::AtLeast);
        let ok = verdict == DensityVerdict::HasDensity && det_c > 0.0 && edet > 0.0;
        r.require(ok, alloc::format!("verdict {}, detC {det_c}", verdict.as_str()))
    }
}

/// The `(d, n, m)` grid of a suite run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub dims: Vec<usize>,
    pub orders: Vec<usize>,
    pub seeds: Vec<u64>,
}

impl Grid {
    /// `d ∈ {2, 3}`, `n, m ∈ {1..4}`, seeds `0..seeds`.
    pub fn default_with_seeds(seeds: u64) -> Self {
        Grid { dims: alloc::vec![2, 3], orders: alloc::vec![1, 2, 3, 4], seeds: (0..seeds).collect() }
    }

    pub fn cases(&self) -> impl Iterator<Item = Case> + '_ {
        self.dims.iter().flat_map(move |&d| {
            self.orders.iter().flat_map(move |&n| {
                self.orders.iter().flat_map(move |&m| self.seeds.iter().map(move |&s| Case::new(d, n, m, s)))
            })
        })
    }
}

/// Every checker that applies to a case, in a fixed order.
pub fn run_case(case: Case) -> Vec<CheckResult> {
    let mut out = alloc::vec![
        check_contraction_duality(case),
        check_symmetrized_inner(case),
        check_slice_contraction(case),
        check_sum_of_squares(case, 50),
        check_contraction_norm_sum(case),
        check_terms_nonnegative(case),
        check_t0_forms(case),
        check_edet_regrouping(case),
        check_edet_oracle(case),
        check_edet_exact(case),
    ];
    if case.n == case.m {
        out.push(check_same_chaos(case));
        out.push(check_last_term(case));
        out.push(check_density_dichotomy(case, true));
        out.push(check_density_dichotomy(case, false));
        if case.n == 2 {
            out.push(check_order_two_remainder(case));
            out.push(check_order_two_oracle(case));
        }
    } else if case.seed == 0 {
        out.push(check_mixed_edet(case.dim, case.n, case.m));
        out.push(check_mixed_covariance(case.dim, case.n, case.m));
    }
    out
}

pub fn run_suite(grid: &Grid) -> Vec<CheckResult> {
    grid.cases().flat_map(run_case).collect()
}
