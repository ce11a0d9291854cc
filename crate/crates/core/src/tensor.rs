//! Symmetric tensors over a `d`-dimensional orthonormal basis.
//!
//! A [`SymTensor`] of order `k` stores one coefficient per canonical
//! multi-index; the value on any ordered tuple is the value of its
//! occupation. Contractions are not jointly symmetric, only symmetric within
//! each of their two slot blocks, so they are returned as [`BiSymTensor`]
//! and symmetrized explicitly when needed.

use alloc::vec;
use alloc::vec::Vec;


use crate::multi_index::{
    self, check_order, count, for_each_split, multiplicity, occupation_table, rank, MultiIndex,
    Occupations,
};
use crate::{rng, Error, Result, Scalar};

/// Law of each canonical coefficient drawn by [`SymTensor::random`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum CoeffDistribution {
    #[default]
    StandardNormal,
    /// Integers uniform on `lo..=hi`, exact in both `f64` and rational mode.
    UniformInt { lo: i64, hi: i64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor<S = f64> {
    dim: usize,
    order: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> SymTensor<S> {
    pub fn zeros(dim: usize, order: usize) -> Result<Self> {
        check_order(dim, order)?;
        Ok(SymTensor { dim, order, coeffs: vec![S::zero(); count(dim, order)] })
    }

    /// Coefficients listed in canonical rank order.
    pub fn from_coeffs(dim: usize, order: usize, coeffs: Vec<S>) -> Result<Self> {
        check_order(dim, order)?;
        let expected = count(dim, order);
        if coeffs.len() != expected {
            return Err(Error::CoeffCount { expected, got: coeffs.len() });
        }
        Ok(SymTensor { dim, order, coeffs })
    }

    /// Builds a tensor from sparse `(occupation, coeff)` entries; absent
    /// occupations are zero. Rejects malformed and repeated occupations.
    pub fn from_entries<I>(dim: usize, order: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, S)>,
    {
        let mut t = SymTensor::zeros(dim, order)?;
        let mut seen = vec![false; t.coeffs.len()];
        for (occ, c) in entries {
            let sum: usize = occ.iter().map(|&a| a as usize).sum();
            if occ.len() != dim || sum != order {
                return Err(Error::BadOccupation { occupation: occ, order, dim });
            }
            let r = rank(&occ);
            if seen[r] {
                return Err(Error::DuplicateEntry { occupation: occ });
            }
            seen[r] = true;
            t.coeffs[r] = c;
        }
        Ok(t)
    }

    pub fn scalar(dim: usize, value: S) -> Result<Self> {
        SymTensor::from_coeffs(dim, 0, vec![value])
    }

    /// `e_i^{⊗k}` with a 0-based basis index.
    pub fn basis_power(dim: usize, i: usize, order: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::BasisIndexOutOfRange { index: i, dim });
        }
        let mut occ = vec![0u32; dim];
        occ[i] = order as u32;
        SymTensor::from_entries(dim, order, [(occ, S::one())])
    }

    /// `h^{⊗k}` for a vector `h` given in basis coordinates.
    pub fn tensor_power(h: &[S], order: usize) -> Result<Self> {
        let dim = h.len();
        check_order(dim, order)?;
        let coeffs = Occupations::new(dim, order)
            .map(|occ| {
                let mut c = S::one();
                for (hi, &a) in h.iter().zip(&occ) {
                    for _ in 0..a {
                        c = c * hi.clone();
                    }
                }
                c
            })
            .collect();
        Ok(SymTensor { dim, order, coeffs })
    }

    /// Random tensor with integer coefficients uniform on `lo..=hi`.
    pub fn random_int(seed: u64, dim: usize, order: usize, lo: i64, hi: i64) -> Result<Self> {
        let mut rng = rng::seeded(seed);
        SymTensor::random_int_with(&mut rng, dim, order, lo, hi)
    }

    pub fn random_int_with<R: rand::Rng + ?Sized>(
        rng: &mut R,
        dim: usize,
        order: usize,
        lo: i64,
        hi: i64,
    ) -> Result<Self> {
        check_order(dim, order)?;
        let coeffs = (0..count(dim, order)).map(|_| S::from_i64(rng.random_range(lo..=hi))).collect();
        Ok(SymTensor { dim, order, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of canonical coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn get(&self, index: &MultiIndex) -> Option<&S> {
        if index.dim() != self.dim || index.order() != self.order {
            return None;
        }
        self.coeffs.get(index.rank())
    }

    /// Coefficient at a raw occupation slice; panics on a malformed index.
    #[inline]
    pub fn at(&self, occ: &[u32]) -> &S {
        debug_assert_eq!(occ.len(), self.dim);
        &self.coeffs[rank(occ)]
    }

    /// Value of `λ` on an ordered tuple of 0-based basis indices.
    pub fn value_at(&self, tuple: &[usize]) -> Result<S> {
        if tuple.len() != self.order {
            return Err(Error::OrderMismatch { left: tuple.len(), right: self.order });
        }
        let mi = MultiIndex::from_tuple(self.dim, tuple)?;
        Ok(self.coeffs[mi.rank()].clone())
    }

    /// `(occupation, coeff)` pairs in rank order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<u32>, &S)> + '_ {
        Occupations::new(self.dim, self.order).zip(self.coeffs.iter())
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch { left: self.dim, right: other.dim });
        }
        if self.order != other.order {
            return Err(Error::OrderMismatch { left: self.order, right: other.order });
        }
        Ok(())
    }

    /// Scalar product in `H^{⊗k}`: the sum over ordered tuples, computed
    /// once per canonical index with its multiplicity.
    pub fn inner(&self, other: &Self) -> Result<S> {
        self.check_same_space(other)?;
        let mut acc = S::zero();
        for ((occ, a), b) in self.iter().zip(&other.coeffs) {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            acc += S::from_u64(multiplicity(&occ)) * a.clone() * b.clone();
        }
        Ok(acc)
    }

    pub fn norm_sq(&self) -> S {
        self.inner(self).expect("same space")
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(SymTensor { dim: self.dim, order: self.order, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() - b.clone()).collect();
        Ok(SymTensor { dim: self.dim, order: self.order, coeffs })
    }

    pub fn scale(&self, c: S) -> Self {
        let coeffs = self.coeffs.iter().map(|a| c.clone() * a.clone()).collect();
        SymTensor { dim: self.dim, order: self.order, coeffs }
    }

    /// `self += c * other`
    pub(crate) fn add_scaled(&mut self, c: &S, other: &Self) {
        debug_assert!(self.dim == other.dim && self.order == other.order);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += c.clone() * b.clone();
            }
        }
    }

    /// Largest coefficientwise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<S> {
        self.check_same_space(other)?;
        Ok(max_abs_diff(&self.coeffs, &other.coeffs))
    }

    /// `s_{i,f} = n Σ λ_{i,j_2..j_n} e_{j_2}⊗…⊗e_{j_n}` for a 0-based `i`.
    ///
    /// The coefficient at occupation `J` is `n·λ_{J+e_i}`. Summing
    /// `e_i ⊗ slice(i)` over `i` gives back `n·f`.
    pub fn slice(&self, i: usize) -> Result<Self> {
        if self.order == 0 {
            return Err(Error::SliceOfScalar);
        }
        if i >= self.dim {
            return Err(Error::BasisIndexOutOfRange { index: i, dim: self.dim });
        }
        let n = S::from_u64(self.order as u64);
        let mut buf = vec![0u32; self.dim];
        let coeffs = Occupations::new(self.dim, self.order - 1)
            .map(|occ| {
                buf.copy_from_slice(&occ);
                buf[i] += 1;
                n.clone() * self.at(&buf).clone()
            })
            .collect();
        Ok(SymTensor { dim: self.dim, order: self.order - 1, coeffs })
    }

    /// All `d` slices, `s_{1,f}, …, s_{d,f}`.
    pub fn slices(&self) -> Result<Vec<Self>> {
        (0..self.dim).map(|i| self.slice(i)).collect()
    }

    /// Contraction `f ⊗_r g` of order-`n` `self` with order-`m` `g`:
    /// the first `r` slots of both are paired, leaving an `(n-r, m-r)`
    /// two-block tensor. `r = 0` is the tensor product.
    pub fn contract(&self, g: &Self, r: usize) -> Result<BiSymTensor<S>> {
        if self.dim != g.dim {
            return Err(Error::DimMismatch { left: self.dim, right: g.dim });
        }
        let max = self.order.min(g.order);
        if r > max {
            return Err(Error::ContractionOutOfRange { r, max });
        }
        let d = self.dim;
        let (p, q) = (self.order - r, g.order - r);
        let occ_r = occupation_table(d, r);
        let occ_p = occupation_table(d, p);
        let occ_q = occupation_table(d, q);
        let (np, nq) = (count(d, p), count(d, q));
        let mut out = vec![S::zero(); np * nq];
        let mut u: Vec<S> = Vec::with_capacity(np);
        let mut v: Vec<S> = Vec::with_capacity(nq);
        let mut buf = vec![0u32; d];
        let gather = |t: &Self, base: &[u32], table: &[u32], dst: &mut Vec<S>, buf: &mut [u32]| {
            dst.clear();
            for occ in table.chunks_exact(d.max(1)) {
                for ((b, x), y) in buf.iter_mut().zip(base).zip(occ) {
                    *b = x + y;
                }
                dst.push(t.at(buf).clone());
            }
        };
        for base in occ_r.chunks_exact(d) {
            gather(self, base, &occ_p, &mut u, &mut buf);
            if u.iter().all(Scalar::is_zero) {
                continue;
            }
            gather(g, base, &occ_q, &mut v, &mut buf);
            let w = S::from_u64(multiplicity(base));
            for (row, uj) in out.chunks_exact_mut(nq).zip(&u) {
                if uj.is_zero() {
                    continue;
                }
                let wu = w.clone() * uj.clone();
                for (cell, vk) in row.iter_mut().zip(&v) {
                    *cell += wu.clone() * vk.clone();
                }
            }
        }
        Ok(BiSymTensor { dim: d, left: p, right: q, coeffs: out })
    }

    /// `f ⊗̃_r g`
    pub fn contract_sym(&self, g: &Self, r: usize) -> Result<Self> {
        Ok(self.contract(g, r)?.symmetrize())
    }

    /// `f ⊗̃ g`
    pub fn sym_product(&self, g: &Self) -> Result<Self> {
        self.contract_sym(g, 0)
    }

    /// Converts coefficients to another scalar type through `f64`.
    pub fn to_f64(&self) -> SymTensor<f64> {
        SymTensor { dim: self.dim, order: self.order, coeffs: self.coeffs.iter().map(Scalar::to_f64).collect() }
    }
}

impl SymTensor<f64> {
    /// Random tensor with i.i.d. canonical coefficients, reproducible from
    /// `seed`.
    pub fn random(seed: u64, dim: usize, order: usize, dist: CoeffDistribution) -> Result<Self> {
        let mut rng = rng::seeded(seed);
        SymTensor::random_with(&mut rng, dim, order, dist)
    }

    pub fn random_with<R: rand::Rng + ?Sized>(
        rng: &mut R,
        dim: usize,
        order: usize,
        dist: CoeffDistribution,
    ) -> Result<Self> {
        match dist {
            CoeffDistribution::StandardNormal => {
                check_order(dim, order)?;
                let coeffs = (0..count(dim, order)).map(|_| rng::standard_normal(rng)).collect();
                Ok(SymTensor { dim, order, coeffs })
            }
            CoeffDistribution::UniformInt { lo, hi } => SymTensor::random_int_with(rng, dim, order, lo, hi),
        }
    }

    /// Random tensor scaled to unit `H^{⊗k}` norm.
    pub fn random_unit_with<R: rand::Rng + ?Sized>(rng: &mut R, dim: usize, order: usize) -> Result<Self> {
        loop {
            let t = SymTensor::random_with(rng, dim, order, CoeffDistribution::StandardNormal)?;
            if let Some(u) = t.normalized() {
                return Ok(u);
            }
        }
    }

    pub fn random_unit(seed: u64, dim: usize, order: usize) -> Result<Self> {
        SymTensor::random_unit_with(&mut rng::seeded(seed), dim, order)
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sq())
    }

    /// Unit-norm copy, `None` for the zero tensor.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(self.scale(1.0 / n))
        } else {
            None
        }
    }
}

fn max_abs_diff<S: Scalar>(a: &[S], b: &[S]) -> S {
    let mut worst = S::zero();
    for (x, y) in a.iter().zip(b) {
        let d = (x.clone() - y.clone()).abs();
        if d > worst {
            worst = d;
        }
    }
    worst
}

/// Element of `H^{⊗p} ⊗ H^{⊗q}` symmetric within each block.
///
/// Coefficients are a dense `count(d, p) × count(d, q)` row-major matrix
/// indexed by the ranks of the left and right occupations.
#[derive(Clone, Debug, PartialEq)]
pub struct BiSymTensor<S = f64> {
    dim: usize,
    left: usize,
    right: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> BiSymTensor<S> {
    pub fn zeros(dim: usize, left: usize, right: usize) -> Result<Self> {
        check_order(dim, left + right)?;
        Ok(BiSymTensor { dim, left, right, coeffs: vec![S::zero(); count(dim, left) * count(dim, right)] })
    }

    /// Views a symmetric tensor as a two-block tensor with `left` slots in
    /// the first block.
    pub fn from_sym(f: &SymTensor<S>, left: usize) -> Result<Self> {
        if left > f.order {
            return Err(Error::OrderMismatch { left, right: f.order });
        }
        let d = f.dim;
        let right = f.order - left;
        let occ_q = occupation_table(d, right);
        let mut coeffs = Vec::with_capacity(count(d, left) * count(d, right));
        let mut buf = vec![0u32; d];
        for a in Occupations::new(d, left) {
            for b in occ_q.chunks_exact(d) {
                for ((s, x), y) in buf.iter_mut().zip(&a).zip(b) {
                    *s = x + y;
                }
                coeffs.push(f.at(&buf).clone());
            }
        }
        Ok(BiSymTensor { dim: d, left, right, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_order(&self) -> usize {
        self.left
    }

    pub fn right_order(&self) -> usize {
        self.right
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn get(&self, a: &MultiIndex, b: &MultiIndex) -> Option<&S> {
        if a.dim() != self.dim || b.dim() != self.dim || a.order() != self.left || b.order() != self.right {
            return None;
        }
        self.coeffs.get(a.rank() * count(self.dim, self.right) + b.rank())
    }

    /// Value on an ordered tuple: the first `p` indices form the left block.
    pub fn value_at(&self, tuple: &[usize]) -> Result<S> {
        if tuple.len() != self.left + self.right {
            return Err(Error::OrderMismatch { left: tuple.len(), right: self.left + self.right });
        }
        let a = MultiIndex::from_tuple(self.dim, &tuple[..self.left])?;
        let b = MultiIndex::from_tuple(self.dim, &tuple[self.left..])?;
        Ok(self.get(&a, &b).expect("validated").clone())
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch { left: self.dim, right: other.dim });
        }
        if self.left != other.left || self.right != other.right {
            return Err(Error::BlockMismatch {
                left_p: self.left,
                left_q: self.right,
                right_p: other.left,
                right_q: other.right,
            });
        }
        Ok(())
    }

    /// Ordered-tuple scalar product, `Σ mult(a)·mult(b)·c(a,b)·c'(a,b)`.
    pub fn inner(&self, other: &Self) -> Result<S> {
        self.check_same_space(other)?;
        let mq = multi_index::multiplicity_table(self.dim, self.right);
        let nq = mq.len();
        let mut acc = S::zero();
        for (a, (rx, ry)) in Occupations::new(self.dim, self.left)
            .zip(self.coeffs.chunks_exact(nq).zip(other.coeffs.chunks_exact(nq)))
        {
            let mut row = S::zero();
            for ((x, y), &w) in rx.iter().zip(ry).zip(&mq) {
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                row += S::from_u64(w) * x.clone() * y.clone();
            }
            if !row.is_zero() {
                acc += S::from_u64(multiplicity(&a)) * row;
            }
        }
        Ok(acc)
    }

    pub fn norm_sq(&self) -> S {
        self.inner(self).expect("same space")
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(self.with_coeffs(coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() - b.clone()).collect();
        Ok(self.with_coeffs(coeffs))
    }

    pub fn scale(&self, c: S) -> Self {
        let coeffs = self.coeffs.iter().map(|a| c.clone() * a.clone()).collect();
        self.with_coeffs(coeffs)
    }

    fn with_coeffs(&self, coeffs: Vec<S>) -> Self {
        BiSymTensor { dim: self.dim, left: self.left, right: self.right, coeffs }
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<S> {
        self.check_same_space(other)?;
        Ok(max_abs_diff(&self.coeffs, &other.coeffs))
    }

    /// Swaps the two blocks: `T^t(b, a) = T(a, b)`.
    pub fn transpose(&self) -> Self {
        let (np, nq) = (count(self.dim, self.left), count(self.dim, self.right));
        let mut coeffs = vec![S::zero(); np * nq];
        for i in 0..np {
            for j in 0..nq {
                coeffs[j * np + i] = self.coeffs[i * nq + j].clone();
            }
        }
        BiSymTensor { dim: self.dim, left: self.right, right: self.left, coeffs }
    }

    /// Average over all `(p+q)!` slot permutations.
    ///
    /// The target coefficient at occupation `c` is the hypergeometric mix
    /// `Σ_{a ≤ c, |a| = p} Π C(c_i, a_i) · T(a, c - a) / C(p+q, p)`.
    pub fn symmetrize(&self) -> SymTensor<S> {
        let d = self.dim;
        let (p, q) = (self.left, self.right);
        let nq = count(d, q);
        let total = multi_index::binomial(p + q, p);
        let mut b = vec![0u32; d];
        let coeffs = Occupations::new(d, p + q)
            .map(|c| {
                let mut acc = S::zero();
                for_each_split(&c, p, |a, w| {
                    for ((bi, ci), ai) in b.iter_mut().zip(&c).zip(a) {
                        *bi = ci - ai;
                    }
                    let t = &self.coeffs[rank(a) * nq + rank(&b)];
                    if !t.is_zero() {
                        acc += S::from_u64(w) * t.clone();
                    }
                });
                acc.div_u64(total)
            })
            .collect();
        SymTensor { dim: d, order: p + q, coeffs }
    }

    /// Lossless embedding when one block is empty.
    pub fn into_sym(self) -> Option<SymTensor<S>> {
        if self.right == 0 || self.left == 0 {
            Some(SymTensor { dim: self.dim, order: self.left + self.right, coeffs: self.coeffs })
        } else {
            None
        }
    }

    /// The value of a `(0, 0)` tensor.
    pub fn as_scalar(&self) -> Option<&S> {
        (self.left == 0 && self.right == 0).then(|| &self.coeffs[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Error, Rational};

    fn e(d: usize, i: usize, k: usize) -> SymTensor<f64> {
        SymTensor::basis_power(d, i, k).unwrap()
    }

    fn half_pair() -> SymTensor<f64> {
        SymTensor::from_entries(2, 2, [(alloc::vec![1, 1], 0.5)]).unwrap()
    }

    #[test]
    fn inner_products() {
        assert_eq!(e(2, 0, 2).inner(&e(2, 0, 2)).unwrap(), 1.0);
        assert_eq!(half_pair().inner(&half_pair()).unwrap(), 0.5);
        let g = SymTensor::random_unit(3, 2, 2).unwrap();
        assert_eq!(SymTensor::zeros(2, 2).unwrap().inner(&g).unwrap(), 0.0);
        assert!(e(2, 0, 2).inner(&e(3, 0, 2)).is_err());
    }

    #[test]
    fn contraction_of_basis_squares() {
        let c = e(2, 0, 2).contract(&e(2, 0, 2), 1).unwrap();
        assert_eq!((c.left_order(), c.right_order()), (1, 1));
        assert_eq!(c.value_at(&[0, 0]).unwrap(), 1.0);
        assert_eq!(c.norm_sq(), 1.0);
        let f = SymTensor::random_unit(1, 3, 3).unwrap();
        let g = SymTensor::random_unit(2, 3, 3).unwrap();
        let full = f.contract(&g, 3).unwrap();
        assert_eq!(full.as_scalar().copied(), Some(f.inner(&g).unwrap()));
        assert!(matches!(f.contract(&g, 4), Err(Error::ContractionOutOfRange { .. })));
    }

    #[test]
    fn symmetrize_examples() {
        let t = BiSymTensor::from_sym(&e(2, 0, 2), 1).unwrap();
        assert_eq!(t.symmetrize(), e(2, 0, 2));
        let x = e(2, 0, 1).contract(&e(2, 1, 1), 0).unwrap();
        assert_eq!(x.symmetrize(), half_pair());
        assert_eq!(e(2, 0, 1).sym_product(&e(2, 1, 1)).unwrap(), half_pair());
    }

    #[test]
    fn embedding_with_empty_block_is_lossless() {
        let f = SymTensor::random_unit(9, 3, 3).unwrap();
        let b = BiSymTensor::from_sym(&f, 3).unwrap();
        assert_eq!(b.norm_sq(), f.norm_sq());
        assert_eq!(b.clone().into_sym(), Some(f.clone()));
        assert_eq!(b.symmetrize(), f);
    }

    #[test]
    fn slice_examples() {
        assert_eq!(e(2, 0, 2).slice(0).unwrap(), e(2, 0, 1).scale(2.0));
        assert!(e(2, 0, 2).slice(1).unwrap().is_zero());
        assert_eq!(e(3, 0, 4).slice(0).unwrap(), e(3, 0, 3).scale(4.0));
        assert_eq!(SymTensor::<f64>::scalar(2, 1.0).unwrap().slice(0), Err(Error::SliceOfScalar));
    }

    #[test]
    fn arithmetic_and_generation() {
        let f = SymTensor::random_unit(5, 3, 3).unwrap();
        assert!(f.add(&f.scale(-1.0)).unwrap().is_zero());
        let a = SymTensor::random(11, 3, 2, CoeffDistribution::StandardNormal).unwrap();
        let b = SymTensor::random(11, 3, 2, CoeffDistribution::StandardNormal).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 6);
        assert!((f.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn entry_validation() {
        let dup = SymTensor::<f64>::from_entries(2, 2, [(alloc::vec![2, 0], 1.0), (alloc::vec![2, 0], 2.0)]);
        assert!(matches!(dup, Err(Error::DuplicateEntry { .. })));
        let bad = SymTensor::<f64>::from_entries(2, 2, [(alloc::vec![1, 0], 1.0)]);
        assert!(matches!(bad, Err(Error::BadOccupation { .. })));
        let short = SymTensor::<f64>::from_entries(2, 2, [(alloc::vec![2], 1.0)]);
        assert!(matches!(short, Err(Error::BadOccupation { .. })));
    }

    #[test]
    fn tensor_power_has_unit_norm_for_unit_vector() {
        let h = [0.6, 0.8];
        let t = SymTensor::tensor_power(&h, 3).unwrap();
        assert!((t.norm_sq() - 1.0).abs() < 1e-15);
        assert!((t.value_at(&[0, 1, 1]).unwrap() - 0.6 * 0.8 * 0.8).abs() < 1e-15);
    }

    #[test]
    fn exact_mode_agrees_with_float() {
        let f = SymTensor::<Rational>::random_int(3, 2, 3, -4, 4).unwrap();
        let g = SymTensor::<Rational>::random_int(4, 2, 2, -4, 4).unwrap();
        let exact = f.contract(&g, 1).unwrap().symmetrize().norm_sq();
        let float = f.to_f64().contract(&g.to_f64(), 1).unwrap().symmetrize().norm_sq();
        assert!((exact.to_f64() - float).abs() <= 1e-12 * float.abs());
    }
}
