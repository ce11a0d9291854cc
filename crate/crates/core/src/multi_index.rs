//! Occupation-number multi-indices.
//!
//! A sorted index tuple `j_1 <= ... <= j_k` over a `d`-dimensional basis is
//! stored as its occupation counts `(a_1, ..., a_d)` with `sum a_i = k`. All
//! occupations of a given `(d, k)` are ranked densely in descending
//! lexicographic order, so `(k, 0, ..., 0)` has rank 0 and
//! `(0, ..., 0, k)` has the last rank.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Largest tensor order supported; multiplicities up to `20!` fit in `u64`.
pub const MAX_ORDER: usize = 20;

const TABLE: usize = 64;

static BINOMIAL: [[u64; TABLE]; TABLE] = binomial_table();

const fn binomial_table() -> [[u64; TABLE]; TABLE] {
    let mut t = [[0u64; TABLE]; TABLE];
    let mut n = 0;
    while n < TABLE {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            // C(63, 31) < 2^63, no overflow anywhere in the table.
            t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            k += 1;
        }
        n += 1;
    }
    t
}

/// `C(n, k)`, zero when `k > n`.
#[inline]
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    if n < TABLE {
        return BINOMIAL[n][k];
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial coefficient overflows u64")
}

#[inline]
pub fn factorial(n: usize) -> u64 {
    assert!(n <= MAX_ORDER, "factorial({n}) overflows u64");
    (1..=n as u64).product()
}

/// Number of occupations of order `order` over `dim` slots (stars and bars).
#[inline]
pub fn count(dim: usize, order: usize) -> usize {
    debug_assert!(dim >= 1);
    binomial(dim + order - 1, order) as usize
}

/// Dense rank of an occupation among all occupations of the same order.
#[inline]
pub fn rank(occ: &[u32]) -> usize {
    let d = occ.len();
    let mut rem: usize = occ.iter().map(|&a| a as usize).sum();
    let mut r = 0;
    for (i, &a) in occ.iter().enumerate().take(d.saturating_sub(1)) {
        let a = a as usize;
        if rem > a {
            r += count(d - i, rem - a - 1);
        }
        rem -= a;
    }
    r
}

/// `k! / prod a_i!`: number of ordered tuples sharing the occupation.
#[inline]
pub fn multiplicity(occ: &[u32]) -> u64 {
    let mut rem: usize = occ.iter().map(|&a| a as usize).sum();
    let mut m = 1u64;
    for &a in occ {
        m *= binomial(rem, a as usize);
        rem -= a as usize;
    }
    m
}

pub(crate) fn check_order(dim: usize, order: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::ZeroDim);
    }
    if order > MAX_ORDER || dim + order > TABLE {
        return Err(Error::OrderTooLarge { order, max: MAX_ORDER.min(TABLE.saturating_sub(dim)) });
    }
    Ok(())
}

/// Iterator over all occupations of `(dim, order)` in rank order.
pub struct Occupations {
    current: Vec<u32>,
    done: bool,
}

impl Occupations {
    pub fn new(dim: usize, order: usize) -> Self {
        let mut current = alloc::vec![0u32; dim];
        if dim > 0 {
            current[0] = order as u32;
        }
        Occupations { current, done: dim == 0 }
    }

    /// Advances in place; used by hot loops that avoid per-item allocation.
    pub fn advance(occ: &mut [u32]) -> bool {
        let d = occ.len();
        if d < 2 {
            return false;
        }
        let mut i = d - 1;
        while i > 0 {
            i -= 1;
            if occ[i] > 0 {
                let tail: u32 = occ[i + 1..].iter().sum();
                occ[i] -= 1;
                occ[i + 1] = tail + 1;
                for a in &mut occ[i + 2..] {
                    *a = 0;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for Occupations {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        self.done = !Occupations::advance(&mut self.current);
        Some(out)
    }
}

/// Flat table of all occupations of `(dim, order)`, row `i` has rank `i`.
pub(crate) fn occupation_table(dim: usize, order: usize) -> Vec<u32> {
    let mut flat = Vec::with_capacity(count(dim, order) * dim);
    for occ in Occupations::new(dim, order) {
        flat.extend_from_slice(&occ);
    }
    flat
}

pub(crate) fn multiplicity_table(dim: usize, order: usize) -> Vec<u64> {
    Occupations::new(dim, order).map(|o| multiplicity(&o)).collect()
}

/// Calls `visit(a, weight)` for every `a <= c` (componentwise) with
/// `|a| = p`, where `weight = prod_i C(c_i, a_i)`.
///
/// The weights summed over all `a` equal `C(|c|, p)`; divided by that total
/// they form the multivariate hypergeometric law of the left block's
/// occupation under a uniformly random slot permutation.
pub fn for_each_split<F: FnMut(&[u32], u64)>(c: &[u32], p: usize, mut visit: F) {
    let mut a = alloc::vec![0u32; c.len()];
    // suffix capacity: how much the positions i.. can still absorb
    let mut cap = alloc::vec![0usize; c.len() + 1];
    for i in (0..c.len()).rev() {
        cap[i] = cap[i + 1] + c[i] as usize;
    }
    if p > cap[0] {
        return;
    }
    split_rec(c, &cap, 0, p, 1, &mut a, &mut visit);
}

fn split_rec<F: FnMut(&[u32], u64)>(
    c: &[u32],
    cap: &[usize],
    i: usize,
    left: usize,
    weight: u64,
    a: &mut [u32],
    visit: &mut F,
) {
    if i == c.len() {
        if left == 0 {
            visit(a, weight);
        }
        return;
    }
    let lo = left.saturating_sub(cap[i + 1]);
    let hi = left.min(c[i] as usize);
    for v in lo..=hi {
        a[i] = v as u32;
        split_rec(c, cap, i + 1, left - v, weight * binomial(c[i] as usize, v), a, visit);
    }
    a[i] = 0;
}

/// A canonical multi-index in occupation-number form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    occupations: Box<[u32]>,
    order: usize,
}

impl MultiIndex {
    pub fn new(occupations: impl Into<Box<[u32]>>) -> Result<Self> {
        let occupations = occupations.into();
        let order = occupations.iter().map(|&a| a as usize).sum();
        check_order(occupations.len(), order)?;
        Ok(MultiIndex { occupations, order })
    }

    /// Occupation of a sorted or unsorted tuple of 0-based basis indices.
    pub fn from_tuple(dim: usize, tuple: &[usize]) -> Result<Self> {
        let mut occ = alloc::vec![0u32; dim];
        for &j in tuple {
            if j >= dim {
                return Err(Error::BasisIndexOutOfRange { index: j, dim });
            }
            occ[j] += 1;
        }
        MultiIndex::new(occ)
    }

    /// The multi-index of dense rank `rank` in `(dim, order)`.
    pub fn from_rank(dim: usize, order: usize, rank: usize) -> Option<Self> {
        Occupations::new(dim, order)
            .nth(rank)
            .map(|o| MultiIndex { occupations: o.into(), order })
    }

    pub fn occupations(&self) -> &[u32] {
        &self.occupations
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.occupations.len()
    }

    pub fn multiplicity(&self) -> u64 {
        multiplicity(&self.occupations)
    }

    pub fn rank(&self) -> usize {
        rank(&self.occupations)
    }

    /// The sorted tuple `j_1 <= ... <= j_k` of 0-based indices.
    pub fn to_tuple(&self) -> Vec<usize> {
        let mut t = Vec::with_capacity(self.order);
        for (j, &a) in self.occupations.iter().enumerate() {
            t.extend(core::iter::repeat_n(j, a as usize));
        }
        t
    }
}
