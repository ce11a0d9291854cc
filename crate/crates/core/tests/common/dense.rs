//! Brute-force tensors over ordered index tuples, used as an oracle for the
//! canonical-storage operations.

#![allow(dead_code)]

use chaosdet_core::{BiSymTensor, SymTensor};

#[derive(Clone, Debug, PartialEq)]
pub struct Dense {
    pub dim: usize,
    pub order: usize,
    pub data: Vec<f64>,
}

/// Ordered tuples of `order` indices below `dim`, first slot most significant.
pub fn tuples(dim: usize, order: usize) -> Vec<Vec<usize>> {
    let total = dim.pow(order as u32);
    (0..total)
        .map(|mut flat| {
            let mut t = vec![0; order];
            for slot in t.iter_mut().rev() {
                *slot = flat % dim;
                flat /= dim;
            }
            t
        })
        .collect()
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

impl Dense {
    pub fn zeros(dim: usize, order: usize) -> Self {
        Dense { dim, order, data: vec![0.0; dim.pow(order as u32)] }
    }

    pub fn flat(&self, t: &[usize]) -> usize {
        t.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn at(&self, t: &[usize]) -> f64 {
        self.data[self.flat(t)]
    }

    pub fn from_sym(f: &SymTensor<f64>) -> Self {
        let mut out = Dense::zeros(f.dim(), f.order());
        for (k, t) in tuples(f.dim(), f.order()).iter().enumerate() {
            out.data[k] = f.value_at(t).unwrap();
        }
        out
    }

    pub fn from_bisym(b: &BiSymTensor<f64>) -> Self {
        let order = b.left_order() + b.right_order();
        let mut out = Dense::zeros(b.dim(), order);
        for (k, t) in tuples(b.dim(), order).iter().enumerate() {
            out.data[k] = b.value_at(t).unwrap();
        }
        out
    }

    pub fn inner(&self, other: &Dense) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    /// Pairs the first `r` slots of `self` with the first `r` slots of `g`.
    pub fn contract(&self, g: &Dense, r: usize) -> Dense {
        let (p, q) = (self.order - r, g.order - r);
        let mut out = Dense::zeros(self.dim, p + q);
        for (k, t) in tuples(self.dim, p + q).iter().enumerate() {
            let mut acc = 0.0;
            for s in tuples(self.dim, r) {
                let mut a = s.clone();
                a.extend_from_slice(&t[..p]);
                let mut b = s;
                b.extend_from_slice(&t[p..]);
                acc += self.at(&a) * g.at(&b);
            }
            out.data[k] = acc;
        }
        out
    }

    /// Average over all slot permutations.
    pub fn symmetrize(&self) -> Dense {
        let perms = permutations(self.order);
        let mut out = Dense::zeros(self.dim, self.order);
        for (k, t) in tuples(self.dim, self.order).iter().enumerate() {
            let mut acc = 0.0;
            for p in &perms {
                let u: Vec<usize> = p.iter().map(|&j| t[j]).collect();
                acc += self.at(&u);
            }
            out.data[k] = acc / perms.len() as f64;
        }
        out
    }

    /// `order · f(i, ·)`
    pub fn slice(&self, i: usize) -> Dense {
        let mut out = Dense::zeros(self.dim, self.order - 1);
        for (k, t) in tuples(self.dim, self.order - 1).iter().enumerate() {
            let mut u = vec![i];
            u.extend_from_slice(t);
            out.data[k] = self.order as f64 * self.at(&u);
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Dense) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}
