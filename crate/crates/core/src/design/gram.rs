use super::{Coord, DesignMatrix, LinearEntry};
use crate::exact::{ComplexSqrt2, ExactInt};
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Quadratic form in the real coordinates, keyed by the ordered pair
/// `(min, max)` of the two coordinates of each monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm<I: ExactInt> {
    terms: BTreeMap<(Coord, Coord), ComplexSqrt2<I>>,
}

impl<I: ExactInt> Default for QuadraticForm<I> {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
}

impl<I: ExactInt> QuadraticForm<I> {
    /// `Σ_{i<k} x_iI² + x_iQ²`.
    pub fn energy(k: usize) -> Self {
        let terms = (0..k)
            .flat_map(|v| [Coord::i(v), Coord::q(v)])
            .map(|c| ((c, c), ComplexSqrt2::one()))
            .collect();
        Self { terms }
    }

    /// Adds `conj(a)·b` expanded over monomials.
    pub fn add_product(&mut self, a: &LinearEntry<I>, b: &LinearEntry<I>) {
        for (ca, za) in a.terms() {
            let za = za.conj();
            for (cb, zb) in b.terms() {
                let key = if ca <= cb { (*ca, *cb) } else { (*cb, *ca) };
                let prod = &za * zb;
                let slot = self.terms.entry(key).or_insert_with(ComplexSqrt2::zero);
                *slot += &prod;
                if slot.is_zero() {
                    self.terms.remove(&key);
                }
            }
        }
    }

    pub fn coefficient(&self, a: Coord, b: Coord) -> ComplexSqrt2<I> {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.terms
            .get(&key)
            .cloned()
            .unwrap_or_else(ComplexSqrt2::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Coord, Coord), &ComplexSqrt2<I>)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn conj(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, z)| (*k, z.conj())).collect(),
        }
    }

    /// Every coefficient is real.
    pub fn is_hermitian(&self) -> bool {
        self.terms.values().all(ComplexSqrt2::is_real)
    }

    /// Exactly `Σ_{i<k} x_iI² + x_iQ²`.
    pub fn is_energy(&self, k: usize) -> bool {
        self.terms.len() == 2 * k
            && self
                .terms
                .iter()
                .all(|((a, b), z)| a == b && a.var < k && z.is_one())
    }
}

fn gram_entry<I: ExactInt>(d: &DesignMatrix<I>, u: usize, v: usize) -> QuadraticForm<I> {
    let mut q = QuadraticForm::default();
    for r in 0..d.p() {
        let (a, b) = (d.entry(r, u), d.entry(r, v));
        if !a.is_zero() && !b.is_zero() {
            q.add_product(a, b);
        }
    }
    q
}

/// `G^H G` as an `n × n` row-major grid; entry `(u, v)` is
/// `Σ_r conj(G(r,u))·G(r,v)`.
pub fn gram<I: ExactInt>(d: &DesignMatrix<I>) -> Vec<QuadraticForm<I>> {
    let n = d.n();
    (0..n * n)
        .into_par_iter()
        .map(|idx| gram_entry(d, idx / n, idx % n))
        .collect()
}

pub(super) fn is_orthogonal<I: ExactInt>(d: &DesignMatrix<I>) -> bool {
    let n = d.n();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u..n).map(move |v| (u, v))).collect();
    // the lower triangle is the termwise conjugate of the upper one
    pairs.into_par_iter().all(|(u, v)| {
        let q = gram_entry(d, u, v);
        if u == v {
            q.is_energy(d.k())
        } else {
            q.is_zero()
        }
    })
}
