//! Symbolic design matrices over the `2k` real symbol coordinates.
//!
//! Every entry is a [`LinearEntry`]: a complex-linear combination of the
//! in-phase and quadrature coordinates `x_{iI}`, `x_{iQ}`. Plain COD entries
//! (`±x_c`, `±x_c^*`) are viewed through [`CodAtom`].

mod check;
mod gram;

pub use check::{classify, Classification, Violation};
pub use gram::{gram, QuadraticForm};

use crate::exact::{ComplexSqrt2, ExactInt, RealSqrt2};
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Part {
    I,
    Q,
}

/// One real coordinate `x_{var,part}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coord {
    pub var: usize,
    pub part: Part,
}

impl Coord {
    pub fn i(var: usize) -> Self {
        Self { var, part: Part::I }
    }

    pub fn q(var: usize) -> Self {
        Self { var, part: Part::Q }
    }

    /// Position in the flat `[x_0I, x_0Q, x_1I, …]` layout.
    pub fn index(&self) -> usize {
        2 * self.var + usize::from(self.part == Part::Q)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}{:?}", self.var, self.part)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scale {
    Unit,
    InvSqrt2,
}

impl Scale {
    pub fn value<I: ExactInt>(self) -> RealSqrt2<I> {
        match self {
            Scale::Unit => RealSqrt2::one(),
            Scale::InvSqrt2 => RealSqrt2::frac_1_sqrt2(),
        }
    }

    fn of<I: ExactInt>(v: &RealSqrt2<I>) -> Option<Self> {
        if v.is_one() {
            Some(Scale::Unit)
        } else if *v == RealSqrt2::frac_1_sqrt2() {
            Some(Scale::InvSqrt2)
        } else {
            None
        }
    }
}

/// Single-variable entry `scale · μ · x_var` (τ = 1) or `scale · μ · x_var^*`
/// (τ = −1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodAtom {
    pub var: usize,
    pub mu: i8,
    pub tau: i8,
    pub scale: Scale,
}

impl CodAtom {
    /// Panics unless `mu` and `tau` are `±1`.
    pub fn new(var: usize, mu: i8, tau: i8) -> Self {
        assert!(mu == 1 || mu == -1, "μ must be ±1, got {mu}");
        assert!(tau == 1 || tau == -1, "τ must be ±1, got {tau}");
        Self {
            var,
            mu,
            tau,
            scale: Scale::Unit,
        }
    }

    pub fn scaled(self, scale: Scale) -> Self {
        Self { scale, ..self }
    }

    pub fn negated(self) -> Self {
        Self {
            mu: -self.mu,
            ..self
        }
    }

    pub fn conjugated(self) -> Self {
        Self {
            tau: -self.tau,
            ..self
        }
    }

    pub fn to_entry<I: ExactInt>(&self) -> LinearEntry<I> {
        LinearEntry::atom(self)
    }
}

/// Sorted by coordinate, no zero coefficients, one term per coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearEntry<I: ExactInt> {
    terms: Vec<(Coord, ComplexSqrt2<I>)>,
}

impl<I: ExactInt> Default for LinearEntry<I> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<I: ExactInt> LinearEntry<I> {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    /// Merges repeated coordinates and drops zero coefficients.
    pub fn from_terms(terms: impl IntoIterator<Item = (Coord, ComplexSqrt2<I>)>) -> Self {
        let mut v: Vec<(Coord, ComplexSqrt2<I>)> = terms.into_iter().collect();
        v.sort_by_key(|(c, _)| *c);
        let mut out: Vec<(Coord, ComplexSqrt2<I>)> = Vec::with_capacity(v.len());
        for (c, z) in v {
            match out.last_mut() {
                Some((lc, lz)) if *lc == c => *lz += &z,
                _ => out.push((c, z)),
            }
        }
        out.retain(|(_, z)| !z.is_zero());
        Self { terms: out }
    }

    /// `μ·s·x_c = μs·x_cI + jμs·x_cQ`, conjugate flips the `Q` sign.
    pub fn atom(a: &CodAtom) -> Self {
        let s = a.scale.value::<I>();
        let re = if a.mu == 1 { s } else { -s };
        let q = if a.tau == 1 { re.clone() } else { -&re };
        Self {
            terms: vec![
                (Coord::i(a.var), ComplexSqrt2::real(re)),
                (Coord::q(a.var), ComplexSqrt2::imag(q)),
            ],
        }
    }

    pub fn terms(&self) -> &[(Coord, ComplexSqrt2<I>)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, c: Coord) -> Option<&ComplexSqrt2<I>> {
        self.terms
            .binary_search_by_key(&c, |(k, _)| *k)
            .ok()
            .map(|i| &self.terms[i].1)
    }

    /// Distinct variable indices, ascending.
    pub fn vars(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.iter().map(|(c, _)| c.var).collect();
        v.dedup();
        v
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(other.terms.iter()).cloned())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(c, z)| (*c, -z)).collect(),
        }
    }

    pub fn scale(&self, s: &ComplexSqrt2<I>) -> Self {
        Self::from_terms(self.terms.iter().map(|(c, z)| (*c, z * s)))
    }

    pub fn scale_real(&self, s: &RealSqrt2<I>) -> Self {
        Self::from_terms(self.terms.iter().map(|(c, z)| (*c, z.scale(s))))
    }

    /// Complex conjugate of the entry; coordinates are real.
    pub fn conj(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(c, z)| (*c, z.conj())).collect(),
        }
    }

    /// Replaces every coordinate by a real-linear combination of coordinates.
    pub fn substitute(&self, map: impl Fn(Coord) -> Vec<(Coord, RealSqrt2<I>)>) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .flat_map(|(c, z)| map(*c).into_iter().map(move |(d, s)| (d, z.scale(&s)))),
        )
    }

    /// The atom view, if the entry is `±s·x_c` or `±s·x_c^*` with
    /// `s ∈ {1, 1/√2}`.
    pub fn as_atom(&self) -> Option<CodAtom> {
        let [(ci, zi), (cq, zq)] = self.terms.as_slice() else {
            return None;
        };
        if ci.var != cq.var || ci.part != Part::I || cq.part != Part::Q {
            return None;
        }
        if !zi.is_real() || !zq.is_imaginary() {
            return None;
        }
        let scale = Scale::of(&zi.re.abs())?;
        let mu = if zi.re > RealSqrt2::zero() { 1 } else { -1 };
        let tau = if zq.im == zi.re {
            1
        } else if zq.im == -&zi.re {
            -1
        } else {
            return None;
        };
        Some(CodAtom {
            var: ci.var,
            mu,
            tau,
            scale,
        })
    }

    pub fn eval_f64(&self, coords: &[f64]) -> num_complex::Complex<f64> {
        self.terms
            .iter()
            .map(|(c, z)| z.to_complex::<f64>() * coords[c.index()])
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("expected {expected} entries for a {p}x{n} design, got {got}")]
    Shape {
        p: usize,
        n: usize,
        expected: usize,
        got: usize,
    },
    #[error("entry ({row}, {col}) references x{var} but the design has k = {k}")]
    VarOutOfRange {
        row: usize,
        col: usize,
        var: usize,
        k: usize,
    },
    #[error("entry ({row}, {col}) is not a single ±x or ±x* atom")]
    NonAtomic { row: usize, col: usize },
}

/// `p × n` grid of entries in `k` complex variables, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignMatrix<I: ExactInt> {
    p: usize,
    n: usize,
    k: usize,
    entries: Vec<LinearEntry<I>>,
}

impl<I: ExactInt> DesignMatrix<I> {
    pub fn new(
        p: usize,
        n: usize,
        k: usize,
        entries: Vec<LinearEntry<I>>,
    ) -> Result<Self, DesignError> {
        if entries.len() != p * n {
            return Err(DesignError::Shape {
                p,
                n,
                expected: p * n,
                got: entries.len(),
            });
        }
        for (idx, e) in entries.iter().enumerate() {
            if let Some(&var) = e.vars().iter().find(|&&v| v >= k) {
                return Err(DesignError::VarOutOfRange {
                    row: idx / n,
                    col: idx % n,
                    var,
                    k,
                });
            }
        }
        Ok(Self { p, n, k, entries })
    }

    pub fn from_atoms(
        p: usize,
        n: usize,
        k: usize,
        cells: &[Option<CodAtom>],
    ) -> Result<Self, DesignError> {
        Self::new(
            p,
            n,
            k,
            cells
                .iter()
                .map(|c| c.map_or_else(LinearEntry::zero, |a| a.to_entry()))
                .collect(),
        )
    }

    /// Rows (time slots).
    pub fn p(&self) -> usize {
        self.p
    }

    /// Columns (antennas).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Complex variables.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn size(&self) -> [usize; 3] {
        [self.p, self.n, self.k]
    }

    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.k as u64, self.p as u64)
    }

    pub fn entry(&self, row: usize, col: usize) -> &LinearEntry<I> {
        &self.entries[row * self.n + col]
    }

    pub fn entries(&self) -> &[LinearEntry<I>] {
        &self.entries
    }

    pub fn row(&self, row: usize) -> &[LinearEntry<I>] {
        &self.entries[row * self.n..(row + 1) * self.n]
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = &LinearEntry<I>> + '_ {
        (0..self.p).map(move |r| self.entry(r, col))
    }

    pub fn zero_count(&self) -> usize {
        self.entries.iter().filter(|e| e.is_zero()).count()
    }

    /// Atom view of every cell; fails on the first entry that is neither zero
    /// nor an atom.
    pub fn atoms(&self) -> Result<Vec<Option<CodAtom>>, DesignError> {
        self.entries
            .iter()
            .enumerate()
            .map(|(idx, e)| {
                if e.is_zero() {
                    Ok(None)
                } else {
                    e.as_atom().map(Some).ok_or(DesignError::NonAtomic {
                        row: idx / self.n,
                        col: idx % self.n,
                    })
                }
            })
            .collect()
    }

    pub fn map_entries(&self, f: impl Fn(usize, usize, &LinearEntry<I>) -> LinearEntry<I>) -> Self {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(idx, e)| f(idx / self.n, idx % self.n, e))
            .collect();
        Self {
            entries,
            ..self.clone()
        }
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let entries = (0..self.p)
            .flat_map(|r| cols.iter().map(move |&c| self.entry(r, c).clone()))
            .collect();
        Self {
            p: self.p,
            n: cols.len(),
            k: self.k,
            entries,
        }
    }

    /// Within each row, every nonzero atom has the same τ.
    pub fn is_conjugation_separated(&self) -> Result<bool, DesignError> {
        let atoms = self.atoms()?;
        Ok(atoms.chunks(self.n).all(|row| {
            let taus: BTreeSet<i8> = row.iter().flatten().map(|a| a.tau).collect();
            taus.len() <= 1
        }))
    }

    /// `G^H G = (Σ_i x_iI² + x_iQ²)·I`, decided exactly.
    pub fn is_orthogonal(&self) -> bool {
        gram::is_orthogonal(self)
    }

    pub fn classify(&self) -> Classification {
        classify(self)
    }

    /// Local characterisation of atom-entry CODs: `Ok(None)` when
    /// every condition holds, otherwise the first violation found.
    pub fn check_cod_characterization(&self) -> Result<Option<Violation>, DesignError> {
        check::characterize(self)
    }
}
