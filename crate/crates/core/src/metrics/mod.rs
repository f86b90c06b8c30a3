//! Rate, zero counting and PAPR.
//!
//! Zero fractions come in two flavours: counted on a built matrix, and the
//! closed form for paired designs `M_n(l)`. The counted value is the ground
//! truth and the closed form is checked against it.

mod papr;

pub use papr::{
    average_energy, codeword_energy, papr, papr_with, peak_power, Averaging, Constellation,
};

use crate::construct::{pair_rows, ConstructError};
use crate::design::DesignMatrix;
use crate::exact::{ExactInt, RealSqrt2};
use crate::index::{binomial, half_up, weight};
use num_bigint::BigInt;
use num_rational::Ratio;
use rayon::prelude::*;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("mask {l} is outside 1..2^{n}")]
    MaskOutOfRange { n: u32, l: u64 },
    #[error("weight {w} is outside 1..={n}")]
    WeightOutOfRange { n: u32, w: u32 },
    #[error("column {0} is identically zero; its PAPR is undefined")]
    ZeroColumn(usize),
    #[error("entry ({row}, {col}) references {vars} variables; at most 2 can be enumerated")]
    TooManyVariables { row: usize, col: usize, vars: usize },
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

pub type Fraction = Ratio<BigInt>;

fn frac(n: i64, d: i64) -> Fraction {
    Ratio::new(BigInt::from(n), BigInt::from(d))
}

/// `C(n, r)`, zero outside `0 ≤ r ≤ n`.
fn choose(n: i64, r: i64) -> BigInt {
    if n < 0 || r < 0 || r > n {
        BigInt::from(0)
    } else {
        BigInt::from(binomial(n as u64, r as u64))
    }
}

/// Zero entries over `p·n`.
pub fn zero_fraction_counted<I: ExactInt>(d: &DesignMatrix<I>) -> Fraction {
    Ratio::new(BigInt::from(d.zero_count()), BigInt::from(d.p() * d.n()))
}

/// Closed-form rate of `H′_n`, `k_{n+1}/p_{n+1}`.
pub fn rate_formula(n: u32) -> Fraction {
    let n = n as i64;
    if n % 2 == 0 {
        frac(1, 2) + frac(1, n + 2)
    } else {
        frac(1, 2) + frac(1, n + 1)
    }
}

/// Closed-form zero fraction of `M_n(l)` for any `l` of Hamming weight `w`.
pub fn zero_fraction_for_weight(n: u32, w: u32) -> Result<Fraction, MetricsError> {
    if n == 0 || w == 0 || w > n {
        return Err(MetricsError::WeightOutOfRange { n, w });
    }
    let (n, w) = (n as i64, w as i64);
    let c = half_up(w as u32) as i64;
    let c1 = half_up(w as u32 + 1) as i64;
    if n % 2 == 0 {
        let h = n / 2;
        let a = choose(w, c1) * choose(n - w + 1, h - c)
            + w * choose(2 * c - 1, c) * choose(n - 2 * c + 2, h - c + 2)
            + (n - w) * choose(2 * c, c + 1) * choose(n - 2 * c + 1, h - c);
        let denom = Ratio::new(BigInt::from((n + 1) * (n + 2)), BigInt::from(n + 4))
            * Ratio::from_integer(choose(n + 2, h + 1));
        Ok(frac(1, 2) - frac(1, n + 2) - Ratio::from_integer(a) / denom)
    } else if w == n {
        Ok(frac(1, 2) - frac(1, n + 1))
    } else {
        let h = (n + 1) / 2;
        let b = 2 * choose(w, c1) * choose(n - w, h - c1 + 1)
            + w * choose(2 * c, c) * choose(n - 2 * c + 1, h - c + 1)
            + (n - w) * choose(2 * c, c + 1) * choose(n - 2 * c + 1, h - c);
        let denom = Ratio::new(BigInt::from(2 * (n + 1) * (n + 1)), BigInt::from(n + 3))
            * Ratio::from_integer(choose(n + 1, h));
        Ok(frac(1, 2) - frac(1, n + 1) - Ratio::from_integer(b) / denom)
    }
}

fn check_mask(n: u32, l: u64) -> Result<(), MetricsError> {
    if n == 0 || n >= 64 || l == 0 || l >= 1u64 << n {
        return Err(MetricsError::MaskOutOfRange { n, l });
    }
    Ok(())
}

/// Closed-form zero fraction of `M_n(l)`.
pub fn zero_fraction_formula(n: u32, l: u64) -> Result<Fraction, MetricsError> {
    check_mask(n, l)?;
    zero_fraction_for_weight(n, weight(l))
}

/// Variables that occupy two single-variable entries of a column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DuplicateCounts {
    pub per_column: Vec<usize>,
    /// Mean of `per_column`.
    pub average: Fraction,
}

pub fn duplicate_counts_of<I: ExactInt>(d: &DesignMatrix<I>) -> DuplicateCounts {
    let per_column: Vec<usize> = (0..d.n())
        .map(|c| {
            let mut seen: HashMap<usize, usize> = HashMap::new();
            for e in d.column(c) {
                if let [v] = e.vars()[..] {
                    *seen.entry(v).or_default() += 1;
                }
            }
            seen.values().filter(|&&m| m == 2).count()
        })
        .collect();
    let total: usize = per_column.iter().sum();
    let average = Ratio::new(BigInt::from(total), BigInt::from(d.n().max(1)));
    DuplicateCounts {
        per_column,
        average,
    }
}

/// Duplicate counts of `M_n(l)`, read off the built matrix.
pub fn duplicate_counts(n: u32, l: u64) -> Result<DuplicateCounts, MetricsError> {
    check_mask(n, l)?;
    let (m, _) = pair_rows::<BigInt>(n, l)?;
    Ok(duplicate_counts_of(&m))
}

/// Zero fraction of `M_n(l)` counted on the built matrix.
pub fn paired_zero_fraction(n: u32, l: u64) -> Result<Fraction, MetricsError> {
    check_mask(n, l)?;
    let (m, _) = pair_rows::<BigInt>(n, l)?;
    Ok(zero_fraction_counted(&m))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table1Row {
    pub n: u32,
    pub w: u32,
    pub counted: Fraction,
    pub formula: Fraction,
}

impl Table1Row {
    pub fn matches(&self) -> bool {
        self.counted == self.formula
    }
}

/// One row per `(n, w)`, counted on `M_n(2^w − 1)`.
pub fn table1(n_min: u32, n_max: u32) -> Result<Vec<Table1Row>, MetricsError> {
    let cells: Vec<(u32, u32)> = (n_min..=n_max)
        .flat_map(|n| (1..=n).map(move |w| (n, w)))
        .collect();
    cells
        .into_par_iter()
        .map(|(n, w)| {
            let l = (1u64 << w) - 1;
            Ok(Table1Row {
                n,
                w,
                counted: paired_zero_fraction(n, l)?,
                formula: zero_fraction_for_weight(n, w)?,
            })
        })
        .collect()
}

/// Rounds to 4 decimals, half away from zero.
pub fn to_decimal4(f: &Fraction) -> String {
    let scaled = f * BigInt::from(10_000);
    let r = scaled.round().to_integer();
    let sign = if r < BigInt::from(0) { "-" } else { "" };
    let r = if r < BigInt::from(0) { -r } else { r };
    format!("{sign}{}.{:04}", &r / 10_000, &r % 10_000)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignMetrics<I: ExactInt> {
    pub rate: Ratio<u64>,
    pub delay: usize,
    pub zero_fraction: Fraction,
    pub per_antenna_papr: Option<Vec<RealSqrt2<I>>>,
    pub duplicate_counts: Vec<usize>,
}

impl<I: ExactInt> DesignMetrics<I> {
    pub fn compute(d: &DesignMatrix<I>, c: Option<&Constellation>) -> Result<Self, MetricsError> {
        let per_antenna_papr = c.map(|c| papr(d, c)).transpose()?;
        Ok(Self {
            rate: d.rate(),
            delay: d.p(),
            zero_fraction: zero_fraction_counted(d),
            per_antenna_papr,
            duplicate_counts: duplicate_counts_of(d).per_column,
        })
    }
}
