//! Bitmask combinatorics over `Z_{2^a}`: Hamming weights, the row set `R_a`
//! and column set `C_a`, neighbour rows of the square design, the size
//! formulas `k_t`/`p_t`, and the ascending enumerations `f` and `g`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::HashMap;
use thiserror::Error;

/// Index sets are enumerated explicitly, so the recursion order is capped well
/// below the 64-bit limit.
pub const MAX_ORDER: u32 = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndexError {
    #[error("recursion order must be at least 1, got {0}")]
    ZeroOrder(u32),
    #[error("recursion order {0} exceeds the supported maximum {MAX_ORDER}")]
    OrderTooLarge(u32),
    #[error("row index {i} is outside Z_(2^{a})")]
    RowOutOfRange { i: u64, a: u32 },
    #[error("antenna count t must be at least 2, got {0}")]
    TooFewAntennas(u64),
    #[error("2_+^x is only defined for x >= -1, got {0}")]
    NegativeExponent(i64),
}

/// Hamming weight `‖x‖`.
pub fn weight(x: u64) -> u32 {
    x.count_ones()
}

/// `2_+^x`: `2^x` for `x ≥ 0` and `0` for `x = −1`.
pub fn two_plus(x: i64) -> Result<u64, IndexError> {
    match x {
        -1 => Ok(0),
        0..=63 => Ok(1u64 << x),
        _ => Err(IndexError::NegativeExponent(x)),
    }
}

/// Column mask `2_+^{j-1}` for column `j` of the maximal-rate designs.
pub fn column_mask(j: usize) -> u64 {
    if j == 0 {
        0
    } else {
        1u64 << (j - 1)
    }
}

/// Two's complement of `x` inside `F_2^a`, i.e. `2^a − x mod 2^a`.
pub fn twos_complement(x: u64, a: u32) -> u64 {
    x.wrapping_neg() & low_mask(a)
}

/// All-ones word of width `a`.
pub fn low_mask(a: u32) -> u64 {
    if a >= 64 {
        u64::MAX
    } else {
        (1u64 << a) - 1
    }
}

/// `⌈a/2⌉`.
pub fn half_up(a: u32) -> u32 {
    a.div_ceil(2)
}

/// All `x < 2^a` with `‖x‖ = w`, ascending. Empty when `w > a`.
pub fn words_of_weight(a: u32, w: u32) -> Vec<u64> {
    if w > a {
        return Vec::new();
    }
    if w == 0 {
        return vec![0];
    }
    let limit = 1u64 << a;
    let mut out = Vec::new();
    let mut x: u64 = (1u64 << w) - 1;
    while x < limit {
        out.push(x);
        // Gosper's hack: next word with the same popcount
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

/// Words whose weight lies in `weights`; weight classes outside `0..=a`
/// contribute nothing.
fn words_with_weights(a: u32, weights: impl IntoIterator<Item = i64>) -> Vec<u64> {
    let mut out: Vec<u64> = weights
        .into_iter()
        .filter(|&w| (0..=a as i64).contains(&w))
        .flat_map(|w| words_of_weight(a, w as u32))
        .collect();
    out.sort_unstable();
    out
}

fn check_order(a: u32) -> Result<(), IndexError> {
    match a {
        0 => Err(IndexError::ZeroOrder(a)),
        a if a > MAX_ORDER => Err(IndexError::OrderTooLarge(a)),
        _ => Ok(()),
    }
}

/// `R_a`: weights `⌈a/2⌉−2 ..= ⌈a/2⌉+1`, ascending.
pub fn row_set(a: u32) -> Result<Vec<u64>, IndexError> {
    check_order(a)?;
    let c = half_up(a) as i64;
    Ok(words_with_weights(a, c - 2..=c + 1))
}

/// `C_a`: weights `⌈a/2⌉−1` and `⌈a/2⌉`, ascending.
pub fn column_set(a: u32) -> Result<Vec<u64>, IndexError> {
    check_order(a)?;
    let c = half_up(a) as i64;
    Ok(words_with_weights(a, c - 1..=c))
}

/// `N_i^{(a)} = {i} ∪ {i ⊕ 2^j : 0 ≤ j < a}`, in that order.
pub fn neighbor_rows(i: u64, a: u32) -> Result<Vec<u64>, IndexError> {
    check_order(a)?;
    if i > low_mask(a) {
        return Err(IndexError::RowOutOfRange { i, a });
    }
    Ok(std::iter::once(i)
        .chain((0..a).map(|j| i ^ (1u64 << j)))
        .collect())
}

/// Number of complex variables `k_t` and delay `p_t` of a maximal-rate
/// design for `t` antennas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizePair {
    pub k: BigUint,
    pub p: BigUint,
}

impl SizePair {
    pub fn k_usize(&self) -> usize {
        self.k.to_usize().expect("k fits in usize")
    }

    pub fn p_usize(&self) -> usize {
        self.p.to_usize().expect("p fits in usize")
    }
}

pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `(k_t, p_t)`: for `t = 2l−1`, `k = C(2l−1, l)` and `p = l/(l+1)·C(2l, l)`;
/// for `t = 2l` both double.
pub fn size_pair(t: u64) -> Result<SizePair, IndexError> {
    if t < 2 {
        return Err(IndexError::TooFewAntennas(t));
    }
    let l = t.div_ceil(2);
    let k = binomial(2 * l - 1, l);
    let p = BigUint::from(l) * binomial(2 * l, l) / BigUint::from(l + 1);
    Ok(if t % 2 == 1 {
        SizePair { k, p }
    } else {
        SizePair {
            k: k * 2u32,
            p: p * 2u32,
        }
    })
}

/// `R_a`, `C_a` and the bijections `f: Z_{p_{a+1}} → R_a`,
/// `g: Z_{k_{a+1}} → C_a` with their inverses.
#[derive(Debug, Clone)]
pub struct IndexMaps {
    a: u32,
    r_set: Vec<u64>,
    c_set: Vec<u64>,
    f_inv: HashMap<u64, usize>,
    g_inv: HashMap<u64, usize>,
}

impl IndexMaps {
    pub fn build(a: u32) -> Result<Self, IndexError> {
        let r_set = row_set(a)?;
        let c_set = column_set(a)?;
        let f_inv = r_set.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let g_inv = c_set.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        Ok(Self {
            a,
            r_set,
            c_set,
            f_inv,
            g_inv,
        })
    }

    pub fn order(&self) -> u32 {
        self.a
    }

    pub fn r_set(&self) -> &[u64] {
        &self.r_set
    }

    pub fn c_set(&self) -> &[u64] {
        &self.c_set
    }

    /// `p_{a+1} = |R_a|`.
    pub fn rows(&self) -> usize {
        self.r_set.len()
    }

    /// `k_{a+1} = |C_a|`.
    pub fn vars(&self) -> usize {
        self.c_set.len()
    }

    pub fn f(&self, i: usize) -> u64 {
        self.r_set[i]
    }

    pub fn g(&self, j: usize) -> u64 {
        self.c_set[j]
    }

    pub fn f_inv(&self, r: u64) -> Option<usize> {
        self.f_inv.get(&r).copied()
    }

    pub fn g_inv(&self, c: u64) -> Option<usize> {
        self.g_inv.get(&c).copied()
    }

    pub fn in_c(&self, x: u64) -> bool {
        self.g_inv.contains_key(&x)
    }

    pub fn in_r(&self, x: u64) -> bool {
        self.f_inv.contains_key(&x)
    }
}
