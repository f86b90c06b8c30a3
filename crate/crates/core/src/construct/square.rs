use super::{ConstructError, XorDesign};
use crate::design::{CodAtom, DesignMatrix};
use crate::exact::ExactInt;
use crate::index::{twos_complement, weight};

/// Dense `2^a × 2^a` grids stop here.
pub const MAX_SQUARE_ORDER: u32 = 10;

fn check(a: u32) -> Result<(), ConstructError> {
    if a == 0 {
        Err(ConstructError::ZeroOrder)
    } else if a > MAX_SQUARE_ORDER {
        Err(ConstructError::TooLarge {
            order: a,
            max: MAX_SQUARE_ORDER,
        })
    } else {
        Ok(())
    }
}

/// `G_a` by the block recursion
/// `G_a = [[G_{a−1}, −x_a^* I], [x_a I, G_{a−1}^H]]`, row-major.
pub fn square_cod_recursive(a: u32) -> Result<Vec<Option<CodAtom>>, ConstructError> {
    check(a)?;
    let mut g = vec![
        Some(CodAtom::new(0, 1, 1)),
        Some(CodAtom::new(1, -1, -1)),
        Some(CodAtom::new(1, 1, 1)),
        Some(CodAtom::new(0, 1, -1)),
    ];
    for b in 2..=a {
        let h = 1usize << (b - 1);
        let n = 2 * h;
        let mut next = vec![None; n * n];
        for i in 0..h {
            for j in 0..h {
                next[i * n + j] = g[i * h + j];
                // conjugate transpose keeps μ and flips τ
                next[(i + h) * n + j + h] = g[j * h + i].map(CodAtom::conjugated);
            }
            next[i * n + i + h] = Some(CodAtom::new(b as usize, -1, -1));
            next[(i + h) * n + i] = Some(CodAtom::new(b as usize, 1, 1));
        }
        g = next;
    }
    Ok(g)
}

/// Closed-form cell of `G_a`: zero unless `i ⊕ j ∈ {0, 1, 2, …, 2^{a−1}}`.
pub fn square_cod_maps(i: u64, j: u64, a: u32) -> Option<CodAtom> {
    let x = i ^ j;
    if x == 0 {
        let tau = if weight(j).is_multiple_of(2) { 1 } else { -1 };
        return Some(CodAtom::new(0, 1, tau));
    }
    if !x.is_power_of_two() || x >= 1u64 << a {
        return None;
    }
    let l = x.trailing_zeros() + 1;
    let tau = if (j >> (l - 1)) & 1 == 0 { 1 } else { -1 };
    // the bar is the two's complement, i.e. every bit from l−1 upward
    let mu = if weight(j & twos_complement(x, a)).is_multiple_of(2) {
        1
    } else {
        -1
    };
    Some(CodAtom::new(l as usize, mu, tau))
}

/// Labels of `P_a` by variable: `x_0 ↔ 0`, `x_l ↔ 2^{l−1}`.
pub(crate) fn p_labels(a: u32) -> Vec<u64> {
    std::iter::once(0)
        .chain((0..a).map(|s| 1u64 << s))
        .collect()
}

/// `G_a` as an XOR-structured design: row label `i`, column mask `j`.
pub(crate) fn square_xor(a: u32, cols: usize) -> Result<XorDesign, ConstructError> {
    check(a)?;
    let rows: Vec<u64> = (0..1u64 << a).collect();
    let masks: Vec<u64> = (0..cols as u64).collect();
    XorDesign::build(a, rows, masks, p_labels(a), |r, c| square_cod_maps(r, c, a))
}

pub fn square_cod<I: ExactInt>(a: u32) -> Result<DesignMatrix<I>, ConstructError> {
    let cells = square_cod_recursive(a)?;
    let n = 1usize << a;
    Ok(DesignMatrix::from_atoms(n, n, a as usize + 1, &cells)?)
}

/// The first `cols` columns of `G_a`, all-zero rows removed.
pub fn truncated_square<I: ExactInt>(
    a: u32,
    cols: usize,
) -> Result<DesignMatrix<I>, ConstructError> {
    square_xor(a, cols)?.to_design()
}
