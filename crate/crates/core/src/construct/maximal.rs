use super::square::{p_labels, square_cod_maps};
use super::{check_order, ConstructError, XorDesign};
use crate::design::{CodAtom, DesignError, DesignMatrix};
use crate::exact::ExactInt;
use crate::index::{column_mask, half_up, low_mask, twos_complement, weight, IndexMaps};

fn parity(x: u32) -> i8 {
    if x.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Columns `C_a` and rows `R_a` of `G_a`, before any conjugation swap.
pub fn select_tilde(a: u32) -> Result<XorDesign, ConstructError> {
    check_order(a)?;
    let maps = IndexMaps::build(a)?;
    XorDesign::build(
        a,
        maps.r_set().to_vec(),
        maps.c_set().to_vec(),
        p_labels(a),
        |r, c| square_cod_maps(r, c, a),
    )
}

/// `H̃_a`: the selection, with `x_0 ↔ x_0^*` when `a mod 4 ∈ {1, 2}`.
pub fn tilde_xor(a: u32) -> Result<XorDesign, ConstructError> {
    let sel = select_tilde(a)?;
    Ok(if matches!(a % 4, 1 | 2) {
        sel.map_cells(|c| if c.var == 0 { c.conjugated() } else { c })
    } else {
        sel
    })
}

pub fn build_tilde<I: ExactInt>(a: u32) -> Result<DesignMatrix<I>, ConstructError> {
    tilde_xor(a)?.to_design()
}

/// `H(i, j) = ±y_l^{(*)}` wherever `H̃(i, l) = ±x_j^{(*)}`, keeping μ and τ.
pub fn transpose_to_maximal<I: ExactInt>(
    tilde: &DesignMatrix<I>,
) -> Result<DesignMatrix<I>, ConstructError> {
    if !tilde.is_conjugation_separated()? {
        return Err(ConstructError::NotConjugationSeparated);
    }
    let atoms = tilde.atoms()?;
    let (p, n, k) = (tilde.p(), tilde.n(), tilde.k());
    let mut cells: Vec<Option<CodAtom>> = vec![None; p * k];
    for i in 0..p {
        for l in 0..n {
            if let Some(a) = atoms[i * n + l] {
                let slot = &mut cells[i * k + a.var];
                if slot.is_some() {
                    return Err(DesignError::NonAtomic { row: i, col: l }.into());
                }
                *slot = Some(CodAtom { var: l, ..a });
            }
        }
    }
    Ok(DesignMatrix::from_atoms(p, k, n, &cells)?)
}

/// Cell `(f(i), j)` of `H′_a`: zero unless `f(i) ⊕ 2_+^{j−1} ∈ C_a`.
fn h_prime_atom(maps: &IndexMaps, fi: u64, j: usize) -> Option<CodAtom> {
    let a = maps.order();
    let mask = column_mask(j);
    let var = maps.g_inv(fi ^ mask)?;
    Some(if j == 0 {
        CodAtom::new(var, 1, parity(weight(fi) + half_up(a)))
    } else {
        let tau = parity(1 + weight(fi & mask));
        let mu = parity(1 + weight(fi & twos_complement(mask, a)));
        CodAtom::new(var, mu, tau)
    })
}

pub fn h_prime_xor(a: u32) -> Result<XorDesign, ConstructError> {
    check_order(a)?;
    let maps = IndexMaps::build(a)?;
    let masks: Vec<u64> = (0..=a as usize).map(column_mask).collect();
    XorDesign::build(
        a,
        maps.r_set().to_vec(),
        masks,
        maps.c_set().to_vec(),
        |r, c| {
            let j = if c == 0 {
                0
            } else {
                c.trailing_zeros() as usize + 1
            };
            h_prime_atom(&maps, r, j)
        },
    )
}

/// `H′_a` of size `[p_{a+1}, a+1, k_{a+1}]`.
pub fn h_prime<I: ExactInt>(a: u32) -> Result<DesignMatrix<I>, ConstructError> {
    h_prime_xor(a)?.to_design()
}

/// `Ĥ_{4m}`: `H′_{4m−2}` plus a last column with mask `𝟏`.
pub fn hat_xor(m: u32) -> Result<XorDesign, ConstructError> {
    if m == 0 {
        return Err(ConstructError::ZeroOrder);
    }
    let a = 4 * m - 2;
    check_order(a)?;
    let maps = IndexMaps::build(a)?;
    let ones = low_mask(a);
    // bits 0, 2, …, 4m−4
    let hat_one: u64 = (0..a).step_by(2).map(|s| 1u64 << s).sum();
    let mut masks: Vec<u64> = (0..=a as usize).map(column_mask).collect();
    masks.push(ones);
    XorDesign::build(
        a,
        maps.r_set().to_vec(),
        masks,
        maps.c_set().to_vec(),
        |r, c| {
            if c == ones {
                let var = maps.g_inv(r ^ ones)?;
                Some(CodAtom::new(var, parity(1 + weight(r & hat_one)), -1))
            } else {
                let j = if c == 0 {
                    0
                } else {
                    c.trailing_zeros() as usize + 1
                };
                h_prime_atom(&maps, r, j)
            }
        },
    )
}

pub fn hat_4m<I: ExactInt>(m: u32) -> Result<DesignMatrix<I>, ConstructError> {
    hat_xor(m)?.to_design()
}
