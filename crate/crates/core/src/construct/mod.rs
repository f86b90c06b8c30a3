//! Code families built from binary index sets.
//!
//! Every family is first laid out as an [`XorDesign`] of unit atoms. Row
//! pairing and the CIS substitution then act on that layout.

mod maximal;
mod square;
mod xor;

pub use maximal::{
    build_tilde, h_prime, h_prime_xor, hat_4m, hat_xor, select_tilde, tilde_xor,
    transpose_to_maximal,
};
pub use square::{
    square_cod, square_cod_maps, square_cod_recursive, truncated_square, MAX_SQUARE_ORDER,
};
pub use xor::{cis_substitute, PairingPlan, XorDesign};

use crate::design::{DesignError, DesignMatrix};
use crate::exact::ExactInt;
use crate::index::IndexError;
use thiserror::Error;

/// Largest label width for the non-square families.
pub const MAX_DESIGN_ORDER: u32 = 14;

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error("order {order} exceeds the supported maximum {max}")]
    TooLarge { order: u32, max: u32 },
    #[error("pairing mask {l} is outside 1..={max}")]
    MaskOutOfRange { l: u64, max: u64 },
    #[error("pairing plan does not fit the design: {0}")]
    PlanMismatch(String),
    #[error("design is not conjugation separated")]
    NotConjugationSeparated,
    #[error("invalid antenna count: {0}")]
    InvalidAntennas(String),
    #[error("internal construction error: {0}")]
    Internal(String),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Index(#[from] IndexError),
}

pub(crate) fn check_order(a: u32) -> Result<(), ConstructError> {
    match a {
        0 => Err(ConstructError::ZeroOrder),
        a if a > MAX_DESIGN_ORDER => Err(ConstructError::TooLarge {
            order: a,
            max: MAX_DESIGN_ORDER,
        }),
        _ => Ok(()),
    }
}

/// `M_a(l)`: rows of `H′_a` paired under the mask `l`.
pub fn pair_rows<I: ExactInt>(
    a: u32,
    l: u64,
) -> Result<(DesignMatrix<I>, PairingPlan), ConstructError> {
    h_prime_xor(a)?.pair_rows(l)
}

/// Atom layout that the `n`-antenna CIS code is derived from.
///
/// `n ≤ 4` uses the first `n` columns of the smallest square design,
/// `n = 4m ≥ 8` uses `Ĥ_n`, and every other `n` uses `H′_{n−1}`.
pub fn cis_base(n: usize) -> Result<XorDesign, ConstructError> {
    match n {
        0 | 1 => Err(ConstructError::InvalidAntennas(format!(
            "{n} (need at least 2)"
        ))),
        2..=4 => {
            let a = usize::BITS - (n - 1).leading_zeros();
            square::square_xor(a, n)
        }
        n if n % 4 == 0 => hat_xor((n / 4) as u32),
        n => {
            let a = u32::try_from(n - 1).map_err(|_| ConstructError::TooLarge {
                order: u32::MAX,
                max: MAX_DESIGN_ORDER,
            })?;
            h_prime_xor(a)
        }
    }
}

/// The CIS-COD `L_n` for mask `l`: [`cis_base`], rows paired under `l`,
/// then the CIS substitution.
pub fn cis_code<I: ExactInt>(n: usize, l: u64) -> Result<DesignMatrix<I>, ConstructError> {
    let (m, plan) = cis_base(n)?.pair_rows::<I>(l)?;
    cis_substitute(&m, &plan)
}
