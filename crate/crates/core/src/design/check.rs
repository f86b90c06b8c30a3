use super::{CodAtom, DesignError, DesignMatrix, LinearEntry, Part, Scale};
use crate::exact::{ExactInt, RealSqrt2};
use num_traits::One;
use std::collections::HashMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Cod,
    CisCod,
    Lcod,
    NotOrthogonal,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Cod => "COD",
            Classification::CisCod => "CIS_COD",
            Classification::Lcod => "LCOD",
            Classification::NotOrthogonal => "NOT_ORTHOGONAL",
        })
    }
}

/// `±s·(x_aI + j x_bQ)` or its conjugate with `a ≠ b`, `s ∈ {1, 1/√2}`.
pub(crate) fn is_interleaved<I: ExactInt>(e: &LinearEntry<I>) -> bool {
    let [(ci, zi), (cq, zq)] = e.terms() else {
        return false;
    };
    let (ci, zi, cq, zq) = if ci.part == Part::I {
        (ci, zi, cq, zq)
    } else {
        (cq, zq, ci, zi)
    };
    if ci.part != Part::I || cq.part != Part::Q || ci.var == cq.var {
        return false;
    }
    if !zi.is_real() || !zq.is_imaginary() {
        return false;
    }
    let m = zi.re.abs();
    m == zq.im.abs() && (m.is_one() || m == RealSqrt2::frac_1_sqrt2())
}

pub fn classify<I: ExactInt>(d: &DesignMatrix<I>) -> Classification {
    if !d.is_orthogonal() {
        return Classification::NotOrthogonal;
    }
    let nonzero = || d.entries().iter().filter(|e| !e.is_zero());
    if nonzero().all(|e| e.as_atom().is_some_and(|a| a.scale == Scale::Unit)) {
        Classification::Cod
    } else if nonzero().all(|e| e.as_atom().is_some() || is_interleaved(e)) {
        Classification::CisCod
    } else {
        Classification::Lcod
    }
}

/// First failing condition of the local COD characterisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// A variable occurs `count ≠ 1` times in a column.
    ColumnCount {
        col: usize,
        var: usize,
        count: usize,
    },
    /// A variable occurs twice in a row.
    RowRepeat { row: usize, var: usize },
    /// `M(i,j), M(i,j'), M(i',j')` nonzero with `|M(i,j)| = |M(i',j')|`,
    /// but `M(i',j)` is zero or `|M(i',j)| ≠ |M(i,j')|`.
    Closure {
        rows: (usize, usize),
        cols: (usize, usize),
    },
    /// A proper 2×2 submatrix that is not a COD.
    ImproperBlock {
        rows: (usize, usize),
        cols: (usize, usize),
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ColumnCount { col, var, count } => {
                write!(f, "x{var} occurs {count} times in column {col}")
            }
            Violation::RowRepeat { row, var } => write!(f, "x{var} occurs twice in row {row}"),
            Violation::Closure { rows, cols } => {
                write!(f, "closure fails on rows {rows:?}, columns {cols:?}")
            }
            Violation::ImproperBlock { rows, cols } => {
                write!(
                    f,
                    "proper 2x2 block on rows {rows:?}, columns {cols:?} is not a COD"
                )
            }
        }
    }
}

pub(super) fn characterize<I: ExactInt>(
    d: &DesignMatrix<I>,
) -> Result<Option<Violation>, DesignError> {
    let atoms = d.atoms()?;
    if let Some(a) = atoms.iter().flatten().find(|a| a.scale != Scale::Unit) {
        let idx = atoms
            .iter()
            .position(|c| c.as_ref() == Some(a))
            .expect("present");
        return Err(DesignError::NonAtomic {
            row: idx / d.n(),
            col: idx % d.n(),
        });
    }
    let (p, n, k) = (d.p(), d.n(), d.k());
    let at = |r: usize, c: usize| -> Option<&CodAtom> { atoms[r * n + c].as_ref() };

    // (i) once per column, at most once per row
    let mut row_of: Vec<HashMap<usize, usize>> = vec![HashMap::new(); n];
    for (c, rows) in row_of.iter_mut().enumerate() {
        let mut count = vec![0usize; k];
        for r in 0..p {
            if let Some(a) = at(r, c) {
                count[a.var] += 1;
                rows.insert(a.var, r);
            }
        }
        if let Some((var, &count)) = count.iter().enumerate().find(|(_, &m)| m != 1) {
            return Ok(Some(Violation::ColumnCount { col: c, var, count }));
        }
    }
    for r in 0..p {
        let mut seen = vec![false; k];
        for c in 0..n {
            if let Some(a) = at(r, c) {
                if std::mem::replace(&mut seen[a.var], true) {
                    return Ok(Some(Violation::RowRepeat { row: r, var: a.var }));
                }
            }
        }
    }

    // (ii) closure, then (iii) every proper block is a 2×2 COD; with (i) in
    // force the proper blocks are exactly the closures found here
    for i in 0..p {
        for j in 0..n {
            let Some(x) = at(i, j) else { continue };
            for (jp, rows) in row_of.iter().enumerate() {
                if jp == j {
                    continue;
                }
                let Some(y) = at(i, jp) else { continue };
                let ip = rows[&x.var];
                let ok = at(ip, j).is_some_and(|w| w.var == y.var);
                let rows = (i.min(ip), i.max(ip));
                let cols = (j.min(jp), j.max(jp));
                if !ok {
                    return Ok(Some(Violation::Closure { rows, cols }));
                }
                let (xp, yp) = (at(ip, jp).expect("closure"), at(ip, j).expect("closure"));
                // [[α x^r, β y^s], [γ y^t, δ x^u]]: r ≠ u, s ≠ t, αβγδ = −1
                let good = x.tau != xp.tau && y.tau != yp.tau && x.mu * y.mu * xp.mu * yp.mu == -1;
                if !good {
                    return Ok(Some(Violation::ImproperBlock { rows, cols }));
                }
            }
        }
    }
    Ok(None)
}
