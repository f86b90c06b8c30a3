use super::ConstructError;
use crate::design::{CodAtom, Coord, DesignMatrix, LinearEntry};
use crate::exact::{ExactInt, RealSqrt2};
use std::collections::HashMap;

/// Atom design whose cell `(r, c)` holds the variable labelled
/// `row_label(r) ⊕ col_mask(c)` whenever that label exists, and zero
/// otherwise. Every family here has this shape.
#[derive(Debug, Clone)]
pub struct XorDesign {
    order: u32,
    row_labels: Vec<u64>,
    col_masks: Vec<u64>,
    var_labels: Vec<u64>,
    var_of: HashMap<u64, usize>,
    cells: Vec<Option<CodAtom>>,
}

impl XorDesign {
    /// Fills cells from `atom(row_label, col_mask)`, drops all-zero rows and
    /// checks the XOR invariant on every cell.
    pub(crate) fn build(
        order: u32,
        row_labels: Vec<u64>,
        col_masks: Vec<u64>,
        var_labels: Vec<u64>,
        atom: impl Fn(u64, u64) -> Option<CodAtom>,
    ) -> Result<Self, ConstructError> {
        let var_of: HashMap<u64, usize> = var_labels
            .iter()
            .enumerate()
            .map(|(v, &l)| (l, v))
            .collect();
        let n = col_masks.len();
        let mut kept_rows = Vec::new();
        let mut cells = Vec::new();
        for &r in &row_labels {
            let row: Vec<Option<CodAtom>> = col_masks.iter().map(|&c| atom(r, c)).collect();
            if row.iter().all(Option::is_none) {
                continue;
            }
            for (&c, cell) in col_masks.iter().zip(&row) {
                let expected = var_of.get(&(r ^ c)).copied();
                if cell.map(|a| a.var) != expected {
                    return Err(ConstructError::Internal(format!(
                        "cell at row label {r}, column mask {c} breaks the XOR layout"
                    )));
                }
            }
            kept_rows.push(r);
            cells.extend(row);
        }
        debug_assert_eq!(cells.len(), kept_rows.len() * n);
        Ok(Self {
            order,
            row_labels: kept_rows,
            col_masks,
            var_labels,
            var_of,
            cells,
        })
    }

    /// Bit width of the labels.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn cols(&self) -> usize {
        self.col_masks.len()
    }

    pub fn vars(&self) -> usize {
        self.var_labels.len()
    }

    pub fn row_labels(&self) -> &[u64] {
        &self.row_labels
    }

    pub fn col_masks(&self) -> &[u64] {
        &self.col_masks
    }

    pub fn var_labels(&self) -> &[u64] {
        &self.var_labels
    }

    pub fn cells(&self) -> &[Option<CodAtom>] {
        &self.cells
    }

    pub fn cell(&self, r: usize, c: usize) -> Option<CodAtom> {
        self.cells[r * self.cols() + c]
    }

    pub(crate) fn map_cells(mut self, f: impl Fn(CodAtom) -> CodAtom) -> Self {
        for c in self.cells.iter_mut() {
            *c = c.map(&f);
        }
        self
    }

    pub fn to_design<I: ExactInt>(&self) -> Result<DesignMatrix<I>, ConstructError> {
        Ok(DesignMatrix::from_atoms(
            self.rows(),
            self.cols(),
            self.vars(),
            &self.cells,
        )?)
    }

    /// Rows and variables grouped by the mask `l`.
    pub fn plan(&self, l: u64) -> PairingPlan {
        let row_of: HashMap<u64, usize> = self
            .row_labels
            .iter()
            .enumerate()
            .map(|(i, &r)| (r, i))
            .collect();
        let (mut row_pairs, mut unpaired_rows) = (Vec::new(), Vec::new());
        for (i, &r) in self.row_labels.iter().enumerate() {
            match row_of.get(&(r ^ l)) {
                Some(&j) if j > i => row_pairs.push((i, j)),
                Some(_) => {}
                None => unpaired_rows.push(i),
            }
        }
        let (mut var_pairs, mut isolated_vars) = (Vec::new(), Vec::new());
        for (i, &g) in self.var_labels.iter().enumerate() {
            match self.var_of.get(&(g ^ l)) {
                Some(&j) if j > i => var_pairs.push((i, j)),
                Some(_) => {}
                None => isolated_vars.push(i),
            }
        }
        PairingPlan {
            l,
            row_pairs,
            unpaired_rows,
            var_pairs,
            isolated_vars,
        }
    }

    /// Mixes every row pair `(i, j)`, `i < j`, into `(Ro_i + Ro_j)/√2` at `i`
    /// and `(Ro_i − Ro_j)/√2` at `j`.
    pub fn pair_rows<I: ExactInt>(
        &self,
        l: u64,
    ) -> Result<(DesignMatrix<I>, PairingPlan), ConstructError> {
        let max = crate::index::low_mask(self.order);
        if l == 0 || l > max {
            return Err(ConstructError::MaskOutOfRange { l, max });
        }
        let plan = self.plan(l);
        let base: DesignMatrix<I> = self.to_design()?;
        let n = base.n();
        let h = RealSqrt2::<I>::frac_1_sqrt2();
        let mut entries: Vec<LinearEntry<I>> = base.entries().to_vec();
        for &(i, j) in &plan.row_pairs {
            for c in 0..n {
                let (a, b) = (base.entry(i, c), base.entry(j, c));
                entries[i * n + c] = a.add(b).scale_real(&h);
                entries[j * n + c] = a.sub(b).scale_real(&h);
            }
        }
        Ok((DesignMatrix::new(base.p(), n, base.k(), entries)?, plan))
    }
}

/// Row and variable grouping under the mask `l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingPlan {
    pub l: u64,
    /// `(i, j)`, `i < j`, with `f(i) ⊕ f(j) = l`.
    pub row_pairs: Vec<(usize, usize)>,
    pub unpaired_rows: Vec<usize>,
    /// `(i, j)`, `i < j`, with `g(i) ⊕ g(j) = l`.
    pub var_pairs: Vec<(usize, usize)>,
    /// `g(i) ⊕ l ∉ C`.
    pub isolated_vars: Vec<usize>,
}

impl PairingPlan {
    fn validate(&self, k: usize) -> Result<HashMap<usize, (usize, usize)>, ConstructError> {
        let mut seen = vec![false; k];
        let mut partner = HashMap::new();
        let mut mark = |v: usize| -> Result<(), ConstructError> {
            if v >= k || std::mem::replace(&mut seen[v], true) {
                return Err(ConstructError::PlanMismatch(format!(
                    "variable {v} is listed twice or out of range"
                )));
            }
            Ok(())
        };
        for &(i, j) in &self.var_pairs {
            if i >= j {
                return Err(ConstructError::PlanMismatch(format!(
                    "pair ({i}, {j}) is not ordered"
                )));
            }
            mark(i)?;
            mark(j)?;
            partner.insert(i, (i, j));
            partner.insert(j, (i, j));
        }
        for &v in &self.isolated_vars {
            mark(v)?;
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(ConstructError::PlanMismatch(format!(
                "variable {v} is not covered by the plan"
            )));
        }
        Ok(partner)
    }
}

/// Replaces each paired `(y_i, y_j)`, `i < j`, by `((x_i + x_j)/√2, (x_i − x_j)/√2)`
/// and each isolated `y_i` by `x_i`.
pub fn cis_substitute<I: ExactInt>(
    m: &DesignMatrix<I>,
    plan: &PairingPlan,
) -> Result<DesignMatrix<I>, ConstructError> {
    let partner = plan.validate(m.k())?;
    for r in 0..m.p() {
        for c in 0..m.n() {
            match m.entry(r, c).vars().as_slice() {
                [] | [_] => {}
                [a, b] if partner.get(a) == Some(&(*a, *b)) => {}
                _ => {
                    return Err(ConstructError::PlanMismatch(format!(
                        "entry ({r}, {c}) mixes variables the plan does not pair"
                    )))
                }
            }
        }
    }
    let h = RealSqrt2::<I>::frac_1_sqrt2();
    let sub = |c: Coord| -> Vec<(Coord, RealSqrt2<I>)> {
        let at = |v: usize| Coord {
            var: v,
            part: c.part,
        };
        match partner.get(&c.var) {
            None => vec![(c, RealSqrt2::from_integer(1))],
            Some(&(i, j)) if c.var == i => vec![(at(i), h.clone()), (at(j), h.clone())],
            Some(&(i, j)) => vec![(at(i), h.clone()), (at(j), -&h)],
        }
    };
    Ok(m.map_entries(|_, _, e| e.substitute(sub)))
}
