use super::IoError;
use crate::design::{Coord, DesignMatrix, LinearEntry, Part};
use crate::exact::{ComplexSqrt2, ExactInt, RealSqrt2};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
#[serde(bound = "")]
struct Term<I: ExactInt> {
    var: usize,
    part: Part,
    re: RealSqrt2<I>,
    im: RealSqrt2<I>,
}

/// `{"p","n","k","entries"}` with `entries[row][col]` a list of terms.
#[derive(Serialize, Deserialize)]
#[serde(bound = "")]
pub(super) struct WireDesign<I: ExactInt> {
    p: usize,
    n: usize,
    k: usize,
    entries: Vec<Vec<Vec<Term<I>>>>,
}

impl<I: ExactInt> WireDesign<I> {
    pub(super) fn from_design(d: &DesignMatrix<I>) -> Self {
        let entries = (0..d.p())
            .map(|r| {
                d.row(r)
                    .iter()
                    .map(|e| {
                        e.terms()
                            .iter()
                            .map(|(c, z)| Term {
                                var: c.var,
                                part: c.part,
                                re: z.re.clone(),
                                im: z.im.clone(),
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self {
            p: d.p(),
            n: d.n(),
            k: d.k(),
            entries,
        }
    }

    pub(super) fn into_design(self) -> Result<DesignMatrix<I>, IoError> {
        if self.entries.len() != self.p {
            return Err(IoError::Schema(format!(
                "{} rows listed for p = {}",
                self.entries.len(),
                self.p
            )));
        }
        let mut flat = Vec::with_capacity(self.p * self.n);
        for (r, row) in self.entries.into_iter().enumerate() {
            if row.len() != self.n {
                return Err(IoError::Schema(format!(
                    "row {r} has {} entries for n = {}",
                    row.len(),
                    self.n
                )));
            }
            for cell in row {
                let mut seen = std::collections::BTreeSet::new();
                for t in &cell {
                    if !seen.insert((t.var, t.part)) {
                        return Err(IoError::Schema(format!(
                            "row {r}: coordinate x{}{:?} listed twice",
                            t.var, t.part
                        )));
                    }
                }
                flat.push(LinearEntry::from_terms(cell.into_iter().map(|t| {
                    (
                        Coord {
                            var: t.var,
                            part: t.part,
                        },
                        ComplexSqrt2::new(t.re, t.im),
                    )
                })));
            }
        }
        Ok(DesignMatrix::new(self.p, self.n, self.k, flat)?)
    }
}

pub fn to_json<I: ExactInt>(d: &DesignMatrix<I>) -> String {
    serde_json::to_string(&WireDesign::from_design(d)).expect("design serialises")
}

pub fn to_json_pretty<I: ExactInt>(d: &DesignMatrix<I>) -> String {
    serde_json::to_string_pretty(&WireDesign::from_design(d)).expect("design serialises")
}

pub fn from_json<I: ExactInt>(s: &str) -> Result<DesignMatrix<I>, IoError> {
    let w: WireDesign<I> = serde_json::from_str(s)?;
    w.into_design()
}
