//! Independent oracles shared by the structural suite and the acceptance run.
//! They recompute structure from bit arithmetic and matrix inspection only.
#![allow(dead_code)]

use rand::Rng;
use stbc_forge::construct as c;
use stbc_forge::design::{CodAtom, DesignMatrix};
use stbc_forge::index::{self, IndexMaps};
use stbc_forge::Design;
use std::collections::BTreeSet;

fn bit(x: u64, s: u32) -> u32 {
    ((x >> s) & 1) as u32
}

fn in_c(x: u64, a: u32) -> bool {
    let h = a.div_ceil(2);
    x < 1 << a && (x.count_ones() == h || x.count_ones() + 1 == h)
}

/// Both parity statements over every `s ≠ t < a` and every qualifying `i`.
pub fn weight_parity(a: u32) -> Result<usize, String> {
    let h = a.div_ceil(2);
    let mut checked = 0;
    for i in (0..1u64 << a).filter(|&i| in_c(i, a)) {
        for s in 0..a {
            if in_c(i ^ (1 << s), a) {
                checked += 1;
                if (i.count_ones() + h + bit(i, s)) % 2 != 1 {
                    return Err(format!("a={a}, i={i:#b}, s={s}: weight parity is even"));
                }
            }
            for t in (0..a).filter(|&t| t != s) {
                if in_c(i ^ (1 << s) ^ (1 << t), a) {
                    checked += 1;
                    if bit(i, s) + bit(i, t) != 1 {
                        return Err(format!("a={a}, i={i:#b}, s={s}, t={t}: bits agree"));
                    }
                }
            }
        }
    }
    Ok(checked)
}

/// Rows touched by the columns of `G_a` indexed by `C_a`, read from the
/// generated square design, against the library's `R_a`.
pub fn row_union(a: u32) -> Result<(), String> {
    let g = c::square_cod_recursive(a).map_err(|e| e.to_string())?;
    let n = 1usize << a;
    let mut rows = BTreeSet::new();
    for col in (0..n as u64).filter(|&j| in_c(j, a)) {
        for r in 0..n {
            if g[r * n + col as usize].is_some() {
                rows.insert(r as u64);
            }
        }
    }
    let r_set: Vec<u64> = index::row_set(a).map_err(|e| e.to_string())?;
    let union: Vec<u64> = rows.into_iter().collect();
    if union == r_set {
        Ok(())
    } else {
        Err(format!(
            "a={a}: union has {} rows, R_a has {}",
            union.len(),
            r_set.len()
        ))
    }
}

pub fn conjugation_separated(a: u32) -> Result<(), String> {
    let d: Design = c::build_tilde(a).map_err(|e| e.to_string())?;
    match d.is_conjugation_separated() {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("a={a}: a row mixes conjugated and plain atoms")),
        Err(e) => Err(format!("a={a}: {e}")),
    }
}

/// Variables sharing an entry in `M_n(l)` are exactly the `l`-pairs of the
/// column labels, and a pair sharing an entry in one column shares one in
/// every column where either variable appears.
pub fn pairing_uniformity(n: u32, l: u64) -> Result<(), String> {
    let (m, _): (Design, _) = c::pair_rows(n, l).map_err(|e| e.to_string())?;
    let maps = IndexMaps::build(n).map_err(|e| e.to_string())?;
    let mut together: Vec<BTreeSet<(usize, usize)>> = vec![BTreeSet::new(); m.n()];
    let mut present: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.n()];
    for col in 0..m.n() {
        for e in m.column(col) {
            let vars = e.vars();
            if vars.len() > 2 {
                return Err(format!(
                    "n={n}, l={l}: an entry holds {} variables",
                    vars.len()
                ));
            }
            present[col].extend(vars.iter().copied());
            if let [i, j] = vars[..] {
                together[col].insert((i.min(j), i.max(j)));
            }
        }
    }
    let all: BTreeSet<(usize, usize)> = together.iter().flatten().copied().collect();
    for &(i, j) in &all {
        if maps.g(i) ^ maps.g(j) != l {
            return Err(format!(
                "n={n}, l={l}: y{i}, y{j} share an entry but g(i)^g(j) != l"
            ));
        }
        for col in 0..m.n() {
            let either = present[col].contains(&i) || present[col].contains(&j);
            if either && !together[col].contains(&(i, j)) {
                return Err(format!(
                    "n={n}, l={l}: y{i}, y{j} are split in column {col}"
                ));
            }
        }
    }
    // converse: every l-pair of variables appears together somewhere
    for i in 0..m.k() {
        if let Some(j) = maps.g_inv(maps.g(i) ^ l) {
            if i < j && !all.contains(&(i, j)) {
                return Err(format!(
                    "n={n}, l={l}: l-pair y{i}, y{j} never shares an entry"
                ));
            }
        }
    }
    Ok(())
}

/// Unit-scale atom matrix with `p, n ≤ 4`, `k ≤ 3`. Half the samples start
/// from a known orthogonal block and receive a few random edits, so both
/// verdicts occur often.
pub fn random_atom_matrix(rng: &mut impl Rng) -> Design {
    let sign = |rng: &mut dyn rand::RngCore| if rng.random_bool(0.5) { 1 } else { -1 };
    if rng.random_bool(0.5) {
        let k = rng.random_range(1..=3);
        let (p, n) = (rng.random_range(1..=4), rng.random_range(1..=4));
        let cells: Vec<Option<CodAtom>> = (0..p * n)
            .map(|_| {
                rng.random_bool(0.7)
                    .then(|| CodAtom::new(rng.random_range(0..k), sign(rng), sign(rng)))
            })
            .collect();
        return DesignMatrix::from_atoms(p, n, k, &cells).expect("valid atom matrix");
    }
    // columns of the 4×4 square design on 3 variables, in random order
    let base: Design = c::truncated_square(2, 4).expect("order 2");
    let n = rng.random_range(1..=4);
    let mut cols: Vec<usize> = (0..4).collect();
    for i in (1..4).rev() {
        cols.swap(i, rng.random_range(0..=i));
    }
    let d = base.select_columns(&cols[..n]);
    let mut cells = d.atoms().expect("atoms");
    for _ in 0..rng.random_range(0..=2) {
        let at = rng.random_range(0..cells.len());
        cells[at] = match rng.random_range(0..4) {
            0 => None,
            1 => cells[at].map(CodAtom::negated),
            2 => cells[at].map(CodAtom::conjugated),
            _ => Some(CodAtom::new(rng.random_range(0..3), sign(rng), sign(rng))),
        };
    }
    DesignMatrix::from_atoms(d.p(), n, 3, &cells).expect("valid atom matrix")
}

/// Characterisation verdict against the Gram verdict on one matrix.
pub fn characterisation_agrees(d: &Design) -> Result<bool, String> {
    let local = d
        .check_cod_characterization()
        .map_err(|e| e.to_string())?
        .is_none();
    let global = d.is_orthogonal();
    if local == global {
        Ok(global)
    } else {
        Err(format!(
            "characterisation says {local}, Gram says {global}:\n{}",
            stbc_forge::io::to_text(d)
        ))
    }
}
