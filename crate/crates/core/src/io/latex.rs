use super::text::{shared_half, tokens, Atom, Token};
use crate::design::{DesignMatrix, LinearEntry, Part};
use crate::exact::ExactInt;
use num_traits::{One, Zero};
use std::fmt::Write as _;

fn sub(var: usize, suffix: &str) -> String {
    if var < 10 && suffix.is_empty() {
        format!("x_{var}")
    } else {
        format!("x_{{{var}{suffix}}}")
    }
}

fn atom<I: ExactInt>(t: &Token<I>) -> String {
    let core = match t.atom {
        Atom::Plain => sub(t.var, ""),
        Atom::Conj => format!("{}^*", sub(t.var, "")),
        Atom::Part(Part::I) => sub(t.var, "I"),
        Atom::Part(Part::Q) => sub(t.var, "Q"),
    };
    if t.j {
        format!("j{core}")
    } else {
        core
    }
}

fn coef<I: ExactInt>(t: &Token<I>) -> String {
    let (a, b) = (t.mag.a(), t.mag.b());
    match (a.is_zero(), b.is_zero()) {
        (_, true) => format!("{a}"),
        (true, false) => format!("{b}\\sqrt{{2}}"),
        _ => format!("({a}+{b}\\sqrt{{2}})"),
    }
}

pub fn latex_entry<I: ExactInt>(e: &LinearEntry<I>) -> String {
    let toks = tokens(e);
    if toks.is_empty() {
        return "0".into();
    }
    let half = shared_half(&toks);
    let mut body = String::new();
    let lead_sign = half && toks.len() == 1 && toks[0].negative;
    for (i, t) in toks.iter().enumerate() {
        if t.negative && !lead_sign {
            body.push('-');
        } else if i > 0 {
            body.push('+');
        }
        if !half && !t.mag.is_one() {
            body.push_str(&coef(t));
        }
        body.push_str(&atom(t));
    }
    if half {
        let sign = if lead_sign { "-" } else { "" };
        format!("{sign}\\frac{{{body}}}{{\\sqrt{{2}}}}")
    } else {
        body
    }
}

/// `\left[\begin{array}{r…r} … \end{array}\right]`, one row per line.
pub fn to_latex<I: ExactInt>(d: &DesignMatrix<I>) -> String {
    let mut s = String::new();
    writeln!(s, "\\left[\\begin{{array}}{{{}}}", "r".repeat(d.n())).expect("string write");
    for r in 0..d.p() {
        let row: Vec<String> = d.row(r).iter().map(latex_entry).collect();
        let end = if r + 1 < d.p() { " \\\\" } else { "" };
        writeln!(s, "  {}{end}", row.join(" & ")).expect("string write");
    }
    s.push_str("\\end{array}\\right]\n");
    s
}
