//! Plain-text grammar, one row per line, entries separated by tabs:
//!
//! ```text
//! entry := "0" | sum | "(" sum ")/r2"
//! sum   := ["-"] term (("+" | "-") term)*
//! term  := ["[" a "," b "]*"] ["j*"] atom ["/r2"]
//! atom  := "x" var ("*" | "I" | "Q")?
//! ```
//!
//! `x3` is `x3I + j·x3Q`, `x3*` its conjugate, and `[a,b]` the real
//! coefficient `a + b√2`.

use super::IoError;
use crate::design::{Coord, DesignMatrix, LinearEntry, Part};
use crate::exact::{ComplexSqrt2, ExactInt, Rational, RealSqrt2};
use num_traits::{One, Zero};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(super) enum Atom {
    Plain,
    Conj,
    Part(Part),
}

/// `sign · mag · (j)? · atom(var)` with `mag > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) struct Token<I: ExactInt> {
    pub negative: bool,
    pub mag: RealSqrt2<I>,
    pub j: bool,
    pub var: usize,
    pub atom: Atom,
}

fn signed<I: ExactInt>(v: &RealSqrt2<I>) -> (bool, RealSqrt2<I>) {
    (v < &RealSqrt2::zero(), v.abs())
}

/// Splits an entry into tokens, preferring whole `x`/`x*` atoms, and listing
/// whole atoms first, then in-phase parts, then quadrature parts.
pub(super) fn tokens<I: ExactInt>(e: &LinearEntry<I>) -> Vec<Token<I>> {
    let mut whole = Vec::new();
    let mut parts = Vec::new();
    let zero = ComplexSqrt2::zero();
    for var in e.vars() {
        let ci = e.coefficient(Coord::i(var)).unwrap_or(&zero);
        let cq = e.coefficient(Coord::q(var)).unwrap_or(&zero);
        if ci.is_real() && cq.is_imaginary() && !ci.re.is_zero() && ci.re.abs() == cq.im.abs() {
            let (negative, mag) = signed(&ci.re);
            let atom = if cq.im == ci.re {
                Atom::Plain
            } else {
                Atom::Conj
            };
            whole.push(Token {
                negative,
                mag,
                j: false,
                var,
                atom,
            });
            continue;
        }
        for (part, c) in [(Part::I, ci), (Part::Q, cq)] {
            for (j, v) in [(false, &c.re), (true, &c.im)] {
                if !v.is_zero() {
                    let (negative, mag) = signed(v);
                    parts.push(Token {
                        negative,
                        mag,
                        j,
                        var,
                        atom: Atom::Part(part),
                    });
                }
            }
        }
    }
    parts.sort_by_key(|t| (t.atom, t.var, t.j));
    whole.extend(parts);
    whole
}

/// The common magnitude if it is `1/√2` and shared by every token.
pub(super) fn shared_half<I: ExactInt>(tokens: &[Token<I>]) -> bool {
    let h = RealSqrt2::frac_1_sqrt2();
    !tokens.is_empty() && tokens.iter().all(|t| t.mag == h)
}

fn atom_text(var: usize, atom: Atom) -> String {
    match atom {
        Atom::Plain => format!("x{var}"),
        Atom::Conj => format!("x{var}*"),
        Atom::Part(Part::I) => format!("x{var}I"),
        Atom::Part(Part::Q) => format!("x{var}Q"),
    }
}

fn coef_text<I: ExactInt>(v: &RealSqrt2<I>) -> String {
    format!("[{},{}]*", v.a(), v.b())
}

pub fn render_entry<I: ExactInt>(e: &LinearEntry<I>) -> String {
    let toks = tokens(e);
    if toks.is_empty() {
        return "0".into();
    }
    let half = shared_half(&toks);
    let mut body = String::new();
    for (i, t) in toks.iter().enumerate() {
        if t.negative {
            body.push('-');
        } else if i > 0 {
            body.push('+');
        }
        if !half && !t.mag.is_one() {
            body.push_str(&coef_text(&t.mag));
        }
        if t.j {
            body.push_str("j*");
        }
        body.push_str(&atom_text(t.var, t.atom));
    }
    match (half, toks.len()) {
        (true, 1) => format!("{body}/r2"),
        (true, _) => format!("({body})/r2"),
        _ => body,
    }
}

pub fn to_text<I: ExactInt>(d: &DesignMatrix<I>) -> String {
    let mut s = String::new();
    writeln!(s, "# p={} n={} k={}", d.p(), d.n(), d.k()).expect("string write");
    for r in 0..d.p() {
        let row: Vec<String> = d.row(r).iter().map(render_entry).collect();
        writeln!(s, "{}", row.join("\t")).expect("string write");
    }
    s
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> IoError {
        IoError::Text(format!(
            "{what} at byte {} of `{}`",
            self.pos,
            String::from_utf8_lossy(self.s)
        ))
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.s[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn until(&mut self, stop: u8) -> Result<&str, IoError> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos] != stop {
            self.pos += 1;
        }
        if self.pos == self.s.len() {
            return Err(self.err("unterminated coefficient"));
        }
        std::str::from_utf8(&self.s[start..self.pos]).map_err(|_| self.err("invalid utf-8"))
    }

    fn number(&mut self) -> Result<usize, IoError> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.err("expected a variable index"))
    }

    fn rational<I: ExactInt>(&self, t: &str) -> Result<Rational<I>, IoError> {
        t.trim().parse().map_err(|_| self.err("invalid rational"))
    }

    fn term<I: ExactInt>(&mut self, negative: bool) -> Result<LinearEntry<I>, IoError> {
        let mut mag = RealSqrt2::one();
        if self.eat("[") {
            let a = self.until(b',')?.to_owned();
            self.pos += 1;
            let b = self.until(b']')?.to_owned();
            self.pos += 1;
            if !self.eat("*") {
                return Err(self.err("expected `*` after coefficient"));
            }
            mag = RealSqrt2::new(self.rational(&a)?, self.rational(&b)?);
        }
        let j = self.eat("j*");
        if !self.eat("x") {
            return Err(self.err("expected `x`"));
        }
        let var = self.number()?;
        let atom = if self.eat("*") {
            Atom::Conj
        } else if self.eat("I") {
            Atom::Part(Part::I)
        } else if self.eat("Q") {
            Atom::Part(Part::Q)
        } else {
            Atom::Plain
        };
        if self.eat("/r2") {
            mag = &mag * &RealSqrt2::frac_1_sqrt2();
        }
        let mag = if negative { -mag } else { mag };
        let one = ComplexSqrt2::real(mag);
        let unit = if j { one.mul_j() } else { one };
        let terms = match atom {
            Atom::Plain => vec![(Coord::i(var), unit.clone()), (Coord::q(var), unit.mul_j())],
            Atom::Conj => vec![
                (Coord::i(var), unit.clone()),
                (Coord::q(var), -unit.mul_j()),
            ],
            Atom::Part(p) => vec![(Coord { var, part: p }, unit)],
        };
        Ok(LinearEntry::from_terms(terms))
    }

    fn sum<I: ExactInt>(&mut self) -> Result<LinearEntry<I>, IoError> {
        let mut acc = LinearEntry::zero();
        let mut negative = self.eat("-");
        loop {
            acc = acc.add(&self.term(negative)?);
            if self.eat("+") {
                negative = false;
            } else if self.eat("-") {
                negative = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn entry<I: ExactInt>(&mut self) -> Result<LinearEntry<I>, IoError> {
        let e = if self.s == b"0" {
            self.pos = 1;
            LinearEntry::zero()
        } else if self.eat("(") {
            let inner = self.sum()?;
            if !self.eat(")/r2") {
                return Err(self.err("expected `)/r2`"));
            }
            inner.scale_real(&RealSqrt2::frac_1_sqrt2())
        } else {
            self.sum()?
        };
        if self.pos != self.s.len() {
            return Err(self.err("trailing input"));
        }
        Ok(e)
    }
}

pub fn parse_entry<I: ExactInt>(s: &str) -> Result<LinearEntry<I>, IoError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    Parser {
        s: t.as_bytes(),
        pos: 0,
    }
    .entry()
}

/// Reads [`to_text`] output; `k` is taken from the header when present and
/// inferred from the largest variable otherwise.
pub fn from_text<I: ExactInt>(s: &str) -> Result<DesignMatrix<I>, IoError> {
    let mut k_header = None;
    let mut rows: Vec<Vec<LinearEntry<I>>> = Vec::new();
    for line in s.lines() {
        let line = line.trim();
        if let Some(h) = line.strip_prefix('#') {
            k_header = h
                .split_whitespace()
                .find_map(|f| f.strip_prefix("k="))
                .and_then(|v| v.parse().ok());
            continue;
        }
        if line.is_empty() {
            continue;
        }
        rows.push(
            line.split('\t')
                .map(parse_entry)
                .collect::<Result<_, _>>()?,
        );
    }
    let n = rows.first().map_or(0, Vec::len);
    if let Some(r) = rows.iter().position(|r| r.len() != n) {
        return Err(IoError::Text(format!(
            "row {r} has {} entries, expected {n}",
            rows[r].len()
        )));
    }
    let k = k_header.unwrap_or_else(|| {
        rows.iter()
            .flatten()
            .flat_map(|e| e.vars())
            .max()
            .map_or(0, |v| v + 1)
    });
    let p = rows.len();
    Ok(DesignMatrix::new(
        p,
        n,
        k,
        rows.into_iter().flatten().collect(),
    )?)
}
