//! Design serialisation: a JSON wire format, a tab-separated text form that
//! round-trips exactly, and a LaTeX array renderer for display.

mod json;
mod latex;
mod text;

use crate::design::{DesignError, DesignMatrix};
use crate::exact::ExactInt;
use serde::Deserialize;
use std::path::Path;
use std::str::FromStr;

pub use json::{from_json, to_json, to_json_pretty};
pub use latex::{latex_entry, to_latex};
pub use text::{from_text, parse_entry, render_entry, to_text};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("schema: {0}")]
    Schema(String),
    #[error("text: {0}")]
    Text(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error("{path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
    #[error("{0} is export-only")]
    ExportOnly(Format),
    #[error("unknown format `{0}`")]
    UnknownFormat(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
    Latex,
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Text => "text",
            Format::Latex => "latex",
        })
    }
}

impl FromStr for Format {
    type Err = IoError;
    fn from_str(s: &str) -> Result<Self, IoError> {
        match s {
            "json" => Ok(Format::Json),
            "text" | "txt" => Ok(Format::Text),
            "latex" | "tex" => Ok(Format::Latex),
            _ => Err(IoError::UnknownFormat(s.into())),
        }
    }
}

impl Format {
    /// Guess from a file extension, defaulting to JSON.
    pub fn from_path(path: &Path) -> Self {
        path.extension()
            .and_then(|e| e.to_str())
            .and_then(|e| e.parse().ok())
            .unwrap_or(Format::Json)
    }
}

pub fn export<I: ExactInt>(d: &DesignMatrix<I>, format: Format) -> String {
    match format {
        Format::Json => to_json_pretty(d),
        Format::Text => to_text(d),
        Format::Latex => to_latex(d),
    }
}

pub fn import<I: ExactInt>(s: &str, format: Format) -> Result<DesignMatrix<I>, IoError> {
    match format {
        Format::Json => match from_json(s) {
            // a fixture wraps the design with a name and a source note
            Err(IoError::Json(_)) if s.contains("\"design\"") => Fixture::parse(s)?.design(),
            r => r,
        },
        Format::Text => from_text(s),
        Format::Latex => Err(IoError::ExportOnly(Format::Latex)),
    }
}

pub fn read_design<I: ExactInt>(path: &Path) -> Result<DesignMatrix<I>, IoError> {
    let s = std::fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })?;
    import(&s, Format::from_path(path))
}

/// A cell whose printed form is a misprint, with the entry that replaces it.
#[derive(Debug, Clone, Deserialize)]
pub struct Erratum {
    pub row: usize,
    pub col: usize,
    pub printed: String,
    pub corrected: String,
    pub reason: String,
}

/// A transcribed reference matrix bundled with the crate. The stored design
/// is the matrix as printed; [`Fixture::design`] applies the errata.
#[derive(Deserialize)]
pub struct Fixture {
    pub name: String,
    pub source: String,
    #[serde(default)]
    pub errata: Vec<Erratum>,
    design: serde_json::Value,
}

impl Fixture {
    fn parse(s: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn printed<I: ExactInt>(&self) -> Result<DesignMatrix<I>, IoError> {
        let w: json::WireDesign<I> = serde_json::from_value(self.design.clone())?;
        w.into_design()
    }

    /// The printed matrix with every erratum applied; each erratum must name
    /// the printed cell exactly.
    pub fn design<I: ExactInt>(&self) -> Result<DesignMatrix<I>, IoError> {
        let printed = self.printed::<I>()?;
        let mut fixes = Vec::with_capacity(self.errata.len());
        for e in &self.errata {
            if e.row >= printed.p() || e.col >= printed.n() {
                return Err(IoError::Schema(format!(
                    "{}: erratum at ({}, {}) is outside the matrix",
                    self.name, e.row, e.col
                )));
            }
            if parse_entry::<I>(&e.printed)? != *printed.entry(e.row, e.col) {
                return Err(IoError::Schema(format!(
                    "{}: erratum at ({}, {}) expects `{}`, found `{}`",
                    self.name,
                    e.row,
                    e.col,
                    e.printed,
                    render_entry(printed.entry(e.row, e.col))
                )));
            }
            fixes.push(((e.row, e.col), parse_entry::<I>(&e.corrected)?));
        }
        let d = printed.map_entries(|r, c, x| {
            fixes
                .iter()
                .find(|(at, _)| *at == (r, c))
                .map_or_else(|| x.clone(), |(_, y)| y.clone())
        });
        Ok(DesignMatrix::new(
            d.p(),
            d.n(),
            d.k(),
            d.entries().to_vec(),
        )?)
    }
}

const FIXTURES: [&str; 8] = [
    include_str!("../../fixtures/code_i.json"),
    include_str!("../../fixtures/code_ii.json"),
    include_str!("../../fixtures/code_iii.json"),
    include_str!("../../fixtures/tilde_h4.json"),
    include_str!("../../fixtures/h4.json"),
    include_str!("../../fixtures/hat_h8.json"),
    include_str!("../../fixtures/l4.json"),
    include_str!("../../fixtures/l5.json"),
];

pub fn fixtures() -> Vec<Fixture> {
    FIXTURES
        .iter()
        .map(|s| Fixture::parse(s).expect("bundled fixture parses"))
        .collect()
}

pub fn fixture(name: &str) -> Option<Fixture> {
    fixtures().into_iter().find(|f| f.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn every_fixture_loads_and_round_trips() {
        let fs = fixtures();
        assert_eq!(fs.len(), 8);
        for f in fs {
            let d: DesignMatrix<BigInt> = f.design().unwrap();
            for fmt in [Format::Json, Format::Text] {
                assert_eq!(
                    import::<BigInt>(&export(&d, fmt), fmt).unwrap(),
                    d,
                    "{} {fmt}",
                    f.name
                );
            }
        }
    }

    #[test]
    fn fixtures_are_orthogonal_once_corrected() {
        for f in fixtures() {
            let d: DesignMatrix<BigInt> = f.design().unwrap();
            assert!(d.is_orthogonal(), "{}", f.name);
            let printed: DesignMatrix<BigInt> = f.printed().unwrap();
            assert_eq!(printed.is_orthogonal(), f.errata.is_empty(), "{}", f.name);
        }
    }

    #[test]
    fn stale_erratum_is_rejected() {
        let raw = FIXTURES[1].replacen("\"printed\": \"-x1*\"", "\"printed\": \"x1*\"", 1);
        let f = Fixture::parse(&raw).unwrap();
        assert!(matches!(f.design::<BigInt>(), Err(IoError::Schema(_))));
    }

    #[test]
    fn fixture_file_imports_as_json() {
        let raw = FIXTURES[0];
        let d: DesignMatrix<BigInt> = import(raw, Format::Json).unwrap();
        assert_eq!((d.p(), d.n(), d.k()), (4, 3, 3));
    }

    #[test]
    fn latex_is_export_only() {
        assert!(matches!(
            import::<BigInt>("", Format::Latex),
            Err(IoError::ExportOnly(_))
        ));
        assert_eq!("tex".parse::<Format>().unwrap(), Format::Latex);
        assert!("csv".parse::<Format>().is_err());
    }
}
