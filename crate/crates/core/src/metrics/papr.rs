use super::MetricsError;
use crate::design::{DesignMatrix, LinearEntry, Part};
use crate::exact::{ComplexSqrt2, ExactInt, RealSqrt2};
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::Zero;

/// Points `√power · (u + jv)` with integer `(u, v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constellation {
    name: &'static str,
    lattice: Vec<(i64, i64)>,
    power: Ratio<i64>,
}

impl Constellation {
    pub fn qpsk() -> Self {
        let lattice = [(1, 1), (-1, 1), (-1, -1), (1, -1)].to_vec();
        Self {
            name: "qpsk",
            lattice,
            power: Ratio::new(1, 2),
        }
    }

    /// Square 16-QAM on `{±1, ±3}²`.
    pub fn qam16() -> Self {
        let levels = [-3, -1, 1, 3];
        let lattice = levels
            .iter()
            .flat_map(|&u| levels.iter().map(move |&v| (u, v)))
            .collect();
        Self {
            name: "qam16",
            lattice,
            power: Ratio::new(1, 10),
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "qpsk" => Some(Self::qpsk()),
            "qam16" => Some(Self::qam16()),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn lattice(&self) -> &[(i64, i64)] {
        &self.lattice
    }

    /// Squared scale from lattice to unit average energy.
    pub fn power(&self) -> Ratio<i64> {
        self.power
    }

    pub fn points(&self) -> Vec<Complex64> {
        let s = (*self.power.numer() as f64 / *self.power.denom() as f64).sqrt();
        self.lattice
            .iter()
            .map(|&(u, v)| Complex64::new(s * u as f64, s * v as f64))
            .collect()
    }

    /// Mean of `|point|²`, exact.
    pub fn average_energy(&self) -> Ratio<i64> {
        let sum: i64 = self.lattice.iter().map(|&(u, v)| u * u + v * v).sum();
        self.power * Ratio::new(sum, self.lattice.len() as i64)
    }
}

fn power_of<I: ExactInt>(c: &Constellation) -> RealSqrt2<I> {
    let n = I::from_i64(*c.power.numer()).expect("small");
    let d = I::from_i64(*c.power.denom()).expect("small");
    RealSqrt2::from_rational(Ratio::new(n, d))
}

/// Lattice value of the entry for the given per-variable lattice points.
fn eval_lattice<I: ExactInt>(
    e: &LinearEntry<I>,
    vars: &[usize],
    pts: &[(i64, i64)],
) -> ComplexSqrt2<I> {
    let mut acc = ComplexSqrt2::zero();
    for (coord, z) in e.terms() {
        let slot = vars
            .iter()
            .position(|&v| v == coord.var)
            .expect("listed variable");
        let (u, v) = pts[slot];
        let x = match coord.part {
            Part::I => u,
            Part::Q => v,
        };
        acc += &z.scale(&RealSqrt2::from_integer(x));
    }
    acc
}

/// `(peak, mean)` of `|e|²` over every assignment of the entry's symbols.
fn entry_power<I: ExactInt>(
    e: &LinearEntry<I>,
    c: &Constellation,
    row: usize,
    col: usize,
) -> Result<(RealSqrt2<I>, RealSqrt2<I>), MetricsError> {
    let vars = e.vars();
    if vars.len() > 2 {
        return Err(MetricsError::TooManyVariables {
            row,
            col,
            vars: vars.len(),
        });
    }
    if vars.is_empty() {
        return Ok((RealSqrt2::zero(), RealSqrt2::zero()));
    }
    let lat = c.lattice();
    let assignments: Vec<Vec<(i64, i64)>> = if vars.len() == 1 {
        lat.iter().map(|&p| vec![p]).collect()
    } else {
        lat.iter()
            .flat_map(|&p| lat.iter().map(move |&q| vec![p, q]))
            .collect()
    };
    let mut peak = RealSqrt2::zero();
    let mut sum = RealSqrt2::zero();
    for pts in &assignments {
        let m = eval_lattice(e, &vars, pts).norm_sqr();
        sum += &m;
        if m > peak {
            peak = m;
        }
    }
    let count = RealSqrt2::from_integer(assignments.len() as i64)
        .recip()
        .expect("nonzero");
    let s = power_of::<I>(c);
    Ok((&peak * &s, &(&sum * &count) * &s))
}

/// Slots that enter the time average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Averaging {
    /// Every slot of the codeword, zeros included.
    #[default]
    AllSlots,
    /// Only slots where the antenna's entry is nonzero.
    NonzeroSlots,
}

/// Per antenna: peak of `|entry|²` over slots and symbol assignments,
/// divided by its mean over slots and uniform symbols.
pub fn papr_with<I: ExactInt>(
    d: &DesignMatrix<I>,
    c: &Constellation,
    avg: Averaging,
) -> Result<Vec<RealSqrt2<I>>, MetricsError> {
    (0..d.n())
        .map(|col| {
            let mut peak = RealSqrt2::zero();
            let mut sum = RealSqrt2::zero();
            let mut slots = 0i64;
            for row in 0..d.p() {
                let e = d.entry(row, col);
                if e.is_zero() && avg == Averaging::NonzeroSlots {
                    continue;
                }
                let (pk, mean) = entry_power(e, c, row, col)?;
                slots += 1;
                sum += &mean;
                if pk > peak {
                    peak = pk;
                }
            }
            let mean = &sum
                * &RealSqrt2::from_integer(slots.max(1))
                    .recip()
                    .expect("nonzero");
            mean.recip()
                .map(|r| &peak * &r)
                .ok_or(MetricsError::ZeroColumn(col))
        })
        .collect()
}

pub fn papr<I: ExactInt>(
    d: &DesignMatrix<I>,
    c: &Constellation,
) -> Result<Vec<RealSqrt2<I>>, MetricsError> {
    papr_with(d, c, Averaging::AllSlots)
}

/// Largest `|entry|²` over every slot, antenna and symbol assignment.
pub fn peak_power<I: ExactInt>(
    d: &DesignMatrix<I>,
    c: &Constellation,
) -> Result<RealSqrt2<I>, MetricsError> {
    let mut peak = RealSqrt2::zero();
    for row in 0..d.p() {
        for col in 0..d.n() {
            let (pk, _) = entry_power(d.entry(row, col), c, row, col)?;
            if pk > peak {
                peak = pk;
            }
        }
    }
    Ok(peak)
}

/// Expected `Σ |entry|²` over one codeword with uniform symbols.
pub fn average_energy<I: ExactInt>(
    d: &DesignMatrix<I>,
    c: &Constellation,
) -> Result<RealSqrt2<I>, MetricsError> {
    let mut total = RealSqrt2::zero();
    for row in 0..d.p() {
        for col in 0..d.n() {
            total += &entry_power(d.entry(row, col), c, row, col)?.1;
        }
    }
    Ok(total)
}

/// Exact `Σ |entry|²` of one codeword whose symbol `i` is point `indices[i]`.
pub fn codeword_energy<I: ExactInt>(
    d: &DesignMatrix<I>,
    c: &Constellation,
    indices: &[usize],
) -> RealSqrt2<I> {
    let pts: Vec<(i64, i64)> = indices.iter().map(|&i| c.lattice()[i]).collect();
    let all: Vec<usize> = (0..pts.len()).collect();
    let mut total = RealSqrt2::zero();
    for e in d.entries() {
        if !e.is_zero() {
            total += &eval_lattice(e, &all, &pts).norm_sqr();
        }
    }
    &total * &power_of::<I>(c)
}
