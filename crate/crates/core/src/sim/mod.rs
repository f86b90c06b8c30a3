//! Monte Carlo symbol error rates over quasi-static Rayleigh fading.
//!
//! Floating point starts here. Each trial draws its channel, symbols and
//! unit noise from a ChaCha stream keyed by `(seed, trial)`, and reuses them
//! at every SNR point. Error counts are therefore independent of how trials
//! are spread over workers.

mod link;
pub mod stats;

pub use link::{transmit, Decoder, Dispersion, MAX_GROUP_HYPOTHESES};
pub use stats::{alamouti_qpsk_ser, qpsk_two_branch_ser, simpson, wilson, Z95};

use crate::design::DesignMatrix;
use crate::exact::RealSqrt2;
use crate::metrics::{average_energy, peak_power, Constellation, MetricsError};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("SNR grid is empty")]
    EmptyGrid,
    #[error("receive antenna count must be at least 1")]
    NoReceiver,
    #[error("design carries no energy")]
    Degenerate,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("symbol group {group:?} needs {count} hypotheses")]
    TooManyHypotheses { group: Vec<usize>, count: f64 },
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// Expected codeword energy `p`; SNR is transmit energy per channel use
    /// over the per-receive-antenna noise variance.
    Average,
    /// Largest per-antenna instantaneous power 1; SNR is the `n`-antenna peak
    /// total power over the per-receive-antenna noise variance.
    Peak,
}

/// Amplitude applied to the design and noise variance at unit SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalization {
    pub constraint: Constraint,
    /// Squared amplitude, exact.
    pub scale_sq: RealSqrt2<BigInt>,
    /// `σ² · snr`.
    pub noise_factor: f64,
}

impl Normalization {
    pub fn scale(&self) -> f64 {
        self.scale_sq.to_f64().sqrt()
    }

    pub fn noise_variance(&self, snr_db: f64) -> f64 {
        self.noise_factor / 10f64.powf(snr_db / 10.0)
    }
}

pub fn normalize(
    d: &DesignMatrix<BigInt>,
    c: &Constellation,
    constraint: Constraint,
) -> Result<Normalization, SimError> {
    let (reference, target, noise_factor) = match constraint {
        Constraint::Average => (
            average_energy(d, c)?,
            RealSqrt2::from_integer(d.p() as i64),
            1.0,
        ),
        Constraint::Peak => (peak_power(d, c)?, RealSqrt2::from_integer(1), d.n() as f64),
    };
    if reference.is_zero() {
        return Err(SimError::Degenerate);
    }
    let scale_sq = &target * &reference.recip().expect("nonzero");
    Ok(Normalization {
        constraint,
        scale_sq,
        noise_factor,
    })
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub design: DesignMatrix<BigInt>,
    pub constellation: Constellation,
    pub n_rx: usize,
    pub snr_db: Vec<f64>,
    pub constraint: Constraint,
    pub trials: u64,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnrPoint {
    pub snr_db: f64,
    pub errors: u64,
    pub symbols: u64,
    pub ser: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub points: Vec<SnrPoint>,
}

impl SimResult {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("snr_db,errors,symbols,ser,ci_low,ci_high\n");
        for p in &self.points {
            writeln!(
                s,
                "{},{},{},{},{},{}",
                p.snr_db, p.errors, p.symbols, p.ser, p.ci_low, p.ci_high
            )
            .expect("string write");
        }
        s
    }

    /// Indices where the SER rises above the previous point by more than
    /// the two intervals allow.
    pub fn non_monotone_points(&self) -> Vec<usize> {
        self.points
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[1].ci_low > w[0].ci_high)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

/// Channel, symbol indices and unit-variance noise of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialDraw {
    pub channel: Vec<Complex64>,
    pub symbols: Vec<usize>,
    pub noise: Vec<Complex64>,
}

fn cgauss(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn draw_trial(
    seed: u64,
    trial: u64,
    p: usize,
    n: usize,
    k: usize,
    n_rx: usize,
    m: usize,
) -> TrialDraw {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let channel = (0..n * n_rx).map(|_| cgauss(&mut rng)).collect();
    let symbols = (0..k).map(|_| rng.random_range(0..m)).collect();
    let noise = (0..p * n_rx).map(|_| cgauss(&mut rng)).collect();
    TrialDraw {
        channel,
        symbols,
        noise,
    }
}

struct Engine {
    decoder: Decoder,
    points: Vec<Complex64>,
    scale: f64,
    sigmas: Vec<f64>,
    n_rx: usize,
    seed: u64,
}

impl Engine {
    fn trial(&self, t: u64) -> Result<Vec<u64>, SimError> {
        let disp = self.decoder.dispersion();
        let (p, n, k) = (disp.p(), disp.n(), disp.k());
        let draw = draw_trial(self.seed, t, p, n, k, self.n_rx, self.points.len());
        let syms: Vec<Complex64> = draw
            .symbols
            .iter()
            .map(|&i| self.points[i] * self.scale)
            .collect();
        let clean = transmit(&disp.encode(&syms)?, &draw.channel, p, n, self.n_rx);
        self.sigmas
            .iter()
            .map(|&sigma| {
                let y: Vec<Complex64> = clean
                    .iter()
                    .zip(&draw.noise)
                    .map(|(a, w)| a + w * sigma)
                    .collect();
                let got = self
                    .decoder
                    .decode(&y, &draw.channel, self.n_rx, self.scale)?;
                Ok(got
                    .iter()
                    .zip(&draw.symbols)
                    .filter(|(a, b)| a != b)
                    .count() as u64)
            })
            .collect()
    }
}

pub fn run(cfg: &SimConfig) -> Result<SimResult, SimError> {
    if cfg.trials == 0 {
        return Err(SimError::NoTrials);
    }
    if cfg.snr_db.is_empty() {
        return Err(SimError::EmptyGrid);
    }
    if cfg.n_rx == 0 {
        return Err(SimError::NoReceiver);
    }
    let norm = normalize(&cfg.design, &cfg.constellation, cfg.constraint)?;
    let points = cfg.constellation.points();
    let engine = Engine {
        decoder: Decoder::new(&cfg.design, points.clone())?,
        points,
        scale: norm.scale(),
        sigmas: cfg
            .snr_db
            .iter()
            .map(|&s| norm.noise_variance(s).sqrt())
            .collect(),
        n_rx: cfg.n_rx,
        seed: cfg.seed,
    };
    let grid = cfg.snr_db.len();
    let sweep = || -> Result<Vec<u64>, SimError> {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| engine.trial(t))
            .try_reduce(
                || vec![0u64; grid],
                |a, b| Ok(a.iter().zip(&b).map(|(x, y)| x + y).collect()),
            )
    };
    let errors = match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| SimError::ThreadPool(e.to_string()))?
            .install(sweep)?,
        None => sweep()?,
    };
    let symbols = cfg.trials * cfg.design.k() as u64;
    let points = cfg
        .snr_db
        .iter()
        .zip(errors)
        .map(|(&snr_db, errors)| {
            let (ci_low, ci_high) = wilson(errors, symbols, Z95);
            SnrPoint {
                snr_db,
                errors,
                symbols,
                ser: errors as f64 / symbols as f64,
                ci_low,
                ci_high,
            }
        })
        .collect();
    Ok(SimResult { points })
}

/// `start:step:stop` in dB, inclusive of `stop` up to rounding.
pub fn parse_snr_grid(spec: &str) -> Option<Vec<f64>> {
    let parts: Vec<f64> = spec
        .split(':')
        .map(|s| s.trim().parse().ok())
        .collect::<Option<_>>()?;
    let [start, step, stop] = parts[..] else {
        return None;
    };
    if step.is_nan() || step <= 0.0 || stop < start || !start.is_finite() || !stop.is_finite() {
        return None;
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Some((0..count).map(|i| start + i as f64 * step).collect())
}
