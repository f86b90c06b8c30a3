//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Statistical criteria use a fixed seed chosen up front.

mod common;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stbc_forge::construct as c;
use stbc_forge::index::size_pair;
use stbc_forge::io;
use stbc_forge::metrics::{
    self, zero_fraction_counted, zero_fraction_formula, Constellation, Fraction,
};
use stbc_forge::sim::{self, stats, Constraint, SimConfig, SimResult};
use stbc_forge::Design;
use std::time::Instant;

type Verdict = Result<String, String>;
type Check = fn() -> Verdict;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn orthogonal(label: &str, d: Result<Design, c::ConstructError>) -> Result<(), String> {
    let d = d.map_err(|e| format!("{label}: {e}"))?;
    ensure(d.is_orthogonal(), || {
        format!("{label} fails the Gram identity")
    })
}

fn gram_identity() -> Verdict {
    let mut count = 0;
    for a in 1..=6 {
        orthogonal(&format!("square_cod({a})"), c::square_cod(a))?;
        count += 1;
    }
    for a in 1..=8 {
        orthogonal(&format!("h_prime({a})"), c::h_prime(a))?;
        count += 1;
    }
    for m in 1..=2 {
        orthogonal(&format!("hat_4m({m})"), c::hat_4m(m))?;
        count += 1;
    }
    for n in 2..=6u32 {
        for l in 1..1u64 << n {
            orthogonal(
                &format!("pair_rows({n}, {l})"),
                c::pair_rows(n, l).map(|x| x.0),
            )?;
            count += 1;
        }
    }
    for t in 2..=8usize {
        let order = c::cis_base(t).map_err(|e| e.to_string())?.order();
        for l in 1..1u64 << order {
            orthogonal(&format!("cis_code({t}, {l})"), c::cis_code(t, l))?;
            count += 1;
        }
    }
    Ok(format!("{count} designs, zero tolerance"))
}

fn sizes() -> Verdict {
    let cases: [(&str, Design, [usize; 3]); 4] = [
        (
            "3 antennas",
            c::h_prime(2).map_err(|e| e.to_string())?,
            [4, 3, 3],
        ),
        (
            "5 antennas",
            c::h_prime(4).map_err(|e| e.to_string())?,
            [15, 5, 10],
        ),
        (
            "6 antennas",
            c::h_prime(5).map_err(|e| e.to_string())?,
            [30, 6, 20],
        ),
        (
            "8 antennas, halved delay",
            c::hat_4m(2).map_err(|e| e.to_string())?,
            [56, 8, 35],
        ),
    ];
    for (label, d, want) in &cases {
        ensure(d.size() == *want, || {
            format!("{label}: {:?}, want {want:?}", d.size())
        })?;
    }
    for t in [3u64, 5, 6] {
        let s = size_pair(t).map_err(|e| e.to_string())?;
        let d: Design = c::h_prime(t as u32 - 1).map_err(|e| e.to_string())?;
        ensure(s.k == d.k().into() && s.p == d.p().into(), || {
            format!("t={t}: sizing formula disagrees with the design")
        })?;
    }
    Ok("[4,3,3] [15,5,10] [30,6,20] [56,8,35]".into())
}

fn generated(name: &str) -> Result<Design, String> {
    match name {
        "code_i" => c::truncated_square(2, 3),
        "code_ii" => c::cis_code(3, 1),
        "code_iii" => c::cis_base(3).and_then(|b| b.pair_rows::<BigInt>(1).map(|x| x.0)),
        "tilde_h4" => c::build_tilde(4),
        "h4" => c::h_prime(4),
        "hat_h8" => c::hat_4m(2),
        "l4" => c::cis_code(4, 1),
        "l5" => c::cis_code(5, 1),
        other => return Err(format!("no generator for {other}")),
    }
    .map_err(|e| e.to_string())
}

fn fixtures() -> Verdict {
    let mut logged = Vec::new();
    for f in io::fixtures() {
        let corrected: Design = f.design().map_err(|e| format!("{}: {e}", f.name))?;
        let printed: Design = f.printed().map_err(|e| format!("{}: {e}", f.name))?;
        let g = generated(&f.name)?;
        ensure(corrected == g, || {
            format!("{} differs from its generator", f.name)
        })?;
        for (a, b) in printed.entries().iter().zip(g.entries()) {
            ensure(a.is_zero() == b.is_zero() && a.vars() == b.vars(), || {
                format!("{}: zero pattern or variable differs", f.name)
            })?;
        }
        let diff = (0..g.p() * g.n())
            .filter(|&i| printed.entries()[i] != g.entries()[i])
            .count();
        ensure(diff == f.errata.len(), || {
            format!(
                "{}: {diff} differing cells, {} logged",
                f.name,
                f.errata.len()
            )
        })?;
        // a logged cell is justified when restoring the printed cells of its
        // column breaks orthogonality
        for e in &f.errata {
            let column: Vec<(usize, usize)> = f
                .errata
                .iter()
                .filter(|o| o.col == e.col)
                .map(|o| (o.row, o.col))
                .collect();
            let broken = g.map_entries(|r, col, x| {
                if column.contains(&(r, col)) {
                    printed.entry(r, col).clone()
                } else {
                    x.clone()
                }
            });
            ensure(!broken.is_orthogonal(), || {
                format!("{} ({}, {}) is not justified", f.name, e.row, e.col)
            })?;
            ensure(!e.reason.is_empty(), || {
                format!("{} ({}, {}) has no reason", f.name, e.row, e.col)
            })?;
            logged.push(format!("{}({},{})", f.name, e.row, e.col));
        }
        ensure(printed.is_orthogonal() == f.errata.is_empty(), || {
            format!("{}: errata do not explain the printed form", f.name)
        })?;
    }
    Ok(format!(
        "8 fixtures; logged misprints: {}",
        logged.join(" ")
    ))
}

fn zero_fraction_closed_form() -> Verdict {
    let mut count = 0;
    for n in 2..=8u32 {
        for l in 1..1u64 << n {
            let (m, _): (Design, _) = c::pair_rows(n, l).map_err(|e| e.to_string())?;
            let counted = zero_fraction_counted(&m);
            let formula = zero_fraction_formula(n, l).map_err(|e| e.to_string())?;
            ensure(counted == formula, || {
                format!("n={n}, l={l}: counted {counted}, formula {formula}")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} (n, l) pairs, exact equality"))
}

fn table() -> Verdict {
    // transcribed table, rows n = 4..7, entries for w = 1..n
    let want: [&[&str]; 4] = [
        &["0.1067", "0.1067", "0.1200", "0.1200"],
        &["0.1111", "0.1111", "0.1111", "0.1111", "0.3333"],
        &["0.1709", "0.1709", "0.1607", "0.1607", "0.1837", "0.1837"],
        &[
            "0.1741", "0.1741", "0.1607", "0.1607", "0.1741", "0.1741", "0.3750",
        ],
    ];
    let rows = metrics::table1(4, 7).map_err(|e| e.to_string())?;
    ensure(rows.len() == 22, || format!("{} rows", rows.len()))?;
    for r in &rows {
        let expected = want[(r.n - 4) as usize][(r.w - 1) as usize];
        let got = metrics::to_decimal4(&r.counted);
        ensure(got == expected, || {
            format!("n={}, w={}: {got}, table {expected}", r.n, r.w)
        })?;
    }
    Ok("22 cells to 4 decimals".into())
}

fn l_family() -> Verdict {
    let l4: Design = c::cis_code(4, 1).map_err(|e| e.to_string())?;
    let l5: Design = c::cis_code(5, 1).map_err(|e| e.to_string())?;
    ensure(l4.zero_count() == 0, || {
        format!("L_4 has {} zeros", l4.zero_count())
    })?;
    let f = zero_fraction_counted(&l5);
    let want = Fraction::new(8.into(), 75.into());
    ensure(f == want, || format!("L_5 zero fraction {f}"))?;
    Ok("L_4: 0 zeros, L_5: 8/75".into())
}

fn structure() -> Verdict {
    let mut parity = 0;
    for a in 1..=10 {
        parity += common::weight_parity(a)?;
        common::row_union(a)?;
    }
    for a in 1..=8 {
        common::conjugation_separated(a)?;
    }
    let mut pairs = 0;
    for n in 2..=6u32 {
        for l in 1..1u64 << n {
            common::pairing_uniformity(n, l)?;
            pairs += 1;
        }
    }
    Ok(format!(
        "{parity} parity instances, row sets a<=10, separation a<=8, {pairs} pairings"
    ))
}

fn characterisation() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let samples = 20_000;
    let mut orthogonal = 0;
    for _ in 0..samples {
        if common::characterisation_agrees(&common::random_atom_matrix(&mut rng))? {
            orthogonal += 1;
        }
    }
    ensure(orthogonal > 0 && orthogonal < samples, || {
        "sampler produced a single verdict".into()
    })?;
    Ok(format!(
        "{samples} matrices agree ({orthogonal} orthogonal)"
    ))
}

const TRIALS: u64 = 100_000;
const SEED: u64 = 1;

fn grid() -> Vec<f64> {
    (0..8).map(|i| 2.0 * i as f64).collect()
}

fn simulate(d: &Design, constraint: Constraint) -> Result<SimResult, String> {
    let cfg = SimConfig {
        design: d.clone(),
        constellation: Constellation::qpsk(),
        n_rx: 1,
        snr_db: grid(),
        constraint,
        trials: TRIALS,
        seed: SEED,
        workers: None,
    };
    sim::run(&cfg).map_err(|e| e.to_string())
}

fn overlap(a: &sim::SnrPoint, b: &sim::SnrPoint) -> bool {
    a.ci_low <= b.ci_high && b.ci_low <= a.ci_high
}

/// Every check runs; failures are joined.
fn all_of(checks: impl Iterator<Item = Result<(), String>>) -> Result<(), String> {
    let errs: Vec<String> = checks.filter_map(Result::err).collect();
    ensure(errs.is_empty(), || errs.join("; "))
}

fn ser_list(r: &SimResult) -> String {
    r.points
        .iter()
        .map(|p| format!("{:.2e}", p.ser))
        .collect::<Vec<_>>()
        .join(" ")
}

fn simulation() -> Vec<(String, Verdict)> {
    let mut out = Vec::new();
    let mut avg = Vec::new();
    let mut peak = Vec::new();
    for t in [3usize, 5] {
        let pair = c::cis_base(t)
            .and_then(|b| Ok((b.to_design::<BigInt>()?, c::cis_code::<BigInt>(t, 1)?)));
        let (cod, cis) = match pair {
            Ok(p) => p,
            Err(e) => {
                out.push(("9".into(), Err(e.to_string())));
                return out;
            }
        };
        for (constraint, sink) in [
            (Constraint::Average, &mut avg),
            (Constraint::Peak, &mut peak),
        ] {
            match (simulate(&cod, constraint), simulate(&cis, constraint)) {
                (Ok(a), Ok(b)) => sink.push((t, a, b)),
                (Err(e), _) | (_, Err(e)) => {
                    eprintln!("{t} antennas: {e}");
                    sink.push((
                        t,
                        SimResult { points: vec![] },
                        SimResult { points: vec![] },
                    ));
                }
            }
        }
    }

    let a = all_of(avg.iter().map(|(t, cod, cis)| {
        ensure(cod.points.len() == 8 && cis.points.len() == 8, || {
            format!("{t} antennas: run failed")
        })?;
        let bad: Vec<f64> = cod
            .points
            .iter()
            .zip(&cis.points)
            .filter(|(x, y)| !overlap(x, y))
            .map(|(x, _)| x.snr_db)
            .collect();
        ensure(bad.is_empty(), || {
            format!("{t} antennas: disjoint intervals at {bad:?} dB")
        })
    }));
    let detail = avg
        .iter()
        .map(|(t, cod, cis)| format!("t={t} COD [{}] CIS [{}]", ser_list(cod), ser_list(cis)))
        .collect::<Vec<_>>()
        .join("; ");
    out.push((
        "9a".into(),
        a.map(|_| format!("average power, intervals overlap: {detail}"))
            .map_err(|e| format!("{e}; {detail}")),
    ));

    let b = all_of(peak.iter().map(|(t, cod, cis)| {
        ensure(cod.points.len() == 8 && cis.points.len() == 8, || {
            format!("{t} antennas: run failed")
        })?;
        let top = cod.points[5..].iter().zip(&cis.points[5..]);
        let bad: Vec<f64> = top
            .filter(|(x, y)| y.ci_high >= x.ci_low)
            .map(|(x, _)| x.snr_db)
            .collect();
        ensure(bad.is_empty(), || {
            format!("{t} antennas: CIS not separated below COD at {bad:?} dB")
        })
    }));
    let detail = peak
        .iter()
        .map(|(t, cod, cis)| format!("t={t} COD [{}] CIS [{}]", ser_list(cod), ser_list(cis)))
        .collect::<Vec<_>>()
        .join("; ");
    out.push((
        "9b".into(),
        b.map(|_| format!("peak power, CIS below COD: {detail}"))
            .map_err(|e| format!("{e}; {detail}")),
    ));

    let c_verdict = (|| {
        let alamouti: Design = c::square_cod(1).map_err(|e| e.to_string())?;
        let r = simulate(&alamouti, Constraint::Average)?;
        let mut misses = Vec::new();
        let mut worst: f64 = 0.0;
        for p in &r.points {
            let exact = stats::alamouti_qpsk_ser(10f64.powf(p.snr_db / 10.0));
            worst = worst.max((p.ser - exact).abs() / exact);
            if exact < p.ci_low || exact > p.ci_high {
                misses.push(format!(
                    "{} dB: analytic {exact:.4e} outside [{:.4e}, {:.4e}]",
                    p.snr_db, p.ci_low, p.ci_high
                ));
            }
        }
        ensure(misses.is_empty(), || misses.join("; "))?;
        Ok(format!(
            "8 points inside the interval, worst relative gap {:.2}%",
            100.0 * worst
        ))
    })();
    out.push(("9c".into(), c_verdict));
    out
}

fn determinism() -> Verdict {
    let d: Design = c::cis_code(5, 1).map_err(|e| e.to_string())?;
    let mut runs = Vec::new();
    for workers in [Some(1), Some(4), Some(1)] {
        let cfg = SimConfig {
            design: d.clone(),
            constellation: Constellation::qam16(),
            n_rx: 2,
            snr_db: vec![4.0, 10.0, 16.0],
            constraint: Constraint::Peak,
            trials: 5_000,
            seed: 99,
            workers,
        };
        runs.push(
            sim::run(&cfg)
                .map_err(|e| e.to_string())?
                .points
                .iter()
                .map(|p| p.errors)
                .collect::<Vec<_>>(),
        );
    }
    ensure(runs.windows(2).all(|w| w[0] == w[1]), || {
        format!("error counts differ: {runs:?}")
    })?;
    Ok(format!("1 and 4 workers, repeated: {:?}", runs[0]))
}

fn main() {
    let mut failures = 0;
    let mut report = |id: &str, v: Verdict, started: Instant| {
        let secs = started.elapsed().as_secs_f64();
        match v {
            Ok(m) => println!("PASS criterion {id}: {m} ({secs:.1}s)"),
            Err(m) => {
                failures += 1;
                println!("FAIL criterion {id}: {m} ({secs:.1}s)");
            }
        }
    };
    let checks: [(&str, Check); 8] = [
        ("1", gram_identity),
        ("2", sizes),
        ("3", fixtures),
        ("4", zero_fraction_closed_form),
        ("5", table),
        ("6", l_family),
        ("7", structure),
        ("8", characterisation),
    ];
    for (id, check) in checks {
        let t = Instant::now();
        report(id, check(), t);
    }
    let t = Instant::now();
    for (id, v) in simulation() {
        report(&id, v, t);
    }
    let t = Instant::now();
    report("10", determinism(), t);
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
