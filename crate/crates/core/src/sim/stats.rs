/// 95% two-sided normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `errors` successes out of `total`.
pub fn wilson(errors: u64, total: u64, z: f64) -> (f64, f64) {
    if total == 0 {
        return (0.0, 1.0);
    }
    let n = total as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if errors == 0 {
        0.0
    } else {
        (centre - half).max(0.0)
    };
    let hi = if errors == total {
        1.0
    } else {
        (centre + half).min(1.0)
    };
    (lo, hi)
}

/// Composite Simpson rule with `intervals` (rounded up to even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let m = intervals.max(2).next_multiple_of(2);
    let h = (b - a) / m as f64;
    let inner: f64 = (1..m)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    h / 3.0 * (f(a) + f(b) + inner)
}

/// QPSK symbol error rate with two-branch maximal-ratio combining, each
/// branch of mean SNR `branch_snr`, via the MGF form of the square-QAM error.
pub fn qpsk_two_branch_ser(branch_snr: f64) -> f64 {
    let (q, g) = (0.5, 0.5);
    let mgf = |theta: f64| {
        let s = theta.sin();
        let x = 1.0 + g * branch_snr / (s * s);
        1.0 / (x * x)
    };
    let pi = std::f64::consts::PI;
    // the integrand vanishes at θ = 0
    let eps = 1e-12;
    4.0 * q / pi * simpson(mgf, eps, pi / 2.0, 4000)
        - 4.0 * q * q / pi * simpson(mgf, eps, pi / 4.0, 4000)
}

/// Two-antenna Alamouti, one receive antenna, unit-energy QPSK at total
/// transmit SNR `snr` (linear), split evenly across antennas.
pub fn alamouti_qpsk_ser(snr: f64) -> f64 {
    qpsk_two_branch_ser(snr / 2.0)
}
