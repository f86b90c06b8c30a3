use super::SimError;
use crate::design::DesignMatrix;
use crate::exact::ExactInt;
use num_complex::Complex64;

/// Largest hypothesis count searched jointly for one symbol group.
pub const MAX_GROUP_HYPOTHESES: usize = 1 << 16;

/// `X = Σ_c s_c D_c` over the `2k` real coordinates, stored sparsely.
#[derive(Debug, Clone)]
pub struct Dispersion {
    p: usize,
    n: usize,
    k: usize,
    /// `(row, col, coefficient)` per coordinate index `2·var + {0: I, 1: Q}`.
    coords: Vec<Vec<(usize, usize, Complex64)>>,
}

impl Dispersion {
    pub fn new<I: ExactInt>(d: &DesignMatrix<I>) -> Self {
        let mut coords = vec![Vec::new(); 2 * d.k()];
        for r in 0..d.p() {
            for c in 0..d.n() {
                for (coord, z) in d.entry(r, c).terms() {
                    coords[coord.index()].push((r, c, z.to_complex::<f64>()));
                }
            }
        }
        Self {
            p: d.p(),
            n: d.n(),
            k: d.k(),
            coords,
        }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `p × n` codeword, row-major.
    pub fn encode(&self, symbols: &[Complex64]) -> Result<Vec<Complex64>, SimError> {
        if symbols.len() != self.k {
            return Err(SimError::Dimension(format!(
                "{} symbols for k = {}",
                symbols.len(),
                self.k
            )));
        }
        let mut x = vec![Complex64::new(0.0, 0.0); self.p * self.n];
        for (idx, terms) in self.coords.iter().enumerate() {
            let s = symbols[idx / 2];
            let v = if idx % 2 == 0 { s.re } else { s.im };
            if v != 0.0 {
                for &(r, c, z) in terms {
                    x[r * self.n + c] += z * v;
                }
            }
        }
        Ok(x)
    }

    /// `vec(D_c H)` for each coordinate, `H` being `n × n_rx` row-major.
    fn effective(&self, h: &[Complex64], n_rx: usize) -> Vec<Vec<Complex64>> {
        self.coords
            .iter()
            .map(|terms| {
                let mut v = vec![Complex64::new(0.0, 0.0); self.p * n_rx];
                for &(r, c, z) in terms {
                    for rx in 0..n_rx {
                        v[r * n_rx + rx] += z * h[c * n_rx + rx];
                    }
                }
                v
            })
            .collect()
    }
}

/// `p × n_rx` output of `X H`, row-major.
pub fn transmit(
    x: &[Complex64],
    h: &[Complex64],
    p: usize,
    n: usize,
    n_rx: usize,
) -> Vec<Complex64> {
    let mut y = vec![Complex64::new(0.0, 0.0); p * n_rx];
    for t in 0..p {
        for c in 0..n {
            let xc = x[t * n + c];
            for rx in 0..n_rx {
                y[t * n_rx + rx] += xc * h[c * n_rx + rx];
            }
        }
    }
    y
}

fn re_inner(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.re * y.re + x.im * y.im)
        .sum()
}

/// Joint ML over symbol groups that never share an entry.
///
/// Exact ML whenever `Re⟨D_c H, D_d H⟩ = 0` across groups, which every
/// orthogonal design satisfies. Non-orthogonal designs get a single group.
#[derive(Debug, Clone)]
pub struct Decoder {
    disp: Dispersion,
    groups: Vec<Vec<usize>>,
    points: Vec<Complex64>,
}

impl Decoder {
    pub fn new<I: ExactInt>(d: &DesignMatrix<I>, points: Vec<Complex64>) -> Result<Self, SimError> {
        let k = d.k();
        let groups = if d.is_orthogonal() {
            cooccurrence_groups(d)
        } else {
            vec![(0..k).collect()]
        };
        for g in &groups {
            let count = (points.len() as f64).powi(g.len() as i32);
            if count > MAX_GROUP_HYPOTHESES as f64 {
                return Err(SimError::TooManyHypotheses {
                    group: g.clone(),
                    count,
                });
            }
        }
        Ok(Self {
            disp: Dispersion::new(d),
            groups,
            points,
        })
    }

    pub fn dispersion(&self) -> &Dispersion {
        &self.disp
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// Point indices minimising `‖y − scale·X(s) H‖²`.
    pub fn decode(
        &self,
        y: &[Complex64],
        h: &[Complex64],
        n_rx: usize,
        scale: f64,
    ) -> Result<Vec<usize>, SimError> {
        let (p, n) = (self.disp.p, self.disp.n);
        if h.len() != n * n_rx || y.len() != p * n_rx {
            return Err(SimError::Dimension(format!(
                "channel {} / received {} for n = {n}, p = {p}, n_rx = {n_rx}",
                h.len(),
                y.len()
            )));
        }
        let v = self.disp.effective(h, n_rx);
        let r: Vec<f64> = v.iter().map(|vc| re_inner(vc, y)).collect();
        let m = self.points.len();
        let mut out = vec![0usize; self.disp.k];
        for g in &self.groups {
            let idx: Vec<usize> = g.iter().flat_map(|&var| [2 * var, 2 * var + 1]).collect();
            let gram: Vec<f64> = idx
                .iter()
                .flat_map(|&a| {
                    idx.iter()
                        .map(|&b| re_inner(&v[a], &v[b]))
                        .collect::<Vec<_>>()
                })
                .collect();
            let dim = idx.len();
            let mut best = (f64::INFINITY, 0usize);
            let total = m.pow(g.len() as u32);
            let mut s = vec![0.0f64; dim];
            for hyp in 0..total {
                let mut rest = hyp;
                for (slot, _) in g.iter().enumerate() {
                    let pt = self.points[rest % m];
                    rest /= m;
                    s[2 * slot] = scale * pt.re;
                    s[2 * slot + 1] = scale * pt.im;
                }
                let mut metric = 0.0;
                for a in 0..dim {
                    let mut row = 0.0;
                    for b in 0..dim {
                        row += gram[a * dim + b] * s[b];
                    }
                    metric += s[a] * (row - 2.0 * r[idx[a]]);
                }
                if metric < best.0 {
                    best = (metric, hyp);
                }
            }
            let mut rest = best.1;
            for &var in g {
                out[var] = rest % m;
                rest /= m;
            }
        }
        Ok(out)
    }
}

/// Connected components of "appear in the same entry".
fn cooccurrence_groups<I: ExactInt>(d: &DesignMatrix<I>) -> Vec<Vec<usize>> {
    let k = d.k();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in d.entries() {
        let vars = e.vars();
        for w in vars.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; k];
    for v in 0..k {
        let root = find(&mut parent, v);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(v);
    }
    groups
}
