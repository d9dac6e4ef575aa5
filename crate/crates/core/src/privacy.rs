//! Privacy checks: an algebraic certificate on the evaluation points and a
//! histogram audit of adversary views.
//!
//! The certificate checks that every `(t-1)`-subset of workers sees the
//! masks through an invertible matrix `[alpha_i^(k^2 + j)]`, which is what
//! makes its shares uniform. The audit runs the protocol many times on two
//! input tuples and compares the empirical view distributions. It looks at
//! single coordinates and at every pair of coordinates: with `t` colluders
//! each share is still uniform on its own, and the leak shows up only
//! jointly.

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::circuit::{compile, Expr};
use crate::cluster::{Cluster, SystemConfig};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::interpolation::is_invertible;
use crate::matrix::Matrix;
use crate::rng::{child_seed, purpose_stream};
use crate::transcript::project_view;

/// Subset counts up to this are enumerated; beyond it, this many are sampled.
pub const EXHAUSTIVE_LIMIT: u64 = 100_000;

/// Histogram cells an audit may allocate.
pub const HISTOGRAM_CELL_CAP: u128 = 1 << 24;

/// Default audit threshold on total-variation distance.
pub const DEFAULT_TV_THRESHOLD: f64 = 0.03;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub k: usize,
    pub t: usize,
    pub workers: usize,
    pub subset_size: usize,
    /// `C(N, t-1)`, saturating.
    pub total_subsets: u64,
    pub checked: u64,
    pub exhaustive: bool,
    /// Subsets whose mask matrix is singular.
    pub failures: Vec<Vec<usize>>,
    pub passed: bool,
}

fn binomial(n: u64, r: u64) -> u64 {
    let r = r.min(n.saturating_sub(r));
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Advances `c` to the next `r`-combination of `0..n` in lexicographic
/// order; false once exhausted.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let r = c.len();
    for i in (0..r).rev() {
        if c[i] < n - r + i {
            c[i] += 1;
            for j in i + 1..r {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn mask_matrix_invertible(field: &Field, alphas: &[FieldElement], subset: &[usize], k: usize) -> bool {
    let rows: Vec<Vec<FieldElement>> = subset
        .iter()
        .map(|&i| {
            (0..subset.len())
                .map(|j| field.pow(alphas[i], (k * k + j) as u64))
                .collect()
        })
        .collect();
    is_invertible(field, &rows)
}

/// Checks every `(t-1)`-subset of `alphas` (or a seeded sample of
/// [`EXHAUSTIVE_LIMIT`] subsets when there are more).
pub fn privacy_certificate(field: &Field, alphas: &[FieldElement], k: usize, t: usize, seed: u64) -> CertificateReport {
    let n = alphas.len();
    let r = t.saturating_sub(1).min(n);
    let total = binomial(n as u64, r as u64);
    let exhaustive = total <= EXHAUSTIVE_LIMIT;
    let mut failures = Vec::new();
    let mut checked = 0u64;
    let mut check = |s: &[usize]| {
        checked += 1;
        if !mask_matrix_invertible(field, alphas, s, k) {
            failures.push(s.to_vec());
        }
    };
    if exhaustive {
        let mut c: Vec<usize> = (0..r).collect();
        loop {
            check(&c);
            if !next_combination(&mut c, n) {
                break;
            }
        }
    } else {
        let mut rng = purpose_stream(seed, "certificate", 0);
        for _ in 0..EXHAUSTIVE_LIMIT {
            let mut s = sample(&mut rng, n, r).into_vec();
            s.sort_unstable();
            check(&s);
        }
    }
    CertificateReport {
        k,
        t,
        workers: n,
        subset_size: r,
        total_subsets: total,
        checked,
        exhaustive,
        passed: failures.is_empty(),
        failures,
    }
}

/// One histogram experiment: the same circuit on two input tuples.
#[derive(Debug, Clone)]
pub struct AuditSpec {
    pub config: SystemConfig,
    pub expr: Expr,
    pub inputs_a: Vec<Matrix>,
    pub inputs_b: Vec<Matrix>,
    pub trials: usize,
    pub tv_threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub subset: Vec<usize>,
    pub beyond_threshold: bool,
    pub trials: usize,
    pub coordinates: usize,
    pub max_tv_single: f64,
    pub max_tv_pair: f64,
    /// Larger of the two above; the figure compared against the threshold.
    pub max_tv: f64,
    pub tv_threshold: f64,
    /// Uniformity statistic per coordinate, degrees of freedom `p - 1`.
    pub chi_square_a: Vec<f64>,
    pub chi_square_b: Vec<f64>,
    pub chi_square_df: u64,
    pub exceeds_threshold: bool,
}

struct Histograms {
    p: usize,
    coords: usize,
    single: Vec<u32>,
    pair: Vec<u32>,
}

impl Histograms {
    fn new(p: usize, coords: usize) -> Self {
        let pairs = coords * coords.saturating_sub(1) / 2;
        Histograms {
            p,
            coords,
            single: vec![0; coords * p],
            pair: vec![0; pairs * p * p],
        }
    }

    fn add(&mut self, v: &[usize]) {
        let p = self.p;
        let mut slot = 0;
        for i in 0..self.coords {
            self.single[i * p + v[i]] += 1;
            for j in i + 1..self.coords {
                self.pair[slot * p * p + v[i] * p + v[j]] += 1;
                slot += 1;
            }
        }
    }
}

fn max_tv(a: &[u32], b: &[u32], cell: usize, n: f64) -> f64 {
    a.chunks(cell)
        .zip(b.chunks(cell))
        .map(|(x, y)| {
            0.5 * x
                .iter()
                .zip(y)
                .map(|(&u, &v)| (u as f64 - v as f64).abs())
                .sum::<f64>()
                / n
        })
        .fold(0.0, f64::max)
}

fn chi_square(h: &Histograms, n: f64) -> Vec<f64> {
    let e = n / h.p as f64;
    h.single
        .chunks(h.p)
        .map(|c| c.iter().map(|&o| (o as f64 - e).powi(2) / e).sum())
        .collect()
}

/// Audits one subset. `|S| <= t - 1` is enforced.
pub fn distribution_audit(spec: &AuditSpec, subset: &[usize]) -> Result<AuditReport> {
    let max = spec.config.t.saturating_sub(1);
    if subset.len() > max {
        return Err(Error::SubsetTooLarge {
            size: subset.len(),
            max,
        });
    }
    Ok(distribution_audit_many(spec, &[subset.to_vec()])?.remove(0))
}

/// Audits several subsets against the same runs. Subsets may exceed the
/// threshold; such reports are marked `beyond_threshold`.
pub fn distribution_audit_many(spec: &AuditSpec, subsets: &[Vec<usize>]) -> Result<Vec<AuditReport>> {
    let cfg = &spec.config;
    let p = cfg.modulus as u128;
    if p > u32::MAX as u128 {
        return Err(Error::ParametersTooLarge(format!(
            "modulus {} too large for histograms",
            cfg.modulus
        )));
    }
    if let Some(&bad) = subsets.iter().flatten().find(|&&w| w >= cfg.workers) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            limit: cfg.workers,
        });
    }
    let cluster = Cluster::new(cfg.clone())?;
    let circuit = compile(&spec.expr);
    let run_views = |inputs: &[Matrix], tag: &str| -> Result<Vec<Histograms>> {
        let mut hists: Vec<Option<Histograms>> = subsets.iter().map(|_| None).collect();
        for i in 0..spec.trials {
            let seed = child_seed(cfg.seed, tag, i as u64);
            let out = cluster.run_circuit(&circuit, inputs, seed)?;
            for (s, h) in subsets.iter().zip(hists.iter_mut()) {
                let coords: Vec<usize> = project_view(&out.transcript, s)
                    .coordinates()
                    .iter()
                    .map(|x| x.value() as usize)
                    .collect();
                let h = match h {
                    Some(h) => h,
                    slot => {
                        let c = coords.len() as u128;
                        let cells = c * p + c * c.saturating_sub(1) / 2 * p * p;
                        if cells > HISTOGRAM_CELL_CAP {
                            return Err(Error::ParametersTooLarge(format!(
                                "{c} view coordinates over p = {p} need {cells} histogram cells"
                            )));
                        }
                        slot.insert(Histograms::new(p as usize, coords.len()))
                    }
                };
                h.add(&coords);
            }
        }
        Ok(hists
            .into_iter()
            .map(|h| h.unwrap_or_else(|| Histograms::new(p as usize, 0)))
            .collect())
    };
    let ha = run_views(&spec.inputs_a, "audit-a")?;
    let hb = run_views(&spec.inputs_b, "audit-b")?;
    let n = spec.trials.max(1) as f64;
    Ok(subsets
        .iter()
        .zip(ha.iter().zip(&hb))
        .map(|(s, (a, b))| {
            let single = max_tv(&a.single, &b.single, a.p, n);
            let pair = max_tv(&a.pair, &b.pair, a.p * a.p, n);
            let worst = single.max(pair);
            AuditReport {
                subset: s.clone(),
                beyond_threshold: s.len() + 1 > cfg.t,
                trials: spec.trials,
                coordinates: a.coords,
                max_tv_single: single,
                max_tv_pair: pair,
                max_tv: worst,
                tv_threshold: spec.tv_threshold,
                chi_square_a: chi_square(a, n),
                chi_square_b: chi_square(b, n),
                chi_square_df: cfg.modulus - 1,
                exceeds_threshold: worst > spec.tv_threshold,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_expression;
    use crate::sharing::sample_alphas;

    #[test]
    fn combinations_enumerate_binomial() {
        for (n, r) in [(5usize, 2usize), (6, 0), (4, 4), (13, 2)] {
            let mut c: Vec<usize> = (0..r).collect();
            let mut count = 1;
            while next_combination(&mut c, n) {
                count += 1;
            }
            assert_eq!(count, binomial(n as u64, r as u64));
        }
        assert_eq!(binomial(13, 2), 78);
        assert_eq!(binomial(200, 100), u64::MAX);
    }

    #[test]
    fn t2_certificate_is_nonzero_check() {
        // exhaustive over all point sets of size 3 in Z_7
        let f = Field::new(7).unwrap();
        for a in 0..7 {
            for b in 0..7 {
                for c in 0..7 {
                    let al = [f.elem(a), f.elem(b), f.elem(c)];
                    let rep = privacy_certificate(&f, &al, 1, 2, 0);
                    assert_eq!(rep.passed, a != 0 && b != 0 && c != 0);
                }
            }
        }
    }

    #[test]
    fn certificate_flags_zero_point() {
        let f = Field::default();
        let mut al = sample_alphas(&f, 8, 2, 2, 1).unwrap();
        let rep = privacy_certificate(&f, &al, 2, 2, 0);
        assert!(rep.passed && rep.exhaustive);
        assert_eq!(rep.checked, 8);
        al[3] = FieldElement::ZERO;
        let rep = privacy_certificate(&f, &al, 2, 2, 0);
        assert_eq!(rep.failures, vec![vec![3]]);
    }

    #[test]
    fn t1_certificate_is_vacuous() {
        let f = Field::default();
        let rep = privacy_certificate(&f, &[f.elem(1), f.elem(2)], 2, 1, 0);
        assert!(rep.passed);
        assert_eq!(rep.subset_size, 0);
    }

    #[test]
    fn small_audit_and_caps() {
        let cfg = SystemConfig { gamma: 2, workers: 3, t: 2, k: 1, m: 1, modulus: 7, seed: 5 };
        let f = cfg.field().unwrap();
        let one = |v| Matrix::from_u64(&f, 1, 1, &[v]).unwrap();
        let spec = AuditSpec {
            config: cfg.clone(),
            expr: parse_expression("X1' * X2", &f).unwrap(),
            inputs_a: vec![one(1), one(2)],
            inputs_b: vec![one(5), one(3)],
            trials: 3000,
            tv_threshold: 0.2,
        };
        let reps = distribution_audit_many(&spec, &[vec![], vec![0], vec![0, 1]]).unwrap();
        assert_eq!(reps[0].coordinates, 0);
        assert_eq!(reps[0].max_tv, 0.0);
        assert_eq!(reps[1].coordinates, 5);
        assert!(!reps[1].exceeds_threshold, "{:?}", reps[1]);
        assert!(reps[2].beyond_threshold && reps[2].max_tv_pair > 0.5);
        assert!(matches!(distribution_audit(&spec, &[0, 1]), Err(Error::SubsetTooLarge { .. })));
        let big = AuditSpec { config: SystemConfig { modulus: crate::MERSENNE_61, ..cfg }, ..spec };
        assert!(matches!(distribution_audit(&big, &[0]), Err(Error::ParametersTooLarge(_))));
    }
}
