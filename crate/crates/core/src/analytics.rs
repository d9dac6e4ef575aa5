//! Worker counts and exact cost predictions.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::transcript::Counters;

/// Workers sufficient for a secure product with privacy `t` and storage
/// fraction `1/k`: `min{2k^2 + 2t - 3, k^2 + kt + t - 2}`, the first branch
/// being the smaller exactly when `k < t`.
pub fn worker_bound(t: usize, k: usize) -> usize {
    assert!(t >= 1 && k >= 1, "t and k must be positive");
    if k < t {
        2 * k * k + 2 * t - 3
    } else {
        k * k + k * t + t - 2
    }
}

/// Workers needed by the simpler alternatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Baselines {
    /// Split into `k^2` independent block products, each a BGW multiply.
    pub job_split_multiply: usize,
    /// Split into `k` independent Shamir additions.
    pub job_split_add: usize,
    /// Any circuit without a product.
    pub linear_only: usize,
}

pub fn baseline_bounds(t: usize, k: usize) -> Baselines {
    Baselines {
        job_split_multiply: k * k * (2 * t - 1),
        job_split_add: k * t,
        linear_only: k + t - 1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Polyshare,
    JobSplitBgw,
    ChangTandon,
    Kakar,
    GaspBig,
    GaspSmall,
    LinearOnly,
}

impl Scheme {
    pub const ALL: [Scheme; 7] = [
        Scheme::Polyshare,
        Scheme::JobSplitBgw,
        Scheme::ChangTandon,
        Scheme::Kakar,
        Scheme::GaspBig,
        Scheme::GaspSmall,
        Scheme::LinearOnly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Polyshare => "polyshare",
            Scheme::JobSplitBgw => "job-split-bgw",
            Scheme::ChangTandon => "chang-tandon",
            Scheme::Kakar => "kakar",
            Scheme::GaspBig => "gasp-big",
            Scheme::GaspSmall => "gasp-small",
            Scheme::LinearOnly => "linear-only",
        }
    }

    pub fn workers(self, t: usize, k: usize) -> usize {
        match self {
            Scheme::Polyshare | Scheme::GaspBig => worker_bound(t, k),
            Scheme::JobSplitBgw => baseline_bounds(t, k).job_split_multiply,
            Scheme::ChangTandon => (k + t - 1) * (k + t - 1),
            Scheme::Kakar => k * k + t * k + t - 2,
            Scheme::GaspSmall => gasp_small(t, k),
            Scheme::LinearOnly => k + t - 1,
        }
    }
}

/// The piecewise GASP-Small count, floor taken toward negative infinity.
pub fn gasp_small(t: usize, k: usize) -> usize {
    let (t, k) = (t as i64, k as i64);
    let n = if t == 2 && 2 <= k {
        k * k + 2 * k
    } else if 3 <= t && t <= k {
        k * k + 2 * k + (t - 1) * (t - 1) + t - 4
    } else if k < t && t <= k * (k - 1) + 2 {
        k * k + k * t + 2 * t - 5 - (t - 3).div_euclid(k)
    } else {
        2 * k * k + k * t + t - 2 * k - 1
    };
    n as usize
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeRow {
    pub scheme: Scheme,
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub t: usize,
    pub k: usize,
    pub rows: Vec<SchemeRow>,
}

impl ComparisonTable {
    pub fn get(&self, scheme: Scheme) -> usize {
        self.rows
            .iter()
            .find(|r| r.scheme == scheme)
            .map(|r| r.workers)
            .expect("every scheme has a row")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("t = {}, k = {}\n", self.t, self.k);
        let width = self.rows.iter().map(|r| r.scheme.name().len()).max().unwrap_or(0);
        for r in &self.rows {
            let _ = writeln!(s, "  {:<width$}  {:>10}", r.scheme.name(), r.workers);
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,k,scheme,workers\n");
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{},{}", self.t, self.k, r.scheme.name(), r.workers);
        }
        s
    }
}

pub fn table1_compare(t: usize, k: usize) -> ComparisonTable {
    ComparisonTable {
        t,
        k,
        rows: Scheme::ALL
            .iter()
            .map(|&scheme| SchemeRow {
                scheme,
                workers: scheme.workers(t, k),
            })
            .collect(),
    }
}

/// Exact counters a run of `circuit` should produce with `gamma` sources of
/// `m x m` inputs and `n` workers.
///
/// Per-node multiplications: a sharing polynomial has `k + t - 1` terms,
/// so evaluating it costs `(k + t - 1) m^2 / k`. The local product costs
/// `m^3 / k^2`. Building any resharing matrix costs `m^2`, scaling `m^2 / k`,
/// and master reconstruction `(k + t - 1) m^2`.
pub fn cost_model(t: usize, k: usize, m: usize, n: usize, gamma: usize, circuit: &Circuit) -> Counters {
    let share = (m * m / k) as u64;
    let terms = (k + t - 1) as u64;
    let n64 = n as u64;
    let eval = terms * share;
    let reshare = n64 * eval;
    let mut per_worker = 0u64;
    let mut rounds = 0u64;
    for g in &circuit.gates {
        match g {
            Gate::Add(..) => {}
            Gate::ScalarMul(..) => per_worker += share,
            Gate::Transpose(..) => {
                rounds += 1;
                per_worker += (m * m) as u64 + reshare;
            }
            Gate::MatMul(..) => {
                if k > 1 {
                    rounds += 1;
                    per_worker += (m * m) as u64 + reshare;
                }
                rounds += 1;
                per_worker += (m * m * m / (k * k)) as u64 + (m * m) as u64 + reshare;
            }
        }
    }
    Counters {
        source_to_worker: gamma as u64 * n64 * share,
        worker_to_worker: rounds * n64 * (n64 - 1) * share,
        worker_to_master: n64 * share,
        local: rounds * n64 * share,
        reshare_rounds: rounds,
        source_mults: vec![n64 * eval; gamma],
        worker_mults: vec![per_worker; n],
        master_mults: terms * (m * m) as u64,
    }
}
