//! In-process cluster: `gamma` sources, `N` workers and a master over ideal
//! links, with every delivered message logged.

use serde::{Deserialize, Serialize};

use crate::analytics::cost_model;
use crate::circuit::{compile, evaluate_secure, Circuit, Expr};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, MERSENNE_61};
use crate::matrix::{Matrix, MatrixDoc};
use crate::privacy::{AuditReport, CertificateReport};
use crate::procedures::{Session, LINEAR_RULE};
use crate::sharing::{check_alphas, sample_alphas, ShareBundle, SharingParams};
use crate::transcript::{Counters, RunTranscript};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub gamma: usize,
    pub workers: usize,
    pub t: usize,
    pub k: usize,
    pub m: usize,
    pub modulus: u64,
    pub seed: u64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        SystemConfig {
            gamma: 2,
            workers: 8,
            t: 2,
            k: 2,
            m: 4,
            modulus: MERSENNE_61,
            seed: crate::field::DEFAULT_SEED,
        }
    }
}

impl SystemConfig {
    pub fn field(&self) -> Result<Field> {
        Field::with_seed(self.modulus, self.seed)
    }

    pub fn validate(&self) -> Result<()> {
        if self.t == 0 || self.k == 0 || self.m == 0 || self.gamma == 0 {
            return Err(Error::InvalidConfig(
                "gamma, t, k and m must all be at least 1".into(),
            ));
        }
        if self.m % self.k != 0 {
            return Err(Error::IndivisibleDimension {
                dim: self.m,
                k: self.k,
            });
        }
        self.field()?;
        if self.modulus <= self.workers as u64 {
            return Err(Error::InvalidConfig(format!(
                "modulus {} must exceed the worker count {}",
                self.modulus, self.workers
            )));
        }
        let need = self.k + self.t - 1;
        if self.workers < need {
            return Err(Error::TooFewWorkers {
                have: self.workers,
                need,
                rule: LINEAR_RULE.into(),
            });
        }
        Ok(())
    }
}

/// What a run hands back.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub circuit: Circuit,
    pub output: Matrix,
    pub output_bundle: ShareBundle,
    pub transcript: RunTranscript,
    pub counters: Counters,
}

/// A configured cluster with its public evaluation points.
#[derive(Debug, Clone)]
pub struct Cluster {
    pub config: SystemConfig,
    pub field: Field,
    pub alphas: Vec<FieldElement>,
}

impl Cluster {
    /// Validates `config` and samples points from its seed.
    pub fn new(config: SystemConfig) -> Result<Self> {
        config.validate()?;
        let field = config.field()?;
        let alphas = sample_alphas(&field, config.workers, config.k, config.t, config.seed)?;
        Ok(Cluster {
            config,
            field,
            alphas,
        })
    }

    /// Uses caller-chosen points (they must be distinct and nonzero).
    pub fn with_alphas(config: SystemConfig, alphas: Vec<FieldElement>) -> Result<Self> {
        config.validate()?;
        if alphas.len() != config.workers {
            return Err(Error::InvalidAlphas(format!(
                "{} points for {} workers",
                alphas.len(),
                config.workers
            )));
        }
        check_alphas(&alphas)?;
        let field = config.field()?;
        Ok(Cluster {
            config,
            field,
            alphas,
        })
    }

    /// Basis-1 sharing parameters of this cluster.
    pub fn params(&self) -> SharingParams {
        SharingParams {
            b: 1,
            t: self.config.t,
            k: self.config.k,
            alphas: self.alphas.clone(),
        }
    }

    pub fn run(&self, expr: &Expr, inputs: &[Matrix]) -> Result<RunOutcome> {
        self.run_circuit(&compile(expr), inputs, self.config.seed)
    }

    /// Full protocol: sources share, workers evaluate, master reconstructs.
    pub fn run_circuit(&self, circuit: &Circuit, inputs: &[Matrix], seed: u64) -> Result<RunOutcome> {
        let cfg = &self.config;
        if circuit.inputs > cfg.gamma {
            return Err(Error::UnknownInput(cfg.gamma + 1));
        }
        if inputs.len() != cfg.gamma {
            return Err(Error::InvalidConfig(format!(
                "{} input matrices for gamma = {}",
                inputs.len(),
                cfg.gamma
            )));
        }
        if let Some(bad) = inputs.iter().find(|x| x.rows() != cfg.m || x.cols() != cfg.m) {
            return Err(Error::DimensionMismatch(format!(
                "inputs must be {0}x{0}, got {1}x{2}",
                cfg.m,
                bad.rows(),
                bad.cols()
            )));
        }
        let need = circuit.required_workers(cfg.t, cfg.k);
        if cfg.workers < need {
            return Err(Error::TooFewWorkers {
                have: cfg.workers,
                need,
                rule: if circuit.has_matmul() {
                    crate::procedures::MULTIPLY_RULE.into()
                } else {
                    LINEAR_RULE.into()
                },
            });
        }
        let mut session = Session::new(self.field, seed, cfg.gamma, cfg.workers);
        let params = self.params();
        let bundles = inputs
            .iter()
            .enumerate()
            .map(|(g, x)| session.share_input(g, x, &params, format!("X{}", g + 1)))
            .collect::<Result<Vec<_>>>()?;
        let out = evaluate_secure(&mut session, circuit, &bundles)?;
        let output = session.reconstruct_at_master(&out)?;
        Ok(RunOutcome {
            circuit: circuit.clone(),
            output,
            output_bundle: out,
            transcript: session.transcript,
            counters: session.counters,
        })
    }

    /// Counters the cost model predicts for `circuit` on this cluster.
    pub fn predicted(&self, circuit: &Circuit) -> Counters {
        let c = &self.config;
        cost_model(c.t, c.k, c.m, c.workers, c.gamma, circuit)
    }
}

/// Validates, samples points and runs `expr` once.
pub fn run_protocol(config: SystemConfig, expr: &Expr, inputs: &[Matrix]) -> Result<RunOutcome> {
    Cluster::new(config)?.run(expr, inputs)
}

/// Machine-readable summary of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: SystemConfig,
    pub seed: u64,
    pub expression: String,
    pub alphas: Vec<u64>,
    pub output: MatrixDoc,
    pub counters: Counters,
    pub predicted: Counters,
    pub transcript_records: usize,
    pub transcript_digest: String,
    pub certificate: Option<CertificateReport>,
    pub audit: Option<AuditReport>,
}

impl RunReport {
    pub fn new(cluster: &Cluster, expr: &Expr, outcome: &RunOutcome) -> Self {
        RunReport {
            config: cluster.config.clone(),
            seed: cluster.config.seed,
            expression: expr.to_string(),
            alphas: cluster.alphas.iter().map(|a| a.value()).collect(),
            output: MatrixDoc::from_matrix(&cluster.field, &outcome.output),
            counters: outcome.counters.clone(),
            predicted: cluster.predicted(&outcome.circuit),
            transcript_records: outcome.transcript.len(),
            transcript_digest: outcome.transcript.digest(),
            certificate: None,
            audit: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
