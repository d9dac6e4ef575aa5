//! Share-level procedures: add, scale, multiply, transpose, change of basis.
//!
//! Every procedure consumes and produces [`ShareBundle`]s, so results feed
//! straight into the next gate. The three interactive procedures follow the
//! same pattern: each worker builds a local matrix `H^(n)` from its share and
//! a public reconstruction vector, reshares `H^(n)` with fresh masks to all
//! `N` workers (itself included), and each worker sums what it receives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::interpolation::{solve_general_vandermonde, ReconstructionVectors};
use crate::matrix::{matmul_t, row_slice, Matrix};
use crate::rng::actor_stream;
use crate::sharing::{
    coefficient_index, product_support, sharing_exponents, SharePolynomial, ShareBundle,
    SharingParams,
};
use crate::transcript::{Actor, Counters, Phase, Record, RunTranscript};

/// Bound cited when a multiplication lacks workers.
pub const MULTIPLY_RULE: &str = "N >= min{2k^2+2t-3, k^2+kt+t-2}";
/// Bound cited when a linear procedure lacks workers.
pub const LINEAR_RULE: &str = "N >= k+t-1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanKind {
    /// Recovers the `k^2` block products `A_i^T B_j` from `H(alpha_n)`.
    Multiply,
    /// Recovers the `k` data blocks of a basis-`b` sharing.
    Blocks { basis: usize },
}

/// Public reconstruction vectors shared by all workers for one procedure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResharePlan {
    pub kind: PlanKind,
    /// Exponent set being inverted (product support or sharing exponents).
    pub exponents: Vec<u32>,
    /// Vectors padded to length `N`; workers beyond the canonical subset
    /// get weight zero.
    pub recon: ReconstructionVectors,
    pub out_basis: usize,
}

impl ResharePlan {
    /// Vectors `r^(i,j)`, row `coefficient_index(i, j)`, solved on the first
    /// `|J|` workers.
    pub fn multiply(field: &Field, params: &SharingParams, out_basis: usize) -> Result<Self> {
        let (k, t, n) = (params.k, params.t, params.n());
        let support = product_support(k, t);
        if n < support.len() {
            return Err(Error::TooFewWorkers {
                have: n,
                need: support.len(),
                rule: MULTIPLY_RULE.into(),
            });
        }
        params.with_basis(out_basis)?;
        // the first k^2 support exponents are 0..k^2, so positions equal exponents
        let targets: Vec<usize> = (0..k * k).collect();
        let recon = solve_general_vandermonde(
            field,
            &params.alphas[..support.len()],
            &support.exponents,
            &targets,
        )?
        .padded(n);
        Ok(ResharePlan {
            kind: PlanKind::Multiply,
            exponents: support.exponents,
            recon,
            out_basis,
        })
    }

    /// Vectors `r^(j)` for the data blocks of a basis-`basis` sharing,
    /// solved on the first `k + t - 1` workers.
    pub fn blocks(field: &Field, params: &SharingParams, basis: usize, out_basis: usize) -> Result<Self> {
        let (k, t, n) = (params.k, params.t, params.n());
        params.with_basis(basis)?;
        params.with_basis(out_basis)?;
        if n < k + t - 1 {
            return Err(Error::TooFewWorkers {
                have: n,
                need: k + t - 1,
                rule: LINEAR_RULE.into(),
            });
        }
        let exponents = sharing_exponents(basis, t, k);
        let targets: Vec<usize> = (0..k).collect();
        let recon =
            solve_general_vandermonde(field, &params.alphas[..exponents.len()], &exponents, &targets)?
                .padded(n);
        Ok(ResharePlan {
            kind: PlanKind::Blocks { basis },
            exponents,
            recon,
            out_basis,
        })
    }

    /// Weight of worker `n` in the vector for target `j`.
    pub fn weight(&self, j: usize, n: usize) -> FieldElement {
        self.recon.weights[j][n]
    }
}

/// A reshare payload in flight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReshareMessage {
    pub from: usize,
    pub to: usize,
    pub round: u32,
    pub payload: Matrix,
}

/// Worker-local addition.
pub fn add_shares(field: &Field, x: &Matrix, y: &Matrix) -> Result<Matrix> {
    x.add(field, y)
}

/// Worker-local scaling.
pub fn scale_shares(field: &Field, x: &Matrix, q: FieldElement) -> Matrix {
    x.scale(field, q)
}

fn check_same_sharing(a: &ShareBundle, b: &ShareBundle) -> Result<()> {
    if !a.params.compatible(&b.params) {
        return Err(Error::ParamMismatch(format!(
            "operands {} and {} use different (t, k, alphas)",
            a.label, b.label
        )));
    }
    if a.share_dims() != b.share_dims() {
        return Err(Error::DimensionMismatch(format!(
            "operand shares are {:?} and {:?}",
            a.share_dims(),
            b.share_dims()
        )));
    }
    Ok(())
}

/// Protocol state for one run: the field, the run seed, the round counter,
/// the transcript and the counters.
#[derive(Debug, Clone)]
pub struct Session {
    pub field: Field,
    pub seed: u64,
    round: u32,
    pub transcript: RunTranscript,
    pub counters: Counters,
}

impl Session {
    pub fn new(field: Field, seed: u64, sources: usize, workers: usize) -> Self {
        Session {
            field,
            seed,
            round: 0,
            transcript: RunTranscript::new(),
            counters: Counters::new(sources, workers),
        }
    }

    /// Last compute round used (0 before any reshare).
    pub fn round(&self) -> u32 {
        self.round
    }

    fn deliver(&mut self, phase: Phase, round: u32, from: Actor, to: Actor, payload: Matrix) {
        self.counters.record_message(from, to, payload.len() as u64);
        self.transcript.push(Record {
            phase,
            round,
            from,
            to,
            local: from == to,
            payload,
        });
    }

    /// Source `gamma` shares `a` with every worker. Masks come from the
    /// source's round-0 stream.
    pub fn share_input(
        &mut self,
        gamma: usize,
        a: &Matrix,
        params: &SharingParams,
        label: impl Into<String>,
    ) -> Result<ShareBundle> {
        params.validate()?;
        let mut rng = actor_stream(self.seed, Actor::Source(gamma), 0);
        let poly = SharePolynomial::encode(&self.field, a, params.b, params.t, params.k, &mut rng)?;
        let per_eval = (poly.term_count() * poly.data[0].len()) as u64;
        let mut shares = Vec::with_capacity(params.n());
        for (n, &x) in params.alphas.iter().enumerate() {
            let s = poly.evaluate(&self.field, x);
            self.counters.add_mults(Actor::Source(gamma), per_eval);
            self.deliver(Phase::Sharing, 0, Actor::Source(gamma), Actor::Worker(n), s.clone());
            shares.push(s);
        }
        Ok(ShareBundle {
            params: params.clone(),
            label: label.into(),
            shares,
        })
    }

    /// Every worker sends its share to the master, which reconstructs from
    /// the first `k + t - 1`.
    pub fn reconstruct_at_master(&mut self, bundle: &ShareBundle) -> Result<Matrix> {
        let round = self.round + 1;
        for (n, s) in bundle.shares.iter().enumerate() {
            self.deliver(Phase::Reconstruction, round, Actor::Worker(n), Actor::Master, s.clone());
        }
        let out = bundle.reconstruct(&self.field)?;
        let used = bundle.params.threshold() as u64;
        self.counters
            .add_mults(Actor::Master, used * bundle.params.k as u64 * bundle.shares[0].len() as u64);
        Ok(out)
    }

    /// Share-wise sum. No communication.
    pub fn add(&mut self, a: &ShareBundle, b: &ShareBundle) -> Result<ShareBundle> {
        check_same_sharing(a, b)?;
        if a.basis() != b.basis() {
            return Err(Error::BasisMismatch {
                expected: a.basis(),
                found: b.basis(),
            });
        }
        let shares = a
            .shares
            .iter()
            .zip(&b.shares)
            .map(|(x, y)| add_shares(&self.field, x, y))
            .collect::<Result<Vec<_>>>()?;
        Ok(ShareBundle {
            params: a.params.clone(),
            label: format!("({} + {})", a.label, b.label),
            shares,
        })
    }

    /// Share-wise scaling by a public constant. No communication.
    pub fn scale(&mut self, a: &ShareBundle, q: FieldElement) -> Result<ShareBundle> {
        let mut shares = Vec::with_capacity(a.n());
        for (n, x) in a.shares.iter().enumerate() {
            self.counters.add_mults(Actor::Worker(n), x.len() as u64);
            shares.push(scale_shares(&self.field, x, q));
        }
        Ok(ShareBundle {
            params: a.params.clone(),
            label: format!("{q}*{}", a.label),
            shares,
        })
    }

    /// Shares of `A^T B` in basis `out_basis`, from `A` in basis 1 and `B`
    /// in basis `k`.
    pub fn multiply(&mut self, a: &ShareBundle, b: &ShareBundle, out_basis: usize) -> Result<ShareBundle> {
        check_same_sharing(a, b)?;
        let k = a.params.k;
        if a.basis() != 1 {
            return Err(Error::BasisMismatch {
                expected: 1,
                found: a.basis(),
            });
        }
        if b.basis() != k {
            return Err(Error::BasisMismatch {
                expected: k,
                found: b.basis(),
            });
        }
        let plan = ResharePlan::multiply(&self.field, &a.params, out_basis)?;
        let mut hs = Vec::with_capacity(a.n());
        for n in 0..a.n() {
            let (sa, sb) = (&a.shares[n], &b.shares[n]);
            let local = matmul_t(&self.field, sa, sb)?;
            let w = local.rows();
            let mut h = Matrix::zeros(k * w, k * local.cols());
            for i in 0..k {
                for j in 0..k {
                    let r = plan.weight(coefficient_index(i, j, k)? as usize, n);
                    h.set_block(i * w, j * local.cols(), &local.scale(&self.field, r))?;
                }
            }
            let flops = (sa.rows() * sa.cols() * sb.cols() + h.len()) as u64;
            self.counters.add_mults(Actor::Worker(n), flops);
            hs.push(h);
        }
        self.reshare(&a.params, &hs, out_basis, format!("{}'*{}", a.label, b.label))
    }

    /// Shares of `A^T`, same basis.
    pub fn transpose(&mut self, a: &ShareBundle) -> Result<ShareBundle> {
        let k = a.params.k;
        let plan = ResharePlan::blocks(&self.field, &a.params, a.basis(), a.basis())?;
        let mut hs = Vec::with_capacity(a.n());
        for (n, s) in a.shares.iter().enumerate() {
            let slices = (0..k).map(|i| row_slice(s, i, k)).collect::<Result<Vec<_>>>()?;
            let (bh, bw) = (slices[0].cols(), slices[0].rows());
            // block (j, i) = (r^(j)_n F_i)^T; summed over n this is A_ij^T
            let mut h = Matrix::zeros(k * bh, k * bw);
            for (i, fi) in slices.iter().enumerate() {
                let ft = fi.transpose();
                for j in 0..k {
                    h.set_block(j * bh, i * bw, &ft.scale(&self.field, plan.weight(j, n)))?;
                }
            }
            self.counters.add_mults(Actor::Worker(n), h.len() as u64);
            hs.push(h);
        }
        self.reshare(&a.params, &hs, a.basis(), format!("{}'", a.label))
    }

    /// Re-encodes the same matrix under basis `b_out`.
    pub fn change_basis(&mut self, a: &ShareBundle, b_out: usize) -> Result<ShareBundle> {
        let k = a.params.k;
        let plan = ResharePlan::blocks(&self.field, &a.params, a.basis(), b_out)?;
        let mut hs = Vec::with_capacity(a.n());
        for (n, s) in a.shares.iter().enumerate() {
            let blocks: Vec<Matrix> = (0..k).map(|j| s.scale(&self.field, plan.weight(j, n))).collect();
            let h = Matrix::hconcat(&blocks)?;
            self.counters.add_mults(Actor::Worker(n), h.len() as u64);
            hs.push(h);
        }
        self.reshare(&a.params, &hs, b_out, a.label.clone())
    }

    /// Worker `n` shares `hs[n]` in basis `out_basis` with masks from its
    /// stream for the new round; every worker sums what it receives.
    fn reshare(
        &mut self,
        params: &SharingParams,
        hs: &[Matrix],
        out_basis: usize,
        label: String,
    ) -> Result<ShareBundle> {
        self.round += 1;
        self.counters.reshare_rounds += 1;
        let round = self.round;
        let n_workers = params.n();
        let mut acc: Vec<Option<Matrix>> = vec![None; n_workers];
        for (n, h) in hs.iter().enumerate() {
            let mut rng = actor_stream(self.seed, Actor::Worker(n), round);
            let poly =
                SharePolynomial::encode(&self.field, h, out_basis, params.t, params.k, &mut rng)?;
            let per_eval = (poly.term_count() * poly.data[0].len()) as u64;
            for (to, &x) in params.alphas.iter().enumerate() {
                let msg = poly.evaluate(&self.field, x);
                self.counters.add_mults(Actor::Worker(n), per_eval);
                match &mut acc[to] {
                    Some(sum) => sum.add_assign(&self.field, &msg)?,
                    slot => *slot = Some(msg.clone()),
                }
                self.deliver(Phase::Compute, round, Actor::Worker(n), Actor::Worker(to), msg);
            }
        }
        Ok(ShareBundle {
            params: params.with_basis(out_basis)?,
            label,
            shares: acc.into_iter().map(|s| s.expect("every worker receives")).collect(),
        })
    }
}
