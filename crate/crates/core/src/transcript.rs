//! Message log, adversary views and traffic counters.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::matrix::Matrix;

/// A node of the simulated network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Actor {
    Source(usize),
    Worker(usize),
    Master,
}

impl fmt::Display for Actor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Actor::Source(g) => write!(f, "source{g}"),
            Actor::Worker(n) => write!(f, "worker{n}"),
            Actor::Master => write!(f, "master"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Sharing,
    Compute,
    Reconstruction,
}

/// One delivered message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub phase: Phase,
    pub round: u32,
    pub from: Actor,
    pub to: Actor,
    /// Worker-to-self delivery: kept for correctness, excluded from traffic.
    pub local: bool,
    pub payload: Matrix,
}

/// Append-only message log of a run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunTranscript {
    records: Vec<Record>,
}

impl RunTranscript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: Record) {
        self.records.push(record);
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Field elements carried by every record, local ones included.
    pub fn payload_elements(&self) -> u64 {
        self.records.iter().map(|r| r.payload.len() as u64).sum()
    }

    /// Number of compute rounds that produced messages.
    pub fn compute_rounds(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.phase == Phase::Compute)
            .map(|r| r.round)
            .collect::<BTreeSet<_>>()
            .len()
    }

    /// SHA-256 over the canonical JSON encoding, hex encoded.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("transcript serializes");
        Sha256::digest(&bytes)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// What a colluding worker set `S` observes: its initial shares and every
/// message delivered to one of its members.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversaryView {
    pub subset: Vec<usize>,
    pub records: Vec<Record>,
}

impl AdversaryView {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// All observed field elements, flattened in transcript order.
    pub fn coordinates(&self) -> Vec<FieldElement> {
        self.records
            .iter()
            .flat_map(|r| r.payload.data().iter().copied())
            .collect()
    }
}

/// Projects `transcript` onto `subset`, enforcing `|S| <= t - 1`.
pub fn extract_view(transcript: &RunTranscript, subset: &[usize], t: usize) -> Result<AdversaryView> {
    let max = t.saturating_sub(1);
    if subset.len() > max {
        return Err(Error::SubsetTooLarge {
            size: subset.len(),
            max,
        });
    }
    Ok(project_view(transcript, subset))
}

/// Same projection without the threshold check, for beyond-threshold
/// experiments.
pub fn project_view(transcript: &RunTranscript, subset: &[usize]) -> AdversaryView {
    let members: BTreeSet<usize> = subset.iter().copied().collect();
    let records = transcript
        .records()
        .iter()
        .filter(|r| matches!(r.to, Actor::Worker(n) if members.contains(&n)))
        .cloned()
        .collect();
    AdversaryView {
        subset: members.into_iter().collect(),
        records,
    }
}

/// Traffic (in field elements) and per-node multiplication counts.
///
/// Multiplications count scalar field products in data-dependent work only.
/// Reconstruction weights depend on public points alone and are excluded.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub source_to_worker: u64,
    pub worker_to_worker: u64,
    pub worker_to_master: u64,
    /// Worker-to-self payloads, not counted as traffic.
    pub local: u64,
    /// Reshare rounds executed (transpose, change of basis, multiply).
    pub reshare_rounds: u64,
    pub source_mults: Vec<u64>,
    pub worker_mults: Vec<u64>,
    pub master_mults: u64,
}

impl Counters {
    pub fn new(sources: usize, workers: usize) -> Self {
        Counters {
            source_mults: vec![0; sources],
            worker_mults: vec![0; workers],
            ..Self::default()
        }
    }

    /// Books one message of `elements` field elements.
    pub fn record_message(&mut self, from: Actor, to: Actor, elements: u64) {
        match (from, to) {
            (Actor::Worker(a), Actor::Worker(b)) if a == b => self.local += elements,
            (Actor::Source(_), Actor::Worker(_)) => self.source_to_worker += elements,
            (Actor::Worker(_), Actor::Worker(_)) => self.worker_to_worker += elements,
            (Actor::Worker(_), Actor::Master) => self.worker_to_master += elements,
            _ => unreachable!("no such link: {from} -> {to}"),
        }
    }

    pub fn add_mults(&mut self, actor: Actor, count: u64) {
        match actor {
            Actor::Source(g) => self.source_mults[g] += count,
            Actor::Worker(n) => self.worker_mults[n] += count,
            Actor::Master => self.master_mults += count,
        }
    }

    /// Every element moved, local deliveries included.
    pub fn total_elements(&self) -> u64 {
        self.source_to_worker + self.worker_to_worker + self.worker_to_master + self.local
    }
}
