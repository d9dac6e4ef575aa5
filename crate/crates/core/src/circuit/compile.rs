//! Lowering expressions to gate lists, and evaluating them.
//!
//! Products fold right to left (`X1 X2 X3` computes `X2 X3` first), sums
//! accumulate last to first. The multiplication gate computes `l^T r`, so a
//! left factor is transposed first unless it is written transposed already.

use serde::{Deserialize, Serialize};

use crate::analytics::worker_bound;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::matrix::{matmul_t, Matrix};
use crate::procedures::{Session, LINEAR_RULE, MULTIPLY_RULE};
use crate::sharing::ShareBundle;

use super::Expr;

/// A value in the circuit: an input or the output of an earlier gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Wire {
    Input(usize),
    Gate(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    Add(Wire, Wire),
    ScalarMul(FieldElement, Wire),
    /// `l^T r`.
    MatMul(Wire, Wire),
    Transpose(Wire),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    pub inputs: usize,
    pub gates: Vec<Gate>,
    pub output: Wire,
}

/// Lowers `expr` to a topologically ordered gate list.
pub fn compile(expr: &Expr) -> Circuit {
    let mut gates = Vec::new();
    let output = lower(expr, &mut gates);
    Circuit {
        inputs: expr.input_count(),
        gates,
        output,
    }
}

fn push(gates: &mut Vec<Gate>, g: Gate) -> Wire {
    gates.push(g);
    Wire::Gate(gates.len() - 1)
}

fn lower(e: &Expr, gates: &mut Vec<Gate>) -> Wire {
    match e {
        Expr::Input(g) => Wire::Input(*g),
        Expr::Transpose(inner) => {
            let w = lower(inner, gates);
            push(gates, Gate::Transpose(w))
        }
        Expr::Scale(q, inner) => {
            let w = lower(inner, gates);
            push(gates, Gate::ScalarMul(*q, w))
        }
        Expr::Sum(terms) => {
            let (last, rest) = terms.split_last().expect("sums are non-empty");
            let mut acc = lower(last, gates);
            for t in rest.iter().rev() {
                let w = lower(t, gates);
                acc = push(gates, Gate::Add(w, acc));
            }
            acc
        }
        Expr::Product(factors) => {
            let (last, rest) = factors.split_last().expect("products are non-empty");
            let mut acc = lower(last, gates);
            for f in rest.iter().rev() {
                // P * Q = (P^T)^T Q; a written transpose P = R' hands R over as is
                let left = match f {
                    Expr::Transpose(inner) => lower(inner, gates),
                    other => {
                        let w = lower(other, gates);
                        push(gates, Gate::Transpose(w))
                    }
                };
                acc = push(gates, Gate::MatMul(left, acc));
            }
            acc
        }
    }
}

/// Gate tallies by kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub add: usize,
    pub scalar_mul: usize,
    pub matmul: usize,
    pub transpose: usize,
}

impl Circuit {
    pub fn counts(&self) -> GateCounts {
        let mut c = GateCounts::default();
        for g in &self.gates {
            match g {
                Gate::Add(..) => c.add += 1,
                Gate::ScalarMul(..) => c.scalar_mul += 1,
                Gate::MatMul(..) => c.matmul += 1,
                Gate::Transpose(..) => c.transpose += 1,
            }
        }
        c
    }

    pub fn has_matmul(&self) -> bool {
        self.counts().matmul > 0
    }

    /// Workers needed: the multiplication bound if any product is present,
    /// `k + t - 1` otherwise. Depth and term count play no role.
    pub fn required_workers(&self, t: usize, k: usize) -> usize {
        let linear = k + t - 1;
        if self.has_matmul() {
            worker_bound(t, k).max(linear)
        } else {
            linear
        }
    }

    /// Reshare rounds a secure evaluation performs. A multiplication costs
    /// one round, plus one to move its right operand to basis `k` when
    /// `k > 1`.
    pub fn reshare_rounds(&self, k: usize) -> usize {
        let c = self.counts();
        c.transpose + c.matmul * if k > 1 { 2 } else { 1 }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serializes")
    }

    /// Gate-by-gate evaluation on plaintext matrices.
    pub fn evaluate_plain(&self, field: &Field, inputs: &[Matrix]) -> Result<Matrix> {
        if inputs.len() < self.inputs {
            return Err(Error::UnknownInput(inputs.len() + 1));
        }
        let mut vals: Vec<Matrix> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let get = |w: &Wire| match *w {
                Wire::Input(i) => &inputs[i],
                Wire::Gate(i) => &vals[i],
            };
            let v = match g {
                Gate::Add(l, r) => get(l).add(field, get(r))?,
                Gate::ScalarMul(q, x) => get(x).scale(field, *q),
                Gate::MatMul(l, r) => matmul_t(field, get(l), get(r))?,
                Gate::Transpose(x) => get(x).transpose(),
            };
            vals.push(v);
        }
        Ok(match self.output {
            Wire::Input(i) => inputs[i].clone(),
            Wire::Gate(i) => vals.swap_remove(i),
        })
    }
}

/// Runs `circuit` on basis-1 input sharings; the result is a basis-1
/// sharing of the output.
pub fn evaluate_secure(session: &mut Session, circuit: &Circuit, inputs: &[ShareBundle]) -> Result<ShareBundle> {
    if inputs.len() < circuit.inputs || inputs.is_empty() {
        return Err(Error::UnknownInput(inputs.len() + 1));
    }
    if let Some(bad) = inputs.iter().find(|b| b.basis() != 1) {
        return Err(Error::BasisMismatch {
            expected: 1,
            found: bad.basis(),
        });
    }
    let params = &inputs[0].params;
    let (t, k, n) = (params.t, params.k, params.n());
    let need = circuit.required_workers(t, k);
    if n < need {
        let rule = if circuit.has_matmul() { MULTIPLY_RULE } else { LINEAR_RULE };
        return Err(Error::TooFewWorkers {
            have: n,
            need,
            rule: rule.into(),
        });
    }
    let mut vals: Vec<ShareBundle> = Vec::with_capacity(circuit.gates.len());
    for g in &circuit.gates {
        let get = |w: &Wire| -> &ShareBundle {
            match *w {
                Wire::Input(i) => &inputs[i],
                Wire::Gate(i) => &vals[i],
            }
        };
        let v = match g {
            Gate::Add(l, r) => {
                let (l, r) = (get(l).clone(), get(r).clone());
                session.add(&l, &r)?
            }
            Gate::ScalarMul(q, x) => {
                let x = get(x).clone();
                session.scale(&x, *q)?
            }
            Gate::MatMul(l, r) => {
                let (l, r) = (get(l).clone(), get(r).clone());
                let r = if k > 1 { session.change_basis(&r, k)? } else { r };
                session.multiply(&l, &r, 1)?
            }
            Gate::Transpose(x) => {
                let x = get(x).clone();
                session.transpose(&x)?
            }
        };
        vals.push(v);
    }
    Ok(match circuit.output {
        Wire::Input(i) => inputs[i].clone(),
        Wire::Gate(i) => vals.swap_remove(i),
    })
}
