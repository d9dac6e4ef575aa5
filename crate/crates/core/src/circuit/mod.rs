//! Matrix polynomial expressions and their gate circuits.

mod compile;
mod parse;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::matrix::Matrix;

pub use compile::{compile, evaluate_secure, Circuit, Gate, Wire};
pub use parse::{parse_expression, MAX_POWER};

/// Expression tree. Inputs are 0-based (`Input(0)` is written `X1`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expr {
    Input(usize),
    Transpose(Box<Expr>),
    /// Public constant times a matrix.
    Scale(FieldElement, Box<Expr>),
    Sum(Vec<Expr>),
    /// Ordinary matrix product, left to right.
    Product(Vec<Expr>),
}

impl Expr {
    /// Number of inputs referenced, i.e. the largest index plus one.
    pub fn input_count(&self) -> usize {
        match self {
            Expr::Input(g) => g + 1,
            Expr::Transpose(e) | Expr::Scale(_, e) => e.input_count(),
            Expr::Sum(es) | Expr::Product(es) => es.iter().map(Expr::input_count).max().unwrap_or(0),
        }
    }

    pub fn has_product(&self) -> bool {
        match self {
            Expr::Input(_) => false,
            Expr::Transpose(e) | Expr::Scale(_, e) => e.has_product(),
            Expr::Sum(es) => es.iter().any(Expr::has_product),
            Expr::Product(_) => true,
        }
    }

    /// Direct evaluation over the field.
    pub fn evaluate_plain(&self, field: &Field, inputs: &[Matrix]) -> Result<Matrix> {
        match self {
            Expr::Input(g) => inputs.get(*g).cloned().ok_or(Error::UnknownInput(g + 1)),
            Expr::Transpose(e) => Ok(e.evaluate_plain(field, inputs)?.transpose()),
            Expr::Scale(q, e) => Ok(e.evaluate_plain(field, inputs)?.scale(field, *q)),
            Expr::Sum(es) => {
                let mut acc = es[0].evaluate_plain(field, inputs)?;
                for e in &es[1..] {
                    acc.add_assign(field, &e.evaluate_plain(field, inputs)?)?;
                }
                Ok(acc)
            }
            Expr::Product(es) => {
                let mut acc = es[0].evaluate_plain(field, inputs)?;
                for e in &es[1..] {
                    acc = acc.matmul(field, &e.evaluate_plain(field, inputs)?)?;
                }
                Ok(acc)
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Input(g) => write!(f, "X{}", g + 1),
            Expr::Transpose(e) => match **e {
                Expr::Input(_) => write!(f, "{e}'"),
                _ => write!(f, "({e})'"),
            },
            Expr::Scale(q, e) => match **e {
                Expr::Input(_) | Expr::Transpose(_) | Expr::Product(_) => write!(f, "{q} * {e}"),
                _ => write!(f, "{q} * ({e})"),
            },
            Expr::Sum(es) => {
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    match e {
                        Expr::Sum(_) => write!(f, "({e})")?,
                        _ => write!(f, "{e}")?,
                    }
                }
                Ok(())
            }
            Expr::Product(es) => {
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" * ")?;
                    }
                    match e {
                        Expr::Input(_) | Expr::Transpose(_) => write!(f, "{e}")?,
                        _ => write!(f, "({e})")?,
                    }
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn plain_evaluation_basics() {
        let f = Field::new(101).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let a = Matrix::random(&f, 2, 2, &mut rng);
        let neg = a.scale(&f, f.elem(100));
        let e = parse_expression("X1 + X2", &f).unwrap();
        assert!(e.evaluate_plain(&f, &[a.clone(), neg]).unwrap().is_zero());
        let sq = parse_expression("X1^2", &f).unwrap();
        assert_eq!(sq.evaluate_plain(&f, &[a.clone()]).unwrap(), a.matmul(&f, &a).unwrap());
        assert_eq!(
            parse_expression("X2", &f).unwrap().evaluate_plain(&f, &[a]),
            Err(Error::UnknownInput(2))
        );
    }

    #[test]
    fn scalar_case_matches_integer_arithmetic() {
        let f = Field::new(10007).unwrap();
        let e = parse_expression("X1 * X2 + 3 * X1' - X2", &f).unwrap();
        for (x, y) in [(5u64, 7u64), (10006, 2), (0, 9)] {
            let out = e
                .evaluate_plain(&f, &[Matrix::from_u64(&f, 1, 1, &[x]).unwrap(), Matrix::from_u64(&f, 1, 1, &[y]).unwrap()])
                .unwrap();
            let want = ((x * y + 3 * x) as i64 - y as i64).rem_euclid(10007) as u64;
            assert_eq!(out.to_u64(), vec![want]);
        }
    }

    #[test]
    fn display_reparses() {
        let f = Field::new(101).unwrap();
        for s in [
            "X2' * X1 * X1 * X3 + X2 * X4 * X3'",
            "-(X1 + X2)' * X3",
            "2 * (X1 + X2 * X3)",
            "(X1 * X2)' + X3^3",
        ] {
            let e = parse_expression(s, &f).unwrap();
            assert_eq!(parse_expression(&e.to_string(), &f).unwrap(), e, "{s} -> {e}");
        }
    }
}
