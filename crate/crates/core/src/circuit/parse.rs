//! Expression syntax.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := ['-'] atom postfix*
//! atom   := INT | 'X' INT | '(' expr ')'
//! postfix:= "'" | '^' INT
//! ```
//!
//! Integer-only subexpressions fold to a constant. Every sum must be made of
//! matrix terms, and so must the whole expression.

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

use super::Expr;

/// Largest exponent accepted after `^` on a matrix.
pub const MAX_POWER: u64 = 64;

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Scalar(FieldElement),
    Matrix(Expr),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: &'a Field,
}

fn syntax<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Syntax {
        pos,
        msg: msg.into(),
    })
}

/// Parses `text`, reducing integer constants into `field`.
pub fn parse_expression(text: &str, field: &Field) -> Result<Expr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        field,
    };
    let node = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return syntax(p.pos, format!("unexpected '{}'", p.src[p.pos] as char));
    }
    match node {
        Node::Matrix(e) => Ok(e),
        Node::Scalar(_) => syntax(0, "expression has no matrix input"),
    }
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Decimal literal reduced into the field, plus its raw value if it fits.
    fn int(&mut self) -> Result<(FieldElement, Option<u64>)> {
        self.skip_ws();
        let start = self.pos;
        let mut acc = FieldElement::ZERO;
        let mut raw = Some(0u64);
        let ten = self.field.elem(10);
        while let Some(d) = self.src.get(self.pos).filter(|c| c.is_ascii_digit()) {
            let d = (d - b'0') as u64;
            acc = self.field.add(self.field.mul(acc, ten), self.field.elem(d));
            raw = raw.and_then(|r| r.checked_mul(10)).and_then(|r| r.checked_add(d));
            self.pos += 1;
        }
        if self.pos == start {
            return syntax(start, "expected an integer");
        }
        Ok((acc, raw))
    }

    fn expr(&mut self) -> Result<Node> {
        let mut terms = vec![(self.pos, self.term()?)];
        loop {
            let negate = if self.eat(b'+') {
                false
            } else if self.eat(b'-') {
                true
            } else {
                break;
            };
            self.skip_ws();
            let at = self.pos;
            let t = self.term()?;
            terms.push((at, if negate { self.negate(t) } else { t }));
        }
        if terms.len() == 1 {
            return Ok(terms.pop().expect("one term").1);
        }
        if terms.iter().all(|(_, t)| matches!(t, Node::Scalar(_))) {
            let sum = terms.iter().fold(FieldElement::ZERO, |acc, (_, t)| match t {
                Node::Scalar(v) => self.field.add(acc, *v),
                Node::Matrix(_) => unreachable!(),
            });
            return Ok(Node::Scalar(sum));
        }
        let mut out = Vec::with_capacity(terms.len());
        for (at, t) in terms {
            match t {
                Node::Scalar(_) => return syntax(at, "cannot add a constant to a matrix"),
                Node::Matrix(Expr::Sum(inner)) => out.extend(inner),
                Node::Matrix(e) => out.push(e),
            }
        }
        Ok(Node::Matrix(Expr::Sum(out)))
    }

    fn negate(&self, n: Node) -> Node {
        let minus_one = self.field.neg(FieldElement::ONE);
        match n {
            Node::Scalar(v) => Node::Scalar(self.field.neg(v)),
            Node::Matrix(e) => Node::Matrix(scaled(self.field, minus_one, e)),
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut q = FieldElement::ONE;
        let mut factors = Vec::new();
        loop {
            match self.factor()? {
                Node::Scalar(v) => q = self.field.mul(q, v),
                Node::Matrix(e) => push_factor(self.field, &mut q, &mut factors, e),
            }
            if !self.eat(b'*') {
                break;
            }
        }
        Ok(match factors.len() {
            0 => Node::Scalar(q),
            1 => Node::Matrix(scaled(self.field, q, factors.pop().expect("one factor"))),
            _ => Node::Matrix(scaled(self.field, q, Expr::Product(factors))),
        })
    }

    fn factor(&mut self) -> Result<Node> {
        let negate = self.eat(b'-');
        let mut node = self.atom()?;
        loop {
            if self.eat(b'\'') {
                node = match node {
                    Node::Scalar(v) => Node::Scalar(v),
                    Node::Matrix(e) => Node::Matrix(Expr::Transpose(Box::new(e))),
                };
            } else if self.eat(b'^') {
                self.skip_ws();
                let at = self.pos;
                let (_, raw) = self.int()?;
                node = self.power(node, raw, at)?;
            } else {
                break;
            }
        }
        Ok(if negate { self.negate(node) } else { node })
    }

    fn power(&self, node: Node, raw: Option<u64>, at: usize) -> Result<Node> {
        match node {
            Node::Scalar(v) => {
                let e = raw.ok_or(Error::Syntax {
                    pos: at,
                    msg: "exponent too large".into(),
                })?;
                Ok(Node::Scalar(self.field.pow(v, e)))
            }
            Node::Matrix(e) => match raw {
                Some(n) if (1..=MAX_POWER).contains(&n) => {
                    if n == 1 {
                        return Ok(Node::Matrix(e));
                    }
                    let mut q = FieldElement::ONE;
                    let mut factors = Vec::new();
                    for _ in 0..n {
                        push_factor(self.field, &mut q, &mut factors, e.clone());
                    }
                    Ok(Node::Matrix(scaled(self.field, q, Expr::Product(factors))))
                }
                _ => syntax(at, format!("matrix powers must lie in [1, {MAX_POWER}]")),
            },
        }
    }

    fn atom(&mut self) -> Result<Node> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return syntax(self.pos, "expected ')'");
                }
                Ok(inner)
            }
            Some(b'X') | Some(b'x') => {
                let at = self.pos;
                self.pos += 1;
                if !self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    return syntax(self.pos, "expected an input number after 'X'");
                }
                match self.int()?.1 {
                    Some(0) => Err(Error::UnknownInput(0)),
                    Some(g) if g <= u32::MAX as u64 => Ok(Node::Matrix(Expr::Input(g as usize - 1))),
                    _ => syntax(at, "input number too large"),
                }
            }
            Some(c) if c.is_ascii_digit() => Ok(Node::Scalar(self.int()?.0)),
            Some(c) => syntax(self.pos, format!("unexpected '{}'", c as char)),
            None => syntax(self.pos, "unexpected end of input"),
        }
    }
}

/// Adds `e` to a product, absorbing its scale and flattening plain products.
fn push_factor(field: &Field, q: &mut FieldElement, factors: &mut Vec<Expr>, e: Expr) {
    match e {
        Expr::Scale(r, inner) => {
            *q = field.mul(*q, r);
            push_factor(field, q, factors, *inner);
        }
        Expr::Product(fs) => factors.extend(fs),
        other => factors.push(other),
    }
}

fn scaled(field: &Field, q: FieldElement, e: Expr) -> Expr {
    if q == FieldElement::ONE {
        return e;
    }
    match e {
        Expr::Scale(r, inner) => scaled(field, field.mul(q, r), *inner),
        other => Expr::Scale(q, Box::new(other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> Field {
        Field::new(101).unwrap()
    }

    fn x(i: usize) -> Expr {
        Expr::Input(i)
    }

    fn tr(e: Expr) -> Expr {
        Expr::Transpose(Box::new(e))
    }

    #[test]
    fn worked_example_polynomial() {
        let e = parse_expression("X2' * X1 * X1 * X3 + X2 * X4 * X3'", &f()).unwrap();
        assert_eq!(
            e,
            Expr::Sum(vec![
                Expr::Product(vec![tr(x(1)), x(0), x(0), x(2)]),
                Expr::Product(vec![x(1), x(3), tr(x(2))]),
            ])
        );
        let p = parse_expression("X2' * X1^2 * X3 + X2 * X4 * X3'", &f()).unwrap();
        assert_eq!(p, e);
    }

    #[test]
    fn simple_forms() {
        assert_eq!(parse_expression("X1 + X1", &f()).unwrap(), Expr::Sum(vec![x(0), x(0)]));
        assert_eq!(parse_expression("X1", &f()).unwrap(), x(0));
        assert_eq!(
            parse_expression("X1 - X2", &f()).unwrap(),
            Expr::Sum(vec![x(0), Expr::Scale(f().elem(100), Box::new(x(1)))])
        );
        assert_eq!(
            parse_expression("2 * X1 * 3", &f()).unwrap(),
            Expr::Scale(f().elem(6), Box::new(x(0)))
        );
        assert_eq!(
            parse_expression("(2+3)*X1", &f()).unwrap(),
            Expr::Scale(f().elem(5), Box::new(x(0)))
        );
        assert_eq!(
            parse_expression("205 * X1", &f()).unwrap(),
            Expr::Scale(f().elem(3), Box::new(x(0)))
        );
        assert_eq!(
            parse_expression("(X1 + X2)'", &f()).unwrap(),
            tr(Expr::Sum(vec![x(0), x(1)]))
        );
        assert_eq!(parse_expression("-(-X1)", &f()).unwrap(), x(0));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_expression("X1 *", &f()), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse_expression("X1 + 2", &f()), Err(Error::Syntax { pos: 5, .. })));
        assert!(matches!(parse_expression("2 * 3", &f()), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expression("(X1", &f()), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expression("X1 X2", &f()), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse_expression("X1^0", &f()), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expression("Xa", &f()), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expression("", &f()), Err(Error::Syntax { .. })));
        assert_eq!(parse_expression("X0", &f()), Err(Error::UnknownInput(0)));
    }
}
