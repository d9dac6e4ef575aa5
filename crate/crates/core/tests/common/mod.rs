#![allow(dead_code)]

use polyshare_core::circuit::{parse_expression, Expr};
use polyshare_core::{Field, Matrix};
use rand::Rng;

/// Nesting depth, leaves at 0.
pub fn depth(e: &Expr) -> usize {
    match e {
        Expr::Input(_) => 0,
        Expr::Transpose(x) | Expr::Scale(_, x) => 1 + depth(x),
        Expr::Sum(xs) | Expr::Product(xs) => 1 + xs.iter().map(depth).max().unwrap_or(0),
    }
}

fn factor<R: Rng>(rng: &mut R, gamma: usize) -> String {
    let x = |rng: &mut R| format!("X{}", rng.gen_range(1..=gamma));
    let tick = |rng: &mut R| if rng.gen_bool(0.4) { "'" } else { "" };
    match rng.gen_range(0..10) {
        0..=6 => format!("{}{}", x(rng), tick(rng)),
        7 | 8 => format!("({} + {}){}", x(rng), x(rng), tick(rng)),
        _ => format!("-{}", x(rng)),
    }
}

/// Random polynomial text: up to 4 monomials of up to 3 factors over
/// `X1..X{gamma}`, nesting depth at most 4.
pub fn random_expression<R: Rng>(rng: &mut R, field: &Field, gamma: usize) -> (String, Expr) {
    loop {
        let mut s = String::new();
        for i in 0..rng.gen_range(1..=4) {
            if i > 0 {
                s.push_str(if rng.gen_bool(0.7) { " + " } else { " - " });
            }
            if rng.gen_bool(0.25) {
                s.push_str(&format!("{} * ", rng.gen_range(2..50)));
            }
            let fs: Vec<String> = (0..rng.gen_range(1..=3)).map(|_| factor(rng, gamma)).collect();
            s.push_str(&fs.join(" * "));
        }
        let e = parse_expression(&s, field).expect("generated text parses");
        if depth(&e) <= 4 {
            return (s, e);
        }
    }
}

pub fn random_inputs<R: Rng>(rng: &mut R, field: &Field, count: usize, m: usize) -> Vec<Matrix> {
    (0..count).map(|_| Matrix::random(field, m, m, rng)).collect()
}
