//! Multivariate gcd over the rationals by recursive primitive remainder
//! sequences, and the squarefree tests built on it.

use super::resultant::{split, Dense};
use super::{Poly, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Greatest common divisor in canonical form (primitive integer content,
/// positive graded-lex leading coefficient). `gcd(0, 0) = 0`.
pub fn gcd(p: &Poly, q: &Poly) -> Poly {
    let (p, q) = Poly::align(p, q);
    gcd_rec(&p, &q).canonical()
}

fn unit_like(p: &Poly) -> Poly {
    Poly::constant_in(Rational::one(), p.vars().to_vec())
}

/// Index of a variable occurring in `p` or `q`, preferring the higher degree.
fn main_var(p: &Poly, q: &Poly) -> Option<usize> {
    let n = p.vars().len();
    (0..n)
        .map(|i| {
            let dp = p.terms().map(|(e, _)| e[i]).max().unwrap_or(0);
            let dq = q.terms().map(|(e, _)| e[i]).max().unwrap_or(0);
            (i, dp.max(dq), dp.min(dq))
        })
        .filter(|&(_, hi, _)| hi > 0)
        .max_by_key(|&(i, hi, lo)| (lo, hi, std::cmp::Reverse(i)))
        .map(|(i, _, _)| i)
}

fn gcd_rec(p: &Poly, q: &Poly) -> Poly {
    if p.is_zero() {
        return q.clone();
    }
    if q.is_zero() {
        return p.clone();
    }
    if p.is_constant() || q.is_constant() {
        return unit_like(p);
    }
    let Some(v) = main_var(p, q) else {
        return unit_like(p);
    };
    let a = split(p, v);
    let b = split(q, v);
    let ca = content(&a);
    let cb = content(&b);
    let c = gcd_rec(&ca, &cb).canonical();
    let mut a = integer_primitive(a.exact_div_scalar(&ca).unwrap());
    let mut b = integer_primitive(b.exact_div_scalar(&cb).unwrap());
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
    }
    let g = loop {
        if b.deg() == 0 {
            break None;
        }
        let r = a.prem(&b);
        if r.is_zero() {
            break Some(b);
        }
        a = b;
        let cr = content(&r);
        b = integer_primitive(r.exact_div_scalar(&cr).unwrap());
    };
    match g {
        None => c,
        Some(g) => {
            let gp = Poly::from_univariate(&g.coeffs, v, p.vars());
            &c * &gp.canonical()
        }
    }
}

/// Rescales to coprime integer coefficients. Without this the rational
/// leaf level of the recursion has trivial content and the pseudo-remainders
/// grow exponentially.
fn integer_primitive(d: Dense) -> Dense {
    let (mut num, mut den) = (BigInt::zero(), BigInt::one());
    for c in &d.coeffs {
        for (_, v) in c.terms() {
            num = num.gcd(v.numer());
            den = den.lcm(v.denom());
        }
    }
    if num.is_zero() {
        return d;
    }
    let k = Rational::new(den, num);
    Dense::new(d.coeffs.iter().map(|c| c.scale(&k)).collect())
}

/// Gcd of the coefficients in the distinguished variable.
fn content(d: &Dense) -> Poly {
    let mut acc = d.coeffs[0].clone();
    for c in &d.coeffs[1..] {
        if acc.is_constant() && !acc.is_zero() {
            break;
        }
        acc = gcd_rec(&acc, c);
    }
    if acc.is_constant() {
        unit_like(&acc)
    } else {
        acc.canonical()
    }
}

fn derivative_gcd(p: &Poly) -> Poly {
    let mut g = p.clone();
    for v in p.used_vars() {
        let d = p.derivative(&v).unwrap();
        g = gcd_rec(&g, &d);
        if g.is_constant() {
            break;
        }
    }
    g.canonical()
}

/// `p / gcd(p, dp/dx_1, ..., dp/dx_n)` in canonical form.
pub fn squarefree_part(p: &Poly) -> Poly {
    if p.is_zero() || p.is_constant() {
        return p.canonical();
    }
    let g = derivative_gcd(p);
    p.exact_div(&g).expect("gcd divides p").canonical()
}

/// True when `p` has no repeated nonconstant factor. The zero polynomial is
/// not squarefree.
pub fn is_squarefree(p: &Poly) -> bool {
    if p.is_zero() {
        return false;
    }
    derivative_gcd(p).is_constant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s, &["x", "y", "z"]).unwrap().trimmed()
    }

    #[test]
    fn gcd_of_products() {
        let g = gcd(&p("(x - y)*(x + 2*y^2)"), &p("(x - y)*(3*x*y - 1)"));
        assert!(g.equals_up_to_unit(&p("x - y")));
        let g = gcd(&p("x^2*y^3*z"), &p("x*y^5"));
        assert_eq!(g, p("x*y^3"));
        assert_eq!(gcd(&p("x + 1"), &p("y")), p("1"));
    }

    #[test]
    fn gcd_is_canonical() {
        let g = gcd(&p("-2*x^2 + 2*y"), &p("4*x^2 - 4*y"));
        assert_eq!(g, p("x^2 - y"));
    }

    #[test]
    fn squarefree_examples() {
        assert!(is_squarefree(&p("x*y^2 - x^7")));
        assert!(!is_squarefree(&p("x^2*y")));
        assert_eq!(squarefree_part(&p("x^2*(y - x)")), p("x*(y - x)").canonical());
        assert!(is_squarefree(&p("x*(x - y^4)")));
        assert!(!is_squarefree(&Poly::zero(&["x"])));
    }

    #[test]
    fn squarefree_part_is_idempotent() {
        let f = p("(x + y)^3*(x - z)^2*(y*z + 1)");
        let s = squarefree_part(&f);
        assert_eq!(squarefree_part(&s), s);
        assert!(s.equals_up_to_unit(&p("(x + y)*(x - z)*(y*z + 1)")));
    }
}
