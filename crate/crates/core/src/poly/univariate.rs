//! Dense univariate polynomials over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Poly, Rational};

/// `coeffs[i]` multiplies `t^i`; trailing zeros are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `t`.
    pub fn t() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with zero mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|x| -x).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.deg();
        if self.is_zero() || self.deg() < dd {
            return (Self::zero(), self.clone());
        }
        let inv = d.lc().recip();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::zero(); self.deg() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[k + i] -= &c * dc;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Extended Euclid: returns `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Inverse modulo `m`, if `gcd(self, m) = 1`.
    pub fn inverse_mod(&self, m: &Self) -> Option<Self> {
        let (g, s, _) = self.rem(m).ext_gcd(m);
        if g.degree() == Some(0) {
            Some(s.rem(m))
        } else {
            None
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).deg() == 0
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `self(inner(t))`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// `self(inner(t)) mod m`.
    pub fn compose_mod(&self, inner: &Self, m: &Self) -> Self {
        let mut acc = Self::zero();
        let inner = inner.rem(m);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&inner).add(&Self::constant(c.clone())).rem(m);
        }
        acc
    }

    /// Integer multiple with coprime integer coefficients and positive
    /// leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let p = self.to_poly("t").canonical();
        Self::from_poly(&p, "t").unwrap()
    }

    /// Converts a polynomial that involves only `var`.
    pub fn from_poly(p: &Poly, var: &str) -> Option<Self> {
        let idx = p.var_index(var);
        let mut coeffs = Vec::new();
        for (e, c) in p.terms() {
            let mut k = 0usize;
            for (i, &x) in e.iter().enumerate() {
                if Some(i) == idx {
                    k = x as usize;
                } else if x > 0 {
                    return None;
                }
            }
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rational::zero());
            }
            coeffs[k] = c.clone();
        }
        Some(Self::new(coeffs))
    }

    pub fn to_poly(&self, var: &str) -> Poly {
        let vars = vec![var.to_string()];
        let mut p = Poly::zero_in(vars);
        for (k, c) in self.coeffs.iter().enumerate() {
            p.add_term(vec![k as u32], c.clone());
        }
        p
    }

    /// Rational roots, found from the integer-primitive form by testing the
    /// candidates `p/q` with `p | a_0`, `q | a_n` when both are small.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        if self.is_zero() {
            return out;
        }
        let mut f = self.primitive();
        // strip roots at zero
        while !f.is_zero() && f.coeff(0).is_zero() {
            if out.is_empty() {
                out.push(Rational::zero());
            }
            f = Self::new(f.coeffs[1..].to_vec());
        }
        if f.deg() == 0 {
            return out;
        }
        let a0 = f.coeff(0).to_integer().abs();
        let an = f.lc().to_integer().abs();
        let (Some(p_divs), Some(q_divs)) = (small_divisors(&a0), small_divisors(&an)) else {
            return out;
        };
        for p in &p_divs {
            for q in &q_divs {
                for s in [1i64, -1] {
                    let cand = Rational::new(p * BigInt::from(s), q.clone());
                    if !out.contains(&cand) && f.eval(&cand).is_zero() {
                        out.push(cand);
                    }
                }
            }
        }
        out
    }
}

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let limit = BigInt::from(1_000_000_000_000i64);
    if n > &limit {
        return None;
    }
    let n: i64 = n.try_into().ok()?;
    let mut v = Vec::new();
    let mut d = 1i64;
    while d * d <= n {
        if n % d == 0 {
            v.push(BigInt::from(d));
            if d * d != n {
                v.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(v)
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly("t"))
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;

    #[test]
    fn division_identity() {
        let a = UPoly::from_ints(&[3, 0, -2, 5, 1]);
        let b = UPoly::from_ints(&[1, 2, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.deg() < b.deg());
    }

    #[test]
    fn gcd_and_inverse() {
        let a = UPoly::from_ints(&[-1, 0, 1]); // t^2 - 1
        let b = UPoly::from_ints(&[1, 1]); // t + 1
        assert_eq!(a.gcd(&b), b);
        let m = UPoly::from_ints(&[1, 0, 1]);
        let inv = UPoly::from_ints(&[1, 1]).inverse_mod(&m).unwrap();
        assert_eq!(inv.mul(&UPoly::from_ints(&[1, 1])).rem(&m), UPoly::one());
        assert!(b.inverse_mod(&a).is_none());
    }

    #[test]
    fn rational_roots_found() {
        // (2t - 1)(t + 3) t
        let f = UPoly::from_ints(&[0, -3, 5, 2]);
        let mut r = f.rational_roots();
        r.sort();
        assert_eq!(r, vec![Rational::from_integer((-3).into()), Rational::zero(), ratio(1, 2)]);
        assert!(UPoly::from_ints(&[1, 0, 1]).rational_roots().is_empty());
    }

    #[test]
    fn composition() {
        let f = UPoly::from_ints(&[1, 0, 1]);
        let g = UPoly::from_ints(&[0, 2]);
        assert_eq!(f.compose(&g), UPoly::from_ints(&[1, 0, 4]));
    }
}
