//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A [`Poly`] carries its own ordered list of variable names. Binary
//! operations align the two operands by name, so `x + y'` works no matter
//! which variables each side was built over.

mod gcd;
pub(crate) mod parse;
mod resultant;
mod univariate;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use gcd::{gcd, is_squarefree, squarefree_part};
pub use parse::{parse_poly, ParseError, ParseErrorKind};
pub use resultant::resultant;
pub use univariate::UPoly;

/// Exact rational number, always stored in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Exponent vector, one entry per variable of the owning polynomial.
pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("resultant of two zero polynomials is undefined")]
    BothZero,
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone)]
pub struct Poly {
    vars: Vec<String>,
    terms: BTreeMap<Exponents, Rational>,
}

fn to_names(vars: &[&str]) -> Vec<String> {
    vars.iter().map(|v| v.to_string()).collect()
}

/// Graded lexicographic comparison of exponent vectors.
pub(crate) fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl Poly {
    pub fn zero(vars: &[&str]) -> Self {
        Self::zero_in(to_names(vars))
    }

    pub(crate) fn zero_in(vars: Vec<String>) -> Self {
        Poly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(c: Rational, vars: &[&str]) -> Self {
        Self::constant_in(c, to_names(vars))
    }

    pub(crate) fn constant_in(c: Rational, vars: Vec<String>) -> Self {
        let mut p = Self::zero_in(vars);
        if !c.is_zero() {
            let n = p.vars.len();
            p.terms.insert(vec![0; n], c);
        }
        p
    }

    pub fn one(vars: &[&str]) -> Self {
        Self::constant(Rational::one(), vars)
    }

    /// The polynomial consisting of the single variable `name`; the universe is
    /// `vars`, extended by `name` if needed.
    pub fn var(name: &str, vars: &[&str]) -> Self {
        let mut names = to_names(vars);
        if !names.iter().any(|v| v == name) {
            names.push(name.to_string());
        }
        let idx = names.iter().position(|v| v == name).unwrap();
        let mut e = vec![0; names.len()];
        e[idx] = 1;
        Self::monomial_in(Rational::one(), e, names)
    }

    pub fn monomial(c: Rational, exps: &[u32], vars: &[&str]) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length must match variables");
        Self::monomial_in(c, exps.to_vec(), to_names(vars))
    }

    pub(crate) fn monomial_in(c: Rational, exps: Exponents, vars: Vec<String>) -> Self {
        let mut p = Self::zero_in(vars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated exponents and dropping zeros.
    pub fn from_terms<I>(vars: &[&str], terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, Rational)>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), p.vars.len());
            p.add_term(e, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Value of the constant term (zero if absent).
    pub fn constant_term(&self) -> Rational {
        let n = self.vars.len();
        self.terms.get(&vec![0; n]).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// Degree in `var`; `None` for the zero polynomial. Variables outside the
    /// universe have degree 0.
    pub fn degree_in(&self, var: &str) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        match self.var_index(var) {
            None => Some(0),
            Some(i) => self.terms.keys().map(|e| e[i]).max(),
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Variables that actually occur with positive exponent.
    pub fn used_vars(&self) -> Vec<String> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .map(|i| self.vars[i].clone())
            .collect()
    }

    /// Re-expresses the polynomial over `vars`. Fails if a used variable is
    /// missing from `vars`.
    pub fn with_vars(&self, vars: &[String]) -> Result<Poly, PolyError> {
        if self.vars == vars {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> =
            self.vars.iter().map(|v| vars.iter().position(|w| w == v)).collect();
        let mut out = Poly::zero_in(vars.to_vec());
        for (e, c) in &self.terms {
            let mut ne = vec![0; vars.len()];
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => ne[j] = x,
                    None => return Err(PolyError::UnknownVariable(self.vars[i].clone())),
                }
            }
            out.terms.insert(ne, c.clone());
        }
        Ok(out)
    }

    fn union_vars(a: &[String], b: &[String]) -> Vec<String> {
        let mut out = a.to_vec();
        for v in b {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        out
    }

    /// Brings both operands onto a common variable universe.
    pub(crate) fn align(a: &Poly, b: &Poly) -> (Poly, Poly) {
        if a.vars == b.vars {
            return (a.clone(), b.clone());
        }
        let u = Self::union_vars(&a.vars, &b.vars);
        (a.with_vars(&u).unwrap(), b.with_vars(&u).unwrap())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero_in(self.vars.clone());
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    fn add_same(&self, other: &Poly, sign: bool) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), if sign { c.clone() } else { -c });
        }
        out
    }

    fn mul_same(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero_in(self.vars.clone());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// Multiplies by the monomial `c * vars^exps` (same universe).
    pub(crate) fn mul_monomial(&self, c: &Rational, exps: &[u32]) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.iter().zip(exps).map(|(a, b)| a + b).collect(), x * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut result = Poly::constant_in(Rational::one(), self.vars.clone());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Lex-leading term (first variable most significant).
    pub(crate) fn lex_leading(&self) -> Option<(&Exponents, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Leading term under graded lexicographic order.
    pub fn leading_term(&self) -> Option<(&Exponents, &Rational)> {
        self.terms.iter().max_by(|a, b| grlex(a.0, b.0))
    }

    /// Exact quotient `self / divisor`; fails with `NotDivisible` when the
    /// remainder is nonzero.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let (p, q) = Self::align(self, divisor);
        let (lq_e, lq_c) = q.lex_leading().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        if q.terms.len() == 1 {
            // monomial divisor: termwise
            let mut out = Poly::zero_in(p.vars.clone());
            for (e, c) in &p.terms {
                if e.iter().zip(&lq_e).any(|(a, b)| a < b) {
                    return Err(PolyError::NotDivisible);
                }
                out.terms.insert(e.iter().zip(&lq_e).map(|(a, b)| a - b).collect(), c / &lq_c);
            }
            return Ok(out);
        }
        let mut rem = p.clone();
        let mut quot = Poly::zero_in(p.vars.clone());
        let inv = lq_c.recip();
        while let Some((e, c)) = rem.lex_leading() {
            if e.iter().zip(&lq_e).any(|(a, b)| a < b) {
                return Err(PolyError::NotDivisible);
            }
            let m: Exponents = e.iter().zip(&lq_e).map(|(a, b)| a - b).collect();
            let f = c * &inv;
            rem = rem.add_same(&q.mul_monomial(&f, &m), false);
            quot.add_term(m, f);
        }
        Ok(quot)
    }

    pub fn derivative(&self, var: &str) -> Result<Poly, PolyError> {
        let i = self.var_index(var).ok_or_else(|| PolyError::UnknownVariable(var.to_string()))?;
        let mut out = Poly::zero_in(self.vars.clone());
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            out.add_term(ne, c * Rational::from_integer(BigInt::from(e[i])));
        }
        Ok(out)
    }

    /// Simultaneous substitution. Every variable that occurs in `self` must be
    /// bound; variables that do not occur may be left unbound.
    pub fn substitute(&self, bindings: &HashMap<&str, Poly>) -> Result<Poly, PolyError> {
        let mut universe: Vec<String> = Vec::new();
        for (i, v) in self.vars.iter().enumerate() {
            let used = self.terms.keys().any(|e| e[i] > 0);
            match bindings.get(v.as_str()) {
                Some(b) => universe = Self::union_vars(&universe, b.vars()),
                None if used => return Err(PolyError::UnknownVariable(v.clone())),
                None => {}
            }
        }
        let images: Vec<Option<Poly>> = self
            .vars
            .iter()
            .map(|v| bindings.get(v.as_str()).map(|b| b.with_vars(&universe).unwrap()))
            .collect();
        // cache powers per variable
        let mut powers: Vec<Vec<Poly>> = vec![Vec::new(); self.vars.len()];
        let one = Poly::constant_in(Rational::one(), universe.clone());
        let mut out = Poly::zero_in(universe.clone());
        for (e, c) in &self.terms {
            let mut term = one.scale(c);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let img = images[i].as_ref().unwrap();
                let cache = &mut powers[i];
                if cache.is_empty() {
                    cache.push(one.clone());
                }
                while cache.len() <= k as usize {
                    let next = cache.last().unwrap().mul_same(img);
                    cache.push(next);
                }
                term = term.mul_same(&cache[k as usize]);
            }
            out = out.add_same(&term, true);
        }
        Ok(out)
    }

    /// Renames variable `from` to `to` (which must not already be used).
    pub fn rename(&self, from: &str, to: &str) -> Poly {
        let mut p = self.clone();
        if let Some(i) = p.var_index(from) {
            if let Some(j) = p.var_index(to) {
                // `to` already present: move exponents over and drop `from`
                let mut names = p.vars.clone();
                names.remove(i);
                let mut out = Poly::zero_in(names);
                for (e, c) in &p.terms {
                    let mut ne = e.clone();
                    ne[j] += ne[i];
                    ne.remove(i);
                    out.add_term(ne, c.clone());
                }
                return out;
            }
            p.vars[i] = to.to_string();
        }
        p
    }

    /// Evaluates at rational values for every used variable.
    pub fn eval(&self, values: &HashMap<&str, Rational>) -> Result<Rational, PolyError> {
        let mut vals = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            let used = self.terms.keys().any(|e| e[i] > 0);
            match values.get(v.as_str()) {
                Some(x) => vals.push(x.clone()),
                None if used => return Err(PolyError::UnknownVariable(v.clone())),
                None => vals.push(Rational::zero()),
            }
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= num_traits::pow(vals[i].clone(), k as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Coefficients with respect to `var`: `self = sum_i out[i] * var^i`. The
    /// coefficients live in the same universe with `var`'s exponent zero.
    pub(crate) fn to_univariate(&self, var_idx: usize) -> Vec<Poly> {
        let deg = self.terms.keys().map(|e| e[var_idx]).max().unwrap_or(0) as usize;
        let mut out = vec![Poly::zero_in(self.vars.clone()); if self.is_zero() { 0 } else { deg + 1 }];
        for (e, c) in &self.terms {
            let k = e[var_idx] as usize;
            let mut ne = e.clone();
            ne[var_idx] = 0;
            out[k].terms.insert(ne, c.clone());
        }
        out
    }

    pub(crate) fn from_univariate(coeffs: &[Poly], var_idx: usize, vars: &[String]) -> Poly {
        let mut out = Poly::zero_in(vars.to_vec());
        for (k, c) in coeffs.iter().enumerate() {
            for (e, x) in &c.terms {
                let mut ne = e.clone();
                ne[var_idx] += k as u32;
                out.add_term(ne, x.clone());
            }
        }
        out
    }

    /// Least common multiple of denominators and gcd of numerators.
    fn content_parts(&self) -> (BigInt, BigInt) {
        let mut l = BigInt::one();
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
            g = g.gcd(c.numer());
        }
        (l, g)
    }

    /// Canonical representative up to a rational unit: integer coefficients
    /// with gcd 1 and positive graded-lex leading coefficient.
    pub fn canonical(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let (l, _) = self.content_parts();
        let scaled = self.scale(&Rational::from_integer(l));
        let (_, g) = scaled.content_parts();
        let mut factor = Rational::new(BigInt::one(), g);
        if scaled.leading_term().unwrap().1.is_negative() {
            factor = -factor;
        }
        scaled.scale(&factor)
    }

    /// Monic in the graded-lex sense.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// True when `self` and `other` differ by a nonzero rational factor.
    pub fn equals_up_to_unit(&self, other: &Poly) -> bool {
        self.canonical() == other.canonical()
    }

    /// Drops variables that do not occur.
    pub fn trimmed(&self) -> Poly {
        let used = self.used_vars();
        self.with_vars(&used).unwrap()
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        let (a, b) = Poly::align(self, other);
        a.terms == b.terms
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

fn write_monomial(out: &mut String, vars: &[String], e: &[u32]) {
    let mut first = true;
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            out.push('*');
        }
        first = false;
        out.push_str(&vars[i]);
        if k > 1 {
            out.push('^');
            out.push_str(&k.to_string());
        }
    }
}

impl fmt::Display for Poly {
    /// Terms in descending graded-lex order, e.g. `x^7*y - x*y^3 + 3/2*y`.
    /// The output re-parses to the same polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex(b.0, a.0));
        let mut s = String::new();
        for (idx, (e, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let is_const = e.iter().all(|&k| k == 0);
            if is_const {
                s.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    s.push_str(&mag.to_string());
                    s.push('*');
                }
                write_monomial(&mut s, &self.vars, e);
            }
        }
        f.write_str(&s)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a, 'b> $trait<&'b Poly> for &'a Poly {
            type Output = Poly;
            fn $method(self, rhs: &'b Poly) -> Poly {
                let f: fn(&Poly, &Poly) -> Poly = $body;
                if self.vars == rhs.vars {
                    f(self, rhs)
                } else {
                    let (a, b) = Poly::align(self, rhs);
                    f(&a, &b)
                }
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl<'b> $trait<&'b Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &'b Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Poly> for &'a Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.add_same(b, true));
binop!(Sub, sub, |a, b| a.add_same(b, false));
binop!(Mul, mul, |a, b| a.mul_same(b));

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        parse_poly(s, &["x", "y", "y'", "u", "a", "b"]).unwrap().trimmed()
    }

    #[test]
    fn additive_inverse_is_zero() {
        let a = p("y^2");
        assert!((&a + &p("-y^2")).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(p("y + y'") * p("y - y'"), p("y^2 - y'^2"));
        assert_eq!(p("x + y") * p("x + y"), p("x^2 + 2*x*y + y^2"));
    }

    #[test]
    fn exact_division_examples() {
        assert_eq!(p("y^2 - y'^2").exact_div(&p("y - y'")).unwrap(), p("y + y'"));
        let num = p("x*y^3 - x^7*y - x*y'^3 + x^7*y'");
        let q = num.exact_div(&p("y - y'")).unwrap();
        assert_eq!(q, p("x*(y^2 + y*y' + y'^2) - x^7"));
        let any = p("3*x^2*y - 1/2*u");
        assert_eq!(any.exact_div(&p("1")).unwrap(), any);
        assert_eq!(p("x^2 + 1").exact_div(&p("x")), Err(PolyError::NotDivisible));
    }

    #[test]
    fn derivatives() {
        let f = p("x*y^2 - x^7");
        assert_eq!(f.derivative("y").unwrap(), p("2*x*y"));
        assert_eq!(f.derivative("x").unwrap(), p("y^2 - 7*x^6"));
        let c = Poly::constant(rat(5), &["x"]);
        assert!(c.derivative("x").unwrap().is_zero());
        assert_eq!(c.derivative("z"), Err(PolyError::UnknownVariable("z".into())));
    }

    #[test]
    fn substitution_examples() {
        let u = Poly::var("u", &[]);
        let mut b = HashMap::new();
        b.insert("y", u.pow(3));
        assert_eq!(p("y^2").substitute(&b).unwrap(), p("u^6"));

        let mut b = HashMap::new();
        b.insert("x", u.clone());
        b.insert("y", u.pow(3));
        assert!(p("x*y^3 - x^7*y").substitute(&b).unwrap().is_zero());

        let f = p("x^2*y - 3*y + 1");
        let mut id = HashMap::new();
        id.insert("x", Poly::var("x", &["x", "y"]));
        id.insert("y", Poly::var("y", &["x", "y"]));
        assert_eq!(f.substitute(&id).unwrap(), f);

        let mut partial = HashMap::new();
        partial.insert("x", u.clone());
        assert_eq!(f.substitute(&partial), Err(PolyError::UnknownVariable("y".into())));
    }

    #[test]
    fn canonical_form() {
        let f = p("-1/2*x*y^2 + 1/2*x^7");
        assert_eq!(f.canonical().to_string(), "x^7 - x*y^2");
        assert!(f.equals_up_to_unit(&p("x*y^2 - x^7")));
    }

    #[test]
    fn display_round_trips() {
        let f = p("3/2*x^2*y - y' + 7 - u^3");
        let again = parse_poly(&f.to_string(), &["x", "y", "y'", "u"]).unwrap();
        assert_eq!(again, f);
    }
}
