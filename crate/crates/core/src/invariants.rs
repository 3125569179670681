//! Closed-form invariants of a normal form from its weights and degrees.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::germ::QhType;
use crate::poly::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("{name} evaluates to the non-integer {value}")]
    NonIntegralInvariant { name: &'static str, value: String },
    #[error("{name} evaluates to the negative value {value}")]
    NegativeInvariant { name: &'static str, value: i64 },
    #[error("inconsistent invariants: {what} ({details})")]
    InconsistentInvariants { what: String, details: String },
}

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Weights, degrees and the derived quantities the formulas consume.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantContext {
    pub a: i64,
    pub b: i64,
    pub d1: i64,
    pub d2: i64,
    pub d3: i64,
    /// `d2 + d3 - b`.
    pub epsilon: i64,
    /// `d2 d3 / b`.
    pub delta: i64,
    /// `min(a, d2)`.
    pub c: i64,
    pub s: i64,
    pub n: i64,
}

impl InvariantContext {
    /// Builds the context for a normal form of type `qh`. Both conventions
    /// for `epsilon` and `delta` (with and without `d1 = a` substituted) are
    /// evaluated and required to agree.
    pub fn new(qh: &QhType, s: u32, n: u32) -> Result<Self, InvariantError> {
        let (a, b) = (qh.a as i64, qh.b as i64);
        let (d1, d2, d3) = (qh.d1() as i64, qh.d2() as i64, qh.d3() as i64);
        let eps_short = d2 + d3 - b;
        let eps_long = d1 + d2 + d3 - a - b;
        let delta_short = Rational::new(BigInt::from(d2 * d3), BigInt::from(b));
        let delta_long = Rational::new(BigInt::from(d1 * d2 * d3), BigInt::from(a * b));
        if eps_short != eps_long || delta_short != delta_long {
            return Err(InvariantError::InconsistentInvariants {
                what: "epsilon/delta conventions disagree".into(),
                details: format!("d1 = {d1}, a = {a}"),
            });
        }
        let delta = integral("delta", &delta_short)?;
        Ok(InvariantContext { a, b, d1, d2, d3, epsilon: eps_short, delta, c: a.min(d2), s: s as i64, n: n as i64 })
    }
}

fn integral(name: &'static str, v: &Rational) -> Result<i64, InvariantError> {
    if !v.is_integer() {
        return Err(InvariantError::NonIntegralInvariant { name, value: v.to_string() });
    }
    v.to_integer()
        .to_i64()
        .ok_or_else(|| InvariantError::NonIntegralInvariant { name, value: v.to_string() })
}

fn non_negative(name: &'static str, v: &Rational) -> Result<i64, InvariantError> {
    let k = integral(name, v)?;
    if v.is_negative() {
        return Err(InvariantError::NegativeInvariant { name, value: k });
    }
    Ok(k)
}

fn c_value(x: &InvariantContext) -> Rational {
    let (a, b, d1, d2, d3) = (x.a, x.b, x.d1, x.d2, x.d3);
    Rational::new(
        BigInt::from((d2 - a) * (d3 - b) + (d1 - b) * (d3 - b) + (d1 - a) * (d2 - a)),
        BigInt::from(a * b),
    )
}

/// Number of cross-caps in a stabilization.
pub fn mond_c(x: &InvariantContext) -> Result<i64, InvariantError> {
    non_negative("C", &c_value(x))
}

/// Number of triple points in a stabilization.
pub fn mond_t(x: &InvariantContext) -> Result<i64, InvariantError> {
    let (de, ep) = (q(x.delta), q(x.epsilon));
    let v = (&de - &ep) * (&de - q(2) * &ep) / q(6 * x.a * x.b) + c_value(x) / q(3);
    non_negative("T", &v)
}

/// Milnor number of the double point curve.
pub fn mond_mu_d(x: &InvariantContext) -> Result<i64, InvariantError> {
    let u = x.delta - x.epsilon;
    let v = Rational::new(BigInt::from((u - x.a) * (u - x.b)), BigInt::from(x.a * x.b));
    non_negative("mu(D)", &v)
}

/// Multiplicity of the image of the double point curve.
pub fn m_image_double_points(x: &InvariantContext) -> Result<i64, InvariantError> {
    let (a, b, c, s, d2, d3) = (x.a, x.b, x.c, x.s, x.d2, x.d3);
    let num = (d2 - b) * (d3 - b) * c + s * a * b * (d2 - c);
    non_negative("m(f(D))", &Rational::new(BigInt::from(num), BigInt::from(2 * a * b * b)))
}

/// The same multiplicity summed over branch images: `c` per identification
/// pair, `c/2` per binomial fold branch and `n/2` for `V(x)`.
pub fn m_via_branch_sum(x: &InvariantContext, r_i: u32, r_f: u32) -> Result<i64, InvariantError> {
    let (c, s, n) = (q(x.c), q(x.s), q(x.n));
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let v = q(r_i as i64) * &half * &c + (q(r_f as i64) - &s) * &half * &c + &s * &half * n;
    non_negative("m(f(D)) branch sum", &v)
}

/// Tacnode count from the weights.
pub fn j_formula(x: &InvariantContext) -> Result<i64, InvariantError> {
    let (a, b, c, s, d2, d3) = (x.a, x.b, x.c, x.s, x.d2, x.d3);
    let (de, ep) = (x.delta, x.epsilon);
    let num = (d2 - b) * (d3 - b) * (c - 3 * b)
        + b * (de - ep - a) * (de - ep - b)
        + b * (ep - de) * (de - 2 * ep)
        + s * a * b * (d2 - c)
        - a * b * b;
    non_negative("J", &Rational::new(BigInt::from(num), BigInt::from(2 * a * b * b)))
}

/// `J = (mu - C - 1)/2 - 3T + m`.
pub fn j_via_relation(c: i64, t: i64, mu: i64, m: i64) -> Result<i64, InvariantError> {
    let v = Rational::new(BigInt::from(mu - c - 1), BigInt::from(2)) - q(3 * t) + q(m);
    non_negative("J relation", &v)
}

/// One invariant with every independent evaluation that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Value {
    pub value: i64,
    pub formula: i64,
    /// Second closed form: branch sum for `m`, the relation for `J`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alternate: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<i64>,
}

impl Value {
    fn check(&self, name: &str, details: &str) -> Result<(), InvariantError> {
        let bad = |what: &str, v: i64| InvariantError::InconsistentInvariants {
            what: format!("{name}: formula {} but {what} {v}", self.formula),
            details: details.to_string(),
        };
        if let Some(v) = self.alternate.filter(|v| *v != self.formula) {
            return Err(bad("second path", v));
        }
        if let Some(v) = self.oracle.filter(|v| *v != self.formula) {
            return Err(bad("oracle", v));
        }
        Ok(())
    }
}

/// Independently computed values fed into the report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OracleValues {
    pub c: Option<i64>,
    pub mu: Option<i64>,
    pub m: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub context: InvariantContext,
    #[serde(rename = "C")]
    pub c: Value,
    #[serde(rename = "T")]
    pub t: Value,
    pub mu_d: Value,
    pub m_fd: Value,
    #[serde(rename = "J")]
    pub j: Value,
    pub r_i: u32,
    pub r_f: u32,
    pub r: u32,
    pub s: u32,
}

/// Structure counts from the double point analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Counts {
    pub r_i: u32,
    pub r_f: u32,
    pub r: u32,
    pub s: u32,
}

/// Evaluates every invariant, runs the consistency gates and attaches
/// oracle values; any disagreement is an error.
pub fn assemble_report(
    ctx: &InvariantContext,
    counts: Counts,
    oracles: OracleValues,
    diagnostics: &str,
) -> Result<InvariantReport, InvariantError> {
    let details = format!(
        "a={} b={} d2={} d3={} s={} c={} r_i={} r_f={} {diagnostics}",
        ctx.a, ctx.b, ctx.d2, ctx.d3, ctx.s, ctx.c, counts.r_i, counts.r_f
    );
    let structural = |what: String| InvariantError::InconsistentInvariants { what, details: details.clone() };
    if counts.r_i % 2 != 0 {
        return Err(structural(format!("odd number {} of identification branches", counts.r_i)));
    }
    if counts.r_i + counts.r_f != counts.r + counts.s {
        return Err(structural(format!(
            "r_i + r_f - s = {} but r = {}",
            counts.r_i as i64 + counts.r_f as i64 - counts.s as i64,
            counts.r
        )));
    }
    let c = mond_c(ctx)?;
    let t = mond_t(ctx)?;
    let mu = mond_mu_d(ctx)?;
    let m = m_image_double_points(ctx)?;
    let m_sum = m_via_branch_sum(ctx, counts.r_i, counts.r_f)?;
    let j = j_formula(ctx)?;
    let j_rel = j_via_relation(c, t, mu, m)?;
    let simple = |v: i64, oracle: Option<i64>| Value { value: v, formula: v, alternate: None, oracle };
    let report = InvariantReport {
        context: ctx.clone(),
        c: simple(c, oracles.c),
        t: simple(t, None),
        mu_d: simple(mu, oracles.mu),
        m_fd: Value { value: m, formula: m, alternate: Some(m_sum), oracle: oracles.m },
        j: Value { value: j, formula: j, alternate: Some(j_rel), oracle: None },
        r_i: counts.r_i,
        r_f: counts.r_f,
        r: counts.r,
        s: counts.s,
    };
    report.c.check("C", &details)?;
    report.mu_d.check("mu(D)", &details)?;
    report.m_fd.check("m(f(D))", &details)?;
    report.j.check("J", &details)?;
    Ok(report)
}

/// `(D - a)(D - b) / (ab)`, the Milnor number of a reduced
/// quasi-homogeneous plane curve of degree `D`.
pub fn quasi_homogeneous_milnor(d: i64, a: i64, b: i64) -> Rational {
    Rational::new(BigInt::from((d - a) * (d - b)), BigInt::from(a * b))
}
