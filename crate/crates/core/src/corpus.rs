//! The quasi-homogeneous germs of Mond's list with their tabulated
//! structure counts and invariants, plus the worked examples.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::germ::QhType;
use crate::poly::{parse_poly, ratio, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("unknown family `{0}` (expected one of crosscap, S, B, C, F4, H, T4, P3)")]
    UnknownFamily(String),
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("P3 parameter {0} is excluded (c must avoid 0, 1/2, 1, 3/2)")]
    ExcludedParameter(String),
    #[error("cannot read `{0}` as a rational number")]
    BadParameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    CrossCap,
    S,
    B,
    C,
    F4,
    H,
    T4,
    P3,
}

impl Family {
    pub const ALL: [Family; 8] =
        [Family::CrossCap, Family::S, Family::B, Family::C, Family::F4, Family::H, Family::T4, Family::P3];

    pub fn name(self) -> &'static str {
        match self {
            Family::CrossCap => "crosscap",
            Family::S => "S",
            Family::B => "B",
            Family::C => "C",
            Family::F4 => "F4",
            Family::H => "H",
            Family::T4 => "T4",
            Family::P3 => "P3",
        }
    }

    /// Smallest admissible `k`, or `None` for a single germ.
    pub fn min_k(self) -> Option<u32> {
        match self {
            Family::S => Some(1),
            Family::B | Family::C => Some(3),
            Family::H => Some(2),
            _ => None,
        }
    }

    /// Range used by `table` when none is given.
    pub fn default_range(self) -> Option<(u32, u32)> {
        match self {
            Family::S => Some((1, 4)),
            Family::B => Some((3, 6)),
            Family::C => Some((3, 7)),
            Family::H => Some((2, 4)),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(t) || (*f == Family::CrossCap && t.eq_ignore_ascii_case("cross-cap")))
            .ok_or_else(|| CorpusError::UnknownFamily(s.to_string()))
    }
}

/// The tabulated `(r_i, r_f, m(f(D(f))), J)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub r_i: u32,
    pub r_f: u32,
    pub m: i64,
    pub j: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusEntry {
    pub name: String,
    pub family: Family,
    pub k: Option<u32>,
    pub germ: String,
    /// Type as tabulated for the germ as written.
    pub qh: QhType,
    pub expected: Expected,
}

/// The P3 parameter used when none is given.
pub fn default_p3_param() -> Rational {
    rat(2)
}

/// Parses a P3 parameter such as `2`, `-3/4` or `5/2` and applies the
/// exclusion guard.
pub fn parse_p3_param(text: &str) -> Result<Rational, CorpusError> {
    let bad = || CorpusError::BadParameter(text.to_string());
    let p = parse_poly(text, &[]).map_err(|_| bad())?;
    if !p.is_constant() {
        return Err(bad());
    }
    let c = p.constant_term();
    check_p3_param(&c)?;
    Ok(c)
}

pub fn check_p3_param(c: &Rational) -> Result<(), CorpusError> {
    if c.is_zero() || *c == ratio(1, 2) || *c == rat(1) || *c == ratio(3, 2) {
        return Err(CorpusError::ExcludedParameter(c.to_string()));
    }
    Ok(())
}

fn e(r_i: u32, r_f: u32, m: i64, j: i64) -> Expected {
    Expected { r_i, r_f, m, j }
}

/// One member of a family; `k` is required exactly for the indexed families.
pub fn entry(family: Family, k: Option<u32>, p3: &Rational) -> Result<CorpusEntry, CorpusError> {
    let need_k = |k: Option<u32>| -> Result<u64, CorpusError> {
        let min = family.min_k().unwrap();
        match k {
            Some(k) if k >= min => Ok(k as u64),
            Some(k) => Err(CorpusError::InvalidRange(format!("{family}: k = {k} but k must be at least {min}"))),
            None => Err(CorpusError::InvalidRange(format!("{family} needs an index k"))),
        }
    };
    if family.min_k().is_none() && k.is_some() {
        return Err(CorpusError::InvalidRange(format!("{family} takes no index")));
    }
    let (name, germ, qh, expected) = match family {
        Family::CrossCap => ("crosscap".to_string(), "(x, y^2, x*y)".to_string(), QhType::new(1, 2, 2, 1, 1), e(0, 1, 1, 0)),
        Family::S => {
            let k = need_k(k)?;
            let germ = format!("(x, y^2, y^3 + x^{}*y)", k + 1);
            if k % 2 == 1 {
                (format!("S{k}"), germ, QhType::new(1, k + 1, 3 * (k + 1) / 2, 1, (k + 1) / 2), e(2, 0, 1, 0))
            } else {
                (format!("S{k}"), germ, QhType::new(2, 2 * k + 2, 3 * k + 3, 2, k + 1), e(0, 1, 1, 0))
            }
        }
        Family::B => {
            let k = need_k(k)?;
            let germ = format!("(x, y^2, y^{} + x^2*y)", 2 * k + 1);
            let counts = if k % 2 == 1 { (2, 0) } else { (0, 2) };
            (format!("B{k}"), germ, QhType::new(k, 2, 2 * k + 1, k, 1), e(counts.0, counts.1, 2, k as i64))
        }
        Family::C => {
            let k = need_k(k)?;
            let germ = format!("(x, y^2, x*y^3 + x^{k}*y)");
            if k % 2 == 1 {
                (format!("C{k}"), germ, QhType::new(1, k - 1, (3 * k - 1) / 2, 1, (k - 1) / 2), e(2, 1, 2, 2))
            } else {
                (format!("C{k}"), germ, QhType::new(2, 2 * k - 2, 3 * k - 1, 2, k - 1), e(0, 2, 2, 2))
            }
        }
        Family::F4 => ("F4".to_string(), "(x, y^2, y^5 + x^3*y)".to_string(), QhType::new(4, 6, 15, 4, 3), e(0, 1, 2, 3)),
        Family::H => {
            let k = need_k(k)?;
            let germ = format!("(x, y^3, y^{} + x*y)", 3 * k - 1);
            (format!("H{k}"), germ, QhType::new(3 * k - 2, 3, 3 * k - 1, 3 * k - 2, 1), e(2, 0, 3, 2))
        }
        Family::T4 => ("T4".to_string(), "(x, y^3 + x*y, y^4)".to_string(), QhType::new(2, 3, 4, 2, 1), e(2, 1, 3, 3)),
        Family::P3 => {
            check_p3_param(p3)?;
            let c = if p3.is_integer() && p3 > &Rational::zero() { p3.to_string() } else { format!("({p3})") };
            let germ = format!("(x, y^3 + x*y, {c}*y^4 + x*y^2)");
            ("P3".to_string(), germ, QhType::new(2, 3, 4, 2, 1), e(2, 1, 3, 3))
        }
    };
    Ok(CorpusEntry { name, family, k: k.filter(|_| family.min_k().is_some()), germ, qh, expected })
}

/// A family with an optional inclusive `k` range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selector {
    pub family: Family,
    pub range: Option<(u32, u32)>,
}

impl Selector {
    pub fn entries(&self, p3: &Rational) -> Result<Vec<CorpusEntry>, CorpusError> {
        match (self.family.min_k(), self.range.or(self.family.default_range())) {
            (None, None) => Ok(vec![entry(self.family, None, p3)?]),
            (None, Some(_)) => Err(CorpusError::InvalidRange(format!("{} takes no index", self.family))),
            (Some(_), Some((lo, hi))) => {
                if lo > hi {
                    return Err(CorpusError::InvalidRange(format!("{}: empty range {lo}..{hi}", self.family)));
                }
                (lo..=hi).map(|k| entry(self.family, Some(k), p3)).collect()
            }
            (Some(_), None) => unreachable!("indexed families have default ranges"),
        }
    }
}

/// Parses `lo..hi` or a single `k`.
pub fn parse_range(text: &str) -> Result<(u32, u32), CorpusError> {
    let bad = || CorpusError::InvalidRange(format!("`{text}` is not of the form k or lo..hi"));
    let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad());
    match text.split_once("..") {
        Some((lo, hi)) => {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            Ok((num(lo)?, num(hi)?))
        }
        None => {
            let k = num(text)?;
            Ok((k, k))
        }
    }
}

/// Whether a token looks like a range rather than a family name.
pub fn is_range(text: &str) -> bool {
    text.chars().next().is_some_and(|c| c.is_ascii_digit())
}

/// Parses selectors given as `family`, `family=range`, or `family` followed
/// by a separate range token.
pub fn parse_selectors<S: AsRef<str>>(tokens: &[S]) -> Result<Vec<Selector>, CorpusError> {
    let mut out: Vec<Selector> = Vec::new();
    for tok in tokens {
        let tok = tok.as_ref();
        if is_range(tok) {
            let last = out.last_mut().filter(|s| s.range.is_none()).ok_or_else(|| {
                CorpusError::InvalidRange(format!("range `{tok}` does not follow a family name"))
            })?;
            last.range = Some(parse_range(tok)?);
            continue;
        }
        let (fam, range) = match tok.split_once('=') {
            Some((f, r)) => (f, Some(parse_range(r)?)),
            None => (tok, None),
        };
        out.push(Selector { family: fam.parse()?, range });
    }
    Ok(out)
}

/// The full default table, in table order.
pub fn default_selectors() -> Vec<Selector> {
    [Family::CrossCap, Family::S, Family::B, Family::C, Family::F4, Family::H, Family::T4, Family::P3]
        .into_iter()
        .map(|family| Selector { family, range: None })
        .collect()
}

/// Resolves a corpus name such as `crosscap`, `F4`, `B5` or `P3`.
pub fn lookup(name: &str, p3: &Rational) -> Option<CorpusEntry> {
    let t = name.trim();
    if let Ok(f) = t.parse::<Family>() {
        if f.min_k().is_none() {
            return entry(f, None, p3).ok();
        }
    }
    let split = t.find(|c: char| c.is_ascii_digit())?;
    let (fam, k) = t.split_at(split);
    let f: Family = fam.parse().ok()?;
    f.min_k()?;
    entry(f, Some(k.parse().ok()?), p3).ok()
}

/// A worked example with the values it is known to produce.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorkedExample {
    pub name: &'static str,
    pub germ: &'static str,
    pub m: i64,
    pub j: i64,
    /// Double point equation up to a unit, when stated.
    pub lambda: Option<&'static str>,
    pub mu: Option<i64>,
}

pub fn worked_examples() -> Vec<WorkedExample> {
    vec![
        WorkedExample { name: "4.1(a)", germ: "(x, y^2, y^5 + x^3*y)", m: 2, j: 3, lambda: None, mu: None },
        WorkedExample {
            name: "4.1(b)",
            germ: "(x, y^4, y^6 + x^5*y - 5*x^3*y^3 + 4*x*y^5)",
            m: 9,
            j: 39,
            lambda: None,
            mu: None,
        },
        WorkedExample { name: "4.1(c)", germ: "(x, y^3, y^5 + x*y)", m: 3, j: 2, lambda: None, mu: None },
        WorkedExample { name: "4.1(d)", germ: "(x, y^2, x^2*y - x*y^5)", m: 2, j: 4, lambda: Some("x*(x - y^4)"), mu: Some(7) },
    ]
}

/// The germ whose double point structure is worked out in detail.
pub const C7_GERM: &str = "(x, y^2, x*y^3 - x^7*y)";
