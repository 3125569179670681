//! Map germs `(C^2,0) -> (C^3,0)`: parsing, corank and weight detection.

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{parse::Parser, ParseError, ParseErrorKind, Poly, Rational};

pub const SOURCE_VARS: [&str; 2] = ["x", "y"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GermError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown variable `{0}` (germs are polynomials in x, y)")]
    UnknownVariable(String),
    #[error("coordinate {coordinate} has nonzero constant term (germ must send 0 to 0)")]
    NonzeroConstantTerm { coordinate: usize },
    #[error("coordinate {coordinate} is identically zero")]
    ZeroCoordinate { coordinate: usize },
    #[error("not quasi-homogeneous: {0}")]
    NotQuasiHomogeneous(String),
    #[error("weights are not unique: every positive weight pair is admissible")]
    AmbiguousWeights,
    #[error("corank {0}")]
    NotCorankOne(u32),
    #[error("not finite: neither target coordinate has a pure power of y")]
    NotFinite,
    #[error("not finitely determined: {0}")]
    NotFinitelyDetermined(String),
    #[error("not finitely determined: alpha = 0 forces n = 2, but n = {n}")]
    NotFinitelyDeterminedHint { n: u32 },
}

/// A germ `f = (f1, f2, f3)` with polynomial coordinates in `x, y` and no
/// constant terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapGerm {
    coords: [Poly; 3],
}

impl MapGerm {
    pub fn new(coords: [Poly; 3]) -> Result<Self, GermError> {
        let vars: Vec<String> = SOURCE_VARS.iter().map(|s| s.to_string()).collect();
        let mut out = Vec::with_capacity(3);
        for (k, c) in coords.into_iter().enumerate() {
            let c = c.with_vars(&vars).map_err(|e| match e {
                crate::poly::PolyError::UnknownVariable(v) => GermError::UnknownVariable(v),
                other => GermError::NotQuasiHomogeneous(other.to_string()),
            })?;
            if !c.constant_term().is_zero() {
                return Err(GermError::NonzeroConstantTerm { coordinate: k + 1 });
            }
            out.push(c);
        }
        let [a, b, c]: [Poly; 3] = out.try_into().unwrap();
        Ok(MapGerm { coords: [a, b, c] })
    }

    pub fn coord(&self, k: usize) -> &Poly {
        &self.coords[k]
    }

    pub fn coords(&self) -> &[Poly; 3] {
        &self.coords
    }

    pub(crate) fn from_coords_unchecked(coords: [Poly; 3]) -> Self {
        MapGerm { coords }
    }

    /// The Jacobian of the germ at the origin, as a 3x2 matrix.
    pub fn linear_part(&self) -> [[Rational; 2]; 3] {
        let mut m: [[Rational; 2]; 3] = Default::default();
        for (k, c) in self.coords.iter().enumerate() {
            m[k][0] = c.coefficient(&[1, 0]);
            m[k][1] = c.coefficient(&[0, 1]);
        }
        m
    }
}

impl fmt::Display for MapGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.coords[0], self.coords[1], self.coords[2])
    }
}

/// Parses `(f1, f2, f3)` with each `fi` a polynomial in `x, y`.
pub fn parse_germ(text: &str) -> Result<MapGerm, GermError> {
    let mut p = Parser::new(text, &SOURCE_VARS);
    p.expect('(', "`(` opening the germ")?;
    let f1 = p.expr()?;
    p.expect(',', "`,` between coordinates")?;
    let f2 = p.expr()?;
    p.expect(',', "`,` between coordinates")?;
    let f3 = p.expr()?;
    p.expect(')', "`)` closing the germ")?;
    if !p.at_end() {
        return Err(ParseError { position: p.position(), kind: ParseErrorKind::TrailingInput }.into());
    }
    MapGerm::new([f1, f2, f3])
}

/// `2 - rank` of the Jacobian at the origin.
pub fn corank(g: &MapGerm) -> u32 {
    let m = g.linear_part();
    let nonzero_row = m.iter().any(|r| !r[0].is_zero() || !r[1].is_zero());
    if !nonzero_row {
        return 2;
    }
    for i in 0..3 {
        for j in (i + 1)..3 {
            let det = &m[i][0] * &m[j][1] - &m[i][1] * &m[j][0];
            if !det.is_zero() {
                return 0;
            }
        }
    }
    1
}

/// Weights `(a, b)` of `x, y` and weighted degrees `(d1, d2, d3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QhType {
    pub a: u64,
    pub b: u64,
    pub d: [u64; 3],
}

impl QhType {
    pub fn new(d1: u64, d2: u64, d3: u64, a: u64, b: u64) -> Self {
        QhType { a, b, d: [d1, d2, d3] }
    }

    pub fn d1(&self) -> u64 {
        self.d[0]
    }
    pub fn d2(&self) -> u64 {
        self.d[1]
    }
    pub fn d3(&self) -> u64 {
        self.d[2]
    }

    pub fn weighted_degree(&self, e: &[u32]) -> u64 {
        self.a * e[0] as u64 + self.b * e[1] as u64
    }

    /// Checks that every monomial of coordinate `k` has weighted degree `d_k`.
    pub fn admits(&self, g: &MapGerm) -> bool {
        self.a.gcd(&self.b) == 1
            && g.coords().iter().zip(self.d).all(|(c, dk)| c.terms().all(|(e, _)| self.weighted_degree(e) == dk))
    }

    /// `true` when `p` in `x, y` is quasi-homogeneous of degree `deg`.
    pub fn poly_has_degree(&self, p: &Poly, deg: u64) -> bool {
        let ix = p.var_index("x");
        let iy = p.var_index("y");
        p.terms().all(|(e, _)| {
            let i = ix.map_or(0, |k| e[k]) as u64;
            let j = iy.map_or(0, |k| e[k]) as u64;
            let others = e.iter().enumerate().all(|(k, &v)| Some(k) == ix || Some(k) == iy || v == 0);
            others && self.a * i + self.b * j == deg
        })
    }

    pub(crate) fn swapped_weights(&self) -> Self {
        QhType { a: self.b, b: self.a, d: self.d }
    }

    pub(crate) fn permuted(&self, perm: [usize; 3]) -> Self {
        QhType { a: self.a, b: self.b, d: [self.d[perm[0]], self.d[perm[1]], self.d[perm[2]]] }
    }
}

impl fmt::Display for QhType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{};{},{})", self.d[0], self.d[1], self.d[2], self.a, self.b)
    }
}

/// How to resolve germs whose monomials leave both weights free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightPolicy {
    /// Pick the admissible pair minimizing `a + b`, then `a`.
    #[default]
    MinimalSum,
    /// Report `AmbiguousWeights`.
    Strict,
}

/// Detects the quasi-homogeneous type with the default tie-break.
pub fn detect_qh_type(g: &MapGerm) -> Result<QhType, GermError> {
    detect_qh_type_with(g, WeightPolicy::MinimalSum)
}

/// Each pair of monomials `x^i y^j`, `x^k y^l` in one coordinate forces
/// `a (i - k) + b (j - l) = 0`. The solution space in `(a, b)` is a point,
/// a ray or the whole plane; only a positive ray (or the plane, via the
/// policy) yields a type.
pub fn detect_qh_type_with(g: &MapGerm, policy: WeightPolicy) -> Result<QhType, GermError> {
    for (k, c) in g.coords().iter().enumerate() {
        if c.is_zero() {
            return Err(GermError::ZeroCoordinate { coordinate: k + 1 });
        }
    }
    let mut direction: Option<(i64, i64)> = None;
    for c in g.coords() {
        let exps: Vec<(i64, i64)> = c.terms().map(|(e, _)| (e[0] as i64, e[1] as i64)).collect();
        let (i0, j0) = exps[0];
        for &(i, j) in &exps[1..] {
            // a*(i - i0) + b*(j - j0) = 0  =>  (a, b) ∝ (j0 - j, i - i0)
            let mut v = (j0 - j, i - i0);
            let gg = v.0.gcd(&v.1);
            v = (v.0 / gg, v.1 / gg);
            if v.0 < 0 || (v.0 == 0 && v.1 < 0) {
                v = (-v.0, -v.1);
            }
            match direction {
                None => direction = Some(v),
                Some(d) if d == v => {}
                Some(_) => {
                    return Err(GermError::NotQuasiHomogeneous(
                        "monomials impose incompatible weight relations".into(),
                    ))
                }
            }
        }
    }
    let (a, b) = match direction {
        Some((a, b)) if a > 0 && b > 0 => (a as u64, b as u64),
        Some(_) => {
            return Err(GermError::NotQuasiHomogeneous("no positive weights satisfy the monomial relations".into()))
        }
        None => match policy {
            WeightPolicy::MinimalSum => (1, 1),
            WeightPolicy::Strict => return Err(GermError::AmbiguousWeights),
        },
    };
    let mut d = [0u64; 3];
    for (k, c) in g.coords().iter().enumerate() {
        let (e, _) = c.terms().next().unwrap();
        d[k] = a * e[0] as u64 + b * e[1] as u64;
    }
    let t = QhType { a, b, d };
    debug_assert!(t.admits(g));
    Ok(t)
}

/// Weighted degree of a rational-coefficient polynomial in `x, y`, if it is
/// quasi-homogeneous for `(a, b)`.
pub fn weighted_degree_of(p: &Poly, a: u64, b: u64) -> Option<u64> {
    let ix = p.var_index("x");
    let iy = p.var_index("y");
    let mut deg = None;
    for (e, _) in p.terms() {
        let d = a * ix.map_or(0, |k| e[k]) as u64 + b * iy.map_or(0, |k| e[k]) as u64;
        match deg {
            None => deg = Some(d),
            Some(d0) if d0 == d => {}
            Some(_) => return None,
        }
    }
    deg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_named_germs() {
        let c7 = parse_germ("(x, y^2, x*y^3 - x^7*y)").unwrap();
        assert_eq!(c7.coord(2).num_terms(), 2);
        let cc = parse_germ(" ( x , y^2 , x*y ) ").unwrap();
        assert_eq!(cc.to_string(), "(x, y^2, x*y)");
        assert_eq!(parse_germ("(x, y, 1 + x)"), Err(GermError::NonzeroConstantTerm { coordinate: 3 }));
        assert!(matches!(parse_germ("(x, y^2)"), Err(GermError::Parse(_))));
        assert!(matches!(parse_germ("(x, y^2, x*y) z"), Err(GermError::Parse(_))));
    }

    #[test]
    fn qh_types_of_examples() {
        let t = detect_qh_type(&parse_germ("(x, y^2, y^5 + x^3*y)").unwrap()).unwrap();
        assert_eq!(t, QhType::new(4, 6, 15, 4, 3));
        let t = detect_qh_type(&parse_germ("(x, y^2, x*y^3 - x^7*y)").unwrap()).unwrap();
        assert_eq!(t, QhType::new(1, 6, 10, 1, 3));
        let t = detect_qh_type(&parse_germ("(x, y^3 + x*y, y^4)").unwrap()).unwrap();
        assert_eq!(t, QhType::new(2, 3, 4, 2, 1));
    }

    #[test]
    fn weight_tie_break_and_failures() {
        let cc = parse_germ("(x, y^2, x*y)").unwrap();
        assert_eq!(detect_qh_type(&cc).unwrap(), QhType::new(1, 2, 2, 1, 1));
        assert_eq!(detect_qh_type_with(&cc, WeightPolicy::Strict), Err(GermError::AmbiguousWeights));
        let bad = parse_germ("(x, y + x*y^2, x*y)").unwrap();
        assert!(matches!(detect_qh_type(&bad), Err(GermError::NotQuasiHomogeneous(_))));
        let bad = parse_germ("(x + x^2, y^2, y^3)").unwrap();
        assert!(matches!(detect_qh_type(&bad), Err(GermError::NotQuasiHomogeneous(_))));
        let inconsistent = parse_germ("(x, y^2 + x^2*y, y^3 + x*y)").unwrap();
        assert!(matches!(detect_qh_type(&inconsistent), Err(GermError::NotQuasiHomogeneous(_))));
    }

    #[test]
    fn corank_examples() {
        assert_eq!(corank(&parse_germ("(x, y^2, x*y)").unwrap()), 1);
        assert_eq!(corank(&parse_germ("(x, y, 0)").unwrap()), 0);
        assert_eq!(corank(&parse_germ("(x^2, y^2, x*y)").unwrap()), 2);
        assert_eq!(corank(&parse_germ("(x + y, 2*x + 2*y + y^2, x^2)").unwrap()), 1);
    }
}
