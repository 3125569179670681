//! The double point curve `D(f) = V(lambda)` of a normal form, its
//! determinacy test, and its decomposition into branches.

mod classify;
mod d5;
pub mod roots;
mod sampling;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::germ::QhType;
use crate::normal_form::NormalForm;
use crate::poly::{is_squarefree, resultant, Poly, PolyError, Rational, UPoly};

pub use classify::{branch_images, classify_branches, TARGET_VARS};
pub use roots::{Root, RootError};
pub use sampling::{sample_real_points, ImageSample, PointSamples, SourceSample};

/// Variables of the lifted double point space, with `x' = x` identified.
pub const LIFT_VARS: [&str; 3] = ["x", "y", "y'"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DoublePointError {
    #[error("resultant vanishes identically (map is not generically one-to-one)")]
    ZeroResultant,
    #[error("lambda not squarefree")]
    NotSquarefree,
    #[error("lambda {lambda} is not quasi-homogeneous of degree {expected} for weights ({a},{b})")]
    LambdaType { lambda: String, expected: i64, a: u64, b: u64 },
    #[error("double point structure violated: {0}")]
    StructureViolation(String),
    #[error("identification component without a partner: {0}")]
    UnpairedIdentificationComponent(String),
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error(transparent)]
    Roots(#[from] RootError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `P = (p~(x,y) - p~(x,y'))/(y - y')` and the same for `q~`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DividedDifferencePair {
    pub p: Poly,
    pub q: Poly,
}

fn lift(f: &Poly) -> Poly {
    let names: Vec<String> = LIFT_VARS.iter().map(|s| s.to_string()).collect();
    f.with_vars(&names).expect("germ coordinates use x, y")
}

/// Exact divided difference of `f(x, y)` in `y`.
pub fn divided_difference(f: &Poly) -> Result<Poly, PolyError> {
    let f = lift(f);
    let fp = lift(&f.rename("y", "y'").with_vars(&["x".to_string(), "y'".to_string()])?);
    let den = &Poly::var("y", &LIFT_VARS) - &Poly::var("y'", &LIFT_VARS);
    (&f - &fp).exact_div(&den)
}

pub fn divided_differences(nf: &NormalForm) -> Result<DividedDifferencePair, DoublePointError> {
    Ok(DividedDifferencePair { p: divided_difference(nf.p_tilde())?, q: divided_difference(nf.q_tilde())? })
}

/// `lambda = Res_{y'}(P, Q)` in canonical form over `x, y`.
pub fn compute_lambda(dd: &DividedDifferencePair) -> Result<Poly, DoublePointError> {
    let r = match resultant(&dd.p, &dd.q, "y'") {
        Ok(r) => r,
        Err(PolyError::BothZero) => return Err(DoublePointError::ZeroResultant),
        Err(e) => return Err(e.into()),
    };
    if r.is_zero() {
        return Err(DoublePointError::ZeroResultant);
    }
    Ok(r.with_vars(&["x".to_string(), "y".to_string()])?.canonical())
}

/// Finite determinacy is equivalent to `lambda` being reduced.
pub fn check_finitely_determined(lambda: &Poly) -> bool {
    is_squarefree(lambda)
}

/// Expected weighted degree `d2 d3 / b - d2 - d3 + b` of `lambda`.
pub fn lambda_degree(qh: &QhType) -> Rational {
    let (d2, d3, b) = (qh.d2() as i64, qh.d3() as i64, qh.b as i64);
    Rational::new(BigInt::from(d2 * d3), BigInt::from(b)) - Rational::from_integer(BigInt::from(d2 + d3 - b))
}

/// Checks the quasi-homogeneous type of `lambda`.
pub fn check_lambda_type(lambda: &Poly, qh: &QhType) -> Result<u64, DoublePointError> {
    let expected = lambda_degree(qh);
    let err = || DoublePointError::LambdaType {
        lambda: lambda.to_string(),
        expected: expected.to_integer().try_into().unwrap_or(i64::MAX),
        a: qh.a,
        b: qh.b,
    };
    if !expected.is_integer() || expected < Rational::zero() {
        return Err(err());
    }
    let deg: u64 = expected.to_integer().try_into().map_err(|_| err())?;
    let ok = lambda.terms().all(|(e, _)| qh.a * e[0] as u64 + qh.b * e[1] as u64 == deg);
    if ok {
        Ok(deg)
    } else {
        Err(err())
    }
}

/// `lambda = x^s * Lambda(y^a / x^b) * x^(b r)`, before labeling.
#[derive(Debug, Clone, PartialEq)]
pub struct Factored {
    pub lambda: Poly,
    pub s: u32,
    /// Roots are the `alpha_i` of the binomial branches `y^a - alpha_i x^b`.
    pub big_lambda: UPoly,
    pub r: u32,
    pub a: u64,
    pub b: u64,
}

/// `((d2 - b)(d3 - b) - s a b) / (a b^2)`, if integral.
pub fn expected_r(qh: &QhType, s: u32) -> Option<i64> {
    let (a, b, d2, d3) = (qh.a as i64, qh.b as i64, qh.d2() as i64, qh.d3() as i64);
    let num = (d2 - b) * (d3 - b) - s as i64 * a * b;
    let den = a * b * b;
    (num % den == 0).then_some(num / den)
}

/// Splits off the `x` factor and reads the binomial factors as a
/// univariate polynomial in `t = y^a / x^b`.
pub fn factor_branches(lambda: &Poly, qh: &QhType) -> Result<Factored, DoublePointError> {
    let (a, b) = (qh.a, qh.b);
    let violation = |m: String| DoublePointError::StructureViolation(m);
    let s = lambda.terms().map(|(e, _)| e[0]).min().unwrap_or(0);
    if s > 1 {
        return Err(violation(format!("x^{s} divides lambda")));
    }
    let mut coeffs: Vec<(u64, Rational)> = Vec::new();
    let mut total = None;
    for (e, c) in lambda.terms() {
        let (i, j) = ((e[0] - s) as u64, e[1] as u64);
        if j % a != 0 || i % b != 0 {
            return Err(violation(format!(
                "monomial x^{}*y^{} of lambda is not in x^{b}, y^{a}",
                e[0], e[1]
            )));
        }
        let (k, rest) = (j / a, i / b);
        match total {
            None => total = Some(k + rest),
            Some(t) if t == k + rest => {}
            Some(_) => return Err(violation("lambda is not homogeneous in (x^b, y^a)".into())),
        }
        coeffs.push((k, c.clone()));
    }
    let r = total.unwrap_or(0);
    let mut dense = vec![Rational::zero(); r as usize + 1];
    for (k, c) in coeffs {
        dense[k as usize] = c;
    }
    let big_lambda = UPoly::new(dense).primitive();
    if big_lambda.deg() as u64 != r {
        return Err(violation("leading binomial coefficient vanishes".into()));
    }
    if a > 1 && big_lambda.coeff(0).is_zero() {
        return Err(violation(format!("y divides lambda with a = {a}")));
    }
    if r > 0 && !big_lambda.is_squarefree() {
        return Err(violation("repeated binomial factor".into()));
    }
    match expected_r(qh, s) {
        Some(er) if er == r as i64 => {}
        other => {
            return Err(violation(format!("binomial count {r} differs from the weight formula value {other:?}")));
        }
    }
    Ok(Factored { lambda: lambda.clone(), s, big_lambda, r: r as u32, a, b })
}

/// `s` predicted from the normal form: 0 iff `alpha != 0` and `gcd(n, m) = 1`.
pub fn s_rule(nf: &NormalForm) -> u32 {
    match nf.m {
        Some(m) if !nf.alpha.is_zero() && nf.n.gcd(&m) == 1 => 0,
        _ => 1,
    }
}

/// How `f` restricts to a branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Label {
    /// Generically one-to-one; shares its image with `partner`.
    Identification { partner: usize },
    /// Generically two-to-one.
    Fold,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BranchKind {
    /// The component `V(x)`.
    XAxis,
    /// `V(y^a - alpha x^b)` with `alpha` a root of `Lambda`.
    Binomial { alpha: Root, class: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub id: usize,
    pub kind: BranchKind,
    pub label: Label,
}

/// Roots of `Lambda` sharing which image coefficients vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct RootClass {
    pub poly: UPoly,
    /// Vanishing of the `y^{d2}` and `y^{d3}` image coefficients.
    pub gamma_zero: [bool; 2],
    /// Gcd of the exponents with nonzero coefficient in the branch image.
    pub exponent_gcd: u64,
}

impl RootClass {
    pub fn is_fold(&self) -> bool {
        self.exponent_gcd == 2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoublePointCurve {
    pub factored: Factored,
    pub classes: Vec<RootClass>,
    /// Modulus of the identification roots and the involution pairing them.
    pub pairing: Option<(UPoly, UPoly)>,
    pub branches: Vec<Branch>,
    pub r_i: u32,
    pub r_f: u32,
}

impl DoublePointCurve {
    pub fn lambda(&self) -> &Poly {
        &self.factored.lambda
    }
    pub fn s(&self) -> u32 {
        self.factored.s
    }
    pub fn r(&self) -> u32 {
        self.factored.r
    }

    /// Expands `x^s prod (y^a - alpha_i x^b)` from the exact factor data.
    pub fn re_expand(&self) -> Poly {
        let vars = ["x", "y"];
        let x = Poly::var("x", &vars);
        let y = Poly::var("y", &vars);
        let (a, b) = (self.factored.a as u32, self.factored.b as u32);
        let mut acc = x.pow(self.s());
        let mut homog = Poly::zero(&vars);
        let big = &self.factored.big_lambda;
        let r = self.r();
        for (k, c) in big.coeffs().iter().enumerate() {
            let term = y.pow(a * k as u32) * x.pow(b * (r - k as u32));
            homog = &homog + &term.scale(c);
        }
        if r > 0 {
            acc = &acc * &homog;
        }
        acc
    }
}

/// Image of one branch, or of an identification pair.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchImage {
    pub branches: Vec<usize>,
    /// Exponents of `u` in `(X, Y, Z)` along the branch parametrization.
    pub exponents: [u64; 3],
    /// Which of the three components are nonzero.
    pub nonzero: [bool; 3],
    /// Multiplicity assigned by branch type: `c`, `c / 2` or `n / 2`.
    pub multiplicity: u64,
    /// Defining equations over the rationals, when the branch data is rational.
    pub implicit: Option<Vec<Poly>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::{detect_qh_type, parse_germ};
    use crate::normal_form::to_normal_form;
    use crate::poly::parse_poly;

    fn nf(s: &str) -> NormalForm {
        let g = parse_germ(s).unwrap();
        to_normal_form(&g, detect_qh_type(&g).unwrap()).unwrap()
    }

    fn lp(s: &str) -> Poly {
        parse_poly(s, &LIFT_VARS).unwrap()
    }

    #[test]
    fn divided_difference_examples() {
        let dd = divided_differences(&nf("(x, y^2, x*y^3 - x^7*y)")).unwrap();
        assert_eq!(dd.p, lp("y + y'"));
        assert_eq!(dd.q, lp("x*(y^2 + y*y' + y'^2) - x^7"));
        let dd = divided_differences(&nf("(x, y^2, x*y)")).unwrap();
        assert_eq!((dd.p, dd.q), (lp("y + y'"), lp("x")));
        let dd = divided_differences(&nf("(x, y^3 + x*y, y^4)")).unwrap();
        assert_eq!(dd.p, lp("y^2 + y*y' + y'^2 + x"));
        assert_eq!(dd.q, lp("y^3 + y^2*y' + y*y'^2 + y'^3"));
    }

    #[test]
    fn lambda_examples() {
        let xy = ["x", "y"];
        let l = compute_lambda(&divided_differences(&nf("(x, y^2, x*y^3 - x^7*y)")).unwrap()).unwrap();
        assert!(l.equals_up_to_unit(&parse_poly("x*y^2 - x^7", &xy).unwrap()));
        assert!(check_finitely_determined(&l));
        let l = compute_lambda(&divided_differences(&nf("(x, y^2, x*y)")).unwrap()).unwrap();
        assert_eq!(l, parse_poly("x", &xy).unwrap());
        let l = compute_lambda(&divided_differences(&nf("(x, y^2, x^2*y - x*y^5)")).unwrap()).unwrap();
        assert!(l.equals_up_to_unit(&parse_poly("x*(x - y^4)", &xy).unwrap()));
        assert!(!check_finitely_determined(&parse_poly("x^2*y", &xy).unwrap()));
    }

    #[test]
    fn factor_examples() {
        let xy = ["x", "y"];
        let f = factor_branches(&parse_poly("x*y^2 - x^7", &xy).unwrap(), &QhType::new(1, 6, 10, 1, 3)).unwrap();
        assert_eq!((f.s, f.r), (1, 2));
        assert_eq!(f.big_lambda, UPoly::from_ints(&[-1, 0, 1]));
        let f = factor_branches(&parse_poly("x", &xy).unwrap(), &QhType::new(1, 2, 2, 1, 1)).unwrap();
        assert_eq!((f.s, f.r), (1, 0));
        let f = factor_branches(&parse_poly("x*(x - y^4)", &xy).unwrap(), &QhType::new(4, 2, 9, 4, 1)).unwrap();
        assert_eq!((f.s, f.r), (1, 1));
        assert_eq!(f.big_lambda.rational_roots(), vec![Rational::from_integer(1.into())]);
    }

    #[test]
    fn structure_violations() {
        let xy = ["x", "y"];
        let t = QhType::new(4, 2, 9, 4, 1);
        let bad = parse_poly("x*y*(x - y^4)", &xy).unwrap();
        assert!(matches!(factor_branches(&bad, &t), Err(DoublePointError::StructureViolation(_))));
        let bad = parse_poly("x^2 - x*y^4", &xy).unwrap();
        assert!(factor_branches(&bad, &QhType::new(4, 2, 13, 4, 1)).is_err());
    }
}
