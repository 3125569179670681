//! Independent checks: local intersection multiplicities at the origin of
//! the plane, computed by resultants after a random shear.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::double_points::BranchImage;
use crate::germ::SOURCE_VARS;
use crate::normal_form::NormalForm;
use crate::poly::{gcd, resultant, Poly, PolyError, Rational};

/// Shear seed used when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 1729;

/// Shears tried before giving up.
const MAX_SHEARS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("the curves share a component through the origin")]
    NonIsolated,
    #[error("no two random shears agreed after {0} attempts")]
    DegenerateShear(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn over_xy(p: &Poly) -> Result<Poly, OracleError> {
    let vars: Vec<String> = SOURCE_VARS.iter().map(|s| s.to_string()).collect();
    Ok(p.with_vars(&vars)?)
}

fn vanishes_at_origin(p: &Poly) -> bool {
    p.constant_term().is_zero()
}

/// `p(x + t y, y)`.
fn shear(p: &Poly, t: &Rational) -> Result<Poly, OracleError> {
    let x = Poly::var("x", &SOURCE_VARS);
    let y = Poly::var("y", &SOURCE_VARS);
    let mut b = HashMap::new();
    b.insert("x", &x + &y.scale(t));
    b.insert("y", y);
    Ok(p.substitute(&b)?)
}

/// Whether the coefficient of the top power of `y` is a nonzero constant.
fn y_monic_up_to_unit(p: &Poly) -> bool {
    match p.total_degree() {
        Some(d) => !p.coefficient(&[0, d]).is_zero(),
        None => true,
    }
}

/// Order in `x` of `Res_y(p(x + t y, y), q(x + t y, y))`, or `None` when
/// the shear leaves a non-constant leading coefficient in `y`. `p` and `q`
/// must be coprime.
pub fn sheared_order(p: &Poly, q: &Poly, t: &Rational) -> Result<Option<u64>, OracleError> {
    let (p, q) = (shear(&over_xy(p)?, t)?, shear(&over_xy(q)?, t)?);
    if !y_monic_up_to_unit(&p) || !y_monic_up_to_unit(&q) {
        return Ok(None);
    }
    let r = resultant(&p, &q, "y")?;
    if r.is_zero() {
        return Err(OracleError::NonIsolated);
    }
    let order = r.terms().map(|(e, _)| e.iter().sum::<u32>() as u64).min().unwrap_or(0);
    Ok(Some(order))
}

/// Random shear parameters `p/q` with `p` in `[-7, 7] \ {0}` and `q` in `[1, 5]`.
pub struct Shears(ChaCha8Rng);

impl Shears {
    pub fn new(seed: u64) -> Self {
        Shears(ChaCha8Rng::seed_from_u64(seed))
    }
}

impl Iterator for Shears {
    type Item = Rational;

    fn next(&mut self) -> Option<Rational> {
        let mut p = self.0.gen_range(-7i64..=6);
        if p >= 0 {
            p += 1;
        }
        let q = self.0.gen_range(1i64..=5);
        Some(Rational::new(BigInt::from(p), BigInt::from(q)))
    }
}

/// Local intersection multiplicity of `p = 0` and `q = 0` at the origin of
/// the `(x, y)` plane.
///
/// The resultant order counts every intersection on the sheared line
/// through the origin, so a bad shear can only overcount. The answer is
/// the smallest order once two shears have reached it.
pub fn intersection_multiplicity(p: &Poly, q: &Poly, seed: u64) -> Result<u64, OracleError> {
    let (mut p, mut q) = (over_xy(p)?, over_xy(q)?);
    if !vanishes_at_origin(&p) || !vanishes_at_origin(&q) {
        return Ok(0);
    }
    if p.is_zero() || q.is_zero() {
        return Err(OracleError::NonIsolated);
    }
    let g = gcd(&p, &q);
    if !g.is_constant() {
        if vanishes_at_origin(&g) {
            return Err(OracleError::NonIsolated);
        }
        p = p.exact_div(&g)?;
        q = q.exact_div(&g)?;
    }
    let mut best: Option<(u64, usize)> = None;
    let mut attempts = 0;
    for t in Shears::new(seed) {
        if attempts == MAX_SHEARS {
            break;
        }
        attempts += 1;
        let Some(v) = sheared_order(&p, &q, &t)? else { continue };
        best = match best {
            Some((b, k)) if b == v => Some((b, k + 1)),
            Some((b, k)) if b < v => Some((b, k)),
            _ => Some((v, 1)),
        };
        if let Some((b, 2)) = best {
            return Ok(b);
        }
    }
    Err(OracleError::DegenerateShear(attempts))
}

/// Cross-cap count as `dim O / (d_y p~, d_y q~)`.
pub fn oracle_c(nf: &NormalForm, seed: u64) -> Result<u64, OracleError> {
    let py = nf.p_tilde().derivative("y")?;
    let qy = nf.q_tilde().derivative("y")?;
    intersection_multiplicity(&py, &qy, seed)
}

/// Milnor number of `lambda` as `dim O / (d_x lambda, d_y lambda)`.
pub fn oracle_mu(lambda: &Poly, seed: u64) -> Result<u64, OracleError> {
    let lambda = over_xy(lambda)?;
    intersection_multiplicity(&lambda.derivative("x")?, &lambda.derivative("y")?, seed)
}

/// Multiplicity of one image curve from its monomial parametrization: the
/// smallest exponent among the nonzero components, divided by the degree
/// of the parametrization.
pub fn image_branch_multiplicity(img: &BranchImage) -> u64 {
    let live: Vec<u64> = (0..3).filter(|&k| img.nonzero[k]).map(|k| img.exponents[k]).collect();
    let g = live.iter().fold(0u64, |acc, e| acc.gcd(e));
    match live.iter().min() {
        Some(&m) if g > 0 => m / g,
        _ => 0,
    }
}

/// `m(f(D))` summed over image curves.
pub fn oracle_multiplicity_image(images: &[BranchImage]) -> u64 {
    images.iter().map(image_branch_multiplicity).sum()
}
