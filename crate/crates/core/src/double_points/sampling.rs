//! Real point samples of the branches of `D(f)` and of their images.

use num_traits::ToPrimitive;

use super::{BranchKind, DoublePointCurve, DoublePointError};
use crate::normal_form::NormalForm;
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq)]
pub struct SourceSample {
    pub branch: usize,
    pub u: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImageSample {
    pub branch: usize,
    pub u: f64,
    pub point: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointSamples {
    pub source: Vec<SourceSample>,
    pub image: Vec<ImageSample>,
    /// Branches with no real points.
    pub non_real: Vec<usize>,
}

fn eval(p: &Poly, x: f64, y: f64) -> f64 {
    p.terms()
        .map(|(e, c)| c.to_f64().unwrap_or(f64::NAN) * x.powi(e[0] as i32) * y.powi(e[1] as i32))
        .sum()
}

/// A real `g` with `g^a = beta`, if one exists.
fn real_root(beta: f64, a: u64) -> Option<f64> {
    if a % 2 == 1 {
        Some(beta.signum() * beta.abs().powf(1.0 / a as f64))
    } else if beta >= 0.0 {
        Some(beta.powf(1.0 / a as f64))
    } else {
        None
    }
}

/// Real parametrization `u -> (eps u^a, g u^b)` of `y^a = alpha x^b`.
fn real_branch(alpha: f64, a: u64, b: u64) -> Option<(f64, f64)> {
    [1.0f64, -1.0].into_iter().find_map(|eps| real_root(alpha * eps.powi(b as i32), a).map(|g| (eps, g)))
}

/// `count` equispaced parameters in `[-window, window]`; a single sample sits
/// at `u = window`.
fn parameters(count: usize, window: f64) -> Vec<f64> {
    if count == 1 {
        return vec![window];
    }
    (0..count).map(|k| -window + 2.0 * window * k as f64 / (count - 1) as f64).collect()
}

/// Samples every branch in normal-form coordinates.
pub fn sample_real_points(
    dpc: &DoublePointCurve,
    nf: &NormalForm,
    count: usize,
    window: f64,
) -> Result<PointSamples, DoublePointError> {
    if count == 0 {
        return Err(DoublePointError::InvalidRange("sample count must be at least 1".into()));
    }
    if !window.is_finite() || window < 0.0 {
        return Err(DoublePointError::InvalidRange(format!("window {window} must be finite and non-negative")));
    }
    let us = parameters(count, window);
    let (a, b) = (nf.qh.a, nf.qh.b);
    let mut out = PointSamples::default();
    for br in &dpc.branches {
        let param: Box<dyn Fn(f64) -> (f64, f64)> = match &br.kind {
            BranchKind::XAxis => Box::new(|u| (0.0, u)),
            BranchKind::Binomial { alpha, .. } => {
                let found = alpha.is_real().then(|| real_branch(alpha.approx().re, a, b)).flatten();
                match found {
                    Some((eps, g)) => Box::new(move |u: f64| (eps * u.powi(a as i32), g * u.powi(b as i32))),
                    None => {
                        out.non_real.push(br.id);
                        continue;
                    }
                }
            }
        };
        for &u in &us {
            // adding 0.0 turns -0.0 into 0.0
            let (x, y) = param(u);
            let (x, y) = (x + 0.0, y + 0.0);
            out.source.push(SourceSample { branch: br.id, u, x, y });
            let point = [0, 1, 2].map(|k| eval(nf.germ.coord(k), x, y) + 0.0);
            out.image.push(ImageSample { branch: br.id, u, point });
        }
    }
    Ok(out)
}
