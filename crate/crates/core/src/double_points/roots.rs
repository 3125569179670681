//! Complex root approximation for squarefree rational polynomials.
//!
//! Roots start from an Aberth iteration in `f64` and are then polished by
//! Newton steps in binary fixed point, so the reported values are accurate
//! well beyond double precision. Rational roots are found exactly first.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::{Rational, UPoly};

/// Fractional bits of the fixed-point representation.
const PREC: u32 = 224;
/// Newton stops once the step falls below `2^-STOP_BITS`.
const STOP_BITS: i64 = 110;

/// A complex number `(re + i im) / 2^PREC`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixed {
    re: BigInt,
    im: BigInt,
}

impl Fixed {
    fn zero() -> Self {
        Fixed { re: BigInt::zero(), im: BigInt::zero() }
    }

    fn from_rational(q: &Rational) -> Self {
        Fixed { re: (q.numer() << PREC) / q.denom(), im: BigInt::zero() }
    }

    fn from_f64(z: Complex64) -> Self {
        let conv = |v: f64| -> BigInt {
            let r = Rational::from_float(v).unwrap_or_else(Rational::zero);
            (r.numer() << PREC) / r.denom()
        };
        Fixed { re: conv(z.re), im: conv(z.im) }
    }

    fn add(&self, o: &Self) -> Self {
        Fixed { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn sub(&self, o: &Self) -> Self {
        Fixed { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn mul(&self, o: &Self) -> Self {
        let re = (&self.re * &o.re - &self.im * &o.im) >> PREC;
        let im = (&self.re * &o.im + &self.im * &o.re) >> PREC;
        Fixed { re, im }
    }

    fn div(&self, o: &Self) -> Option<Self> {
        let den = &o.re * &o.re + &o.im * &o.im;
        if den.is_zero() {
            return None;
        }
        let nr = &self.re * &o.re + &self.im * &o.im;
        let ni = &self.im * &o.re - &self.re * &o.im;
        Some(Fixed { re: (nr << PREC) / &den, im: (ni << PREC) / &den })
    }

    /// `log2 |z|`, roughly; `None` for zero.
    fn log2_abs(&self) -> Option<i64> {
        let m = self.re.abs().max(self.im.abs());
        if m.is_zero() {
            None
        } else {
            Some(m.bits() as i64 - PREC as i64)
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let scale = 2f64.powi(-(PREC as i32));
        let part = |v: &BigInt| {
            let shift = (v.bits() as i64 - 60).max(0) as u32;
            (v >> shift).to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32) * scale
        };
        Complex64::new(part(&self.re), part(&self.im))
    }

    fn decimal_part(v: &BigInt, digits: usize) -> String {
        let r = Rational::new(v.clone(), BigInt::one() << PREC);
        let neg = r.is_negative();
        let r = r.abs();
        let scale = num_traits::pow(BigInt::from(10), digits);
        let n = (r * Rational::from_integer(scale.clone())).round().to_integer();
        let int = &n / &scale;
        let frac = (&n % &scale).to_string();
        format!("{}{}.{}{}", if neg { "-" } else { "" }, int, "0".repeat(digits - frac.len()), frac)
    }

    /// Decimal rendering `re+imi` with `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let re = Self::decimal_part(&self.re, digits);
        let im = Self::decimal_part(&self.im, digits);
        if im.starts_with('-') {
            format!("{re}{im}i")
        } else {
            format!("{re}+{im}i")
        }
    }

    fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// A rational with denominator below `2^den_bits` within `2^-tol_bits`
    /// of this value, provided the imaginary part is that small too.
    pub(crate) fn rational_near(&self, den_bits: u64, tol_bits: u32) -> Option<Rational> {
        let tol = Rational::new(BigInt::one(), BigInt::one() << tol_bits);
        if Rational::new(self.im.abs(), BigInt::one() << PREC) >= tol {
            return None;
        }
        let x = Rational::new(self.re.clone(), BigInt::one() << PREC);
        // continued fraction convergents h/k
        let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
        let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
        let mut rest = x.clone();
        loop {
            let a = rest.floor().to_integer();
            let h = &a * &h1 + &h0;
            let k = &a * &k1 + &k0;
            if k.bits() > den_bits {
                return None;
            }
            let cand = Rational::new(h.clone(), k.clone());
            if (&cand - &x).abs() < tol {
                return Some(cand);
            }
            let frac = &rest - Rational::from_integer(a);
            if frac.is_zero() {
                return None;
            }
            rest = frac.recip();
            (h0, h1, k0, k1) = (h1, h, k1, k);
        }
    }
}

/// Coefficients, lowest first, of the polynomial of degree below `xs.len()`
/// taking the values `ys` at the nodes `xs`; `None` if two nodes coincide.
pub(crate) fn interpolate(xs: &[Fixed], ys: &[Fixed]) -> Option<Vec<Fixed>> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = dd[i].sub(&dd[i - 1]).div(&xs[i].sub(&xs[i - level]))?;
        }
    }
    // Horner expansion of the Newton form
    let mut coeffs = vec![Fixed::zero(); n];
    for k in (0..n).rev() {
        let mut next = vec![Fixed::zero(); n];
        for j in 0..n - 1 {
            next[j + 1] = coeffs[j].clone();
        }
        for j in 0..n {
            next[j] = next[j].sub(&coeffs[j].mul(&xs[k]));
        }
        next[0] = next[0].add(&dd[k]);
        coeffs = next;
    }
    Some(coeffs)
}

/// `log2 |u - v|`, or `None` when the approximations coincide.
pub(crate) fn log2_gap(u: &Root, v: &Root) -> Option<i64> {
    u.value.sub(&v.value).log2_abs()
}

/// One root of an exact polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    /// Set when the root is rational.
    pub exact: Option<Rational>,
    pub value: Fixed,
}

impl Root {
    fn rational(q: Rational) -> Self {
        Root { value: Fixed::from_rational(&q), exact: Some(q) }
    }

    pub fn approx(&self) -> Complex64 {
        self.value.to_complex()
    }

    /// True for rational roots and for numerically real irrational ones.
    pub fn is_real(&self) -> bool {
        self.exact.is_some() || self.value.is_real() || {
            let z = self.approx();
            z.im.abs() <= 1e-25 * (1.0 + z.re.abs())
        }
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        match &self.exact {
            Some(q) => q.to_string(),
            None => self.value.to_decimal(digits),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("root isolation did not converge for {0}")]
    NoConvergence(String),
    #[error("numeric roots of {0} are not separated")]
    NotSeparated(String),
}

/// All roots of a squarefree polynomial of positive degree, rational ones
/// exact.
pub fn roots(f: &UPoly) -> Result<Vec<Root>, RootError> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    for q in f.rational_roots() {
        out.push(Root::rational(q.clone()));
        rest = rest.div_rem(&UPoly::new(vec![-q, Rational::one()])).0;
    }
    if rest.deg() == 0 {
        return Ok(out);
    }
    let approx = aberth(&rest);
    let mut polished = Vec::with_capacity(approx.len());
    for z in approx {
        polished.push(newton(&rest, Fixed::from_f64(z)).ok_or_else(|| RootError::NoConvergence(rest.to_string()))?);
    }
    for i in 0..polished.len() {
        for j in 0..i {
            let d = polished[i].sub(&polished[j]);
            if d.log2_abs().is_none_or(|l| l < -STOP_BITS + 20) {
                return Err(RootError::NotSeparated(rest.to_string()));
            }
        }
    }
    // Real polynomials have conjugate-symmetric roots; snap tiny imaginary
    // parts so real roots report as real.
    for z in polished {
        let mut z = z;
        if z.im.abs().bits() as i64 <= PREC as i64 - STOP_BITS {
            z.im = BigInt::zero();
        }
        out.push(Root { exact: None, value: z });
    }
    Ok(out)
}

fn eval_f64(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Simultaneous Aberth-Ehrlich iteration on the monic `f64` image of `f`.
fn aberth(f: &UPoly) -> Vec<Complex64> {
    let m = f.monic();
    let c: Vec<Complex64> = m.coeffs().iter().map(|q| Complex64::new(q.to_f64().unwrap_or(0.0), 0.0)).collect();
    let n = m.deg();
    let bound = 1.0 + c[..n].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let radius = bound.min(1e6).max(1e-3) * 0.5;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    for _ in 0..800 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval_f64(&c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n).filter(|&j| j != i).map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if w.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

/// Newton refinement in fixed point.
fn newton(f: &UPoly, start: Fixed) -> Option<Fixed> {
    let coeffs: Vec<Fixed> = f.coeffs().iter().map(Fixed::from_rational).collect();
    let mut z = start;
    for _ in 0..200 {
        let mut p = Fixed::zero();
        let mut dp = Fixed::zero();
        for a in coeffs.iter().rev() {
            dp = dp.mul(&z).add(&p);
            p = p.mul(&z).add(a);
        }
        let step = p.div(&dp)?;
        z = z.sub(&step);
        match step.log2_abs() {
            None => return Some(z),
            Some(l) if l < -STOP_BITS => return Some(z),
            _ => {}
        }
    }
    None
}

/// Evaluates `f` at a root, exactly when the root is rational.
pub fn eval_at(f: &UPoly, r: &Root) -> Root {
    match &r.exact {
        Some(q) => Root::rational(f.eval(q)),
        None => {
            let mut acc = Fixed::zero();
            for c in f.coeffs().iter().rev() {
                acc = acc.mul(&r.value).add(&Fixed::from_rational(c));
            }
            Root { exact: None, value: acc }
        }
    }
}

/// `|u - v|` as `f64`.
pub fn distance(u: &Root, v: &Root) -> f64 {
    if let (Some(a), Some(b)) = (&u.exact, &v.exact) {
        return (a - b).abs().to_f64().unwrap_or(f64::INFINITY);
    }
    let d = u.value.sub(&v.value);
    match d.log2_abs() {
        None => 0.0,
        Some(l) if l < -900 => 0.0,
        Some(_) => d.to_complex().norm(),
    }
}
