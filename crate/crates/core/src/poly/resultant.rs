//! Resultants by the subresultant polynomial remainder sequence.

use num_traits::One;

use super::{Poly, PolyError, Rational};

/// Polynomial in one distinguished variable with coefficients in the
/// remaining ones. `coeffs[i]` multiplies `var^i`; no trailing zeros.
#[derive(Clone, Debug)]
pub(crate) struct Dense {
    pub coeffs: Vec<Poly>,
}

impl Dense {
    pub fn new(mut coeffs: Vec<Poly>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Dense { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; callers check `is_zero` first.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> &Poly {
        self.coeffs.last().unwrap()
    }

    fn scale(&self, c: &Poly) -> Dense {
        Dense::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn exact_div_scalar(&self, c: &Poly) -> Result<Dense, PolyError> {
        Ok(Dense::new(self.coeffs.iter().map(|x| x.exact_div(c)).collect::<Result<_, _>>()?))
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a = q*b + r`.
    pub fn prem(&self, b: &Dense) -> Dense {
        let db = b.deg();
        if self.is_zero() || self.deg() < db {
            return self.clone();
        }
        let mut e = self.deg() + 1 - db;
        let lb = b.lc().clone();
        let mut r = self.clone();
        while !r.is_zero() && r.deg() >= db {
            let shift = r.deg() - db;
            let lr = r.lc().clone();
            let mut next: Vec<Poly> = r.coeffs.iter().map(|c| c * &lb).collect();
            for (i, bc) in b.coeffs.iter().enumerate() {
                next[i + shift] = &next[i + shift] - &(bc * &lr);
            }
            r = Dense::new(next);
            e -= 1;
        }
        if e > 0 {
            r = r.scale(&lb.pow(e as u32));
        }
        r
    }
}

/// Splits `p` and `q` (already aligned) into dense form in `var`.
pub(crate) fn split(p: &Poly, idx: usize) -> Dense {
    Dense::new(p.to_univariate(idx))
}

/// Resultant of `p` and `q` with respect to `var`.
///
/// `Res(c, q) = c^deg(q)` for `c` free of `var`, and the resultant of two
/// polynomials that are both constant in `var` is 1. Resultants involving
/// exactly one zero polynomial are 0.
pub fn resultant(p: &Poly, q: &Poly, var: &str) -> Result<Poly, PolyError> {
    if p.is_zero() && q.is_zero() {
        return Err(PolyError::BothZero);
    }
    if p.var_index(var).is_none() && q.var_index(var).is_none() {
        return Err(PolyError::UnknownVariable(var.to_string()));
    }
    let (mut p, mut q) = Poly::align(p, q);
    if p.var_index(var).is_none() {
        let mut u = p.vars().to_vec();
        u.push(var.to_string());
        p = p.with_vars(&u)?;
        q = q.with_vars(&u)?;
    }
    let vars = p.vars().to_vec();
    let idx = p.var_index(var).unwrap();
    let zero = Poly::zero_in(vars.clone());
    if p.is_zero() || q.is_zero() {
        return Ok(zero);
    }
    let res = subresultant(split(&p, idx), split(&q, idx), &vars);
    Ok(res)
}

/// Subresultant PRS resultant over the coefficient ring of `a`, `b`
/// (both nonzero).
pub(crate) fn subresultant(a: Dense, b: Dense, vars: &[String]) -> Poly {
    let one = Poly::constant_in(Rational::one(), vars.to_vec());
    let (mut a, mut b) = (a, b);
    let mut sign_neg = false;
    if a.deg() < b.deg() {
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            sign_neg = true;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if b.deg() == 0 {
        let r = b.lc().pow(a.deg() as u32);
        return if sign_neg { -r } else { r };
    }
    let mut g = one.clone();
    let mut h = one.clone();
    loop {
        let delta = a.deg() - b.deg();
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            sign_neg = !sign_neg;
        }
        let r = a.prem(&b);
        a = b;
        if r.is_zero() {
            return Poly::zero_in(vars.to_vec());
        }
        let denom = &g * &h.pow(delta as u32);
        b = r.exact_div_scalar(&denom).expect("subresultant division is exact");
        g = a.lc().clone();
        // h <- g^delta / h^(delta-1)
        h = if delta == 0 {
            &h * &one
        } else {
            g.pow(delta as u32).exact_div(&h.pow(delta as u32 - 1)).expect("exact")
        };
        if b.deg() == 0 {
            let da = a.deg() as u32;
            let res = b.lc().pow(da).exact_div(&h.pow(da - 1)).expect("exact");
            return if sign_neg { -res } else { res };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s, &["x", "y", "y'", "a", "b"]).unwrap().trimmed()
    }

    /// Sylvester determinant by cofactor expansion, for cross-checking.
    fn sylvester(f: &Poly, g: &Poly, var: &str) -> Poly {
        let (f, g) = Poly::align(f, g);
        let idx = f.var_index(var).unwrap();
        let fa = split(&f, idx);
        let ga = split(&g, idx);
        let (m, n) = (fa.deg(), ga.deg());
        let size = m + n;
        let zero = Poly::zero_in(f.vars().to_vec());
        let mut mat = vec![vec![zero.clone(); size]; size];
        for row in 0..n {
            for (k, c) in fa.coeffs.iter().rev().enumerate() {
                mat[row][row + k] = c.clone();
            }
        }
        for row in 0..m {
            for (k, c) in ga.coeffs.iter().rev().enumerate() {
                mat[n + row][row + k] = c.clone();
            }
        }
        det(&mat)
    }

    fn det(m: &[Vec<Poly>]) -> Poly {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = Poly::zero_in(m[0][0].vars().to_vec());
        for j in 0..n {
            if m[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<Poly>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, c)| c.clone()).collect())
                .collect();
            let t = &m[0][j] * &det(&minor);
            acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
        }
        acc
    }

    #[test]
    fn double_point_resultant_of_c7() {
        let r = resultant(&p("y + y'"), &p("x*(y^2 + y*y' + y'^2) - x^7"), "y'").unwrap();
        assert!(r.equals_up_to_unit(&p("x*y^2 - x^7")));
    }

    #[test]
    fn cross_cap_resultant() {
        let r = resultant(&p("y + y'"), &p("x"), "y'").unwrap();
        assert_eq!(r, p("x"));
    }

    #[test]
    fn linear_resultant() {
        let r = resultant(&p("y - a"), &p("y - b"), "y").unwrap();
        assert!(r.equals_up_to_unit(&p("a - b")));
    }

    #[test]
    fn matches_sylvester_determinant() {
        let cases = [
            ("x^2*y^3 - y + 2*x", "y^2*x - 3*x^2 - y + 1"),
            ("y^4 + x*y - 1", "x*y^3 + 2*y^2 - x^2"),
            ("3*y^2 - x", "y^3 + y*x^2 + 5"),
            ("y^5 + x", "y^2 - x^3"),
        ];
        for (f, g) in cases {
            let (f, g) = (p(f), p(g));
            assert_eq!(resultant(&f, &g, "y").unwrap(), sylvester(&f, &g, "y"), "{f} / {g}");
        }
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(resultant(&Poly::zero(&["y"]), &Poly::zero(&["y"]), "y"), Err(PolyError::BothZero));
        assert!(resultant(&Poly::zero(&["y"]), &p("y"), "y").unwrap().is_zero());
        assert_eq!(resultant(&p("3*x"), &p("y^2 + 1"), "y").unwrap(), p("9*x^2"));
    }
}
