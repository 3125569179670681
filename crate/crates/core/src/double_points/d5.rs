//! Gcds over `Q[t]/(m)` for squarefree `m`, splitting the modulus whenever a
//! leading coefficient turns out to be a zero divisor.
//!
//! A polynomial in `t'` over the quotient is a `Vec<UPoly>` of residues,
//! lowest degree first.

use super::roots::{eval_at, interpolate, log2_gap, Root};
use crate::poly::UPoly;

type Residues = Vec<UPoly>;

fn reduce(m: &UPoly, p: &[UPoly]) -> Residues {
    let mut out: Residues = p.iter().map(|c| c.rem(m)).collect();
    while out.last().is_some_and(UPoly::is_zero) {
        out.pop();
    }
    out
}

/// Either an inverse of `c` modulo `m`, or a proper factor of `m`.
enum Inverse {
    Unit(UPoly),
    Split(UPoly),
}

fn invert(c: &UPoly, m: &UPoly) -> Inverse {
    let g = c.gcd(m);
    if g.deg() == 0 {
        Inverse::Unit(c.inverse_mod(m).expect("coprime"))
    } else {
        Inverse::Split(g)
    }
}

fn mul_mod(a: &UPoly, b: &UPoly, m: &UPoly) -> UPoly {
    a.mul(b).rem(m)
}

/// Monic gcd of `a` and `b` over each component of `Q[t]/(m)`. The moduli
/// of the returned components multiply to `m`.
pub(crate) fn gcd_split(m: &UPoly, a: &[UPoly], b: &[UPoly]) -> Vec<(UPoly, Residues)> {
    let mut out = Vec::new();
    let mut stack = vec![(m.monic(), a.to_vec(), b.to_vec())];
    while let Some((m, a, b)) = stack.pop() {
        let mut a = reduce(&m, &a);
        let mut b = reduce(&m, &b);
        loop {
            if b.is_empty() {
                if a.is_empty() {
                    out.push((m, a));
                    break;
                }
                match invert(a.last().unwrap(), &m) {
                    Inverse::Unit(inv) => {
                        let monic = a.iter().map(|c| mul_mod(c, &inv, &m)).collect();
                        out.push((m, monic));
                    }
                    Inverse::Split(g) => {
                        let other = m.div_rem(&g).0;
                        stack.push((g, a.clone(), Vec::new()));
                        stack.push((other, a, Vec::new()));
                    }
                }
                break;
            }
            let inv = match invert(b.last().unwrap(), &m) {
                Inverse::Unit(inv) => inv,
                Inverse::Split(g) => {
                    let other = m.div_rem(&g).0;
                    stack.push((g, a.clone(), b.clone()));
                    stack.push((other, a, b));
                    break;
                }
            };
            // a mod b over the current component
            while a.len() >= b.len() {
                let shift = a.len() - b.len();
                let c = mul_mod(a.last().unwrap(), &inv, &m);
                for (k, bc) in b.iter().enumerate() {
                    a[k + shift] = a[k + shift].sub(&mul_mod(&c, bc, &m));
                }
                a = reduce(&m, &a);
            }
            std::mem::swap(&mut a, &mut b);
        }
    }
    out
}

/// Lifts a univariate polynomial to constant residues.
pub(crate) fn constants(p: &UPoly) -> Residues {
    p.coeffs().iter().map(|c| UPoly::constant(c.clone())).collect()
}

/// Chinese remaindering over pairwise coprime moduli.
pub(crate) fn crt(parts: &[(UPoly, UPoly)]) -> (UPoly, UPoly) {
    let modulus = parts.iter().fold(UPoly::one(), |acc, (m, _)| acc.mul(m));
    let mut acc = UPoly::zero();
    for (m, v) in parts {
        let cof = modulus.div_rem(m).0;
        let inv = cof.inverse_mod(m).expect("coprime moduli");
        acc = acc.add(&v.mul(&inv).rem(m).mul(&cof));
    }
    (modulus.clone(), acc.rem(&modulus))
}

/// Result of matching roots of `m` by shared invariant values.
pub(crate) enum Matching {
    /// An involution `sigma` on the roots, as a residue mod `m`.
    Pairs(UPoly),
    /// Some root matches no other root; the factor of `m` carrying it.
    Unpaired(UPoly),
    /// Some root matches two or more others; the factor of `m` carrying it.
    Crowded(UPoly, usize),
}

/// For each root `t` of `m`, finds the other roots `t'` with
/// `inv(t') = inv(t)` for every invariant.
pub(crate) fn match_roots(m: &UPoly, invariants: &[UPoly]) -> Matching {
    let t = UPoly::t();
    let mut comps: Vec<(UPoly, Residues)> = vec![(m.monic(), constants(m))];
    for inv in invariants {
        let mut next = Vec::new();
        for (mk, g) in comps {
            let mut b = constants(inv);
            let at_t = inv.rem(&mk);
            if b.is_empty() {
                b.push(UPoly::zero());
            }
            b[0] = b[0].sub(&at_t);
            next.extend(gcd_split(&mk, &g, &b));
        }
        comps = next;
    }
    let mut parts = Vec::new();
    for (mk, g) in comps {
        match g.len() {
            0 | 1 | 2 => return Matching::Unpaired(mk),
            3 => {
                // g = t'^2 + g1 t' + g0 has roots t and sigma(t)
                let sigma = g[1].neg().sub(&t).rem(&mk);
                parts.push((mk, sigma));
            }
            k => return Matching::Crowded(mk, k - 1),
        }
    }
    let (_, sigma) = crt(&parts);
    Matching::Pairs(sigma)
}

/// Fast path for `match_roots`: pairs the approximate roots of `m` by their
/// invariant values and recovers `sigma` by interpolation and rational
/// reconstruction. The caller must still run `verify_involution`; `None`
/// whenever anything is unclear.
pub(crate) fn numeric_sigma(m_roots: &[Root], invariants: &[UPoly]) -> Option<UPoly> {
    let vals: Vec<Vec<Root>> = m_roots.iter().map(|t| invariants.iter().map(|g| eval_at(g, t)).collect()).collect();
    let scale = |r: &Root| r.approx().norm().max(1.0).log2().ceil() as i64;
    let mut partner = Vec::with_capacity(m_roots.len());
    for i in 0..m_roots.len() {
        let mut found = None;
        for j in (0..m_roots.len()).filter(|&j| j != i) {
            // worst relative gap over the invariants, in bits
            let gap = vals[i]
                .iter()
                .zip(&vals[j])
                .map(|(u, v)| log2_gap(u, v).map_or(i64::MIN, |l| l - scale(u)))
                .max()
                .unwrap_or(i64::MIN);
            if gap < -150 {
                if found.is_some() {
                    return None;
                }
                found = Some(j);
            } else if gap < -40 {
                return None;
            }
        }
        partner.push(found?);
    }
    let xs: Vec<_> = m_roots.iter().map(|r| r.value.clone()).collect();
    let ys: Vec<_> = partner.iter().map(|&j| xs[j].clone()).collect();
    let coeffs = interpolate(&xs, &ys)?;
    let exact = coeffs.iter().map(|c| c.rational_near(64, 120)).collect::<Option<Vec<_>>>()?;
    Some(UPoly::new(exact))
}

/// Exact checks that `sigma` is a fixed-point-free involution of the roots
/// of `m` preserving each invariant.
pub(crate) fn verify_involution(m: &UPoly, sigma: &UPoly, invariants: &[UPoly]) -> Result<(), &'static str> {
    let t = UPoly::t();
    if !m.compose_mod(sigma, m).is_zero() {
        return Err("sigma does not permute the roots");
    }
    if sigma.compose_mod(sigma, m) != t.rem(m) {
        return Err("sigma is not an involution");
    }
    if sigma.sub(&t).gcd(m).deg() != 0 {
        return Err("sigma fixes a root");
    }
    for inv in invariants {
        if inv.compose_mod(sigma, m) != inv.rem(m) {
            return Err("sigma does not preserve the image invariants");
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_on_zero_divisors() {
        // modulus (t - 1)(t + 1); gcd of (t' - 1) and ((t-1) t' + 1)
        let m = UPoly::from_ints(&[-1, 0, 1]);
        let a = vec![UPoly::from_ints(&[-1]), UPoly::from_ints(&[1])];
        let b = vec![UPoly::from_ints(&[1]), UPoly::from_ints(&[-1, 1])];
        let comps = gcd_split(&m, &a, &b);
        assert_eq!(comps.len(), 2);
        let total: usize = comps.iter().map(|(mk, _)| mk.deg()).sum();
        assert_eq!(total, 2);
        // b is the constant 1 at t = 1 and 1 - 2t' at t = -1: coprime to a at both
        for (mk, g) in comps {
            assert_eq!(g.len(), 1, "{mk}");
        }
    }

    #[test]
    fn pairs_negatives() {
        // roots of t^4 - 5t^2 + 4 = (t^2-1)(t^2-4); invariant t^2 pairs t with -t
        let m = UPoly::from_ints(&[4, 0, -5, 0, 1]);
        let inv = vec![UPoly::from_ints(&[0, 0, 1])];
        let Matching::Pairs(sigma) = match_roots(&m, &inv) else { panic!() };
        assert_eq!(sigma, UPoly::from_ints(&[0, -1]));
        verify_involution(&m, &sigma, &inv).unwrap();
    }

    #[test]
    fn numeric_path_agrees_with_exact() {
        let m = UPoly::from_ints(&[1, 0, 0, 0, 1]);
        let inv = vec![UPoly::from_ints(&[0, 0, 1])];
        let rts = super::super::roots::roots(&m).unwrap();
        let fast = numeric_sigma(&rts, &inv).unwrap().rem(&m);
        let Matching::Pairs(exact) = match_roots(&m, &inv) else { panic!() };
        assert_eq!(fast, exact);
        // t^4 = -1 at every root: crowded, so the fast path declines
        assert!(numeric_sigma(&rts, &[UPoly::from_ints(&[0, 0, 0, 0, 1])]).is_none());
    }

    #[test]
    fn irreducible_pairing() {
        // roots are the primitive 8th roots of unity; t^4 = -1 at all of them
        let m = UPoly::from_ints(&[1, 0, 0, 0, 1]);
        assert!(matches!(match_roots(&m, &[UPoly::from_ints(&[0, 0, 0, 0, 1])]), Matching::Crowded(_, 4)));
        assert!(matches!(match_roots(&m, &[UPoly::t()]), Matching::Unpaired(_)));
        let Matching::Pairs(sigma) = match_roots(&m, &[UPoly::from_ints(&[0, 0, 1])]) else { panic!() };
        verify_involution(&m, &sigma, &[UPoly::from_ints(&[0, 0, 1])]).unwrap();
    }
}
