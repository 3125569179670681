//! Labeling branches as identification or fold components and pairing the
//! identification components.
//!
//! Along `y^a = alpha x^b` parametrized by `(u^a, g u^b)` with `g^a = alpha`,
//! the normal form maps to `(u^a, g1 u^{d2}, g2 u^{d3})`. Writing
//! `f(1, y) = y^r G(y^a)` gives `g1 = g^{r2} G2(alpha)` and likewise for
//! `g2`, so vanishing of the image coefficients is decided by gcds of
//! `Lambda` with `G2`, `G3`. Coincidence of images is decided by the
//! monomials in `(g1, g2)` invariant under `g -> zeta g`, `zeta^a = 1`.

use num_integer::Integer;
use num_traits::Zero;

use super::d5::{match_roots, numeric_sigma, verify_involution, Matching};
use super::roots::{distance, eval_at, roots, Root};
use super::{Branch, BranchImage, BranchKind, DoublePointCurve, DoublePointError, Factored, Label, RootClass};
use crate::normal_form::NormalForm;
use crate::poly::{Poly, Rational, UPoly};

/// `f(1, y) = y^r G(y^a)` for `f` quasi-homogeneous of degree `d`.
fn fiber(f: &Poly, a: u64, b: u64, d: u64) -> (u64, UPoly) {
    let r = if a == 1 {
        0
    } else {
        let b_inv = (1..a).find(|k| (k * b) % a == 1).expect("gcd(a, b) = 1");
        (d % a) * b_inv % a
    };
    let mut coeffs = Vec::new();
    for (e, c) in f.terms() {
        let j = e[1] as u64;
        debug_assert!(j >= r && (j - r) % a == 0);
        let k = ((j - r) / a) as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, Rational::zero());
        }
        coeffs[k] += c;
    }
    (r, UPoly::new(coeffs))
}

struct Fibers {
    r: [u64; 2],
    g: [UPoly; 2],
}

fn fibers(nf: &NormalForm) -> Fibers {
    let q = &nf.qh;
    let (r2, g2) = fiber(nf.p_tilde(), q.a, q.b, q.d2());
    let (r3, g3) = fiber(nf.q_tilde(), q.a, q.b, q.d3());
    Fibers { r: [r2, r3], g: [g2, g3] }
}

/// Monomials `g1^u g2^v` with `u + v <= a` fixed by the `a`-th roots of
/// unity, written as polynomials in `alpha`.
fn invariants(nf: &NormalForm, fb: &Fibers) -> Vec<UPoly> {
    let q = &nf.qh;
    let a = q.a;
    let mut out = Vec::new();
    for u in 0..=a {
        for v in 0..=(a - u) {
            if (u, v) == (0, 0) || (q.d2() * u + q.d3() * v) % a != 0 {
                continue;
            }
            let e = (fb.r[0] * u + fb.r[1] * v) / a;
            let inv = UPoly::monomial(Rational::from_integer(1.into()), e as usize)
                .mul(&fb.g[0].pow(u as u32))
                .mul(&fb.g[1].pow(v as u32));
            out.push(inv);
        }
    }
    out
}

fn class_gcd(nf: &NormalForm, gamma_zero: [bool; 2]) -> u64 {
    let q = &nf.qh;
    let mut g = q.a;
    if !gamma_zero[0] {
        g = g.gcd(&q.d2());
    }
    if !gamma_zero[1] {
        g = g.gcd(&q.d3());
    }
    g
}

/// Exponent gcd of the image of `V(x)`, parametrized by `(0, u^n, alpha u^m)`.
fn x_axis_gcd(nf: &NormalForm) -> u64 {
    match nf.m {
        Some(m) if !nf.alpha.is_zero() => (nf.n as u64).gcd(&(m as u64)),
        _ => nf.n as u64,
    }
}

pub fn classify_branches(f: Factored, nf: &NormalForm) -> Result<DoublePointCurve, DoublePointError> {
    let fb = fibers(nf);
    let lam = f.big_lambda.monic();
    let zero2 = lam.gcd(&fb.g[0]);
    let zero3 = lam.gcd(&fb.g[1]);
    let both = zero2.gcd(&zero3);
    let only2 = zero2.div_rem(&both).0;
    let only3 = zero3.div_rem(&both).0;
    let lcm = zero2.mul(&zero3).div_rem(&both).0;
    let neither = lam.div_rem(&lcm).0;

    let mut classes = Vec::new();
    for (poly, gz) in [(neither, [false, false]), (only2, [true, false]), (only3, [false, true]), (both, [true, true])] {
        if poly.deg() == 0 {
            continue;
        }
        let g = class_gcd(nf, gz);
        if g > 2 {
            return Err(DoublePointError::StructureViolation(format!(
                "branches with image exponent gcd {g} (roots of {poly})"
            )));
        }
        classes.push(RootClass { poly, gamma_zero: gz, exponent_gcd: g });
    }

    let mut branches = Vec::new();
    for (ci, class) in classes.iter().enumerate() {
        for alpha in roots(&class.poly)? {
            let id = branches.len();
            branches.push(Branch { id, kind: BranchKind::Binomial { alpha, class: ci }, label: Label::Fold });
        }
    }
    if f.s == 1 {
        let g = x_axis_gcd(nf);
        if g != 2 {
            return Err(DoublePointError::StructureViolation(format!("V(x) has image exponent gcd {g}, expected 2")));
        }
        let id = branches.len();
        branches.push(Branch { id, kind: BranchKind::XAxis, label: Label::Fold });
    }

    let ic_poly = classes.iter().filter(|c| !c.is_fold()).fold(UPoly::one(), |acc, c| acc.mul(&c.poly));
    let r_i = ic_poly.deg() as u32;
    let r_f = classes.iter().filter(|c| c.is_fold()).map(|c| c.poly.deg() as u32).sum::<u32>() + f.s;
    let mut pairing = None;
    if r_i > 0 {
        let inv = invariants(nf, &fb);
        let ic_roots: Vec<Root> = branches
            .iter()
            .filter_map(|b| match &b.kind {
                BranchKind::Binomial { alpha, class } if !classes[*class].is_fold() => Some(alpha.clone()),
                _ => None,
            })
            .collect();
        let fast = numeric_sigma(&ic_roots, &inv)
            .map(|s| s.rem(&ic_poly))
            .filter(|s| verify_involution(&ic_poly, s, &inv).is_ok());
        let exact = || match match_roots(&ic_poly, &inv) {
            Matching::Pairs(sigma) => Ok(sigma),
            Matching::Unpaired(m) => Err(DoublePointError::UnpairedIdentificationComponent(format!("roots of {m}"))),
            Matching::Crowded(m, k) => Err(DoublePointError::StructureViolation(format!(
                "{k} identification branches share one image (roots of {m})"
            ))),
        };
        let sigma = match fast {
            Some(s) => s,
            None => {
                let s = exact()?;
                verify_involution(&ic_poly, &s, &inv).map_err(|e| DoublePointError::StructureViolation(e.into()))?;
                s
            }
        };
        label_pairs(&mut branches, &classes, &sigma)?;
        pairing = Some((ic_poly, sigma));
    }
    Ok(DoublePointCurve { factored: f, classes, pairing, branches, r_i, r_f })
}

/// Matches each identification root with the root nearest to its image
/// under `sigma`. The pairing itself is exact; this only names partners.
fn label_pairs(branches: &mut [Branch], classes: &[RootClass], sigma: &UPoly) -> Result<(), DoublePointError> {
    let ic: Vec<usize> = branches
        .iter()
        .filter(|b| matches!(&b.kind, BranchKind::Binomial { class, .. } if !classes[*class].is_fold()))
        .map(|b| b.id)
        .collect();
    let alpha = |id: usize| match &branches[id].kind {
        BranchKind::Binomial { alpha, .. } => alpha.clone(),
        BranchKind::XAxis => unreachable!(),
    };
    let mut partner = vec![usize::MAX; branches.len()];
    for &i in &ic {
        let target = eval_at(sigma, &alpha(i));
        let mut dists: Vec<(f64, usize)> = ic.iter().map(|&j| (distance(&target, &alpha(j)), j)).collect();
        dists.sort_by(|x, y| x.0.total_cmp(&y.0));
        let (d0, j) = dists[0];
        let scale = 1.0 + target.approx().norm();
        let separated = dists.get(1).is_none_or(|(d1, _)| *d1 > 1e-12 * scale);
        if d0 > 1e-20 * scale || !separated || j == i {
            return Err(DoublePointError::StructureViolation(
                "numeric labeling of identification pairs is ambiguous".into(),
            ));
        }
        partner[i] = j;
    }
    for &i in &ic {
        if partner[partner[i]] != i {
            return Err(DoublePointError::StructureViolation("identification labeling is not an involution".into()));
        }
        branches[i].label = Label::Identification { partner: partner[i] };
    }
    Ok(())
}

/// Image curves of the branches; identification pairs give one image.
pub fn branch_images(dpc: &DoublePointCurve, nf: &NormalForm) -> Result<Vec<BranchImage>, DoublePointError> {
    let q = &nf.qh;
    let c = q.a.min(q.d2());
    let fb = fibers(nf);
    let half = |v: u64, what: &str| {
        if v % 2 == 0 {
            Ok(v / 2)
        } else {
            Err(DoublePointError::StructureViolation(format!("odd {what} {v} on a fold component")))
        }
    };
    let mut out = Vec::new();
    for br in &dpc.branches {
        match (&br.kind, br.label) {
            (BranchKind::Binomial { .. }, Label::Identification { partner }) if partner < br.id => continue,
            (BranchKind::Binomial { alpha, class }, label) => {
                let gz = dpc.classes[*class].gamma_zero;
                let (members, multiplicity) = match label {
                    Label::Identification { partner } => (vec![br.id, partner], c),
                    Label::Fold => (vec![br.id], half(c, "c")?),
                };
                let implicit = match (&alpha.exact, q.a) {
                    (Some(al), 1) => {
                        let g1 = fb.g[0].eval(al);
                        let g2 = fb.g[1].eval(al);
                        Some(vec![
                            target_binomial(&[0, 1, 0], &g1, &[q.d2() as u32, 0, 0]),
                            target_binomial(&[0, 0, 1], &g2, &[q.d3() as u32, 0, 0]),
                        ])
                    }
                    _ => None,
                };
                out.push(BranchImage {
                    branches: members,
                    exponents: [q.a, q.d2(), q.d3()],
                    nonzero: [true, !gz[0], !gz[1]],
                    multiplicity,
                    implicit,
                });
            }
            (BranchKind::XAxis, _) => {
                let n = nf.n as u64;
                let (m, alpha_nz) = match nf.m {
                    Some(m) if !nf.alpha.is_zero() => (m as u64, true),
                    _ => (0, false),
                };
                let implicit = if alpha_nz {
                    let g = n.gcd(&m);
                    let coeff = num_traits::pow(nf.alpha.clone(), (n / g) as usize);
                    vec![target_var(0), target_binomial(&[0, 0, (n / g) as u32], &coeff, &[0, (m / g) as u32, 0])]
                } else {
                    vec![target_var(0), target_var(2)]
                };
                out.push(BranchImage {
                    branches: vec![br.id],
                    exponents: [0, n, m],
                    nonzero: [false, true, alpha_nz],
                    multiplicity: half(n, "n")?,
                    implicit: Some(implicit),
                });
            }
        }
    }
    Ok(out)
}

pub const TARGET_VARS: [&str; 3] = ["X", "Y", "Z"];

fn target_var(k: usize) -> Poly {
    Poly::var(TARGET_VARS[k], &TARGET_VARS)
}

/// `lhs - coeff * rhs` for target monomials given by exponent vectors.
fn target_binomial(lhs: &[u32], coeff: &Rational, rhs: &[u32]) -> Poly {
    let one = Rational::from_integer(1.into());
    &Poly::monomial(one, lhs, &TARGET_VARS) - &Poly::monomial(coeff.clone(), rhs, &TARGET_VARS)
}
