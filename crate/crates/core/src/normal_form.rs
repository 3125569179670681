//! Reduction of a corank-1 quasi-homogeneous germ to the shape
//! `(x, y^n + x p(x,y), alpha y^m + x q(x,y))` with `p(x,0) = q(x,0) = 0`.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::germ::{corank, GermError, MapGerm, QhType, SOURCE_VARS};
use crate::poly::{Poly, Rational};

/// One coordinate change applied while normalizing. Source changes are
/// substitutions; target changes act on the coordinate functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    /// Exchange the source variables `x` and `y`.
    SwapSource,
    /// Substitute `x -> x + coeff * y^power`.
    ShearSource { coeff: Rational, power: u32 },
    /// New coordinate `i` is old coordinate `perm[i]`.
    PermuteTarget { perm: [usize; 3] },
    /// Multiply coordinate `index` by `factor`.
    ScaleTarget { index: usize, factor: Rational },
    /// Replace coordinate `index` by itself minus `coeff * X^power`, where `X`
    /// is the first coordinate.
    SubtractTarget { index: usize, coeff: Rational, power: u32 },
    /// The germ is a stable cross-cap; it is replaced by `(x, y^2, xy)`.
    /// This step is not an explicit substitution.
    ReplaceByCrossCap,
}

impl Step {
    pub fn is_explicit(&self) -> bool {
        !matches!(self, Step::ReplaceByCrossCap)
    }

    pub fn apply(&self, g: &MapGerm) -> MapGerm {
        let vars: Vec<&str> = SOURCE_VARS.to_vec();
        let x = Poly::var("x", &vars);
        let y = Poly::var("y", &vars);
        let c = g.coords().clone();
        let sub = |bind: HashMap<&str, Poly>| -> [Poly; 3] {
            c.clone().map(|f| f.substitute(&bind).unwrap().with_vars(&names()).unwrap())
        };
        let coords = match self {
            Step::SwapSource => sub(HashMap::from([("x", y.clone()), ("y", x.clone())])),
            Step::ShearSource { coeff, power } => {
                let img = &x + &y.pow(*power).scale(coeff);
                sub(HashMap::from([("x", img), ("y", y.clone())]))
            }
            Step::PermuteTarget { perm } => [c[perm[0]].clone(), c[perm[1]].clone(), c[perm[2]].clone()],
            Step::ScaleTarget { index, factor } => {
                let mut out = c.clone();
                out[*index] = out[*index].scale(factor);
                out
            }
            Step::SubtractTarget { index, coeff, power } => {
                let mut out = c.clone();
                out[*index] = &out[*index] - &c[0].pow(*power).scale(coeff);
                out
            }
            Step::ReplaceByCrossCap => [x.clone(), y.pow(2), &x * &y],
        };
        MapGerm::from_coords_unchecked(coords)
    }
}

fn names() -> Vec<String> {
    SOURCE_VARS.iter().map(|s| s.to_string()).collect()
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::SwapSource => write!(f, "swap source x <-> y"),
            Step::ShearSource { coeff, power } => write!(f, "source x -> x + ({coeff})*y^{power}"),
            Step::PermuteTarget { perm } => {
                write!(f, "permute target to (f{}, f{}, f{})", perm[0] + 1, perm[1] + 1, perm[2] + 1)
            }
            Step::ScaleTarget { index, factor } => write!(f, "target f{} -> ({factor})*f{}", index + 1, index + 1),
            Step::SubtractTarget { index, coeff, power } => {
                write!(f, "target f{} -> f{} - ({coeff})*f1^{power}", index + 1, index + 1)
            }
            Step::ReplaceByCrossCap => write!(f, "replace stable germ by the cross-cap (x, y^2, x*y)"),
        }
    }
}

/// Replays `steps` on `g`.
pub fn replay(g: &MapGerm, steps: &[Step]) -> MapGerm {
    steps.iter().fold(g.clone(), |acc, s| s.apply(&acc))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub germ: MapGerm,
    pub n: u32,
    /// Absent when the third coordinate has no pure power of `y`.
    pub m: Option<u32>,
    pub alpha: Rational,
    pub p: Poly,
    pub q: Poly,
    pub qh: QhType,
    pub provenance: Vec<Step>,
}

impl NormalForm {
    /// `y^n + x p`.
    pub fn p_tilde(&self) -> &Poly {
        self.germ.coord(1)
    }

    /// `alpha y^m + x q`.
    pub fn q_tilde(&self) -> &Poly {
        self.germ.coord(2)
    }

    pub fn is_explicit(&self) -> bool {
        self.provenance.iter().all(Step::is_explicit)
    }
}

/// Working state while reducing: the germ, its type and the steps so far.
struct Work {
    g: MapGerm,
    qh: QhType,
    steps: Vec<Step>,
}

impl Work {
    fn push(&mut self, s: Step) {
        self.g = s.apply(&self.g);
        match &s {
            Step::SwapSource => self.qh = self.qh.swapped_weights(),
            Step::PermuteTarget { perm } => self.qh = self.qh.permuted(*perm),
            _ => {}
        }
        self.steps.push(s);
    }
}

fn pure_x_coefficient(p: &Poly) -> Option<(u32, Rational)> {
    p.terms().find(|(e, _)| e[1] == 0).map(|(e, c)| (e[0], c.clone()))
}

fn pure_y_coefficient(p: &Poly) -> Option<(u32, Rational)> {
    p.terms().find(|(e, _)| e[0] == 0).map(|(e, c)| (e[1], c.clone()))
}

/// `(f - lead) / x`, the `p` or `q` of the normal form.
fn x_part(f: &Poly, pure_y: Option<u32>) -> Poly {
    let vars: Vec<&str> = SOURCE_VARS.to_vec();
    let mut rest = f.clone();
    if let Some(k) = pure_y {
        rest = &rest - &Poly::monomial(f.coefficient(&[0, k]), &[0, k], &vars);
    }
    rest.exact_div(&Poly::var("x", &vars)).expect("remaining terms contain x")
}

/// Applies the coordinate changes of the normal-form reduction.
pub fn to_normal_form(g: &MapGerm, qh: QhType) -> Result<NormalForm, GermError> {
    let rank_def = corank(g);
    if rank_def != 1 {
        return Err(GermError::NotCorankOne(rank_def));
    }
    let mut w = Work { g: g.clone(), qh, steps: Vec::new() };

    // A coordinate with a linear x term; otherwise swap source variables.
    let lin = w.g.linear_part();
    let mut pivot = (0..3).find(|&k| !lin[k][0].is_zero());
    if pivot.is_none() {
        w.push(Step::SwapSource);
        pivot = (0..3).find(|&k| !lin[k][1].is_zero());
    }
    let k = pivot.expect("corank 1 has a nonzero linear term");
    if k != 0 {
        let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
        w.push(Step::PermuteTarget { perm: [k, others[0], others[1]] });
    }

    // f1 = gamma x + theta y^a, where theta can be nonzero only when b = 1.
    let f1 = w.g.coord(0).clone();
    let gamma = f1.coefficient(&[1, 0]);
    let a = w.qh.a as u32;
    let theta = f1.coefficient(&[0, a]);
    if !theta.is_zero() && w.qh.b == 1 {
        w.push(Step::ShearSource { coeff: -(&theta / &gamma), power: a });
    }
    if !gamma.is_one() {
        w.push(Step::ScaleTarget { index: 0, factor: gamma.recip() });
    }
    debug_assert_eq!(w.g.coord(0), &Poly::var("x", &SOURCE_VARS));

    for idx in 1..3 {
        if let Some((e, c)) = pure_x_coefficient(w.g.coord(idx)) {
            w.push(Step::SubtractTarget { index: idx, coeff: c, power: e });
        }
    }

    let alpha_of = |w: &Work, i: usize| pure_y_coefficient(w.g.coord(i));
    let (l2, l3) = (alpha_of(&w, 1), alpha_of(&w, 2));
    let cross_cap_type = QhType::new(1, 2, 2, 1, 1);
    match (l2, l3) {
        (None, None) => return Err(GermError::NotFinite),
        (Some((v2, c2)), Some((v3, c3))) => {
            if v3 < v2 {
                w.push(Step::PermuteTarget { perm: [0, 2, 1] });
            }
            let (c2, c3) = if v3 < v2 { (c3, c2) } else { (c2, c3) };
            if !c2.is_one() {
                w.push(Step::ScaleTarget { index: 1, factor: c2.recip() });
            }
            if !c3.is_one() {
                w.push(Step::ScaleTarget { index: 2, factor: c3.recip() });
            }
        }
        (l2, l3) => {
            let (v, c) = if l2.is_none() {
                w.push(Step::PermuteTarget { perm: [0, 2, 1] });
                l3.unwrap()
            } else {
                l2.unwrap()
            };
            if !c.is_one() {
                w.push(Step::ScaleTarget { index: 1, factor: c.recip() });
            }
            let third = w.g.coord(2).clone();
            if third.is_zero() {
                return Err(GermError::NotFinitelyDetermined("lambda not squarefree".into()));
            }
            if v == 2 && third.terms().all(|(e, _)| e[1] == 1) {
                // Every monomial is x^k y with the same k by quasi-homogeneity.
                let (e, c) = third.terms().next().map(|(e, c)| (e.clone(), c.clone())).unwrap();
                if e[0] >= 2 {
                    // reduces to (x, y^2, x^k y), whose lambda is x^k
                    return Err(GermError::NotFinitelyDetermined("lambda not squarefree".into()));
                }
                if !c.is_one() {
                    w.push(Step::ScaleTarget { index: 2, factor: c.recip() });
                }
                let cc = [Poly::var("x", &SOURCE_VARS), Poly::var("y", &SOURCE_VARS).pow(2)];
                if w.g.coord(1) != &cc[1] {
                    w.push(Step::ReplaceByCrossCap);
                }
                w.qh = cross_cap_type;
            }
        }
    }

    let p_tilde = w.g.coord(1).clone();
    let q_tilde = w.g.coord(2).clone();
    let n = pure_y_coefficient(&p_tilde).map(|(k, _)| k).expect("second coordinate has a pure y power");
    let m = pure_y_coefficient(&q_tilde).map(|(k, _)| k);
    let alpha = if m.is_some() { Rational::one() } else { Rational::zero() };
    let p = x_part(&p_tilde, Some(n));
    let q = x_part(&q_tilde, m);
    debug_assert!(w.qh.admits(&w.g), "normalization preserves the quasi-homogeneous type");
    Ok(NormalForm { germ: w.g, n, m, alpha, p, q, qh: w.qh, provenance: w.steps })
}

/// Reads `(n, m, alpha)`. A zero `alpha` forces `n = 2` for finitely
/// determined germs.
pub fn extract_nm_alpha(nf: &NormalForm) -> Result<(u32, Option<u32>, Rational), GermError> {
    if nf.alpha.is_zero() && nf.n != 2 {
        return Err(GermError::NotFinitelyDeterminedHint { n: nf.n });
    }
    Ok((nf.n, nf.m, nf.alpha.clone()))
}
