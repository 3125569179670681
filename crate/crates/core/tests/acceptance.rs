//! Acceptance checks, one line per criterion. Runs without the test harness.

use std::collections::HashMap;
use std::process::ExitCode;

use germcalc::corpus::{default_p3_param, default_selectors, worked_examples, CorpusEntry, C7_GERM};
use germcalc::double_points::{check_lambda_type, expected_r, lambda_degree, s_rule, BranchKind, Label, TARGET_VARS};
use germcalc::germ::{parse_germ, SOURCE_VARS};
use germcalc::invariants::{mond_mu_d, quasi_homogeneous_milnor, InvariantContext};
use germcalc::oracles::{intersection_multiplicity, oracle_mu, OracleError};
use germcalc::pipeline::{analyze, analyze_str, Analysis, Options};
use germcalc::poly::{gcd, is_squarefree, parse_poly, resultant, Poly, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table_entries() -> Vec<CorpusEntry> {
    let p3 = default_p3_param();
    default_selectors().iter().flat_map(|s| s.entries(&p3).unwrap()).collect()
}

fn run(germ: &str) -> Result<Analysis, String> {
    analyze_str(germ, &Options::default()).map_err(|e| format!("{germ}: {e}"))
}

/// Every germ from criteria 1 to 3.
fn corpus_germs() -> Vec<String> {
    let mut g: Vec<String> = table_entries().into_iter().map(|e| e.germ).collect();
    g.extend(worked_examples().into_iter().map(|w| w.germ.to_string()));
    g.push(C7_GERM.to_string());
    g
}

fn criterion_1() -> Outcome {
    let entries = table_entries();
    for e in &entries {
        let a = run(&e.germ)?;
        let i = &a.invariants;
        let got = (i.r_i, i.r_f, i.m_fd.value, i.j.value);
        let want = (e.expected.r_i, e.expected.r_f, e.expected.m, e.expected.j);
        ensure(got == want, || format!("{}: computed {got:?}, table {want:?}", e.name))?;
        ensure(a.input_type == e.qh, || format!("{}: type {} but table {}", e.name, a.input_type, e.qh))?;
    }
    Ok(format!("{} table rows match (r_i, r_f, m, J) and type", entries.len()))
}

fn criterion_2() -> Outcome {
    let xy = SOURCE_VARS;
    for w in worked_examples() {
        let a = run(w.germ)?;
        let got = (a.invariants.m_fd.value, a.invariants.j.value);
        ensure(got == (w.m, w.j), || format!("{}: (m, J) = {got:?}, expected ({}, {})", w.name, w.m, w.j))?;
        if let Some(l) = w.lambda {
            let want = parse_poly(l, &xy).unwrap();
            ensure(a.lambda.equals_up_to_unit(&want), || format!("{}: lambda {} is not {l} up to a unit", w.name, a.lambda))?;
        }
        if let Some(mu) = w.mu {
            ensure(a.invariants.mu_d.value == mu, || format!("{}: mu(D) = {}", w.name, a.invariants.mu_d.value))?;
        }
    }
    Ok("examples (a)-(d) give the stated m, J and lambda".into())
}

fn criterion_3() -> Outcome {
    let a = run(C7_GERM)?;
    let xy = SOURCE_VARS;
    let want = parse_poly("x*y^2 - x^7", &xy).unwrap();
    ensure(a.lambda.equals_up_to_unit(&want), || format!("lambda = {}", a.lambda))?;
    let c = &a.curve;
    ensure(c.branches.len() == 3, || format!("{} branches", c.branches.len()))?;
    ensure((c.r_i, c.r_f) == (2, 1), || format!("(r_i, r_f) = ({}, {})", c.r_i, c.r_f))?;
    // branches y^a = alpha x^b with (a, b) = (1, 3): alpha = 1 and -1 give y -+ x^3
    let mut ic: Vec<Rational> = Vec::new();
    for b in &c.branches {
        match (&b.kind, b.label) {
            (BranchKind::Binomial { alpha, .. }, Label::Identification { partner }) => {
                ensure(c.branches[partner].label == Label::Identification { partner: b.id }, || "partner mismatch".into())?;
                ic.push(alpha.exact.clone().ok_or("irrational alpha")?);
            }
            (BranchKind::XAxis, Label::Fold) => {}
            other => return Err(format!("unexpected branch {other:?}")),
        }
    }
    ic.sort();
    ensure(ic == vec![-Rational::one(), Rational::one()], || format!("identification roots {ic:?}"))?;
    let xyz = TARGET_VARS;
    let eqs = |s: &[&str]| s.iter().map(|e| parse_poly(e, &xyz).unwrap()).collect::<Vec<_>>();
    let pair = a.images.iter().find(|i| i.branches.len() == 2).ok_or("no pair image")?;
    ensure(pair.implicit.as_ref() == Some(&eqs(&["Y - X^6", "Z"])), || format!("pair image {:?}", pair.implicit))?;
    let fold = a.images.iter().find(|i| i.branches.len() == 1).ok_or("no fold image")?;
    ensure(fold.implicit.as_ref() == Some(&eqs(&["X", "Z"])), || format!("fold image {:?}", fold.implicit))?;
    Ok("lambda, three branches, pair image V(Y - X^6, Z), fold image V(X, Z)".into())
}

fn criterion_4() -> Outcome {
    let germs = corpus_germs();
    for g in &germs {
        let a = run(g)?;
        let i = &a.invariants;
        ensure(i.c.oracle == Some(i.c.formula), || format!("{g}: oracle C {:?} vs {}", i.c.oracle, i.c.formula))?;
        ensure(i.mu_d.oracle == Some(i.mu_d.formula), || format!("{g}: oracle mu {:?} vs {}", i.mu_d.oracle, i.mu_d.formula))?;
        let m = &i.m_fd;
        ensure(m.oracle == Some(m.formula) && m.alternate == Some(m.formula), || format!("{g}: m paths {m:?}"))?;
        ensure(i.j.alternate == Some(i.j.formula), || format!("{g}: J relation {:?} vs {}", i.j.alternate, i.j.formula))?;
    }
    Ok(format!("{} germs: C, mu(D), m(f(D)) three ways, J two ways", germs.len()))
}

fn criterion_5() -> Outcome {
    let rejected = [
        "(x, y^2, x^2*y)",
        "(x, x^2*y, y^2 + x^3*y)",
        "(x, y^2, x^3*y)",
        "(x, x^3*y, y^2 + x^5*y)",
        "(x, y^2, x*y^3)",
        "(x, y^2 + x*y, x^2*y + x^3)",
    ];
    for g in rejected {
        match analyze_str(g, &Options::default()) {
            Err(e) if e.is_rejection() && e.reason().starts_with("not finitely determined") => {}
            Err(e) => return Err(format!("{g}: wrong rejection `{e}`")),
            Ok(_) => return Err(format!("{g}: accepted")),
        }
    }
    let n = table_entries().len();
    for e in table_entries() {
        run(&e.germ)?;
    }
    Ok(format!("{} non-reduced germs rejected, {n} table germs accepted", rejected.len()))
}

fn criterion_6() -> Outcome {
    let germs = corpus_germs();
    for g in &germs {
        let a = run(g)?;
        let q = &a.normal_form.qh;
        let d = lambda_degree(q);
        let qb = q.b as i64;
        let want = Rational::from_integer(BigInt::from(q.d2() as i64 * q.d3() as i64 / qb - q.d2() as i64 - q.d3() as i64 + qb));
        ensure(d == want, || format!("{g}: lambda degree {d} vs {want}"))?;
        let deg = check_lambda_type(&a.lambda, q).map_err(|e| format!("{g}: {e}"))?;
        ensure(Rational::from_integer(BigInt::from(deg)) == want, || format!("{g}: lambda has degree {deg}"))?;
        let c = &a.curve;
        ensure(expected_r(q, c.s()) == Some(c.r() as i64), || format!("{g}: r = {} vs formula", c.r()))?;
        ensure(s_rule(&a.normal_form) == c.s(), || format!("{g}: s = {} disagrees with the gcd rule", c.s()))?;
        ensure(c.r_i % 2 == 0, || format!("{g}: r_i = {} odd", c.r_i))?;
        ensure(c.r_i + c.r_f == c.r() + c.s(), || format!("{g}: r_i + r_f - s != r"))?;
    }
    Ok(format!("{} germs: lambda type, r formula, s rule, r_i even, r_i + r_f - s = r", germs.len()))
}

// ---- random polynomials ----

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let mut p: i64 = rng.gen_range(-5..=5);
    if p == 0 {
        p = 1;
    }
    Rational::new(BigInt::from(p), BigInt::from(rng.gen_range(1i64..=3)))
}

fn random_poly(rng: &mut ChaCha8Rng, vars: &[&str], terms: usize, max_exp: u32) -> Poly {
    let n = rng.gen_range(1..=terms);
    let t: Vec<(Vec<u32>, Rational)> =
        (0..n).map(|_| (vars.iter().map(|_| rng.gen_range(0..=max_exp)).collect(), small_rational(rng))).collect();
    Poly::from_terms(vars, t)
}

fn nonzero_poly(rng: &mut ChaCha8Rng, vars: &[&str], terms: usize, max_exp: u32) -> Poly {
    loop {
        let p = random_poly(rng, vars, terms, max_exp);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Random polynomial with no constant term.
fn through_origin(rng: &mut ChaCha8Rng, terms: usize, max_exp: u32) -> Poly {
    loop {
        let p = random_poly(rng, &SOURCE_VARS, terms, max_exp);
        let p = &p - &Poly::constant(p.constant_term(), &SOURCE_VARS);
        if !p.is_zero() {
            return p;
        }
    }
}

const RING_SEED: u64 = 0x5eed_0001;
const RES_SEED: u64 = 0x5eed_0002;
const GCD_SEED: u64 = 0x5eed_0003;
const INT_SEED: u64 = 0x5eed_0004;
const CASES: usize = 1000;
const INT_CASES: usize = 200;

fn ring_suite() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(RING_SEED);
    let vars = ["x", "y", "z"];
    for case in 0..CASES {
        let a = random_poly(&mut rng, &vars, 4, 3);
        let b = random_poly(&mut rng, &vars, 4, 3);
        let c = random_poly(&mut rng, &vars, 4, 3);
        let fail = |what: &str| format!("ring case {case}: {what} fails for a = {a}, b = {b}, c = {c}");
        ensure(&a + &b == &b + &a, || fail("a + b = b + a"))?;
        ensure(&a * &b == &b * &a, || fail("ab = ba"))?;
        ensure(&(&a + &b) + &c == &a + &(&b + &c), || fail("additive associativity"))?;
        ensure(&(&a * &b) * &c == &a * &(&b * &c), || fail("multiplicative associativity"))?;
        ensure(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), || fail("distributivity"))?;
        ensure((&a - &a).is_zero(), || fail("a - a = 0"))?;
        ensure(&a * &Poly::one(&vars) == a, || fail("a * 1 = a"))?;
        if !b.is_zero() {
            ensure((&a * &b).exact_div(&b).as_ref() == Ok(&a), || fail("(ab)/b = a"))?;
        }
        let point: HashMap<&str, Rational> = vars.iter().map(|v| (*v, small_rational(&mut rng))).collect();
        let ev = |p: &Poly| p.eval(&point).unwrap();
        ensure(ev(&(&a * &b)) == ev(&a) * ev(&b), || fail("evaluation is multiplicative"))?;
    }
    Ok(())
}

fn y_degree(p: &Poly) -> u32 {
    p.degree_in("y").unwrap_or(0)
}

fn resultant_suite() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(RES_SEED);
    let xy = SOURCE_VARS;
    let y = Poly::var("y", &xy);
    for case in 0..CASES {
        let f = nonzero_poly(&mut rng, &xy, 4, 3);
        let g = nonzero_poly(&mut rng, &xy, 4, 3);
        let h = nonzero_poly(&mut rng, &xy, 3, 2);
        let fail = |what: &str| format!("resultant case {case}: {what} fails for f = {f}, g = {g}, h = {h}");
        let fg = resultant(&f, &g, "y").unwrap();
        let gf = resultant(&g, &f, "y").unwrap();
        let sign = if (y_degree(&f) * y_degree(&g)) % 2 == 1 { -&gf } else { gf.clone() };
        ensure(fg == sign, || fail("Res(f, g) = (-1)^(mn) Res(g, f)"))?;
        let fh_g = resultant(&(&f * &h), &g, "y").unwrap();
        let hg = resultant(&h, &g, "y").unwrap();
        ensure(fh_g == &fg * &hg, || fail("Res(fh, g) = Res(f, g) Res(h, g)"))?;
        // Res(y - phi(x), g) = g(x, phi(x))
        let phi = random_poly(&mut rng, &["x"], 3, 2).with_vars(&["x".into(), "y".into()]).unwrap();
        let lin = &y - &phi;
        let direct = g.substitute(&HashMap::from([("x", Poly::var("x", &xy)), ("y", phi.clone())])).unwrap();
        ensure(resultant(&lin, &g, "y").unwrap() == direct, || fail("Res(y - phi, g) = g(x, phi)"))?;
    }
    Ok(())
}

fn gcd_suite() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(GCD_SEED);
    let xy = SOURCE_VARS;
    for case in 0..CASES {
        let a = nonzero_poly(&mut rng, &xy, 3, 2);
        let b = nonzero_poly(&mut rng, &xy, 3, 2);
        let c = nonzero_poly(&mut rng, &xy, 3, 2);
        let fail = |what: &str| format!("gcd case {case}: {what} fails for a = {a}, b = {b}, c = {c}");
        let (ac, bc) = (&a * &c, &b * &c);
        let g = gcd(&ac, &bc);
        ensure(ac.exact_div(&g).is_ok() && bc.exact_div(&g).is_ok(), || fail("gcd divides both"))?;
        ensure(g.exact_div(&c).is_ok(), || fail("c divides gcd(ac, bc)"))?;
        ensure(g.equals_up_to_unit(&(&gcd(&a, &b) * &c)), || fail("gcd(ac, bc) = c gcd(a, b)"))?;
        ensure(gcd(&a, &b) == gcd(&b, &a), || fail("gcd is symmetric"))?;
        if !c.is_constant() {
            ensure(!is_squarefree(&(&c * &c)), || fail("c^2 is not squarefree"))?;
        }
    }
    Ok(())
}

fn order_x(p: &Poly) -> Option<u64> {
    p.terms().map(|(e, _)| e[0] as u64).min()
}

fn intersection_suite() -> Result<(usize, usize), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(INT_SEED);
    let xy = SOURCE_VARS;
    let (mut additive, mut graphs) = (0, 0);
    let mut attempts = 0;
    while additive < INT_CASES || graphs < INT_CASES {
        attempts += 1;
        ensure(attempts < 20 * INT_CASES, || "too many degenerate random cases".into())?;
        let f = through_origin(&mut rng, 3, 3);
        let g = through_origin(&mut rng, 3, 3);
        let h = through_origin(&mut rng, 3, 2);
        let seed_a = rng.gen::<u64>();
        let seed_b = rng.gen::<u64>();
        let fail = |what: &str| format!("intersection: {what} fails for f = {f}, g = {g}, h = {h}");
        let i = |p: &Poly, q: &Poly, s: u64| intersection_multiplicity(p, q, s);
        match (i(&f, &g, seed_a), i(&f, &h, seed_a), i(&f, &(&g * &h), seed_a)) {
            (Ok(fg), Ok(fh), Ok(fgh)) => {
                ensure(fgh == fg + fh, || fail(&format!("additivity ({fgh} != {fg} + {fh})")))?;
                let again = i(&f, &g, seed_b).map_err(|e| fail(&e.to_string()))?;
                ensure(again == fg, || fail(&format!("two-shear agreement ({again} vs {fg})")))?;
                ensure(i(&g, &f, seed_b) == Ok(fg), || fail("symmetry"))?;
                additive += 1;
            }
            (Err(OracleError::NonIsolated), _, _) | (_, Err(OracleError::NonIsolated), _) => {}
            other => return Err(fail(&format!("unexpected {other:?}"))),
        }
        // along a smooth graph the multiplicity is an order of vanishing
        let phi = random_poly(&mut rng, &["x"], 2, 3);
        let phi = &phi - &Poly::constant(phi.constant_term(), &["x"]);
        let phi = phi.with_vars(&["x".into(), "y".into()]).unwrap();
        let graph = &Poly::var("y", &xy) - &phi;
        let along = g.substitute(&HashMap::from([("x", Poly::var("x", &xy)), ("y", phi)])).unwrap();
        if let Some(k) = order_x(&along) {
            let got = i(&graph, &g, seed_a).map_err(|e| fail(&e.to_string()))?;
            ensure(got == k, || fail(&format!("graph order ({got} vs {k})")))?;
            graphs += 1;
        }
    }
    Ok((additive, graphs))
}

fn milnor_identity() -> Result<usize, String> {
    let germs = corpus_germs();
    for g in &germs {
        let a = analyze(&parse_germ(g).unwrap(), &Options { oracles: false, ..Options::default() }).map_err(|e| e.to_string())?;
        let q = &a.normal_form.qh;
        let want = quasi_homogeneous_milnor(a.lambda_degree as i64, q.a as i64, q.b as i64);
        let got = oracle_mu(&a.lambda, 7).map_err(|e| format!("{g}: {e}"))?;
        ensure(Rational::from_integer(BigInt::from(got)) == want, || format!("{g}: mu = {got}, (D-a)(D-b)/(ab) = {want}"))?;
        let ctx = InvariantContext::new(q, a.curve.s(), a.normal_form.n).unwrap();
        ensure(mond_mu_d(&ctx) == Ok(got as i64), || format!("{g}: closed form disagrees"))?;
        ensure(!want.is_zero() || a.lambda.total_degree() == Some(1), || format!("{g}: mu = 0 but lambda singular"))?;
    }
    Ok(germs.len())
}

fn criterion_7() -> Outcome {
    ring_suite()?;
    resultant_suite()?;
    gcd_suite()?;
    let (additive, graphs) = intersection_suite()?;
    let milnor = milnor_identity()?;
    Ok(format!(
        "ring/resultant/gcd {CASES} cases each (seeds {RING_SEED:#x}, {RES_SEED:#x}, {GCD_SEED:#x}); \
         intersection {additive} additivity+two-shear and {graphs} graph cases (seed {INT_SEED:#x}); \
         Milnor identity on {milnor} lambdas"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("table reproduction", criterion_1),
        ("worked examples", criterion_2),
        ("C7 structure", criterion_3),
        ("formula vs oracle", criterion_4),
        ("determinacy gate", criterion_5),
        ("structural invariants", criterion_6),
        ("property suites", criterion_7),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = std::time::Instant::now();
        match f() {
            Ok(detail) => println!("criterion {} PASS {name}: {detail} [{:.2?}]", k + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {why}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
