//! End-to-end analysis of one germ.

use thiserror::Error;

use crate::double_points::{
    branch_images, check_finitely_determined, check_lambda_type, classify_branches, compute_lambda,
    divided_differences, factor_branches, s_rule, BranchImage, DividedDifferencePair, DoublePointCurve,
    DoublePointError,
};
use crate::germ::{corank, detect_qh_type, parse_germ, GermError, MapGerm, QhType};
use crate::invariants::{assemble_report, Counts, InvariantContext, InvariantError, InvariantReport, OracleValues};
use crate::normal_form::{extract_nm_alpha, to_normal_form, NormalForm};
use crate::oracles::{oracle_c, oracle_multiplicity_image, oracle_mu, OracleError, DEFAULT_SEED};
use crate::poly::Poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub oracles: bool,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { oracles: true, seed: DEFAULT_SEED }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    /// The input is outside the class the formulas apply to.
    #[error(transparent)]
    Rejected(#[from] GermError),
    #[error("double point analysis failed: {0}")]
    DoublePoints(#[from] DoublePointError),
    #[error(transparent)]
    Invariants(#[from] InvariantError),
    #[error("oracle failed: {0}")]
    Oracle(#[from] OracleError),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl AnalysisError {
    pub fn is_rejection(&self) -> bool {
        matches!(self, AnalysisError::Rejected(_))
    }

    /// Short machine-readable reason.
    pub fn reason(&self) -> String {
        match self {
            AnalysisError::Rejected(e) => e.to_string(),
            other => other.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub input: MapGerm,
    pub input_type: QhType,
    pub normal_form: NormalForm,
    pub divided_differences: DividedDifferencePair,
    pub lambda: Poly,
    /// Weighted degree of `lambda`.
    pub lambda_degree: u64,
    pub curve: DoublePointCurve,
    pub images: Vec<BranchImage>,
    pub invariants: InvariantReport,
    /// Seed of the shears used by the oracles, when they ran.
    pub oracle_seed: Option<u64>,
}

pub fn analyze_str(text: &str, opts: &Options) -> Result<Analysis, AnalysisError> {
    analyze(&parse_germ(text)?, opts)
}

pub fn analyze(g: &MapGerm, opts: &Options) -> Result<Analysis, AnalysisError> {
    let k = corank(g);
    if k != 1 {
        return Err(GermError::NotCorankOne(k).into());
    }
    let input_type = detect_qh_type(g)?;
    let nf = to_normal_form(g, input_type)?;
    let dd = divided_differences(&nf)?;
    let lambda = match compute_lambda(&dd) {
        Err(DoublePointError::ZeroResultant) => {
            return Err(GermError::NotFinitelyDetermined("lambda vanishes identically".into()).into())
        }
        other => other?,
    };
    if !check_finitely_determined(&lambda) {
        return Err(GermError::NotFinitelyDetermined("lambda not squarefree".into()).into());
    }
    let dump = || format!("normal form {}, lambda {}", nf.germ, lambda);
    // lambda is authoritative; the normal-form shortcut must agree with it
    extract_nm_alpha(&nf).map_err(|e| AnalysisError::Inconsistent(format!("{e} although lambda is squarefree; {}", dump())))?;
    let lambda_degree = check_lambda_type(&lambda, &nf.qh)?;
    let factored = factor_branches(&lambda, &nf.qh)?;
    let predicted_s = s_rule(&nf);
    if predicted_s != factored.s {
        return Err(AnalysisError::Inconsistent(format!(
            "s = {} from lambda but {predicted_s} from the gcd rule; {}",
            factored.s,
            dump()
        )));
    }
    let curve = classify_branches(factored, &nf)?;
    let images = branch_images(&curve, &nf)?;
    let ctx = InvariantContext::new(&nf.qh, curve.s(), nf.n)?;
    let oracles = if opts.oracles {
        OracleValues {
            c: Some(oracle_c(&nf, opts.seed)? as i64),
            mu: Some(oracle_mu(&lambda, opts.seed)? as i64),
            m: Some(oracle_multiplicity_image(&images) as i64),
        }
    } else {
        OracleValues::default()
    };
    let counts = Counts { r_i: curve.r_i, r_f: curve.r_f, r: curve.r(), s: curve.s() };
    let invariants = assemble_report(&ctx, counts, oracles, &dump())?;
    Ok(Analysis {
        input: g.clone(),
        input_type,
        divided_differences: dd,
        lambda,
        lambda_degree,
        curve,
        images,
        invariants,
        oracle_seed: opts.oracles.then_some(opts.seed),
        normal_form: nf,
    })
}
