//! The end-to-end pipeline: λ_J, determining solver, equivalence classes, invariants,
//! reduction, quadrature and first-integral verification.

use std::collections::BTreeMap;
use std::time::Instant;

use lamsym::expr::{zero_test, Derivation, Expr, ZeroVerdict};
use lamsym::jlm::lambda_from_divergence;
use lamsym::lambda::{determining_residual, equivalence_classes, solve_determining};
use lamsym::parse::{parse_expr_in, parse_ode, Context};
use lamsym::reduce::{
    find_invariants, integrate_pair, invariant_basis, reduce_ode, reduction_basis, FirstIntegral,
    InvariantPair, ReducedVars,
};
use lamsym::{AnsatzBasis, LambdaSymmetry, SecondOrderODE};
use serde::Serialize;

use crate::error::{CliError, Result};

pub const DEFAULT_WINDOW: i32 = 4;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AnalyzeOptions {
    pub window: Option<i32>,
    /// Extra factors for the (τ, η) ansatz, multiplied by every monomial.
    pub hints: Vec<String>,
    /// Extra factors for the invariant ansatz.
    pub invariant_hints: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub tau: String,
    pub eta: String,
    pub lambda: String,
    pub characteristic: String,
    /// Equivalence-class label, in order of first appearance.
    pub class: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairReport {
    pub symmetry: usize,
    pub t1: String,
    pub y1: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedReport {
    pub symmetry: usize,
    pub t1: String,
    pub y1: String,
    /// Names standing for t1 and y1 in `rhs`.
    pub variables: (String, String),
    pub rhs: String,
    pub equation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralReport {
    pub expr: String,
    pub constant: String,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Checks that passed only by the sampled zero test.
    pub probabilistic_zero: Vec<String>,
    pub window: i32,
    pub basis_size: usize,
    pub invariant_basis_size: usize,
    pub notes: Vec<String>,
    pub timings_ms: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub dependent: String,
    pub ode: String,
    pub lambda_j: String,
    pub zero_divergence: bool,
    pub symmetries: Vec<SymmetryReport>,
    pub invariant_pairs: Vec<PairReport>,
    pub reduced_equation: Option<ReducedReport>,
    pub first_integrals: Vec<IntegralReport>,
    pub diagnostics: Diagnostics,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Results kept as expressions for callers that verify further.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub ode: SecondOrderODE,
    pub lambda: Expr,
    pub symmetries: Vec<LambdaSymmetry>,
    pub classes: Vec<usize>,
    pub reduction: Option<(usize, InvariantPair, Expr)>,
    pub integrals: Vec<FirstIntegral>,
    pub report: AnalysisReport,
}

pub fn parse_list(ctx: &Context, items: &[String]) -> Result<Vec<Expr>> {
    items
        .iter()
        .map(|s| parse_expr_in(s, ctx).map_err(CliError::from))
        .collect()
}

pub fn context_for(ode: &SecondOrderODE) -> Context {
    Context::with_dependents(&[ode.dependent().name()])
}

/// Zero test that records sampled verdicts under `label`.
fn verified_zero(e: &Expr, label: &str, flags: &mut Vec<String>) -> Result<bool> {
    match zero_test(e)? {
        ZeroVerdict::Exact(z) => Ok(z),
        ZeroVerdict::Probabilistic => {
            flags.push(label.to_string());
            Ok(true)
        }
    }
}

fn elapsed_ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

pub fn run(ode_text: &str, opts: &AnalyzeOptions) -> Result<Analysis> {
    let start = Instant::now();
    let mut timings = BTreeMap::new();
    let mut flags = Vec::new();
    let mut notes = Vec::new();
    let ode = parse_ode(ode_text)?;
    let ctx = context_for(&ode);
    let hints = parse_list(&ctx, &opts.hints)?;
    let mut inv_hints = hints.clone();
    inv_hints.extend(parse_list(&ctx, &opts.invariant_hints)?);
    let window = opts.window.unwrap_or(DEFAULT_WINDOW);

    let lj = lambda_from_divergence(&ode);
    if lj.zero_divergence {
        notes.push("zero divergence: searching point symmetries with λ = 0".into());
    }
    let basis = AnsatzBasis::default_for(&ode, window, &hints);
    let t = Instant::now();
    let symmetries = solve_determining(&ode, &lj.lambda, &basis)?;
    timings.insert("solve_determining".into(), elapsed_ms(t));
    for (k, s) in symmetries.iter().enumerate() {
        let r = determining_residual(&ode, &s.field, &s.lambda)?;
        if !verified_zero(&r, &format!("symmetry {k} residual"), &mut flags)? {
            return Err(CliError::Verification(format!("symmetry {k} has a nonzero residual")));
        }
    }
    let t = Instant::now();
    let classes = equivalence_classes(&ode, &symmetries)?;
    timings.insert("equivalence".into(), elapsed_ms(t));

    let t = Instant::now();
    let ib = invariant_basis(&ode, &inv_hints);
    let mut pairs_report = Vec::new();
    let mut reduction = None;
    let mut integrals = Vec::new();
    for (k, s) in symmetries.iter().enumerate() {
        let pairs = match find_invariants(&ode, s, &ib) {
            Ok(p) => p,
            Err(e) => {
                notes.push(format!("symmetry {k}: {e}"));
                continue;
            }
        };
        pairs_report.push(PairReport {
            symmetry: k,
            t1: pairs[0].t1.to_string(),
            y1: pairs[0].y1.to_string(),
        });
        if reduction.is_some() {
            continue;
        }
        for p in &pairs {
            let vars = ReducedVars::for_pair(&ode, p);
            let Ok(g) = reduce_ode(&ode, p, &reduction_basis(&ode, &vars)) else {
                continue;
            };
            let Ok(fi) = integrate_pair(&ode, p, &g) else {
                continue;
            };
            let d = ode.field().apply(&fi.i);
            if verified_zero(&d, &format!("first integral from symmetry {k}"), &mut flags)? {
                reduction = Some((k, p.clone(), g));
                integrals.push(fi);
                break;
            }
        }
        if reduction.is_none() {
            notes.push(format!("symmetry {k}: no invariant pair reduced to a supported quadrature"));
        }
    }
    timings.insert("reduction".into(), elapsed_ms(t));
    timings.insert("total".into(), elapsed_ms(start));

    let reduced_equation = reduction.as_ref().map(|(k, p, g)| {
        let vars = ReducedVars::for_pair(&ode, p);
        let (tv, yv) = (vars.t.to_string(), vars.y.to_string());
        ReducedReport {
            symmetry: *k,
            t1: p.t1.to_string(),
            y1: p.y1.to_string(),
            equation: format!("d{yv}/d{tv} = {g}"),
            variables: (tv, yv),
            rhs: g.to_string(),
        }
    });
    let report = AnalysisReport {
        dependent: ode.dependent().name().to_string(),
        ode: format!("{}'' = {}", ode.dependent().name(), ode.phi()),
        lambda_j: lj.lambda.to_string(),
        zero_divergence: lj.zero_divergence,
        symmetries: symmetries
            .iter()
            .zip(&classes)
            .map(|(s, &class)| SymmetryReport {
                tau: s.field.tau.to_string(),
                eta: s.field.eta.to_string(),
                lambda: s.lambda.to_string(),
                characteristic: s.q.to_string(),
                class,
            })
            .collect(),
        invariant_pairs: pairs_report,
        reduced_equation,
        first_integrals: integrals
            .iter()
            .map(|fi| IntegralReport {
                expr: fi.i.to_string(),
                constant: fi.constant_name.clone(),
                verified: true,
            })
            .collect(),
        diagnostics: Diagnostics {
            probabilistic_zero: flags,
            window,
            basis_size: basis.len(),
            invariant_basis_size: ib.len(),
            notes,
            timings_ms: timings,
        },
    };
    Ok(Analysis {
        ode,
        lambda: lj.lambda,
        symmetries,
        classes,
        reduction,
        integrals,
        report,
    })
}

pub fn cmd_analyze(ode_text: &str, opts: &AnalyzeOptions) -> Result<AnalysisReport> {
    Ok(run(ode_text, opts)?.report)
}

/// Human-readable summary of a report.
pub fn render_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("ode: {}\n", r.ode));
    out.push_str(&format!("lambda_J = {}", r.lambda_j));
    if r.zero_divergence {
        out.push_str("  (zero divergence)");
    }
    out.push('\n');
    for (k, s) in r.symmetries.iter().enumerate() {
        out.push_str(&format!(
            "symmetry {k} [class {}]: tau = {}, eta = {}\n",
            s.class, s.tau, s.eta
        ));
    }
    for p in &r.invariant_pairs {
        out.push_str(&format!("invariants of symmetry {}: t1 = {}, y1 = {}\n", p.symmetry, p.t1, p.y1));
    }
    if let Some(red) = &r.reduced_equation {
        out.push_str(&format!(
            "reduced along symmetry {}: {}  with t1 = {}, y1 = {}\n",
            red.symmetry, red.equation, red.t1, red.y1
        ));
    }
    for i in &r.first_integrals {
        out.push_str(&format!("first integral: {} = {}\n", i.expr, i.constant));
    }
    for n in &r.diagnostics.notes {
        out.push_str(&format!("note: {n}\n"));
    }
    out
}
