//! The non-pipeline commands and the corpus runner.

use lamsym::ansatz::in_span;
use lamsym::expr::{function_specialization, is_zero, Derivation, Expr};
use lamsym::jlm::{divergence, multiplier, raise_order_2d};
use lamsym::lambda::{equivalence_residual, is_equivalent, PointField};
use lamsym::parse::{parse_expr_in, parse_ode, parse_system, Context};
use lamsym::reduce::{
    check_first_integral, independent, numeric_drift, reduce_ode, reduction_basis, FirstIntegral,
    InvariantPair, ReducedVars,
};
use lamsym::{LambdaSymmetry, SecondOrderODE, Symbol};
use rayon::prelude::*;
use serde::Serialize;

use crate::analyze::{context_for, parse_list, run, AnalyzeOptions};
use crate::corpus::{self, split_top_level, CorpusEntry};
use crate::error::{CliError, Result};

/// Relative drift allowed at step 10⁻³ over one time unit.
pub const DRIFT_TOLERANCE: f64 = 1e-6;
pub const DRIFT_STEP: f64 = 1e-3;
/// Coarse step pair for the convergence-order check; at 10⁻³ the drift sits at roundoff.
pub const CONVERGENCE_STEPS: (f64, f64) = (0.05, 0.025);
pub const CONVERGENCE_RATIO: f64 = 8.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivReport {
    pub equivalent: bool,
    pub residual: String,
}

/// Parses `tau, eta, lambda` and certifies it for `ode`.
pub fn parse_symmetry(ode: &SecondOrderODE, ctx: &Context, text: &str) -> Result<LambdaSymmetry> {
    let parts = split_top_level(text);
    let [tau, eta, lambda] = <[String; 3]>::try_from(parts)
        .map_err(|_| CliError::BadArgument(format!("`{text}` is not `tau, eta, lambda`")))?;
    let p = |s: &str| parse_expr_in(s, ctx).map_err(CliError::from);
    let field = PointField::new(p(&tau)?, p(&eta)?)?;
    Ok(LambdaSymmetry::certify(ode, field, p(&lambda)?)?)
}

pub fn cmd_equiv(ode_text: &str, s1: &str, s2: &str) -> Result<EquivReport> {
    let ode = parse_ode(ode_text)?;
    let ctx = context_for(&ode);
    let a = parse_symmetry(&ode, &ctx, s1)?;
    let b = parse_symmetry(&ode, &ctx, s2)?;
    Ok(EquivReport {
        equivalent: is_equivalent(&ode, &a, &b)?,
        residual: equivalence_residual(&ode, &a, &b).to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralCheck {
    pub integral: String,
    pub total_derivative: String,
    pub verified: bool,
}

pub fn cmd_check_integral(ode_text: &str, expr: &str) -> Result<IntegralCheck> {
    let ode = parse_ode(ode_text)?;
    let i = parse_expr_in(expr, &context_for(&ode))?;
    let fi = FirstIntegral::new(i);
    Ok(IntegralCheck {
        integral: fi.i.to_string(),
        total_derivative: ode.field().apply(&fi.i).to_string(),
        verified: check_first_integral(&ode, &fi)?,
    })
}

/// `name=expr`: a function name binds the function and its derivatives, anything else a
/// parameter.
pub fn parse_binding(
    ode: &SecondOrderODE,
    extra: &Expr,
    ctx: &Context,
    text: &str,
) -> Result<Vec<(Symbol, Expr)>> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| CliError::BadArgument(format!("binding `{text}` is not `name=expr`")))?;
    let name = name.trim();
    let g = parse_expr_in(value.trim(), ctx)?;
    let is_function = ode
        .phi()
        .symbols()
        .into_iter()
        .chain(extra.symbols())
        .any(|s| s.is_function() && s.name() == name);
    if is_function {
        let order = ode
            .phi()
            .symbols()
            .into_iter()
            .chain(extra.symbols())
            .filter(|s| s.is_function() && s.name() == name)
            .filter_map(|s| s.order())
            .max()
            .unwrap_or(0);
        Ok(function_specialization(name, &g, order + 1))
    } else {
        Ok(vec![(Symbol::parameter(name), g)])
    }
}

pub fn cmd_drift(
    ode_text: &str,
    expr: &str,
    bindings: &[String],
    ic: (f64, f64, f64),
    t_end: f64,
    step: f64,
) -> Result<f64> {
    let ode = parse_ode(ode_text)?;
    let ctx = context_for(&ode);
    let i = parse_expr_in(expr, &ctx)?;
    let mut bound = Vec::new();
    for b in bindings {
        bound.extend(parse_binding(&ode, &i, &ctx, b)?);
    }
    Ok(numeric_drift(&ode, &FirstIntegral::new(i), &bound, ic, t_end, step)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplierReport {
    pub divergence: String,
    pub m: String,
    pub omega: String,
    pub zero_divergence: bool,
}

pub fn cmd_multiplier(system_text: &str) -> Result<MultiplierReport> {
    let sys = parse_system(system_text)?;
    let m = multiplier(&sys);
    Ok(MultiplierReport {
        divergence: m.divergence.to_string(),
        m: m.m.to_string(),
        omega: m.omega.to_string(),
        zero_divergence: m.zero_divergence,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RaiseReport {
    pub ode: String,
    pub divergence: String,
}

pub fn system_context(names: &[Symbol]) -> Context {
    let refs: Vec<&str> = names.iter().map(|s| s.name()).collect();
    Context::with_dependents(&refs)
}

pub fn cmd_raise(system_text: &str, solve_for: &str, inverse: &str) -> Result<RaiseReport> {
    let sys = parse_system(system_text)?;
    let target = sys
        .variables()
        .iter()
        .find(|v| v.name() == solve_for)
        .cloned()
        .ok_or_else(|| CliError::BadArgument(format!("`{solve_for}` is not a system variable")))?;
    let inv = parse_expr_in(inverse, &system_context(sys.variables()))?;
    let ode = raise_order_2d(&sys, &target, &inv)?;
    Ok(RaiseReport {
        ode: format!("{}'' = {}", ode.dependent().name(), ode.phi()),
        divergence: divergence(&ode.system()).to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryOutcome {
    pub id: String,
    pub checks: Vec<Check>,
}

impl EntryOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(checks: &mut Vec<Check>, name: &str, outcome: Result<(bool, String)>) {
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("{}: {e}", e.code())));
    checks.push(Check {
        name: name.into(),
        passed,
        detail,
    });
}

/// Pair, reduced right-hand side and the symbols it is written in, from corpus strings.
pub fn reduction_inputs(
    ode: &SecondOrderODE,
    ctx: &Context,
    red: &corpus::Reduction,
) -> Result<(InvariantPair, Expr)> {
    let pair = InvariantPair {
        t1: parse_expr_in(&red.t1, ctx)?,
        y1: parse_expr_in(&red.y1, ctx)?,
    };
    let g = parse_expr_in(&red.rhs, ctx)?;
    let _ = ReducedVars::for_pair(ode, &pair);
    Ok((pair, g))
}

/// Maximum drift at the production step and the drift ratio over one step halving.
pub fn drift_profile(
    ode: &SecondOrderODE,
    i: &Expr,
    ctx: &Context,
    case: &corpus::DriftCase,
) -> Result<(f64, f64)> {
    let mut bound = Vec::new();
    for b in &case.bindings {
        bound.extend(parse_binding(ode, i, ctx, b)?);
    }
    let fi = FirstIntegral::new(i.clone());
    let t_end = case.ic.0 + 1.0;
    let d = numeric_drift(ode, &fi, &bound, case.ic, t_end, DRIFT_STEP)?;
    let coarse = numeric_drift(ode, &fi, &bound, case.ic, t_end, CONVERGENCE_STEPS.0)?;
    let fine = numeric_drift(ode, &fi, &bound, case.ic, t_end, CONVERGENCE_STEPS.1)?;
    Ok((d, coarse / fine))
}

pub fn run_entry(entry: &CorpusEntry) -> EntryOutcome {
    let mut checks = Vec::new();
    let opts = AnalyzeOptions {
        window: Some(entry.window),
        hints: entry.basis_hints.clone(),
        invariant_hints: entry.invariant_hints.clone(),
    };
    let analysis = match run(&entry.ode_text, &opts) {
        Ok(a) => a,
        Err(e) => {
            check(&mut checks, "pipeline", Err(e));
            return EntryOutcome {
                id: entry.id.clone(),
                checks,
            };
        }
    };
    let ode = &analysis.ode;
    let ctx = context_for(ode);
    let p = |s: &str| parse_expr_in(s, &ctx).map_err(CliError::from);

    check(&mut checks, "lambda", (|| {
        let expected = p(&entry.expected_lambda)?;
        Ok((is_zero(&(&analysis.lambda - &expected))?, analysis.lambda.to_string()))
    })());

    check(&mut checks, "symmetries", (|| {
        let span: Vec<Vec<Expr>> = analysis
            .symmetries
            .iter()
            .map(|s| vec![s.field.tau.clone(), s.field.eta.clone()])
            .collect();
        let mut ok = !entry.expected_symmetries.is_empty();
        for (tau, eta) in &entry.expected_symmetries {
            ok &= in_span(&span, &[p(tau)?, p(eta)?]);
        }
        Ok((ok, format!("{} found", span.len())))
    })());

    check(&mut checks, "equivalence", (|| {
        let mut known = Vec::new();
        for (tau, eta) in &entry.expected_symmetries {
            known.push(LambdaSymmetry::certify(
                ode,
                PointField::new(p(tau)?, p(eta)?)?,
                analysis.lambda.clone(),
            )?);
        }
        for k in &entry.equivalent {
            known.push(parse_symmetry(ode, &ctx, &format!("{}, {}, {}", k.tau, k.eta, k.lambda))?);
        }
        let mut ok = true;
        let mut count = 0;
        for (i, a) in known.iter().enumerate() {
            for b in &known[i + 1..] {
                ok &= is_equivalent(ode, a, b)?;
                count += 1;
            }
            let matched = analysis.symmetries.iter().map(|s| is_equivalent(ode, a, s));
            let mut any = false;
            for m in matched {
                any |= m?;
            }
            ok &= any;
        }
        Ok((ok, format!("{count} pairwise checks")))
    })());

    if !entry.expected_integrals.is_empty() {
        check(&mut checks, "integrals", (|| {
            let mut ok = true;
            let expected: Vec<Expr> = parse_list(&ctx, &entry.expected_integrals)?;
            for i in &expected {
                ok &= check_first_integral(ode, &FirstIntegral::new(i.clone()))?;
            }
            let found = analysis.integrals.first().ok_or_else(|| {
                CliError::Verification("pipeline produced no first integral".into())
            })?;
            let pair = InvariantPair {
                t1: found.i.clone(),
                y1: expected[0].clone(),
            };
            ok &= !independent(ode, &pair)?;
            Ok((ok, found.i.to_string()))
        })());
    }

    if let Some(red) = &entry.reduction {
        check(&mut checks, "reduction", (|| {
            let (pair, g) = reduction_inputs(ode, &ctx, red)?;
            let vars = ReducedVars::for_pair(ode, &pair);
            let got = reduce_ode(ode, &pair, &reduction_basis(ode, &vars))?;
            Ok((is_zero(&(&got - &g))?, format!("d{}/d{} = {got}", vars.y, vars.t)))
        })());
    }

    if let (Some(case), Some(i)) = (&entry.drift, entry.expected_integrals.first()) {
        check(&mut checks, "drift", (|| {
            let (d, ratio) = drift_profile(ode, &p(i)?, &ctx, case)?;
            Ok((
                d < DRIFT_TOLERANCE && ratio >= CONVERGENCE_RATIO,
                format!("drift {d:.2e}, halving ratio {ratio:.1}"),
            ))
        })());
    }

    EntryOutcome {
        id: entry.id.clone(),
        checks,
    }
}

/// Runs one entry or all of them, in id order.
pub fn cmd_corpus(id: Option<&str>) -> Result<Vec<EntryOutcome>> {
    let entries = match id {
        Some(id) => vec![corpus::entry(id)?],
        None => corpus::entries()?,
    };
    Ok(entries.par_iter().map(run_entry).collect())
}

pub fn render_table(outcomes: &[EntryOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        out.push_str(&format!(
            "{:<20} {}\n",
            o.id,
            if o.passed() { "PASS" } else { "FAIL" }
        ));
        for c in &o.checks {
            out.push_str(&format!(
                "    {:<12} {:<4} {}\n",
                c.name,
                if c.passed { "ok" } else { "FAIL" },
                c.detail
            ));
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    out.push_str(&format!("{passed}/{} pass\n", outcomes.len()));
    out
}
