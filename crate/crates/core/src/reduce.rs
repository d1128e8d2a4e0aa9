//! First-order invariants of λ-prolonged fields, order reduction, quadrature of the reduced
//! equation, and symbolic and numeric first-integral checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::ansatz::{combine, rational_relations};
use crate::expr::{
    diff_partial, is_zero, substitute, Atom, AtomKind, CompiledExpr, Derivation, EvalError,
    Expr, ExprError, Field, Poly, Symbol,
};
use crate::jlm::SecondOrderODE;
use crate::lambda::{harvest, lambda_prolong, AnsatzBasis, LambdaSymmetry};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReduceError {
    #[error("fewer than two independent invariants in the basis")]
    InsufficientBasis,
    #[error("the reduced equation is not expressible in the basis")]
    NoMatchInBasis,
    #[error("reduced equation is outside the supported quadrature forms")]
    NotQuadrable,
    #[error("pole encountered at t = {0}")]
    PoleEncountered(f64),
    #[error("non-finite state at t = {0}")]
    NonFiniteState(f64),
    #[error("no numeric value for `{0}`")]
    Unbound(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

impl ReduceError {
    pub fn code(&self) -> &'static str {
        match self {
            ReduceError::InsufficientBasis => "InsufficientBasis",
            ReduceError::NoMatchInBasis => "NoMatchInBasis",
            ReduceError::NotQuadrable => "NotQuadrable",
            ReduceError::PoleEncountered(_) => "PoleEncountered",
            ReduceError::NonFiniteState(_) => "NonFiniteState",
            ReduceError::Unbound(_) => "Unbound",
            ReduceError::Expr(e) => e.code(),
        }
    }
}

/// New independent variable `t1` and first-order invariant `y1`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantPair {
    pub t1: Expr,
    pub y1: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FirstIntegral {
    pub i: Expr,
    pub constant_name: String,
}

impl FirstIntegral {
    pub fn new(i: Expr) -> Self {
        FirstIntegral {
            i,
            constant_name: "a1".into(),
        }
    }
}

/// The symbols standing for t1 and y1 in a reduced equation dy1/dt1 = G.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedVars {
    pub t: Symbol,
    pub y: Symbol,
}

impl ReducedVars {
    /// t1 = t keeps the original independent variable.
    pub fn for_pair(ode: &SecondOrderODE, pair: &InvariantPair) -> Self {
        let t = if pair.t1.as_symbol() == Some(&ode.t()) {
            ode.t()
        } else {
            Symbol::parameter("t1")
        };
        ReducedVars {
            t,
            y: Symbol::parameter("y1"),
        }
    }

    pub fn back(&self, pair: &InvariantPair) -> Vec<(Symbol, Expr)> {
        vec![(self.t.clone(), pair.t1.clone()), (self.y.clone(), pair.y1.clone())]
    }
}

/// prX = τ∂_t + η∂_y + η⁽¹⁾∂_{y'}.
pub fn prolonged_field(ode: &SecondOrderODE, s: &LambdaSymmetry) -> Field {
    let eta1 = lambda_prolong(&s.field, &s.lambda, 1, ode).remove(0);
    Field {
        dt: s.field.tau.clone(),
        components: vec![(ode.y(), s.field.eta.clone()), (ode.yp(), eta1)],
    }
}

/// t^a·y^b·y'^c for |a|, |b| ≤ 2 and 0 ≤ c ≤ 2, times each factor in {1} ∪ kernel atoms and
/// functions of φ ∪ parameter multiples of kernel atoms ∪ `hints`; the constant 1 is excluded.
pub fn invariant_basis(ode: &SecondOrderODE, hints: &[Expr]) -> AnsatzBasis {
    let t = Expr::symbol(ode.t());
    let y = Expr::symbol(ode.y());
    let yp = Expr::symbol(ode.yp());
    let mut monos = Vec::new();
    for c in 0..=2i64 {
        for b in -2..=2i64 {
            for a in -2..=2i64 {
                let m = &(&t.powi(a).unwrap() * &y.powi(b).unwrap()) * &yp.powi(c).unwrap();
                monos.push(m);
            }
        }
    }
    let harvested = harvest(ode);
    let params = parameters(ode);
    let mut factors = vec![Expr::one()];
    factors.extend(harvested.iter().cloned());
    for h in harvested.iter().filter(|h| h.as_symbol().is_none()) {
        factors.extend(params.iter().map(|p| p * h));
    }
    factors.extend(hints.iter().cloned());
    let gens = factors
        .iter()
        .flat_map(|f| monos.iter().map(move |m| m * f))
        .filter(|g| !g.is_constant());
    AnsatzBasis::new(gens, 2)
}

fn parameters(ode: &SecondOrderODE) -> Vec<Expr> {
    ode.phi()
        .symbols()
        .into_iter()
        .filter(|s| s.is_parameter())
        .map(Expr::symbol)
        .collect()
}

fn complexity(e: &Expr) -> (usize, usize, String) {
    let s = e.to_string();
    (e.numer_poly().len() + e.denom_poly().len(), s.len(), s)
}

/// Scales `x` so that the first basis generator satisfying `pick` with nonzero coefficient
/// gets coefficient 1.
fn normalized(x: &[BigRational], gens: &[Expr], pick: impl Fn(&Expr) -> bool) -> Expr {
    let k = (0..x.len()).find(|&k| !x[k].is_zero() && pick(&gens[k]));
    let s = k.map(|k| x[k].clone()).unwrap_or_else(BigRational::one);
    let v: Vec<BigRational> = x.iter().map(|c| c / &s).collect();
    combine(&v, gens)
}

/// True when some 2×2 minor of ∂(t1, y1)/∂(t, y, y') is nonzero.
pub fn independent(ode: &SecondOrderODE, pair: &InvariantPair) -> Result<bool, ExprError> {
    let vars = [ode.t(), ode.y(), ode.yp()];
    let g1: Vec<Expr> = vars.iter().map(|v| diff_partial(&pair.t1, v)).collect();
    let g2: Vec<Expr> = vars.iter().map(|v| diff_partial(&pair.y1, v)).collect();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let m = &(&g1[i] * &g2[j]) - &(&g1[j] * &g2[i]);
        if !is_zero(&m)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Net exponent of `t` in the monomial contents of numerator and denominator.
fn t_exponent(e: &Expr, t: &Symbol) -> i64 {
    let a = Atom::symbol(t.clone());
    let up = e.numer_poly().monomial_content().exponent(&a) as i64;
    let down = e.denom_poly().monomial_content().exponent(&a) as i64;
    up - down
}

const MAX_PAIRS: usize = 32;

/// Invariants of prX in the span of `basis`, paired as (order-0 or t, y'-dependent) and
/// ordered from simplest to most complex.
pub fn find_invariants(
    ode: &SecondOrderODE,
    s: &LambdaSymmetry,
    basis: &AnsatzBasis,
) -> Result<Vec<InvariantPair>, ReduceError> {
    let pr = prolonged_field(ode, s);
    let gens = basis.generators();
    let cols: Vec<Vec<Expr>> = gens.par_iter().map(|g| vec![pr.apply(g)]).collect();
    let relations = rational_relations(&cols);
    let yp = ode.yp();
    let y = ode.y();
    let mut order0 = Vec::new();
    let mut order1 = Vec::new();
    for x in &relations {
        let inv = combine(x, gens);
        if inv.is_constant() {
            continue;
        }
        if inv.contains_symbol(&yp) {
            order1.push(normalized(x, gens, |g| g.contains_symbol(&yp)));
        } else {
            order0.push(normalized(x, gens, |g| g.contains_symbol(&y)));
        }
    }
    let t = Expr::symbol(ode.t());
    if s.field.tau.is_zero() {
        if !order0.contains(&t) {
            order0.push(t.clone());
        }
        // t is invariant: strip powers of t from ∂y1/∂y' so y1 is not a t-multiple of a
        // simpler invariant.
        for y1 in order1.iter_mut() {
            let c = diff_partial(y1, &yp);
            let k = t_exponent(&c, &ode.t());
            if k != 0 {
                *y1 = &*y1 * &t.powi(-k).expect("t is nonzero");
            }
        }
        order1.dedup();
    }
    order0.sort_by_cached_key(complexity);
    order1.sort_by_cached_key(complexity);
    order1.dedup();
    let mut pairs = Vec::new();
    let mut candidates: Vec<(usize, InvariantPair)> = Vec::new();
    for (i, t1) in order0.iter().enumerate() {
        for (j, y1) in order1.iter().enumerate() {
            candidates.push((
                i + j,
                InvariantPair {
                    t1: t1.clone(),
                    y1: y1.clone(),
                },
            ));
        }
    }
    candidates.sort_by_key(|(rank, _)| *rank);
    for (_, p) in candidates {
        if pairs.len() == MAX_PAIRS {
            break;
        }
        if independent(ode, &p)? {
            pairs.push(p);
        }
    }
    if pairs.is_empty() {
        return Err(ReduceError::InsufficientBasis);
    }
    Ok(pairs)
}

/// T^a·Y^b for −2 ≤ a ≤ 6, 0 ≤ b ≤ 2, times {1} ∪ parameters ∪ squared parameters, and
/// times the functions of φ when t1 = t.
pub fn reduction_basis(ode: &SecondOrderODE, vars: &ReducedVars) -> Vec<Expr> {
    let tt = Expr::symbol(vars.t.clone());
    let yy = Expr::symbol(vars.y.clone());
    let params = parameters(ode);
    let mut factors = vec![Expr::one()];
    factors.extend(params.iter().cloned());
    factors.extend(params.iter().map(|p| p * p));
    if vars.t == ode.t() {
        factors.extend(
            harvest(ode)
                .into_iter()
                .filter(|h| h.as_symbol().map(|s| s.is_function()).unwrap_or(false)),
        );
    }
    let mut gens = Vec::new();
    for f in &factors {
        for b in 0..=2i64 {
            for a in -2..=6i64 {
                gens.push(&(&tt.powi(a).unwrap() * &yy.powi(b).unwrap()) * f);
            }
        }
    }
    AnsatzBasis::new(gens, 6).generators().to_vec()
}

/// G(t1, y1) with D_t(y1) = G·D_t(t1) on-shell, from the ansatz G = Num/Den.
pub fn reduce_ode(
    ode: &SecondOrderODE,
    pair: &InvariantPair,
    rhs_basis: &[Expr],
) -> Result<Expr, ReduceError> {
    let vars = ReducedVars::for_pair(ode, pair);
    let back = vars.back(pair);
    let a = ode.field();
    let dt1 = a.apply(&pair.t1);
    let dy1 = a.apply(&pair.y1);
    let n = rhs_basis.len();
    let lifted: Vec<Expr> = rhs_basis
        .par_iter()
        .map(|b| substitute(b, &back))
        .collect::<Result<_, _>>()?;
    let mut cols: Vec<Vec<Expr>> = lifted.iter().map(|b| vec![-&(b * &dt1)]).collect();
    cols.extend(lifted.iter().map(|b| vec![b * &dy1]));
    for x in rational_relations(&cols) {
        if x[n..].iter().all(Zero::is_zero) {
            continue;
        }
        let den_lifted = combine(&x[n..], &lifted);
        if is_zero(&den_lifted)? {
            continue;
        }
        let num = combine(&x[..n], rhs_basis);
        let den = combine(&x[n..], rhs_basis);
        let g = num.try_div(&den)?;
        let check = &dy1 - &(&substitute(&g, &back)? * &dt1);
        if is_zero(&check)? {
            return Ok(g);
        }
    }
    Err(ReduceError::NoMatchInBasis)
}

/// A Laurent polynomial in `x` as (exponent, coefficient) pairs; coefficients are free of x.
fn laurent(e: &Expr, x: &Symbol) -> Option<Vec<(i64, Expr)>> {
    let xa = Atom::symbol(x.clone());
    let den = e.denom_poly();
    if den.len() != 1 {
        return None;
    }
    let (dm, dc) = &den.terms()[0];
    let (dk, drest) = dm.split(&xa);
    let dexpr = Expr::from_poly(Poly::term(drest, dc.clone()));
    let mut out: Vec<(i64, Expr)> = Vec::new();
    for (m, c) in e.numer_poly().terms() {
        let (k, rest) = m.split(&xa);
        let coef = Expr::from_poly(Poly::term(rest, c.clone())).try_div(&dexpr).ok()?;
        if coef.contains_symbol(x) {
            return None;
        }
        let exp = k as i64 - dk as i64;
        match out.iter_mut().find(|(e, _)| *e == exp) {
            Some(slot) => slot.1 = &slot.1 + &coef,
            None => out.push((exp, coef)),
        }
    }
    Some(out)
}

fn power(x: &Expr, k: i64) -> Expr {
    x.powi(k).expect("nonzero base")
}

/// ∫ of a Laurent polynomial in x; x^-1 integrates to log x.
fn integrate_laurent(e: &Expr, x: &Symbol) -> Option<Expr> {
    let xe = Expr::symbol(x.clone());
    let mut acc = Expr::zero();
    for (k, c) in laurent(e, x)? {
        let term = if k == -1 {
            &c * &Expr::log(&xe).ok()?
        } else {
            (&c * &power(&xe, k + 1)).scale(&BigRational::new(BigInt::one(), BigInt::from(k + 1)))
        };
        acc = &acc + &term;
    }
    Some(acc)
}

/// ∫ p(x)·exp(a·x) dx for a polynomial p with nonnegative exponents and constant a ≠ 0.
fn integrate_poly_exp(p: &Expr, a: &Expr, x: &Symbol) -> Option<Expr> {
    let xe = Expr::symbol(x.clone());
    let ea = Expr::exp(&(a * &xe));
    let mut acc = Expr::zero();
    for (n, c) in laurent(p, x)? {
        if n < 0 {
            return None;
        }
        // ∫x^n e^{ax} = e^{ax} Σ_j (−1)^j n!/(n−j)! x^{n−j} / a^{j+1}
        let mut falling = BigInt::one();
        for j in 0..=n {
            let sign = if j % 2 == 0 { Expr::one() } else { Expr::int(-1) };
            let coef = Expr::rational(&BigRational::from_integer(falling.clone()));
            let term = (&(&sign * &coef) * &power(&xe, n - j)).try_div(&a.powi(j + 1).ok()?).ok()?;
            acc = &acc + &(&c * &term);
            falling *= BigInt::from(n - j);
        }
    }
    Some(&acc * &ea)
}

fn free_of_all(e: &Expr, syms: &[&Symbol]) -> bool {
    syms.iter().all(|s| e.free_of(s))
}

/// A first integral I(T, Y) of dY/dT = G for G = 0, G linear in Y with Laurent
/// coefficients, or G = H(T)·K(Y) with Laurent H and 1/K.
pub fn quadrature(g: &Expr, vars: &ReducedVars) -> Result<Expr, ReduceError> {
    let (t, y) = (&vars.t, &vars.y);
    let ye = Expr::symbol(y.clone());
    let te = Expr::symbol(t.clone());
    if g.is_zero() {
        return Ok(ye);
    }
    let gy = diff_partial(g, y);
    let gyy = diff_partial(&gy, y);
    if gyy.is_zero() {
        let alpha = gy;
        let beta = g - &(&alpha * &ye);
        if let Some(i) = linear_integral(&alpha, &beta, &te, &ye, t) {
            return Ok(i);
        }
    }
    let gt = diff_partial(g, t);
    let sep = &(g * &diff_partial(&gt, y)) - &(&gt * &diff_partial(g, y));
    if is_zero(&sep)? {
        for y0 in 1..=5 {
            let Ok(h) = substitute(g, &[(y.clone(), Expr::int(y0))]) else {
                continue;
            };
            if h.is_zero() {
                continue;
            }
            let k = g.try_div(&h)?;
            if !k.free_of(t) {
                continue;
            }
            let inv_k = k.recip()?;
            let (Some(iy), Some(it)) = (integrate_laurent(&inv_k, y), integrate_laurent(&h, t))
            else {
                return Err(ReduceError::NotQuadrable);
            };
            return Ok(&iy - &it);
        }
    }
    Err(ReduceError::NotQuadrable)
}

fn linear_integral(alpha: &Expr, beta: &Expr, te: &Expr, ye: &Expr, t: &Symbol) -> Option<Expr> {
    let terms = laurent(alpha, t)?;
    let mut c = Expr::zero();
    let mut big_p = Expr::zero();
    for (k, coef) in terms {
        if k == -1 {
            c = coef;
        } else {
            big_p = &big_p
                + &(&coef * &power(te, k + 1))
                    .scale(&BigRational::new(BigInt::one(), BigInt::from(k + 1)));
        }
    }
    let c_int = c.as_integer().and_then(|n| n.to_i64())?;
    let tpow = power(te, -c_int);
    let mu = &Expr::exp(&-&big_p) * &tpow;
    let rest = &tpow * beta;
    let int_mu_beta = if beta.is_zero() {
        Expr::zero()
    } else if big_p.is_zero() {
        integrate_laurent(&rest, t)?
    } else {
        let lin = laurent(&big_p, t)?;
        if lin.len() != 1 || lin[0].0 != 1 || !free_of_all(&lin[0].1, &[t]) {
            return None;
        }
        integrate_poly_exp(&rest, &-&lin[0].1, t)?
    };
    Some(&(&mu * ye) - &int_mu_beta)
}

/// D_t(i) = 0 with y'' ↦ φ.
pub fn check_first_integral(ode: &SecondOrderODE, i: &FirstIntegral) -> Result<bool, ExprError> {
    is_zero(&ode.field().apply(&i.i))
}

/// The integral of the reduced equation pulled back to (t, y, y').
pub fn integrate_pair(
    ode: &SecondOrderODE,
    pair: &InvariantPair,
    g: &Expr,
) -> Result<FirstIntegral, ReduceError> {
    let vars = ReducedVars::for_pair(ode, pair);
    let i = quadrature(g, &vars)?;
    Ok(FirstIntegral::new(substitute(&i, &vars.back(pair))?))
}

/// Maximum relative drift of a first integral along a fixed-step RK4 trajectory of y'' = φ.
/// Antiderivative markers in `i` are integrated alongside the state from zero.
pub fn numeric_drift(
    ode: &SecondOrderODE,
    i: &FirstIntegral,
    specialization: &[(Symbol, Expr)],
    ic: (f64, f64, f64),
    t_end: f64,
    step: f64,
) -> Result<f64, ReduceError> {
    let phi = substitute(ode.phi(), specialization)?;
    let ie = substitute(&i.i, specialization)?;
    let markers: Vec<Atom> = ie
        .all_atoms()
        .into_iter()
        .filter(|a| matches!(a.kind(), AtomKind::Integral(_)))
        .collect();
    let (t_sym, y_sym, yp_sym) = (ode.t(), ode.y(), ode.yp());
    for e in std::iter::once(&phi).chain(std::iter::once(&ie)) {
        for s in e.symbols() {
            if s != t_sym && s != y_sym && s != yp_sym {
                return Err(ReduceError::Unbound(s.to_string()));
            }
        }
    }
    let rates: Vec<CompiledExpr> = markers
        .iter()
        .map(|m| match m.kind() {
            AtomKind::Integral(u) => CompiledExpr::new(u),
            _ => unreachable!(),
        })
        .collect();
    let phi_c = CompiledExpr::new(&phi);
    let i_c = CompiledExpr::new(&ie);
    let slot = |state: &[f64], t: f64, a: &Atom| -> Option<f64> {
        if let AtomKind::Symbol(s) = a.kind() {
            if *s == t_sym {
                return Some(t);
            }
            if *s == y_sym {
                return Some(state[0]);
            }
            if *s == yp_sym {
                return Some(state[1]);
            }
            return None;
        }
        markers.iter().position(|m| m == a).map(|k| state[2 + k])
    };
    let eval = |c: &CompiledExpr, state: &[f64], t: f64| -> Result<f64, ReduceError> {
        c.eval_named(|a| slot(state, t, a), 1e-6).map_err(|e| match e {
            EvalError::Pole => ReduceError::PoleEncountered(t),
            EvalError::NonFinite => ReduceError::NonFiniteState(t),
            EvalError::Unbound(s) => ReduceError::Unbound(s),
        })
    };
    let deriv = |state: &[f64], t: f64| -> Result<Vec<f64>, ReduceError> {
        let mut d = Vec::with_capacity(state.len());
        d.push(state[1]);
        d.push(eval(&phi_c, state, t)?);
        for r in &rates {
            d.push(eval(r, state, t)?);
        }
        Ok(d)
    };
    let (t0, y0, yp0) = ic;
    let mut state = vec![y0, yp0];
    state.extend(std::iter::repeat_n(0.0, markers.len()));
    let i0 = eval(&i_c, &state, t0)?;
    let steps = ((t_end - t0) / step).round().max(0.0) as usize;
    let mut drift: f64 = 0.0;
    let axpy = |s: &[f64], k: &[f64], h: f64| -> Vec<f64> {
        s.iter().zip(k).map(|(a, b)| a + h * b).collect()
    };
    for n in 0..steps {
        let t = t0 + n as f64 * step;
        let k1 = deriv(&state, t)?;
        let k2 = deriv(&axpy(&state, &k1, step / 2.0), t + step / 2.0)?;
        let k3 = deriv(&axpy(&state, &k2, step / 2.0), t + step / 2.0)?;
        let k4 = deriv(&axpy(&state, &k3, step), t + step)?;
        for (j, s) in state.iter_mut().enumerate() {
            *s += step / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let t_next = t0 + (n + 1) as f64 * step;
        if state.iter().any(|v| !v.is_finite()) {
            return Err(ReduceError::NonFiniteState(t_next));
        }
        let iv = eval(&i_c, &state, t_next)?;
        drift = drift.max((iv - i0).abs() / i0.abs().max(1.0));
    }
    Ok(drift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jlm::lambda_from_divergence;
    use crate::lambda::PointField;
    use crate::parse::{parse_expr, parse_ode};

    fn e(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    fn pv() -> SecondOrderODE {
        parse_ode("y'' = -2*y*y' + q(t)*y' + q'(t)*y").unwrap()
    }

    #[test]
    fn painleve_v_invariants_and_reduction() {
        let ode = pv();
        let lam = lambda_from_divergence(&ode).lambda;
        let s = LambdaSymmetry::certify(&ode, PointField::new(Expr::zero(), Expr::one()).unwrap(), lam)
            .unwrap();
        let pairs = find_invariants(&ode, &s, &invariant_basis(&ode, &[])).unwrap();
        let first = &pairs[0];
        assert_eq!(first.t1, e("t"));
        assert_eq!(first.y1, e("-y*q(t) + y^2 + y'"));
        let vars = ReducedVars::for_pair(&ode, first);
        let g = reduce_ode(&ode, first, &reduction_basis(&ode, &vars)).unwrap();
        assert!(g.is_zero());
        let fi = integrate_pair(&ode, first, &g).unwrap();
        assert!(check_first_integral(&ode, &fi).unwrap());
    }

    #[test]
    fn quadrature_forms() {
        let vars = ReducedVars {
            t: Symbol::parameter("t1"),
            y: Symbol::parameter("y1"),
        };
        let q = |g: &str| quadrature(&e(g), &vars).unwrap();
        assert_eq!(q("0"), e("y1"));
        assert_eq!(q("1/y1"), e("y1^2/2 - t1"));
        assert_eq!(q("t1/y1"), e("y1^2/2 - t1^2/2"));
        assert_eq!(q("(6*y1 - t1^5 - t1^2)/t1"), e("y1/t1^6 - 1/t1 - 1/(4*t1^4)"));
        let tvars = ReducedVars {
            t: Symbol::independent("t"),
            y: Symbol::parameter("y1"),
        };
        assert_eq!(quadrature(&e("y1"), &tvars).unwrap(), parse_expr("exp(-t)*y1").unwrap());
        assert_eq!(
            quadrature(&e("(-3*y1 + t^2)/t"), &tvars).unwrap(),
            e("t^3*y1 - t^5/5")
        );
        let exp_case = quadrature(&e("y1 + t"), &tvars).unwrap();
        let back = &diff_partial(&exp_case, &Symbol::independent("t"))
            + &(&diff_partial(&exp_case, &Symbol::parameter("y1")) * &e("y1 + t"));
        assert!(back.is_zero());
    }

    #[test]
    fn first_integral_checks() {
        let ode = pv();
        assert!(check_first_integral(&ode, &FirstIntegral::new(e("-y*q(t) + y^2 + y'"))).unwrap());
        assert!(!check_first_integral(&ode, &FirstIntegral::new(e("y^2"))).unwrap());
    }

    #[test]
    fn drift_of_constant_is_zero() {
        let ode = pv();
        let bound = crate::expr::function_specialization("q", &e("t"), 1);
        let d = numeric_drift(&ode, &FirstIntegral::new(Expr::one()), &bound, (0.0, 1.0, 0.0), 1.0, 1e-2)
            .unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn drift_of_painleve_v_integral_is_small() {
        let ode = pv();
        let bound = crate::expr::function_specialization("q", &e("t"), 1);
        let fi = FirstIntegral::new(e("-y*q(t) + y^2 + y'"));
        let d = numeric_drift(&ode, &fi, &bound, (0.0, 1.0, 0.0), 1.0, 1e-3).unwrap();
        assert!(d < 1e-8, "{}", d);
    }

    #[test]
    fn unbound_function_reported() {
        let ode = pv();
        let fi = FirstIntegral::new(e("y"));
        assert!(matches!(
            numeric_drift(&ode, &fi, &[], (0.0, 1.0, 0.0), 1.0, 1e-2),
            Err(ReduceError::Unbound(_))
        ));
    }
}
