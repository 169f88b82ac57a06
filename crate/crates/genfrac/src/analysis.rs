//! Weighted-space norms, the operator-norm bound constant, and numerical
//! verification of the shift, semigroup, product-integration, and
//! boundedness identities.
//!
//! The ambient space is X^p_c(a, b): functions with finite
//! (∫_a^b |x^c f(x)|^p dx/x)^{1/p}, with the supremum of |x^c f(x)| when
//! p = ∞. All catalog functions are continuous, so the supremum is computed
//! as a grid supremum (sup = ess-sup here); this is a documented limitation,
//! not an approximation of a genuinely essential supremum.
//!
//! Each identity checker computes its two sides by routes that share as
//! little machinery as the identity allows, and reports them side by side
//! rather than just a boolean.

use std::cell::RefCell;
use std::error::Error;
use std::fmt;

use crate::evaluator::{eval_left, eval_left_fn, eval_right, eval_right_fn, EvalError, EvalResult};
use crate::functions::FunctionSpec;
use crate::operator::{
    compose_params, shift_params, validate, Domain, OperatorParams, ParamError, Side,
};
use crate::quadrature::{cached_jacobi_rule, integrate_adaptive, integrate_weighted, QuadError};
use crate::special::gamma;

/// The weighted Lebesgue space X^p_c: exponent p ∈ [1, ∞] and weight power c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceParams {
    pub p: f64,
    pub c: f64,
}

impl SpaceParams {
    pub fn new(p: f64, c: f64) -> Self {
        SpaceParams { p, c }
    }

    /// The supremum-norm space with weight power c.
    pub fn sup(c: f64) -> Self {
        SpaceParams { p: f64::INFINITY, c }
    }
}

/// Two sides of an identity with their agreement and the verdict.
///
/// `passed ⟺ rel_diff ≤ tolerance_used`; when |rhs| < 1e−14 the relative
/// difference is defined as the absolute one so the rule stays meaningful.
/// For inequality checks (boundedness) the `*_diff` fields hold the excess
/// of lhs over rhs, zero when the inequality is strict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
    pub tolerance_used: f64,
    pub passed: bool,
}

/// Errors from norms and identity checks.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalysisError {
    Param(ParamError),
    Quad(QuadError),
    Eval(EvalError),
    /// A hypothesis of the identity or norm bound is not satisfied.
    PreconditionViolated(&'static str),
    /// The bound-constant integral failed to converge numerically.
    DivergentConstant,
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalysisError::Param(e) => write!(f, "invalid parameters: {e}"),
            AnalysisError::Quad(e) => write!(f, "quadrature failure: {e}"),
            AnalysisError::Eval(e) => write!(f, "evaluation failure: {e}"),
            AnalysisError::PreconditionViolated(reason) => {
                write!(f, "precondition violated: {reason}")
            }
            AnalysisError::DivergentConstant => {
                write!(f, "bound constant integral did not converge")
            }
        }
    }
}

impl Error for AnalysisError {
    fn source(&self) -> Option<&(dyn Error + 'static)> {
        match self {
            AnalysisError::Param(e) => Some(e),
            AnalysisError::Quad(e) => Some(e),
            AnalysisError::Eval(e) => Some(e),
            _ => None,
        }
    }
}

impl From<ParamError> for AnalysisError {
    fn from(e: ParamError) -> Self {
        AnalysisError::Param(e)
    }
}

impl From<QuadError> for AnalysisError {
    fn from(e: QuadError) -> Self {
        AnalysisError::Quad(e)
    }
}

impl From<EvalError> for AnalysisError {
    fn from(e: EvalError) -> Self {
        AnalysisError::Eval(e)
    }
}

fn equality_report(lhs: f64, rhs: f64, tol: f64) -> IdentityReport {
    let abs_diff = (lhs - rhs).abs();
    let rel_diff = if rhs.abs() < 1e-14 { abs_diff } else { abs_diff / rhs.abs() };
    IdentityReport { lhs, rhs, abs_diff, rel_diff, tolerance_used: tol, passed: rel_diff <= tol }
}

fn inequality_report(lhs: f64, rhs: f64, tol: f64) -> IdentityReport {
    let excess = (lhs - rhs).max(0.0);
    let rel = if rhs.abs() < 1e-14 { excess } else { excess / rhs.abs() };
    IdentityReport {
        lhs,
        rhs,
        abs_diff: excess,
        rel_diff: rel,
        tolerance_used: tol,
        passed: rel <= tol,
    }
}

/// Remembers the first evaluator error raised inside a quadrature closure,
/// where errors cannot propagate directly; the closure reports NaN instead
/// and the stored error is preferred over the resulting quadrature error.
struct ErrCell(RefCell<Option<EvalError>>);

impl ErrCell {
    fn new() -> Self {
        ErrCell(RefCell::new(None))
    }

    fn capture(&self, r: Result<EvalResult, EvalError>) -> f64 {
        match r {
            Ok(res) => res.value,
            Err(e) => {
                let mut slot = self.0.borrow_mut();
                if slot.is_none() {
                    *slot = Some(e);
                }
                f64::NAN
            }
        }
    }

    fn prefer(&self, fallback: AnalysisError) -> AnalysisError {
        match self.0.borrow_mut().take() {
            Some(e) => AnalysisError::Eval(e),
            None => fallback,
        }
    }
}

fn weighted_sum(n: usize, er: f64, el: f64, g: impl Fn(f64) -> f64) -> Result<f64, QuadError> {
    let rule = cached_jacobi_rule(n, er, el)?;
    integrate_weighted(&rule, g)
}

const SUP_GRID_POINTS: usize = 2049;

/// Norm of an arbitrary sample function. `interior_only` offsets the p = ∞
/// grid off the endpoints (for integrands defined only on the open
/// interval); the finite-p path never samples endpoints either way.
fn norm_of(
    g: &dyn Fn(f64) -> f64,
    space: &SpaceParams,
    a: f64,
    b: f64,
    interior_only: bool,
    rel_tol: f64,
) -> Result<f64, AnalysisError> {
    if !(a > 0.0 && a < b && b.is_finite()) {
        return Err(AnalysisError::PreconditionViolated("the norm requires 0 < a < b < ∞"));
    }
    if !(space.p >= 1.0) {
        return Err(AnalysisError::PreconditionViolated("the norm requires p >= 1"));
    }
    if !space.c.is_finite() {
        return Err(AnalysisError::PreconditionViolated("the norm requires finite c"));
    }
    let c = space.c;
    if space.p.is_finite() {
        let p = space.p;
        let integrand = |x: f64| (x.powf(c) * g(x)).abs().powf(p) / x;
        let estimate = integrate_adaptive(integrand, a, b, rel_tol)?;
        return Ok(estimate.value.powf(1.0 / p));
    }

    // Supremum over a geometric grid, refined once around the argmax.
    let log_ratio = (b / a).ln();
    let weighted = |x: f64| (x.powf(c) * g(x)).abs();
    let scan = |t_lo: f64, t_hi: f64| -> Result<(f64, f64), AnalysisError> {
        let mut best_t = t_lo;
        let mut best_v = f64::NEG_INFINITY;
        for i in 0..SUP_GRID_POINTS {
            let t = t_lo + (t_hi - t_lo) * i as f64 / (SUP_GRID_POINTS - 1) as f64;
            let x = a * (log_ratio * t).exp();
            let v = weighted(x);
            if !v.is_finite() {
                return Err(QuadError::NonFiniteIntegrand { at: x }.into());
            }
            if v > best_v {
                best_v = v;
                best_t = t;
            }
        }
        Ok((best_t, best_v))
    };
    let step = 1.0 / (SUP_GRID_POINTS - 1) as f64;
    let (t0, t1) = if interior_only { (0.5 * step, 1.0 - 0.5 * step) } else { (0.0, 1.0) };
    let (t_star, coarse_sup) = scan(t0, t1)?;
    let h = (t1 - t0) * step;
    let (_, refined_sup) = scan((t_star - h).max(t0), (t_star + h).min(t1))?;
    Ok(coarse_sup.max(refined_sup))
}

/// ‖f‖ in X^p_c(a, b): (∫_a^b |x^c f(x)|^p dx/x)^{1/p}, or the grid
/// supremum of |x^c f(x)| when p = ∞.
pub fn xpc_norm(f: &FunctionSpec, space: &SpaceParams, a: f64, b: f64) -> Result<f64, AnalysisError> {
    norm_of(&|x| f.eval(x), space, a, b, false, 1e-10)
}

/// The explicit constant K with ‖I f‖ ≤ K·‖f‖ on X^p_c(a, b) for the
/// left-sided operator:
///
/// K = ρ^{1−β} b^{ρ(α+η)+κ}/Γ(α) · ∫₁^{b/a} u^{c−ρ(α+η)−1}(u^ρ−1)^{α−1} du.
///
/// The kernel singularity at u = 1 is removed by the substitution
/// s = u^ρ−1, which turns the integral into a Gauss–Jacobi sum with weight
/// s^{α−1} and a smooth, monotone payload. Requires ρ ≥ c and η ≥ 0 (the
/// hypotheses under which the bound holds) and 0 < a: the constant as
/// written diverges as a → 0.
pub fn bound_constant_k(
    params: &OperatorParams,
    space: &SpaceParams,
    a: f64,
    b: f64,
) -> Result<f64, AnalysisError> {
    if params.side != Side::LeftSided {
        return Err(AnalysisError::PreconditionViolated(
            "the bound constant applies to left-sided operators",
        ));
    }
    if !(a > 0.0 && a < b && b.is_finite()) {
        return Err(AnalysisError::PreconditionViolated("the bound requires 0 < a < b < ∞"));
    }
    let scoped = OperatorParams { domain: Domain { a, b }, ..*params };
    validate(&scoped)?;
    if !(space.p >= 1.0) {
        return Err(AnalysisError::PreconditionViolated("the bound requires p >= 1"));
    }
    if !space.c.is_finite() {
        return Err(AnalysisError::PreconditionViolated("the bound requires finite c"));
    }
    if !(params.rho >= space.c) {
        return Err(AnalysisError::PreconditionViolated("the bound requires rho >= c"));
    }
    if !(params.eta >= 0.0) {
        return Err(AnalysisError::PreconditionViolated("the bound requires eta >= 0"));
    }
    let (alpha, beta, rho, eta, kappa) =
        (params.alpha, params.beta, params.rho, params.eta, params.kappa);
    let c = space.c;
    // s ranges over [0, S] with S = (b/a)^ρ − 1; expm1 keeps S accurate for
    // small ρ·log(b/a). S can be enormous (large ρ·log(b/a)), so the
    // integral is split: a spectral head on [0, min(S,1)] carrying the
    // s^{α−1} singularity, and — when S > 1 — a tail integrated in
    // t = log(1+s), where the integrand varies slowly over the whole span.
    let s_max = (rho * (b / a).ln()).exp_m1();
    let payload_exp = (c - rho * (alpha + eta)) / rho - 1.0;
    let s_split = s_max.min(1.0);
    let payload = |w: f64| (1.0 + s_split * w).powf(payload_exp);
    let coarse = weighted_sum(80, 0.0, alpha - 1.0, payload)?;
    let fine = weighted_sum(160, 0.0, alpha - 1.0, payload)?;
    let head = s_split.powf(alpha) * fine;
    let head_err = s_split.powf(alpha) * (fine - coarse).abs();
    let (tail, tail_err) = if s_max > 1.0 {
        let integrand =
            |t: f64| ((payload_exp + 1.0) * t).exp() * t.exp_m1().powf(alpha - 1.0);
        let estimate =
            integrate_adaptive(integrand, std::f64::consts::LN_2, s_max.ln_1p(), 1e-10)?;
        (estimate.value, estimate.abs_error_estimate)
    } else {
        (0.0, 0.0)
    };
    let j = head + tail;
    let scale = rho.powf(1.0 - beta) * b.powf(rho * (alpha + eta) + kappa)
        / gamma(alpha).expect("alpha > 0 after validation")
        / rho;
    let value = scale * j;
    if !value.is_finite() || head_err + tail_err > 1e-7 * j.abs() {
        return Err(AnalysisError::DivergentConstant);
    }
    Ok(value)
}

/// Checks ‖I f‖ ≤ K·‖f‖ on X^p_c(a, b). The report's lhs is the norm of
/// the transformed function, rhs is K times the norm of f, and the diff
/// fields hold the (relative) excess; tolerance 1e−6 absorbs quadrature
/// error in both norms.
pub fn check_boundedness(
    params: &OperatorParams,
    f: &FunctionSpec,
    space: &SpaceParams,
    a: f64,
    b: f64,
) -> Result<IdentityReport, AnalysisError> {
    let k = bound_constant_k(params, space, a, b)?;
    let scoped = OperatorParams { domain: Domain { a, b }, ..*params };
    let cell = ErrCell::new();
    let transformed = |x: f64| cell.capture(eval_left(&scoped, f, x));
    // 1e−8 quadrature on the transformed norm: two orders tighter than the
    // 1e−6 inequality slack, far cheaper than the public norm's 1e−10.
    let lhs = match norm_of(&transformed, space, a, b, true, 1e-8) {
        Ok(v) => v,
        Err(e) => return Err(cell.prefer(e)),
    };
    let rhs = k * xpc_norm(f, space, a, b)?;
    Ok(inequality_report(lhs, rhs, 1e-6))
}

/// Checks the power-shift identity: applying the operator to t^{ργ}·f(t)
/// (left side) or t^γ·f(t) (right side) equals the operator with the
/// correspondingly shifted parameter tuple applied to f. Both sides run
/// the same spectral path, so γ = 0 agrees exactly.
pub fn check_shift(
    params: &OperatorParams,
    gamma: f64,
    f: &FunctionSpec,
    x: f64,
) -> Result<IdentityReport, AnalysisError> {
    validate(params)?;
    let shifted = shift_params(params, gamma);
    validate(&shifted)?;
    let (lhs, rhs) = match params.side {
        Side::LeftSided => {
            if !params.domain.a.is_finite() {
                return Err(AnalysisError::PreconditionViolated(
                    "the shift check requires a finite lower bound",
                ));
            }
            let rho_gamma = params.rho * gamma;
            let lhs = eval_left_fn(params, |t| t.powf(rho_gamma) * f.eval(t), x)?;
            let rhs = eval_left_fn(&shifted, |t| f.eval(t), x)?;
            (lhs, rhs)
        }
        Side::RightSided | Side::RightSidedGeneral { .. } => {
            if !params.domain.b.is_finite() {
                return Err(AnalysisError::PreconditionViolated(
                    "the shift check requires a finite upper bound",
                ));
            }
            let lhs = eval_right_fn(params, |t| t.powf(gamma) * f.eval(t), x)?;
            let rhs = eval_right_fn(&shifted, |t| f.eval(t), x)?;
            (lhs, rhs)
        }
    };
    Ok(equality_report(lhs.value, rhs.value, 1e-9))
}

/// Checks the semigroup identity: the outer operator applied to
/// y ↦ (inner operator of f)(y) equals the composed operator applied to f.
///
/// The nested side folds the inner value's known vanishing rate at the
/// lower endpoint into the outer Gauss–Jacobi weight — the inner value
/// behaves like (τ^ρ−a^ρ)^{α₂} there, which would otherwise wreck the
/// outer rule's convergence. Tolerance 1e−6: the inner evaluation error
/// compounds through the outer rule.
pub fn check_semigroup(
    outer: &OperatorParams,
    inner: &OperatorParams,
    f: &FunctionSpec,
    x: f64,
) -> Result<IdentityReport, AnalysisError> {
    let composed = compose_params(outer, inner)?;
    if outer.side != Side::LeftSided {
        return Err(AnalysisError::PreconditionViolated(
            "the semigroup check supports left-sided operators",
        ));
    }
    let Domain { a, b } = outer.domain;
    if !a.is_finite() {
        return Err(AnalysisError::PreconditionViolated(
            "the semigroup check requires a finite lower bound",
        ));
    }
    if !(x > a && x < b) || !x.is_finite() {
        return Err(EvalError::XOutOfDomain { x }.into());
    }

    let rhs = eval_left(&composed, f, x)?;

    let (alpha1, beta1, rho, eta1, kappa1) =
        (outer.alpha, outer.beta, outer.rho, outer.eta, outer.kappa);
    let (alpha2, eta2) = (inner.alpha, inner.eta);
    let cell = ErrCell::new();
    let g_inner = |y: f64| cell.capture(eval_left(inner, f, y));
    let prefactor =
        rho.powf(-beta1) * x.powf(kappa1 + rho * (alpha1 + eta1)) / gamma(alpha1).expect("alpha > 0");

    let lhs = if a == 0.0 {
        // Inner value ~ u^{α₂+η₂} as u → 0 (κ₂/ρ = −η₁ cancels against the
        // outer u^{η₁}); put that power in the weight and divide it out.
        let el = alpha2 + eta2;
        let residual = eta1 - el;
        let phi = |u: f64| u.powf(residual) * g_inner(x * u.powf(1.0 / rho));
        let coarse = weighted_sum(80, alpha1 - 1.0, el, &phi);
        let coarse = coarse.map_err(|q| cell.prefer(q.into()))?;
        let fine = weighted_sum(160, alpha1 - 1.0, el, &phi);
        let fine = fine.map_err(|q| cell.prefer(q.into()))?;
        let _ = coarse;
        prefactor * fine
    } else {
        // Affine map s of [(a/x)^ρ, 1] onto [0,1]; the inner value vanishes
        // like s^{α₂} at s = 0, folded into the weight likewise.
        let one_minus_u0 = -(rho * (a / x).ln()).exp_m1();
        let phi = |s: f64| {
            let ln_u = (-one_minus_u0 * (1.0 - s)).ln_1p();
            let y = x * (ln_u / rho).exp();
            (eta1 * ln_u).exp() * g_inner(y) / s.powf(alpha2)
        };
        let scale = prefactor * one_minus_u0.powf(alpha1);
        let coarse = weighted_sum(80, alpha1 - 1.0, alpha2, &phi);
        let coarse = coarse.map_err(|q| cell.prefer(q.into()))?;
        let fine = weighted_sum(160, alpha1 - 1.0, alpha2, &phi);
        let fine = fine.map_err(|q| cell.prefer(q.into()))?;
        let _ = coarse;
        scale * fine
    };
    Ok(equality_report(lhs, rhs.value, 1e-6))
}

/// Checks the product-integration identity on [a, b] (the domain the
/// operators are taken over, overriding `params.domain`):
///
/// ∫_a^b x^{ρ−1} f(x)·(I_left g)(x) dx = ∫_a^b x^{ρ−1} g(x)·(I_right f)(x) dx,
///
/// where both operators carry the same (α, β, ρ, η, κ). Both sides go
/// through adaptive quadrature at 1e−8; tolerance 1e−6.
pub fn check_product_integration(
    params: &OperatorParams,
    f: &FunctionSpec,
    g: &FunctionSpec,
    a: f64,
    b: f64,
) -> Result<IdentityReport, AnalysisError> {
    if params.side != Side::LeftSided {
        return Err(AnalysisError::PreconditionViolated(
            "the product-integration check takes left-sided parameters",
        ));
    }
    if !(a > 0.0 && a < b && b.is_finite()) {
        return Err(AnalysisError::PreconditionViolated(
            "the product-integration check requires 0 < a < b < ∞",
        ));
    }
    let left = OperatorParams { domain: Domain { a, b }, ..*params };
    validate(&left)?;
    let right = OperatorParams { side: Side::RightSided, ..left };
    let rho = params.rho;

    let cell = ErrCell::new();
    let lhs_integrand = |x: f64| x.powf(rho - 1.0) * f.eval(x) * cell.capture(eval_left(&left, g, x));
    let lhs = integrate_adaptive(lhs_integrand, a, b, 1e-8)
        .map_err(|q| cell.prefer(q.into()))?
        .value;
    let rhs_integrand =
        |x: f64| x.powf(rho - 1.0) * g.eval(x) * cell.capture(eval_right(&right, f, x));
    let rhs = integrate_adaptive(rhs_integrand, a, b, 1e-8)
        .map_err(|q| cell.prefer(q.into()))?
        .value;
    Ok(equality_report(lhs, rhs, 1e-6))
}
