//! Slow, independent reference evaluation used to validate the fast paths.
//!
//! The oracle integrates the operator in the ORIGINAL variable τ on a graded
//! mesh — no u-substitution, no Gauss–Jacobi rules — so its agreement with
//! the evaluator is evidence of correctness rather than a tautology. It is
//! deliberately brute-force: several panel-count refinements, with the
//! difference of the last two levels as the error estimate.

use std::error::Error;
use std::fmt;

use crate::functions::FunctionSpec;
use crate::operator::{validate, OperatorParams, ParamError, Side};
use crate::quadrature::{graded_mesh_singular, QuadError, QuadratureEstimate, SingularEnd};
use crate::special::{gamma, log_gamma};

/// Mesh refinement settings for the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Panels at the coarsest level; each refinement level doubles this.
    pub n_panels: usize,
    /// Points of the fixed per-panel rule; only 15 is supported.
    pub per_panel_points: usize,
    /// Number of successive panel counts evaluated (n, 2n, 4n, …).
    pub refinement_levels: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { n_panels: 64, per_panel_points: 15, refinement_levels: 3 }
    }
}

impl OracleConfig {
    fn check(&self) -> Result<(), OracleError> {
        if self.n_panels < 8 {
            return Err(OracleError::BadConfig("n_panels must be at least 8"));
        }
        if self.per_panel_points != 15 {
            return Err(OracleError::BadConfig(
                "per_panel_points must be 15 (the fixed panel rule)",
            ));
        }
        if self.refinement_levels < 2 {
            return Err(OracleError::BadConfig("refinement_levels must be at least 2"));
        }
        Ok(())
    }
}

/// Errors from oracle evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    Param(ParamError),
    Quad(QuadError),
    BadConfig(&'static str),
    /// The oracle integrates finite-domain left-sided operators only.
    UnsupportedOperator(&'static str),
    /// The evaluation point lies outside (a, b].
    OutsideDomain { x: f64 },
    /// A closed-form formula was asked outside its validity range.
    ArgsOutOfRange { formula: &'static str, reason: String },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::Param(e) => write!(f, "invalid parameters: {e}"),
            OracleError::Quad(e) => write!(f, "quadrature failure: {e}"),
            OracleError::BadConfig(reason) => write!(f, "invalid oracle config: {reason}"),
            OracleError::UnsupportedOperator(reason) => write!(f, "unsupported operator: {reason}"),
            OracleError::OutsideDomain { x } => {
                write!(f, "evaluation point x = {x} is outside (a, b]")
            }
            OracleError::ArgsOutOfRange { formula, reason } => {
                write!(f, "arguments out of range for {formula}: {reason}")
            }
        }
    }
}

impl Error for OracleError {
    fn source(&self) -> Option<&(dyn Error + 'static)> {
        match self {
            OracleError::Param(e) => Some(e),
            OracleError::Quad(e) => Some(e),
            _ => None,
        }
    }
}

impl From<ParamError> for OracleError {
    fn from(e: ParamError) -> Self {
        OracleError::Param(e)
    }
}

impl From<QuadError> for OracleError {
    fn from(e: QuadError) -> Self {
        OracleError::Quad(e)
    }
}

/// Brute-force evaluation of the left-sided operator at x: the prefactor
/// ρ^{1−β}x^κ/Γ(α) times ∫_a^x τ^{ρ(η+1)−1}(x^ρ−τ^ρ)^{α−1} f(τ) dτ,
/// integrated directly in τ on meshes graded toward the τ = x singularity
/// (and, when a = 0 and the integrand also blows up at 0, graded toward both
/// ends around a midpoint split).
pub fn oracle_eval_left(
    params: &OperatorParams,
    f: &FunctionSpec,
    x: f64,
    cfg: &OracleConfig,
) -> Result<QuadratureEstimate, OracleError> {
    cfg.check()?;
    validate(params)?;
    if params.side != Side::LeftSided {
        return Err(OracleError::UnsupportedOperator(
            "oracle_eval_left handles left-sided operators only",
        ));
    }
    let a = params.domain.a;
    if !a.is_finite() {
        return Err(OracleError::UnsupportedOperator(
            "oracle_eval_left requires a finite lower bound",
        ));
    }
    if !(x > a && x <= params.domain.b) || !x.is_finite() {
        return Err(OracleError::OutsideDomain { x });
    }

    let (alpha, beta, rho, eta, kappa) =
        (params.alpha, params.beta, params.rho, params.eta, params.kappa);
    let x_rho = x.powf(rho);
    let tau_exponent = rho * (eta + 1.0) - 1.0;
    let integrand =
        move |t: f64| t.powf(tau_exponent) * (x_rho - t.powf(rho)).powf(alpha - 1.0) * f.eval(t);

    // Exponent of the integrand as τ → 0⁺; if negative with a = 0, the lower
    // end is singular too and needs its own grading.
    let lo_strength = tau_exponent + f.lowest_power();
    let split_lower = a == 0.0 && lo_strength < 0.0;

    let mut value_prev = f64::NAN;
    let mut value = f64::NAN;
    let mut evaluations = 0;
    for level in 0..cfg.refinement_levels {
        let n = cfg.n_panels << level;
        let est = if split_lower {
            let mid = 0.5 * x;
            let lower = graded_mesh_singular(integrand, a, mid, SingularEnd::Lo, lo_strength, n)?;
            let upper = graded_mesh_singular(integrand, mid, x, SingularEnd::Hi, alpha - 1.0, n)?;
            QuadratureEstimate {
                value: lower.value + upper.value,
                abs_error_estimate: lower.abs_error_estimate + upper.abs_error_estimate,
                evaluations: lower.evaluations + upper.evaluations,
            }
        } else {
            graded_mesh_singular(integrand, a, x, SingularEnd::Hi, alpha - 1.0, n)?
        };
        value_prev = value;
        value = est.value;
        evaluations += est.evaluations;
    }

    let prefactor = rho.powf(1.0 - beta) * x.powf(kappa)
        / gamma(alpha).map_err(|_| OracleError::ArgsOutOfRange {
            formula: "operator prefactor",
            reason: format!("gamma({alpha}) undefined"),
        })?;
    Ok(QuadratureEstimate {
        value: prefactor * value,
        abs_error_estimate: (prefactor * (value - value_prev)).abs(),
        evaluations,
    })
}

/// Analytically known operator values used as test ground truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm {
    /// Order-α integral of t^μ from 0: Γ(μ+1)/Γ(μ+1+α) · x^{μ+α}.
    RLPower { alpha: f64, mu: f64, x: f64 },
    /// Hadamard integral of f ≡ 1: (log(x/a))^α / Γ(α+1).
    HadamardConst { alpha: f64, a: f64, x: f64 },
    /// General operator on f = t^μ with a = 0:
    /// ρ^{−β} x^{κ+ρ(α+η)+μ} Γ(η+μ/ρ+1)/Γ(α+η+μ/ρ+1).
    GenPower { alpha: f64, beta: f64, rho: f64, eta: f64, kappa: f64, mu: f64, x: f64 },
}

/// Evaluates one of the closed-form reference formulas.
pub fn oracle_closed_forms(form: ClosedForm) -> Result<f64, OracleError> {
    let out_of_range = |formula: &'static str, reason: String| OracleError::ArgsOutOfRange {
        formula,
        reason,
    };
    match form {
        ClosedForm::RLPower { alpha, mu, x } => {
            if !(alpha > 0.0) || !(mu > -1.0) || !(x > 0.0) {
                return Err(out_of_range(
                    "RLPower",
                    format!("need alpha > 0, mu > -1, x > 0; got alpha={alpha}, mu={mu}, x={x}"),
                ));
            }
            let lg = log_gamma(mu + 1.0).and_then(|n| log_gamma(mu + 1.0 + alpha).map(|d| n - d));
            let ratio = lg.expect("arguments positive by the checks above").exp();
            Ok(ratio * x.powf(mu + alpha))
        }
        ClosedForm::HadamardConst { alpha, a, x } => {
            if !(alpha > 0.0) || !(a > 0.0) || !(x > a) {
                return Err(out_of_range(
                    "HadamardConst",
                    format!("need alpha > 0, 0 < a < x; got alpha={alpha}, a={a}, x={x}"),
                ));
            }
            let g = gamma(alpha + 1.0).expect("alpha + 1 > 1 is not a pole");
            Ok((x / a).ln().powf(alpha) / g)
        }
        ClosedForm::GenPower { alpha, beta, rho, eta, kappa, mu, x } => {
            if !(alpha > 0.0) || !(rho > 0.0) || !(x > 0.0) {
                return Err(out_of_range(
                    "GenPower",
                    format!("need alpha > 0, rho > 0, x > 0; got alpha={alpha}, rho={rho}, x={x}"),
                ));
            }
            let shifted = eta + mu / rho;
            if !(shifted > -1.0) {
                return Err(out_of_range(
                    "GenPower",
                    format!("need eta + mu/rho > -1 for convergence at 0; got {shifted}"),
                ));
            }
            let lg = log_gamma(shifted + 1.0)
                .and_then(|n| log_gamma(alpha + shifted + 1.0).map(|d| n - d));
            let ratio = lg.expect("arguments positive by the checks above").exp();
            Ok(rho.powf(-beta) * x.powf(kappa + rho * (alpha + eta) + mu) * ratio)
        }
    }
}
