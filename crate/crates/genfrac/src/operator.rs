//! Parameter tuples for the generalized fractional integral operator, their
//! validation, classification into classical special cases, and the purely
//! algebraic shift/composition rules.
//!
//! No numerics happen here beyond parameter arithmetic; evaluation lives in
//! the evaluator module.

use std::error::Error;
use std::fmt;

/// Which side the operator integrates from, and which outer power it carries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Side {
    /// Integral from the lower bound a up to x, outer factor x^κ.
    LeftSided,
    /// Integral from x up to the upper bound b, outer factor x^{ρη}.
    RightSided,
    /// Right-sided with the x^{ρη} outer factor replaced by x^ω.
    RightSidedGeneral { omega: f64 },
}

/// Integration domain endpoints. `a` may be −∞ (only with ρ = 1) and `b` may
/// be +∞; otherwise 0 ≤ a < b is required.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub a: f64,
    pub b: f64,
}

/// The full parameter tuple (α, β, ρ, η, κ) plus side and domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorParams {
    /// Order of integration; must be positive.
    pub alpha: f64,
    /// Exponent of the ρ^{1−β} prefactor.
    pub beta: f64,
    /// Power-law exponent of the kernel substitution; must be positive.
    pub rho: f64,
    /// Inner weight exponent.
    pub eta: f64,
    /// Outer power exponent (left side) / inner power offset (right side).
    pub kappa: f64,
    pub side: Side,
    pub domain: Domain,
}

impl OperatorParams {
    /// Convenience constructor for a left-sided operator on [a, b].
    pub fn left(alpha: f64, beta: f64, rho: f64, eta: f64, kappa: f64, a: f64, b: f64) -> Self {
        OperatorParams { alpha, beta, rho, eta, kappa, side: Side::LeftSided, domain: Domain { a, b } }
    }

    /// Convenience constructor for a right-sided operator on [a, b].
    pub fn right(alpha: f64, beta: f64, rho: f64, eta: f64, kappa: f64, a: f64, b: f64) -> Self {
        OperatorParams { alpha, beta, rho, eta, kappa, side: Side::RightSided, domain: Domain { a, b } }
    }
}

/// The classical operator a parameter tuple reduces to.
///
/// Naming of the infinite-bound cases follows the convention that a = −∞ is
/// the Weyl-type integral and b = +∞ the Liouville-type one; parts of the
/// literature swap these names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicalReduction {
    RiemannLiouville,
    Katugampola,
    /// The ρ → 0⁺ limit. Never returned by [`classify`] — it is a limit, not
    /// a parameter point — and reachable only through the dedicated
    /// Hadamard evaluator.
    HadamardLimit,
    ErdelyiKober,
    WeylType,
    LiouvilleType,
    General,
}

impl fmt::Display for ClassicalReduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ClassicalReduction::RiemannLiouville => "riemann-liouville",
            ClassicalReduction::Katugampola => "katugampola",
            ClassicalReduction::HadamardLimit => "hadamard-limit",
            ClassicalReduction::ErdelyiKober => "erdelyi-kober",
            ClassicalReduction::WeylType => "weyl-type",
            ClassicalReduction::LiouvilleType => "liouville-type",
            ClassicalReduction::General => "general",
        };
        f.write_str(name)
    }
}

/// Validation and composition errors for parameter tuples.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamError {
    NonPositiveAlpha(f64),
    NonPositiveRho(f64),
    /// a ≥ b, a finite and negative, or a = −∞ with ρ ≠ 1.
    BadDomain { a: f64, b: f64 },
    /// a = 0 with η ≤ −1 makes the inner weight non-integrable at 0.
    EtaTooSmall(f64),
    NonFiniteParam { name: &'static str, value: f64 },
    /// The κ/η matching condition for composing two operators fails.
    IncompatibleComposition { expected_kappa: f64, found_kappa: f64 },
    /// Composition requires equal ρ, equal side, equal domain, and plain
    /// (non-generalized) left- or right-sided operators.
    MismatchedRhoOrSide,
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamError::NonPositiveAlpha(a) => write!(f, "alpha = {a} must be positive"),
            ParamError::NonPositiveRho(r) => write!(f, "rho = {r} must be positive"),
            ParamError::BadDomain { a, b } => write!(
                f,
                "invalid domain [{a}, {b}]: require 0 <= a < b <= +inf (a = -inf only with rho = 1)"
            ),
            ParamError::EtaTooSmall(eta) => write!(
                f,
                "eta = {eta} must be > -1 when the domain starts at 0 (integrability of the inner weight)"
            ),
            ParamError::NonFiniteParam { name, value } => {
                write!(f, "parameter {name} = {value} must be finite")
            }
            ParamError::IncompatibleComposition { expected_kappa, found_kappa } => write!(
                f,
                "composition matching condition fails: kappa must equal -rho*eta of the partner \
                 (expected {expected_kappa}, found {found_kappa})"
            ),
            ParamError::MismatchedRhoOrSide => write!(
                f,
                "composition requires equal rho, equal side, equal domain, and plain one-sided operators"
            ),
        }
    }
}

impl Error for ParamError {}

/// Checks every structural invariant of a parameter tuple.
pub fn validate(params: &OperatorParams) -> Result<(), ParamError> {
    let named = [
        ("alpha", params.alpha),
        ("beta", params.beta),
        ("rho", params.rho),
        ("eta", params.eta),
        ("kappa", params.kappa),
    ];
    for (name, value) in named {
        if !value.is_finite() {
            return Err(ParamError::NonFiniteParam { name, value });
        }
    }
    if let Side::RightSidedGeneral { omega } = params.side {
        if !omega.is_finite() {
            return Err(ParamError::NonFiniteParam { name: "omega", value: omega });
        }
    }
    if params.alpha <= 0.0 {
        return Err(ParamError::NonPositiveAlpha(params.alpha));
    }
    if params.rho <= 0.0 {
        return Err(ParamError::NonPositiveRho(params.rho));
    }
    let Domain { a, b } = params.domain;
    let domain_ok = if a == f64::NEG_INFINITY {
        params.rho == 1.0 && a < b
    } else {
        a >= 0.0 && a < b
    };
    if a.is_nan() || b.is_nan() || !domain_ok {
        return Err(ParamError::BadDomain { a, b });
    }
    if a == 0.0 && params.side == Side::LeftSided && params.eta <= -1.0 {
        return Err(ParamError::EtaTooSmall(params.eta));
    }
    Ok(())
}

/// Identifies the classical reduction of a (valid) parameter tuple, using
/// exact parameter comparisons with the precedence: Weyl-type (a = −∞), then
/// Liouville-type (b = +∞, plain right-sided), then Riemann–Liouville
/// (ρ = 1, η = κ = 0, any β), then Erdélyi–Kober (β = 0, κ = −ρ(α+η)), then
/// Katugampola (β = α, η = κ = 0, ρ ≠ 1), else General.
///
/// Classification drives fast-path dispatch, so it is deliberately exact and
/// tolerance-free: nearby tuples still evaluate correctly via the general
/// path, they just don't take a shortcut.
pub fn classify(params: &OperatorParams) -> Result<ClassicalReduction, ParamError> {
    validate(params)?;
    if params.domain.a == f64::NEG_INFINITY {
        return Ok(ClassicalReduction::WeylType);
    }
    if params.domain.b == f64::INFINITY && params.side == Side::RightSided {
        return Ok(ClassicalReduction::LiouvilleType);
    }
    if params.rho == 1.0 && params.eta == 0.0 && params.kappa == 0.0 {
        return Ok(ClassicalReduction::RiemannLiouville);
    }
    if params.beta == 0.0 && params.kappa == -(params.rho * (params.alpha + params.eta)) {
        return Ok(ClassicalReduction::ErdelyiKober);
    }
    if params.beta == params.alpha
        && params.eta == 0.0
        && params.kappa == 0.0
        && params.rho != 1.0
    {
        return Ok(ClassicalReduction::Katugampola);
    }
    Ok(ClassicalReduction::General)
}

/// Absorbs a power multiplier on the integrand into the parameter tuple:
/// multiplying f by t^{ργ} on the left side shifts η by γ; multiplying by
/// t^{γ} on the right side shifts κ by γ (for either right-sided variant,
/// since κ sits inside the integral the same way).
///
/// The result is returned as-is; callers that go on to evaluate should
/// re-validate, since a shift can push η below the a = 0 integrability bound.
pub fn shift_params(params: &OperatorParams, gamma: f64) -> OperatorParams {
    let mut shifted = *params;
    match shifted.side {
        Side::LeftSided => shifted.eta += gamma,
        Side::RightSided | Side::RightSidedGeneral { .. } => shifted.kappa += gamma,
    }
    shifted
}

/// Composes two operators (outer applied after inner) into a single tuple,
/// when the semigroup matching condition holds exactly.
///
/// Left side: requires inner.κ = −ρ·outer.η; the result keeps inner.η and
/// outer.κ and sums α and β. Right side: requires outer.κ = −ρ·inner.η; the
/// result keeps outer.η and inner.κ. Generalized right-sided operators do not
/// compose.
pub fn compose_params(
    outer: &OperatorParams,
    inner: &OperatorParams,
) -> Result<OperatorParams, ParamError> {
    validate(outer)?;
    validate(inner)?;
    if matches!(outer.side, Side::RightSidedGeneral { .. })
        || matches!(inner.side, Side::RightSidedGeneral { .. })
        || outer.side != inner.side
        || outer.rho != inner.rho
        || outer.domain != inner.domain
    {
        return Err(ParamError::MismatchedRhoOrSide);
    }
    let combined = |eta: f64, kappa: f64| OperatorParams {
        alpha: outer.alpha + inner.alpha,
        beta: outer.beta + inner.beta,
        rho: outer.rho,
        eta,
        kappa,
        side: outer.side,
        domain: outer.domain,
    };
    match outer.side {
        Side::LeftSided => {
            let expected = -(outer.rho * outer.eta);
            if inner.kappa != expected {
                return Err(ParamError::IncompatibleComposition {
                    expected_kappa: expected,
                    found_kappa: inner.kappa,
                });
            }
            Ok(combined(inner.eta, outer.kappa))
        }
        Side::RightSided => {
            let expected = -(outer.rho * inner.eta);
            if outer.kappa != expected {
                return Err(ParamError::IncompatibleComposition {
                    expected_kappa: expected,
                    found_kappa: outer.kappa,
                });
            }
            Ok(combined(outer.eta, inner.kappa))
        }
        Side::RightSidedGeneral { .. } => unreachable!("rejected above"),
    }
}
