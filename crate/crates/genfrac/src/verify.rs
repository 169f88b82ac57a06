//! Batch verification suites: seeded random draws through the identity
//! checkers, plus fixed grids exercising the classical-reduction and
//! logarithmic-limit consistency of the evaluator.
//!
//! Suites are deterministic: the same seed yields byte-identical summaries.
//! Each suite derives its own stream from the seed, so running one suite
//! alone reproduces its results from an `all` run.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    check_boundedness, check_product_integration, check_semigroup, check_shift, SpaceParams,
};
use crate::evaluator::{eval_classical, eval_hadamard, eval_left, eval_right};
use crate::functions::FunctionSpec;
use crate::operator::{ClassicalReduction, OperatorParams};
use crate::oracle::{oracle_eval_left, OracleConfig};

/// One verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Power-shift identity on random left- and right-sided draws.
    Shift,
    /// Composition identity on random matched pairs.
    Semigroup,
    /// Product-integration identity on random finite domains.
    Product,
    /// Norm inequality ‖I f‖ ≤ K·‖f‖ on draws satisfying its hypotheses.
    Bounded,
    /// Primary path vs independent classical paths and the brute-force
    /// reference, on a fixed grid.
    Reductions,
    /// Convergence to the logarithmic-kernel operator as ρ → 0⁺.
    HadamardLimit,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Shift,
        Suite::Semigroup,
        Suite::Product,
        Suite::Bounded,
        Suite::Reductions,
        Suite::HadamardLimit,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Shift => "shift",
            Suite::Semigroup => "semigroup",
            Suite::Product => "product",
            Suite::Bounded => "bounded",
            Suite::Reductions => "reductions",
            Suite::HadamardLimit => "hadamard-limit",
        }
    }

    /// Whether `--cases` applies; grid suites have a fixed case list.
    pub fn takes_case_count(&self) -> bool {
        !matches!(self, Suite::Reductions | Suite::HadamardLimit)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .iter()
            .copied()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

/// Aggregated result of one suite run.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub passed: usize,
    pub total: usize,
    pub worst_rel_diff: f64,
    /// First checker error encountered, if any; such a case counts as a
    /// failure with an infinite diff.
    pub first_error: Option<String>,
}

impl SuiteOutcome {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }

    /// The one-line summary printed per suite.
    pub fn summary_line(&self) -> String {
        format!(
            "{}: {}/{} pass, worst rel_diff = {:.3e}",
            self.suite.name(),
            self.passed,
            self.total,
            self.worst_rel_diff
        )
    }
}

/// Tracks per-case outcomes; a checker error counts as a failure with an
/// infinite diff rather than aborting the suite.
struct Tally {
    suite: Suite,
    passed: usize,
    total: usize,
    worst: f64,
    first_error: Option<String>,
}

impl Tally {
    fn new(suite: Suite) -> Self {
        Tally { suite, passed: 0, total: 0, worst: 0.0, first_error: None }
    }

    fn record(&mut self, outcome: Result<(bool, f64), String>) {
        self.total += 1;
        match outcome {
            Ok((passed, diff)) => {
                if passed {
                    self.passed += 1;
                }
                if diff > self.worst || diff.is_nan() {
                    self.worst = diff;
                }
            }
            Err(message) => {
                self.worst = f64::INFINITY;
                if self.first_error.is_none() {
                    self.first_error = Some(message);
                }
            }
        }
    }

    fn finish(self) -> SuiteOutcome {
        SuiteOutcome {
            suite: self.suite,
            passed: self.passed,
            total: self.total,
            worst_rel_diff: self.worst,
            first_error: self.first_error,
        }
    }
}

fn suite_rng(seed: u64, suite: Suite) -> ChaCha8Rng {
    let tag = Suite::ALL.iter().position(|s| *s == suite).expect("suite in ALL") as u64;
    // Independent stream per suite so single-suite runs match `all` runs.
    ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

struct Draw {
    alpha: f64,
    beta: f64,
    rho: f64,
    eta: f64,
    kappa: f64,
    a: f64,
    b: f64,
    x: f64,
}

/// Parameter ranges for the random suites: α∈(0,2], β∈[−1,1], ρ∈(0,3],
/// η∈[0,2], κ∈[−2,2], [a,b]⊂(0,3], x strictly interior.
fn draw_params(rng: &mut ChaCha8Rng) -> Draw {
    let alpha = rng.random_range(0.05..=2.0);
    let beta = rng.random_range(-1.0..=1.0);
    let rho = rng.random_range(0.1..=3.0);
    let eta = rng.random_range(0.0..=2.0);
    let kappa = rng.random_range(-2.0..=2.0);
    let a = rng.random_range(0.1..=1.4);
    let b = rng.random_range((a + 0.3)..=3.0);
    let x = a + (b - a) * rng.random_range(0.15..=0.85);
    Draw { alpha, beta, rho, eta, kappa, a, b, x }
}

fn draw_function(rng: &mut ChaCha8Rng) -> FunctionSpec {
    match rng.random_range(0..6) {
        0 => FunctionSpec::Const(rng.random_range(0.5..=2.0)),
        1 => FunctionSpec::Power(rng.random_range(0.0..=2.0)),
        2 => FunctionSpec::Poly(vec![
            rng.random_range(0.2..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        ]),
        3 => FunctionSpec::Exp(rng.random_range(-1.5..=1.0)),
        4 => FunctionSpec::Sin(rng.random_range(0.5..=2.0)),
        _ => FunctionSpec::LogPower { k: rng.random_range(1..=2), base: 0.05 },
    }
}

fn run_shift(seed: u64, cases: usize) -> SuiteOutcome {
    let mut rng = suite_rng(seed, Suite::Shift);
    let mut tally = Tally::new(Suite::Shift);
    for i in 0..cases {
        let d = draw_params(&mut rng);
        let params = if i % 2 == 0 {
            OperatorParams::left(d.alpha, d.beta, d.rho, d.eta, d.kappa, d.a, d.b)
        } else {
            OperatorParams::right(d.alpha, d.beta, d.rho, d.eta, d.kappa, d.a, d.b)
        };
        let gamma = rng.random_range(0.0..=2.0);
        let f = draw_function(&mut rng);
        let outcome = check_shift(&params, gamma, &f, d.x)
            .map(|r| (r.passed, r.rel_diff))
            .map_err(|e| e.to_string());
        tally.record(outcome);
    }
    tally.finish()
}

fn run_semigroup(seed: u64, cases: usize) -> SuiteOutcome {
    let mut rng = suite_rng(seed, Suite::Semigroup);
    let mut tally = Tally::new(Suite::Semigroup);
    for _ in 0..cases {
        let d = draw_params(&mut rng);
        let alpha2 = rng.random_range(0.05..=2.0);
        let beta2 = rng.random_range(-1.0..=1.0);
        let eta2 = rng.random_range(0.0..=2.0);
        let outer = OperatorParams::left(d.alpha, d.beta, d.rho, d.eta, d.kappa, d.a, d.b);
        // The matching condition: the inner power offset must cancel the
        // outer weight power.
        let inner =
            OperatorParams::left(alpha2, beta2, d.rho, eta2, -d.rho * d.eta, d.a, d.b);
        let f = draw_function(&mut rng);
        let outcome = check_semigroup(&outer, &inner, &f, d.x)
            .map(|r| (r.passed, r.rel_diff))
            .map_err(|e| e.to_string());
        tally.record(outcome);
    }
    tally.finish()
}

fn run_product(seed: u64, cases: usize) -> SuiteOutcome {
    let mut rng = suite_rng(seed, Suite::Product);
    let mut tally = Tally::new(Suite::Product);
    for _ in 0..cases {
        let d = draw_params(&mut rng);
        let params = OperatorParams::left(d.alpha, d.beta, d.rho, d.eta, d.kappa, d.a, d.b);
        let f = draw_function(&mut rng);
        let g = draw_function(&mut rng);
        let outcome = check_product_integration(&params, &f, &g, d.a, d.b)
            .map(|r| (r.passed, r.rel_diff))
            .map_err(|e| e.to_string());
        tally.record(outcome);
    }
    tally.finish()
}

fn run_bounded(seed: u64, cases: usize) -> SuiteOutcome {
    let mut rng = suite_rng(seed, Suite::Bounded);
    let mut tally = Tally::new(Suite::Bounded);
    for _ in 0..cases {
        let mut d = draw_params(&mut rng);
        // Norm-bound hypotheses: η ≥ 0 (already in range), ρ ≥ c, and a
        // power budget ρ(α+η)+κ ≥ 0 so the constant controls the operator
        // all the way to b.
        let c = rng.random_range(-1.0..=d.rho.min(1.5));
        let kappa_floor = (-d.rho * (d.alpha + d.eta)).max(-2.0);
        d.kappa = rng.random_range(kappa_floor..=2.0);
        let p = match rng.random_range(0..4) {
            0 => 1.0,
            1 => 1.5,
            2 => 2.0,
            _ => f64::INFINITY,
        };
        let params = OperatorParams::left(d.alpha, d.beta, d.rho, d.eta, d.kappa, d.a, d.b);
        let f = draw_function(&mut rng);
        let outcome = check_boundedness(&params, &f, &SpaceParams::new(p, c), d.a, d.b)
            .map(|r| (r.passed, r.rel_diff))
            .map_err(|e| e.to_string());
        tally.record(outcome);
    }
    tally.finish()
}

/// Relative difference against a reference, with the absolute fallback for
/// tiny references.
fn rel_against(value: f64, reference: f64) -> f64 {
    let diff = (value - reference).abs();
    if reference.abs() < 1e-14 {
        diff
    } else {
        diff / reference.abs()
    }
}

fn reduction_case(
    reduction: ClassicalReduction,
    params: &OperatorParams,
    f: &FunctionSpec,
    x: f64,
    tol: f64,
) -> Result<(bool, f64), String> {
    let primary = eval_left(params, f, x).map_err(|e| e.to_string())?;
    let classical = eval_classical(reduction, params, f, x).map_err(|e| e.to_string())?;
    let diff = rel_against(primary.value, classical.value);
    Ok((diff <= tol, diff))
}

fn run_reductions() -> SuiteOutcome {
    let mut tally = Tally::new(Suite::Reductions);
    let cfg = OracleConfig::default();
    let b = 2.0;
    for &alpha in &[0.5, 1.0, 1.5] {
        for &rho in &[0.5, 1.0, 2.0] {
            for &x in &[0.8, 1.6] {
                for f in [FunctionSpec::Const(1.0), FunctionSpec::Power(rho)] {
                    // The classical path matching this (α, ρ): plain RL for
                    // ρ=1, otherwise the power-kernel reduction.
                    let (reduction, params) = if rho == 1.0 {
                        (
                            ClassicalReduction::RiemannLiouville,
                            OperatorParams::left(alpha, 0.5, 1.0, 0.0, 0.0, 0.0, b),
                        )
                    } else {
                        (
                            ClassicalReduction::Katugampola,
                            OperatorParams::left(alpha, alpha, rho, 0.0, 0.0, 0.0, b),
                        )
                    };
                    tally.record(reduction_case(reduction, &params, &f, x, 1e-8));

                    let eta = 0.5;
                    let ek = OperatorParams::left(
                        alpha,
                        0.0,
                        rho,
                        eta,
                        -rho * (alpha + eta),
                        0.0,
                        b,
                    );
                    tally.record(reduction_case(
                        ClassicalReduction::ErdelyiKober,
                        &ek,
                        &f,
                        x,
                        1e-8,
                    ));

                    // Brute-force reference on the general tuple.
                    let general =
                        OperatorParams::left(alpha, 0.25, rho, 0.75, 0.5, 0.0, b);
                    let outcome = (|| {
                        let primary = eval_left(&general, &f, x).map_err(|e| e.to_string())?;
                        let reference =
                            oracle_eval_left(&general, &f, x, &cfg).map_err(|e| e.to_string())?;
                        let diff = rel_against(primary.value, reference.value);
                        Ok((diff <= 1e-6, diff))
                    })();
                    tally.record(outcome);
                }
            }
        }
    }

    // Infinite-domain reductions against analytic values: the kernel
    // transform of e^{λt} scales it by λ^{−α}.
    let weyl = OperatorParams::left(0.5, 0.5, 1.0, 0.0, 0.0, f64::NEG_INFINITY, 2.0);
    tally.record((|| {
        let r = eval_classical(ClassicalReduction::WeylType, &weyl, &FunctionSpec::Exp(1.0), 0.3)
            .map_err(|e| e.to_string())?;
        let diff = rel_against(r.value, 0.3f64.exp());
        Ok((diff <= 1e-6, diff))
    })());

    let liouville = OperatorParams::right(0.7, 0.5, 1.0, 0.0, 0.0, 0.0, f64::INFINITY);
    tally.record((|| {
        let lambda: f64 = 1.3;
        let r = eval_classical(
            ClassicalReduction::LiouvilleType,
            &liouville,
            &FunctionSpec::Exp(-lambda),
            0.8,
        )
        .map_err(|e| e.to_string())?;
        let diff = rel_against(r.value, (-lambda * 0.8).exp() * lambda.powf(-0.7));
        Ok((diff <= 1e-6, diff))
    })());

    // Right-sided infinite-bound path against the same analytic family.
    let right_inf = OperatorParams::right(1.2, 1.0, 1.0, 0.0, 0.0, 0.0, f64::INFINITY);
    tally.record((|| {
        let r = eval_right(&right_inf, &FunctionSpec::Exp(-1.0), 0.5).map_err(|e| e.to_string())?;
        let diff = rel_against(r.value, (-0.5f64).exp());
        Ok((diff <= 1e-6, diff))
    })());

    tally.finish()
}

fn run_hadamard_limit() -> SuiteOutcome {
    let mut tally = Tally::new(Suite::HadamardLimit);
    let configs: [(f64, f64, f64); 4] = [
        (0.5, 1.0, std::f64::consts::E),
        (1.0, 0.5, 1.5),
        (1.5, 1.0, 2.0),
        (0.75, 2.0, 5.0),
    ];
    for &(alpha, a, x) in &configs {
        for f in [FunctionSpec::Const(1.0), FunctionSpec::Exp(-0.3)] {
            let outcome = (|| {
                let target = eval_hadamard(alpha, a, &f, x).map_err(|e| e.to_string())?;
                let mut errors = [0.0f64; 3];
                for (k, rho) in [1e-1, 1e-2, 1e-3].into_iter().enumerate() {
                    let p = OperatorParams::left(alpha, alpha, rho, 0.0, 0.0, a, 2.0 * x);
                    let v = eval_left(&p, &f, x).map_err(|e| e.to_string())?.value;
                    errors[k] = rel_against(v, target);
                }
                let monotone = errors[0] > errors[1] && errors[1] > errors[2];
                Ok((monotone && errors[2] <= 5e-3, errors[2]))
            })();
            tally.record(outcome);
        }
    }
    tally.finish()
}

/// Runs one suite. `cases` applies to the seeded suites (shift and
/// semigroup take it directly; product and bounded take half, matching
/// their heavier per-case cost); the grid suites have fixed case lists.
pub fn run_suite(suite: Suite, seed: u64, cases: usize) -> SuiteOutcome {
    let halved = cases.div_ceil(2);
    match suite {
        Suite::Shift => run_shift(seed, cases),
        Suite::Semigroup => run_semigroup(seed, cases),
        Suite::Product => run_product(seed, halved),
        Suite::Bounded => run_bounded(seed, halved),
        Suite::Reductions => run_reductions(),
        Suite::HadamardLimit => run_hadamard_limit(),
    }
}

/// Runs the given suites in order.
pub fn run_suites(suites: &[Suite], seed: u64, cases: usize) -> Vec<SuiteOutcome> {
    suites.iter().map(|s| run_suite(*s, seed, cases)).collect()
}
