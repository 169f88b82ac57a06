//! The catalog of integrand functions the CLI and verification suites accept.
//!
//! Functions are described by a compact text form `name:arg[,arg...]` (for
//! example `pow:0.5` or `poly:1,0,2`), parsed into a [`FunctionSpec`] that
//! evaluates pointwise and reports its leading power near t = 0 so quadrature
//! layers can pick an integrable mesh grading.

use std::error::Error;
use std::fmt;
use std::str::FromStr;

/// A function f(t) from the supported catalog.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    /// f(t) = c
    Const(f64),
    /// f(t) = t^μ
    Power(f64),
    /// f(t) = Σ coeffs[i] · tⁱ
    Poly(Vec<f64>),
    /// f(t) = e^{λt}
    Exp(f64),
    /// f(t) = (ln(t/base))^k
    LogPower { k: u32, base: f64 },
    /// f(t) = sin(ωt)
    Sin(f64),
}

impl FunctionSpec {
    /// Evaluates f at t.
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            FunctionSpec::Const(c) => *c,
            FunctionSpec::Power(mu) => t.powf(*mu),
            FunctionSpec::Poly(coeffs) => {
                coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
            }
            FunctionSpec::Exp(lambda) => (lambda * t).exp(),
            FunctionSpec::LogPower { k, base } => (t / base).ln().powi(*k as i32),
            FunctionSpec::Sin(omega) => (omega * t).sin(),
        }
    }

    /// The exponent p with f(t) = O(t^p) as t → 0⁺, ignoring logarithmic
    /// factors. Quadrature layers use this to keep kernel·f integrable when
    /// the integration interval starts at zero.
    pub fn lowest_power(&self) -> f64 {
        match self {
            FunctionSpec::Const(_) => 0.0,
            FunctionSpec::Power(mu) => *mu,
            FunctionSpec::Poly(coeffs) => coeffs
                .iter()
                .position(|&c| c != 0.0)
                .map_or(0.0, |i| i as f64),
            FunctionSpec::Exp(_) => 0.0,
            // Logs diverge slower than any power, so 0 is the right grading.
            FunctionSpec::LogPower { .. } => 0.0,
            FunctionSpec::Sin(_) => 1.0,
        }
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::Const(c) => write!(f, "const:{c:?}"),
            FunctionSpec::Power(mu) => write!(f, "pow:{mu:?}"),
            FunctionSpec::Poly(coeffs) => {
                write!(f, "poly:")?;
                for (i, c) in coeffs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c:?}")?;
                }
                Ok(())
            }
            FunctionSpec::Exp(lambda) => write!(f, "exp:{lambda:?}"),
            FunctionSpec::LogPower { k, base } => write!(f, "logpow:{k},{base:?}"),
            FunctionSpec::Sin(omega) => write!(f, "sin:{omega:?}"),
        }
    }
}

/// A syntax or validation error in a function spec string, pointing at the
/// byte offset of the offending token.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub position: usize,
    pub token: String,
    pub reason: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "invalid function spec at byte {} ({:?}): {}",
            self.position, self.token, self.reason
        )
    }
}

impl Error for ParseError {}

fn err(position: usize, token: &str, reason: impl Into<String>) -> ParseError {
    ParseError { position, token: token.to_string(), reason: reason.into() }
}

/// Splits the argument list on commas, parsing each piece as a finite f64 and
/// remembering where it started for error messages.
fn parse_args(args: &str, args_start: usize) -> Result<Vec<(f64, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut offset = args_start;
    for piece in args.split(',') {
        let trimmed = piece.trim();
        let pos = offset + (piece.len() - piece.trim_start().len());
        let value: f64 = trimmed
            .parse()
            .map_err(|_| err(pos, trimmed, "expected a real number"))?;
        if !value.is_finite() {
            return Err(err(pos, trimmed, "argument must be finite"));
        }
        out.push((value, pos));
        offset += piece.len() + 1; // account for the comma
    }
    Ok(out)
}

fn expect_arity(
    name: &str,
    args: &[(f64, usize)],
    want: usize,
    name_pos: usize,
) -> Result<(), ParseError> {
    if args.len() == want {
        Ok(())
    } else {
        Err(err(
            name_pos,
            name,
            format!("{name} takes exactly {want} argument(s), got {}", args.len()),
        ))
    }
}

impl FromStr for FunctionSpec {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let colon = s
            .find(':')
            .ok_or_else(|| err(0, s, "expected 'name:args', e.g. 'pow:0.5'"))?;
        let name = s[..colon].trim();
        let args = parse_args(&s[colon + 1..], colon + 1)?;
        match name {
            "const" => {
                expect_arity(name, &args, 1, 0)?;
                Ok(FunctionSpec::Const(args[0].0))
            }
            "pow" => {
                expect_arity(name, &args, 1, 0)?;
                Ok(FunctionSpec::Power(args[0].0))
            }
            "poly" => Ok(FunctionSpec::Poly(args.into_iter().map(|(v, _)| v).collect())),
            "exp" => {
                expect_arity(name, &args, 1, 0)?;
                Ok(FunctionSpec::Exp(args[0].0))
            }
            "logpow" => {
                expect_arity(name, &args, 2, 0)?;
                let (k_raw, k_pos) = args[0];
                let (base, base_pos) = args[1];
                if k_raw < 0.0 || k_raw.fract() != 0.0 || k_raw > u32::MAX as f64 {
                    return Err(err(
                        k_pos,
                        &k_raw.to_string(),
                        "logpow exponent must be a non-negative integer",
                    ));
                }
                if base <= 0.0 {
                    return Err(err(
                        base_pos,
                        &base.to_string(),
                        "logpow base must be positive",
                    ));
                }
                Ok(FunctionSpec::LogPower { k: k_raw as u32, base })
            }
            "sin" => {
                expect_arity(name, &args, 1, 0)?;
                Ok(FunctionSpec::Sin(args[0].0))
            }
            _ => Err(err(
                0,
                name,
                "unknown function name (expected const, pow, poly, exp, logpow, or sin)",
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn parses_and_evaluates_each_kind() {
        let f: FunctionSpec = "const:2.5".parse().unwrap();
        assert_eq!(f.eval(17.0), 2.5);

        let f: FunctionSpec = "pow:0.5".parse().unwrap();
        assert_relative_eq!(f.eval(4.0), 2.0, max_relative = 1e-15);

        let f: FunctionSpec = "poly:1,0,2".parse().unwrap();
        assert_relative_eq!(f.eval(3.0), 1.0 + 2.0 * 9.0, max_relative = 1e-15);

        let f: FunctionSpec = "exp:-1".parse().unwrap();
        assert_relative_eq!(f.eval(2.0), (-2.0f64).exp(), max_relative = 1e-15);

        let f: FunctionSpec = "logpow:2,1".parse().unwrap();
        let e = std::f64::consts::E;
        assert_relative_eq!(f.eval(e * e), 4.0, max_relative = 1e-14);

        let f: FunctionSpec = "sin:2".parse().unwrap();
        assert_relative_eq!(f.eval(0.25 * std::f64::consts::PI), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn poly_matches_termwise_sum() {
        let f: FunctionSpec = "poly:0.5,-1,0,3".parse().unwrap();
        for t in [0.0, 0.3, 1.7, 4.0] {
            let manual = 0.5 - t + 3.0 * t * t * t;
            assert_relative_eq!(f.eval(t), manual, max_relative = 1e-14, epsilon = 1e-15);
        }
    }

    #[test]
    fn lowest_power_reflects_leading_behavior() {
        assert_eq!("const:3".parse::<FunctionSpec>().unwrap().lowest_power(), 0.0);
        assert_eq!("pow:-0.25".parse::<FunctionSpec>().unwrap().lowest_power(), -0.25);
        assert_eq!("poly:0,0,5".parse::<FunctionSpec>().unwrap().lowest_power(), 2.0);
        assert_eq!("poly:0,0,0".parse::<FunctionSpec>().unwrap().lowest_power(), 0.0);
        assert_eq!("exp:1".parse::<FunctionSpec>().unwrap().lowest_power(), 0.0);
        assert_eq!("sin:3".parse::<FunctionSpec>().unwrap().lowest_power(), 1.0);
        assert_eq!("logpow:1,1".parse::<FunctionSpec>().unwrap().lowest_power(), 0.0);
    }

    #[test]
    fn display_round_trips() {
        for s in ["const:2.5", "pow:-0.5", "poly:1.0,0.0,2.0", "exp:-1.5", "logpow:2,1.0", "sin:3.0"] {
            let f: FunctionSpec = s.parse().unwrap();
            let round: FunctionSpec = f.to_string().parse().unwrap();
            assert_eq!(f, round);
        }
    }

    #[test]
    fn rejects_missing_colon() {
        let e = "pow".parse::<FunctionSpec>().unwrap_err();
        assert_eq!(e.position, 0);
        assert!(e.reason.contains("name:args"));
    }

    #[test]
    fn rejects_unknown_name() {
        let e = "cosh:1".parse::<FunctionSpec>().unwrap_err();
        assert_eq!(e.token, "cosh");
    }

    #[test]
    fn rejects_bad_number_with_position() {
        let e = "poly:1,xyz,3".parse::<FunctionSpec>().unwrap_err();
        assert_eq!(e.position, 7);
        assert_eq!(e.token, "xyz");
    }

    #[test]
    fn rejects_wrong_arity() {
        let e = "pow:1,2".parse::<FunctionSpec>().unwrap_err();
        assert!(e.reason.contains("exactly 1"));
    }

    #[test]
    fn rejects_non_finite_argument() {
        assert!("exp:inf".parse::<FunctionSpec>().is_err());
        assert!("const:nan".parse::<FunctionSpec>().is_err());
    }

    #[test]
    fn rejects_bad_logpow_parameters() {
        assert!("logpow:1.5,1".parse::<FunctionSpec>().is_err());
        assert!("logpow:-1,1".parse::<FunctionSpec>().is_err());
        assert!("logpow:2,0".parse::<FunctionSpec>().is_err());
        assert!("logpow:2,-3".parse::<FunctionSpec>().is_err());
    }
}
