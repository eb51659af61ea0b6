//! Gate catalog and gate selection from the command line.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use opent_core::{gates, schmidt, BipartiteOperator, Error};

use crate::error::{CliError, CliResult};
use crate::format;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NamedGate {
    Identity,
    Swap,
    Cnot,
    Cz,
    /// `exp(iθ σz⊗σz)` on two qubits.
    ExpZz(f64),
    /// `Σ_ab e^{iθab} |ab⟩⟨ab|` on two qudits.
    ControlledPhase(f64),
}

impl NamedGate {
    pub const CATALOG: &'static str = "identity, swap, cnot, cz, expzz(θ), controlled-phase(θ)";

    pub fn build(&self, d: usize) -> CliResult<BipartiteOperator> {
        if d < 2 {
            return Err(CliError::dimension(format!("local dimension must be at least 2, got {d}")));
        }
        let qubits_only = |name: &str| {
            if d == 2 {
                Ok(())
            } else {
                Err(CliError::Core(Error::UnsupportedDimension(format!(
                    "{name} is defined for d = 2 only, got d = {d}"
                ))))
            }
        };
        Ok(match *self {
            Self::Identity => gates::identity(d),
            Self::Swap => gates::swap(d),
            Self::Cnot => {
                qubits_only("cnot")?;
                gates::cnot()
            }
            Self::Cz => {
                qubits_only("cz")?;
                gates::cz()
            }
            Self::ExpZz(theta) => {
                qubits_only("expzz")?;
                schmidt::exp_zz(theta)
            }
            Self::ControlledPhase(theta) => gates::controlled_phase(d, theta),
        })
    }
}

impl fmt::Display for NamedGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Identity => f.write_str("identity"),
            Self::Swap => f.write_str("swap"),
            Self::Cnot => f.write_str("cnot"),
            Self::Cz => f.write_str("cz"),
            Self::ExpZz(t) => write!(f, "expzz({})", format::sig17(*t)),
            Self::ControlledPhase(t) => write!(f, "controlled-phase({})", format::sig17(*t)),
        }
    }
}

impl FromStr for NamedGate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim().to_ascii_lowercase();
        let (name, arg) = match s.split_once('(') {
            Some((name, rest)) => {
                let arg = rest.strip_suffix(')').ok_or_else(|| format!("missing ')' in gate '{s}'"))?;
                (name.trim(), Some(parse_angle(arg)?))
            }
            None => (s.as_str(), None),
        };
        let no_arg = |g: Self| match arg {
            None => Ok(g),
            Some(_) => Err(format!("gate '{name}' takes no parameter")),
        };
        let needs_arg = |make: fn(f64) -> Self| {
            arg.map(make).ok_or_else(|| format!("gate '{name}' needs an angle, e.g. {name}(pi/4)"))
        };
        match name {
            "identity" | "id" => no_arg(Self::Identity),
            "swap" => no_arg(Self::Swap),
            "cnot" | "cx" => no_arg(Self::Cnot),
            "cz" => no_arg(Self::Cz),
            "expzz" => needs_arg(Self::ExpZz),
            "controlled-phase" | "cphase" => needs_arg(Self::ControlledPhase),
            _ => Err(format!("unknown gate '{name}'; known gates: {}", Self::CATALOG)),
        }
    }
}

/// Angle in radians: a number, or a multiple of `pi` such as `pi/4`,
/// `3*pi/8`, `-pi` or `0.5pi`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    let bad = || format!("cannot parse angle '{s}'");
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().map_err(|_| bad())?),
        None => (t.as_str(), 1.0),
    };
    let value = match num.strip_suffix("pi") {
        Some(coef) => {
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            let c = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| bad())?,
            };
            c * PI
        }
        None => num.parse::<f64>().map_err(|_| bad())?,
    } / den;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// A catalog gate or a matrix file, together with the local dimension.
#[derive(Debug, Clone, PartialEq)]
pub enum GateSource {
    Named(NamedGate),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    pub source: GateSource,
    /// Local dimension; for files it is the first factor's dimension and
    /// defaults to the square root of the matrix size.
    pub dim: Option<usize>,
}

/// Operator resolved from a [`GateSpec`].
#[derive(Debug, Clone)]
pub struct ResolvedGate {
    pub label: String,
    pub operator: BipartiteOperator,
}

impl GateSpec {
    pub fn named(gate: NamedGate, dim: usize) -> Self {
        Self { source: GateSource::Named(gate), dim: Some(dim) }
    }

    pub fn resolve(&self) -> CliResult<ResolvedGate> {
        match &self.source {
            GateSource::Named(g) => {
                Ok(ResolvedGate { label: g.to_string(), operator: g.build(self.dim.unwrap_or(2))? })
            }
            GateSource::File(path) => {
                let m = format::read_matrix(path)?;
                if !m.is_square() {
                    return Err(CliError::dimension(format!(
                        "{} holds a {}x{} matrix; operators must be square",
                        path.display(),
                        m.rows(),
                        m.cols()
                    )));
                }
                let n = m.rows();
                let dim_a = match self.dim {
                    Some(d) => d,
                    None => exact_sqrt(n).ok_or_else(|| {
                        CliError::dimension(format!("matrix size {n} is not d² for an integer d; pass --dim"))
                    })?,
                };
                if dim_a == 0 || n % dim_a != 0 {
                    return Err(CliError::dimension(format!("matrix size {n} is not divisible by --dim {dim_a}")));
                }
                let operator = BipartiteOperator::new(m, dim_a, n / dim_a)?;
                Ok(ResolvedGate { label: path.display().to_string(), operator })
            }
        }
    }
}

fn exact_sqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}
