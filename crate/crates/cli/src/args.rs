use clap::{Args, ValueEnum};
use tempwork::temporal_bell::{CHSHSettings, ThreeSettingConvention};
use tempwork::tpm::{BackwardMode, Evolution};
use tempwork::{BlochVector, DensityOperator, ProtocolSpec, TwoLevelHamiltonian, Unitary};

use crate::document::{Format, ResultDocument};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvolutionArg {
    Quench,
    FinalHt,
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ConventionArg {
    Plus,
    #[default]
    Minus,
}

impl From<ConventionArg> for ThreeSettingConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Plus => ThreeSettingConvention::Plus,
            ConventionArg::Minus => ThreeSettingConvention::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum BackwardArg {
    #[default]
    Exact,
    InitialGenerated,
}

impl From<BackwardArg> for BackwardMode {
    fn from(b: BackwardArg) -> Self {
        match b {
            BackwardArg::Exact => BackwardMode::ExactInverse,
            BackwardArg::InitialGenerated => BackwardMode::InitialGenerated,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Jarzynski,
    Moment,
    DeltaF,
    WorkBell,
    ExpWorkBell,
    Chsh,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Jarzynski => "jarzynski",
            Quantity::Moment => "moment",
            Quantity::DeltaF => "delta-f",
            Quantity::WorkBell => "work-bell",
            Quantity::ExpWorkBell => "exp-work-bell",
            Quantity::Chsh => "chsh",
        }
    }
}

/// Flags shared by every computational subcommand.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Initial level splitting E (levels ±E)
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub energy: f64,
    /// Final level splitting (defaults to --energy)
    #[arg(long, allow_hyphen_values = true)]
    pub energy_final: Option<f64>,
    /// Inverse temperature
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub beta: f64,

    /// Initial Hamiltonian axis as THETA,PHI in radians (default z)
    #[arg(long, value_name = "THETA,PHI", allow_hyphen_values = true, conflicts_with = "axis_i_xyz")]
    pub axis_i: Option<String>,
    #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
    pub axis_i_xyz: Option<String>,
    /// Final Hamiltonian axis as THETA,PHI in radians (default x)
    #[arg(long, value_name = "THETA,PHI", allow_hyphen_values = true, conflicts_with = "axis_f_xyz")]
    pub axis_f: Option<String>,
    #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
    pub axis_f_xyz: Option<String>,

    #[arg(long, value_name = "THETA,PHI", allow_hyphen_values = true, conflicts_with = "axis_a1_xyz")]
    pub axis_a1: Option<String>,
    #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
    pub axis_a1_xyz: Option<String>,
    #[arg(long, value_name = "THETA,PHI", allow_hyphen_values = true, conflicts_with = "axis_a2_xyz")]
    pub axis_a2: Option<String>,
    #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
    pub axis_a2_xyz: Option<String>,
    #[arg(long, value_name = "THETA,PHI", allow_hyphen_values = true, conflicts_with = "axis_b1_xyz")]
    pub axis_b1: Option<String>,
    #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
    pub axis_b1_xyz: Option<String>,
    #[arg(long, value_name = "THETA,PHI", allow_hyphen_values = true, conflicts_with = "axis_b2_xyz")]
    pub axis_b2: Option<String>,
    #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
    pub axis_b2_xyz: Option<String>,

    /// Evolution time for --evolution final-ht
    #[arg(long, allow_hyphen_values = true)]
    pub time: Option<f64>,
    #[arg(long, value_enum, default_value = "quench")]
    pub evolution: EvolutionArg,
    /// Rotation axis of an explicit unitary, THETA,PHI
    #[arg(long, value_name = "THETA,PHI", allow_hyphen_values = true)]
    pub unitary_axis: Option<String>,
    /// Rotation half-angle of an explicit unitary: U = e^{i phase}(cos a I - i sin a n.sigma)
    #[arg(long, allow_hyphen_values = true)]
    pub unitary_angle: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub unitary_phase: f64,

    /// Moment order
    #[arg(long)]
    pub order: Option<u32>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Scan descriptor PARAM=START:STOP:STEPS
    #[arg(long, value_name = "PARAM=START:STOP:STEPS", allow_hyphen_values = true)]
    pub scan: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, value_enum, default_value = "minus")]
    pub convention: ConventionArg,
    /// Use the optimal measurement axes
    #[arg(long)]
    pub optimal: bool,
    #[arg(long, default_value_t = 50)]
    pub restarts: usize,
    /// Quantity evaluated by `scan` and `optimize`
    #[arg(long, value_enum)]
    pub quantity: Option<Quantity>,
    /// Bloch vector of the measured state (default maximally mixed)
    #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
    pub state_xyz: Option<String>,
    /// Backward protocol used by `crooks`
    #[arg(long, value_enum, default_value = "exact")]
    pub backward: BackwardArg,
}

fn parse_list(flag: &str, text: &str, len: usize) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != len {
        return Err(CliError::Usage(format!("--{flag} expects {len} comma-separated numbers, got '{text}'")));
    }
    parts
        .iter()
        .map(|p| {
            p.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Usage(format!("--{flag}: '{p}' is not a finite number")))
        })
        .collect()
}

pub fn parse_angles(flag: &str, text: &str) -> Result<BlochVector, CliError> {
    let v = parse_list(flag, text, 2)?;
    Ok(BlochVector::from_angles(v[0], v[1])?)
}

pub fn parse_xyz(flag: &str, text: &str) -> Result<BlochVector, CliError> {
    let v = parse_list(flag, text, 3)?;
    BlochVector::new(v[0], v[1], v[2]).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

fn axis(
    name: &str,
    angles: &Option<String>,
    xyz: &Option<String>,
) -> Result<Option<BlochVector>, CliError> {
    match (angles, xyz) {
        (Some(a), _) => parse_angles(name, a).map(Some),
        (None, Some(v)) => parse_xyz(&format!("{name}-xyz"), v).map(Some),
        (None, None) => Ok(None),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvolutionChoice {
    Quench,
    FinalHt { time: f64 },
    Explicit { axis: BlochVector, angle: f64, phase: f64 },
}

/// Fully resolved two-point-measurement protocol parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Protocol {
    pub energy: f64,
    pub energy_final: f64,
    pub beta: f64,
    pub axis_i: BlochVector,
    pub axis_f: BlochVector,
    pub evolution: EvolutionChoice,
}

impl Protocol {
    pub fn spec(&self) -> Result<ProtocolSpec, CliError> {
        let initial = TwoLevelHamiltonian::new(self.energy, self.axis_i)?;
        let fin = TwoLevelHamiltonian::new(self.energy_final, self.axis_f)?;
        let evolution = match self.evolution {
            EvolutionChoice::Quench => Evolution::SuddenQuench,
            EvolutionChoice::FinalHt { time } => Evolution::FinalGenerated { time },
            EvolutionChoice::Explicit { axis, angle, phase } => {
                Evolution::Explicit(Unitary::from_axis_angle(axis, angle, phase)?)
            }
        };
        Ok(ProtocolSpec::new(initial, fin, self.beta, evolution)?)
    }

    pub fn echo(&self, doc: &mut ResultDocument) {
        doc.echo_number("energy", self.energy);
        doc.echo_number("energy_final", self.energy_final);
        doc.echo_number("beta", self.beta);
        doc.echo_vector("axis_i", self.axis_i.components());
        doc.echo_vector("axis_f", self.axis_f.components());
        match self.evolution {
            EvolutionChoice::Quench => doc.echo("evolution", "quench"),
            EvolutionChoice::FinalHt { time } => {
                doc.echo("evolution", "final-ht");
                doc.echo_number("time", time);
            }
            EvolutionChoice::Explicit { axis, angle, phase } => {
                doc.echo("evolution", "explicit");
                doc.echo_vector("unitary_axis", axis.components());
                doc.echo_number("unitary_angle", angle);
                doc.echo_number("unitary_phase", phase);
            }
        }
    }
}

impl Common {
    pub fn protocol(&self) -> Result<Protocol, CliError> {
        let axis_i = axis("axis-i", &self.axis_i, &self.axis_i_xyz)?.unwrap_or(BlochVector::Z);
        let axis_f = axis("axis-f", &self.axis_f, &self.axis_f_xyz)?.unwrap_or(BlochVector::X);
        let evolution = match self.evolution {
            EvolutionArg::Quench => {
                if self.time.is_some() {
                    return Err(CliError::Usage("--time requires --evolution final-ht".into()));
                }
                EvolutionChoice::Quench
            }
            EvolutionArg::FinalHt => EvolutionChoice::FinalHt { time: self.time.unwrap_or(0.0) },
            EvolutionArg::Explicit => {
                let axis = match &self.unitary_axis {
                    Some(a) => parse_angles("unitary-axis", a)?,
                    None => return Err(CliError::Usage("--evolution explicit requires --unitary-axis".into())),
                };
                let angle = self
                    .unitary_angle
                    .ok_or_else(|| CliError::Usage("--evolution explicit requires --unitary-angle".into()))?;
                EvolutionChoice::Explicit { axis, angle, phase: self.unitary_phase }
            }
        };
        if !matches!(self.evolution, EvolutionArg::Explicit)
            && (self.unitary_axis.is_some() || self.unitary_angle.is_some())
        {
            return Err(CliError::Usage("--unitary-axis/--unitary-angle require --evolution explicit".into()));
        }
        Ok(Protocol {
            energy: self.energy,
            energy_final: self.energy_final.unwrap_or(self.energy),
            beta: self.beta,
            axis_i,
            axis_f,
            evolution,
        })
    }

    /// The four CHSH axes: `--optimal` or all four `--axis-a1 ... --axis-b2`.
    pub fn chsh_axes(&self, optimal: impl FnOnce() -> CHSHSettings) -> Result<CHSHSettings, CliError> {
        let given = [
            axis("axis-a1", &self.axis_a1, &self.axis_a1_xyz)?,
            axis("axis-a2", &self.axis_a2, &self.axis_a2_xyz)?,
            axis("axis-b1", &self.axis_b1, &self.axis_b1_xyz)?,
            axis("axis-b2", &self.axis_b2, &self.axis_b2_xyz)?,
        ];
        if self.optimal {
            if given.iter().any(Option::is_some) {
                return Err(CliError::Usage("--optimal cannot be combined with explicit --axis-a1/a2/b1/b2".into()));
            }
            return Ok(optimal());
        }
        match given {
            [Some(a1), Some(a2), Some(b1), Some(b2)] => Ok(CHSHSettings::new(a1, a2, b1, b2)),
            _ => Err(CliError::Usage("give --optimal or all of --axis-a1, --axis-a2, --axis-b1, --axis-b2".into())),
        }
    }

    /// Three-setting axes `a = --axis-a1`, `b1`, `b2`.
    pub fn bell3_axes(&self) -> Result<(BlochVector, BlochVector, BlochVector), CliError> {
        let a = axis("axis-a1", &self.axis_a1, &self.axis_a1_xyz)?;
        let b1 = axis("axis-b1", &self.axis_b1, &self.axis_b1_xyz)?;
        let b2 = axis("axis-b2", &self.axis_b2, &self.axis_b2_xyz)?;
        match (a, b1, b2) {
            (Some(a), Some(b1), Some(b2)) => Ok((a, b1, b2)),
            _ => Err(CliError::Usage("bell3 needs --axis-a1, --axis-b1 and --axis-b2".into())),
        }
    }

    pub fn state(&self) -> Result<DensityOperator, CliError> {
        match &self.state_xyz {
            None => Ok(DensityOperator::maximally_mixed()),
            Some(text) => {
                let v = parse_list("state-xyz", text, 3)?;
                Ok(DensityOperator::from_bloch([v[0], v[1], v[2]])?)
            }
        }
    }

    pub fn order_or(&self, default: u32) -> u32 {
        self.order.unwrap_or(default)
    }
}

pub fn echo_chsh(doc: &mut ResultDocument, s: &CHSHSettings) {
    doc.echo_vector("axis_a1", s.a1.components());
    doc.echo_vector("axis_a2", s.a2.components());
    doc.echo_vector("axis_b1", s.b1.components());
    doc.echo_vector("axis_b2", s.b2.components());
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanParam {
    Beta,
    Energy,
    Time,
    AngleThetaF,
}

impl ScanParam {
    pub fn name(self) -> &'static str {
        match self {
            ScanParam::Beta => "beta",
            ScanParam::Energy => "energy",
            ScanParam::Time => "time",
            ScanParam::AngleThetaF => "angle-theta-f",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanDescriptor {
    pub param: ScanParam,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl ScanDescriptor {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("scan descriptor '{text}' must look like PARAM=START:STOP:STEPS"));
        let (name, range) = text.split_once('=').ok_or_else(bad)?;
        let param = match name.trim() {
            "beta" => ScanParam::Beta,
            "energy" => ScanParam::Energy,
            "time" => ScanParam::Time,
            "angle-theta-f" => ScanParam::AngleThetaF,
            other => {
                return Err(CliError::Usage(format!(
                    "cannot scan '{other}'; scannable parameters are beta, energy, time, angle-theta-f"
                )))
            }
        };
        let parts: Vec<&str> = range.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let num = |s: &str| s.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
        let start = num(parts[0])?;
        let stop = num(parts[1])?;
        let steps: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if steps < 2 {
            return Err(CliError::Usage(format!("scan needs at least 2 steps, got {steps}")));
        }
        Ok(Self { param, start, stop, steps })
    }

    pub fn points(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i == self.steps - 1 {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_descriptor_parsing() {
        let d = ScanDescriptor::parse("beta=0:3:31").unwrap();
        assert_eq!(d.param, ScanParam::Beta);
        let p = d.points();
        assert_eq!(p.len(), 31);
        assert_eq!(p[0], 0.0);
        assert_eq!(p[30], 3.0);
        assert!((p[10] - 1.0).abs() < 1e-15);
        assert!(ScanDescriptor::parse("beta=0:3:1").is_err());
        assert!(ScanDescriptor::parse("order=1:3:3").is_err());
        assert!(ScanDescriptor::parse("beta=0:3").is_err());
        assert!(ScanDescriptor::parse("time=-1:1:5").is_ok());
    }

    #[test]
    fn axis_forms() {
        let a = parse_angles("axis-i", "1.5707963267948966,0").unwrap();
        assert!((a.x() - 1.0).abs() < 1e-15);
        assert!(parse_xyz("axis-i-xyz", "0,0,2").is_err());
        assert!(parse_xyz("axis-i-xyz", "0,0,1").is_ok());
        assert!(parse_angles("axis-i", "1,2,3").is_err());
        assert!(parse_angles("axis-i", "nan,0").is_err());
    }
}
