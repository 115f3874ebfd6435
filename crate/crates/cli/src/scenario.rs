//! Line-oriented `key = value` scenario files.
//!
//! ```text
//! # comment
//! name = rb87
//! mass_kg = 1.443160648e-25
//! N = 1e5
//! a_nm = 5.77
//! kappa_si = 3e39
//! omega0_hz = 100
//! sweep = N 1e4 1e6 5 log
//! ```
//!
//! Values are converted to SI on input. `omega0_hz` is an ordinary
//! frequency f; the angular frequency is 2πf.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use bosecrit::scale::{HealingInput, RB87_MASS};
use bosecrit::{FormulaMode, GasParameters, GasSystem, PhysicalConstants};

use crate::CliError;

/// Numeric keys, with the factor that takes each to SI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Key {
    MassKg,
    ParticleNumber,
    Lambda,
    KappaSi,
    ANm,
    AM,
    Omega0Hz,
    Omega0RadS,
    AlphaPerM2,
    XiUm,
    NPerM3,
    TcNk,
    TNk,
    MuJ,
    Phi,
    RMaxUm,
    GridPoints,
    MaxIterations,
}

impl Key {
    pub const ALL: [Key; 18] = [
        Key::MassKg,
        Key::ParticleNumber,
        Key::Lambda,
        Key::KappaSi,
        Key::ANm,
        Key::AM,
        Key::Omega0Hz,
        Key::Omega0RadS,
        Key::AlphaPerM2,
        Key::XiUm,
        Key::NPerM3,
        Key::TcNk,
        Key::TNk,
        Key::MuJ,
        Key::Phi,
        Key::RMaxUm,
        Key::GridPoints,
        Key::MaxIterations,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Key::MassKg => "mass_kg",
            Key::ParticleNumber => "N",
            Key::Lambda => "lambda",
            Key::KappaSi => "kappa_si",
            Key::ANm => "a_nm",
            Key::AM => "a_m",
            Key::Omega0Hz => "omega0_hz",
            Key::Omega0RadS => "omega0_rad_s",
            Key::AlphaPerM2 => "alpha_per_m2",
            Key::XiUm => "xi_um",
            Key::NPerM3 => "n_per_m3",
            Key::TcNk => "tc_nk",
            Key::TNk => "t_nk",
            Key::MuJ => "mu_j",
            Key::Phi => "phi",
            Key::RMaxUm => "r_max_um",
            Key::GridPoints => "grid_points",
            Key::MaxIterations => "max_iterations",
        }
    }

    /// Converts a value in the key's own unit to SI. Prefixes divide so that
    /// e.g. 200 nK becomes exactly the double nearest 2e-7 K.
    fn to_si(self, v: f64) -> f64 {
        match self {
            Key::ANm | Key::TcNk | Key::TNk => v / 1e9,
            Key::XiUm | Key::RMaxUm => v / 1e6,
            Key::Omega0Hz => v * 2.0 * PI,
            _ => v,
        }
    }

    fn is_gas(self) -> bool {
        matches!(
            self,
            Key::MassKg
                | Key::ParticleNumber
                | Key::Lambda
                | Key::KappaSi
                | Key::Omega0Hz
                | Key::Omega0RadS
                | Key::AlphaPerM2
        )
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Key {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Key::ALL.into_iter().find(|k| k.name() == s).ok_or(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub key: Key,
    pub start: f64,
    pub end: f64,
    pub points: usize,
    pub log: bool,
}

impl Sweep {
    /// Sweep values in the key's own units.
    pub fn values(&self) -> Vec<f64> {
        if self.log {
            bosecrit::scale::log_spaced(self.start, self.end, self.points)
        } else if self.points == 1 {
            vec![self.start]
        } else {
            (0..self.points)
                .map(|i| {
                    if i == self.points - 1 {
                        self.end
                    } else {
                        self.start + (self.end - self.start) * i as f64 / (self.points - 1) as f64
                    }
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub mode: FormulaMode,
    pub thermal_bath: bool,
    pub sweep: Option<Sweep>,
    /// Numeric entries in the units they were written in.
    values: BTreeMap<Key, f64>,
}

fn parse_error(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_number(line: usize, key: &str, raw: &str) -> Result<f64, CliError> {
    raw.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| parse_error(line, format!("{key}: '{raw}' is not a finite number")))
}

fn parse_sweep(line: usize, raw: &str) -> Result<Sweep, CliError> {
    let parts: Vec<&str> = raw.split_whitespace().collect();
    let usage = "expected 'sweep = <key> <start> <end> <points> [log]'";
    if parts.len() != 4 && parts.len() != 5 {
        return Err(parse_error(line, usage));
    }
    let key: Key = parts[0]
        .parse()
        .map_err(|_| parse_error(line, format!("sweep axis '{}' is not a parameter", parts[0])))?;
    let start = parse_number(line, "sweep start", parts[1])?;
    let end = parse_number(line, "sweep end", parts[2])?;
    let points: usize = parts[3]
        .parse()
        .ok()
        .filter(|p| *p >= 1)
        .ok_or_else(|| parse_error(line, format!("sweep points '{}' must be a positive integer", parts[3])))?;
    let log = match parts.get(4) {
        None => false,
        Some(&"log") => true,
        Some(other) => return Err(parse_error(line, format!("unknown sweep flag '{other}'; {usage}"))),
    };
    if log && !(start > 0.0 && end > 0.0) {
        return Err(parse_error(line, "log sweeps need positive end points"));
    }
    Ok(Sweep {
        key,
        start,
        end,
        points,
        log,
    })
}

/// Built-in scenarios, addressable by name in place of a file path.
pub fn builtin(name: &str) -> Option<&'static str> {
    match name {
        "rb87-paper" => Some(RB87_PAPER),
        _ => None,
    }
}

pub const RB87_PAPER: &str = "\
# 87Rb scale estimate: xi = 0.4 um, a = 5.77 nm (read as nanometres),
# n = 1e19 m^-3, T_c = 200 nK
name = rb87-paper
a_nm = 5.77
xi_um = 0.4
n_per_m3 = 1e19
tc_nk = 200
# trap and atom number for the temperature commands; kappa at its quoted magnitude
mass_kg = 1.443160648e-25
N = 100000
omega0_hz = 100
kappa_si = 3e39
";

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario, CliError> {
        let mut name = None;
        let mut mode = None;
        let mut bath = None;
        let mut sweep = None;
        let mut values = BTreeMap::new();
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();

        for (index, raw_line) in text.lines().enumerate() {
            let line = index + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| parse_error(line, format!("expected 'key = value', got '{content}'")))?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || value.is_empty() || value.contains('=') {
                return Err(parse_error(line, format!("expected 'key = value', got '{content}'")));
            }
            if let Some(first) = seen.insert(key.to_string(), line) {
                return Err(parse_error(line, format!("'{key}' already set on line {first}")));
            }
            match key {
                "name" => name = Some(value.to_string()),
                "mode" => {
                    mode = Some(
                        value
                            .parse::<FormulaMode>()
                            .map_err(|_| parse_error(line, format!("unknown mode '{value}'")))?,
                    )
                }
                "bath" => {
                    bath = Some(match value {
                        "true" | "on" => true,
                        "false" | "off" => false,
                        _ => return Err(parse_error(line, format!("bath must be true or false, got '{value}'"))),
                    })
                }
                "sweep" => sweep = Some(parse_sweep(line, value)?),
                other => {
                    let key: Key = other
                        .parse()
                        .map_err(|_| parse_error(line, format!("unknown key '{other}'")))?;
                    values.insert(key, parse_number(line, other, value)?);
                }
            }
        }
        for (a, b) in [(Key::ANm, Key::AM), (Key::Omega0Hz, Key::Omega0RadS)] {
            if values.contains_key(&a) && values.contains_key(&b) {
                return Err(CliError::Validation(format!("give only one of {a} and {b}")));
            }
        }
        let scenario = Scenario {
            name: name.unwrap_or_else(|| "unnamed".to_string()),
            mode: mode.unwrap_or_default(),
            thermal_bath: bath.unwrap_or(true),
            sweep,
            values,
        };
        if scenario.has_gas() {
            scenario.gas()?;
        }
        Ok(scenario)
    }

    fn si(&self, key: Key) -> Option<f64> {
        self.values.get(&key).map(|v| key.to_si(*v))
    }

    pub fn value(&self, key: Key) -> Option<f64> {
        self.values.get(&key).copied()
    }

    /// A copy with one entry replaced (in the key's own units), revalidated.
    pub fn with(&self, key: Key, value: f64) -> Result<Scenario, CliError> {
        let mut next = self.clone();
        next.values.insert(key, value);
        if next.has_gas() {
            next.gas()?;
        }
        Ok(next)
    }

    pub fn has_gas(&self) -> bool {
        self.values.keys().any(|k| k.is_gas())
    }

    pub fn scattering_length(&self) -> Option<f64> {
        self.si(Key::ANm).or_else(|| self.si(Key::AM))
    }

    pub fn gas_parameters(&self) -> Result<GasParameters, CliError> {
        let mass = self
            .si(Key::MassKg)
            .ok_or_else(|| CliError::Validation("mass_kg is required".into()))?;
        let particle_number = self
            .si(Key::ParticleNumber)
            .ok_or_else(|| CliError::Validation("N is required".into()))?;
        let mut lambda = self.si(Key::Lambda);
        let kappa = self.si(Key::KappaSi);
        let a = self.scattering_length();
        // a = 0 on its own is the ideal gas
        if lambda.is_none() && kappa.is_none() && a == Some(0.0) {
            lambda = Some(0.0);
        }
        Ok(GasParameters {
            mass,
            particle_number,
            lambda,
            kappa,
            scattering_length: a,
            alpha: self.si(Key::AlphaPerM2),
            omega0: self.si(Key::Omega0Hz).or_else(|| self.si(Key::Omega0RadS)),
        })
    }

    pub fn gas(&self) -> Result<GasSystem, CliError> {
        Ok(self.gas_parameters()?.validate(&PhysicalConstants::CODATA)?)
    }

    pub fn healing_input(&self) -> Result<HealingInput, CliError> {
        let need = |key: Key| {
            self.si(key)
                .ok_or_else(|| CliError::Validation(format!("{key} is required for the scale estimate")))
        };
        Ok(HealingInput {
            healing_length: need(Key::XiUm)?,
            scattering_length: self
                .scattering_length()
                .ok_or_else(|| CliError::Validation("a_nm or a_m is required for the scale estimate".into()))?,
            central_density: need(Key::NPerM3)?,
            tc: need(Key::TcNk)?,
            mass: self.si(Key::MassKg).unwrap_or(RB87_MASS),
        })
    }

    pub fn temperature(&self) -> Option<f64> {
        self.si(Key::TNk)
    }

    pub fn chemical_potential(&self) -> Option<f64> {
        self.si(Key::MuJ)
    }

    pub fn phi(&self) -> f64 {
        self.si(Key::Phi).unwrap_or(0.0)
    }

    pub fn r_max(&self) -> Option<f64> {
        self.si(Key::RMaxUm)
    }

    pub fn grid_points(&self) -> Result<usize, CliError> {
        match self.value(Key::GridPoints) {
            None => Ok(101),
            Some(v) if v >= 2.0 && v.fract() == 0.0 && v <= 1e6 => Ok(v as usize),
            Some(v) => Err(CliError::Validation(format!(
                "grid_points must be an integer in [2, 1e6], got {v}"
            ))),
        }
    }

    pub fn max_iterations(&self) -> Result<Option<usize>, CliError> {
        match self.value(Key::MaxIterations) {
            None => Ok(None),
            Some(v) if v >= 1.0 && v.fract() == 0.0 => Ok(Some(v as usize)),
            Some(v) => Err(CliError::Validation(format!(
                "max_iterations must be a positive integer, got {v}"
            ))),
        }
    }
}
