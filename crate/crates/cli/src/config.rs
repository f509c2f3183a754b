//! Scenario configuration: TOML in, validated core parameters out.

use serde::{Deserialize, Serialize};
use wherald_core::{
    BeamsplitterSpec, CouplingParams, Mode, NetworkSpec, PacketSpec, DEFAULT_N_MAX,
};

use crate::error::CliError;

/// Largest composite dimension a config may request.
pub const MAX_DIMENSION: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    SingleClick,
    SymmetricHerald,
    TwoPhotonHerald,
    W2Herald,
    PacketZsa,
    AmplitudeAudit,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::SingleClick => "single-click",
            ScenarioKind::SymmetricHerald => "symmetric-herald",
            ScenarioKind::TwoPhotonHerald => "two-photon-herald",
            ScenarioKind::W2Herald => "w2-herald",
            ScenarioKind::PacketZsa => "packet-zsa",
            ScenarioKind::AmplitudeAudit => "amplitude-audit",
        }
    }

    pub fn is_herald(self) -> bool {
        matches!(
            self,
            ScenarioKind::SingleClick | ScenarioKind::SymmetricHerald | ScenarioKind::TwoPhotonHerald | ScenarioKind::W2Herald
        )
    }

    fn uses_atoms(self) -> bool {
        self != ScenarioKind::PacketZsa
    }
}

fn default_n_max() -> u8 {
    DEFAULT_N_MAX
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

fn is_origin(p: &[f64; 3]) -> bool {
    p.iter().all(|&x| x == 0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensembles: Option<[u32; 3]>,
    #[serde(default = "default_n_max")]
    pub n_max: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<[u8; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub couplings: Option<Couplings>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub network: Vec<SplitterConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub packet: Option<PacketConfig>,
}

/// Pump and emission couplings. Either `t` or `lambda` fixes the
/// interaction time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Couplings {
    pub omega: f64,
    pub eps: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub k: f64,
    #[serde(default, skip_serializing_if = "is_origin")]
    pub positions: [f64; 3],
}

/// One beamsplitter, given either as `(c, s)` or as a mixing angle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitterConfig {
    pub modes: [usize; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketConfig {
    pub modes: usize,
    pub length: f64,
    pub cell_offset: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub central_wavenumber: f64,
}

/// Parameters after validation, ready for the engine.
#[derive(Clone, Debug, PartialEq)]
pub struct Validated {
    pub kind: ScenarioKind,
    pub ensembles: [u32; 3],
    pub n_max: u8,
    pub outcome: Option<[u8; 3]>,
    pub params: Option<CouplingParams>,
    pub network: NetworkSpec,
    pub packet: Option<PacketSpec>,
}

fn field(name: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Config { field: name.into(), message: message.into() }
}

fn finite(name: &str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(field(name, "must be a finite number"))
    }
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    /// Canonical TOML rendering, used as the report's config echo.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes to TOML")
    }

    pub fn validate(&self) -> Result<Validated, CliError> {
        let kind = self.scenario;
        if self.n_max == 0 {
            return Err(field("n_max", "must be at least 1"));
        }

        let ensembles = match (kind.uses_atoms(), self.ensembles) {
            (true, Some(e)) => {
                if let Some(i) = e.iter().position(|&n| n == 0) {
                    return Err(field(format!("ensembles[{i}]"), "every ensemble needs at least one atom"));
                }
                e
            }
            (true, None) => return Err(field("ensembles", "required by this scenario")),
            (false, Some(_)) => return Err(field("ensembles", format!("not used by scenario {}", kind.name()))),
            (false, None) => [1, 1, 1],
        };
        if kind.uses_atoms() {
            let atoms: usize = ensembles
                .iter()
                .map(|&n| {
                    let n = n as usize;
                    (n + 1) * (n + 2) / 2
                })
                .product();
            let dim = atoms.saturating_mul((self.n_max as usize + 1).pow(3));
            if dim > MAX_DIMENSION {
                return Err(field("ensembles", format!("composite dimension {dim} exceeds {MAX_DIMENSION}")));
            }
        }

        let outcome = match (kind.is_herald(), self.outcome) {
            (true, Some(o)) => {
                if let Some(i) = o.iter().position(|&c| c > self.n_max) {
                    return Err(field(
                        format!("outcome[{i}]"),
                        format!("count {} exceeds n_max = {}", o[i], self.n_max),
                    ));
                }
                Some(o)
            }
            (true, None) => return Err(field("outcome", "required by herald scenarios")),
            (false, Some(_)) => return Err(field("outcome", format!("not used by scenario {}", kind.name()))),
            (false, None) => None,
        };
        if kind == ScenarioKind::TwoPhotonHerald && outcome != Some([1, 0, 1]) {
            return Err(field("outcome", "two-photon-herald is conditioned on [1, 0, 1]"));
        }

        let params = match (kind.uses_atoms(), &self.couplings) {
            (true, Some(c)) => Some(c.validate()?),
            (true, None) => return Err(field("couplings", "required by this scenario")),
            (false, Some(_)) => return Err(field("couplings", format!("not used by scenario {}", kind.name()))),
            (false, None) => None,
        };

        if !kind.is_herald() && !self.network.is_empty() {
            return Err(field("network", format!("not used by scenario {}", kind.name())));
        }
        let mut splitters = Vec::with_capacity(self.network.len());
        for (i, bs) in self.network.iter().enumerate() {
            splitters.push(bs.validate(&format!("network[{i}]"))?);
        }
        let network = if splitters.is_empty() {
            match kind {
                ScenarioKind::SymmetricHerald => NetworkSpec::symmetric_w(),
                ScenarioKind::TwoPhotonHerald => NetworkSpec::balanced(),
                _ => NetworkSpec::empty(),
            }
        } else {
            NetworkSpec::new(splitters)
        };

        let packet = match (kind, &self.packet) {
            (ScenarioKind::PacketZsa, Some(p)) => Some(p.validate()?),
            (ScenarioKind::PacketZsa, None) => return Err(field("packet", "required by scenario packet-zsa")),
            (_, Some(_)) => return Err(field("packet", format!("not used by scenario {}", kind.name()))),
            (_, None) => None,
        };

        Ok(Validated { kind, ensembles, n_max: self.n_max, outcome, params, network, packet })
    }
}

impl Couplings {
    fn validate(&self) -> Result<CouplingParams, CliError> {
        let omega = finite("couplings.omega", self.omega)?;
        let eps = finite("couplings.eps", self.eps)?;
        if omega < 0.0 {
            return Err(field("couplings.omega", "must be non-negative"));
        }
        if eps < 0.0 {
            return Err(field("couplings.eps", "must be non-negative"));
        }
        let params = match (self.t, self.lambda) {
            (Some(t), None) => {
                let t = finite("couplings.t", t)?;
                CouplingParams::new(omega, eps, t).map_err(|e| field("couplings.t", e.to_string()))?
            }
            (None, Some(lambda)) => {
                let lambda = finite("couplings.lambda", lambda)?;
                CouplingParams::from_lambda(lambda, omega, eps).map_err(|e| field("couplings.lambda", e.to_string()))?
            }
            (Some(_), Some(_)) => return Err(field("couplings.lambda", "give either t or lambda, not both")),
            (None, None) => return Err(field("couplings.t", "one of t or lambda is required")),
        };
        let k = finite("couplings.k", self.k)?;
        for (i, &x) in self.positions.iter().enumerate() {
            finite(&format!("couplings.positions[{i}]"), x)?;
        }
        params
            .with_positions(k, self.positions)
            .map_err(|e| field("couplings.positions", e.to_string()))
    }
}

impl SplitterConfig {
    fn validate(&self, at: &str) -> Result<BeamsplitterSpec, CliError> {
        let mode = |i: usize| {
            Mode::from_index(self.modes[i])
                .map_err(|_| field(format!("{at}.modes[{i}]"), format!("mode {} out of range 0..=2", self.modes[i])))
        };
        let (first, second) = (mode(0)?, mode(1)?);
        if first == second {
            return Err(field(format!("{at}.modes"), "a splitter mixes two distinct modes"));
        }
        match (self.c, self.s, self.theta) {
            (Some(c), Some(s), None) => {
                let c = finite(&format!("{at}.c"), c)?;
                let s = finite(&format!("{at}.s"), s)?;
                BeamsplitterSpec::new(first, second, c, s).map_err(|e| field(format!("{at}.c"), e.to_string()))
            }
            (None, None, Some(theta)) => {
                let theta = finite(&format!("{at}.theta"), theta)?;
                BeamsplitterSpec::from_theta(first, second, theta)
                    .map_err(|e| field(format!("{at}.theta"), e.to_string()))
            }
            _ => Err(field(at, "give either both c and s, or theta")),
        }
    }
}

impl PacketConfig {
    fn validate(&self) -> Result<PacketSpec, CliError> {
        if self.modes == 0 {
            return Err(field("packet.modes", "must be at least 1"));
        }
        let length = finite("packet.length", self.length)?;
        if length <= 0.0 {
            return Err(field("packet.length", "must be positive"));
        }
        let offset = finite("packet.cell_offset", self.cell_offset)?;
        if offset < 0.0 || offset >= self.modes as f64 {
            return Err(field("packet.cell_offset", format!("must lie in [0, {})", self.modes)));
        }
        let k0 = finite("packet.central_wavenumber", self.central_wavenumber)?;
        PacketSpec::from_cell_offset(self.modes, length, offset, k0).map_err(|e| field("packet", e.to_string()))
    }
}
