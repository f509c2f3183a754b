//! End-to-end heralded preparation: evolve the vacuum, mix the emitted
//! light on the detection network, project on a detector outcome and
//! compare the atomic post-state with W-class targets.

use num_complex::Complex64 as C64;

use crate::dynamics::{build_generator, evolve_exact, perturbative_amplitudes, CouplingParams};
use crate::error::{Error, Result};
use crate::fock::Mode;
use crate::hilbert::{dicke_label, fidelity, inner, project_photons, vacuum_state, AtomicState};
use crate::optics::{apply_network, NetworkSpec};

/// Deviation of `‖Uψ‖²` from one above which evolution counts as broken.
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

/// Named atomic target, kept both as quoted and normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicTarget {
    pub name: String,
    /// Quoted coefficients on `|W_{m_A} W_{m_B} W_{m_C}⟩`, indexed by the
    /// level-1 excitations per ensemble.
    pub terms: Vec<(C64, [u32; 3])>,
    pub raw_norm_sqr: f64,
    pub state: AtomicState,
}

impl AtomicTarget {
    pub fn new(name: impl Into<String>, ensembles: [u32; 3], terms: Vec<(C64, [u32; 3])>) -> Result<Self> {
        let name = name.into();
        let mut raw = Vec::with_capacity(terms.len());
        for (coefficient, excitations) in &terms {
            raw.push((dicke_label(ensembles, *excitations)?, *coefficient));
        }
        let raw = AtomicState::from_amplitudes(ensembles, raw)?;
        let raw_norm_sqr = raw.norm_sqr();
        let state = raw
            .normalized()
            .ok_or_else(|| Error::InvalidScenario(format!("target {name} is the zero vector")))?;
        Ok(Self { name, terms, raw_norm_sqr, state })
    }
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn single(mode: Mode) -> [u32; 3] {
    let mut e = [0; 3];
    e[mode.index()] = 1;
    e
}

/// Stock targets.
pub mod targets {
    use super::*;

    /// `|W₁⟩` in ensemble `x`, ground elsewhere.
    pub fn w1_at(ensembles: [u32; 3], x: Mode) -> Result<AtomicTarget> {
        AtomicTarget::new(format!("W1@{x}"), ensembles, vec![(real(1.0), single(x))])
    }

    /// `|W₂⟩` in ensemble `x`, ground elsewhere.
    pub fn w2_at(ensembles: [u32; 3], x: Mode) -> Result<AtomicTarget> {
        let mut e = [0; 3];
        e[x.index()] = 2;
        AtomicTarget::new(format!("W2@{x}"), ensembles, vec![(real(1.0), e)])
    }

    /// `(|W₁00⟩ ± |0W₁0⟩)/√2`.
    pub fn w1_pair(ensembles: [u32; 3], plus: bool) -> Result<AtomicTarget> {
        let sign = if plus { 1.0 } else { -1.0 };
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let name = if plus { "(W1 00 + 0 W1 0)/sqrt2" } else { "(W1 00 - 0 W1 0)/sqrt2" };
        AtomicTarget::new(name, ensembles, vec![(real(h), single(Mode::A)), (real(sign * h), single(Mode::B))])
    }

    /// `(|W₁00⟩ + |0W₁0⟩ + |00W₁⟩)/√3`.
    pub fn symmetric_w1(ensembles: [u32; 3]) -> Result<AtomicTarget> {
        let a = 1.0 / 3f64.sqrt();
        AtomicTarget::new(
            "(W1 00 + 0 W1 0 + 00 W1)/sqrt3",
            ensembles,
            Mode::ALL.iter().map(|&x| (real(a), single(x))).collect(),
        )
    }

    /// `(√N_A |W₁00⟩ + √N_B |0W₁0⟩ + √N_C |00W₁⟩)`, normalized.
    pub fn weighted_w1(ensembles: [u32; 3]) -> Result<AtomicTarget> {
        AtomicTarget::new(
            "sqrtN-weighted W1 superposition",
            ensembles,
            Mode::ALL.iter().map(|&x| (real(f64::from(ensembles[x.index()]).sqrt()), single(x))).collect(),
        )
    }

    /// `(−√N_A |W₁00⟩ − √N_B |0W₁0⟩ + 2√N_C |00W₁⟩)`, normalized.
    pub fn third_port_w1(ensembles: [u32; 3]) -> Result<AtomicTarget> {
        let n = ensembles.map(|v| f64::from(v).sqrt());
        AtomicTarget::new(
            "(-sqrtNA W1 00 - sqrtNB 0 W1 0 + 2 sqrtNC 00 W1)",
            ensembles,
            vec![(real(-n[0]), single(Mode::A)), (real(-n[1]), single(Mode::B)), (real(2.0 * n[2]), single(Mode::C))],
        )
    }

    /// `(|W₁W₁0⟩ + |W₁0W₁⟩ + |0W₁W₁⟩)/√3`.
    pub fn pair_w1(ensembles: [u32; 3]) -> Result<AtomicTarget> {
        let a = 1.0 / 3f64.sqrt();
        AtomicTarget::new(
            "(W1 W1 0 + W1 0 W1 + 0 W1 W1)/sqrt3",
            ensembles,
            vec![(real(a), [1, 1, 0]), (real(a), [1, 0, 1]), (real(a), [0, 1, 1])],
        )
    }

    /// The quoted channel state `(1/√2)(|W₁00⟩ + √2 |0⟩Ψ⁺)` with
    /// `Ψ⁺ = (|0W₁⟩ + |W₁0⟩)/√2`. As quoted its squared norm is 3/2; the
    /// normalized form is the symmetric three-term superposition.
    pub fn channel_state(ensembles: [u32; 3]) -> Result<AtomicTarget> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi_plus = h * 2f64.sqrt() * h;
        AtomicTarget::new(
            "channel (W1 00 + sqrt2 0 Psi+)/sqrt2",
            ensembles,
            vec![(real(h), single(Mode::A)), (real(psi_plus), single(Mode::B)), (real(psi_plus), single(Mode::C))],
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeraldScenario {
    pub params: CouplingParams,
    pub ensembles: [u32; 3],
    pub n_max: u8,
    pub network: NetworkSpec,
    pub outcome: [u8; 3],
    pub targets: Vec<AtomicTarget>,
}

impl HeraldScenario {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.ensembles.contains(&0) {
            return Err(Error::EmptyEnsemble);
        }
        if let Some((mode, &count)) = self.outcome.iter().enumerate().find(|(_, &c)| c > self.n_max) {
            return Err(Error::PhotonOverflow { mode, count, n_max: self.n_max });
        }
        for t in &self.targets {
            if t.state.shape() != self.ensembles {
                return Err(Error::ShapeMismatch(format!("target {} built for other ensembles", t.name)));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeraldResult {
    pub outcome: [u8; 3],
    pub ensembles: [u32; 3],
    pub probability: f64,
    /// Probability of the same outcome from the closed-form amplitudes,
    /// for outcomes with one or two photons.
    pub leading_order_probability: Option<f64>,
    pub leakage: f64,
    /// `|‖Uψ‖² − 1|` after exact evolution.
    pub norm_error: f64,
    pub zero_probability: bool,
    pub post_state: AtomicState,
    pub fidelities: Vec<(String, f64)>,
    /// Target with the highest fidelity.
    pub best_target: Option<String>,
    /// Weight of the post-state on labels with an atom in level 2.
    pub excited_weight: f64,
    /// Sum of all outcome probabilities plus leakage.
    pub total_probability: f64,
}

impl HeraldResult {
    pub fn fidelity(&self, name: &str) -> Option<f64> {
        self.fidelities.iter().find(|(n, _)| n == name).map(|(_, f)| *f)
    }
}

pub fn run_herald(scenario: &HeraldScenario) -> Result<HeraldResult> {
    scenario.validate()?;
    let generator = build_generator(&scenario.params, scenario.ensembles, scenario.n_max)?;
    let vacuum = vacuum_state(scenario.ensembles, scenario.n_max)?;
    let evolved = evolve_exact(&vacuum, &generator, scenario.params.t)?;
    let norm_error = (evolved.norm_sqr() - 1.0).abs();
    if norm_error > UNITARITY_TOLERANCE {
        return Err(Error::Numerical(format!("evolution changed the norm by {norm_error:e}")));
    }
    let detected = apply_network(&evolved, &scenario.network);
    let total_probability = detected.norm_sqr() + detected.leakage();
    let projection = project_photons(&detected, scenario.outcome)?;

    let leading_order_probability = leading_order_probability(scenario)?;

    let mut fidelities = Vec::new();
    if !projection.zero_probability {
        for target in &scenario.targets {
            fidelities.push((target.name.clone(), fidelity(&projection.post, &target.state)?));
        }
    }
    let best_target = fidelities
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(name, _)| name.clone());
    Ok(HeraldResult {
        outcome: scenario.outcome,
        ensembles: scenario.ensembles,
        probability: projection.probability,
        leading_order_probability,
        leakage: detected.leakage(),
        norm_error,
        zero_probability: projection.zero_probability,
        excited_weight: projection.post.excited_weight(),
        post_state: projection.post,
        fidelities,
        best_target,
        total_probability,
    })
}

fn leading_order_probability(scenario: &HeraldScenario) -> Result<Option<f64>> {
    let photons: u32 = scenario.outcome.iter().map(|&n| u32::from(n)).sum();
    if !(1..=2).contains(&photons) {
        return Ok(None);
    }
    let closed = perturbative_amplitudes(&scenario.params, scenario.ensembles).to_state(scenario.ensembles, scenario.n_max)?;
    let mixed = apply_network(&closed, &scenario.network);
    Ok(Some(project_photons(&mixed, scenario.outcome)?.probability))
}

/// Two-photon herald on outcome `(1,0,1)` behind the balanced network.
/// The whole two-photon sector goes through the splitters, so bunching
/// terms from `|200⟩`-type emissions are included.
pub fn two_photon_herald(scenario: &HeraldScenario) -> Result<HeraldResult> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let balanced = scenario.network.splitters.len() == 2
        && scenario
            .network
            .splitters
            .iter()
            .all(|bs| (bs.c() - h).abs() <= 1e-12 && (bs.s() - h).abs() <= 1e-12);
    if !balanced {
        return Err(Error::InvalidScenario("two-photon herald needs two splitters with c = s = 1/sqrt2".into()));
    }
    if scenario.outcome != [1, 0, 1] {
        return Err(Error::InvalidScenario("two-photon herald is conditioned on outcome (1,0,1)".into()));
    }
    let mut scenario = scenario.clone();
    let target = targets::pair_w1(scenario.ensembles)?;
    if !scenario.targets.iter().any(|t| t.name == target.name) {
        scenario.targets.push(target);
    }
    run_herald(&scenario)
}

/// Fidelity of a single-photon heralded state with the normalized channel
/// state.
pub fn channel_state_fidelity(result: &HeraldResult) -> Result<f64> {
    if result.zero_probability {
        return Ok(0.0);
    }
    let target = targets::channel_state(result.ensembles)?;
    Ok(inner(&target.state, &result.post_state)?.norm_sqr().min(1.0))
}
