//! Exit criteria for the engine, one PASS/FAIL line each.
//!
//! Tolerances are fixed here; nothing is calibrated after the fact. The
//! process exits non-zero when any criterion fails.

use std::collections::BTreeMap;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wherald_cli::{report, ScenarioConfig};
use wherald_core::{
    apply_network, build_generator, collective_apply, evolve_exact, run_herald, targets,
    two_photon_herald, vacuum_state, zsa_coefficient_sum, zsa_record, AtomicTarget, BasisLabel, BeamsplitterSpec,
    CouplingParams, Dims, EnsembleOccupation, HeraldResult, HeraldScenario, Level, Mode, NetworkSpec, PacketSpec,
    Sector, StateVector, C64,
};

/// Perturbation parameter used throughout.
const LAMBDA: f64 = 1e-2;
/// Constant in front of the `O(λ²)` tolerances.
const SECOND_ORDER_CONSTANT: f64 = 5.0;

struct Outcome {
    pass: bool,
    summary: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Self { pass, summary: summary.into(), notes: Vec::new() }
    }

    fn note(mut self, line: impl Into<String>) -> Self {
        self.notes.push(line.into());
        self
    }
}

fn occ(n: [u32; 3]) -> EnsembleOccupation {
    EnsembleOccupation::new(n[0], n[1], n[2])
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn choose(n: u32, k: u32) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

// 1 -------------------------------------------------------------------------

fn dicke_ladder() -> Outcome {
    let mut worst = 0.0f64;
    for atoms in 1..=8u32 {
        let mut state = EnsembleOccupation::ground(atoms);
        let mut norm = 1.0;
        for m in 1..=atoms {
            let (next, coefficient) =
                collective_apply(Level::Raman, Level::Ground, state).expect("ground atoms remain");
            state = next;
            norm *= coefficient;
            let expected = factorial(m) * choose(atoms, m).sqrt();
            worst = worst.max((norm - expected).abs() / expected);
            assert_eq!(state, occ([atoms - m, m, 0]));
        }
    }
    Outcome::new(worst <= 1e-12, format!("Dicke ladder N<=8: worst relative error {worst:.2e} (tol 1e-12)"))
}

// 2 -------------------------------------------------------------------------

/// Normalized symmetrized product state with the given level counts, as a
/// dense vector over the `3^N` single-atom configurations.
fn symmetrized(n: [u32; 3]) -> Vec<f64> {
    let atoms = (n[0] + n[1] + n[2]) as usize;
    let dim = 3usize.pow(atoms as u32);
    let mut v = vec![0.0; dim];
    let mut count = 0usize;
    for idx in 0..dim {
        let mut counts = [0u32; 3];
        let mut rest = idx;
        for _ in 0..atoms {
            counts[rest % 3] += 1;
            rest /= 3;
        }
        if counts == n {
            v[idx] = 1.0;
            count += 1;
        }
    }
    let norm = (count as f64).sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

/// `Σ_i |p⟩⟨q|_i` on a dense `3^N` vector.
fn single_atom_sum(p: usize, q: usize, atoms: usize, v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for (idx, &amp) in v.iter().enumerate() {
        if amp == 0.0 {
            continue;
        }
        let mut place = 1;
        for _ in 0..atoms {
            let level = (idx / place) % 3;
            if level == q {
                out[idx - level * place + p * place] += amp;
            }
            place *= 3;
        }
    }
    out
}

fn operator_oracle() -> Outcome {
    let mut worst = 0.0f64;
    let mut checked = 0;
    for atoms in 1..=4u32 {
        let labels: Vec<[u32; 3]> = (0..=atoms)
            .flat_map(|n2| (0..=atoms - n2).map(move |n1| [atoms - n1 - n2, n1, n2]))
            .collect();
        for p in 0..3 {
            for q in 0..3 {
                for &from in &labels {
                    let image = single_atom_sum(p, q, atoms as usize, &symmetrized(from));
                    let engine = collective_apply(
                        Level::from_index(p).unwrap(),
                        Level::from_index(q).unwrap(),
                        occ(from),
                    );
                    for &to in &labels {
                        let brute: f64 = symmetrized(to).iter().zip(&image).map(|(a, b)| a * b).sum();
                        let fast = match engine {
                            Some((label, c)) if label == occ(to) => c,
                            _ => 0.0,
                        };
                        worst = worst.max((brute - fast).abs());
                        checked += 1;
                    }
                }
            }
        }
    }
    Outcome::new(
        worst <= 1e-12,
        format!("collective operators vs symmetrized 3^N products, {checked} elements: worst {worst:.2e} (tol 1e-12)"),
    )
}

// 3 -------------------------------------------------------------------------

fn unitarity_and_conservation() -> Outcome {
    let cases: [([u32; 3], CouplingParams); 4] = [
        ([1, 1, 1], CouplingParams::new(1.0, 1.0, 0.8).unwrap()),
        ([2, 2, 2], CouplingParams::from_lambda(LAMBDA, 1.0, 1.0).unwrap()),
        ([4, 1, 1], CouplingParams::new(0.7, 1.3, 1.1).unwrap().with_positions(2.0, [0.0, 0.4, 1.7]).unwrap()),
        ([3, 2, 1], CouplingParams::new(0.002, 5.0, 1.0).unwrap()),
    ];
    let mut worst_norm = 0.0f64;
    let mut violations = 0usize;
    let mut labels = 0usize;
    for (ensembles, params) in cases {
        let g = build_generator(&params, ensembles, 2).unwrap();
        let psi = evolve_exact(&vacuum_state(ensembles, 2).unwrap(), &g, params.t).unwrap();
        worst_norm = worst_norm.max((psi.norm_sqr() - 1.0).abs());
        for (label, _) in psi.iter() {
            labels += 1;
            let per_ensemble = (0..3).all(|x| label.atoms[x].n1 == u32::from(label.photons[x]));
            if !per_ensemble || label.population(Level::Raman) != label.total_photons() {
                violations += 1;
            }
        }
    }
    Outcome::new(
        worst_norm <= 1e-10 && violations == 0,
        format!(
            "exact evolution: worst norm error {worst_norm:.2e} (tol 1e-10); {violations} of {labels} reachable labels break level-1 = photons"
        ),
    )
}

// 4 -------------------------------------------------------------------------

fn single_photon_amplitude(params: &CouplingParams, ensembles: [u32; 3], x: Mode) -> f64 {
    let g = build_generator(params, ensembles, 2).unwrap();
    let psi = evolve_exact(&vacuum_state(ensembles, 2).unwrap(), &g, params.t).unwrap();
    psi.get(&Sector::Single(x).label(ensembles).unwrap()).re
}

fn perturbative_audit() -> Outcome {
    let ensembles = [3, 2, 1];
    let params = CouplingParams::from_lambda(LAMBDA, 1.0, 1.0).unwrap();
    let half = params.scale_lambda(0.5);
    let tol = SECOND_ORDER_CONSTANT * LAMBDA * LAMBDA;
    let mut worst_rel = 0.0f64;
    let mut ratios_abs = Vec::new();
    let mut ratios_rel = Vec::new();
    for x in Mode::ALL {
        let n = f64::from(ensembles[x.index()]);
        let closed = -(LAMBDA / 2.0) * n.sqrt();
        let closed_half = -(LAMBDA / 4.0) * n.sqrt();
        let exact = single_photon_amplitude(&params, ensembles, x);
        let exact_half = single_photon_amplitude(&half, ensembles, x);
        let (dev, dev_half) = ((exact - closed).abs(), (exact_half - closed_half).abs());
        let (rel, rel_half) = (dev / closed.abs(), dev_half / closed_half.abs());
        worst_rel = worst_rel.max(rel);
        ratios_abs.push(dev / dev_half);
        ratios_rel.push(rel / rel_half);
    }
    let in_band = |r: &f64| (4.0 / 1.5..=4.0 * 1.5).contains(r);
    let accuracy = worst_rel <= tol;
    let convergence = ratios_abs.iter().all(in_band);
    Outcome::new(
        accuracy && convergence,
        format!(
            "single-photon amplitude at lambda=1e-2: worst relative deviation {worst_rel:.3e} (tol 5 lambda^2 = {tol:.1e}); \
             halving ratios {:.3} (band [2.67, 6])",
            ratios_abs.iter().cloned().fold(f64::NAN, f64::min)
        ),
    )
    .note(format!(
        "absolute deviation halving ratios {:?}; relative deviation halving ratios {:?}",
        ratios_abs.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>(),
        ratios_rel.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>()
    ))
    .note(format!(
        "the leading correction to the amplitude is relative order (omega^2+eps^2)t^2 >= 2 lambda, so the relative deviation \
         cannot fall below about lambda/6 = {:.1e} at any pump/emission split",
        LAMBDA / 6.0
    ))
}

// 5 -------------------------------------------------------------------------

fn herald(params: CouplingParams, ensembles: [u32; 3], network: NetworkSpec, outcome: [u8; 3], targets: Vec<AtomicTarget>) -> HeraldResult {
    run_herald(&HeraldScenario { params, ensembles, n_max: 2, network, outcome, targets }).unwrap()
}

fn herald_probabilities() -> Outcome {
    let params = CouplingParams::from_lambda(LAMBDA, 1.0, 1.0).unwrap();
    let tol = SECOND_ORDER_CONSTANT * LAMBDA * LAMBDA;

    let r = herald(params, [2, 2, 2], NetworkSpec::empty(), [1, 0, 0], vec![]);
    let closed = (LAMBDA / 2.0).powi(2) * 2.0;
    let rel = (r.probability - closed).abs() / closed;
    let r_half = herald(params.scale_lambda(0.5), [2, 2, 2], NetworkSpec::empty(), [1, 0, 0], vec![]);
    let closed_half = (LAMBDA / 4.0).powi(2) * 2.0;
    let rel_half = (r_half.probability - closed_half).abs() / closed_half;

    let per_atom: Vec<f64> = (1..=3)
        .map(|na| herald(params, [na, 2, 2], NetworkSpec::empty(), [1, 0, 0], vec![]).probability / f64::from(na))
        .collect();
    let mean = per_atom.iter().sum::<f64>() / per_atom.len() as f64;
    let spread = per_atom.iter().map(|p| (p - mean).abs() / mean).fold(0.0, f64::max);

    let mut worst_sum = 0.0f64;
    let mut sums = Vec::new();
    for (net, name) in [(NetworkSpec::empty(), "no network"), (NetworkSpec::symmetric_w(), "symmetric network")] {
        let weak = CouplingParams::new(1.2, 1.4, 0.9).unwrap();
        let mut total = 0.0;
        let mut leakage = 0.0;
        for a in 0..=2u8 {
            for b in 0..=2u8 {
                for c in 0..=2u8 {
                    let r = herald(weak, [2, 2, 2], net.clone(), [a, b, c], vec![]);
                    total += r.probability;
                    leakage = r.leakage;
                }
            }
        }
        let err = (total + leakage - 1.0).abs();
        sums.push(format!("{name}: outcomes {total:.12} + leakage {leakage:.3e}"));
        worst_sum = worst_sum.max(err);
    }

    Outcome::new(
        rel <= tol && spread <= tol && worst_sum <= 1e-9,
        format!(
            "Prob(100)/(lambda/2)^2 N_A: relative deviation {rel:.3e}; per-atom spread over N_A=1..3 {spread:.3e} \
             (tol 5 lambda^2 = {tol:.1e}); sum rule error {worst_sum:.1e} (tol 1e-9)"
        ),
    )
    .note(format!(
        "relative deviation of Prob(100) halves with lambda ({rel:.3e} -> {rel_half:.3e}, ratio {:.2}): the correction is first order in lambda",
        rel / rel_half
    ))
    .note(format!("sum rule at omega=1.2, eps=1.4, t=0.9: {}", sums.join("; ")))
}

// 6 -------------------------------------------------------------------------

fn photon_state(amps: [C64; 3]) -> StateVector {
    let ground = [EnsembleOccupation::ground(1); 3];
    let dims = Dims::new([1, 1, 1], 2).unwrap();
    StateVector::from_amplitudes(
        dims,
        Mode::ALL.iter().map(|&x| {
            let mut photons = [0u8; 3];
            photons[x.index()] = 1;
            (BasisLabel::new(ground, photons), amps[x.index()])
        }),
    )
    .unwrap()
}

fn beamsplitter_network() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let net = NetworkSpec::symmetric_w();
    let ground = [EnsembleOccupation::ground(1); 3];
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let raw: Vec<C64> = (0..3).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let [a, b, c] = [raw[0] / norm, raw[1] / norm, raw[2] / norm];
        let out = apply_network(&photon_state([a, b, c]), &net);
        let expected = [
            (a - b).norm() / 2f64.sqrt(),
            (a + b + c).norm() / 3f64.sqrt(),
            (-a - b + 2.0 * c).norm() / 6f64.sqrt(),
        ];
        for x in Mode::ALL {
            let mut photons = [0u8; 3];
            photons[x.index()] = 1;
            let got = out.get(&BasisLabel::new(ground, photons)).norm();
            worst = worst.max((got - expected[x.index()]).abs());
        }
    }
    let hom_in = StateVector::from_amplitudes(
        Dims::new([1, 1, 1], 2).unwrap(),
        [(BasisLabel::new(ground, [1, 1, 0]), C64::new(1.0, 0.0))],
    )
    .unwrap();
    let hom_out = apply_network(&hom_in, &NetworkSpec::new(vec![BeamsplitterSpec::balanced(Mode::A, Mode::B)]));
    let coincidence = hom_out.get(&BasisLabel::new(ground, [1, 1, 0])).norm();
    Outcome::new(
        worst <= 1e-12 && coincidence <= 1e-12,
        format!(
            "network magnitudes over 10 random inputs: worst error {worst:.2e}; HOM |11> amplitude {coincidence:.2e} (tol 1e-12)"
        ),
    )
}

// 7 -------------------------------------------------------------------------

/// Raman split with the same `λ`: weak pump (`Ωt = 2e-3`), strong
/// emission (`εt = 5`).
fn weak_pump() -> CouplingParams {
    CouplingParams::from_areas(2e-3, LAMBDA / 2e-3).unwrap()
}

fn heralded_states() -> Outcome {
    let e = [2, 2, 2];
    let bound = 1.0 - 1e-4;
    let mut notes = Vec::new();
    let run = |params: CouplingParams| {
        let pair = herald(
            params,
            e,
            NetworkSpec::symmetric_w(),
            [1, 0, 0],
            vec![targets::w1_pair(e, true).unwrap(), targets::w1_pair(e, false).unwrap()],
        );
        let sym = herald(params, e, NetworkSpec::symmetric_w(), [0, 1, 0], vec![targets::symmetric_w1(e).unwrap()]);
        let w2 = herald(params, e, NetworkSpec::empty(), [2, 0, 0], vec![targets::w2_at(e, Mode::A).unwrap()]);
        let (best, f_pair) = pair
            .fidelities
            .iter()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(n, f)| (n.clone(), *f))
            .unwrap();
        (best, f_pair, sym.fidelities[0].1, w2.fidelities[0].1)
    };
    let (best, f_pair, f_sym, f_w2) = run(weak_pump());
    let (_, b_pair, b_sym, b_w2) = run(CouplingParams::from_lambda(LAMBDA, 1.0, 1.0).unwrap());
    notes.push(format!(
        "balanced split omega t = eps t = 0.1 at the same lambda: {b_pair:.6} / {b_sym:.6} / {b_w2:.6} (pumped level-2 admixture)"
    ));
    let mut outcome = Outcome::new(
        f_pair >= bound && f_sym >= bound && f_w2 >= bound,
        format!(
            "heralded fidelities (omega t = 2e-3, eps t = 5): (100) {f_pair:.8} to {best}; (010) {f_sym:.8} to symmetric W1; \
             (200) {f_w2:.8} to W2@A (tol 1-1e-4)"
        ),
    );
    outcome.notes = notes;
    outcome
}

// 8 -------------------------------------------------------------------------

fn two_photon() -> Outcome {
    let e = [2, 2, 2];
    let scenario = |params| HeraldScenario {
        params,
        ensembles: e,
        n_max: 2,
        network: NetworkSpec::balanced(),
        outcome: [1, 0, 1],
        targets: vec![],
    };
    let name = targets::pair_w1(e).unwrap().name;
    let params = CouplingParams::from_lambda(LAMBDA, 1.0, 1.0).unwrap();
    let first = two_photon_herald(&scenario(params)).unwrap().fidelity(&name).unwrap();
    let second = two_photon_herald(&scenario(params)).unwrap().fidelity(&name).unwrap();
    let weak = two_photon_herald(&scenario(weak_pump())).unwrap().fidelity(&name).unwrap();
    let stable = (first - second).abs() <= 1e-9 && first.is_finite() && (0.0..=1.0 + 1e-12).contains(&first);
    Outcome::new(
        stable,
        format!(
            "two-photon (101) herald fidelity to (W1W1 0 + W1 0 W1 + 0 W1W1)/sqrt3: {first:.9} (repeat differs by {:.1e}, tol 1e-9)",
            (first - second).abs()
        ),
    )
    .note(format!("same outcome at omega t = 2e-3, eps t = 5: {weak:.6}; the three-term W1W1 state is not reached"))
}

// 9 -------------------------------------------------------------------------

/// Compensated direct sum of the packet coefficients, with phases taken
/// from exact rational turns.
fn direct_sum(modes: usize, numerator: u64, denominator: u64) -> C64 {
    let mut sum = C64::new(0.0, 0.0);
    let mut carry = C64::new(0.0, 0.0);
    let norm = 1.0 / (modes as f64).sqrt();
    for q in 0..modes as u64 {
        let turns = ((q * numerator) % denominator) as f64 / denominator as f64;
        let term = C64::from_polar(norm, -2.0 * std::f64::consts::PI * turns) - carry;
        let next = sum + term;
        carry = (next - sum) - term;
        sum = next;
    }
    sum
}

fn zsa_packet() -> Outcome {
    let mut worst_sum = 0.0f64;
    let mut cases = 0;
    for modes in [1usize, 2, 3, 7, 64, 100, 128, 1000, 1024, 2048, 4095, 4096] {
        // position l = j/1024 of a unit length
        for j in [1u64, 3, 8, 100, 511, 512, 1023] {
            let spec = PacketSpec::new(modes, 1.0, j as f64 / 1024.0, 0.0).unwrap();
            let err = (zsa_coefficient_sum(&spec) - direct_sum(modes, j, 1024)).norm();
            worst_sum = worst_sum.max(err);
            cases += 1;
        }
    }
    let mut worst_sinc = 0.0f64;
    let mut worst_at = 0.0;
    for k in 1..=11 {
        let offset = 0.25 * f64::from(k);
        if offset.fract() == 0.0 {
            continue;
        }
        let rec = zsa_record(&PacketSpec::from_cell_offset(1024, 1.0, offset, 0.0).unwrap());
        if rec.relative_deviation > worst_sinc {
            worst_sinc = rec.relative_deviation;
            worst_at = offset;
        }
    }
    Outcome::new(
        worst_sum <= 1e-12 && worst_sinc <= 1e-2,
        format!(
            "packet sum: closed form vs direct sum over {cases} cases up to M=4096: {worst_sum:.2e} (tol 1e-12); \
             sinc at M=1024, offsets 0.25..2.75 cells: worst relative {worst_sinc:.2e} at {worst_at} (tol 1e-2)"
        ),
    )
    .note("the complex deviation grows as pi*offset/M from the residual phase; offsets sit on the main and first side lobes")
}

// 10 ------------------------------------------------------------------------

const DETERMINISM_CONFIGS: [&str; 3] = [
    "scenario = \"single-click\"\nensembles = [2, 2, 2]\noutcome = [1, 0, 0]\n\n[couplings]\nomega = 1.0\neps = 1.0\nlambda = 1e-2\n",
    "scenario = \"amplitude-audit\"\nensembles = [2, 1, 1]\n\n[couplings]\nomega = 1.0\neps = 1.0\nlambda = 1e-2\n",
    "scenario = \"packet-zsa\"\n\n[packet]\nmodes = 128\nlength = 1.0\ncell_offset = 0.5\n",
];

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut identical = 0;
    let mut differing = Vec::new();
    for (i, text) in DETERMINISM_CONFIGS.iter().enumerate() {
        let config = dir.path().join(format!("c{i}.toml"));
        std::fs::write(&config, text).unwrap();
        let mut outputs = Vec::new();
        for run in 0..2 {
            let out = dir.path().join(format!("r{i}-{run}.json"));
            let status = Command::new(env!("CARGO_BIN_EXE_wherald"))
                .arg("run")
                .arg(&config)
                .arg("--output")
                .arg(&out)
                .status()
                .unwrap();
            assert!(status.success(), "config {i} failed: {status}");
            outputs.push(std::fs::read(&out).unwrap());
        }
        let in_process = report::to_machine(&wherald_cli::run(&ScenarioConfig::parse(text).unwrap()).unwrap());
        let parsed: serde_json::Value = serde_json::from_slice(&outputs[0]).unwrap();
        let echo = parsed["config_echo"].as_str().unwrap();
        let round_trip = ScenarioConfig::parse(echo).unwrap() == ScenarioConfig::parse(text).unwrap();
        if outputs[0] == outputs[1] && in_process.as_bytes() == outputs[0].as_slice() && round_trip {
            identical += 1;
        } else {
            differing.push(i);
        }
    }
    Outcome::new(
        differing.is_empty(),
        format!("byte-identical reports across two CLI runs: {identical} of {} configs", DETERMINISM_CONFIGS.len()),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("1", dicke_ladder),
        ("2", operator_oracle),
        ("3", unitarity_and_conservation),
        ("4", perturbative_audit),
        ("5", herald_probabilities),
        ("6", beamsplitter_network),
        ("7", heralded_states),
        ("8", two_photon),
        ("9", zsa_packet),
        ("10", determinism),
    ];
    let mut failed = BTreeMap::new();
    for (id, check) in criteria {
        let start = std::time::Instant::now();
        let outcome = check();
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{verdict} [{id:>2}] {} ({:.1}s)", outcome.summary, start.elapsed().as_secs_f64());
        for note in &outcome.notes {
            println!("    note: {note}");
        }
        if !outcome.pass {
            failed.insert(id, outcome.summary);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: {} criteria failed: {:?}", failed.len(), failed.keys().collect::<Vec<_>>());
        std::process::exit(1);
    }
}
