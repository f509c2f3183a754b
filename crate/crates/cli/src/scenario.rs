//! Scenario execution: validated config in, report document out.

use log::{debug, info};
use serde_json::Value;
use wherald_core::{
    audit_amplitudes, build_generator, channel_state_fidelity, evolve_exact, evolve_series, project_photons,
    run_herald, targets, two_photon_herald, vacuum_state, zsa_record, apply_network, packet_state, AtomicTarget,
    AuditRow, CouplingParams, HeraldResult, HeraldScenario, Mode, NetworkSpec, PacketSpec,
};

use crate::config::{ScenarioConfig, ScenarioKind, Validated};
use crate::error::CliError;
use crate::report::{complex, num, obj, opt_num};

pub const ENGINE_NAME: &str = "wherald";
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Series order compared against the exact propagator in herald reports.
pub const SERIES_ORDER: usize = 4;

/// Runs the scenario and assembles the full report.
pub fn run(config: &ScenarioConfig) -> Result<Value, CliError> {
    let v = config.validate()?;
    info!("running scenario {}", v.kind.name());
    let result = match v.kind {
        ScenarioKind::PacketZsa => packet_report(v.packet.as_ref().expect("validated packet")),
        ScenarioKind::AmplitudeAudit => audit_report(&v)?,
        _ => herald_report(&v)?,
    };
    Ok(obj([
        ("engine", obj([("name", ENGINE_NAME.into()), ("version", ENGINE_VERSION.into())])),
        ("scenario", v.kind.name().into()),
        ("config_echo", config.to_toml().into()),
        ("input", input_echo(&v)),
        ("result", result),
    ]))
}

fn input_echo(v: &Validated) -> Value {
    let mut entries = serde_json::Map::new();
    if v.kind != ScenarioKind::PacketZsa {
        entries.insert("ensembles".into(), v.ensembles.to_vec().into());
        entries.insert("n_max".into(), v.n_max.into());
    }
    if let Some(o) = v.outcome {
        entries.insert("outcome".into(), o.to_vec().into());
    }
    if let Some(p) = &v.params {
        entries.insert("couplings".into(), couplings(p));
    }
    if v.kind.is_herald() {
        entries.insert("network".into(), network(&v.network));
    }
    if let Some(p) = &v.packet {
        entries.insert(
            "packet".into(),
            obj([
                ("modes", p.modes().into()),
                ("length", num(p.length())),
                ("cell_offset", num(p.cell_offset())),
                ("position", num(p.position())),
            ]),
        );
    }
    Value::Object(entries)
}

fn couplings(p: &CouplingParams) -> Value {
    obj([
        ("omega", num(p.omega)),
        ("eps", num(p.eps)),
        ("t", num(p.t)),
        ("lambda", num(p.lambda())),
        ("k", num(p.k)),
        ("positions", p.positions.iter().map(|&x| num(x)).collect()),
    ])
}

fn network(net: &NetworkSpec) -> Value {
    net.splitters
        .iter()
        .map(|bs| {
            let (a, b) = bs.modes();
            obj([
                ("modes", vec![a.index(), b.index()].into()),
                ("c", num(bs.c())),
                ("s", num(bs.s())),
                ("theta", num(bs.theta())),
            ])
        })
        .collect()
}

fn stock_targets(v: &Validated, photons: u32) -> Result<Vec<AtomicTarget>, CliError> {
    let e = v.ensembles;
    let mut list = Vec::new();
    match photons {
        1 => {
            for x in Mode::ALL {
                list.push(targets::w1_at(e, x)?);
            }
            list.push(targets::w1_pair(e, true)?);
            list.push(targets::w1_pair(e, false)?);
            list.push(targets::symmetric_w1(e)?);
            if e.iter().any(|&n| n != e[0]) {
                list.push(targets::weighted_w1(e)?);
            }
            list.push(targets::third_port_w1(e)?);
        }
        2 => {
            for x in Mode::ALL {
                if e[x.index()] >= 2 {
                    list.push(targets::w2_at(e, x)?);
                }
            }
            list.push(targets::pair_w1(e)?);
        }
        _ => {}
    }
    Ok(list)
}

fn herald_scenario(v: &Validated, n_max: u8) -> Result<HeraldScenario, CliError> {
    let outcome = v.outcome.expect("validated outcome");
    let photons = outcome.iter().map(|&n| u32::from(n)).sum();
    Ok(HeraldScenario {
        params: v.params.expect("validated couplings"),
        ensembles: v.ensembles,
        n_max,
        network: v.network.clone(),
        outcome,
        targets: stock_targets(v, photons)?,
    })
}

fn execute(kind: ScenarioKind, scenario: &HeraldScenario) -> Result<HeraldResult, CliError> {
    Ok(match kind {
        ScenarioKind::TwoPhotonHerald => two_photon_herald(scenario)?,
        _ => run_herald(scenario)?,
    })
}

fn herald_report(v: &Validated) -> Result<Value, CliError> {
    let scenario = herald_scenario(v, v.n_max)?;
    let result = execute(v.kind, &scenario)?;
    debug!("outcome probability {:e}", result.probability);

    let mut known = scenario.targets.clone();
    known.push(targets::pair_w1(v.ensembles)?);
    let fidelities: Value = result
        .fidelities
        .iter()
        .map(|(name, f)| {
            let raw = known.iter().find(|t| &t.name == name).map(|t| t.raw_norm_sqr);
            obj([("target", name.clone().into()), ("fidelity", num(*f)), ("raw_norm_sqr", opt_num(raw))])
        })
        .collect();
    let photons: u32 = scenario.outcome.iter().map(|&n| u32::from(n)).sum();
    let channel = if photons == 1 { Some(channel_state_fidelity(&result)?) } else { None };

    let post_state: Value = result
        .post_state
        .iter()
        .map(|(label, amp)| {
            let text = label.0.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(" ");
            obj([("atoms", text.into()), ("re", num(amp.re)), ("im", num(amp.im))])
        })
        .collect();

    Ok(obj([
        ("probability", num(result.probability)),
        ("leading_order_probability", opt_num(result.leading_order_probability)),
        ("zero_probability", result.zero_probability.into()),
        ("leakage", num(result.leakage)),
        ("norm_error", num(result.norm_error)),
        ("total_probability", num(result.total_probability)),
        ("excited_weight", num(result.excited_weight)),
        ("fidelities", fidelities),
        ("best_target", result.best_target.clone().map_or(Value::Null, Value::from)),
        ("channel_state_fidelity", opt_num(channel)),
        ("post_state", post_state),
        ("series_vs_exact", series_comparison(&scenario, result.probability)?),
        ("truncation", truncation_check(v, &scenario, result.probability)?),
    ]))
}

/// Outcome probability from the power series against the exact value.
fn series_comparison(scenario: &HeraldScenario, exact: f64) -> Result<Value, CliError> {
    let generator = build_generator(&scenario.params, scenario.ensembles, scenario.n_max)?;
    let vacuum = vacuum_state(scenario.ensembles, scenario.n_max)?;
    let series = evolve_series(&vacuum, &generator, scenario.params.t, SERIES_ORDER)?;
    let detected = apply_network(&series, &scenario.network);
    let p = project_photons(&detected, scenario.outcome)?.probability;
    let rel = if exact > 0.0 { (p - exact).abs() / exact } else { f64::NAN };
    Ok(obj([("order", SERIES_ORDER.into()), ("probability", num(p)), ("relative_deviation", num(rel))]))
}

/// Repeats the run with one more photon allowed per mode.
fn truncation_check(v: &Validated, scenario: &HeraldScenario, probability: f64) -> Result<Value, CliError> {
    let refined_n_max = scenario.n_max + 1;
    let mut refined = herald_scenario(v, refined_n_max)?;
    refined.targets.clear();
    let r = execute(v.kind, &refined)?;
    let generator = build_generator(&scenario.params, scenario.ensembles, refined_n_max)?;
    let evolved = evolve_exact(&vacuum_state(scenario.ensembles, refined_n_max)?, &generator, scenario.params.t)?;
    let beyond: f64 = evolved
        .iter()
        .filter(|(l, _)| l.photons.iter().any(|&p| p > scenario.n_max))
        .map(|(_, a)| a.norm_sqr())
        .sum();
    Ok(obj([
        ("refined_n_max", refined_n_max.into()),
        ("refined_probability", num(r.probability)),
        ("absolute_change", num((r.probability - probability).abs())),
        ("weight_beyond_n_max", num(beyond)),
    ]))
}

fn audit_report(v: &Validated) -> Result<Value, CliError> {
    let params = v.params.expect("validated couplings");
    let rows = audit_amplitudes(&params, v.ensembles, v.n_max)?;
    Ok(obj([
        ("lambda", num(params.lambda())),
        ("lambda_half", num(params.scale_lambda(0.5).lambda())),
        ("sectors", rows.iter().map(audit_row).collect()),
    ]))
}

fn audit_row(r: &AuditRow) -> Value {
    obj([
        ("sector", r.sector.name().into()),
        ("closed_form", num(r.closed_form)),
        ("series", num(r.series)),
        ("exact", num(r.exact)),
        ("abs_deviation", num(r.abs_deviation)),
        ("rel_deviation", num(r.rel_deviation)),
        ("abs_deviation_half", num(r.abs_deviation_half)),
        ("convergence_order", num(r.convergence_order)),
        ("extrapolated_ratio", num(r.extrapolated_ratio)),
        ("status", r.verification.name().into()),
    ])
}

fn packet_report(spec: &PacketSpec) -> Value {
    let rec = zsa_record(spec);
    let state = packet_state(spec);
    let direct = state.coefficients.iter().sum();
    obj([
        ("modes", rec.modes.into()),
        ("cell_offset", num(rec.cell_offset)),
        ("y", num(spec.y())),
        ("closed_form_sum", complex(rec.exact)),
        ("direct_sum", complex(direct)),
        ("sinc_prediction", complex(rec.prediction)),
        ("relative_deviation", num(rec.relative_deviation)),
        ("magnitude_deviation", num(rec.magnitude_deviation)),
        ("coefficient_norm_sqr", num(state.norm_sqr())),
        ("global_phase", num(state.global_phase)),
    ])
}
