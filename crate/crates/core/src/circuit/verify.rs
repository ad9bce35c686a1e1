use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::demos::{demo_rule_i_on_tp, demo_rule_o_on_sd, RuleIDemo, RuleODemo};
use super::ledger::{amp, ResourceLedger};
use super::protocols::{
    bell_pairs, run_cobit, run_coherent_sd, run_coherent_tp, run_qe, run_superdense, run_teleportation,
    verify_cobit_equivalence, Qubit,
};
use super::{CircuitError, FIDELITY_TOL};
use crate::algebra::{parse_ri, ResourceInequality, ResourceKind};
use crate::derivation::Registry;
use crate::entropy::random_pure_qubit;
use crate::rng::SeededRng;

/// Outcome of one protocol check.
#[derive(Clone, Debug)]
pub struct ProtocolReport {
    pub name: String,
    /// Worst fidelity over all inputs and branches tried.
    pub fidelity: f64,
    pub ledger: ResourceLedger,
    /// The exact inequality the run implements, if it is a single protocol.
    pub claims: Option<ResourceInequality>,
    pub ledger_matches: bool,
    pub metrics: Vec<(String, f64)>,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub protocols: Vec<ProtocolReport>,
    pub rule_i: RuleIDemo,
    pub rule_o: RuleODemo,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.protocols.iter().all(|p| p.pass) && self.rule_i.passes() && self.rule_o.passes()
    }
}

fn report(
    name: &str,
    fidelity: f64,
    ledger: ResourceLedger,
    claims: ResourceInequality,
    metrics: Vec<(&str, f64)>,
    extra_ok: bool,
) -> ProtocolReport {
    let ledger_matches = ledger.to_ri(name).same_statement(&claims);
    ProtocolReport {
        name: name.to_string(),
        fidelity,
        ledger,
        claims: Some(claims),
        ledger_matches,
        metrics: metrics.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        pass: ledger_matches && fidelity >= 1.0 - FIDELITY_TOL && extra_ok,
    }
}

fn exact(text: &str) -> ResourceInequality {
    parse_ri(text).expect("static inequality text")
}

/// Runs the seven protocol checks and both rule demonstrations. Random
/// inputs are drawn from `seed`.
pub fn verify(seed: u64) -> Result<VerifyReport, CircuitError> {
    let reg = Registry::standard();
    let mut rng = SeededRng::new(seed);
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let plus: Qubit = [amp(s), amp(s)];
    let mut inputs: Vec<Qubit> = vec![[amp(1.0), amp(0.0)], plus];
    for _ in 0..50 {
        let v = random_pure_qubit(&mut rng);
        inputs.push([v[0], v[1]]);
    }
    let mut protocols = Vec::new();

    let mut fid = f64::INFINITY;
    let mut signalling = 0.0f64;
    let mut ledger = ResourceLedger::new();
    for input in &inputs {
        let run = run_teleportation(*input)?;
        fid = fid.min(run.min_fidelity());
        signalling = signalling.max(run.signalling());
        ledger = run.ledger;
    }
    protocols.push(report(
        "teleportation",
        fid,
        ledger,
        reg.tp().snapshot(),
        vec![("inputs", inputs.len() as f64), ("no_signalling_deviation", signalling)],
        signalling <= 1e-12,
    ));

    let mut decoded = 0usize;
    let mut worst = f64::INFINITY;
    let mut ledger = ResourceLedger::new();
    for x in [[false, false], [false, true], [true, false], [true, true]] {
        let run = run_superdense(x)?;
        decoded += usize::from(run.decoded == x);
        worst = worst.min(run.prob);
        ledger = run.ledger;
    }
    protocols.push(report(
        "superdense_coding",
        worst,
        ledger,
        reg.sd().snapshot(),
        vec![("messages_decoded", decoded as f64)],
        decoded == 4,
    ));

    let one = run_qe(1)?;
    let three = run_qe(3)?;
    protocols.push(report(
        "entanglement_distribution",
        one.fidelity,
        one.ledger,
        reg.qe().snapshot(),
        vec![("bob_entropy", one.bob_entropy), ("three_copy_fidelity", three.fidelity)],
        one.fidelity >= 1.0 - 1e-12 && three.fidelity >= 1.0 - 1e-12,
    ));

    let on_plus = run_cobit(plus)?;
    let copies_basis = [0usize, 1].iter().all(|&bit| {
        let mut input = [amp(0.0); 2];
        input[bit] = amp(1.0);
        run_cobit(input).map(|r| r.state.amplitudes()[bit | bit << 1] == amp(1.0)).unwrap_or(false)
    });
    let cobit_fid = on_plus.state.fidelity(&bell_pairs(1));
    // On |+> the copy is a Bell pair.
    let mut ledger = on_plus.ledger.clone();
    ledger.produce(ResourceKind::Ebit, 1);
    protocols.push(report(
        "cobit",
        cobit_fid,
        ledger,
        exact("[q->qq] >=! [qq]"),
        vec![("bob_entropy", on_plus.bob_entropy), ("copies_basis_states", f64::from(u8::from(copies_basis)))],
        copies_basis && (on_plus.bob_entropy - 1.0).abs() <= 1e-9,
    ));

    let mut fid = f64::INFINITY;
    let mut ledger = ResourceLedger::new();
    let mut messages: Vec<Vec<_>> = (0..4).map(|k| (0..4).map(|j| amp(f64::from(u8::from(j == k)))).collect()).collect();
    messages.push(vec![amp(0.5); 4]);
    for _ in 0..10 {
        let mut m: Vec<_> = (0..4).map(|_| rng.complex_gaussian()).collect();
        super::state::normalize(&mut m);
        messages.push(m);
    }
    for m in &messages {
        let run = run_coherent_sd(m)?;
        fid = fid.min(run.fidelity);
        ledger = run.ledger;
    }
    protocols.push(report(
        "coherent_superdense_coding",
        fid,
        ledger,
        exact("[q->q] + [qq] >=! 2 [q->qq]"),
        vec![("messages", messages.len() as f64)],
        true,
    ));

    let mut fid = f64::INFINITY;
    let mut out_fid = f64::INFINITY;
    let mut res_fid = f64::INFINITY;
    let mut ledger = ResourceLedger::new();
    for input in &inputs {
        let run = run_coherent_tp(*input)?;
        fid = fid.min(run.fidelity);
        out_fid = out_fid.min(run.output_fidelity);
        res_fid = res_fid.min(run.residual_fidelity);
        ledger = run.ledger;
    }
    protocols.push(report(
        "coherent_teleportation",
        fid.min(out_fid).min(res_fid),
        ledger,
        exact("2 [q->qq] + [qq] >=! [q->q] + 2 [qq]"),
        vec![("output_fidelity", out_fid), ("residual_fidelity", res_fid)],
        true,
    ));

    let eq = verify_cobit_equivalence(inputs[2])?;
    let net_zero = eq.net_zero();
    let fid = eq.min_fidelity();
    protocols.push(ProtocolReport {
        name: "cobit_equivalence".to_string(),
        fidelity: fid,
        ledger: eq.combined,
        claims: None,
        ledger_matches: net_zero,
        metrics: vec![("net_zero".to_string(), f64::from(u8::from(net_zero)))],
        pass: net_zero && fid >= 1.0 - FIDELITY_TOL,
    });

    Ok(VerifyReport { protocols, rule_i: demo_rule_i_on_tp(plus)?, rule_o: demo_rule_o_on_sd()? })
}
