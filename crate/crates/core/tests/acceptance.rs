//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;

use num_complex::Complex64;
use qfamily_core::algebra::{parse_ri, parse_vector, EntropicExpr, ResourceInequality, ResourceKind, Rational};
use qfamily_core::circuit::{
    demo_rule_i_on_tp, demo_rule_o_on_sd, run_coherent_sd, run_coherent_tp, run_qe, run_superdense,
    run_teleportation, verify,
};
use qfamily_core::derivation::{apply_rule_i, apply_rule_o, derive_family, net_delta, waste, Registry, StepKind};
use qfamily_core::entropy::{
    random_pure_qubit, random_tripartite, rate_table, sweep, ChannelFamily, EntropyProfile, ObjectRegistry, Rate,
};
use qfamily_core::rng::SeededRng;

type Outcome = Result<(), String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn family_tree() -> Outcome {
    let fam = derive_family();
    let expected = [
        ("eq1", "I(A:B) [c->c] + {qq} >= Ic(A>B) [q->q]"),
        ("eq2", "I(A:E) [c->c] + {qq} >= Ic(A>B) [qq]"),
        ("eq3", "H(A) [q->q] + {qq} >= I(A:B) [c->c]"),
        ("eq4", "H(A) [qq] + {q->q} >= I(A:B) [c->c]"),
        ("eq5", "{q->q} >= Ic(A>B) [q->q]"),
    ];
    for (name, text) in expected {
        let want = parse_ri(text).map_err(|e| format!("{name}: {e}"))?;
        let got = fam.get(name).ok_or_else(|| format!("{name} missing"))?;
        for (side, g, w) in [("lhs", &got.lhs, &want.lhs), ("rhs", &got.rhs, &want.rhs)] {
            check(g.len() == w.len(), || format!("{name} {side}: {g} vs {w}"))?;
            for (kind, coeff) in w.iter() {
                check(g.get(kind).coeffs() == coeff.coeffs(), || format!("{name} {side} {kind}: {g} vs {w}"))?;
            }
        }
        check(got.mode == want.mode, || format!("{name}: mode {:?}", got.mode))?;
    }
    Ok(())
}

fn coherence_round_trips() -> Outcome {
    let reg = Registry::standard();
    let fam = derive_family();
    let get = |n: &str| fam.get(n).ok_or_else(|| format!("{n} missing"));
    let same = |label: &str, a: &ResourceInequality, b: &ResourceInequality| {
        check(a.same_statement(b), || format!("{label}: {a} vs {b}"))
    };
    let err = |e: qfamily_core::derivation::DerivationError| e.to_string();
    // Rule outputs may carry a catalyst on both sides; equal nets mean equal
    // up to catalysis, and the scripted reverse derivations cancel it.
    for (child, reverse, target) in [
        ("eq2", "mother_via_eq2", reg.mother()),
        ("eq3", "mother_via_eq3", reg.mother()),
        ("eq4", "father_via_eq4", reg.father()),
    ] {
        let c = get(child)?;
        let raw = if child == "eq2" { apply_rule_i(c) } else { apply_rule_o(c) }.map_err(err)?;
        check(raw.net() == target.net(), || format!("rule on {child}: {raw} vs {target}"))?;
        let derived = get(reverse)?;
        same(reverse, derived, target)?;
        let rule_at = derived
            .trace
            .iter()
            .position(|s| matches!(s.kind, StepKind::RuleI | StepKind::RuleO))
            .ok_or_else(|| format!("{reverse}: no rule step"))?;
        same(reverse, &derived.trace[rule_at].before, c)?;
        check(derived.trace[rule_at + 1..].iter().all(|s| s.kind == StepKind::Cancel), || {
            format!("{reverse}: steps after the rule other than cancellation")
        })?;
    }
    same("dual of mother", &reg.mother().dual(), reg.father())?;
    let (d3, e4) = (get("eq3")?.dual(), get("eq4")?);
    check(d3.lhs.quantum_part() == e4.lhs.quantum_part() && d3.rhs.quantum_part() == e4.rhs.quantum_part(), || {
        format!("quantum parts: {d3} vs {e4}")
    })?;
    let wasted = waste(get("eq5")?, &parse_vector("I(A:E) [c->c]").map_err(|e| e.to_string())?).map_err(err)?;
    same("dual of wasted eq5", &wasted.dual(), get("eq2")?)
}

fn identity_suite() -> Outcome {
    let half = Rational::new(1, 2);
    let first = EntropicExpr::mutual_ab().scale(half) + EntropicExpr::mutual_ae().scale(half) - EntropicExpr::h_a();
    let second = EntropicExpr::mutual_ab().scale(half) - EntropicExpr::mutual_ae().scale(half) - EntropicExpr::coherent_ab();
    let mut rng = SeededRng::new(0);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let psi = random_tripartite(&mut rng, 4, 4);
        let (da, db, de) = psi.dims();
        check(da <= 4 && db <= 4 && de <= 16, || format!("dims {da}x{db}x{de}"))?;
        // Direct from the definitions, not from the canonical forms.
        let p = EntropyProfile::of(&psi);
        let (iab, iae, ic) = (p.h_a + p.h_b - p.h_e, p.h_a + p.h_e - p.h_b, p.h_b - p.h_e);
        worst = worst.max((0.5 * iab + 0.5 * iae - p.h_a).abs()).max((0.5 * iab - 0.5 * iae - ic).abs());
        worst = worst.max(p.evaluate(&first).abs()).max(p.evaluate(&second).abs());
    }
    check(worst <= 1e-9, || format!("max violation {worst:e}"))
}

fn shannon(probs: &[f64]) -> f64 {
    probs.iter().filter(|&&p| p > 0.0).map(|p| -p * p.log2()).sum()
}

fn channel_rates() -> Outcome {
    let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let rows = sweep(ChannelFamily::Erasure, &grid, &[]).map_err(|e| e.to_string())?;
    for row in &rows {
        let p = row.param;
        // Spectra of the reduced states of (1 ⊗ E_p)|Phi+>: B sees
        // {(1-p)/2, (1-p)/2, p}, E sees {p/2, p/2, 1-p}, A is maximally mixed.
        let hb = shannon(&[(1.0 - p) / 2.0, (1.0 - p) / 2.0, p]);
        let he = shannon(&[p / 2.0, p / 2.0, 1.0 - p]);
        let (ic, iab) = (hb - he, 1.0 + hb - he);
        check((row.profile.coherent() - ic).abs() <= 1e-9, || format!("Ic at p={p}"))?;
        check((row.profile.mutual_ab() - iab).abs() <= 1e-9, || format!("I(A;B) at p={p}"))?;
        check((ic - (1.0 - 2.0 * p)).abs() <= 1e-9 && (iab - (2.0 - 2.0 * p)).abs() <= 1e-9, || {
            format!("oracle disagrees with closed form at p={p}")
        })?;
    }
    let id = &sweep(ChannelFamily::Identity, &[0.0], &[]).map_err(|e| e.to_string())?[0];
    check((id.profile.coherent() - 1.0).abs() <= 1e-9 && (id.profile.mutual_ab() - 2.0).abs() <= 1e-9, || {
        format!("identity channel: Ic={} I(A;B)={}", id.profile.coherent(), id.profile.mutual_ab())
    })
}

fn circuit_suite() -> Outcome {
    let mut rng = SeededRng::new(0);
    for i in 0..50 {
        let v = random_pure_qubit(&mut rng);
        let run = run_teleportation([v[0], v[1]]).map_err(|e| e.to_string())?;
        check(run.min_fidelity() >= 1.0 - 1e-10, || format!("TP input {i}: {}", run.min_fidelity()))?;
    }
    for x in [[false, false], [false, true], [true, false], [true, true]] {
        let run = run_superdense(x).map_err(|e| e.to_string())?;
        check(run.decoded == x, || format!("SD decoded {:?} for {x:?}", run.decoded))?;
    }
    let qe = run_qe(1).map_err(|e| e.to_string())?;
    check(qe.fidelity >= 1.0 - 1e-12, || format!("QE fidelity {}", qe.fidelity))?;

    let csd_ri = parse_ri("[q->q] + [qq] >=! 2 [q->qq]").map_err(|e| e.to_string())?;
    let ctp_ri = parse_ri("2 [q->qq] + [qq] >=! [q->q] + 2 [qq]").map_err(|e| e.to_string())?;
    let csd = run_coherent_sd(&[Complex64::new(0.5, 0.0); 4]).map_err(|e| e.to_string())?;
    check(csd.fidelity >= 1.0 - 1e-10, || format!("coherent SD fidelity {}", csd.fidelity))?;
    check(csd.ledger.to_ri("").same_statement(&csd_ri), || "coherent SD ledger".into())?;
    for i in 0..50 {
        let v = random_pure_qubit(&mut rng);
        let run = run_coherent_tp([v[0], v[1]]).map_err(|e| e.to_string())?;
        check(run.fidelity >= 1.0 - 1e-10, || format!("coherent TP input {i}: {}", run.fidelity))?;
        check(run.ledger.to_ri("").same_statement(&ctp_ri), || "coherent TP ledger".into())?;
    }

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let ri = demo_rule_i_on_tp([Complex64::new(s, 0.0), Complex64::new(s, 0.0)]).map_err(|e| e.to_string())?;
    check(ri.distribution.iter().all(|p| (p - 0.25).abs() <= 1e-12), || format!("{:?}", ri.distribution))?;
    check(ri.min_decoupling >= 1.0 - 1e-12, || format!("decoupling {}", ri.min_decoupling))?;
    let ro = demo_rule_o_on_sd().map_err(|e| e.to_string())?;
    check(ro.min_residual_overlap >= 1.0 - 1e-12, || format!("residual {}", ro.min_residual_overlap))?;

    let report = verify(0).map_err(|e| e.to_string())?;
    let failed: Vec<&str> = report.protocols.iter().filter(|p| !p.pass).map(|p| p.name.as_str()).collect();
    check(report.all_pass(), || format!("verify report failures: {failed:?}"))
}

fn numeric(v: &qfamily_core::algebra::ResourceVector, p: &EntropyProfile) -> BTreeMap<ResourceKind, f64> {
    v.iter().map(|(k, c)| (k.clone(), p.evaluate(c))).collect()
}

fn cross_layer() -> Outcome {
    let reg = Registry::standard();
    let fam = derive_family();
    let objects = ObjectRegistry::builtin();
    let mut checked = 0;
    for (name, ri) in fam.iter() {
        let first = ri.trace.first().ok_or_else(|| format!("{name} has no trace"))?;
        for obj in objects.iter() {
            let Ok(table) = rate_table(ri, obj, None) else { continue };
            let profile = table.profile;
            // Trace route: start from the primitive and add each step's
            // numeric change to lhs - rhs.
            let mut net = numeric(&first.before.net(), &profile);
            for step in &ri.trace {
                let tool = reg.get(&step.tool);
                let delta = net_delta(step, tool).ok_or_else(|| format!("{name}: no delta for {:?}", step.kind))?;
                for (k, x) in numeric(&delta, &profile) {
                    *net.entry(k).or_insert(0.0) += x;
                }
            }
            // Direct route: the rate table of the final statement.
            let mut direct: BTreeMap<ResourceKind, f64> = BTreeMap::new();
            for (sign, side) in [(1.0, &table.lhs), (-1.0, &table.rhs)] {
                for e in side {
                    let x = match e.rate {
                        Rate::PerUse(x) => x,
                        Rate::Copies(n) => n as f64,
                    };
                    *direct.entry(e.kind.clone()).or_insert(0.0) += sign * x;
                }
            }
            let kinds: std::collections::BTreeSet<_> = net.keys().chain(direct.keys()).cloned().collect();
            for k in kinds {
                let (a, b) = (net.get(&k).copied().unwrap_or(0.0), direct.get(&k).copied().unwrap_or(0.0));
                check((a - b).abs() <= 1e-9, || format!("{name} on {}: {k} trace {a} vs direct {b}", obj.name))?;
            }
            checked += 1;
        }
    }
    check(checked > 0, || "no compatible (inequality, object) pairs".into())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("family tree reproduction", family_tree),
        ("coherentification round trips", coherence_round_trips),
        ("entropic identity suite", identity_suite),
        ("channel rates", channel_rates),
        ("circuit suite", circuit_suite),
        ("cross-layer consistency", cross_layer),
    ];
    let mut ok = true;
    for (i, (label, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(()) => println!("criterion {}: PASS  {label}", i + 1),
            Err(msg) => {
                ok = false;
                println!("criterion {}: FAIL  {label}: {msg}", i + 1);
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
