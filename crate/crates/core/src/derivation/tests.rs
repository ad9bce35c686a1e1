use super::*;
use crate::algebra::{parse_ri, parse_vector, EntropicExpr, Mode, Rational, ResourceKind, ResourceVector, RuleFlags};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn coeffs(c: i64, a: i64, b: i64, e: i64) -> EntropicExpr {
    EntropicExpr::from_coeffs([c.into(), a.into(), b.into(), e.into()])
}

fn stmt(text: &str) -> ResourceInequality {
    parse_ri(text).unwrap()
}

#[test]
fn hashing_inequality_coefficients_in_canonical_basis() {
    let fam = derive_family();
    let eq2 = fam.get("eq2").unwrap();
    assert_eq!(eq2.lhs.get(&ResourceKind::Cbit), coeffs(0, 1, -1, 1));
    assert_eq!(eq2.rhs.get(&ResourceKind::Ebit), coeffs(0, 0, 1, -1));
    assert_eq!(eq2.lhs.len(), 2);
    assert_eq!(eq2.rhs.len(), 1);
}

#[test]
fn children_match_their_statements() {
    let fam = derive_family();
    let expected = [
        ("eq1", "I(A:B) [c->c] + {qq} >= Ic(A>B) [q->q]"),
        ("eq2", "I(A:E) [c->c] + {qq} >= Ic(A>B) [qq]"),
        ("eq3", "H(A) [q->q] + {qq} >= I(A:B) [c->c]"),
        ("eq4", "H(A) [qq] + {q->q} >= I(A:B) [c->c]"),
        ("eq5", "{q->q} >= Ic(A>B) [q->q]"),
        ("eq1_via_eq2", "I(A:B) [c->c] + {qq} >= Ic(A>B) [q->q]"),
    ];
    for (name, text) in expected {
        let got = fam.get(name).unwrap();
        assert!(got.same_statement(&stmt(text)), "{name}: {got}");
        assert_eq!(got.mode, Mode::Asymptotic);
    }
}

#[test]
fn coherent_versions_regenerate_parents() {
    let reg = Registry::standard();
    let fam = derive_family();
    for name in ["mother_via_eq1", "mother_via_eq2", "mother_via_eq3"] {
        assert!(fam.get(name).unwrap().same_statement(reg.mother()), "{name}");
    }
    assert!(fam.get("father_via_eq4").unwrap().same_statement(reg.father()));
    assert!(reg.mother().dual().same_statement(reg.father()));
}

#[test]
fn every_trace_replays() {
    let reg = Registry::standard();
    for (name, ri) in derive_family().iter() {
        assert!(!ri.trace.is_empty(), "{name}");
        replay(ri, &reg).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    for p in reg.primitives() {
        replay(p, &reg).unwrap();
    }
}

#[test]
fn tampered_trace_is_caught() {
    let reg = Registry::standard();
    let mut eq2 = derive_family().get("eq2").unwrap().clone();
    eq2.trace[1].multiplier = EntropicExpr::mutual_ae().scale(r(1, 4));
    assert!(matches!(replay(&eq2, &reg), Err(ReplayError::Mismatch(1))));

    let mut eq3 = derive_family().get("eq3").unwrap().clone();
    eq3.rhs.add_term(ResourceKind::Cbit, EntropicExpr::one());
    assert_eq!(replay(&eq3, &reg), Err(ReplayError::WrongEnd));
}

#[test]
fn no_cancel_step_on_exact_inequalities() {
    for (_, ri) in derive_family().iter() {
        for step in &ri.trace {
            if step.kind == StepKind::Cancel {
                assert_eq!(step.before.mode, Mode::Asymptotic);
            }
        }
    }
}

#[test]
fn zero_multipliers_are_identities() {
    let reg = Registry::standard();
    let m = reg.mother();
    assert_eq!(&append(m, reg.sd(), &EntropicExpr::zero()).unwrap(), m);
    assert_eq!(&prepend(m, reg.qe(), &EntropicExpr::zero()).unwrap(), m);
    assert_eq!(&cancel(m, &ResourceKind::Ebit, &EntropicExpr::zero()).unwrap(), m);
    assert_eq!(&waste(m, &ResourceVector::new()).unwrap(), m);
}

#[test]
fn append_and_cancel_for_noisy_teleportation() {
    let reg = Registry::standard();
    let half_ab = EntropicExpr::mutual_ab().scale(r(1, 2));
    let half_ae = EntropicExpr::mutual_ae().scale(r(1, 2));
    let appended = append(reg.mother(), reg.tp(), &half_ab).unwrap();
    assert!(appended.same_statement(&stmt("1/2*I(A:E) [q->q] + I(A:B) [c->c] + {qq} >= 1/2*I(A:B) [q->q]")));
    let cancelled = cancel(&appended, &ResourceKind::QubitChannel, &half_ae).unwrap();
    assert_eq!(cancelled.rhs.get(&ResourceKind::QubitChannel), EntropicExpr::coherent_ab());
    assert_eq!(cancelled.trace.len(), 2);
    assert_eq!(cancelled.trace[0].kind, StepKind::Append);
    assert_eq!(cancelled.trace[1].kind, StepKind::Cancel);
}

#[test]
fn cancel_errors() {
    let reg = Registry::standard();
    assert_eq!(
        cancel(reg.tp(), &ResourceKind::Ebit, &EntropicExpr::one()),
        Err(DerivationError::CatalysisRequiresAsymptotic)
    );
    let err = cancel(reg.mother(), &ResourceKind::Cbit, &EntropicExpr::one()).unwrap_err();
    assert!(matches!(err, DerivationError::InsufficientCoefficient { side: "left", .. }));
}

#[test]
fn exact_composition_stays_exact() {
    let reg = Registry::standard();
    // SD then TP: [q->q] + 2[qq] >=! [q->q] + ... consumes the two cbits SD makes.
    let out = append(reg.sd(), reg.tp(), &EntropicExpr::one()).unwrap();
    assert_eq!(out.mode, Mode::Exact);
    assert!(out.same_statement(&stmt("[q->q] + 2 [qq] >=! [q->q]")));
}

#[test]
fn append_rejects_missing_noisy_input() {
    let reg = Registry::standard();
    let err = append(reg.mother(), reg.father(), &EntropicExpr::one()).unwrap_err();
    assert!(matches!(err, DerivationError::Deficient(ref s) if s.contains("{q->q}")), "{err}");
}

#[test]
fn negative_multiplier_rejected() {
    let reg = Registry::standard();
    let err = append(reg.mother(), reg.sd(), &EntropicExpr::int(-1)).unwrap_err();
    assert!(matches!(err, DerivationError::NegativeMultiplier(_)));
}

#[test]
fn rule_i_needs_certification() {
    let reg = Registry::standard();
    let fam = derive_family();
    let bare = fam.get("eq2").unwrap().clone().with_flags(RuleFlags::NONE);
    assert_eq!(apply_rule_i(&bare), Err(DerivationError::RuleNotCertified("I")));
    // The channel capacity child cannot regenerate its parent.
    let eq5 = fam.get("eq5").unwrap();
    assert!(apply_rule_i(eq5).is_err());
    assert!(apply_rule_o(eq5).is_err());
    // A certified inequality without classical bits is left alone.
    let qe = reg.qe().clone().with_flags(RuleFlags::RULE_I);
    assert_eq!(apply_rule_i(&qe).unwrap(), qe);
    // Certified, but the only classical bits are outputs.
    let sd = reg.sd().clone().with_flags(RuleFlags::RULE_I);
    assert_eq!(apply_rule_i(&sd), Err(DerivationError::NoClassicalInput));
}

#[test]
fn rule_o_needs_certification_and_quantum_inputs() {
    let reg = Registry::standard();
    let fam = derive_family();
    let bare = fam.get("eq3").unwrap().clone().with_flags(RuleFlags::NONE);
    assert_eq!(apply_rule_o(&bare), Err(DerivationError::RuleNotCertified("O")));
    let qe = reg.qe().clone().with_flags(RuleFlags::RULE_O);
    assert_eq!(apply_rule_o(&qe).unwrap(), qe);
    let eq2 = fam.get("eq2").unwrap().clone().with_flags(RuleFlags::RULE_O);
    assert_eq!(apply_rule_o(&eq2), Err(DerivationError::NoClassicalOutput));
    let mixed = stmt("[c->c] + [q->q] >= [c->c] + [qq] @rule_O");
    assert_eq!(apply_rule_o(&mixed), Err(DerivationError::ClassicalInputForRuleO));
}

#[test]
fn rule_i_on_teleportation_matches_coherent_teleportation() {
    let reg = Registry::standard();
    let coherent = apply_rule_i(reg.tp()).unwrap();
    assert!(coherent.same_statement(&stmt("[q->q] + [qq] >= [q->q] + [qq]")));
    // 2[q->qq] + [qq] >=! [q->q] + 2[qq], cobits expanded, differs only by a
    // catalytic ebit.
    let ctp = stmt("2 [q->qq] + [qq] >=! [q->q] + 2 [qq]");
    let expanded = ResourceVector::new() + ctp.lhs.expand_cobits();
    assert_eq!(expanded.get(&ResourceKind::QubitChannel), EntropicExpr::one());
    assert_eq!(expanded.get(&ResourceKind::Ebit), EntropicExpr::int(2));
    assert_eq!(expanded - ctp.rhs.expand_cobits(), coherent.net());
}

#[test]
fn rule_o_on_dense_coding_matches_coherent_dense_coding() {
    let reg = Registry::standard();
    let coherent = apply_rule_o(reg.sd()).unwrap();
    let csd = stmt("[q->q] + [qq] >=! 2 [q->qq]");
    assert_eq!(coherent.lhs, csd.lhs.expand_cobits());
    assert_eq!(coherent.rhs, csd.rhs.expand_cobits());
}

#[test]
fn waste_makes_qe_dual_to_tp() {
    let reg = Registry::standard();
    let wasted = waste(reg.qe(), &parse_vector("2 [c->c]").unwrap()).unwrap();
    assert_eq!(wasted.mode, Mode::Exact);
    assert!(wasted.dual().same_statement(reg.tp()));
    let err = waste(reg.qe(), &parse_vector("-1 [c->c]").unwrap()).unwrap_err();
    assert!(matches!(err, DerivationError::NegativeWaste(_)));
}

#[test]
fn duality_edges_hold() {
    let reg = Registry::standard();
    let fam = derive_family();
    let edges = duality_edges(&reg, &fam).unwrap();
    assert_eq!(edges.len(), 6);
    for e in &edges {
        assert!(e.holds(), "{} ~ {}", e.left, e.right);
    }
    // Since the dual fixes [c->c], eq3 and eq4 are in fact fully dual here.
    assert!(fam.get("eq3").unwrap().dual().same_statement(fam.get("eq4").unwrap()));
}

#[test]
fn step_tags_round_trip() {
    for k in StepKind::ALL {
        assert_eq!(StepKind::from_tag(k.tag()), Some(k));
    }
}
