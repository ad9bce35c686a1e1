//! JSON forms of inequalities, derivation traces, object registries and
//! reports.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use qfamily_core::algebra::{EntropicExpr, Generator, Mode, Rational, ResourceInequality, ResourceKind, ResourceVector, RuleFlags};
use qfamily_core::circuit::{ProtocolReport, ResourceLedger, VerifyReport};
use qfamily_core::derivation::{DerivationStep, DualityEdge, DualityRelation, StepKind};
use qfamily_core::entropy::{
    CMatrix, DensityOp, EntropyProfile, NoisyObject, ObjectKind, QuantumChannel, Rate, RateEntry, RateTable,
};

/// Coefficients keyed `CONST`, `H_A`, `H_B`, `H_E`, each an exact `p/q`.
pub type CoeffJson = BTreeMap<String, String>;

pub fn coeff_to_json(e: &EntropicExpr) -> CoeffJson {
    Generator::ALL.iter().map(|g| (g.key().to_string(), e.coeff(*g).to_string())).collect()
}

pub fn coeff_from_json(map: &CoeffJson) -> Result<EntropicExpr> {
    let mut coeffs = [Rational::from_integer(0); 4];
    for (key, value) in map {
        let g = Generator::from_key(key).ok_or_else(|| anyhow!("unknown coefficient key `{key}`"))?;
        coeffs[g.index()] = value
            .trim()
            .parse::<Rational>()
            .map_err(|e| anyhow!("bad coefficient `{value}` for {key}: {e}"))?;
    }
    Ok(EntropicExpr::from_coeffs(coeffs))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub handle: Option<String>,
    pub coeff: CoeffJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlagsJson {
    #[serde(rename = "rule_I")]
    pub rule_i: bool,
    #[serde(rename = "rule_O")]
    pub rule_o: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepJson {
    pub kind: String,
    pub tool: String,
    pub multiplier: CoeffJson,
    pub before: Box<RiJson>,
    pub after: Box<RiJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiJson {
    pub name: String,
    pub mode: String,
    pub lhs: Vec<TermJson>,
    pub rhs: Vec<TermJson>,
    pub flags: FlagsJson,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<StepJson>,
}

fn vector_to_json(v: &ResourceVector) -> Vec<TermJson> {
    v.iter()
        .map(|(k, c)| TermJson {
            kind: k.tag().to_string(),
            handle: k.handle().map(str::to_string),
            coeff: coeff_to_json(c),
        })
        .collect()
}

fn vector_from_json(terms: &[TermJson]) -> Result<ResourceVector> {
    let mut v = ResourceVector::new();
    for t in terms {
        let kind = ResourceKind::from_tag(&t.kind, t.handle.clone())
            .ok_or_else(|| anyhow!("unknown resource kind `{}`", t.kind))?;
        v.add_term(kind, coeff_from_json(&t.coeff)?);
    }
    Ok(v)
}

pub fn step_to_json(s: &DerivationStep) -> StepJson {
    StepJson {
        kind: s.kind.tag().to_string(),
        tool: s.tool.clone(),
        multiplier: coeff_to_json(&s.multiplier),
        before: Box::new(ri_to_json(&s.before)),
        after: Box::new(ri_to_json(&s.after)),
    }
}

pub fn ri_to_json(ri: &ResourceInequality) -> RiJson {
    RiJson {
        name: ri.name.clone(),
        mode: ri.mode.tag().to_string(),
        lhs: vector_to_json(&ri.lhs),
        rhs: vector_to_json(&ri.rhs),
        flags: FlagsJson { rule_i: ri.flags.rule_i_ok, rule_o: ri.flags.rule_o_ok },
        trace: ri.trace.iter().map(step_to_json).collect(),
    }
}

fn ri_from_json_unchecked(j: &RiJson) -> Result<ResourceInequality> {
    let mode = Mode::from_tag(&j.mode).ok_or_else(|| anyhow!("unknown mode `{}`", j.mode))?;
    let mut ri = ResourceInequality::unchecked(j.name.clone(), vector_from_json(&j.lhs)?, vector_from_json(&j.rhs)?, mode)
        .with_flags(RuleFlags { rule_i_ok: j.flags.rule_i, rule_o_ok: j.flags.rule_o });
    for (i, s) in j.trace.iter().enumerate() {
        let kind = StepKind::from_tag(&s.kind).ok_or_else(|| anyhow!("step {i}: unknown step kind `{}`", s.kind))?;
        ri.trace.push(DerivationStep {
            kind,
            tool: s.tool.clone(),
            multiplier: coeff_from_json(&s.multiplier).with_context(|| format!("step {i}"))?,
            before: Box::new(ri_from_json_unchecked(&s.before)?),
            after: Box::new(ri_from_json_unchecked(&s.after)?),
        });
    }
    Ok(ri)
}

/// Parses a top-level inequality. Trace snapshots may be intermediate states
/// and are not validated.
pub fn ri_from_json(j: &RiJson) -> Result<ResourceInequality> {
    let ri = ri_from_json_unchecked(j)?;
    ri.validate().with_context(|| format!("inequality `{}`", j.name))?;
    Ok(ri)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub left: String,
    pub right: String,
    pub relation: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub wasted: Vec<TermJson>,
    pub holds: bool,
}

pub fn relation_tag(r: DualityRelation) -> &'static str {
    match r {
        DualityRelation::Exact => "EXACT",
        DualityRelation::QuantumParts => "QUANTUM_PARTS",
        DualityRelation::AfterWaste => "AFTER_WASTE",
    }
}

pub fn edge_to_json(e: &DualityEdge) -> EdgeJson {
    EdgeJson {
        left: e.left.clone(),
        right: e.right.clone(),
        relation: relation_tag(e.relation).to_string(),
        wasted: vector_to_json(&e.wasted),
        holds: e.holds(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub inequalities: Vec<RiJson>,
    pub duality: Vec<EdgeJson>,
}

/// One entry of a registry file. States carry the row-major density matrix
/// of `dims[0] * dims[1]`; channels carry `dims = [d_in, d_out]` and a list
/// of row-major `d_out x d_in` Kraus operators. Entries are `[re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ObjectJson {
    State { name: String, dims: [usize; 2], data: Vec<[f64; 2]> },
    Channel { name: String, dims: [usize; 2], data: Vec<Vec<[f64; 2]>> },
}

/// A registry file holds one object or a list of them.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum RegistryFile {
    Many(Vec<ObjectJson>),
    One(ObjectJson),
}

fn matrix_from_pairs(rows: usize, cols: usize, data: &[[f64; 2]], what: &str) -> Result<CMatrix> {
    if data.len() != rows * cols {
        bail!("{what}: {} entries, expected {rows}x{cols} = {}", data.len(), rows * cols);
    }
    let values: Vec<Complex64> = data.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
    Ok(CMatrix::from_row_slice(rows, cols, &values))
}

fn matrix_to_pairs(m: &CMatrix) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            out.push([m[(r, c)].re, m[(r, c)].im]);
        }
    }
    out
}

pub fn object_from_json(j: &ObjectJson) -> Result<NoisyObject> {
    match j {
        ObjectJson::State { name, dims: [da, db], data } => {
            let d = da * db;
            let rho = DensityOp::new(matrix_from_pairs(d, d, data, name)?).with_context(|| format!("state `{name}`"))?;
            Ok(NoisyObject::state(name.clone(), rho, *da, *db)?)
        }
        ObjectJson::Channel { name, dims: [d_in, d_out], data } => {
            let kraus = data
                .iter()
                .enumerate()
                .map(|(i, k)| matrix_from_pairs(*d_out, *d_in, k, &format!("{name} Kraus {i}")))
                .collect::<Result<Vec<_>>>()?;
            let ch = QuantumChannel::new(kraus).with_context(|| format!("channel `{name}`"))?;
            Ok(NoisyObject::channel(name.clone(), ch))
        }
    }
}

pub fn object_to_json(o: &NoisyObject) -> ObjectJson {
    match &o.kind {
        ObjectKind::State { rho, d_a, d_b } => {
            ObjectJson::State { name: o.name.clone(), dims: [*d_a, *d_b], data: matrix_to_pairs(rho.matrix()) }
        }
        ObjectKind::Channel(ch) => ObjectJson::Channel {
            name: o.name.clone(),
            dims: [ch.d_in(), ch.d_out()],
            data: ch.kraus().iter().map(matrix_to_pairs).collect(),
        },
    }
}

pub fn parse_registry(text: &str) -> Result<Vec<NoisyObject>> {
    let file: RegistryFile = serde_json::from_str(text).context("registry file is not valid JSON")?;
    let entries = match file {
        RegistryFile::Many(v) => v,
        RegistryFile::One(o) => vec![o],
    };
    entries.iter().map(object_from_json).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileJson {
    #[serde(rename = "H_A")]
    pub h_a: f64,
    #[serde(rename = "H_B")]
    pub h_b: f64,
    #[serde(rename = "H_E")]
    pub h_e: f64,
    #[serde(rename = "I_AB")]
    pub i_ab: f64,
    #[serde(rename = "I_AE")]
    pub i_ae: f64,
    #[serde(rename = "Ic")]
    pub ic: f64,
}

impl From<&EntropyProfile> for ProfileJson {
    fn from(p: &EntropyProfile) -> Self {
        ProfileJson { h_a: p.h_a, h_b: p.h_b, h_e: p.h_e, i_ab: p.mutual_ab(), i_ae: p.mutual_ae(), ic: p.coherent() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RateJson {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub handle: Option<String>,
    pub coeff: CoeffJson,
    pub rate: f64,
    pub unit: &'static str,
}

pub fn rate_entry_to_json(e: &RateEntry) -> RateJson {
    let (rate, unit) = rate_value(&e.rate);
    RateJson {
        kind: e.kind.tag().to_string(),
        handle: e.kind.handle().map(str::to_string),
        coeff: coeff_to_json(&e.coeff),
        rate,
        unit,
    }
}

pub fn rate_value(r: &Rate) -> (f64, &'static str) {
    match r {
        Rate::PerUse(x) => (*x, "per_use"),
        Rate::Copies(n) => (*n as f64, "copies"),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RateTableJson {
    pub ri: String,
    pub object: String,
    pub mode: String,
    pub profile: ProfileJson,
    pub lhs: Vec<RateJson>,
    pub rhs: Vec<RateJson>,
}

pub fn rate_table_to_json(t: &RateTable) -> RateTableJson {
    RateTableJson {
        ri: t.ri.clone(),
        object: t.object.clone(),
        mode: t.mode.tag().to_string(),
        profile: (&t.profile).into(),
        lhs: t.lhs.iter().map(rate_entry_to_json).collect(),
        rhs: t.rhs.iter().map(rate_entry_to_json).collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LedgerJson {
    pub consumed: BTreeMap<String, u64>,
    pub produced: BTreeMap<String, u64>,
}

fn counts(m: &BTreeMap<ResourceKind, u64>) -> BTreeMap<String, u64> {
    m.iter().map(|(k, n)| (k.tag().to_string(), *n)).collect()
}

impl From<&ResourceLedger> for LedgerJson {
    fn from(l: &ResourceLedger) -> Self {
        LedgerJson { consumed: counts(&l.consumed), produced: counts(&l.produced) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProtocolJson {
    pub name: String,
    pub fidelity: f64,
    pub ledger: LedgerJson,
    pub claims: Option<String>,
    pub ledger_matches: bool,
    pub metrics: BTreeMap<String, f64>,
    pub pass: bool,
}

impl From<&ProtocolReport> for ProtocolJson {
    fn from(p: &ProtocolReport) -> Self {
        ProtocolJson {
            name: p.name.clone(),
            fidelity: p.fidelity,
            ledger: (&p.ledger).into(),
            claims: p.claims.as_ref().map(|c| c.to_string()),
            ledger_matches: p.ledger_matches,
            metrics: p.metrics.iter().cloned().collect(),
            pass: p.pass,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RuleIJson {
    pub distribution: [f64; 4],
    pub min_decoupling: f64,
    pub coherent_fidelity: f64,
    pub ledger: LedgerJson,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RuleOJson {
    pub min_residual_overlap: f64,
    pub min_copy_prob: f64,
    pub coherent_fidelity: f64,
    pub unitarity_deviation: f64,
    pub ledger: LedgerJson,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyJson {
    pub seed: u64,
    pub all_pass: bool,
    pub protocols: Vec<ProtocolJson>,
    pub rule_i: RuleIJson,
    pub rule_o: RuleOJson,
}

pub fn verify_to_json(seed: u64, r: &VerifyReport) -> VerifyJson {
    VerifyJson {
        seed,
        all_pass: r.all_pass(),
        protocols: r.protocols.iter().map(Into::into).collect(),
        rule_i: RuleIJson {
            distribution: r.rule_i.distribution,
            min_decoupling: r.rule_i.min_decoupling,
            coherent_fidelity: r.rule_i.coherent_fidelity,
            ledger: (&r.rule_i.ledger).into(),
            pass: r.rule_i.passes(),
        },
        rule_o: RuleOJson {
            min_residual_overlap: r.rule_o.min_residual_overlap,
            min_copy_prob: r.rule_o.min_copy_prob,
            coherent_fidelity: r.rule_o.coherent_fidelity,
            unitarity_deviation: r.rule_o.unitarity_deviation,
            ledger: (&r.rule_o.ledger).into(),
            pass: r.rule_o.passes(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qfamily_core::derivation::derive_family;
    use qfamily_core::entropy::ObjectRegistry;

    #[test]
    fn family_round_trips_through_json() {
        for (_, ri) in derive_family().iter() {
            let text = serde_json::to_string(&ri_to_json(ri)).unwrap();
            let back = ri_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(&back, ri);
        }
    }

    #[test]
    fn builtin_objects_round_trip() {
        for o in ObjectRegistry::builtin().iter() {
            let text = serde_json::to_string(&object_to_json(o)).unwrap();
            let back = parse_registry(&text).unwrap();
            assert_eq!(back.len(), 1);
            let flat = |j: ObjectJson| match j {
                ObjectJson::State { name, dims, data } => (name, dims, data),
                ObjectJson::Channel { name, dims, data } => (name, dims, data.concat()),
            };
            let (got, want) = (flat(object_to_json(&back[0])), flat(object_to_json(o)));
            assert_eq!((&got.0, got.1), (&want.0, want.1));
            for (a, b) in got.2.iter().zip(&want.2) {
                assert!((a[0] - b[0]).abs() <= 1e-15 && (a[1] - b[1]).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn coefficients_accept_integers_and_fractions() {
        let map: CoeffJson = [("H_A", "1/2"), ("CONST", "-3")].iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        let e = coeff_from_json(&map).unwrap();
        assert_eq!(e, EntropicExpr::h_a().scale(Rational::new(1, 2)) + EntropicExpr::int(-3));
        let bad: CoeffJson = [("H_X".to_string(), "1".to_string())].into_iter().collect();
        assert!(coeff_from_json(&bad).is_err());
    }

    #[test]
    fn registry_rejects_wrong_sizes() {
        let text = r#"{"name":"x","kind":"state","dims":[2,2],"data":[[1,0]]}"#;
        assert!(parse_registry(text).is_err());
    }
}
