//! `qfamily`: print and derive the protocol family, evaluate rates on
//! concrete states and channels, and run the circuit and identity checks.
//!
//! Exit codes: 0 on success, 1 when a requested check fails, 2 on usage or
//! input errors.

pub mod json;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use qfamily_core::algebra::{format_ri, parse_expr, parse_ri, EntropicExpr, Parties, RawSymbol, ResourceInequality};
use qfamily_core::circuit::verify;
use qfamily_core::derivation::{derive_family, duality_edges, DerivationStep, DualityRelation, Family, Registry};
use qfamily_core::entropy::{
    evaluate_raw, format_significant, random_tripartite, rate_table, sweep, ChannelFamily, NoisyObject, ObjectRegistry,
    Rate, SweepRow,
};
use qfamily_core::rng::SeededRng;

/// Largest identity violation `check-identities` accepts.
pub const IDENTITY_TOL: f64 = 1e-9;

const SIG_DIGITS: usize = 12;

#[derive(Debug, Parser)]
#[command(name = "qfamily", version, about = "Resource inequalities of the mother/father protocol family")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the primitives, the derived inequalities, their traces and the duality edges.
    Family {
        #[arg(long)]
        json: bool,
    },
    /// Print the derivation trace of one inequality.
    Derive {
        #[arg(long)]
        target: String,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate an inequality on a concrete state or channel.
    Rates(RatesArgs),
    /// Entropic quantities of a channel family over a parameter grid.
    Sweep(SweepArgs),
    /// Run the protocol circuits and report fidelities and ledgers as JSON.
    VerifyCircuits {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the pure-state entropy identities on seeded random states.
    CheckIdentities {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Print the dual of a named inequality or of inequality text.
    Dual {
        #[arg(long, conflicts_with = "text", required_unless_present = "text")]
        ri: Option<String>,
        #[arg(long)]
        text: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
struct RatesArgs {
    #[arg(long)]
    ri: String,
    /// Channel family name with `--param`, or a registered channel without.
    #[arg(long, conflicts_with = "state", required_unless_present = "state")]
    channel: Option<String>,
    #[arg(long)]
    state: Option<String>,
    #[arg(long, requires = "channel")]
    param: Option<f64>,
    /// Extra objects, as a JSON file.
    #[arg(long, env = "QFAMILY_REGISTRY")]
    registry: Option<PathBuf>,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    channel: String,
    /// Grid as `start:stop:step`, both ends inclusive.
    #[arg(long)]
    param: String,
    /// Extra column, evaluated per row. Repeatable.
    #[arg(long = "expr")]
    exprs: Vec<String>,
    #[arg(long)]
    json: bool,
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

/// Returns whether every requested check passed.
fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<bool> {
    match cmd {
        Command::Family { json } => cmd_family(json, out).map(|_| true),
        Command::Derive { target, json } => cmd_derive(&target, json, out).map(|_| true),
        Command::Rates(a) => cmd_rates(&a, out).map(|_| true),
        Command::Sweep(a) => cmd_sweep(&a, out).map(|_| true),
        Command::VerifyCircuits { seed } => cmd_verify(seed, out),
        Command::CheckIdentities { trials, seed, json } => cmd_check_identities(trials, seed, json, out),
        Command::Dual { ri, text, json } => cmd_dual(ri.as_deref(), text.as_deref(), json, out).map(|_| true),
    }
}

fn write_json<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Looks a name up among the primitives, then the derived inequalities.
fn lookup<'a>(reg: &'a Registry, fam: &'a Family, name: &str) -> Result<&'a ResourceInequality> {
    reg.get(name).or_else(|| fam.get(name)).ok_or_else(|| {
        let mut known: Vec<&str> = reg.primitives().iter().map(|r| r.name.as_str()).collect();
        known.extend(fam.iter().map(|(n, _)| n.as_str()));
        anyhow!("unknown inequality `{name}`; known: {}", known.join(", "))
    })
}

/// The ten inequalities of the tree: primitives, then children.
fn tree(reg: &Registry, fam: &Family) -> Vec<ResourceInequality> {
    reg.primitives().into_iter().chain(fam.children()).cloned().collect()
}

fn write_trace(out: &mut dyn Write, trace: &[DerivationStep]) -> Result<()> {
    if let Some(first) = trace.first() {
        writeln!(out, "    from {}", format_ri(&first.before))?;
    }
    for (i, s) in trace.iter().enumerate() {
        let detail = match s.tool.as_str() {
            "" => s.kind.tag().to_string(),
            tool => format!("{} {} x {}", s.kind.tag(), tool, s.multiplier),
        };
        writeln!(out, "    {}. {}  =>  {}", i + 1, detail, s.after)?;
    }
    Ok(())
}

fn describe_edge(rel: DualityRelation, wasted: &str) -> String {
    match rel {
        DualityRelation::Exact => "dual".to_string(),
        DualityRelation::QuantumParts => "dual in quantum parts".to_string(),
        DualityRelation::AfterWaste => format!("dual after wasting {wasted}"),
    }
}

fn cmd_family(as_json: bool, out: &mut dyn Write) -> Result<()> {
    let reg = Registry::standard();
    let fam = derive_family();
    let edges = duality_edges(&reg, &fam)?;
    let ris = tree(&reg, &fam);
    if as_json {
        let doc = json::FamilyJson {
            inequalities: ris.iter().map(json::ri_to_json).collect(),
            duality: edges.iter().map(json::edge_to_json).collect(),
        };
        return write_json(out, &doc);
    }
    writeln!(out, "primitives:")?;
    for ri in &ris[..5] {
        writeln!(out, "  {}", format_ri(ri))?;
    }
    writeln!(out, "derived:")?;
    for ri in &ris[5..] {
        writeln!(out, "  {}", format_ri(ri))?;
        write_trace(out, &ri.trace)?;
    }
    writeln!(out, "duality:")?;
    for e in &edges {
        let status = if e.holds() { "holds" } else { "FAILS" };
        writeln!(out, "  {} <-> {}: {} ({status})", e.left, e.right, describe_edge(e.relation, &e.wasted.to_string()))?;
    }
    Ok(())
}

fn cmd_derive(target: &str, as_json: bool, out: &mut dyn Write) -> Result<()> {
    let reg = Registry::standard();
    let fam = derive_family();
    let ri = lookup(&reg, &fam, target)?;
    if as_json {
        let steps: Vec<_> = ri.trace.iter().map(json::step_to_json).collect();
        return write_json(out, &steps);
    }
    writeln!(out, "{}", format_ri(ri))?;
    if ri.trace.is_empty() {
        writeln!(out, "    primitive")?;
    }
    write_trace(out, &ri.trace)
}

fn load_objects(path: Option<&PathBuf>) -> Result<ObjectRegistry> {
    let mut objects = ObjectRegistry::builtin();
    if let Some(path) = path {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        for o in json::parse_registry(&text).with_context(|| format!("in {}", path.display()))? {
            objects.insert(o);
        }
    }
    Ok(objects)
}

fn resolve_object(a: &RatesArgs) -> Result<NoisyObject> {
    if let (Some(name), Some(p)) = (&a.channel, a.param) {
        let ch = ChannelFamily::from_name(name)?.build(p)?;
        return Ok(NoisyObject::channel(name.clone(), ch));
    }
    let objects = load_objects(a.registry.as_ref())?;
    let (name, want) = match (&a.channel, &a.state) {
        (Some(c), _) => (c, "channel"),
        (None, Some(s)) => (s, "state"),
        (None, None) => bail!("one of --channel or --state is required"),
    };
    let obj = objects
        .get(name)
        .ok_or_else(|| anyhow!("unknown {want} `{name}`; known: {}", objects.names().join(", ")))?;
    if obj.kind.label() != want {
        bail!("`{name}` is a {}, not a {want}", obj.kind.label());
    }
    Ok(obj.clone())
}

fn fmt(x: f64) -> String {
    format_significant(x, SIG_DIGITS)
}

fn cmd_rates(a: &RatesArgs, out: &mut dyn Write) -> Result<()> {
    let reg = Registry::standard();
    let fam = derive_family();
    let ri = lookup(&reg, &fam, &a.ri)?;
    let obj = resolve_object(a)?;
    let table = rate_table(ri, &obj, None)?;
    if a.json {
        return write_json(out, &json::rate_table_to_json(&table));
    }
    let rows = table.lhs.iter().map(|e| ("lhs", e)).chain(table.rhs.iter().map(|e| ("rhs", e)));
    if a.csv {
        let mut w = csv::Writer::from_writer(vec![]);
        w.write_record(["side", "kind", "coeff", "rate", "unit"])?;
        for (side, e) in rows {
            let (rate, unit) = json::rate_value(&e.rate);
            w.write_record([side, &e.kind.to_string(), &e.coeff.to_string(), &fmt(rate), unit])?;
        }
        out.write_all(&w.into_inner()?)?;
        return Ok(());
    }
    let p = &table.profile;
    writeln!(out, "{}", format_ri(ri))?;
    writeln!(out, "on {} ({})", obj.name, obj.kind.label())?;
    writeln!(
        out,
        "H_A={} H_B={} H_E={} I_AB={} I_AE={} Ic={}",
        fmt(p.h_a),
        fmt(p.h_b),
        fmt(p.h_e),
        fmt(p.mutual_ab()),
        fmt(p.mutual_ae()),
        fmt(p.coherent())
    )?;
    for (side, e) in rows {
        let value = match e.rate {
            Rate::PerUse(x) => format!("{} per use", fmt(x)),
            Rate::Copies(1) => "1 copy".to_string(),
            Rate::Copies(n) => format!("{n} copies"),
        };
        writeln!(out, "{side} {} {} = {value}", e.kind, e.coeff)?;
    }
    writeln!(out, "{table}")?;
    Ok(())
}

/// Expands `start:stop:step` into an inclusive grid.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let nums = parts
        .iter()
        .map(|s| s.trim().parse::<f64>().map_err(|_| anyhow!("bad grid value `{s}` in `{spec}`")))
        .collect::<Result<Vec<f64>>>()?;
    let (start, stop, step) = match nums[..] {
        [v] => (v, v, 1.0),
        [a, b, s] => (a, b, s),
        _ => bail!("grid `{spec}` must be `start:stop:step` or a single value"),
    };
    if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() || stop < start {
        bail!("grid `{spec}` needs finite start <= stop and step > 0");
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<()> {
    let family = ChannelFamily::from_name(&a.channel)?;
    let grid = parse_grid(&a.param)?;
    let extra = a
        .exprs
        .iter()
        .map(|t| parse_expr(t).map_err(|e| anyhow!("expression `{t}`: {e}")))
        .collect::<Result<Vec<EntropicExpr>>>()?;
    let rows = sweep(family, &grid, &extra)?;
    let header: Vec<&str> = SweepRow::HEADER.iter().copied().chain(a.exprs.iter().map(String::as_str)).collect();
    if a.json {
        let records: Vec<serde_json::Map<String, serde_json::Value>> = rows
            .iter()
            .map(|r| header.iter().zip(r.values()).map(|(h, v)| (h.to_string(), serde_json::json!(v))).collect())
            .collect();
        return write_json(out, &records);
    }
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(&header)?;
    for r in &rows {
        w.write_record(r.values().into_iter().map(fmt))?;
    }
    out.write_all(&w.into_inner()?)?;
    Ok(())
}

fn cmd_verify(seed: u64, out: &mut dyn Write) -> Result<bool> {
    let report = verify(seed)?;
    write_json(out, &json::verify_to_json(seed, &report))?;
    Ok(report.all_pass())
}

#[derive(serde::Serialize)]
struct IdentityJson {
    identity: &'static str,
    max_violation: f64,
}

#[derive(serde::Serialize)]
struct IdentityReport {
    trials: usize,
    seed: u64,
    tolerance: f64,
    identities: Vec<IdentityJson>,
    max_violation: f64,
    pass: bool,
}

/// Worst violation of each identity, from entropies of the reduced states.
pub fn identity_violations(trials: usize, seed: u64) -> [f64; 2] {
    let mut rng = SeededRng::new(seed);
    let mut worst = [0.0f64; 2];
    for _ in 0..trials {
        let psi = random_tripartite(&mut rng, 4, 4);
        let h = |s| evaluate_raw(s, &psi);
        let (iab, iae) = (h(RawSymbol::MutualAB), h(RawSymbol::MutualAE));
        let first = 0.5 * iab + 0.5 * iae - h(RawSymbol::Entropy(Parties::A));
        let second = 0.5 * iab - 0.5 * iae - h(RawSymbol::CoherentAB);
        worst[0] = worst[0].max(first.abs());
        worst[1] = worst[1].max(second.abs());
    }
    worst
}

fn cmd_check_identities(trials: usize, seed: u64, as_json: bool, out: &mut dyn Write) -> Result<bool> {
    if trials == 0 {
        bail!("--trials must be at least 1");
    }
    let names = ["1/2*I(A:B) + 1/2*I(A:E) = H(A)", "1/2*I(A:B) - 1/2*I(A:E) = Ic(A>B)"];
    let worst = identity_violations(trials, seed);
    let max = worst[0].max(worst[1]);
    let pass = max <= IDENTITY_TOL;
    if as_json {
        let report = IdentityReport {
            trials,
            seed,
            tolerance: IDENTITY_TOL,
            identities: names.iter().zip(worst).map(|(n, v)| IdentityJson { identity: n, max_violation: v }).collect(),
            max_violation: max,
            pass,
        };
        write_json(out, &report)?;
        return Ok(pass);
    }
    writeln!(out, "trials {trials}, seed {seed}")?;
    for (n, v) in names.iter().zip(worst) {
        writeln!(out, "  {n:<36} max violation {v:.3e}")?;
    }
    writeln!(out, "max violation {max:.3e} (tolerance {IDENTITY_TOL:e}): {}", if pass { "PASS" } else { "FAIL" })?;
    Ok(pass)
}

fn cmd_dual(name: Option<&str>, text: Option<&str>, as_json: bool, out: &mut dyn Write) -> Result<()> {
    let ri = match (name, text) {
        (Some(n), _) => lookup(&Registry::standard(), &derive_family(), n)?.clone(),
        (None, Some(t)) => parse_ri(t).map_err(|e| anyhow!("inequality `{t}`: {e}"))?,
        (None, None) => bail!("one of --ri or --text is required"),
    };
    let mut dual = ri.dual();
    if ri.name.is_empty() {
        dual.name.clear();
    }
    if as_json {
        return write_json(out, &json::ri_to_json(&dual.snapshot()));
    }
    writeln!(out, "{}", format_ri(&dual))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_include_both_ends() {
        assert_eq!(parse_grid("0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_grid("0:1:0.1").unwrap().len(), 11);
        assert_eq!(parse_grid("0.3").unwrap(), vec![0.3]);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("a:1:0.1").is_err());
    }

    #[test]
    fn identities_hold_on_seeded_states() {
        let w = identity_violations(20, 3);
        assert!(w[0] <= IDENTITY_TOL && w[1] <= IDENTITY_TOL, "{w:?}");
    }
}
