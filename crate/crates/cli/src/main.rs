use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use endlink::decomposition::{
    build, construction_checks, contract_to_linked, report_json, to_dot, to_json, verify,
    TreeDecomposition,
};
use endlink::ends::{deep_component, MARGIN};
use endlink::families::{by_name, AppendixGadget, FiniteGraph, CATALOG};
use endlink::gadget::{gadget_facts, with_y1_shortcut, without_x3_s1, FACTS_HORIZON};
use endlink::graph::expand;
use endlink::{Error, GDeltaSpec, GraphFamily, Host, PsiRule, Truncation, VSet};

#[derive(Parser)]
#[command(name = "endlink", version, about = "Linked tree-decompositions displaying end sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct FamilyArgs {
    /// Built-in family name, or `finite` with --input.
    #[arg(long, default_value = "half_grid")]
    family: String,
    /// Width parameter of `half_grid`.
    #[arg(long)]
    k: Option<u32>,
    /// JSON graph file for the `finite` family.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Radius of the BFS window.
    #[arg(long)]
    horizon: Option<u32>,
}

#[derive(clap::Args, Clone)]
struct TreeArgs {
    /// `undominated`, `all`, or `subset:id1,id2,...`.
    #[arg(long, default_value = "undominated")]
    psi: String,
    #[arg(long, default_value_t = 5)]
    levels: u32,
    /// Maximum number of comparable edge pairs tested for linkedness.
    #[arg(long, default_value_t = 100_000)]
    pair_budget: usize,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mutation {
    None,
    #[value(name = "remove-x3-s1")]
    RemoveX3S1,
    Y1Shortcut,
}

#[derive(Subcommand)]
enum Command {
    /// Build, contract and verify a decomposition.
    Build {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        tree: TreeArgs,
        /// Include every envelope computation in the construction log.
        #[arg(long)]
        dump_envelopes: bool,
        /// Include every region-algorithm transcript in the construction log.
        #[arg(long)]
        dump_algorithm: bool,
    },
    /// Verify a decomposition previously written by `build` (or by hand).
    Verify {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long)]
        decomposition: PathBuf,
    },
    /// Sanity checks on a family's declared ends.
    AuditOracle {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// The three separator facts of the gadget graph.
    GadgetFacts {
        #[arg(long, default_value_t = FACTS_HORIZON)]
        horizon: u32,
        #[arg(long, default_value_t = 1)]
        rung: u32,
        #[arg(long, value_enum, default_value_t = Mutation::None)]
        mutation: Mutation,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List the built-in families.
    Families,
}

/// Failure carrying the process exit code.
struct Exit(u8, String);

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::HorizonTooSmall { .. } => 3,
            Error::EnvelopeContract(_) | Error::RegionContract(_) | Error::TouchingRegions { .. } => 1,
            _ => 2,
        };
        Exit(code, e.to_string())
    }
}

fn config(msg: impl Into<String>) -> Exit {
    Exit(2, msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Exit(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> Result<bool, Exit> {
    match command {
        Command::Build {
            family,
            tree,
            dump_envelopes,
            dump_algorithm,
        } => cmd_build(&family, &tree, dump_envelopes, dump_algorithm),
        Command::Verify {
            family,
            tree,
            decomposition,
        } => cmd_verify(&family, &tree, &decomposition),
        Command::AuditOracle { family } => cmd_audit_oracle(&family),
        Command::GadgetFacts {
            horizon,
            rung,
            mutation,
            output,
        } => cmd_gadget_facts(horizon, rung, mutation, output.as_deref()),
        Command::Families => {
            for (name, about) in CATALOG {
                println!("{name:<18} {about}");
            }
            Ok(true)
        }
    }
}

fn load_family(args: &FamilyArgs) -> Result<Arc<dyn GraphFamily>, Exit> {
    if args.family == "finite" {
        let path = args
            .input
            .as_ref()
            .ok_or_else(|| config("the finite family needs --input"))?;
        return Ok(Arc::new(FiniteGraph::from_path(path)?));
    }
    if args.input.is_some() {
        return Err(config("--input is only used with --family finite"));
    }
    Ok(by_name(&args.family, args.k)?)
}

fn window(args: &FamilyArgs, levels: u32) -> Result<Truncation, Exit> {
    let family = load_family(args)?;
    let horizon = match args.horizon {
        Some(h) => h,
        None if args.family == "finite" => {
            let probe = expand(family.clone(), u32::MAX)?;
            let deepest = (0..probe.len()).map(|v| probe.depth(v)).max().unwrap_or(0);
            (deepest + 1).max(levels) + MARGIN
        }
        None => 20.max(levels + MARGIN),
    };
    if horizon < levels {
        return Err(config(format!("horizon {horizon} is below levels {levels}")));
    }
    Ok(expand(family, horizon)?)
}

fn gdelta(t: &Truncation, psi: &str) -> Result<GDeltaSpec, Exit> {
    let rule = match psi {
        "undominated" => PsiRule::Undominated,
        "all" => PsiRule::All,
        other => match other.strip_prefix("subset:") {
            Some(list) => {
                let ids: Vec<String> = list
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect();
                for id in &ids {
                    if t.oracle().end(id, t.horizon()).is_none() {
                        return Err(Exit::from(Error::UnknownEnd(id.clone())));
                    }
                }
                PsiRule::Subset(ids)
            }
            None => return Err(config(format!("unknown --psi value `{other}`"))),
        },
    };
    Ok(GDeltaSpec::new(t.family().clone(), rule))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Exit> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| config(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn summary(report: &endlink::decomposition::VerificationReport) {
    for p in report.properties() {
        eprintln!("{:<16} {}", p.name, if p.pass { "pass" } else { "FAIL" });
    }
    eprintln!(
        "{:<16} {}",
        "displays_psi",
        if report.displays_psi() { "pass" } else { "FAIL" }
    );
}

fn cmd_build(family: &FamilyArgs, tree: &TreeArgs, envelopes: bool, algorithm: bool) -> Result<bool, Exit> {
    let t = window(family, tree.levels)?;
    let spec = gdelta(&t, &tree.psi)?;
    let built = build(&t, &spec, tree.levels)?;
    let construction = construction_checks(&t, &built);
    let td = contract_to_linked(&t, &built)?;
    let report = verify(&t, &spec, &td, tree.pair_budget)?;
    summary(&report);
    let ok = report.passed()
        && report.displays_psi()
        && report.separator_lemma.pass
        && construction.passed();
    match tree.format {
        Format::Json => {
            let out = json!({
                "schema": 1,
                "built": to_json(&t, &built, envelopes, algorithm),
                "decomposition": to_json(&t, &td, false, false),
                "verification": report_json(&report, Some(&construction)),
            });
            emit(tree.output.as_deref(), &pretty(&out))?;
        }
        Format::Dot => emit(tree.output.as_deref(), &to_dot(&t, &td))?,
    }
    Ok(ok)
}

/// Reads `nodes[].parent` and `nodes[].bag` from a decomposition document,
/// either bare or nested under `decomposition`.
fn read_decomposition(t: &Truncation, path: &Path) -> Result<TreeDecomposition, Exit> {
    let text = fs::read_to_string(path).map_err(|e| config(format!("{}: {e}", path.display())))?;
    let doc: Value = serde_json::from_str(&text).map_err(Error::from)?;
    let doc = doc.get("decomposition").unwrap_or(&doc);
    let nodes = doc
        .get("nodes")
        .and_then(Value::as_array)
        .ok_or_else(|| config("decomposition has no `nodes` array"))?;
    let mut parents = Vec::new();
    let mut bags = Vec::new();
    for (i, n) in nodes.iter().enumerate() {
        let parent = n.get("parent").and_then(Value::as_u64).map(|p| p as usize);
        if parent.is_some_and(|p| p >= i) || (parent.is_none() && i > 0) {
            return Err(config(format!("node {i}: parents must precede children and only node 0 is a root")));
        }
        let labels: Vec<String> = n
            .get("bag")
            .and_then(Value::as_array)
            .ok_or_else(|| config(format!("node {i} has no bag")))?
            .iter()
            .map(|l| match l {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            })
            .collect();
        parents.push(parent);
        bags.push(t.set_of_labels(&labels)?);
    }
    if bags.is_empty() {
        return Err(config("decomposition has no nodes"));
    }
    let mut td = TreeDecomposition::from_bags(&parents, bags);
    td.attach_remainder(t);
    Ok(td)
}

fn cmd_verify(family: &FamilyArgs, tree: &TreeArgs, path: &Path) -> Result<bool, Exit> {
    let t = window(family, tree.levels)?;
    let spec = gdelta(&t, &tree.psi)?;
    let td = read_decomposition(&t, path)?;
    let report = verify(&t, &spec, &td, tree.pair_budget)?;
    summary(&report);
    match tree.format {
        Format::Json => emit(tree.output.as_deref(), &pretty(&report_json(&report, None)))?,
        Format::Dot => emit(tree.output.as_deref(), &to_dot(&t, &td))?,
    }
    Ok(report.passed())
}

fn cmd_audit_oracle(family: &FamilyArgs) -> Result<bool, Exit> {
    let t = window(family, 0)?;
    let whole = Host::whole(&t);
    let oracle = t.oracle();
    let ends = oracle.ends(t.horizon());
    let mut rows = Vec::new();
    let mut ok = true;
    for e in &ends {
        let prefix = e.ray_prefix(&t);
        let is_path = prefix.windows(2).all(|w| t.has_edge(w[0], w[1]))
            && prefix.iter().collect::<std::collections::BTreeSet<_>>().len() == prefix.len();
        let escapes = prefix.last().is_some_and(|&v| t.is_frontier(v));
        let dominators_present = e.dominators.iter().all(|d| t.index_of(d).is_some());
        let resolvable = endlink::ends::resolvable(e, t.horizon());
        let pass = is_path && escapes && dominators_present;
        ok &= pass;
        rows.push(json!({
            "end": e.id,
            "degree": e.degree,
            "dominators": e.dominators.iter().map(|d| t.family().label(d)).collect::<Vec<_>>(),
            "anchor_depth": e.anchor_depth,
            "resolvable": resolvable,
            "ray_is_path": is_path,
            "ray_reaches_frontier": escapes,
            "dominators_present": dominators_present,
        }));
    }
    let resolvable: Vec<_> = ends
        .iter()
        .filter(|e| endlink::ends::resolvable(e, t.horizon()))
        .collect();
    let mut merged = Vec::new();
    for i in 0..resolvable.len() {
        for j in i + 1..resolvable.len() {
            let (a, b) = (resolvable[i], resolvable[j]);
            let d = a.anchor_depth.max(b.anchor_depth) + 1;
            let ca: Option<VSet> = deep_component(&whole, a, d);
            let cb: Option<VSet> = deep_component(&whole, b, d);
            if ca.is_some() && ca == cb {
                merged.push(json!([a.id, b.id]));
            }
        }
    }
    ok &= merged.is_empty();
    let stab_monotone = (1..=8u32).all(|k| (0..=8u32).all(|d| oracle.stabilization_depth(k, d) >= d));
    ok &= stab_monotone;
    let out = json!({
        "schema": 1,
        "family": t.family().name(),
        "horizon": t.horizon(),
        "vertices": t.len(),
        "edges": t.edge_count(),
        "sampled": oracle.sampled(),
        "ends": rows,
        "unseparated_pairs": merged,
        "certificate_dominates_depth": stab_monotone,
        "passed": ok,
    });
    emit(None, &pretty(&out))?;
    Ok(ok)
}

fn cmd_gadget_facts(horizon: u32, rung: u32, mutation: Mutation, output: Option<&Path>) -> Result<bool, Exit> {
    let family: Arc<dyn GraphFamily> = match mutation {
        Mutation::None => Arc::new(AppendixGadget::new()),
        Mutation::RemoveX3S1 => Arc::new(without_x3_s1(rung)),
        Mutation::Y1Shortcut => Arc::new(with_y1_shortcut(rung)),
    };
    let facts = gadget_facts(family, horizon, rung)?;
    for f in &facts.facts {
        eprintln!("{} {}", if f.pass { "pass" } else { "FAIL" }, f.name);
    }
    let mut out = serde_json::to_value(&facts).expect("serializable");
    out["schema"] = json!(1);
    out["passed"] = json!(facts.passed());
    emit(output, &pretty(&out))?;
    Ok(facts.passed())
}
