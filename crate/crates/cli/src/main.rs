use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use relgnc::catalog::{build_group_with_limit, GroupSpec, PROBE_ORDER_LIMIT};
use relgnc::formulas::{
    degree_formula, edge_count_abelian_h, edge_count_formula, edge_count_normal_g1, edge_count_p_case,
    class_count_edge_identity,
};
use relgnc::harness::{audit_instance, run_sweep, write_report};
use relgnc::isoclinism::{find_relative_isoclinism, isoclinism_graph_iso, IsoclinismError};
use relgnc::{all_subgroups, ElementId, FiniteGroup, RelGraph, Subgroup, SubgroupFacts, SweepConfig};

/// Shadows `std::println!`: a closed pipe (`relgnc ... | head`) ends the
/// process quietly instead of panicking.
macro_rules! println {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        if let Err(e) = writeln!(std::io::stdout(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            panic!("cannot write to stdout: {e}");
        }
    }};
}

/// Relative g-noncommuting graphs of finite groups.
#[derive(Parser)]
#[command(name = "relgnc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order, center, conjugacy classes and subgroup count of a group.
    Info {
        #[arg(long)]
        group: String,
    },
    /// Degrees, edge counts, shape and bound audit for one (G, H, g).
    Probe {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Export the graph of one (G, H, g) as DOT and optionally JSON.
    Build {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        dot: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Sweep the catalog and cross-check every formula against the graphs.
    Verify {
        #[arg(long, default_value_t = 16)]
        max_order: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Comma-separated group specs; defaults to the catalog.
        #[arg(long, value_delimiter = ',')]
        families: Option<Vec<String>>,
        /// Skip subgroups contained in the center of G.
        #[arg(long)]
        skip_central: bool,
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Search for a relative isoclinism and transport a graph along it.
    Isoclinism {
        /// `<spec>:<gens>`; without `:` the subgroup is the whole group.
        #[arg(long)]
        pair1: String,
        #[arg(long)]
        pair2: String,
        /// Element of the first relative commutator subgroup.
        #[arg(long)]
        g: Option<String>,
    },
}

#[derive(clap::Args)]
struct InstanceArgs {
    #[arg(long)]
    group: String,
    /// Comma-separated generators, or `all` for the whole group.
    #[arg(long)]
    subgroup: String,
    /// Element label, or `#<id>`.
    #[arg(long)]
    g: String,
}

/// Bad input exits 2, failed checks exit 1.
enum Failure {
    Usage(anyhow::Error),
    Check(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Check(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn load_group(spec: &str) -> Result<FiniteGroup> {
    let parsed: GroupSpec = spec.parse()?;
    Ok(build_group_with_limit(&parsed, PROBE_ORDER_LIMIT)?)
}

/// Labels win over ids; `#<id>` forces an id.
fn parse_element(group: &FiniteGroup, text: &str) -> Result<ElementId> {
    let text = text.trim();
    if let Some(id) = group.find_label(text) {
        return Ok(id);
    }
    let digits = text.strip_prefix('#').unwrap_or(text);
    match digits.parse::<usize>() {
        Ok(id) if id < group.order() => Ok(ElementId(id)),
        _ => bail!("{text:?} is neither a label nor an id of this group"),
    }
}

fn parse_subgroup<'g>(group: &'g FiniteGroup, text: &str) -> Result<Subgroup<'g>> {
    if text.trim() == "all" {
        return Ok(group.whole());
    }
    let gens = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_element(group, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(group.generated_subgroup(&gens))
}

fn set_labels(group: &FiniteGroup, set: relgnc::ElementSet) -> String {
    let labels: Vec<&str> = set.iter().map(|x| group.label(x)).collect();
    format!("{{{}}}", labels.join(", "))
}

fn yes(b: bool) -> &'static str {
    if b { "yes" } else { "no" }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Info { group } => info(&group),
        Command::Probe { instance } => probe(&instance),
        Command::Build { instance, dot, json } => build(&instance, &dot, json.as_deref()),
        Command::Verify { max_order, jobs, families, skip_central, report, csv } => {
            let families = families
                .map(|list| list.iter().map(|s| s.parse::<GroupSpec>()).collect::<Result<Vec<_>, _>>())
                .transpose()
                .map_err(anyhow::Error::from)?;
            let config = SweepConfig { max_order, families, include_g_not_in_k: !skip_central, jobs };
            verify(&config, &report, csv.as_deref())
        }
        Command::Isoclinism { pair1, pair2, g } => isoclinism(&pair1, &pair2, g.as_deref()),
    }
}

fn info(spec: &str) -> Result<(), Failure> {
    let group = load_group(spec)?;
    let classes = group.classes();
    let sizes: Vec<String> = classes.iter().map(|c| c.len().to_string()).collect();
    println!("group {spec}");
    println!("order {}", group.order());
    println!("abelian {}", yes(group.is_abelian()));
    println!("nilpotent {}", yes(group.is_nilpotent()));
    println!("center size {} {}", group.center().len(), set_labels(&group, group.center()));
    println!("classes {} (sizes {})", classes.len(), sizes.join(" "));
    println!("subgroups {}", all_subgroups(&group).len());
    Ok(())
}

fn probe(args: &InstanceArgs) -> Result<(), Failure> {
    let group = load_group(&args.group)?;
    let h = parse_subgroup(&group, &args.subgroup)?;
    let g = parse_element(&group, &args.g)?;
    let facts = SubgroupFacts::new(&h);
    let graph = RelGraph::build(&h, g);
    let audit = audit_instance(&args.group, &facts, g);
    let record = &audit.record;

    println!("group {} (order {})", args.group, group.order());
    println!("H = {} (order {})", set_labels(&group, h.members()), h.order());
    println!("g = {}, g in K(H,G): {}", group.label(g), yes(record.g_in_k));
    println!(
        "|Z(H,G)| = {}, |Z(G,H)| = {}, |Z(H)| = {}, |[H,G]| = {}",
        facts.relative_center.len(),
        facts.cocentralizer.len(),
        facts.center.len(),
        facts.commutator_subgroup.len()
    );
    println!();
    println!("{:<14} {:>4} {:>7} {:>8}  case", "vertex", "in H", "oracle", "formula");
    for x in group.elements() {
        let p = degree_formula(&facts, g, x);
        println!(
            "{:<14} {:>4} {:>7} {:>8}  {:?}",
            group.label(x),
            yes(h.contains(x)),
            graph.degree(x),
            p.value,
            p.case
        );
    }
    println!();
    let edges = record.edges_oracle;
    println!("edges (oracle) {edges}");
    let general = edge_count_formula(&facts, g);
    println!("  {} [{:?}] = {}", general.formula_id, general.case, general.value);
    if let Ok(p) = edge_count_abelian_h(&facts, g) {
        println!("  {} = {}", p.formula_id, p.value);
    }
    if let Ok(p) = edge_count_p_case(&facts, g) {
        println!("  {} = {}", p.formula_id, p.value);
    }
    if g == group.identity() {
        if let Ok(p) = edge_count_normal_g1(&facts) {
            println!(
                "  normal_subgroup_class_edge_count: H-classes {}, G-classes {}, mixed {} (classes coincide: {})",
                p.h_class_reading,
                p.g_class_reading,
                p.mixed_reading,
                yes(p.classes_coincide)
            );
        }
        if let Ok(p) = class_count_edge_identity(&facts) {
            println!("  {} = {}", p.formula_id, p.value);
        }
    }
    println!();
    let shape = match record.shape {
        relgnc::ShapeClass::Star { center } => format!("Star (center {})", group.label(ElementId(center))),
        other => format!("{other:?}"),
    };
    println!("shape {shape}");
    println!("triangle-free {}", yes(record.triangle_free));
    match record.domination {
        Some(d) => println!("domination number {d}"),
        None => println!("domination number skipped (more than {} vertices)", relgnc::graph::SEARCH_LIMIT),
    }
    if !record.bound_audits.is_empty() {
        println!();
        println!("bounds");
        for b in &record.bound_audits {
            let rel = match b.relation {
                relgnc::formulas::Relation::AtLeast => ">=",
                relgnc::formulas::Relation::AtMost => "<=",
            };
            println!("  {:<40} {} {rel} {:<8} {:?}", b.bound_id, b.lhs, b.rhs, b.status());
        }
        println!("primitives");
        for p in &audit.primitives {
            let state = if !p.applicable {
                "out of range"
            } else if p.inequality_holds {
                "holds"
            } else {
                "fails"
            };
            println!("  {:<28} {} vs {}  {state}", p.id, p.lhs, p.rhs);
        }
    }
    if audit.violations.is_empty() {
        println!();
        println!("all checks pass");
        Ok(())
    } else {
        for v in &audit.violations {
            println!("violation: {v}");
        }
        Err(Failure::Check(anyhow!("{} violations", audit.violations.len())))
    }
}

fn build(args: &InstanceArgs, dot: &std::path::Path, json_path: Option<&std::path::Path>) -> Result<(), Failure> {
    let group = load_group(&args.group)?;
    let h = parse_subgroup(&group, &args.subgroup)?;
    let g = parse_element(&group, &args.g)?;
    let graph = RelGraph::build(&h, g);
    graph.export_dot(dot).map_err(|e| Failure::Check(e.into()))?;
    if let Some(path) = json_path {
        let vertices: Vec<_> = group
            .elements()
            .map(|x| json!({"id": x.index(), "label": group.label(x), "in_h": h.contains(x), "degree": graph.degree(x)}))
            .collect();
        let doc = json!({
            "group": args.group,
            "subgroup_members": h.members().to_vec(),
            "g": group.label(g),
            "edge_count": graph.edge_count(),
            "shape": graph.classify_shape(),
            "vertices": vertices,
            "edges": graph.as_graph().edges(),
        });
        let text = serde_json::to_string_pretty(&doc).map_err(anyhow::Error::from)? + "\n";
        std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(Failure::Check)?;
    }
    println!("{} vertices, {} edges, {}", group.order(), graph.edge_count(), graph.classify_shape().name());
    Ok(())
}

fn verify(config: &SweepConfig, json: &std::path::Path, csv: Option<&std::path::Path>) -> Result<(), Failure> {
    let report = run_sweep(config).map_err(anyhow::Error::from)?;
    write_report(&report.records, json, csv).map_err(|e| Failure::Check(e.into()))?;
    println!("records {}", report.records.len());
    println!("coverage");
    for (key, count) in report.coverage.iter().filter(|(k, _)| !k.starts_with("bound.")) {
        println!("  {key} {count}");
    }
    println!("primitive census (evaluated / in range / raw violations / in-range violations)");
    for (id, c) in &report.primitive_census {
        println!("  {id} {} {} {} {}", c.evaluated, c.applicable, c.raw_violations, c.applicable_violations);
    }
    println!("tree instances {}", report.tree_instances.len());
    for key in &report.tree_instances {
        println!("  {key}");
    }
    println!("violations {}", report.violations.len());
    for v in report.violations.iter().take(50) {
        println!("  {}: {}", v.instance, v.message);
    }
    if report.is_clean() {
        Ok(())
    } else {
        Err(Failure::Check(anyhow!("{} violations", report.violations.len())))
    }
}

fn split_pair(text: &str) -> (&str, Option<&str>) {
    match text.rsplit_once(':') {
        Some((spec, gens)) => (spec, Some(gens)),
        None => (text, None),
    }
}

fn isoclinism(pair1: &str, pair2: &str, g: Option<&str>) -> Result<(), Failure> {
    let (spec1, gens1) = split_pair(pair1);
    let (spec2, gens2) = split_pair(pair2);
    let g1 = load_group(spec1)?;
    let g2 = load_group(spec2)?;
    let h1 = parse_subgroup(&g1, gens1.unwrap_or("all"))?;
    let h2 = parse_subgroup(&g2, gens2.unwrap_or("all"))?;
    let witness = find_relative_isoclinism(&h1, &h2).map_err(anyhow::Error::from)?;
    let Some(witness) = witness else {
        println!("no relative isoclinism between {pair1} and {pair2}");
        return Ok(());
    };
    println!("relative isoclinism found");
    println!("phi (coset representatives)");
    for (a, b) in &witness.phi {
        println!("  {} -> {}", g1.label(*a), g2.label(*b));
    }
    println!("psi");
    for (a, b) in &witness.psi {
        println!("  {} -> {}", g1.label(*a), g2.label(*b));
    }
    let t1: Vec<&str> = witness.transversal1.iter().map(|&t| g1.label(t)).collect();
    let t2: Vec<&str> = witness.transversal2.iter().map(|&t| g2.label(t)).collect();
    println!("transversal1 {}", t1.join(" "));
    println!("transversal2 {}", t2.join(" "));
    if let Some(label) = g {
        let g = parse_element(&g1, label)?;
        let iso = isoclinism_graph_iso(&witness, g).map_err(|e| match e {
            IsoclinismError::VerificationFailed(_) => Failure::Check(e.into()),
            other => Failure::Usage(other.into()),
        })?;
        println!("graph isomorphism for g = {} onto g = {} (verified)", g1.label(g), g2.label(iso.target_g));
        for x in g1.elements() {
            println!("  {} -> {}", g1.label(x), g2.label(iso.map[x.index()]));
        }
    }
    Ok(())
}
