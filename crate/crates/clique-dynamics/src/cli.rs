//! Batch front end: every capability behind a subcommand with JSON/CSV
//! artifacts. Outputs are deterministic given the same config and seed.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::cliques::{iterate_clique_graph, DEFAULT_VERTEX_BUDGET};
use crate::covers::{develop_universal_cover, quotient_graph, reduce_walk, GroupAction};
use crate::graph::{Graph, GraphJson, VertexId, Walk};
use crate::hexgeo::{cone_lattice, hex_window, torus_graph, TorusSpec, WindowSpec};
use crate::iso::{explicit_c_map, quotient_geo_clique_graph, verify_c, verify_structure};
use crate::trishapes::{deg26_census, geo_clique_graph, invariant_d};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("{0}: {1}")]
    Json(PathBuf, serde_json::Error),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
    #[error(transparent)]
    Hex(#[from] crate::hexgeo::HexError),
    #[error(transparent)]
    Cover(#[from] crate::covers::CoverError),
    #[error(transparent)]
    Iso(#[from] crate::iso::IsoError),
    #[error(transparent)]
    Structure(#[from] crate::iso::StructureError),
    #[error("{0}")]
    Invalid(String),
}

/// Reproducible experiment runner for clique dynamics on locally cyclic
/// graphs.
#[derive(Debug, Parser)]
#[command(name = "clique-dynamics", version, about)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a host graph (torus, window, or cone lattice) as JSON.
    Generate(GenerateArgs),
    /// Iterate the clique operator and report growth per level as CSV.
    Iterate(IterateArgs),
    /// Build the geometric clique graph of a host and report its structure.
    Geoclique(GeocliqueArgs),
    /// Partition classifiable shapes by whether their degree equals 26.
    Census(CensusArgs),
    /// Distances from probe shapes to the not-26 set.
    #[command(name = "invariant-D")]
    InvariantD(InvariantArgs),
    /// Develop a ball of the universal triangular cover.
    Cover(CoverArgs),
    /// Quotient a host by an automorphism action.
    Quotient(QuotientArgs),
    /// Contract a closed walk by elementary moves.
    Reduce(ReduceArgs),
    /// Compare clique iteration against the shape-quotient route on a torus.
    #[command(name = "verify-structure")]
    VerifyStructure(VerifyStructureArgs),
    /// Build and check the explicit level-to-clique map.
    #[command(name = "verify-C")]
    VerifyC(VerifyCArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub kind: GenerateKind,
}

#[derive(Debug, Subcommand)]
pub enum GenerateKind {
    /// 6-regular torus from two axial basis vectors.
    Torus {
        /// Basis as four integers: a1 a2 b1 b2.
        #[arg(long, num_args = 4, allow_negative_numbers = true)]
        basis: Vec<i32>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Hexagonal lattice ball.
    Window {
        #[arg(long, num_args = 3, default_values_t = [0, 0, 0], allow_negative_numbers = true)]
        center: Vec<i32>,
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        output: PathBuf,
    },
    /// Cone lattice with one apex of the given degree.
    Cone {
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct IterateArgs {
    #[arg(long)]
    pub host: PathBuf,
    /// Number of clique-operator applications.
    #[arg(long, short = 'n')]
    pub levels: u32,
    #[arg(long, default_value_t = DEFAULT_VERTEX_BUDGET)]
    pub vertex_budget: usize,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct GeocliqueArgs {
    #[arg(long)]
    pub host: PathBuf,
    #[arg(long)]
    pub level: u32,
    #[arg(long, default_value_t = 10)]
    pub margin: u32,
    #[arg(long)]
    pub report: PathBuf,
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    #[arg(long)]
    pub host: PathBuf,
    #[arg(long)]
    pub level: u32,
    #[arg(long, default_value_t = 10)]
    pub margin: u32,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct InvariantArgs {
    #[arg(long)]
    pub host: PathBuf,
    #[arg(long)]
    pub level: u32,
    /// Probe selection: `central`, `all`, or `sample:<count>`.
    #[arg(long, default_value = "central")]
    pub probes: String,
    #[arg(long, default_value_t = 10)]
    pub margin: u32,
    /// Seed for sampled probes.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct CoverArgs {
    #[arg(long)]
    pub host: PathBuf,
    #[arg(long)]
    pub radius: u32,
    #[arg(long, default_value_t = 0)]
    pub base: u32,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct QuotientArgs {
    #[arg(long)]
    pub host: PathBuf,
    /// JSON file `{"generators": [[...], ...]}` of vertex permutations.
    #[arg(long)]
    pub action: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[arg(long)]
    pub host: PathBuf,
    /// JSON file `{"vertices": [...]}` holding a closed walk.
    #[arg(long)]
    pub walk: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    pub budget: usize,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyStructureArgs {
    /// JSON file `{"basis": [[a1,a2],[b1,b2]]}`.
    #[arg(long)]
    pub torus: PathBuf,
    #[arg(long)]
    pub level: u32,
    /// Where to write the witness bijection on success.
    #[arg(long)]
    pub witness: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyCArgs {
    /// Torus spec JSON; the check runs on its quotient level graphs.
    #[arg(long)]
    pub torus: PathBuf,
    /// Upper level `n` of the map from level `n` to the cliques of `n - 1`.
    #[arg(long)]
    pub level: u32,
    #[arg(long)]
    pub output: PathBuf,
}

pub fn main() {
    let config = RunConfig::parse();
    init_threads();
    match run(&config) {
        Ok(status) => std::process::exit(status),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(1);
        }
    }
}

fn init_threads() {
    if let Ok(value) = std::env::var("CLIQUE_DYN_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Json(path.to_path_buf(), e))
}

fn read_graph(path: &Path) -> Result<Graph, CliError> {
    let json: GraphJson = read_json(path)?;
    Ok(json.into_graph()?)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Json(path.to_path_buf(), e))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Runs one command; the `Ok` value is the process exit status.
pub fn run(config: &RunConfig) -> Result<i32, CliError> {
    match &config.command {
        Command::Generate(args) => generate(args),
        Command::Iterate(args) => iterate(args),
        Command::Geoclique(args) => geoclique(args),
        Command::Census(args) => census(args),
        Command::InvariantD(args) => invariant(args),
        Command::Cover(args) => cover(args),
        Command::Quotient(args) => quotient(args),
        Command::Reduce(args) => reduce(args),
        Command::VerifyStructure(args) => verify_structure_cmd(args),
        Command::VerifyC(args) => verify_c_cmd(args),
    }
}

fn generate(args: &GenerateArgs) -> Result<i32, CliError> {
    match &args.kind {
        GenerateKind::Torus { basis, output } => {
            let spec = TorusSpec { basis: [[basis[0], basis[1]], [basis[2], basis[3]]] };
            let torus = torus_graph(&spec)?;
            write_json(output, &torus.graph.to_json())?;
            println!("torus: {} vertices, {} edges", torus.graph.vertex_count(), torus.graph.edge_count());
        }
        GenerateKind::Window { center, radius, output } => {
            let spec = WindowSpec { center: [center[0], center[1], center[2]], radius: *radius };
            let window = hex_window(&spec);
            write_json(output, &window.graph.to_json())?;
            println!("window: {} vertices", window.graph.vertex_count());
        }
        GenerateKind::Cone { degree, radius, output } => {
            let cone = cone_lattice(*degree, *radius)?;
            write_json(output, &cone.graph.to_json())?;
            println!("cone: {} vertices, apex degree {degree}", cone.graph.vertex_count());
        }
    }
    Ok(0)
}

fn iterate(args: &IterateArgs) -> Result<i32, CliError> {
    let host = read_graph(&args.host)?;
    let it = iterate_clique_graph(&host, args.levels, args.vertex_budget);
    let mut csv = String::from("# clique-dynamics iterate csv v1\n");
    csv.push_str("level,n_vertices,n_edges,max_degree,budget_hit\n");
    let row = |g: &Graph, level: usize, hit: bool| {
        let max_degree = g.vertices().map(|v| g.degree(v)).max().unwrap_or(0);
        format!("{level},{},{},{max_degree},{hit}\n", g.vertex_count(), g.edge_count())
    };
    csv.push_str(&row(&host, 0, false));
    for (i, level) in it.levels.iter().enumerate() {
        csv.push_str(&row(&level.graph, i + 1, false));
    }
    if it.budget_hit {
        csv.push_str(&format!("{},,,,true\n", it.levels.len() + 1));
    }
    write_text(&args.output, &csv)?;
    print!("{csv}");
    Ok(0)
}

fn geoclique(args: &GeocliqueArgs) -> Result<i32, CliError> {
    let host = read_graph(&args.host)?;
    let gcg = geo_clique_graph(&host, args.level);
    let census = deg26_census(&gcg, args.margin);
    let mut degree_histogram: std::collections::BTreeMap<usize, usize> = Default::default();
    for v in gcg.graph.vertices() {
        *degree_histogram.entry(gcg.graph.degree(v)).or_insert(0) += 1;
    }
    // type profile over classified shapes, keyed by side
    let mut profiles: std::collections::BTreeMap<u32, std::collections::BTreeMap<i32, usize>> =
        Default::default();
    for &s in census.deg26.iter().chain(&census.not26) {
        let side = gcg.catalogue.side(s);
        let entry = profiles.entry(side).or_default();
        for (t, c) in gcg.neighbour_type_profile(s) {
            *entry.entry(t).or_insert(0) += c;
        }
    }
    let report = json!({
        "config": {
            "command": "geoclique",
            "host": args.host.display().to_string(),
            "level": args.level,
            "margin": args.margin,
        },
        "host_locally_cyclic": gcg.host_report.ok,
        "host_min_degree": gcg.host_report.min_degree,
        "delta_warning": !(gcg.host_report.ok && gcg.host_report.min_degree >= 6),
        "shapes_per_side": gcg.catalogue.side_histogram(),
        "n_vertices": gcg.graph.vertex_count(),
        "n_edges": gcg.graph.edge_count(),
        "degree_histogram": degree_histogram,
        "census": {
            "margin": census.margin,
            "deg26": census.deg26.len(),
            "not26": census.not26.len(),
            "excluded": census.excluded.len(),
            "by_side": census.by_side,
        },
        "type_profile_totals": profiles,
    });
    write_json(&args.report, &report)?;
    println!(
        "geoclique level {}: {} shapes, {} edges ({} classified at degree 26)",
        args.level,
        gcg.graph.vertex_count(),
        gcg.graph.edge_count(),
        census.deg26.len()
    );
    Ok(0)
}

fn census(args: &CensusArgs) -> Result<i32, CliError> {
    let host = read_graph(&args.host)?;
    let gcg = geo_clique_graph(&host, args.level);
    let census = deg26_census(&gcg, args.margin);
    let report = json!({
        "config": {
            "command": "census",
            "host": args.host.display().to_string(),
            "level": args.level,
            "margin": args.margin,
        },
        "deg26": census.deg26,
        "not26": census.not26,
        "excluded": census.excluded.len(),
        "by_side": census.by_side,
    });
    write_json(&args.output, &report)?;
    println!(
        "census level {}: {} at degree 26, {} not, {} excluded",
        args.level,
        census.deg26.len(),
        census.not26.len(),
        census.excluded.len()
    );
    Ok(0)
}

fn invariant(args: &InvariantArgs) -> Result<i32, CliError> {
    let host = read_graph(&args.host)?;
    let gcg = geo_clique_graph(&host, args.level);
    let census = deg26_census(&gcg, args.margin);
    let classifiable = gcg.classifiable(args.margin);
    let probes: Vec<u32> = if args.probes == "all" {
        classifiable
    } else if args.probes == "central" {
        // the classifiable shapes deepest inside the window
        let best = classifiable
            .iter()
            .map(|&s| gcg.shape_rim_distance(s))
            .max()
            .unwrap_or(0);
        classifiable
            .into_iter()
            .filter(|&s| gcg.shape_rim_distance(s) == best)
            .collect()
    } else if let Some(count) = args.probes.strip_prefix("sample:") {
        let count: usize = count
            .parse()
            .map_err(|_| CliError::Invalid(format!("bad probe spec {:?}", args.probes)))?;
        let mut state = args.seed;
        let mut picked = Vec::new();
        let pool = classifiable;
        for _ in 0..count.min(pool.len()) {
            let i = (splitmix(&mut state) % pool.len() as u64) as usize;
            picked.push(pool[i]);
        }
        picked.sort_unstable();
        picked.dedup();
        picked
    } else {
        return Err(CliError::Invalid(format!("bad probe spec {:?}", args.probes)));
    };
    let inv = invariant_d(&gcg, &census, &probes);
    let mut csv = String::from("# clique-dynamics invariant-D csv v1\n");
    csv.push_str("probe,side,rim_distance,distance_to_not26\n");
    for &(p, d) in &inv.per_probe {
        let rendered = d.map(|d| d.to_string()).unwrap_or_else(|| "inf".to_string());
        csv.push_str(&format!(
            "{p},{},{},{rendered}\n",
            gcg.catalogue.side(p),
            gcg.shape_rim_distance(p)
        ));
    }
    write_text(&args.output, &csv)?;
    match inv.max {
        Some(max) => println!("invariant D over {} probes: max distance {max}", inv.per_probe.len()),
        None => println!(
            "invariant D over {} probes: no classified not-26 shapes{}",
            inv.per_probe.len(),
            if inv.no_targets { " (flagged)" } else { "" }
        ),
    }
    Ok(0)
}

fn cover(args: &CoverArgs) -> Result<i32, CliError> {
    let host = read_graph(&args.host)?;
    let dev = develop_universal_cover(&host, args.radius, VertexId(args.base))?;
    let p = dev.cover_map(&host);
    let report = p.validate(Some(&dev.interior()));
    let json_graph = dev.cover.to_json();
    let out = json!({
        "config": {
            "command": "cover",
            "host": args.host.display().to_string(),
            "radius": args.radius,
            "base": args.base,
        },
        "cover": json_graph,
        "projection": dev.projection,
        "interior_vertices": dev.interior().len(),
        "local_isomorphism_on_interior": report.ok,
    });
    write_json(&args.output, &out)?;
    println!(
        "cover ball: {} vertices over {} (interior check: {})",
        dev.cover.vertex_count(),
        host.vertex_count(),
        if report.ok { "ok" } else { "FAILED" }
    );
    Ok(0)
}

#[derive(Debug, serde::Deserialize)]
struct ActionJson {
    generators: Vec<Vec<u32>>,
}

fn quotient(args: &QuotientArgs) -> Result<i32, CliError> {
    let host = read_graph(&args.host)?;
    let action: ActionJson = read_json(&args.action)?;
    let generators: Vec<Vec<VertexId>> = action
        .generators
        .into_iter()
        .map(|perm| perm.into_iter().map(VertexId).collect())
        .collect();
    let action = GroupAction::new(&host, generators)?;
    let q = quotient_graph(&host, &action);
    let out = json!({
        "config": {
            "command": "quotient",
            "host": args.host.display().to_string(),
            "action": args.action.display().to_string(),
        },
        "quotient": q.quotient.to_json(),
        "projection": q.projection,
        "loops_dropped": q.loops_dropped,
        "parallel_collapsed": q.parallel_collapsed,
    });
    write_json(&args.output, &out)?;
    println!("quotient: {} orbits", q.quotient.vertex_count());
    Ok(0)
}

#[derive(Debug, serde::Deserialize)]
struct WalkJson {
    vertices: Vec<u32>,
}

fn reduce(args: &ReduceArgs) -> Result<i32, CliError> {
    let host = read_graph(&args.host)?;
    let walk: WalkJson = read_json(&args.walk)?;
    let walk = Walk::new(&host, walk.vertices.into_iter().map(VertexId).collect())?;
    let result = reduce_walk(&host, &walk, args.budget)?;
    let out = json!({
        "config": {
            "command": "reduce",
            "host": args.host.display().to_string(),
            "walk": args.walk.display().to_string(),
            "budget": args.budget,
        },
        "trivial": result.trivial,
        "final_walk": result.final_walk.vertices,
        "moves": result.moves.len(),
        "expanded": result.expanded,
    });
    write_json(&args.output, &out)?;
    println!(
        "reduce: {} (|moves| = {}, expanded {})",
        if result.trivial { "trivial" } else { "not reduced within budget" },
        result.moves.len(),
        result.expanded
    );
    Ok(0)
}

fn verify_structure_cmd(args: &VerifyStructureArgs) -> Result<i32, CliError> {
    let spec: TorusSpec = read_json(&args.torus)?;
    let report = verify_structure(&spec, args.level)?;
    if let (Some(path), Some(witness)) = (&args.witness, &report.witness) {
        let out = json!({
            "config": { "command": "verify-structure", "level": args.level, "torus": spec },
            "bijection": witness.map,
        });
        write_json(path, &out)?;
    }
    println!(
        "verify-structure level {}: {} ({} vs {} vertices)",
        args.level,
        if report.pass { "PASS" } else { "FAIL" },
        report.clique_route_vertices,
        report.quotient_route_vertices
    );
    Ok(if report.pass { 0 } else { 2 })
}

fn verify_c_cmd(args: &VerifyCArgs) -> Result<i32, CliError> {
    if args.level == 0 {
        return Err(CliError::Invalid("level must be at least 1".into()));
    }
    let spec: TorusSpec = read_json(&args.torus)?;
    let torus = torus_graph(&spec)?;
    let upper = quotient_geo_clique_graph(&torus, args.level)?;
    let lower = quotient_geo_clique_graph(&torus, args.level - 1)?;
    let map = explicit_c_map(&upper, &lower, &torus.graph, 0);
    let kg_lower = crate::cliques::clique_graph(&lower.graph);
    let report = verify_c(&upper, &lower, &kg_lower, &map, &torus.graph);
    let out = json!({
        "config": { "command": "verify-C", "level": args.level, "torus": spec },
        "checked": report.checked,
        "images_are_maximal_cliques": report.images_are_maximal_cliques,
        "injective": report.injective,
        "adjacency_preserved": report.adjacency_preserved,
        "part_sizes_ok": report.part_sizes_ok,
        "failures": report.failures,
    });
    write_json(&args.output, &out)?;
    println!(
        "verify-C level {} -> cliques of level {}: {}",
        args.level,
        args.level - 1,
        if report.ok() { "PASS" } else { "FAIL" }
    );
    Ok(if report.ok() { 0 } else { 2 })
}
