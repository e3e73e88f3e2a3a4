use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use kgt::analysis::{simplicity_check, SimplicityBounds, SimplicityVerdict};
use kgt::chain::CocycleChain;
use kgt::cover::covering_from_quotient;
use kgt::degree::Degree;
use kgt::dot::{kgraph_dot, tower_dot};
use kgt::group::DEFAULT_MAX_GROUP;
use kgt::projlim::{enumerate_tuples, profinite_skew_bijection};
use kgt::skew::skew_product;
use kgt::specfile::{bd_spec, cycle_spec, twoloop_spec, BoundsSection, SpecFile};
use kgt::symbolic::{run_all_checks, SymbolicContext};
use kgt::tower::QuotientTower;
use kgt::{GraphConfig, KGraph, KgtError};

#[derive(Parser)]
#[command(name = "kgt", version, about = "Finite higher-rank graph toolkit")]
struct Cli {
    /// Print elapsed time to stderr.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the graph (and chain, when present) of a spec file.
    Validate { spec: String },
    /// Build the level-n skew product and emit it as a spec file.
    Skew {
        spec: String,
        #[arg(long)]
        level: usize,
        /// Write a DOT rendering to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Validate the covering from level n+1 onto level n.
    CoverCheck {
        spec: String,
        #[arg(long)]
        level: usize,
    },
    /// Stack the first N levels into a rank-(k+1) tower and validate it.
    Tower {
        spec: String,
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Run the simplicity test; exit 0 = simple, 1 = not simple,
    /// 2 = inconclusive.
    Simplicity {
        spec: String,
        #[arg(long)]
        levels: Option<usize>,
        /// Overrides both the periodicity degree bound and the segment
        /// window bound.
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Enumerate level-N compatible path tuples of a fixed degree.
    Projlim {
        spec: String,
        #[arg(long)]
        levels: Option<usize>,
        /// Single integer, or comma-separated coordinates for rank > 1.
        #[arg(long)]
        degree: String,
    },
    /// Verify the generator-level identities of the chain's label maps.
    Symbolic {
        spec: String,
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Emit a built-in example spec file.
    Example {
        #[arg(value_enum)]
        which: ExampleKind,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// Cycle length for the cycle example.
        #[arg(long, default_value_t = 4)]
        p: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleKind {
    Bd,
    Cycle,
    Twoloop,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let code = match run(&cli.command) {
        Ok(code) => code,
        Err(err) => {
            let kind = err.kind.clone();
            eprintln!(
                "{}",
                serde_json::to_string(&json!({"error": {"kind": kind, "message": err.message}}))
                    .expect("error serializes")
            );
            err.exit
        }
    };
    if cli.timing {
        eprintln!("elapsed_ms: {}", started.elapsed().as_millis());
    }
    ExitCode::from(code)
}

struct CliError {
    kind: String,
    message: String,
    exit: u8,
}

impl CliError {
    fn new(kind: &str, message: String, exit: u8) -> CliError {
        CliError {
            kind: kind.to_string(),
            message,
            exit,
        }
    }

    fn from_kgt(e: KgtError, exit: u8) -> CliError {
        let debug = format!("{e:?}");
        let kind = debug
            .split(['(', ' ', '{'])
            .next()
            .unwrap_or("Error")
            .to_string();
        CliError {
            kind,
            message: e.to_string(),
            exit,
        }
    }
}

fn read_spec(path: &str) -> Result<SpecFile, CliError> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::new("Io", e.to_string(), 1))?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::new("Io", format!("{path}: {e}"), 1))?
    };
    SpecFile::parse(&text).map_err(|e| CliError::new("Parse", e.to_string(), 1))
}

fn group_cap() -> usize {
    std::env::var("KGT_MAX_GROUP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_GROUP)
}

fn path_cap() -> u64 {
    std::env::var("KGT_MAX_PATHS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(1 << 20)
}

fn build_graph(spec: &SpecFile) -> Result<KGraph, CliError> {
    spec.build_graph(&GraphConfig::default())
        .map_err(|e| CliError::from_kgt(e, 1))
}

fn build_chain(spec: &SpecFile, graph: &KGraph) -> Result<Option<CocycleChain>, CliError> {
    spec.build_chain(graph, group_cap())
        .map_err(|e| CliError::from_kgt(e, 1))
}

fn require_chain(spec: &SpecFile, graph: &KGraph) -> Result<CocycleChain, CliError> {
    build_chain(spec, graph)?.ok_or_else(|| {
        CliError::new(
            "MissingChain",
            "spec file has no groups/cocycles sections".into(),
            1,
        )
    })
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("report serializes")
    );
}

fn parse_degree(text: &str, rank: usize) -> Result<Degree, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    let coords: Vec<u32> = parts
        .iter()
        .map(|p| p.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::new("Parse", format!("bad degree `{text}`: {e}"), 1))?;
    let coords = if coords.len() == 1 && rank > 1 {
        vec![coords[0]; rank]
    } else {
        coords
    };
    if coords.len() != rank {
        return Err(CliError::new(
            "Parse",
            format!(
                "degree `{text}` has {} coordinates for rank {rank}",
                coords.len()
            ),
            1,
        ));
    }
    Ok(Degree::new(coords))
}

fn run(command: &Command) -> Result<u8, CliError> {
    match command {
        Command::Validate { spec } => {
            let spec = read_spec(spec)?;
            let graph = build_graph(&spec)?;
            let chain = build_chain(&spec, &graph)?;
            let structure = graph.structural_checks();
            let edges_per_color: Vec<usize> = (1..=graph.rank())
                .map(|c| graph.edges_of_color(c).len())
                .collect();
            print_json(&json!({
                "graph": {
                    "k": graph.rank(),
                    "vertices": graph.num_vertices(),
                    "edges": graph.num_edges(),
                    "edges_per_color": edges_per_color,
                    "squares": graph.squares().count(),
                    "no_sources": structure.no_sources,
                    "connected": structure.connected,
                },
                "chain": chain.as_ref().map(|cc| json!({
                    "levels": cc.len(),
                    "group_orders": (1..=cc.len()).map(|n| cc.group(n).order()).collect::<Vec<_>>(),
                })),
            }));
            Ok(0)
        }
        Command::Skew { spec, level, dot } => {
            let spec = read_spec(spec)?;
            let graph = build_graph(&spec)?;
            let cc = require_chain(&spec, &graph)?;
            if *level < 1 || *level > cc.len() {
                return Err(CliError::from_kgt(
                    KgtError::LevelOutOfRange(*level, cc.len()),
                    1,
                ));
            }
            let sk =
                skew_product(&graph, cc.cocycle(*level)).map_err(|e| CliError::from_kgt(e, 1))?;
            if let Some(path) = dot {
                std::fs::write(path, kgraph_dot(&sk.graph))
                    .map_err(|e| CliError::new("Io", e.to_string(), 1))?;
            }
            print!("{}", SpecFile::from_parts(&sk.graph, None, None).to_json());
            Ok(0)
        }
        Command::CoverCheck { spec, level } => {
            let spec = read_spec(spec)?;
            let graph = build_graph(&spec)?;
            let cc = require_chain(&spec, &graph)?;
            let (above, below, map) =
                covering_from_quotient(&cc, *level).map_err(|e| CliError::from_kgt(e, 1))?;
            let vertex_map: BTreeMap<String, String> = (0..above.graph.num_vertices() as u32)
                .map(|v| {
                    (
                        above.graph.vertex_id(v).to_string(),
                        below.graph.vertex_id(map.vertex(v)).to_string(),
                    )
                })
                .collect();
            let edge_map: BTreeMap<String, String> = (0..above.graph.num_edges() as u32)
                .map(|e| {
                    (
                        above.graph.edge(e).id.clone(),
                        below.graph.edge(map.edge(e)).id.clone(),
                    )
                })
                .collect();
            print_json(&json!({
                "level": level,
                "valid": true,
                "domain_vertices": above.graph.num_vertices(),
                "codomain_vertices": below.graph.num_vertices(),
                "vertex_map": vertex_map,
                "edge_map": edge_map,
            }));
            Ok(0)
        }
        Command::Tower { spec, levels, dot } => {
            let spec = read_spec(spec)?;
            let graph = build_graph(&spec)?;
            let cc = require_chain(&spec, &graph)?;
            let levels = levels.unwrap_or(cc.len());
            let qt = QuotientTower::build(&cc, levels).map_err(|e| CliError::from_kgt(e, 1))?;
            if let Some(path) = dot {
                std::fs::write(path, tower_dot(&qt.tower))
                    .map_err(|e| CliError::new("Io", e.to_string(), 1))?;
            }
            let per_level: Vec<usize> = (1..=levels)
                .map(|n| qt.tower.level_vertex_count(n))
                .collect();
            print_json(&json!({
                "levels": levels,
                "rank": qt.tower.graph.rank(),
                "valid": true,
                "vertices_per_level": per_level,
                "vertices": qt.tower.graph.num_vertices(),
                "edges": qt.tower.graph.num_edges(),
            }));
            Ok(0)
        }
        Command::Simplicity {
            spec,
            levels,
            bound,
        } => {
            let spec = read_spec(spec)?;
            let graph = build_graph(&spec).map_err(|mut e| {
                e.exit = 3;
                e
            })?;
            let cc = require_chain(&spec, &graph).map_err(|mut e| {
                e.exit = 3;
                e
            })?;
            let section = spec.bounds.clone().unwrap_or_default();
            let mut bounds = SimplicityBounds {
                levels: levels.unwrap_or(0),
                degree_bound: section.degree,
                segment_bound: section.segment,
                state_cap: section.state_cap,
            };
            if let Some(b) = bound {
                bounds.degree_bound = *b;
                bounds.segment_bound = *b;
            }
            let report = simplicity_check(&cc, &bounds).map_err(|e| CliError::from_kgt(e, 3))?;
            print_json(&report.describe(&cc, &bounds));
            Ok(match report.verdict {
                SimplicityVerdict::Simple => 0,
                SimplicityVerdict::NotSimple => 1,
                SimplicityVerdict::Inconclusive => 2,
            })
        }
        Command::Projlim {
            spec,
            levels,
            degree,
        } => {
            let spec = read_spec(spec)?;
            let graph = build_graph(&spec)?;
            let cc = require_chain(&spec, &graph)?;
            let levels = levels.unwrap_or(cc.len());
            let degree = parse_degree(degree, graph.rank())?;
            let qt = QuotientTower::build(&cc, levels).map_err(|e| CliError::from_kgt(e, 1))?;
            let count = qt.seq.graph(levels).count_paths(&degree, None);
            if count > path_cap() {
                return Err(CliError::from_kgt(
                    KgtError::EnumerationCapExceeded(count, path_cap()),
                    1,
                ));
            }
            let tuples =
                enumerate_tuples(&qt.seq, levels, &degree).map_err(|e| CliError::from_kgt(e, 1))?;
            let bijection = profinite_skew_bijection(&cc, levels, &degree)
                .map_err(|e| CliError::from_kgt(e, 1))?;
            print_json(&json!({
                "levels": levels,
                "degree": degree,
                "count": tuples.len(),
                "tuples": tuples.iter().map(|t| t.describe(&qt.seq)).collect::<Vec<_>>(),
                "bijection": bijection,
            }));
            Ok(0)
        }
        Command::Symbolic { spec, levels } => {
            let spec = read_spec(spec)?;
            let graph = build_graph(&spec)?;
            let mut cc = require_chain(&spec, &graph)?;
            if let Some(levels) = levels {
                cc = cc.truncate(*levels).map_err(|e| CliError::from_kgt(e, 1))?;
            }
            let ctx = SymbolicContext::new(&cc).map_err(|e| CliError::from_kgt(e, 1))?;
            let bound = spec.bounds.clone().unwrap_or_default().degree;
            let reports = run_all_checks(&ctx, bound).map_err(|e| CliError::from_kgt(e, 1))?;
            let all_pass = reports.iter().all(|r| r.pass);
            print_json(&reports);
            Ok(if all_pass { 0 } else { 1 })
        }
        Command::Example { which, levels, p } => {
            let spec = match which {
                ExampleKind::Bd => {
                    if *levels < 1 || *levels > 10 {
                        return Err(CliError::new(
                            "LevelOutOfRange",
                            "the odometer example supports 1..=10 levels (group cap 512)".into(),
                            1,
                        ));
                    }
                    bd_spec(*levels)
                }
                ExampleKind::Cycle => {
                    if *p < 1 {
                        return Err(CliError::new(
                            "Parse",
                            "cycle length must be positive".into(),
                            1,
                        ));
                    }
                    cycle_spec(*p)
                }
                ExampleKind::Twoloop => twoloop_spec(),
            };
            let _ = BoundsSection::default();
            print!("{}", spec.to_json());
            Ok(0)
        }
    }
}
