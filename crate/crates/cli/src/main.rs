use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use cactus_star::cactus::is_cactus;
use cactus_star::color::color_cactus;
use cactus_star::constructions::{
    audit_lemma_facts, gen_cycle, gen_figure5, gen_random_cactus, gen_semiregular_tree, gen_tight_odd,
    RandomCactusParams,
};
use cactus_star::exact::{has_star_k_coloring, star_chromatic_index, Budget, Decision, StarIndex};
use cactus_star::io::{parse_coloring, parse_graph, to_dot, ColoringJson, GraphJson};
use cactus_star::ucc::color_ucc_graph;
use cactus_star::verify::verify_star_coloring;
use cactus_star::{EdgeColoring, Graph};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "cactus-star", version, about = "Star edge coloring of cactus graphs")]
struct Cli {
    /// Worker threads for parallel search (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Cactus,
    Ucc,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Cycle,
    Tree,
    TightOdd,
    Figure5,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Color a cactus with at most floor(3Δ/2)+1 colors.
    Color {
        #[arg(long, value_enum, default_value = "cactus")]
        mode: Mode,
        /// Raise Δ above the maximum degree (never lowers it).
        #[arg(long)]
        delta: Option<usize>,
        /// Also write a Graphviz rendering of the coloring.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Graph JSON file, or `-` for stdin.
        #[arg(default_value = "-")]
        input: String,
    },
    /// Check a coloring; exits 1 and prints the violation if it is not a star coloring.
    Verify { graph: String, coloring: String },
    /// Decide a palette size exactly, or find the star chromatic index.
    Exact {
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        budget_nodes: Option<u64>,
        #[arg(long)]
        budget_secs: Option<f64>,
        #[arg(default_value = "-")]
        graph: String,
    },
    /// Generate a graph.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        /// Cycle length (cycle).
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// Degree (tree, tight-odd) or degree cap (random).
        #[arg(long, default_value_t = 3)]
        delta: usize,
        /// Tree height.
        #[arg(long, default_value_t = 2)]
        height: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of blocks (random).
        #[arg(long, default_value_t = 10)]
        blocks: usize,
        #[arg(long, default_value_t = 0.5)]
        cycle_prob: f64,
        #[arg(long, default_value_t = 3)]
        min_len: usize,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check the structural facts of every extremal coloring of a height-2 tree.
    Audit {
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        budget_secs: Option<f64>,
    },
    /// Color and verify every graph JSON in a directory; prints CSV.
    Bench {
        #[arg(long)]
        corpus: PathBuf,
    },
}

/// Failure with the exit code to report.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure { code: 2, message: message.to_string() }
    }
}

type CliResult = Result<u8, Failure>;

fn read_text(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::usage(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("{path}: {e}")))
    }
}

fn read_graph(path: &str) -> Result<Graph, Failure> {
    parse_graph(&read_text(path)?).map_err(|e| Failure::usage(format!("{path}: {e}")))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("values serialize"));
}

fn coloring_value(col: &EdgeColoring) -> Value {
    serde_json::to_value(ColoringJson::from(col)).expect("plain data")
}

fn color(mode: Mode, delta: Option<usize>, dot: Option<PathBuf>, input: &str) -> CliResult {
    let g = read_graph(input)?;
    let delta = delta.unwrap_or(0).max(g.max_degree());
    let col = match mode {
        Mode::Cactus => color_cactus(&g, delta).map(|c| c.coloring).map_err(Failure::usage)?,
        Mode::Ucc => color_ucc_graph(&g, delta).map_err(Failure::usage)?,
    };
    let report = verify_star_coloring(&g, &col).map_err(Failure::usage)?;
    if let Some(path) = dot {
        fs::write(&path, to_dot(&g, Some(&col))).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    }
    let mut out = coloring_value(&col);
    out["report"] = serde_json::to_value(&report).expect("plain data");
    print_json(&out);
    Ok(if report.valid { 0 } else { 1 })
}

fn verify(graph: &str, coloring: &str) -> CliResult {
    if graph == "-" && coloring == "-" {
        return Err(Failure::usage("only one of GRAPH and COLORING may be read from stdin"));
    }
    let g = read_graph(graph)?;
    let col = parse_coloring(&read_text(coloring)?).map_err(|e| Failure::usage(format!("{coloring}: {e}")))?;
    let report = verify_star_coloring(&g, &col).map_err(Failure::usage)?;
    match &report.violation {
        Some(v) => {
            print_json(&serde_json::to_value(v).expect("plain data"));
            Ok(1)
        }
        None => {
            print_json(&serde_json::to_value(&report).expect("plain data"));
            Ok(0)
        }
    }
}

fn exact(k: Option<usize>, nodes: Option<u64>, secs: Option<f64>, graph: &str) -> CliResult {
    let g = read_graph(graph)?;
    let mut budget = Budget::unlimited();
    budget.max_nodes = nodes;
    if let Some(s) = secs {
        if !(s.is_finite() && s >= 0.0) {
            return Err(Failure::usage(format!("invalid --budget-secs {s}")));
        }
        budget.time_limit = Some(std::time::Duration::from_secs_f64(s));
    }
    match k {
        Some(k) => {
            let d = has_star_k_coloring(&g, k, &budget).map_err(Failure::usage)?;
            let (verdict, code, witness) = match d {
                Decision::Yes(c) => ("yes", 0, Some(coloring_value(&c))),
                Decision::No => ("no", 1, None),
                Decision::Unknown => ("unknown", 3, None),
            };
            print_json(&json!({ "k": k, "verdict": verdict, "coloring": witness }));
            Ok(code)
        }
        None => match star_chromatic_index(&g, &budget).map_err(Failure::usage)? {
            StarIndex::Exact { index, witness } => {
                print_json(&json!({ "verdict": "exact", "index": index, "coloring": coloring_value(&witness) }));
                Ok(0)
            }
            StarIndex::Unknown { lower } => {
                print_json(&json!({ "verdict": "unknown", "lower_bound": lower }));
                Ok(3)
            }
        },
    }
}

#[allow(clippy::too_many_arguments)]
fn gen(
    family: Family,
    n: usize,
    delta: usize,
    height: usize,
    seed: u64,
    blocks: usize,
    cycle_prob: f64,
    min_len: usize,
    max_len: usize,
    format: Format,
) -> CliResult {
    let g = match family {
        Family::Cycle => gen_cycle(n),
        Family::Tree => gen_semiregular_tree(delta, height),
        Family::TightOdd => gen_tight_odd(delta),
        Family::Figure5 => Ok(gen_figure5()),
        Family::Random => gen_random_cactus(&RandomCactusParams {
            seed,
            n_blocks: blocks,
            cycle_prob,
            min_len,
            max_len,
            delta_cap: delta,
        }),
    }
    .map_err(Failure::usage)?;
    match format {
        Format::Json => print_json(&serde_json::to_value(GraphJson::from(&g)).expect("plain data")),
        Format::Dot => print!("{}", to_dot(&g, None)),
    }
    Ok(0)
}

fn audit(delta: usize, secs: Option<f64>) -> CliResult {
    let budget = secs.map(Budget::seconds).unwrap_or_default();
    let report = audit_lemma_facts(delta, &budget).map_err(Failure::usage)?;
    print_json(&serde_json::to_value(&report).expect("plain data"));
    Ok(if !report.counterexamples.is_empty() {
        1
    } else if !report.complete {
        3
    } else {
        0
    })
}

fn bench(corpus: &Path) -> CliResult {
    let mut files: Vec<PathBuf> = fs::read_dir(corpus)
        .map_err(|e| Failure::usage(format!("{}: {e}", corpus.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    println!("file,edges,delta,colors_used,bound,valid,runtime_ms");
    let mut code = 0;
    for path in files {
        let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let g = match fs::read_to_string(&path).map_err(|e| e.to_string()).and_then(|t| parse_graph(&t).map_err(|e| e.to_string())) {
            Ok(g) => g,
            Err(e) => {
                eprintln!("{name}: {e}");
                code = 1;
                continue;
            }
        };
        if !is_cactus(&g).unwrap_or(false) {
            eprintln!("{name}: not a connected cactus, skipped");
            continue;
        }
        let start = Instant::now();
        let result = color_cactus(&g, g.max_degree());
        let ms = start.elapsed().as_secs_f64() * 1000.0;
        match result {
            Ok(c) => {
                let r = verify_star_coloring(&g, &c.coloring).expect("lengths match");
                if !r.valid || r.colors_used > r.bound {
                    code = 1;
                }
                println!("{name},{},{},{},{},{},{ms:.3}", r.edges, r.max_degree, r.colors_used, r.bound, r.valid);
            }
            Err(e) => {
                eprintln!("{name}: {e}");
                code = 1;
            }
        }
    }
    Ok(code)
}

fn run(cli: Cli) -> CliResult {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::usage(format!("--threads: {e}")))?;
    }
    match cli.command {
        Command::Color { mode, delta, dot, input } => color(mode, delta, dot, &input),
        Command::Verify { graph, coloring } => verify(&graph, &coloring),
        Command::Exact { k, budget_nodes, budget_secs, graph } => exact(k, budget_nodes, budget_secs, &graph),
        Command::Gen { family, n, delta, height, seed, blocks, cycle_prob, min_len, max_len, format } => {
            gen(family, n, delta, height, seed, blocks, cycle_prob, min_len, max_len, format)
        }
        Command::Audit { delta, budget_secs } => audit(delta, budget_secs),
        Command::Bench { corpus } => bench(&corpus),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
