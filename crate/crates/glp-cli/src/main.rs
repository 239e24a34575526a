//! `glp`: command-line front end for graph LP algebra computations.

mod dot;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use glp::graphcore::{
    format_set, is_maximal_nested_collection, parse_graph, rooted_cluster, ClusterHypergraph, RootedTree,
    SimpleGraph, VertexSet,
};
use glp::lpcalc::{p_poly, star_conjecture_check, x_rooted, y_det, y_general, y_singleton, ExpansionReport, XMode};
use glp::tpaths::{enumerate, sum_weights};
use glp::verify::{
    one_root_per_tree, run_suite, tree_corpus, Limits, Provenance, Suite, TreeCorpus, DEFAULT_EXHAUSTIVE_N,
    DEFAULT_RANDOM,
};

const EXIT_FAILURE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_FINDING: u8 = 3;

#[derive(Parser)]
#[command(name = "glp", version, about = "Exact computations in graph LP algebras on trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the rooted cluster of a tree.
    Cluster {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        root: Option<u32>,
    },
    /// Print Y_S as a rational function in the A and X variables.
    Ydet {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        set: String,
    },
    /// Print the path polynomial P_S^{ij}.
    Ppoly {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        set: String,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
    },
    /// Expand Y_S (--set) or X_i (--x) in the rooted cluster.
    Expand {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long, conflicts_with = "x", required_unless_present = "x")]
        set: Option<String>,
        #[arg(long)]
        x: Option<u32>,
        #[arg(long)]
        root: Option<u32>,
    },
    /// List the hyper T-paths for S with their weights.
    Tpaths {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        set: String,
        #[arg(long)]
        root: Option<u32>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Run verification suites over tree corpora.
    Verify {
        /// Sweep every labeled tree with up to N vertices, every root.
        #[arg(long)]
        exhaustive_n: Option<usize>,
        /// Add COUNT random trees on SIZE vertices from SEED (repeatable).
        #[arg(long, num_args = 3, value_names = ["COUNT", "SIZE", "SEED"], action = clap::ArgAction::Append)]
        random: Vec<u64>,
        /// Run only this suite.
        #[arg(long)]
        suite: Option<String>,
        /// Largest |S| checked on random trees.
        #[arg(long, default_value_t = 5)]
        random_max_set: usize,
        /// Write one PASS/FAIL line per instance here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write the JSON summary here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check the conjectured star-graph formulas.
    StarConjecture {
        #[arg(long)]
        n: usize,
    },
    /// Write the cluster hypergraph as DOT.
    ExportDot {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        root: Option<u32>,
    },
}

enum Failure {
    Input(String),
    Verification,
    Finding,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Verification) => ExitCode::from(EXIT_FAILURE),
        Err(Failure::Finding) => ExitCode::from(EXIT_FINDING),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<(SimpleGraph, Option<u32>), Failure> {
    Ok(parse_graph(&read(path)?)?)
}

fn load_tree(path: &Path, root: Option<u32>) -> Result<RootedTree, Failure> {
    let (g, file_root) = load_graph(path)?;
    let root = root.or(file_root).ok_or_else(|| Failure::Input("no root given".into()))?;
    Ok(RootedTree::new(g, root)?)
}

fn parse_set(text: &str, n: usize) -> Result<VertexSet, Failure> {
    let mut s = 0u64;
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let v: u32 = part.parse().map_err(|_| Failure::Input(format!("bad vertex '{part}'")))?;
        if v == 0 || v as usize > n {
            return Err(Failure::Input(format!("vertex {v} out of range 1..={n}")));
        }
        s |= 1u64 << v;
    }
    if s == 0 {
        return Err(Failure::Input("empty set".into()));
    }
    Ok(s)
}

fn check_vertex(v: u32, n: usize) -> Result<(), Failure> {
    if v == 0 || v as usize > n {
        return Err(Failure::Input(format!("vertex {v} out of range 1..={n}")));
    }
    Ok(())
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Cluster { tree, root } => {
            let t = load_tree(&tree, root)?;
            let c = rooted_cluster(&t);
            println!("root {}", c.root);
            for &(x, set) in &c.sets {
                println!("I{x} = {}", format_set(set));
            }
            let maximal = is_maximal_nested_collection(t.graph(), &c.families(), t.graph().all());
            println!("maximal-nested {maximal}");
            Ok(())
        }
        Command::Ydet { tree, set } => {
            let (g, _) = load_graph(&tree)?;
            let s = parse_set(&set, g.n())?;
            println!("{}", y_det(&g, s).canonical_string());
            Ok(())
        }
        Command::Ppoly { tree, set, i, j } => {
            let (g, _) = load_graph(&tree)?;
            let s = parse_set(&set, g.n())?;
            check_vertex(i, g.n())?;
            check_vertex(j, g.n())?;
            let p = p_poly(&g, s, i, j);
            println!("P = {}", p.symbolic.canonical_string());
            println!("value = {}", p.value.canonical_string());
            Ok(())
        }
        Command::Expand { tree, set, x, root } => {
            let t = load_tree(&tree, root)?;
            let report = match (set, x) {
                (Some(set), _) => {
                    let s = parse_set(&set, t.n())?;
                    if s.count_ones() == 1 {
                        y_singleton(&t, s.trailing_zeros())
                    } else {
                        y_general(&t, s)?
                    }
                }
                (None, Some(i)) => {
                    check_vertex(i, t.n())?;
                    x_rooted(&t, i, XMode::Closed)
                }
                (None, None) => return Err(Failure::Input("give --set or --x".into())),
            };
            print_expansion(&report);
            Ok(())
        }
        Command::Tpaths { tree, set, root, dot } => {
            let t = load_tree(&tree, root)?;
            let s = parse_set(&set, t.n())?;
            let paths = enumerate(&t, s)?;
            let mut all_valid = true;
            for (k, p) in paths.iter().enumerate() {
                let valid = p.validate().is_valid();
                all_valid &= valid;
                println!(
                    "path {}: weight {} nodes {} connections {} valid {valid}",
                    k + 1,
                    p.raw_weight(),
                    p.nodes().len(),
                    p.connections().len()
                );
            }
            let sum = sum_weights(&paths);
            let expansion = y_general(&t, s)?.expression;
            let agree = sum.equals(&expansion);
            println!("count {}", paths.len());
            println!("sum = {}", sum.canonical_string());
            println!("expansion = {}", expansion.canonical_string());
            println!("match {agree}");
            if let Some(path) = dot {
                fs::write(&path, dot::tpaths_dot(&paths)).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            }
            if agree && all_valid {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Verify { exhaustive_n, random, suite, random_max_set, report, json } => {
            verify(exhaustive_n, &random, suite.as_deref(), random_max_set, report.as_deref(), json.as_deref())
        }
        Command::StarConjecture { n } => {
            let rep = star_conjecture_check(n)?;
            println!("n {n}");
            println!("cluster-maximal-nested {}", rep.cluster_is_maximal_nested);
            for c in &rep.cases {
                if c.holds {
                    println!("EQUAL S={}", format_set(c.set));
                } else {
                    println!("DIFFER S={} expected {} conjectured {}", format_set(c.set), c.expected, c.conjectured);
                }
            }
            let differ = rep.cases.iter().filter(|c| !c.holds).count();
            println!("summary {} sets, {differ} differ", rep.cases.len());
            if differ == 0 {
                Ok(())
            } else {
                Err(Failure::Finding)
            }
        }
        Command::ExportDot { tree, out, root } => {
            let t = load_tree(&tree, root)?;
            if t.n() < 2 {
                return Err(Failure::Input("the hypergraph needs at least two vertices".into()));
            }
            let h = ClusterHypergraph::new(&t);
            fs::write(&out, dot::hypergraph_dot(&h)).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
            Ok(())
        }
    }
}

fn print_expansion(r: &ExpansionReport) {
    println!("{} = {}", r.subject, r.expression.canonical_string());
    println!("terms {}", r.term_count);
    for term in &r.terms {
        println!("  {}", term.canonical_string());
    }
    println!("positive {}", r.positive);
}

fn verify(
    exhaustive_n: Option<usize>,
    random: &[u64],
    suite: Option<&str>,
    random_max_set: usize,
    report: Option<&Path>,
    json: Option<&Path>,
) -> Result<(), Failure> {
    let suites: Vec<Suite> = match suite {
        Some(name) => vec![Suite::from_name(name).ok_or_else(|| Failure::Input(format!("unknown suite '{name}'")))?],
        None => Suite::ALL.to_vec(),
    };
    let max_n = exhaustive_n.unwrap_or(DEFAULT_EXHAUSTIVE_N);
    let mut exhaustive = Vec::new();
    for n in 1..=max_n {
        exhaustive.extend(tree_corpus(&Provenance::Exhaustive(n))?.trees);
    }
    let exhaustive = TreeCorpus { provenance: Provenance::Exhaustive(max_n), trees: exhaustive };
    let random_specs: Vec<(usize, usize, u64)> = if random.is_empty() {
        let (count, sizes, seed) = DEFAULT_RANDOM;
        sizes.iter().map(|&n| (count, n, seed)).collect()
    } else {
        random.chunks(3).map(|c| (c[0] as usize, c[1] as usize, c[2])).collect()
    };
    let mut randoms = Vec::new();
    for (count, n, seed) in random_specs {
        randoms.push(tree_corpus(&Provenance::Random { n, count, seed })?);
    }

    let full = Limits::default();
    let capped = Limits { max_set_size: Some(random_max_set), ..Limits::default() };
    let mut lines = String::new();
    let mut summaries = Vec::new();
    let mut failed = false;
    let mut finding = false;
    for s in suites {
        let mut runs = Vec::new();
        match s {
            Suite::StarConjecture => runs.push(run_suite(s, &exhaustive, &full)),
            Suite::Exchange => runs.push(run_suite(s, &one_root_per_tree(&exhaustive), &full)),
            Suite::ExhaustiveTpath => runs.push(run_suite(s, &exhaustive, &full)),
            _ => {
                runs.push(run_suite(s, &exhaustive, &full));
                for c in &randoms {
                    runs.push(run_suite(s, c, &capped));
                }
            }
        }
        let instances: usize = runs.iter().map(|r| r.instances).sum();
        let failures: usize = runs.iter().map(|r| r.failures).sum();
        println!("suite {}: {instances} instances, {failures} failures", s.name());
        for r in &runs {
            let text = r.lines();
            for line in text.lines().filter(|l| l.starts_with("FAIL")) {
                println!("{line}");
            }
            lines.push_str(&text);
            summaries.push(r.summary_json());
        }
        if failures > 0 {
            if s == Suite::StarConjecture {
                finding = true;
            } else {
                failed = true;
            }
        }
    }
    if let Some(path) = report {
        fs::write(path, &lines).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    if let Some(path) = json {
        let doc = serde_json::json!({ "suites": summaries, "failed": failed, "finding": finding });
        fs::write(path, serde_json::to_string_pretty(&doc)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    if failed {
        Err(Failure::Verification)
    } else if finding {
        Err(Failure::Finding)
    } else {
        Ok(())
    }
}
