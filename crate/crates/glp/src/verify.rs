//! Tree corpora and verification sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::LaurentPoly;
use crate::graphcore::{contains, format_set, members, RootedTree, SimpleGraph, VertexSet};
use crate::lpcalc::{
    exchange_verify_with, star_conjecture_check, x_rooted, y_general_connected, y_transpositions, ClusterSubstitution,
    Coordinates, XMode, YTable,
};
use crate::tpaths::{default_node_budget, enumerate_in, exhaustive_search, hypergraph_of};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorpusError {
    #[error("corpus too large: {0}")]
    TooLarge(String),
    #[error("unknown named corpus: {0}")]
    UnknownName(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Every labeled tree on `[n]` with every root.
    Exhaustive(usize),
    /// `count` uniform Prüfer sequences from a ChaCha8 stream seeded with
    /// `seed`; each tree is rooted at a uniformly drawn vertex from the same
    /// stream.
    Random { n: usize, count: usize, seed: u64 },
    Named(String),
}

#[derive(Clone, Debug)]
pub struct TreeCorpus {
    pub provenance: Provenance,
    pub trees: Vec<RootedTree>,
}

/// Decodes a Prüfer sequence over `1..=n` (length `n - 2`) into tree edges.
pub fn prufer_decode(seq: &[u32], n: usize) -> Vec<(u32, u32)> {
    if n == 1 {
        return vec![];
    }
    if n == 2 {
        return vec![(1, 2)];
    }
    let mut degree = vec![1u32; n + 1];
    for &v in seq {
        degree[v as usize] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &v in seq {
        let leaf = (1..=n as u32).find(|&u| degree[u as usize] == 1).expect("a leaf exists");
        edges.push((leaf.min(v), leaf.max(v)));
        degree[leaf as usize] -= 1;
        degree[v as usize] -= 1;
    }
    let rest: Vec<u32> = (1..=n as u32).filter(|&u| degree[u as usize] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// All labeled trees on `[n]` as edge lists, in Prüfer-sequence order.
pub fn labeled_trees(n: usize) -> Vec<Vec<(u32, u32)>> {
    if n <= 2 {
        return vec![prufer_decode(&[], n)];
    }
    let len = n - 2;
    let total = n.pow(len as u32);
    (0..total)
        .map(|mut code| {
            let mut seq = vec![0u32; len];
            for k in (0..len).rev() {
                seq[k] = (code % n) as u32 + 1;
                code /= n;
            }
            prufer_decode(&seq, n)
        })
        .collect()
}

pub fn tree_corpus(source: &Provenance) -> Result<TreeCorpus, CorpusError> {
    let trees = match source {
        Provenance::Exhaustive(n) => {
            if *n > 8 || *n == 0 {
                return Err(CorpusError::TooLarge(format!("exhaustive corpus needs 1 <= n <= 8, got {n}")));
            }
            let mut out = Vec::new();
            for edges in labeled_trees(*n) {
                for root in 1..=*n as u32 {
                    out.push(RootedTree::from_edges(*n, &edges, root).expect("Prüfer decoding yields trees"));
                }
            }
            out
        }
        Provenance::Random { n, count, seed } => {
            if *n > 16 || *n == 0 {
                return Err(CorpusError::TooLarge(format!("random corpus needs 1 <= n <= 16, got {n}")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..*count)
                .map(|_| {
                    let seq: Vec<u32> = (0..n.saturating_sub(2)).map(|_| rng.gen_range(1..=*n as u32)).collect();
                    let root = rng.gen_range(1..=*n as u32);
                    RootedTree::from_edges(*n, &prufer_decode(&seq, *n), root).expect("Prüfer decoding yields trees")
                })
                .collect()
        }
        Provenance::Named(name) => named_trees(name)?,
    };
    Ok(TreeCorpus { provenance: source.clone(), trees })
}

pub fn eight_vertex_tree() -> RootedTree {
    RootedTree::from_edges(8, &[(1, 2), (2, 3), (2, 4), (2, 5), (4, 6), (4, 7), (5, 8)], 1).unwrap()
}

/// Path 1–2–3–4 with 5 hanging off 2, rooted at 3.
pub fn forked_tree() -> RootedTree {
    RootedTree::from_edges(5, &[(1, 2), (2, 5), (2, 3), (3, 4)], 3).unwrap()
}

/// The seven-vertex tree used to illustrate the general `Y` expansion.
pub fn seven_vertex_tree() -> RootedTree {
    RootedTree::from_edges(7, &[(1, 2), (1, 3), (2, 4), (2, 5), (3, 6), (6, 7)], 1).unwrap()
}

/// Five vertices: a path 1–2–3 with 4 and 5 hanging off 3.
pub fn five_vertex_tree() -> RootedTree {
    RootedTree::from_edges(5, &[(1, 2), (2, 3), (3, 4), (3, 5)], 1).unwrap()
}

/// Six vertices on a 2×3 grid (not a tree).
pub fn grid_graph() -> SimpleGraph {
    SimpleGraph::new(6, &[(2, 4), (4, 6), (6, 5), (1, 3), (3, 5), (4, 3), (2, 1)]).unwrap()
}

/// A 4-cycle 1–2–3–4 with a pendant vertex 5 on 1 (not a tree).
pub fn cycle_with_pendant() -> SimpleGraph {
    SimpleGraph::new(5, &[(1, 2), (2, 3), (3, 4), (4, 1), (1, 5)]).unwrap()
}

pub fn star_tree(n: usize, root: u32) -> RootedTree {
    let edges: Vec<(u32, u32)> = (2..=n as u32).map(|k| (1, k)).collect();
    RootedTree::from_edges(n, &edges, root).unwrap()
}

pub fn path_tree(n: usize, root: u32) -> RootedTree {
    let edges: Vec<(u32, u32)> = (1..n as u32).map(|k| (k, k + 1)).collect();
    RootedTree::from_edges(n, &edges, root).unwrap()
}

pub const NAMED_CORPORA: &[&str] = &["eight-vertex", "forked", "seven-vertex", "five-vertex", "stars", "examples"];

fn named_trees(name: &str) -> Result<Vec<RootedTree>, CorpusError> {
    let stars = || (4..=7).map(|n| star_tree(n, 1)).collect::<Vec<_>>();
    Ok(match name {
        "eight-vertex" => vec![eight_vertex_tree()],
        "forked" => vec![forked_tree()],
        "seven-vertex" => vec![seven_vertex_tree()],
        "five-vertex" => vec![five_vertex_tree()],
        "stars" => stars(),
        "examples" => {
            let mut v = vec![eight_vertex_tree(), forked_tree(), seven_vertex_tree(), five_vertex_tree()];
            v.extend(stars());
            v
        }
        other => return Err(CorpusError::UnknownName(other.to_string())),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ExpansionVsDet,
    TpathVsFormula,
    ExhaustiveTpath,
    Exchange,
    Transpositions,
    Positivity,
    StarConjecture,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::ExpansionVsDet,
        Suite::TpathVsFormula,
        Suite::ExhaustiveTpath,
        Suite::Exchange,
        Suite::Transpositions,
        Suite::Positivity,
        Suite::StarConjecture,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ExpansionVsDet => "expansion-vs-det",
            Suite::TpathVsFormula => "tpath-vs-formula",
            Suite::ExhaustiveTpath => "exhaustive-tpath",
            Suite::Exchange => "exchange",
            Suite::Transpositions => "transpositions",
            Suite::Positivity => "positivity",
            Suite::StarConjecture => "star-conjecture",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }
}

/// Instance caps shared by all suites.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    /// Skip sets larger than this.
    pub max_set_size: Option<usize>,
    /// Trees above this size are skipped by the exhaustive T-path search.
    pub exhaustive_tpath_max_n: usize,
    /// Trees above this size are skipped by the exchange suite.
    pub exchange_max_n: usize,
    /// Coordinates for the expansion-vs-det substitution.
    #[serde(skip)]
    pub coordinates: Coordinates,
    /// Also validate every enumerated T-path against the rules.
    pub validate_paths: bool,
    /// Star sizes checked by the star-conjecture suite.
    pub star_sizes: Vec<usize>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_set_size: None,
            exhaustive_tpath_max_n: 4,
            exchange_max_n: 5,
            coordinates: Coordinates::Singleton,
            validate_paths: false,
            star_sizes: vec![4, 5, 6, 7],
        }
    }
}

/// Default exhaustive corpus size for `verify`.
pub const DEFAULT_EXHAUSTIVE_N: usize = 6;
/// Default random corpus: 200 trees each at these sizes.
pub const DEFAULT_RANDOM: (usize, [usize; 2], u64) = (200, [7, 8], 2024);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceRecord {
    pub pass: bool,
    pub tree_hash: String,
    pub root: u32,
    pub set: VertexSet,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub instances: usize,
    pub failures: usize,
    /// Failures of the star-conjecture suite are findings, not errors.
    pub finding: bool,
    pub records: Vec<InstanceRecord>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&format!(
                "{} {} {} root={} S={}",
                if r.pass { "PASS" } else { "FAIL" },
                self.suite.name(),
                r.tree_hash,
                r.root,
                format_set(r.set)
            ));
            if let Some(d) = &r.detail {
                out.push_str(&format!(" # {d}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn summary_json(&self) -> serde_json::Value {
        let failed: Vec<serde_json::Value> = self
            .records
            .iter()
            .filter(|r| !r.pass)
            .map(|r| serde_json::json!({"tree": r.tree_hash, "root": r.root, "set": format_set(r.set), "detail": r.detail}))
            .collect();
        serde_json::json!({
            "suite": self.suite.name(),
            "instances": self.instances,
            "failures": self.failures,
            "finding": self.finding,
            "failed": failed,
        })
    }
}

/// FNV-1a over the sorted edge list, as 16 hex digits.
pub fn tree_hash(g: &SimpleGraph) -> String {
    let mut edges = g.edges().to_vec();
    edges.sort_unstable();
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |b: u8| {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    };
    eat(g.n() as u8);
    for (u, v) in edges {
        eat(u as u8);
        eat(v as u8);
    }
    format!("{h:016x}")
}

fn record(t: &RootedTree, hash: &str, s: VertexSet, result: Result<bool, String>) -> InstanceRecord {
    let (pass, detail) = match result {
        Ok(p) => (p, None),
        Err(e) => (false, Some(e)),
    };
    InstanceRecord { pass, tree_hash: hash.to_string(), root: t.root(), set: s, detail }
}

fn sets_of(t: &RootedTree, limits: &Limits) -> Vec<VertexSet> {
    t.graph()
        .connected_subsets()
        .into_iter()
        .filter(|s| limits.max_set_size.is_none_or(|m| s.count_ones() as usize <= m))
        .collect()
}

pub fn run_suite(suite: Suite, corpus: &TreeCorpus, limits: &Limits) -> SuiteReport {
    let records: Vec<InstanceRecord> = match suite {
        Suite::StarConjecture => star_records(limits),
        Suite::Exchange => corpus.trees.par_iter().flat_map_iter(|t| exchange_records(t, limits)).collect(),
        _ => corpus.trees.par_iter().flat_map_iter(|t| tree_records(suite, t, limits)).collect(),
    };
    let failures = records.iter().filter(|r| !r.pass).count();
    SuiteReport { suite, instances: records.len(), failures, finding: suite == Suite::StarConjecture, records }
}

fn tree_records(suite: Suite, t: &RootedTree, limits: &Limits) -> Vec<InstanceRecord> {
    let hash = tree_hash(t.graph());
    let sets = sets_of(t, limits);
    match suite {
        Suite::ExpansionVsDet => {
            let mut table = YTable::new(t.graph());
            let mut checker = ClusterSubstitution::new(t, limits.coordinates, &mut table);
            sets.into_iter()
                .map(|s| {
                    let r = y_general_connected(t, s)
                        .map(|rep| rep.positive && checker.matches(&rep.laurent(), s))
                        .map_err(|e| e.to_string());
                    record(t, &hash, s, r)
                })
                .collect()
        }
        Suite::Positivity => sets
            .into_iter()
            .map(|s| {
                let mut ok = y_general_connected(t, s).map(|r| r.positive).map_err(|e| e.to_string());
                if s.count_ones() == 1 {
                    let x = members(s)[0];
                    ok = ok.map(|p| p && x_rooted(t, x, XMode::Closed).positive);
                }
                record(t, &hash, s, ok)
            })
            .collect(),
        Suite::Transpositions => sets
            .into_iter()
            .map(|s| {
                let r = y_general_connected(t, s)
                    .and_then(|g| y_transpositions(t, s).map(|tr| tr.equals(&g.expression)))
                    .map_err(|e| e.to_string());
                record(t, &hash, s, r)
            })
            .collect(),
        Suite::TpathVsFormula => {
            let h = match hypergraph_of(t) {
                Ok(h) => h,
                Err(_) => return Vec::new(),
            };
            sets.into_iter()
                .map(|s| {
                    let r = (|| -> Result<bool, String> {
                        let paths = enumerate_in(&h, s).map_err(|e| e.to_string())?;
                        let terms = y_general_connected(t, s).map_err(|e| e.to_string())?.terms;
                        if paths.len() != terms.len() {
                            return Err(format!("{} paths for {} terms", paths.len(), terms.len()));
                        }
                        for (p, term) in paths.iter().zip(&terms) {
                            if &LaurentPoly::monomial(p.raw_weight()) != term {
                                return Ok(false);
                            }
                            if limits.validate_paths && !p.validate().is_valid() {
                                return Err("enumerated path fails validation".into());
                            }
                        }
                        Ok(true)
                    })();
                    record(t, &hash, s, r)
                })
                .collect()
        }
        Suite::ExhaustiveTpath => {
            if t.n() < 2 || t.n() > limits.exhaustive_tpath_max_n {
                return Vec::new();
            }
            let h = hypergraph_of(t).expect("n >= 2");
            sets.into_iter()
                .map(|s| {
                    let r = (|| -> Result<bool, String> {
                        let mut listed: Vec<_> =
                            enumerate_in(&h, s).map_err(|e| e.to_string())?.iter().map(|p| p.canonical_form()).collect();
                        listed.sort();
                        listed.dedup();
                        let found = exhaustive_search(t, s, default_node_budget(t, s)).map_err(|e| e.to_string())?;
                        let found: Vec<_> = found.iter().map(|p| p.canonical_form()).collect();
                        Ok(listed == found)
                    })();
                    record(t, &hash, s, r)
                })
                .collect()
        }
        Suite::Exchange | Suite::StarConjecture => unreachable!("handled by run_suite"),
    }
}

/// Both exchange relations for every `S ⊆ [n]` and every `i` (and `j`)
/// outside it, one record per `S`.
fn exchange_records(t: &RootedTree, limits: &Limits) -> Vec<InstanceRecord> {
    if t.n() > limits.exchange_max_n {
        return Vec::new();
    }
    exchange_records_for(t.graph(), t.root(), limits)
}

pub fn exchange_records_for(g: &SimpleGraph, root: u32, limits: &Limits) -> Vec<InstanceRecord> {
    let hash = tree_hash(g);
    let mut table = YTable::new(g);
    let n = g.n() as u32;
    let mut out = Vec::new();
    let sets = (0..1u64 << n)
        .map(|k| k << 1)
        .filter(|s| limits.max_set_size.is_none_or(|m| s.count_ones() as usize <= m));
    for s in sets {
        let outside: Vec<u32> = (1..=n).filter(|&v| !contains(s, v)).collect();
        if outside.is_empty() {
            continue;
        }
        let mut result: Result<bool, String> = Ok(true);
        'check: for &i in &outside {
            for j in std::iter::once(None).chain(outside.iter().filter(|&&j| j > i).map(|&j| Some(j))) {
                match exchange_verify_with(&mut table, s, i, j) {
                    Ok(true) => {}
                    Ok(false) => {
                        result = Err(format!("fails at i={i} j={}", j.map_or("-".into(), |j| j.to_string())));
                        break 'check;
                    }
                    Err(e) => {
                        result = Err(e.to_string());
                        break 'check;
                    }
                }
            }
        }
        let (pass, detail) = match result {
            Ok(p) => (p, None),
            Err(d) => (false, Some(d)),
        };
        out.push(InstanceRecord { pass, tree_hash: hash.clone(), root, set: s, detail });
    }
    out
}

fn star_records(limits: &Limits) -> Vec<InstanceRecord> {
    let mut out = Vec::new();
    for &n in &limits.star_sizes {
        let hash = tree_hash(star_tree(n, 1).graph());
        match star_conjecture_check(n) {
            Ok(rep) => {
                for c in rep.cases {
                    let detail = (!c.holds).then(|| format!("expected {} got {}", c.expected, c.conjectured));
                    out.push(InstanceRecord { pass: c.holds, tree_hash: hash.clone(), root: 1, set: c.set, detail });
                }
            }
            Err(e) => out.push(InstanceRecord {
                pass: false,
                tree_hash: hash,
                root: 1,
                set: 0,
                detail: Some(e.to_string()),
            }),
        }
    }
    out
}

/// Keeps only the first root of each labeled tree (for root-independent
/// suites over an exhaustive corpus).
pub fn one_root_per_tree(corpus: &TreeCorpus) -> TreeCorpus {
    let mut seen = std::collections::HashSet::new();
    let trees = corpus.trees.iter().filter(|t| seen.insert(tree_hash(t.graph()))).cloned().collect();
    TreeCorpus { provenance: corpus.provenance.clone(), trees }
}
