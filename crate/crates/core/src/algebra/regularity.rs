//! Uniform regularity of a kernel and its graph of covering.
//!
//! A kernel is uniformly regular when it stays bounded on the closed simplex.
//! The certificate enumerates every non-exhaustive union `U` of negatively
//! counted terms and sums the counts of all collected terms whose pattern lies
//! inside `U`; the kernel behaves like `ε^{sum}` as the mass of `U` shrinks to
//! `ε`, so a negative sum means the kernel blows up on that face.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::likelihood::log_likelihood_raw;
use crate::model::{CountModel, Pattern};

/// Default limit on the number of negative terms enumerated.
pub const DEFAULT_REGULARITY_CAP: usize = 20;

/// Environment variable overriding [`DEFAULT_REGULARITY_CAP`].
pub const REGULARITY_CAP_ENV: &str = "WEAVER_MAX_REG_N";

/// Distances from the face used by [`boundary_probe`].
pub const PROBE_DISTANCES: [f64; 3] = [1e-4, 1e-6, 1e-8];

/// A node of the covering graph: a collected pattern and its count.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverNode {
    pub pattern: Pattern,
    pub count: f64,
}

/// Collected patterns ordered by componentwise dominance. Edges run from a
/// pattern to each of its immediate covers.
#[derive(Clone, Debug, PartialEq)]
pub struct CoveringGraph {
    pub nodes: Vec<CoverNode>,
    pub edges: Vec<(usize, usize)>,
}

impl CoveringGraph {
    pub fn in_degree(&self, node: usize) -> usize {
        self.edges.iter().filter(|(_, to)| *to == node).count()
    }

    pub fn out_degree(&self, node: usize) -> usize {
        self.edges.iter().filter(|(from, _)| *from == node).count()
    }

    pub fn is_isolated(&self, node: usize) -> bool {
        self.edges.iter().all(|&(f, t)| f != node && t != node)
    }

    pub fn find(&self, pattern: &Pattern) -> Option<usize> {
        self.nodes.iter().position(|v| &v.pattern == pattern)
    }

    /// Graphviz text, one statement per line.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph {\n");
        for v in &self.nodes {
            let _ = writeln!(s, "  \"{}\" [w={}];", v.pattern, v.count);
        }
        for &(f, t) in &self.edges {
            let _ = writeln!(
                s,
                "  \"{}\" -> \"{}\";",
                self.nodes[f].pattern, self.nodes[t].pattern
            );
        }
        s.push('}');
        s.push('\n');
        s
    }
}

/// Builds the graph of covering over the model's collected terms.
pub fn covering_graph(model: &CountModel) -> CoveringGraph {
    let nodes: Vec<CoverNode> = model
        .terms()
        .into_iter()
        .map(|(pattern, count)| CoverNode { pattern, count })
        .collect();
    let below = |k: usize, m: usize| k != m && nodes[k].pattern.is_subset_of(&nodes[m].pattern);
    let mut edges = Vec::new();
    for k in 0..nodes.len() {
        for m in 0..nodes.len() {
            if below(k, m) && !(0..nodes.len()).any(|l| below(k, l) && below(l, m)) {
                edges.push((k, m));
            }
        }
    }
    CoveringGraph { nodes, edges }
}

/// A union whose covered counts sum below zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub union: Pattern,
    pub sum: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Regularity {
    Regular,
    Irregular(Witness),
    SizeCap { negatives: usize, cap: usize },
}

impl Regularity {
    pub fn is_regular(&self) -> bool {
        matches!(self, Regularity::Regular)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Regularity::Regular => "regular",
            Regularity::Irregular(_) => "irregular",
            Regularity::SizeCap { .. } => "size_cap",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegularityReport {
    pub verdict: Regularity,
    /// Number of negatively counted collected terms.
    pub negatives: usize,
    /// Non-empty subsets of the negative terms visited, exhaustive or not.
    pub unions_examined: u64,
}

/// The cap from [`REGULARITY_CAP_ENV`], or the default when unset or invalid.
pub fn regularity_cap() -> usize {
    std::env::var(REGULARITY_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_REGULARITY_CAP)
}

/// Runs the criterion with the cap from [`regularity_cap`].
pub fn check_uniform_regularity(model: &CountModel) -> RegularityReport {
    check_uniform_regularity_with_cap(model, regularity_cap())
}

pub fn check_uniform_regularity_with_cap(model: &CountModel, cap: usize) -> RegularityReport {
    let terms = model.terms();
    let negatives: Vec<&Pattern> = terms
        .iter()
        .filter(|(_, c)| *c < 0.0)
        .map(|(p, _)| p)
        .collect();
    let count = negatives.len();
    if count > cap {
        return RegularityReport {
            verdict: Regularity::SizeCap {
                negatives: count,
                cap,
            },
            negatives: count,
            unions_examined: 0,
        };
    }
    let mut walk = Walk {
        terms: &terms,
        negatives: &negatives,
        examined: 0,
        worst: None,
    };
    let mut acc = Pattern::zeros(model.n());
    walk.descend(0, &mut acc);
    let verdict = match walk.worst {
        Some(w) => Regularity::Irregular(w),
        None => Regularity::Regular,
    };
    RegularityReport {
        verdict,
        negatives: count,
        unions_examined: walk.examined,
    }
}

struct Walk<'a> {
    terms: &'a [(Pattern, f64)],
    negatives: &'a [&'a Pattern],
    examined: u64,
    worst: Option<Witness>,
}

impl Walk<'_> {
    /// Visits every union formed by adding negatives `from..` to `acc`.
    fn descend(&mut self, from: usize, acc: &mut Pattern) {
        for k in from..self.negatives.len() {
            let saved = acc.clone();
            acc.union_in_place(self.negatives[k]);
            self.examined += 1;
            if !acc.is_all_ones() {
                self.visit(acc);
            }
            self.descend(k + 1, acc);
            *acc = saved;
        }
    }

    fn visit(&mut self, union: &Pattern) {
        let sum: f64 = self
            .terms
            .iter()
            .filter(|(p, _)| p.is_subset_of(union))
            .map(|(_, c)| c)
            .sum();
        let worse = match &self.worst {
            Some(w) => sum < w.sum,
            None => sum < 0.0,
        };
        if worse {
            self.worst = Some(Witness {
                union: union.clone(),
                sum,
            });
        }
    }
}

/// Log-kernel at points whose mass on `face` is `ε` for each `ε` in
/// [`PROBE_DISTANCES`], spread evenly inside and outside the face.
pub fn boundary_probe(model: &CountModel, face: &Pattern) -> Result<Vec<f64>> {
    let n = model.n();
    if face.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "face has {} bits, model has {n} ions",
            face.len()
        )));
    }
    let inside = face.count_ones();
    if inside == 0 || inside == n {
        return Err(Error::InvalidInput(
            "probe face must be a non-empty proper subset".into(),
        ));
    }
    PROBE_DISTANCES
        .iter()
        .map(|&eps| {
            let x: Vec<f64> = (0..n)
                .map(|i| {
                    if face.get(i) {
                        eps / inside as f64
                    } else {
                        (1.0 - eps) / (n - inside) as f64
                    }
                })
                .collect();
            log_likelihood_raw(model, &x)
        })
        .collect()
}
