//! The approximated static dependency graph and its recursion components.

use std::collections::BTreeSet;
use std::fmt::Write;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::sdp::DependencyPair;

/// Nodes are pairs in extraction order; an arc `p -> q` exists iff the rhs
/// head of `p` equals the lhs head of `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyGraph {
    pub pairs: Vec<DependencyPair>,
    pub arcs: BTreeSet<(usize, usize)>,
}

/// Node indices of a maximal strongly connected subgraph with at least one arc.
pub type Component = Vec<usize>;

pub fn build_graph(pairs: Vec<DependencyPair>) -> DependencyGraph {
    let mut arcs = BTreeSet::new();
    for (i, p) in pairs.iter().enumerate() {
        for (j, q) in pairs.iter().enumerate() {
            if p.rhs_head() == q.lhs_head() {
                arcs.insert((i, j));
            }
        }
    }
    DependencyGraph { pairs, arcs }
}

/// Maximal SCCs of `0..n` containing an arc, each sorted, ordered by least node.
pub fn cyclic_components(n: usize, arcs: &BTreeSet<(usize, usize)>) -> Vec<Component> {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(n, arcs.len());
    for _ in 0..n {
        g.add_node(());
    }
    for &(a, b) in arcs {
        g.add_edge(NodeIndex::new(a), NodeIndex::new(b), ());
    }
    let mut out: Vec<Component> = tarjan_scc(&g)
        .into_iter()
        .map(|scc| {
            let mut c: Vec<usize> = scc.into_iter().map(NodeIndex::index).collect();
            c.sort_unstable();
            c
        })
        .filter(|c| c.len() > 1 || arcs.contains(&(c[0], c[0])))
        .collect();
    out.sort();
    out
}

impl DependencyGraph {
    pub fn recursion_components(&self) -> Vec<Component> {
        cyclic_components(self.pairs.len(), &self.arcs)
    }

    /// Recursion components of the subgraph induced by `nodes`, in original indices.
    pub fn components_within(&self, nodes: &[usize]) -> Vec<Component> {
        let arcs: BTreeSet<(usize, usize)> = self
            .arcs
            .iter()
            .filter_map(|&(a, b)| {
                let ia = nodes.iter().position(|&x| x == a)?;
                let ib = nodes.iter().position(|&x| x == b)?;
                Some((ia, ib))
            })
            .collect();
        let mut out: Vec<Component> = cyclic_components(nodes.len(), &arcs)
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(|i| nodes[i]).collect();
                c.sort_unstable();
                c
            })
            .collect();
        out.sort();
        out
    }

    /// Graphviz rendering with one cluster per component.
    pub fn to_dot(&self, components: &[Component]) -> String {
        let mut out = String::from("digraph sdg {\n  node [shape=box];\n");
        let mut clustered = BTreeSet::new();
        for (k, c) in components.iter().enumerate() {
            let _ = writeln!(
                out,
                "  subgraph cluster_{k} {{\n    label=\"component {}\";",
                k + 1
            );
            for &i in c {
                clustered.insert(i);
                let _ = writeln!(
                    out,
                    "    n{i} [label=\"{}\"];",
                    escape(&self.pairs[i].to_string())
                );
            }
            out.push_str("  }\n");
        }
        for (i, p) in self.pairs.iter().enumerate() {
            if !clustered.contains(&i) {
                let _ = writeln!(out, "  n{i} [label=\"{}\"];", escape(&p.to_string()));
            }
        }
        for (a, b) in &self.arcs {
            let _ = writeln!(out, "  n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
