//! Graphviz export. Nodes are emitted in index order and edges sorted, so the
//! output is stable across runs.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::homotopy::SPi0;
use crate::poset::Poset;
use crate::setdiagram::SetDiagram;

/// The objects that have a DOT rendering.
pub enum DotObject<'a> {
    Poset(&'a Poset),
    /// The category of chains under subchain inclusion.
    Chains(&'a Poset),
    SetDiagram(&'a SetDiagram),
    SPi0(&'a SPi0),
}

impl<'a> DotObject<'a> {
    pub fn from_kind(kind: &str, poset: &'a Poset) -> Result<Self> {
        match kind {
            "poset" => Ok(DotObject::Poset(poset)),
            "chains" | "rp" => Ok(DotObject::Chains(poset)),
            _ => Err(Error::UnsupportedObject(kind.to_string())),
        }
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn graph(name: &str, nodes: &[String], edges: &[(usize, usize, Option<String>)]) -> String {
    let mut out = format!("digraph {} {{\n", quote(name));
    for n in nodes {
        writeln!(out, "  {};", quote(n)).unwrap();
    }
    for (a, b, label) in edges {
        match label {
            Some(l) => writeln!(
                out,
                "  {} -> {} [label={}];",
                quote(&nodes[*a]),
                quote(&nodes[*b]),
                quote(l)
            ),
            None => writeln!(out, "  {} -> {};", quote(&nodes[*a]), quote(&nodes[*b])),
        }
        .unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn export_dot(object: &DotObject) -> String {
    match object {
        DotObject::Poset(p) => poset_dot(p),
        DotObject::Chains(p) => chains_dot(p),
        DotObject::SetDiagram(g) => set_diagram_dot(g),
        DotObject::SPi0(s) => spi0_dot(s),
    }
}

/// The Hasse diagram.
pub fn poset_dot(p: &Poset) -> String {
    let nodes = p.elements().to_vec();
    let mut edges: Vec<_> = p.covers().into_iter().map(|(a, b)| (a, b, None)).collect();
    edges.sort();
    graph("P", &nodes, &edges)
}

/// Every proper subchain inclusion, not just the covering ones.
pub fn chains_dot(p: &Poset) -> String {
    let chains = p.chains();
    let nodes: Vec<String> = chains.iter().map(|c| p.chain_name(c)).collect();
    let at = |c: &crate::poset::Chain| chains.iter().position(|d| d == c).expect("chain of P");
    let mut edges: Vec<_> = p
        .chain_inclusions()
        .iter()
        .filter(|(a, b)| a != b)
        .map(|(a, b)| (at(a), at(b), None))
        .collect();
    edges.sort();
    graph("R(P)", &nodes, &edges)
}

/// The shape, with each generating arrow labelled by its element map.
pub fn set_diagram_dot(g: &SetDiagram) -> String {
    let nodes: Vec<String> = (0..g.len()).map(|d| g.shape.name(d).to_string()).collect();
    let mut edges: Vec<_> = g
        .generating_arrows()
        .into_iter()
        .map(|a| {
            let m: Vec<&str> = a.map.iter().map(|&x| g.value(a.to)[x].as_str()).collect();
            (a.from, a.to, Some(format!("[{}]", m.join(","))))
        })
        .collect();
    edges.sort();
    graph("G", &nodes, &edges)
}

/// One node per chain labelled with its classes, edges from each chain to its
/// maximal proper subchains labelled with the restriction map.
pub fn spi0_dot(s: &SPi0) -> String {
    let p = &s.base;
    let nodes: Vec<String> = s
        .chains
        .iter()
        .enumerate()
        .map(|(i, c)| format!("{} {{{}}}", p.chain_name(c), s.classes[i].join(",")))
        .collect();
    let mut edges = Vec::new();
    for (i, c) in s.chains.iter().enumerate() {
        if c.len() < 2 {
            continue;
        }
        for pos in 0..c.len() {
            let sub = c.without(pos);
            let j = s.chain_index(&sub).expect("subchain of a chain");
            let map = s.restriction(c, &sub).expect("restriction along an inclusion");
            let label: Vec<String> = map
                .iter()
                .enumerate()
                .map(|(a, &b)| format!("{}↦{}", s.classes[i][a], s.classes[j][b]))
                .collect();
            edges.push((i, j, Some(label.join(","))));
        }
    }
    edges.sort();
    graph("sπ0", &nodes, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_count(dot: &str) -> usize {
        dot.lines().filter(|l| l.contains("->")).count()
    }

    fn node_count(dot: &str) -> usize {
        dot.lines().filter(|l| l.ends_with(';') && !l.contains("->")).count()
    }

    #[test]
    fn two_chain() {
        let p = Poset::total_order(2);
        let d = poset_dot(&p);
        assert_eq!((node_count(&d), edge_count(&d)), (2, 1));
        let r = chains_dot(&p);
        assert_eq!((node_count(&r), edge_count(&r)), (3, 2));
    }

    #[test]
    fn three_chain_emits_all_inclusions() {
        let p = Poset::total_order(3);
        let r = chains_dot(&p);
        // 7 chains; each k-chain has 2^k - 2 proper nonempty subchains
        assert_eq!(node_count(&r), 7);
        assert_eq!(edge_count(&r), 3 * 2 + 6);
    }

    #[test]
    fn empty_poset() {
        let p = Poset::antichain::<&str>(&[]).unwrap();
        assert_eq!(poset_dot(&p), "digraph \"P\" {\n}\n");
    }

    #[test]
    fn unknown_kind() {
        let p = Poset::total_order(1);
        assert!(matches!(
            DotObject::from_kind("sset", &p),
            Err(Error::UnsupportedObject(_))
        ));
    }

    #[test]
    fn spi0_of_example_has_edges_for_every_codimension_one_face() {
        let k = crate::builtin::example_1_14().unwrap();
        let s = crate::homotopy::spi0(&k).unwrap();
        let d = spi0_dot(&s);
        assert_eq!(node_count(&d), 25);
        // 12 two-element chains with 2 faces, 6 three-element chains with 3
        assert_eq!(edge_count(&d), 12 * 2 + 6 * 3);
        assert_eq!(d, spi0_dot(&s));
    }
}
