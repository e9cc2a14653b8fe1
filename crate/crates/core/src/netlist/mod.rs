//! Circuit netlists: parsing, validation, and the capacitive spanning tree
//! used by the method of nodes.
//!
//! Branch flux convention: a branch written `NAME a b ...` carries the flux
//! Φ = φ(a) − φ(b) (+ its offset when it is a closure branch), SPICE-style.

mod graph;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub use graph::{
    classify_nodes, spanning_tree, validate, NodeClassification, SpanningTree, ValidationReport, Violation,
};
pub use parse::{parse_netlist, parse_value};

pub const DEFAULT_GROUND: &str = "0";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchKind {
    Capacitor,
    Inductor,
    Josephson,
}

impl BranchKind {
    /// Inductors and Josephson elements form the inductive sub-network.
    pub fn is_inductive(self) -> bool {
        !matches!(self, BranchKind::Capacitor)
    }

    pub fn from_prefix(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'C' => Some(BranchKind::Capacitor),
            'L' => Some(BranchKind::Inductor),
            'J' => Some(BranchKind::Josephson),
            _ => None,
        }
    }
}

/// A two-pole element.
///
/// `value` is farads, henries or joules (E_J) depending on `kind`. `offset`
/// is a charge in coulombs on capacitors and a flux in webers on inductive
/// branches. Only loop sums of inductive offsets are observable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Branch {
    pub name: String,
    pub kind: BranchKind,
    pub node_a: String,
    pub node_b: String,
    pub value: f64,
    pub offset: f64,
}

impl Branch {
    pub fn new(
        name: impl Into<String>,
        kind: BranchKind,
        node_a: impl Into<String>,
        node_b: impl Into<String>,
        value: f64,
    ) -> Self {
        Branch { name: name.into(), kind, node_a: node_a.into(), node_b: node_b.into(), value, offset: 0.0 }
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    pub fn touches(&self, node: &str) -> bool {
        self.node_a == node || self.node_b == node
    }

    /// The opposite terminal, if `node` is one of the two.
    pub fn other(&self, node: &str) -> Option<&str> {
        if self.node_a == node {
            Some(&self.node_b)
        } else if self.node_b == node {
            Some(&self.node_a)
        } else {
            None
        }
    }
}

/// A parsed netlist. Parallel branches between the same pair of nodes are kept
/// distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitGraph {
    nodes: BTreeSet<String>,
    branches: Vec<Branch>,
    ground: String,
}

impl CircuitGraph {
    /// Builds a graph, checking the per-branch invariants (positive finite
    /// value, distinct terminals, unique names).
    pub fn new(branches: Vec<Branch>, ground: impl Into<String>) -> Result<Self> {
        let ground = ground.into();
        if branches.is_empty() {
            return Err(Error::EmptyNetlist);
        }
        let mut names = BTreeSet::new();
        let mut nodes = BTreeSet::new();
        nodes.insert(ground.clone());
        for (i, b) in branches.iter().enumerate() {
            if !names.insert(b.name.as_str()) {
                return Err(Error::DuplicateBranch { line: i + 1, name: b.name.clone() });
            }
            if !(b.value > 0.0) || !b.value.is_finite() {
                return Err(Error::NonPositiveValue { line: i + 1, name: b.name.clone(), value: b.value });
            }
            if !b.offset.is_finite() {
                return Err(Error::InvalidArgument(format!("offset of `{}` is not finite", b.name)));
            }
            if b.node_a == b.node_b {
                return Err(Error::InvalidArgument(format!(
                    "branch `{}` connects node `{}` to itself",
                    b.name, b.node_a
                )));
            }
            nodes.insert(b.node_a.clone());
            nodes.insert(b.node_b.clone());
        }
        Ok(CircuitGraph { nodes, branches, ground })
    }

    pub fn nodes(&self) -> &BTreeSet<String> {
        &self.nodes
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn ground(&self) -> &str {
        &self.ground
    }

    pub fn branch(&self, name: &str) -> Option<&Branch> {
        self.branches.iter().find(|b| b.name == name)
    }

    /// Non-ground nodes in lexicographic order; this is the node order of all
    /// reduced matrices.
    pub fn node_order(&self) -> Vec<String> {
        self.nodes.iter().filter(|n| **n != self.ground).cloned().collect()
    }

    /// Same circuit with a different reference node.
    pub fn with_ground(&self, ground: impl Into<String>) -> Self {
        let ground = ground.into();
        let mut nodes = self.nodes.clone();
        nodes.insert(ground.clone());
        CircuitGraph { nodes, branches: self.branches.clone(), ground }
    }

    /// Appends a branch, enforcing the same invariants as [`CircuitGraph::new`].
    pub fn push_branch(&mut self, branch: Branch) -> Result<()> {
        let mut all = std::mem::take(&mut self.branches);
        all.push(branch);
        match CircuitGraph::new(all.clone(), self.ground.clone()) {
            Ok(g) => {
                *self = g;
                Ok(())
            }
            Err(e) => {
                all.pop();
                self.branches = all;
                Err(e)
            }
        }
    }

    /// Canonical netlist text; parsing it back yields an identical graph.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CircuitGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GROUND {}", self.ground)?;
        for b in &self.branches {
            write!(f, "{} {} {} ", b.name, b.node_a, b.node_b)?;
            match b.kind {
                BranchKind::Josephson => write!(f, "Ej={:e}", b.value)?,
                _ => write!(f, "{:e}", b.value)?,
            }
            if b.offset != 0.0 {
                write!(f, " offset={:e}", b.offset)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
