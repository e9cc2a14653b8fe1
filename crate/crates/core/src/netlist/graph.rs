use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

use super::{BranchKind, CircuitGraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// The graph (all branch kinds) splits into several components.
    Disconnected { unreachable: Vec<String> },
    /// Some nodes cannot be reached from ground through capacitors alone.
    CapacitiveNotSpanning { unreachable: Vec<String> },
    /// A node touched by inductive branches but by no capacitor.
    PassiveInductiveNode { node: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Disconnected { unreachable } => {
                write!(f, "graph is not connected: {} unreachable from ground", unreachable.join(", "))
            }
            Violation::CapacitiveNotSpanning { unreachable } => write!(
                f,
                "capacitive sub-network not spanning: {} not reachable from ground through capacitors",
                unreachable.join(", ")
            ),
            Violation::PassiveInductiveNode { node } => {
                write!(f, "passive inductive node `{node}`: no capacitor attached")
            }
        }
    }
}

/// Violations of the method-of-nodes preconditions. Empty means admissible.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "- {v}")?;
        }
        Ok(())
    }
}

fn reachable(graph: &CircuitGraph, capacitors_only: bool) -> BTreeSet<String> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(graph.ground().to_string());
    queue.push_back(graph.ground().to_string());
    while let Some(n) = queue.pop_front() {
        for b in graph.branches() {
            if capacitors_only && b.kind != BranchKind::Capacitor {
                continue;
            }
            if let Some(o) = b.other(&n) {
                if seen.insert(o.to_string()) {
                    queue.push_back(o.to_string());
                }
            }
        }
    }
    seen
}

/// Checks connectivity, the spanning capacitive sub-network and the absence
/// of passive inductive nodes.
pub fn validate(graph: &CircuitGraph) -> ValidationReport {
    let mut violations = Vec::new();

    let all = reachable(graph, false);
    let missing: Vec<String> = graph.nodes().difference(&all).cloned().collect();
    if !missing.is_empty() {
        violations.push(Violation::Disconnected { unreachable: missing });
    }

    let cap = reachable(graph, true);
    let missing: Vec<String> = graph.nodes().difference(&cap).cloned().collect();
    if !missing.is_empty() {
        violations.push(Violation::CapacitiveNotSpanning { unreachable: missing });
    }

    for node in graph.nodes() {
        let mut inductive = false;
        let mut capacitive = false;
        for b in graph.branches().iter().filter(|b| b.touches(node)) {
            if b.kind.is_inductive() {
                inductive = true;
            } else {
                capacitive = true;
            }
        }
        if inductive && !capacitive {
            violations.push(Violation::PassiveInductiveNode { node: node.clone() });
        }
    }
    ValidationReport { violations }
}

/// Capacitive spanning tree rooted at ground.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanningTree {
    /// Tree branch names in discovery order.
    pub tree_branches: Vec<String>,
    /// node → (parent node, branch name)
    pub parent: BTreeMap<String, (String, String)>,
    /// Every branch not in the tree, in netlist order.
    pub closure_branches: Vec<String>,
}

impl SpanningTree {
    pub fn contains(&self, branch: &str) -> bool {
        self.tree_branches.iter().any(|b| b == branch)
    }

    /// Tree path from ground to `node` as branch names, ground side first.
    pub fn path_to(&self, node: &str) -> Vec<String> {
        let mut path = Vec::new();
        let mut cur = node.to_string();
        while let Some((p, b)) = self.parent.get(&cur) {
            path.push(b.clone());
            cur = p.clone();
        }
        path.reverse();
        path
    }
}

/// Breadth-first search over capacitor branches from ground. Neighbours are
/// visited in lexicographic node order, parallel capacitors in branch-name
/// order, so the result is a pure function of the graph.
pub fn spanning_tree(graph: &CircuitGraph) -> Result<SpanningTree> {
    validate(graph).into_result()?;

    let mut parent = BTreeMap::new();
    let mut tree = Vec::new();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(graph.ground().to_string());
    queue.push_back(graph.ground().to_string());

    while let Some(n) = queue.pop_front() {
        let mut edges: Vec<(&str, &str)> = graph
            .branches()
            .iter()
            .filter(|b| b.kind == BranchKind::Capacitor)
            .filter_map(|b| b.other(&n).map(|o| (o, b.name.as_str())))
            .collect();
        edges.sort();
        for (other, name) in edges {
            if seen.insert(other.to_string()) {
                parent.insert(other.to_string(), (n.clone(), name.to_string()));
                tree.push(name.to_string());
                queue.push_back(other.to_string());
            }
        }
    }

    if tree.len() + 1 != graph.nodes().len() {
        return Err(Error::Internal(format!(
            "spanning tree has {} branches for {} nodes",
            tree.len(),
            graph.nodes().len()
        )));
    }
    let closure = graph.branches().iter().filter(|b| !tree.contains(&b.name)).map(|b| b.name.clone()).collect();
    Ok(SpanningTree { tree_branches: tree, parent, closure_branches: closure })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeClassification {
    /// Nodes where capacitive and inductive branches meet.
    pub active: BTreeSet<String>,
    /// Nodes touched by a single element kind.
    pub passive: BTreeSet<String>,
    pub ground: String,
}

pub fn classify_nodes(graph: &CircuitGraph) -> NodeClassification {
    let mut active = BTreeSet::new();
    let mut passive = BTreeSet::new();
    for node in graph.nodes().iter().filter(|n| *n != graph.ground()) {
        let kinds: BTreeSet<bool> =
            graph.branches().iter().filter(|b| b.touches(node)).map(|b| b.kind.is_inductive()).collect();
        if kinds.len() == 2 {
            active.insert(node.clone());
        } else {
            passive.insert(node.clone());
        }
    }
    NodeClassification { active, passive, ground: graph.ground().to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse_netlist;

    const FIG5: &str = "C1 0 a 1p\nC2 0 b 1p\nC3 a b 1p\nL1 0 a 1n\nL2 0 b 1n\nL3 a b 1n offset=1e-16\n";

    #[test]
    fn lc_is_admissible() {
        let g = parse_netlist("C1 0 1 10p\nL1 0 1 1n").unwrap();
        assert!(validate(&g).is_empty());
        let t = spanning_tree(&g).unwrap();
        assert_eq!(t.tree_branches, vec!["C1"]);
        assert_eq!(t.closure_branches, vec!["L1"]);
        let c = classify_nodes(&g);
        assert_eq!(c.active.iter().collect::<Vec<_>>(), vec!["1"]);
        assert!(c.passive.is_empty());
    }

    #[test]
    fn inductor_only_pair_is_not_spanning() {
        let g = parse_netlist("C1 0 1 1p\nL1 1 2 1n").unwrap();
        let report = validate(&g);
        assert!(report.violations.iter().any(
            |v| matches!(v, Violation::CapacitiveNotSpanning { unreachable } if unreachable == &vec!["2".to_string()])
        ));
        assert!(report.to_string().contains("capacitive sub-network not spanning"));
        assert!(report.violations.contains(&Violation::PassiveInductiveNode { node: "2".into() }));
        assert!(matches!(spanning_tree(&g), Err(Error::Invalid(_))));
    }

    #[test]
    fn disconnected_graph() {
        let g = parse_netlist("C1 0 1 1p\nC2 2 3 1p").unwrap();
        let report = validate(&g);
        assert!(matches!(report.violations[0], Violation::Disconnected { .. }));
    }

    #[test]
    fn figure_five_tree_and_classes() {
        let g = parse_netlist(FIG5).unwrap();
        let t = spanning_tree(&g).unwrap();
        assert_eq!(t.tree_branches, vec!["C1", "C2"]);
        for l in ["L1", "L2", "L3"] {
            assert!(t.closure_branches.contains(&l.to_string()));
        }
        assert!(t.closure_branches.contains(&"C3".to_string()));
        let c = classify_nodes(&g);
        assert!(c.active.contains("a") && c.active.contains("b"));
    }

    #[test]
    fn star_of_capacitors() {
        let g = parse_netlist("C1 0 a 1p\nC2 0 b 1p\nC3 0 c 1p").unwrap();
        let t = spanning_tree(&g).unwrap();
        assert_eq!(t.tree_branches.len(), 3);
        assert!(t.closure_branches.is_empty());
    }

    #[test]
    fn capacitive_divider_mid_node_is_passive() {
        let g = parse_netlist("C1 0 a 1p\nC2 a b 1p\nL1 0 b 1n").unwrap();
        let c = classify_nodes(&g);
        assert!(c.passive.contains("a"));
        assert!(c.active.contains("b"));
    }

    #[test]
    fn parallel_capacitors_tie_break_on_name() {
        let g = parse_netlist("Cz 0 1 1p\nCa 0 1 1p\nL1 0 1 1n").unwrap();
        let t = spanning_tree(&g).unwrap();
        assert_eq!(t.tree_branches, vec!["Ca"]);
        assert_eq!(t.path_to("1"), vec!["Ca"]);
    }
}
