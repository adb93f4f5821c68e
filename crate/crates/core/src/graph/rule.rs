use std::collections::{HashMap, HashSet};

use super::{GraphError, LabelledGraph, NodeId};
use crate::crs::{CrsRule, CrsSystem, CrsTerm, CrsTermKind};
use crate::Name;

/// A labelled graph with a left root `r` and a right root `s`. Nodes
/// reachable from both sides are shared, so firing reuses their images.
#[derive(Debug, Clone)]
pub struct GraphRule {
    pub graph: LabelledGraph,
    pub left_root: NodeId,
    pub right_root: NodeId,
    pub(crate) left: HashSet<NodeId>,
    /// Nodes reachable from `s`, children first.
    pub(crate) right_order: Vec<NodeId>,
}

impl GraphRule {
    /// Checks that every path from `r` is a left path and that every
    /// unlabelled node reachable from `s` is reachable from `r`.
    pub fn new(graph: LabelledGraph, left_root: NodeId, right_root: NodeId) -> Result<GraphRule, GraphError> {
        let invalid = |m: &str| GraphError::InvalidRule(m.to_string());
        let head = graph.label(left_root).ok_or_else(|| invalid("left root is unlabelled"))?;
        if head.is_constructor() {
            return Err(invalid("left root must be labelled by a function symbol"));
        }
        let left_order = graph.post_order(left_root);
        for &v in &left_order {
            if v != left_root && graph.label(v).is_some_and(|s| !s.is_constructor()) {
                return Err(invalid("a path from the left root reaches a second function symbol"));
            }
        }
        let left: HashSet<NodeId> = left_order.into_iter().collect();
        let right_order = graph.post_order(right_root);
        if right_order
            .iter()
            .any(|v| graph.label(*v).is_none() && !left.contains(v))
        {
            return Err(invalid("an unlabelled node on the right is not reachable from the left root"));
        }
        Ok(GraphRule {
            graph,
            left_root,
            right_root,
            left,
            right_order,
        })
    }

    /// Number of nodes reachable from `s` but not from `r`: the growth of
    /// one firing before collection.
    pub fn right_only_size(&self) -> usize {
        self.right_order.iter().filter(|v| !self.left.contains(v)).count()
    }

    pub fn head(&self) -> Name {
        self.graph.label(self.left_root).expect("validated").name
    }
}

/// The union of the two trees of `r`, with the nodes of each variable merged.
pub fn rule_to_graph_rule(r: &CrsRule) -> GraphRule {
    let mut graph = LabelledGraph::new();
    let mut vars: HashMap<Name, NodeId> = HashMap::new();
    let args: Vec<NodeId> = r.args.iter().map(|a| add_tree(&mut graph, a, &mut vars)).collect();
    let left_root = graph.add(Some(r.function), args);
    let right_root = add_tree(&mut graph, &r.rhs, &mut vars);
    GraphRule::new(graph, left_root, right_root).expect("constructor rules give valid graph rules")
}

fn add_tree(g: &mut LabelledGraph, t: &CrsTerm, vars: &mut HashMap<Name, NodeId>) -> NodeId {
    match t.kind() {
        CrsTermKind::Var(x) => *vars.entry(*x).or_insert_with(|| g.add(None, Vec::new())),
        CrsTermKind::Node(s, children) => {
            let kids = children.iter().map(|c| add_tree(g, c, vars)).collect();
            g.add(Some(*s), kids)
        }
    }
}

/// Graph rules indexed by the symbol labelling their left root.
#[derive(Debug, Clone, Default)]
pub struct GraphSystem {
    rules: Vec<GraphRule>,
    by_head: HashMap<Name, Vec<usize>>,
}

impl GraphSystem {
    pub fn new(rules: Vec<GraphRule>) -> GraphSystem {
        let mut by_head: HashMap<Name, Vec<usize>> = HashMap::new();
        for (i, r) in rules.iter().enumerate() {
            by_head.entry(r.head()).or_default().push(i);
        }
        GraphSystem { rules, by_head }
    }

    pub fn from_crs(sys: &CrsSystem) -> GraphSystem {
        GraphSystem::new(sys.rules().iter().map(rule_to_graph_rule).collect())
    }

    pub fn rules(&self) -> &[GraphRule] {
        &self.rules
    }

    pub fn candidates(&self, head: Name) -> &[usize] {
        self.by_head.get(&head).map_or(&[], |v| v.as_slice())
    }

    /// Largest right-only part over all rules.
    pub fn max_growth(&self) -> usize {
        self.rules.iter().map(GraphRule::right_only_size).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crs::parse_system;

    fn rule(src: &str) -> GraphRule {
        let doc = parse_system(src).unwrap();
        rule_to_graph_rule(&doc.system.rules()[0])
    }

    #[test]
    fn variables_are_shared_between_sides() {
        let r = rule("function a/2; constructor b/1; rule a(b(x), y) -> b(a(y, a(y, x)));");
        let g = &r.graph;
        // a, b, x, y on the left; b, a, a on the right.
        assert_eq!(g.len(), 7);
        let b = g.children(r.left_root)[0];
        let x = g.children(b)[0];
        let y = g.children(r.left_root)[1];
        assert_eq!(g.label(x), None);
        assert_eq!(g.label(y), None);
        let outer = g.children(r.right_root)[0];
        let inner = g.children(outer)[1];
        assert_eq!(g.children(outer)[0], y);
        assert_eq!(g.children(inner), &[y, x]);
        // One edge from the left, two from the right.
        assert_eq!(g.in_degree(y), 3);
        assert_eq!(r.right_only_size(), 3);
    }

    #[test]
    fn ground_rules_have_disjoint_sides() {
        let r = rule("function c/0; constructor d/0; rule c -> d;");
        assert_eq!(r.graph.len(), 2);
        assert_ne!(r.left_root, r.right_root);
        assert!(!r.left.contains(&r.right_root));
    }

    #[test]
    fn variable_right_side_is_the_shared_node() {
        let r = rule("constructor zero/0; function add/2; rule add(zero, y) -> y;");
        assert_eq!(r.graph.label(r.right_root), None);
        assert_eq!(r.graph.children(r.left_root)[1], r.right_root);
        assert_eq!(r.right_only_size(), 0);
    }

    #[test]
    fn malformed_rules_are_rejected() {
        use crate::crs::Sym;
        let f = Sym::function("f", 1);
        let mut g = LabelledGraph::new();
        let x = g.add(None, vec![]);
        let inner = g.add(Some(f), vec![x]);
        let r = g.add(Some(f), vec![inner]);
        assert!(GraphRule::new(g, r, x).is_err());
        let mut g = LabelledGraph::new();
        let x = g.add(None, vec![]);
        let y = g.add(None, vec![]);
        let r = g.add(Some(f), vec![x]);
        assert!(GraphRule::new(g, r, y).is_err());
    }
}
