use std::collections::HashMap;
use std::fmt;

use super::GraphError;
use crate::crs::{CrsTerm, CrsTermKind, Sym};

/// Opaque node identifier, unique within one graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub(crate) u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct GNode {
    pub(crate) label: Option<Sym>,
    pub(crate) children: Vec<NodeId>,
    /// One entry per incoming edge.
    pub(crate) parents: Vec<NodeId>,
    /// Every path from here visits only constructors.
    pub(crate) only: bool,
}

/// A DAG with ordered out-edges and a partial labelling; unlabelled nodes
/// have no children and play the role of variables.
#[derive(Debug, Clone, Default)]
pub struct LabelledGraph {
    pub(crate) nodes: Vec<Option<GNode>>,
    free: Vec<u32>,
    live: usize,
}

impl LabelledGraph {
    pub fn new() -> LabelledGraph {
        LabelledGraph::default()
    }

    /// Adds a node. Panics if a labelled node's child count differs from
    /// the label's arity, or an unlabelled node has children.
    pub fn add(&mut self, label: Option<Sym>, children: Vec<NodeId>) -> NodeId {
        let arity = label.map_or(0, |s| s.arity);
        assert_eq!(children.len(), arity, "out-degree must match the label's arity");
        let id = match self.free.pop() {
            Some(slot) => NodeId(slot),
            None => {
                self.nodes.push(None);
                NodeId(u32::try_from(self.nodes.len() - 1).expect("graph too large"))
            }
        };
        for &c in &children {
            self.node_mut(c).parents.push(id);
        }
        let only = label.is_some_and(|s| s.is_constructor()) && children.iter().all(|&c| self.node(c).only);
        self.nodes[id.0 as usize] = Some(GNode {
            label,
            children,
            parents: Vec::new(),
            only,
        });
        self.live += 1;
        id
    }

    pub(crate) fn node(&self, id: NodeId) -> &GNode {
        self.nodes[id.0 as usize].as_ref().expect("live node")
    }

    pub(crate) fn node_mut(&mut self, id: NodeId) -> &mut GNode {
        self.nodes[id.0 as usize].as_mut().expect("live node")
    }

    pub(crate) fn remove(&mut self, id: NodeId) {
        if self.nodes[id.0 as usize].take().is_some() {
            self.live -= 1;
            self.free.push(id.0);
        }
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.nodes.get(id.0 as usize).is_some_and(|n| n.is_some())
    }

    pub fn label(&self, id: NodeId) -> Option<Sym> {
        self.node(id).label
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.node(id).children
    }

    pub fn in_degree(&self, id: NodeId) -> usize {
        self.node(id).parents.len()
    }

    /// Number of live nodes.
    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    /// Live node ids in increasing order.
    pub fn ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.is_some())
            .map(|(i, _)| NodeId(i as u32))
    }

    /// Nodes reachable from `from`, in depth-first post-order (children left
    /// to right before their parent), each listed once.
    pub fn post_order(&self, from: NodeId) -> Vec<NodeId> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        let mut stack = vec![(from, 0usize)];
        seen.insert(from);
        while let Some((id, next)) = stack.pop() {
            let children = &self.node(id).children;
            if next < children.len() {
                stack.push((id, next + 1));
                let c = children[next];
                if seen.insert(c) {
                    stack.push((c, 0));
                }
            } else {
                out.push(id);
            }
        }
        out
    }

    /// Whether every path starting at `id` visits only constructor-labelled
    /// nodes.
    pub fn constructor_only(&self, id: NodeId) -> bool {
        self.node(id).only
    }

    /// Recomputes the constructor-only flag of `id` after its children
    /// changed, and of its ancestors as far as the flag changes.
    pub(crate) fn refresh_only(&mut self, id: NodeId) {
        let mut stack = vec![id];
        while let Some(v) = stack.pop() {
            let n = self.node(v);
            let only = n.label.is_some_and(|s| s.is_constructor()) && n.children.iter().all(|&c| self.node(c).only);
            if only != n.only {
                let parents = n.parents.clone();
                self.node_mut(v).only = only;
                stack.extend(parents);
            }
        }
    }

    /// Like [`Self::post_order`], but without entering constructor-only
    /// nodes, which contain no redex.
    pub(crate) fn skeleton_post_order(&self, from: NodeId) -> Vec<NodeId> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        if self.node(from).only {
            return out;
        }
        let mut stack = vec![(from, 0usize)];
        seen.insert(from);
        while let Some((id, next)) = stack.pop() {
            let children = &self.node(id).children;
            if next < children.len() {
                stack.push((id, next + 1));
                let c = children[next];
                if !self.node(c).only && seen.insert(c) {
                    stack.push((c, 0));
                }
            } else {
                out.push(id);
            }
        }
        out
    }
}

/// A labelled graph with a distinguished root.
#[derive(Debug, Clone)]
pub struct TermGraph {
    pub graph: LabelledGraph,
    pub root: NodeId,
}

impl TermGraph {
    /// The tree of `t`: one node per symbol occurrence, no sharing.
    pub fn from_term(t: &CrsTerm) -> TermGraph {
        let mut graph = LabelledGraph::new();
        let mut done: Vec<NodeId> = Vec::new();
        let mut stack: Vec<(&CrsTerm, bool)> = vec![(t, false)];
        while let Some((t, expanded)) = stack.pop() {
            match t.kind() {
                CrsTermKind::Var(_) => done.push(graph.add(None, Vec::new())),
                CrsTermKind::Node(s, children) => {
                    if expanded {
                        let kids = done.split_off(done.len() - children.len());
                        done.push(graph.add(Some(*s), kids));
                    } else {
                        stack.push((t, true));
                        stack.extend(children.iter().rev().map(|c| (c, false)));
                    }
                }
            }
        }
        let root = done.pop().expect("one root");
        TermGraph { graph, root }
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    /// The term the graph denotes. Shared nodes become shared `Arc`
    /// subterms, so this is linear in the node count even when the unfolded
    /// term is exponentially larger.
    pub fn to_term(&self) -> Result<CrsTerm, GraphError> {
        let mut memo: HashMap<NodeId, CrsTerm> = HashMap::new();
        for id in self.graph.post_order(self.root) {
            let n = self.graph.node(id);
            let sym = n.label.ok_or(GraphError::UnlabelledNode(id))?;
            let kids: Vec<CrsTerm> = n.children.iter().map(|c| memo[c].clone()).collect();
            memo.insert(id, CrsTerm::node(sym, kids));
        }
        Ok(memo.remove(&self.root).expect("root visited"))
    }

    /// Size of the unfolded term (saturating).
    pub fn unfolded_size(&self) -> u64 {
        let mut memo: HashMap<NodeId, u64> = HashMap::new();
        for id in self.graph.post_order(self.root) {
            let s = self
                .graph
                .children(id)
                .iter()
                .fold(1u64, |acc, c| acc.saturating_add(memo[c]));
            memo.insert(id, s);
        }
        memo[&self.root]
    }

    /// [`Self::to_term`], refusing when the unfolded term would exceed
    /// `limit` symbols.
    pub fn to_term_bounded(&self, limit: u64) -> Result<CrsTerm, GraphError> {
        let size = self.unfolded_size();
        if size > limit {
            return Err(GraphError::TooLarge { size, limit });
        }
        self.to_term()
    }

    /// True iff every node reachable from the root along two distinct paths
    /// heads only constructor paths.
    pub fn is_constructor_shared(&self) -> bool {
        self.sharing_violation().is_none()
    }

    /// A shared node from which a non-constructor path starts, if any.
    /// Only nodes that are not constructor-only can violate the property,
    /// and those are closed under predecessors, so the count runs over them.
    pub fn sharing_violation(&self) -> Option<NodeId> {
        let order = self.graph.skeleton_post_order(self.root);
        // Paths from the root, capped at 2, in topological order.
        let mut paths: HashMap<NodeId, u8> = HashMap::new();
        paths.insert(self.root, 1);
        for &id in order.iter().rev() {
            let p = paths[&id];
            if p >= 2 {
                return Some(id);
            }
            for &c in self.graph.children(id) {
                if !self.graph.constructor_only(c) {
                    let e = paths.entry(c).or_insert(0);
                    *e = (*e + p).min(2);
                }
            }
        }
        None
    }

    /// Rooted isomorphism. Children are ordered, so a simultaneous
    /// traversal either builds the bijection or fails.
    pub fn is_isomorphic(&self, other: &TermGraph) -> bool {
        if self.graph.len() != other.graph.len() {
            return false;
        }
        let mut fwd: HashMap<NodeId, NodeId> = HashMap::new();
        let mut bwd: HashMap<NodeId, NodeId> = HashMap::new();
        let mut stack = vec![(self.root, other.root)];
        while let Some((a, b)) = stack.pop() {
            match (fwd.get(&a), bwd.get(&b)) {
                (Some(&x), Some(&y)) if x == b && y == a => continue,
                (None, None) => {}
                _ => return false,
            }
            fwd.insert(a, b);
            bwd.insert(b, a);
            let (na, nb) = (self.graph.node(a), other.graph.node(b));
            let same_label = match (na.label, nb.label) {
                (Some(s), Some(t)) => s.name == t.name && s.kind == t.kind,
                (None, None) => true,
                _ => false,
            };
            if !same_label || na.children.len() != nb.children.len() {
                return false;
            }
            stack.extend(na.children.iter().copied().zip(nb.children.iter().copied()));
        }
        fwd.len() == self.graph.len()
    }
}
