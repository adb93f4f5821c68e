use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use super::{GraphRule, GraphSystem, NodeId, TermGraph};
use crate::crs::NormalKind;

/// A rule together with a homomorphism from its left subgraph into the
/// target graph.
#[derive(Debug, Clone)]
pub struct Redex {
    pub rule: usize,
    pub phi: HashMap<NodeId, NodeId>,
}

impl Redex {
    /// The image of the rule's left root.
    pub fn target(&self, sys: &GraphSystem) -> NodeId {
        self.phi[&sys.rules()[self.rule].left_root]
    }
}

/// Leftmost-innermost redex: function nodes are tried in depth-first
/// post-order from the root, children left to right.
pub fn find_redex(g: &TermGraph, sys: &GraphSystem) -> Option<Redex> {
    find_redex_counted(g, sys, &mut 0)
}

fn find_redex_counted(g: &TermGraph, sys: &GraphSystem, visits: &mut u64) -> Option<Redex> {
    let order = g.graph.skeleton_post_order(g.root);
    *visits += order.len() as u64;
    for &v in &order {
        let Some(sym) = g.graph.label(v) else { continue };
        if sym.is_constructor() {
            continue;
        }
        for &i in sys.candidates(sym.name) {
            if let Some(phi) = homomorphism(g, &sys.rules()[i], v, visits) {
                return Some(Redex { rule: i, phi });
            }
        }
    }
    None
}

/// Top-down matching of the rule's left subgraph at `at`. Unlabelled rule
/// nodes may only land on nodes from which every path is a constructor path.
fn homomorphism(
    g: &TermGraph,
    rule: &GraphRule,
    at: NodeId,
    visits: &mut u64,
) -> Option<HashMap<NodeId, NodeId>> {
    let mut phi = HashMap::new();
    let mut stack = vec![(rule.left_root, at)];
    while let Some((u, v)) = stack.pop() {
        *visits += 1;
        if let Some(&w) = phi.get(&u) {
            if w != v {
                return None;
            }
            continue;
        }
        phi.insert(u, v);
        match rule.graph.label(u) {
            None => {
                if !g.graph.constructor_only(v) {
                    return None;
                }
            }
            Some(s) => {
                if g.graph.label(v) != Some(s) {
                    return None;
                }
                let pairs = rule.graph.children(u).iter().zip(g.graph.children(v));
                stack.extend(pairs.map(|(a, b)| (*a, *b)));
            }
        }
    }
    Some(phi)
}

/// Phase one: adds a copy of the part of the rule reachable from `s` but
/// not from `r`, wiring it to the images of shared nodes. Returns the node
/// standing for `s`.
pub fn build_phase(g: &mut TermGraph, sys: &GraphSystem, redex: &Redex) -> NodeId {
    build_counted(g, sys, redex, &mut 0)
}

fn build_counted(g: &mut TermGraph, sys: &GraphSystem, redex: &Redex, visits: &mut u64) -> NodeId {
    let rule = &sys.rules()[redex.rule];
    let mut copy: HashMap<NodeId, NodeId> = HashMap::new();
    for &u in &rule.right_order {
        let image = if rule.left.contains(&u) {
            redex.phi[&u]
        } else {
            *visits += 1;
            let kids = rule.graph.children(u).iter().map(|c| copy[c]).collect();
            g.graph.add(rule.graph.label(u), kids)
        };
        copy.insert(u, image);
    }
    copy[&rule.right_root]
}

/// Phase two: every edge into `from` now points to `to`; so does the root
/// if `from` was the root.
pub fn redirect_phase(g: &mut TermGraph, from: NodeId, to: NodeId) {
    redirect_counted(g, from, to, &mut 0)
}

fn redirect_counted(g: &mut TermGraph, from: NodeId, to: NodeId, visits: &mut u64) {
    let mut parents = std::mem::take(&mut g.graph.node_mut(from).parents);
    parents.sort_unstable();
    parents.dedup();
    for p in parents {
        let mut edges = 0;
        for c in g.graph.node_mut(p).children.iter_mut() {
            if *c == from {
                *c = to;
                edges += 1;
            }
        }
        *visits += edges as u64;
        g.graph.node_mut(to).parents.extend(std::iter::repeat_n(p, edges));
        g.graph.refresh_only(p);
    }
    if g.root == from {
        g.root = to;
    }
}

/// Phase three: deletes every node no longer reachable from the root,
/// given that `from` is the only node that may have lost its last in-edge.
/// In an acyclic graph the unreachable nodes are exactly those that lose
/// all in-edges as deletion cascades downward from `from`. Returns the
/// number of deleted nodes.
pub fn collect_garbage(g: &mut TermGraph, from: NodeId) -> usize {
    collect_counted(g, from, &mut 0)
}

fn collect_counted(g: &mut TermGraph, from: NodeId, visits: &mut u64) -> usize {
    let mut removed = 0;
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        *visits += 1;
        if v == g.root || !g.graph.contains(v) || g.graph.in_degree(v) > 0 {
            continue;
        }
        let children = std::mem::take(&mut g.graph.node_mut(v).children);
        for c in children {
            let parents = &mut g.graph.node_mut(c).parents;
            let k = parents.iter().position(|p| *p == v).expect("parent edge recorded");
            parents.swap_remove(k);
            if parents.is_empty() {
                stack.push(c);
            }
        }
        g.graph.remove(v);
        removed += 1;
    }
    removed
}

/// Build, redirect, collect.
pub fn fire_redex(g: &mut TermGraph, sys: &GraphSystem, redex: &Redex) {
    fire_counted(g, sys, redex, &mut 0)
}

fn fire_counted(g: &mut TermGraph, sys: &GraphSystem, redex: &Redex, visits: &mut u64) {
    let target = redex.target(sys);
    let s = build_counted(g, sys, redex, visits);
    redirect_counted(g, target, s, visits);
    collect_counted(g, target, visits);
}

#[derive(Debug, Clone)]
pub enum GraphOutcome {
    NormalForm(NormalKind),
    BudgetExhausted,
}

impl GraphOutcome {
    pub fn is_normal(&self) -> bool {
        matches!(self, GraphOutcome::NormalForm(_))
    }
}

#[derive(Debug, Clone)]
pub struct GraphRun {
    pub graph: TermGraph,
    pub outcome: GraphOutcome,
    pub steps: u64,
    /// `sizes[i]` is the node count after `i` steps.
    pub sizes: Vec<usize>,
    /// Nodes touched by the search and firing of each step; the final
    /// entry is the search that found no redex (or hit the budget).
    pub visits: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("graph is not constructor-shared after {step} steps (node {node})")]
pub struct SharingViolation {
    pub step: u64,
    pub node: String,
}

/// Leftmost-innermost graph reduction for at most `budget` steps, checking
/// constructor-sharedness initially and after every firing.
pub fn graph_reduce(g: TermGraph, sys: &GraphSystem, budget: u64) -> Result<GraphRun, SharingViolation> {
    run(g, sys, budget, true)
}

/// [`graph_reduce`] without the sharedness check, for graphs that are not
/// constructor-shared to begin with.
pub fn graph_reduce_unchecked(g: TermGraph, sys: &GraphSystem, budget: u64) -> GraphRun {
    run(g, sys, budget, false).expect("no check, no violation")
}

fn run(mut g: TermGraph, sys: &GraphSystem, budget: u64, check: bool) -> Result<GraphRun, SharingViolation> {
    let mut sizes = vec![g.len()];
    let mut visits = Vec::new();
    let mut steps = 0;
    loop {
        if check {
            if let Some(node) = g.sharing_violation() {
                return Err(SharingViolation {
                    step: steps,
                    node: node.to_string(),
                });
            }
        }
        let mut work = 0;
        let Some(redex) = find_redex_counted(&g, sys, &mut work) else {
            visits.push(work);
            let kind = if g.graph.constructor_only(g.root) {
                NormalKind::ConstructorTerm
            } else {
                NormalKind::Stuck
            };
            return Ok(GraphRun {
                graph: g,
                outcome: GraphOutcome::NormalForm(kind),
                steps,
                sizes,
                visits,
            });
        };
        if steps == budget {
            visits.push(work);
            return Ok(GraphRun {
                graph: g,
                outcome: GraphOutcome::BudgetExhausted,
                steps,
                sizes,
                visits,
            });
        }
        fire_counted(&mut g, sys, &redex, &mut work);
        steps += 1;
        sizes.push(g.len());
        visits.push(work);
    }
}
