//! The three path-packing engines over contact graphs:
//! cardinality-constrained packing via min-cost max-flow on a split-node
//! network, knapsack-constrained packing via bottom-up tree DP, and
//! color-constrained packing via an LP whose extreme points have few
//! fractional leaves.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::contact::{ContactEdge, ContactGraph, EdgeWitness, GraphKind};
use crate::lp::{solve_lp, Direction, LpProblem, LpStatus, Relation, VarId};
use crate::rational::{int_u, Rat};

#[derive(Debug, Error)]
pub enum PathPackError {
    #[error("precondition violation: {0}")]
    Precondition(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("lp infeasible: {0}")]
    Infeasible(String),
}

/// A set of directed paths in a contact graph, with each covered node
/// counted once.
#[derive(Debug, Clone)]
pub struct PathPacking {
    /// Node-index sequences, each a directed path.
    pub paths: Vec<Vec<usize>>,
    /// Per-color sum of lambda over the union of path nodes.
    pub value: Vec<u64>,
    /// Path count (cardinality mode) or total sink weight (knapsack mode).
    pub budget_used: u64,
}

impl PathPacking {
    pub fn node_union(&self) -> BTreeSet<usize> {
        self.paths.iter().flatten().copied().collect()
    }

    pub fn total_value(&self) -> u64 {
        self.value.iter().sum()
    }
}

fn packing_value(g: &ContactGraph, paths: &[Vec<usize>]) -> Vec<u64> {
    let colors = g.nodes.first().map_or(0, |n| n.lambda.len());
    let mut value = vec![0u64; colors];
    let union: BTreeSet<usize> = paths.iter().flatten().copied().collect();
    for v in union {
        for (i, l) in g.nodes[v].lambda.iter().enumerate() {
            value[i] += l;
        }
    }
    value
}

// ---------------------------------------------------------------------------
// cardinality mode: min-cost max-flow on the split-node network
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ArcKind {
    Unit(usize),   // the capacity-1 arc of node v, cost -lambda(v)
    Bypass(usize), // the infinite 0-cost sibling of node v
    Source(usize),
    Sink(usize),
    Contact(usize), // index into g.edges
}

struct Arc {
    to: usize,
    cap: i64,
    flow: i64,
    cost: i64,
    kind: Option<ArcKind>, // None for residual twins
    rev: usize,
}

/// Split-node min-cost flow network for the cardinality packing.
struct FlowNetwork {
    adj: Vec<Vec<usize>>, // node -> arc indices
    arcs: Vec<Arc>,
}

impl FlowNetwork {
    const S: usize = 0;
    const T: usize = 1;

    fn v1(i: usize) -> usize {
        2 + 2 * i
    }
    fn v2(i: usize) -> usize {
        3 + 2 * i
    }

    fn new(g: &ContactGraph, k: u64) -> FlowNetwork {
        let n = g.nodes.len();
        let mut net = FlowNetwork {
            adj: vec![Vec::new(); 2 + 2 * n],
            arcs: Vec::new(),
        };
        let big = k as i64; // no single arc ever carries more than k units
        for (i, node) in g.nodes.iter().enumerate() {
            net.add(Self::v1(i), Self::v2(i), 1, -(node.lambda_total() as i64), ArcKind::Unit(i));
            net.add(Self::v1(i), Self::v2(i), big, 0, ArcKind::Bypass(i));
            net.add(Self::S, Self::v1(i), big, 0, ArcKind::Source(i));
            net.add(Self::v2(i), Self::T, big, 0, ArcKind::Sink(i));
        }
        for (e_idx, e) in g.edges.iter().enumerate() {
            net.add(Self::v2(e.from), Self::v1(e.to), big, 0, ArcKind::Contact(e_idx));
        }
        net
    }

    fn add(&mut self, from: usize, to: usize, cap: i64, cost: i64, kind: ArcKind) {
        let a = self.arcs.len();
        self.arcs.push(Arc { to, cap, flow: 0, cost, kind: Some(kind), rev: a + 1 });
        self.arcs.push(Arc { to: from, cap: 0, flow: 0, cost: -cost, kind: None, rev: a });
        self.adj[from].push(a);
        self.adj[to].push(a + 1);
    }

    /// Label-correcting (SPFA) shortest path on the residual network;
    /// negative arc costs are fine because no negative cycle ever exists.
    fn shortest_path(&self) -> Option<(i64, Vec<usize>)> {
        const INF: i64 = i64::MAX / 4;
        let n = self.adj.len();
        let mut dist = vec![INF; n];
        let mut pred: Vec<Option<usize>> = vec![None; n];
        let mut in_queue = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        dist[Self::S] = 0;
        queue.push_back(Self::S);
        in_queue[Self::S] = true;
        while let Some(u) = queue.pop_front() {
            in_queue[u] = false;
            for &ai in &self.adj[u] {
                let arc = &self.arcs[ai];
                if arc.cap - arc.flow <= 0 {
                    continue;
                }
                let nd = dist[u] + arc.cost;
                if nd < dist[arc.to] {
                    dist[arc.to] = nd;
                    pred[arc.to] = Some(ai);
                    if !in_queue[arc.to] {
                        queue.push_back(arc.to);
                        in_queue[arc.to] = true;
                    }
                }
            }
        }
        if dist[Self::T] >= INF {
            return None;
        }
        let mut path = Vec::new();
        let mut cur = Self::T;
        while cur != Self::S {
            let ai = pred[cur].expect("predecessor chain");
            path.push(ai);
            cur = {
                let rev = self.arcs[ai].rev;
                self.arcs[rev].to
            };
        }
        path.reverse();
        Some((dist[Self::T], path))
    }

    /// k unit augmentations of successive shortest paths; stops early when
    /// the marginal path cost reaches zero.
    fn run(&mut self, k: u64) -> i64 {
        let mut total_cost = 0i64;
        for _ in 0..k {
            match self.shortest_path() {
                Some((cost, path)) if cost < 0 => {
                    for ai in path {
                        self.arcs[ai].flow += 1;
                        let rev = self.arcs[ai].rev;
                        self.arcs[rev].flow -= 1;
                    }
                    total_cost += cost;
                }
                _ => break,
            }
        }
        total_cost
    }

    /// Peels unit s-t paths out of the final flow, smallest contact-node
    /// client first at every branch; returns contact-node sequences.
    fn decompose(&mut self, g: &ContactGraph) -> Vec<Vec<usize>> {
        // deterministic arc order per node: unit before bypass, then by
        // client index of the head node, sink arcs last
        let order_key = |arc: &Arc| -> (u8, usize) {
            match arc.kind {
                Some(ArcKind::Unit(i)) => (0, g.nodes[i].client),
                Some(ArcKind::Bypass(i)) => (1, g.nodes[i].client),
                Some(ArcKind::Contact(e)) => (2, g.nodes[g.edges[e].to].client),
                Some(ArcKind::Source(i)) => (2, g.nodes[i].client),
                Some(ArcKind::Sink(_)) => (3, 0),
                None => (9, 0),
            }
        };
        for list in &mut self.adj {
            list.sort_by_key(|&ai| order_key(&self.arcs[ai]));
        }
        let mut paths = Vec::new();
        loop {
            // a unit leaves s if any source arc still carries flow
            let Some(&first) = self.adj[Self::S]
                .iter()
                .find(|&&ai| self.arcs[ai].kind.is_some() && self.arcs[ai].flow > 0)
            else {
                break;
            };
            let mut nodes = Vec::new();
            let mut arc_idx = first;
            loop {
                self.arcs[arc_idx].flow -= 1;
                let arc_to = self.arcs[arc_idx].to;
                if let Some(ArcKind::Unit(i)) | Some(ArcKind::Bypass(i)) = self.arcs[arc_idx].kind
                {
                    nodes.push(i);
                }
                if arc_to == Self::T {
                    break;
                }
                arc_idx = *self.adj[arc_to]
                    .iter()
                    .find(|&&ai| self.arcs[ai].kind.is_some() && self.arcs[ai].flow > 0)
                    .expect("flow conservation guarantees an outgoing unit");
            }
            paths.push(nodes);
        }
        paths
    }
}

/// Optimal packing of at most `k` paths in a contact DAG, maximizing the
/// lambda-sum over the union of covered nodes. Exact: k unit augmentations of
/// successive shortest paths, then flow decomposition.
pub fn solve_wkpp(g: &ContactGraph, k: u64) -> Result<PathPacking, PathPackError> {
    if g.kind != GraphKind::Dag {
        return Err(PathPackError::Precondition("solve_wkpp needs a DAG".into()));
    }
    if k == 0 || g.nodes.is_empty() {
        return Ok(PathPacking { paths: Vec::new(), value: packing_value(g, &[]), budget_used: 0 });
    }
    // every value-carrying augmentation saturates a fresh unit arc, so more
    // than |V| paths never help
    let k = k.min(g.nodes.len() as u64);
    let mut net = FlowNetwork::new(g, k);
    let cost = net.run(k);
    let paths = net.decompose(g);
    let value = packing_value(g, &paths);
    debug_assert_eq!(
        value.iter().sum::<u64>() as i64,
        -cost,
        "decomposed value must match flow cost"
    );
    let budget_used = paths.len() as u64;
    debug_assert!(budget_used <= k);
    Ok(PathPacking { paths, value, budget_used })
}

// ---------------------------------------------------------------------------
// knapsack mode: bottom-up DP on the out-forest
// ---------------------------------------------------------------------------

const NEG: i64 = i64::MIN / 4;

struct NodeTables {
    /// best[b]: max subtree value with sink weight <= b (possibly no sinks).
    best: Vec<i64>,
    /// best_pos[b]: same but with at least one sink in the subtree.
    best_pos: Vec<i64>,
    children: Vec<usize>,
}

fn fold_child(a0: &mut Vec<i64>, apos: &mut Vec<i64>, child: &NodeTables) {
    let budget = a0.len() - 1;
    let mut n0 = vec![NEG; budget + 1];
    let mut npos = vec![NEG; budget + 1];
    for b in 0..=budget {
        for s in 0..=b {
            let rest = b - s;
            if a0[rest] > NEG && child.best[s] > NEG {
                n0[b] = n0[b].max(a0[rest] + child.best[s]);
            }
            if apos[rest] > NEG && child.best[s] > NEG {
                npos[b] = npos[b].max(apos[rest] + child.best[s]);
            }
            if a0[rest] > NEG && child.best_pos[s] > NEG {
                npos[b] = npos[b].max(a0[rest] + child.best_pos[s]);
            }
        }
    }
    *a0 = n0;
    *apos = npos;
}

fn children_fold(
    tables: &BTreeMap<usize, NodeTables>,
    children: &[usize],
    budget: usize,
) -> (Vec<i64>, Vec<i64>) {
    let mut a0 = vec![0i64; budget + 1];
    let mut apos = vec![NEG; budget + 1];
    for &c in children {
        fold_child(&mut a0, &mut apos, &tables[&c]);
    }
    (a0, apos)
}

fn knapsack_tables(
    g: &ContactGraph,
    v: usize,
    budget: usize,
    out: &mut BTreeMap<usize, NodeTables>,
) {
    let children = g.children(v);
    for &c in &children {
        knapsack_tables(g, c, budget, out);
    }
    let (a0, apos) = children_fold(out, &children, budget);
    let lam = g.nodes[v].lambda_total() as i64;
    let mut best_pos = vec![NEG; budget + 1];
    for b in 0..=budget {
        let mut cand = apos[b];
        if let Some(w) = g.nodes[v].weight {
            let w = w as usize;
            if w <= b && a0[b - w] > NEG {
                cand = cand.max(a0[b - w]);
            }
        }
        if cand > NEG {
            best_pos[b] = cand + lam;
        }
    }
    let best = (0..=budget).map(|b| best_pos[b].max(0)).collect();
    out.insert(v, NodeTables { best, best_pos, children });
}

/// Walks the DP tables back to the chosen sink set. `want` is the value the
/// subtree of `v` must contribute under budget `b`; `need_pos` forces at
/// least one sink below (or at) `v`.
fn recover_sinks(
    g: &ContactGraph,
    tables: &BTreeMap<usize, NodeTables>,
    v: usize,
    b: usize,
    need_pos: bool,
    want: i64,
    sinks: &mut Vec<usize>,
) {
    let t = &tables[&v];
    if !need_pos && want == 0 {
        return; // the empty selection explains a zero value
    }
    debug_assert_eq!(if need_pos { t.best_pos[b] } else { t.best[b] }, want);
    let lam = g.nodes[v].lambda_total() as i64;
    let children_target = want - lam;
    let budget = t.best.len() - 1;
    let (a0, apos) = children_fold(tables, &t.children, budget);
    // prefer explaining via children-only; fall back to selecting v as a sink
    if apos[b] > NEG && apos[b] == children_target {
        split_children(g, tables, &t.children, b, true, children_target, sinks);
        return;
    }
    if let Some(w) = g.nodes[v].weight {
        let w = w as usize;
        if w <= b && a0[b - w] > NEG && a0[b - w] == children_target {
            sinks.push(v);
            split_children(g, tables, &t.children, b - w, false, children_target, sinks);
            return;
        }
    }
    unreachable!("dp reconstruction lost the optimum");
}

/// Splits budget `b` across `children` to reproduce `target` (the recorded
/// fold value); `need_pos` forces at least one child subtree to hold a sink.
fn split_children(
    g: &ContactGraph,
    tables: &BTreeMap<usize, NodeTables>,
    children: &[usize],
    b: usize,
    need_pos: bool,
    target: i64,
    sinks: &mut Vec<usize>,
) {
    if children.is_empty() {
        debug_assert!(!need_pos && target == 0);
        return;
    }
    let budget = tables[&children[0]].best.len() - 1;
    let head = &children[..children.len() - 1];
    let last = children[children.len() - 1];
    let (h0, hpos) = children_fold(tables, head, budget);
    let lt = &tables[&last];
    for s in 0..=b {
        let rest = b - s;
        if need_pos {
            if hpos[rest] > NEG && lt.best[s] > NEG && hpos[rest] + lt.best[s] == target {
                if lt.best[s] > 0 {
                    recover_sinks(g, tables, last, s, false, lt.best[s], sinks);
                }
                split_children(g, tables, head, rest, true, hpos[rest], sinks);
                return;
            }
            if h0[rest] > NEG && lt.best_pos[s] > NEG && h0[rest] + lt.best_pos[s] == target {
                recover_sinks(g, tables, last, s, true, lt.best_pos[s], sinks);
                split_children(g, tables, head, rest, false, h0[rest], sinks);
                return;
            }
        } else if h0[rest] > NEG && lt.best[s] > NEG && h0[rest] + lt.best[s] == target {
            if lt.best[s] > 0 {
                recover_sinks(g, tables, last, s, false, lt.best[s], sinks);
            }
            split_children(g, tables, head, rest, false, h0[rest], sinks);
            return;
        }
    }
    unreachable!("child split must reproduce the fold value");
}

/// Optimal knapsack path packing on an out-forest: choose root-to-sink paths
/// (any node may be a sink) paying `w'(sink)` each, total at most `budget`;
/// the value counts every node with a selected sink in its subtree once.
pub fn solve_wknappp(g: &ContactGraph, budget: u64) -> Result<PathPacking, PathPackError> {
    if g.kind != GraphKind::Forest {
        return Err(PathPackError::Precondition("solve_wknappp needs a forest".into()));
    }
    g.assert_out_forest()
        .map_err(|e| PathPackError::Precondition(e.to_string()))?;
    // the DP convolves per-child tables of size budget+1
    let budget_usize = usize::try_from(budget)
        .ok()
        .filter(|&b| b <= 2_000)
        .ok_or_else(|| {
            PathPackError::Precondition(format!("budget {budget} too large for the DP table"))
        })?;
    let mut tables = BTreeMap::new();
    let roots = g.roots();
    for &r in &roots {
        knapsack_tables(g, r, budget_usize, &mut tables);
    }
    let (a0, _) = children_fold(&tables, &roots, budget_usize);
    let total = a0[budget_usize];
    let mut sinks = Vec::new();
    split_children(g, &tables, &roots, budget_usize, false, total, &mut sinks);

    sinks.sort_unstable();
    let paths: Vec<Vec<usize>> = sinks.iter().map(|&v| g.root_path(v)).collect();
    let value = packing_value(g, &paths);
    let budget_used: u64 = sinks
        .iter()
        .map(|&v| g.nodes[v].weight.expect("sinks have finite weight"))
        .sum();
    debug_assert!(budget_used <= budget);
    debug_assert_eq!(value.iter().sum::<u64>() as i64, total);
    Ok(PathPacking { paths, value, budget_used })
}

// ---------------------------------------------------------------------------
// colorful mode: LP over leaf/internal variables + extreme-point rounding
// ---------------------------------------------------------------------------

/// A vertex of the colorful path-packing LP.
#[derive(Debug, Clone)]
pub struct WckppVertex {
    /// Leaf node index -> y value.
    pub y: BTreeMap<usize, Rat>,
    /// Internal node index -> z value.
    pub z: BTreeMap<usize, Rat>,
    pub objective: Rat,
    /// Leaves with 0 < y < 1.
    pub fractional_leaves: Vec<usize>,
}

/// The colorful path-packing LP: y per leaf, z per internal node, color-1
/// value in the objective, coverage rows for colors 2..=c, subtree rows
/// `z_v <= sum of leaf y below v`, and the path budget `sum y <= k`.
pub fn build_wckpp_lp(
    g: &ContactGraph,
    requirements: &[u64],
    k: u64,
) -> (LpProblem, Vec<VarId>) {
    assert_eq!(g.kind, GraphKind::Forest, "wckpp lp needs a forest");
    let colors = requirements.len();
    let leaves: BTreeSet<usize> = g.leaves().into_iter().collect();
    let mut p = LpProblem::new(Direction::Maximize);
    let mut var_of: Vec<VarId> = Vec::with_capacity(g.nodes.len());
    for v in 0..g.nodes.len() {
        let name = if leaves.contains(&v) {
            format!("y_{v}")
        } else {
            format!("z_{v}")
        };
        var_of.push(p.add_var(name, Rat::zero(), Some(Rat::one())));
    }
    for v in 0..g.nodes.len() {
        let coeff = int_u(g.nodes[v].lambda.first().copied().unwrap_or(0));
        if !coeff.is_zero() {
            p.set_objective(var_of[v], coeff);
        }
    }
    for color in 1..colors {
        let mut row = Vec::new();
        for v in 0..g.nodes.len() {
            let lam = g.nodes[v].lambda.get(color).copied().unwrap_or(0);
            if lam > 0 {
                row.push((var_of[v], int_u(lam)));
            }
        }
        p.add_row(row, Relation::Ge, int_u(requirements[color]))
            .expect("valid row");
    }
    for v in 0..g.nodes.len() {
        if leaves.contains(&v) {
            continue;
        }
        let mut row = vec![(var_of[v], Rat::one())];
        for u in g.subtree(v) {
            if leaves.contains(&u) {
                row.push((var_of[u], -Rat::one()));
            }
        }
        p.add_row(row, Relation::Le, Rat::zero()).expect("valid row");
    }
    let budget_row: Vec<(VarId, Rat)> = leaves.iter().map(|&v| (var_of[v], Rat::one())).collect();
    p.add_row(budget_row, Relation::Le, int_u(k)).expect("valid row");
    (p, var_of)
}

/// Solves the LP to a vertex and checks the fractional-leaf bound `<= 2c`.
pub fn solve_wckpp(
    g: &ContactGraph,
    requirements: &[u64],
    k: u64,
) -> Result<WckppVertex, PathPackError> {
    if g.nodes.is_empty() {
        return Err(PathPackError::Infeasible("empty forest".into()));
    }
    let (p, var_of) = build_wckpp_lp(g, requirements, k);
    let sol = solve_lp(&p);
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => {
            return Err(PathPackError::Infeasible("wckpp lp infeasible".into()))
        }
        LpStatus::Unbounded => {
            return Err(PathPackError::InvariantViolation(
                "box-constrained lp cannot be unbounded".into(),
            ))
        }
    }
    let leaves: BTreeSet<usize> = g.leaves().into_iter().collect();
    let mut y = BTreeMap::new();
    let mut z = BTreeMap::new();
    let mut fractional = Vec::new();
    for v in 0..g.nodes.len() {
        let val = sol.assignment[var_of[v].0].clone();
        if leaves.contains(&v) {
            if val.is_positive() && val < Rat::one() {
                fractional.push(v);
            }
            y.insert(v, val);
        } else {
            z.insert(v, val);
        }
    }
    let colors = requirements.len();
    if fractional.len() > 2 * colors {
        return Err(PathPackError::InvariantViolation(format!(
            "{} fractional leaves exceeds 2c = {}",
            fractional.len(),
            2 * colors
        )));
    }
    Ok(WckppVertex {
        y,
        z,
        objective: sol.objective_value,
        fractional_leaves: fractional,
    })
}

/// Rounds a vertex: every leaf with positive y is selected; the packing is
/// the set of root-to-leaf paths of selected leaves. Path count is at most
/// `k + 2c - 1` and the per-color value dominates the LP's.
pub fn round_wckpp(
    sol: &WckppVertex,
    g: &ContactGraph,
    colors: usize,
    k: u64,
) -> Result<PathPacking, PathPackError> {
    if sol.fractional_leaves.len() > 2 * colors {
        return Err(PathPackError::InvariantViolation(format!(
            "{} fractional leaves exceeds 2c = {}",
            sol.fractional_leaves.len(),
            2 * colors
        )));
    }
    let selected: Vec<usize> = sol
        .y
        .iter()
        .filter(|(_, v)| v.is_positive())
        .map(|(&l, _)| l)
        .collect();
    let limit = k + 2 * colors as u64 - 1;
    if selected.len() as u64 > limit {
        return Err(PathPackError::InvariantViolation(format!(
            "rounded path count {} exceeds k + 2c - 1 = {}",
            selected.len(),
            limit
        )));
    }
    let paths: Vec<Vec<usize>> = selected.iter().map(|&l| g.root_path(l)).collect();
    let value = packing_value(g, &paths);
    Ok(PathPacking {
        paths,
        value,
        budget_used: selected.len() as u64,
    })
}

/// Splits every height-1 tree with two or more leaves into (root, best leaf)
/// plus singletons, preserving total lambda. Requires two colors with
/// lambda_2 = 0 on every non-root node.
pub fn split_depth2_forest(g: &ContactGraph) -> Result<ContactGraph, PathPackError> {
    if g.kind != GraphKind::Forest {
        return Err(PathPackError::Precondition("split needs a forest".into()));
    }
    for e in &g.edges {
        if g.parent(e.from).is_some() {
            return Err(PathPackError::Precondition(
                "split needs trees of height at most 1".into(),
            ));
        }
        if g.nodes[e.to].lambda.get(1).copied().unwrap_or(0) != 0 {
            return Err(PathPackError::Precondition(
                "leaves must carry no second-color value".into(),
            ));
        }
    }
    let mut edges: Vec<ContactEdge> = Vec::new();
    for root in g.roots() {
        let children = g.children(root);
        if children.is_empty() {
            continue;
        }
        let keep = children
            .iter()
            .copied()
            .max_by(|&a, &b| {
                let la = g.nodes[a].lambda.first().copied().unwrap_or(0);
                let lb = g.nodes[b].lambda.first().copied().unwrap_or(0);
                la.cmp(&lb).then_with(|| b.cmp(&a)) // ties: smaller node index
            })
            .unwrap();
        edges.push(
            g.edge_between(root, keep)
                .expect("edge to kept leaf")
                .clone(),
        );
    }
    Ok(ContactGraph {
        kind: GraphKind::Forest,
        nodes: g.nodes.clone(),
        edges,
    })
}

/// Builds a synthetic graph for tests and oracles.
pub fn synthetic_graph(
    kind: GraphKind,
    lambdas: Vec<Vec<u64>>,
    weights: Vec<Option<u64>>,
    edges: Vec<(usize, usize)>,
    layer_pos: Vec<usize>,
) -> ContactGraph {
    let nodes = lambdas
        .into_iter()
        .zip(weights)
        .enumerate()
        .map(|(i, (lambda, weight))| crate::contact::ContactNode {
            client: i,
            layer_pos: layer_pos.get(i).copied().unwrap_or(0),
            class_index: layer_pos.get(i).copied().unwrap_or(0) + 1,
            radius: Rat::one(),
            lambda,
            weight,
            cluster: vec![i],
        })
        .collect();
    let edges = edges
        .into_iter()
        .map(|(from, to)| ContactEdge {
            from,
            to,
            witness: EdgeWitness::Facility(0),
        })
        .collect();
    ContactGraph { kind, nodes, edges }
}
