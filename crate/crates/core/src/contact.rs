//! Contact graphs over layer representatives: the shared-facility DAG used by
//! the cardinality pipelines, and the distance-rule out-forest used by the
//! knapsack and colorful pipelines.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::filtering::{ClusterFamily, LayerPlan};
use crate::instance::Instance;
use crate::rational::{int, pow_u, Rat};

#[derive(Debug, Error)]
pub enum ContactError {
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("precondition violation: {0}")]
    Precondition(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeWitness {
    /// A facility covering both endpoints within their radii.
    Facility(usize),
    /// The distance bound `r_u + r_v + unit*4^j` the edge satisfied.
    DistanceBound(Rat),
}

#[derive(Debug, Clone)]
pub struct ContactEdge {
    /// Node indices; `from` sits at a strictly higher layer position.
    pub from: usize,
    pub to: usize,
    pub witness: EdgeWitness,
}

#[derive(Debug, Clone)]
pub struct ContactNode {
    /// Representative client index.
    pub client: usize,
    /// Position of the representative's layer in the plan order.
    pub layer_pos: usize,
    /// 1-based radius class index (drives the 4^j slack in forest mode).
    pub class_index: usize,
    /// Scaled radius of the representative.
    pub radius: Rat,
    /// Per-color cluster cardinalities: lambda_i = |D(v) ∩ C_i|.
    pub lambda: Vec<u64>,
    /// Minimum facility weight within the radius; None when no facility is
    /// in range (the node cannot be a path sink).
    pub weight: Option<u64>,
    /// The cluster D(v), client indices.
    pub cluster: Vec<usize>,
}

impl ContactNode {
    pub fn lambda_total(&self) -> u64 {
        self.lambda.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Dag,
    Forest,
}

#[derive(Debug, Clone)]
pub struct ContactGraph {
    pub kind: GraphKind,
    pub nodes: Vec<ContactNode>,
    pub edges: Vec<ContactEdge>,
}

impl ContactGraph {
    pub fn children(&self, node: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter(|e| e.from == node)
            .map(|e| e.to)
            .collect();
        out.sort_unstable();
        out
    }

    pub fn parent(&self, node: usize) -> Option<usize> {
        self.edges.iter().find(|e| e.to == node).map(|e| e.from)
    }

    pub fn edge_between(&self, from: usize, to: usize) -> Option<&ContactEdge> {
        self.edges.iter().find(|e| e.from == from && e.to == to)
    }

    /// Roots: nodes with no incoming edge (forest mode).
    pub fn roots(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&v| self.parent(v).is_none())
            .collect()
    }

    /// Leaves: nodes with no outgoing edge. An isolated node is a leaf.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&v| !self.edges.iter().any(|e| e.from == v))
            .collect()
    }

    /// Every node reachable from `v` through edges, `v` included.
    pub fn subtree(&self, v: usize) -> Vec<usize> {
        let mut stack = vec![v];
        let mut out = Vec::new();
        while let Some(u) = stack.pop() {
            out.push(u);
            stack.extend(self.children(u));
        }
        out.sort_unstable();
        out
    }

    /// Path from the root of `v`'s tree down to `v` (forest mode).
    pub fn root_path(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    pub fn assert_out_forest(&self) -> Result<(), ContactError> {
        let mut indeg = vec![0usize; self.nodes.len()];
        for e in &self.edges {
            indeg[e.to] += 1;
        }
        if let Some(v) = indeg.iter().position(|&d| d > 1) {
            return Err(ContactError::InvariantViolation(format!(
                "contact forest has in-degree {} at node {} (client idx {})",
                indeg[v], v, self.nodes[v].client
            )));
        }
        Ok(())
    }

    /// Node-per-line, edge-per-line text dump for inspection.
    pub fn dump(&self, inst: &Instance) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        for (i, n) in self.nodes.iter().enumerate() {
            writeln!(
                s,
                "node {} {} layer={} class={} lambda={:?}",
                i, inst.clients[n.client].id, n.layer_pos, n.class_index, n.lambda
            )
            .unwrap();
        }
        for e in &self.edges {
            let w = match &e.witness {
                EdgeWitness::Facility(f) => inst.facilities[*f].id.clone(),
                EdgeWitness::DistanceBound(b) => format!("d<={b}"),
            };
            writeln!(s, "edge {} -> {} [{}]", e.from, e.to, w).unwrap();
        }
        s
    }
}

fn collect_nodes(
    plan: &LayerPlan,
    families: &[ClusterFamily],
    inst: &Instance,
    radii: &[Rat],
) -> Vec<ContactNode> {
    let mut nodes = Vec::new();
    for (pos, family) in families.iter().enumerate() {
        let class_index = plan.order[pos];
        for &rep in &family.representatives {
            let cluster = family.cluster_of(rep).to_vec();
            let mut lambda = vec![0u64; inst.colors];
            for &u in &cluster {
                lambda[inst.clients[u].color - 1] += 1;
            }
            let weight = (0..inst.n_facilities())
                .filter(|&f| inst.d_cf(rep, f) <= &radii[rep])
                .map(|f| inst.facilities[f].weight)
                .min();
            nodes.push(ContactNode {
                client: rep,
                layer_pos: pos,
                class_index,
                radius: radii[rep].clone(),
                lambda,
                weight,
                cluster,
            });
        }
    }
    nodes
}

/// Shared-facility contact DAG: an edge from a higher-position node to a
/// lower-position node whenever one facility covers both representatives
/// within their (scaled) radii; the witness is the smallest such facility id.
///
/// `families[p]` must be the slack-0 filter output for the layer at plan
/// position `p`; `radii` are the scaled radii indexed by client.
pub fn build_contact_dag(
    plan: &LayerPlan,
    families: &[ClusterFamily],
    inst: &Instance,
    radii: &[Rat],
) -> ContactGraph {
    let nodes = collect_nodes(plan, families, inst, radii);
    let mut edges = Vec::new();
    for (a, na) in nodes.iter().enumerate() {
        for (b, nb) in nodes.iter().enumerate() {
            if na.layer_pos <= nb.layer_pos {
                continue;
            }
            let witness = (0..inst.n_facilities())
                .filter(|&f| {
                    inst.d_cf(na.client, f) <= &na.radius && inst.d_cf(nb.client, f) <= &nb.radius
                })
                .min_by(|&x, &y| inst.facilities[x].id.cmp(&inst.facilities[y].id));
            if let Some(f) = witness {
                edges.push(ContactEdge {
                    from: a,
                    to: b,
                    witness: EdgeWitness::Facility(f),
                });
            }
        }
    }
    ContactGraph {
        kind: GraphKind::Dag,
        nodes,
        edges,
    }
}

/// Distance-rule contact forest over an ascending base-4 plan: the edge rule
/// for `u` in class `i`, `v` in class `j < i` is
/// `d(u,v) <= r_u + r_v + unit*4^j`; forward edges (an alternative u-to-v
/// path with at least two edges) are then removed simultaneously. The result
/// must be a directed out-forest — anything else is surfaced as an invariant
/// violation.
pub fn build_contact_forest(
    plan: &LayerPlan,
    families: &[ClusterFamily],
    inst: &Instance,
    radii: &[Rat],
    unit: &Rat,
) -> Result<ContactGraph, ContactError> {
    let nodes = collect_nodes(plan, families, inst, radii);
    let n = nodes.len();
    let mut adj = vec![vec![false; n]; n];
    let mut witness = BTreeMap::new();
    for (a, na) in nodes.iter().enumerate() {
        for (b, nb) in nodes.iter().enumerate() {
            if na.class_index <= nb.class_index {
                continue;
            }
            let bound = &na.radius + &nb.radius + unit * pow_u(&int(4), nb.class_index as u32);
            if inst.d_cc(na.client, nb.client) <= &bound {
                adj[a][b] = true;
                witness.insert((a, b), bound);
            }
        }
    }
    // reachability over the full edge set
    let mut reach = adj.clone();
    for m in 0..n {
        for a in 0..n {
            if reach[a][m] {
                for b in 0..n {
                    if reach[m][b] {
                        reach[a][b] = true;
                    }
                }
            }
        }
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if !adj[a][b] {
                continue;
            }
            let forward = (0..n).any(|m| m != a && m != b && adj[a][m] && reach[m][b]);
            if !forward {
                edges.push(ContactEdge {
                    from: a,
                    to: b,
                    witness: EdgeWitness::DistanceBound(witness[&(a, b)].clone()),
                });
            }
        }
    }
    let g = ContactGraph {
        kind: GraphKind::Forest,
        nodes,
        edges,
    };
    g.assert_out_forest()?;
    Ok(g)
}

/// Where a DAG path opens its facility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MiddleChoice {
    /// The consecutive pair straddling the boundary: `upper` at position
    /// >= boundary, `lower` below it.
    StraddleEdge { upper: usize, lower: usize },
    /// The whole path lies on one side; open at the endpoint nearest the
    /// boundary.
    Endpoint(usize),
}

/// Layer positions strictly decrease along `path` (a directed DAG path). With
/// `boundary = ceil(t/2)` this realizes the facility-in-the-middle rule: for
/// even t the edge leaving the smallest class downward, for odd t the edge
/// entering it from above.
pub fn middle_edge_of_path(
    path: &[usize],
    g: &ContactGraph,
    boundary: usize,
) -> Result<MiddleChoice, ContactError> {
    if path.is_empty() {
        return Err(ContactError::Precondition("empty path".into()));
    }
    let pos = |i: usize| g.nodes[path[i]].layer_pos;
    for w in path.windows(2) {
        if g.nodes[w[0]].layer_pos <= g.nodes[w[1]].layer_pos {
            return Err(ContactError::Precondition(
                "path positions must strictly decrease".into(),
            ));
        }
    }
    if pos(path.len() - 1) >= boundary {
        // everything at or above the boundary: last node is closest
        return Ok(MiddleChoice::Endpoint(path[path.len() - 1]));
    }
    if pos(0) < boundary {
        return Ok(MiddleChoice::Endpoint(path[0]));
    }
    for i in 0..path.len() - 1 {
        if pos(i) >= boundary && pos(i + 1) < boundary {
            return Ok(MiddleChoice::StraddleEdge {
                upper: path[i],
                lower: path[i + 1],
            });
        }
    }
    unreachable!("strictly decreasing positions must straddle the boundary");
}
