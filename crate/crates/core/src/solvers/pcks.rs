//! Colorful solvers: the general pseudo-approximation over the out-forest
//! pipeline, and the tighter two-color uniform-radius variant.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::contact::{ContactEdge, ContactGraph, ContactNode, EdgeWitness, GraphKind};
use crate::filtering::{filter, ClusterFamily};
use crate::instance::Instance;
use crate::pathpack::{round_wckpp, solve_wckpp, split_depth2_forest, PathPackError, PathPacking};
use crate::rational::{int, Rat};

use super::{
    decision_search, natural_lp_cov, DecisionProcedure, RoundOutput, ScaledInstance, Solution,
    SolveError, TraceEntry,
};

// a feasible natural relaxation always yields a feasible packing LP, so any
// failure here is a bug to surface, never a retry
fn map_pack_err(e: PathPackError) -> SolveError {
    SolveError::InvariantViolation(e.to_string())
}

/// Opens a smallest-id facility within the leaf radius for every selected
/// leaf; claims every cluster on the root-to-leaf paths.
fn open_leaf_paths(
    view: &ScaledInstance,
    forest: &ContactGraph,
    packing: &PathPacking,
    rule: &str,
) -> Result<RoundOutput, SolveError> {
    let inst = view.inst;
    let mut opened = BTreeSet::new();
    let mut claimed = BTreeSet::new();
    let mut trace = Vec::new();
    for path in &packing.paths {
        let leaf = *path.last().expect("nonempty path");
        let rep = forest.nodes[leaf].client;
        let f = view.smallest_facility_within(rep).ok_or_else(|| {
            SolveError::InvariantViolation(format!(
                "selected leaf {} has no facility in range",
                inst.clients[rep].id
            ))
        })?;
        opened.insert(f);
        for &node in path {
            claimed.extend(forest.nodes[node].cluster.iter().copied());
        }
        trace.push(TraceEntry {
            path: path
                .iter()
                .map(|&n| inst.clients[forest.nodes[n].client].id.clone())
                .collect(),
            facility: inst.facilities[f].id.clone(),
            rule: rule.into(),
        });
    }
    Ok(RoundOutput { opened, claimed, trace })
}

fn check_packing_meets(
    packing: &PathPacking,
    requirements: &[u64],
) -> Result<(), SolveError> {
    for (i, (&have, &need)) in packing.value.iter().zip(requirements).enumerate() {
        if have < need {
            return Err(SolveError::InvariantViolation(format!(
                "rounded packing covers {have} of color {} but m = {need}",
                i + 1
            )));
        }
    }
    Ok(())
}

struct Pcks;

impl DecisionProcedure for Pcks {
    fn name(&self) -> &'static str {
        "pcks"
    }

    fn probe(&mut self, view: &ScaledInstance) -> Result<bool, SolveError> {
        Ok(natural_lp_cov(view).is_some())
    }

    fn round(&mut self, view: &ScaledInstance) -> Result<RoundOutput, SolveError> {
        let inst = view.inst;
        let cov = natural_lp_cov(view)
            .ok_or_else(|| SolveError::InvariantViolation("round at infeasible alpha".into()))?;
        let (_plan, forest) = super::forest_pipeline(view, &cov)?;
        let vertex = solve_wckpp(&forest, &inst.requirements, inst.k).map_err(map_pack_err)?;
        let packing =
            round_wckpp(&vertex, &forest, inst.colors, inst.k).map_err(map_pack_err)?;
        check_packing_meets(&packing, &inst.requirements)?;
        let limit = inst.k + 2 * inst.colors as u64 - 1;
        if packing.paths.len() as u64 > limit {
            return Err(SolveError::InvariantViolation(format!(
                "{} paths exceed k + 2c - 1 = {limit}",
                packing.paths.len()
            )));
        }
        open_leaf_paths(view, &forest, &packing, "leaf-cover")
    }
}

/// Colorful priority supplier: guarantee 17 using at most k + 2c - 1 centers.
pub fn solve_pcks(inst: &Instance) -> Result<Solution, SolveError> {
    decision_search(inst, &mut Pcks)
}

// ---------------------------------------------------------------------------

/// Two colors, one radius per color. `perm[0]` is the 0-based index of the
/// smaller-radius color; the packing LP sees colors in that order.
struct Upcks {
    perm: [usize; 2],
}

impl Upcks {
    fn permuted_lambda(&self, inst: &Instance, cluster: &[usize]) -> Vec<u64> {
        let mut lambda = vec![0u64; 2];
        for &u in cluster {
            let orig = inst.clients[u].color - 1;
            let slot = self.perm.iter().position(|&p| p == orig).unwrap();
            lambda[slot] += 1;
        }
        lambda
    }

    fn node_from(
        &self,
        view: &ScaledInstance,
        family: &ClusterFamily,
        rep: usize,
        layer_pos: usize,
    ) -> ContactNode {
        let cluster = family.cluster_of(rep).to_vec();
        ContactNode {
            client: rep,
            layer_pos,
            class_index: layer_pos + 1,
            radius: view.radii[rep].clone(),
            lambda: self.permuted_lambda(view.inst, &cluster),
            weight: None,
            cluster,
        }
    }
}

impl DecisionProcedure for Upcks {
    fn name(&self) -> &'static str {
        "upcks2"
    }

    fn probe(&mut self, view: &ScaledInstance) -> Result<bool, SolveError> {
        Ok(natural_lp_cov(view).is_some())
    }

    fn round(&mut self, view: &ScaledInstance) -> Result<RoundOutput, SolveError> {
        let inst = view.inst;
        let cov = natural_lp_cov(view)
            .ok_or_else(|| SolveError::InvariantViolation("round at infeasible alpha".into()))?;
        let small_color = self.perm[0] + 1;
        let big_color = self.perm[1] + 1;
        let r_small = &inst
            .clients
            .iter()
            .find(|c| c.color == small_color)
            .map(|c| &c.radius * &view.alpha)
            .unwrap_or_else(Rat::zero);
        let r_big = &inst
            .clients
            .iter()
            .find(|c| c.color == big_color)
            .map(|c| &c.radius * &view.alpha)
            .unwrap_or_else(Rat::zero);
        let requirements = [
            inst.requirements[self.perm[0]],
            inst.requirements[self.perm[1]],
        ];

        // branch on r_big <= golden_ratio * r_small via squaring:
        // 2*r_big - r_small <= sqrt(5) * r_small
        let shifted = int(2) * r_big - r_small;
        let close_radii =
            !shifted.is_positive() || &shifted * &shifted <= int(5) * r_small * r_small;

        let (forest, rule) = if close_radii {
            // joint filter, every representative an isolated node
            let family = filter(inst, &view.active, &view.radii, &cov, &Rat::zero());
            let nodes: Vec<ContactNode> = family
                .representatives
                .iter()
                .map(|&rep| self.node_from(view, &family, rep, 0))
                .collect();
            (
                ContactGraph { kind: GraphKind::Forest, nodes, edges: Vec::new() },
                "joint-singleton",
            )
        } else {
            // separate filters; widened merge rule on the big-radius color
            let small_clients = view.active_of_color(small_color);
            let big_clients = view.active_of_color(big_color);
            let fam_small = filter(inst, &small_clients, &view.radii, &cov, &Rat::zero());
            let slack = int(2) * r_small;
            let fam_big = filter(inst, &big_clients, &view.radii, &cov, &slack);
            let mut nodes = Vec::new();
            let mut big_idx = Vec::new();
            for &rep in &fam_big.representatives {
                big_idx.push(nodes.len());
                nodes.push(self.node_from(view, &fam_big, rep, 1));
            }
            let mut small_idx = Vec::new();
            for &rep in &fam_small.representatives {
                small_idx.push(nodes.len());
                nodes.push(self.node_from(view, &fam_small, rep, 0));
            }
            let mut edges = Vec::new();
            for &u in &big_idx {
                for &v in &small_idx {
                    let witness = (0..inst.n_facilities())
                        .filter(|&f| {
                            inst.d_cf(nodes[u].client, f) <= &nodes[u].radius
                                && inst.d_cf(nodes[v].client, f) <= &nodes[v].radius
                        })
                        .min_by(|&x, &y| inst.facilities[x].id.cmp(&inst.facilities[y].id));
                    if let Some(f) = witness {
                        edges.push(ContactEdge { from: u, to: v, witness: EdgeWitness::Facility(f) });
                    }
                }
            }
            let g = ContactGraph { kind: GraphKind::Forest, nodes, edges };
            // two roots sharing a leaf would contradict the widened filter
            g.assert_out_forest()?;
            let split = split_depth2_forest(&g).map_err(map_pack_err)?;
            (split, "tree-witness")
        };

        let vertex = solve_wckpp(&forest, &requirements, inst.k).map_err(map_pack_err)?;
        let packing = round_wckpp(&vertex, &forest, 2, inst.k).map_err(map_pack_err)?;
        check_packing_meets(&packing, &requirements)?;
        if packing.paths.len() as u64 > inst.k + 1 {
            return Err(SolveError::InvariantViolation(format!(
                "{} paths exceed k + 1 = {}",
                packing.paths.len(),
                inst.k + 1
            )));
        }

        if rule == "joint-singleton" {
            return open_leaf_paths(view, &forest, &packing, rule);
        }
        // pair trees open the shared-facility witness; singletons open the
        // smallest facility within their own radius
        let inst = view.inst;
        let mut opened = BTreeSet::new();
        let mut claimed = BTreeSet::new();
        let mut trace = Vec::new();
        for path in &packing.paths {
            let leaf = *path.last().expect("nonempty path");
            let f = if path.len() == 2 {
                let edge = forest
                    .edge_between(path[0], leaf)
                    .ok_or_else(|| SolveError::InvariantViolation("pair edge missing".into()))?;
                match edge.witness {
                    EdgeWitness::Facility(f) => f,
                    EdgeWitness::DistanceBound(_) => {
                        return Err(SolveError::InvariantViolation(
                            "pair edge lacks a facility witness".into(),
                        ))
                    }
                }
            } else {
                let rep = forest.nodes[leaf].client;
                view.smallest_facility_within(rep).ok_or_else(|| {
                    SolveError::InvariantViolation(format!(
                        "selected singleton {} has no facility in range",
                        inst.clients[rep].id
                    ))
                })?
            };
            opened.insert(f);
            for &node in path {
                claimed.extend(forest.nodes[node].cluster.iter().copied());
            }
            trace.push(TraceEntry {
                path: path
                    .iter()
                    .map(|&n| inst.clients[forest.nodes[n].client].id.clone())
                    .collect(),
                facility: inst.facilities[f].id.clone(),
                rule: if path.len() == 2 { "tree-witness" } else { "singleton" }.into(),
            });
        }
        Ok(RoundOutput { opened, claimed, trace })
    }
}

/// Two-color uniform-radius colorful supplier: guarantee 2 + sqrt(5) using
/// at most k + 1 centers.
pub fn solve_upcks_two_colors(inst: &Instance) -> Result<Solution, SolveError> {
    if inst.colors != 2 {
        return Err(SolveError::Precondition(format!(
            "upcks2 requires exactly two colors, instance has {}",
            inst.colors
        )));
    }
    let mut radius_of = [None, None];
    for c in &inst.clients {
        let slot = &mut radius_of[c.color - 1];
        match slot {
            None => *slot = Some(c.radius.clone()),
            Some(r) if *r == c.radius => {}
            Some(_) => {
                return Err(SolveError::Precondition(format!(
                    "upcks2 requires one radius per color; color {} mixes radii",
                    c.color
                )))
            }
        }
    }
    let r1 = radius_of[0].clone().unwrap_or_else(|| int(1));
    let r2 = radius_of[1].clone().unwrap_or_else(|| int(1));
    let perm = if r1 <= r2 { [0, 1] } else { [1, 0] };
    decision_search(inst, &mut Upcks { perm })
}
