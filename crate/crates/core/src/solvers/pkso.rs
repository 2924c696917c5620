//! Cardinality-constrained solvers: the uniform-radius warm-up, the general
//! layered algorithm, and the structured-radii specializations.

use std::collections::BTreeSet;

use num_traits::One;

use crate::contact::{build_contact_dag, middle_edge_of_path, MiddleChoice};
use crate::filtering::{build_layer_plan, filter, ClusterFamily, LayerMode, LayerPlan};
use crate::instance::Instance;
use crate::pathpack::solve_wkpp;
use crate::rational::{int, rat, Rat};

use super::{
    decision_search, natural_lp_cov, DecisionProcedure, RoundOutput, ScaledInstance, Solution,
    SolveError, TraceEntry,
};

fn require_single_color(inst: &Instance, algo: &str) -> Result<(), SolveError> {
    if inst.colors != 1 {
        return Err(SolveError::Precondition(format!(
            "{algo} requires a single color, instance has {}",
            inst.colors
        )));
    }
    Ok(())
}

fn distinct_radii(inst: &Instance) -> Vec<Rat> {
    let set: BTreeSet<Rat> = inst.clients.iter().map(|c| c.radius.clone()).collect();
    set.into_iter().collect()
}

/// Runs filter (slack 0) on every layer, builds the contact DAG, packs k
/// paths, and opens one facility per path at the middle.
fn layered_dag_round(
    view: &ScaledInstance,
    plan: &LayerPlan,
    cov: &[Rat],
) -> Result<RoundOutput, SolveError> {
    let inst = view.inst;
    let families: Vec<ClusterFamily> = (0..plan.t())
        .map(|p| filter(inst, plan.layer(p), &view.radii, cov, &Rat::from_integer(0.into())))
        .collect();
    let dag = build_contact_dag(plan, &families, inst, &view.radii);
    let packing = solve_wkpp(&dag, inst.k).map_err(|e| SolveError::InvariantViolation(e.to_string()))?;
    if packing.total_value() < inst.requirements[0] {
        return Err(SolveError::InvariantViolation(format!(
            "packing covers {} clients but m = {} at a feasible alpha",
            packing.total_value(),
            inst.requirements[0]
        )));
    }
    let mut opened = BTreeSet::new();
    let mut claimed = BTreeSet::new();
    let mut trace = Vec::new();
    for path in &packing.paths {
        let (facility, rule) = match middle_edge_of_path(path, &dag, plan.boundary)? {
            MiddleChoice::StraddleEdge { upper, lower } => {
                let edge = dag
                    .edge_between(upper, lower)
                    .ok_or_else(|| SolveError::InvariantViolation("path edge missing".into()))?;
                match &edge.witness {
                    crate::contact::EdgeWitness::Facility(f) => (*f, "middle-edge"),
                    crate::contact::EdgeWitness::DistanceBound(_) => {
                        return Err(SolveError::InvariantViolation(
                            "dag edge without facility witness".into(),
                        ))
                    }
                }
            }
            MiddleChoice::Endpoint(node) => {
                let rep = dag.nodes[node].client;
                let f = view.smallest_facility_within(rep).ok_or_else(|| {
                    SolveError::InvariantViolation(format!(
                        "representative {} has no facility in range",
                        inst.clients[rep].id
                    ))
                })?;
                (f, "endpoint")
            }
        };
        opened.insert(facility);
        for &node in path {
            claimed.extend(dag.nodes[node].cluster.iter().copied());
        }
        trace.push(TraceEntry {
            path: path
                .iter()
                .map(|&n| inst.clients[dag.nodes[n].client].id.clone())
                .collect(),
            facility: inst.facilities[facility].id.clone(),
            rule: rule.into(),
        });
    }
    Ok(RoundOutput { opened, claimed, trace })
}

// ---------------------------------------------------------------------------

struct KSupplierOutliers;

impl DecisionProcedure for KSupplierOutliers {
    fn name(&self) -> &'static str {
        "ksupplier-outliers"
    }

    fn probe(&mut self, view: &ScaledInstance) -> Result<bool, SolveError> {
        Ok(natural_lp_cov(view).is_some())
    }

    fn round(&mut self, view: &ScaledInstance) -> Result<RoundOutput, SolveError> {
        let inst = view.inst;
        let cov = natural_lp_cov(view)
            .ok_or_else(|| SolveError::InvariantViolation("round at infeasible alpha".into()))?;
        let family = filter(inst, &view.active, &view.radii, &cov, &int(0));
        // k largest clusters, ties by representative id
        let mut reps = family.representatives.clone();
        reps.sort_by(|&a, &b| {
            family
                .cluster_of(b)
                .len()
                .cmp(&family.cluster_of(a).len())
                .then_with(|| inst.clients[a].id.cmp(&inst.clients[b].id))
        });
        reps.truncate(inst.k as usize);
        let mut opened = BTreeSet::new();
        let mut claimed = BTreeSet::new();
        let mut trace = Vec::new();
        let mut covered = 0u64;
        for rep in reps {
            let f = view.smallest_facility_within(rep).ok_or_else(|| {
                SolveError::InvariantViolation("representative without facility".into())
            })?;
            opened.insert(f);
            covered += family.cluster_of(rep).len() as u64;
            claimed.extend(family.cluster_of(rep).iter().copied());
            trace.push(TraceEntry {
                path: vec![inst.clients[rep].id.clone()],
                facility: inst.facilities[f].id.clone(),
                rule: "largest-clusters".into(),
            });
        }
        if covered < inst.requirements[0] {
            return Err(SolveError::InvariantViolation(format!(
                "top-{} clusters cover {covered} < m = {}",
                inst.k, inst.requirements[0]
            )));
        }
        Ok(RoundOutput { opened, claimed, trace })
    }
}

/// 3-approximation for k-supplier with outliers (single color, uniform
/// radii): pick the k largest filtered clusters.
pub fn solve_ksupplier_outliers(inst: &Instance) -> Result<Solution, SolveError> {
    require_single_color(inst, "ksupplier-outliers")?;
    if distinct_radii(inst).len() > 1 {
        return Err(SolveError::Precondition(
            "ksupplier-outliers requires uniform radii".into(),
        ));
    }
    decision_search(inst, &mut KSupplierOutliers)
}

// ---------------------------------------------------------------------------

/// Layer classes to use at a given alpha.
enum PlanSpec {
    /// Radius classes with the given squared base, alternating order.
    Geometric(Rat),
    /// Explicit partition of the radius values into classes (ascending by
    /// radius); class membership by radius value.
    ByRadius(Vec<Vec<Rat>>),
}

struct LayeredPkso {
    name: &'static str,
    spec: PlanSpec,
}

impl LayeredPkso {
    fn plan(&self, view: &ScaledInstance) -> LayerPlan {
        match &self.spec {
            PlanSpec::Geometric(base_sq) => {
                build_layer_plan(&view.radii, &view.active, base_sq, LayerMode::Alternating)
            }
            PlanSpec::ByRadius(groups) => {
                // classes keyed by ORIGINAL radius values (scale-invariant)
                let classes: Vec<Vec<usize>> = groups
                    .iter()
                    .map(|group| {
                        view.active
                            .iter()
                            .copied()
                            .filter(|&v| group.contains(&view.inst.clients[v].radius))
                            .collect()
                    })
                    .collect();
                LayerPlan::from_classes(classes, int(4), LayerMode::Alternating)
            }
        }
    }
}

impl DecisionProcedure for LayeredPkso {
    fn name(&self) -> &'static str {
        self.name
    }

    fn probe(&mut self, view: &ScaledInstance) -> Result<bool, SolveError> {
        Ok(natural_lp_cov(view).is_some())
    }

    fn round(&mut self, view: &ScaledInstance) -> Result<RoundOutput, SolveError> {
        let cov = natural_lp_cov(view)
            .ok_or_else(|| SolveError::InvariantViolation("round at infeasible alpha".into()))?;
        let plan = self.plan(view);
        layered_dag_round(view, &plan, &cov)
    }
}

/// The general single-color algorithm: sqrt(3)-spaced radius classes placed
/// alternately around the smallest class, contact DAG, k-path packing, one
/// facility per path at the middle. Guarantee 1 + 3*sqrt(3).
pub fn solve_pkso(inst: &Instance) -> Result<Solution, SolveError> {
    require_single_color(inst, "pkso")?;
    decision_search(
        inst,
        &mut LayeredPkso {
            name: "pkso",
            spec: PlanSpec::Geometric(int(3)),
        },
    )
}

/// Specialization for radii that are exact powers of a rational b > 1:
/// classes are the exact powers and the guarantee tightens to
/// (3b^2-1)/(b^2-1).
pub fn solve_pkso_powers_of_b(inst: &Instance, b: &Rat) -> Result<Solution, SolveError> {
    require_single_color(inst, "pkso-powers")?;
    if b <= &Rat::one() {
        return Err(SolveError::Precondition(format!(
            "power base must exceed 1, got {b}"
        )));
    }
    let r_min = inst
        .clients
        .iter()
        .map(|c| &c.radius)
        .min()
        .cloned()
        .ok_or_else(|| SolveError::Precondition("instance has no clients".into()))?;
    for c in &inst.clients {
        let mut x = &c.radius / &r_min;
        let mut steps = 0;
        while x > Rat::one() && steps < 4096 {
            x /= b;
            steps += 1;
        }
        if !x.is_one() {
            return Err(SolveError::Precondition(format!(
                "radius {} of client `{}` is not r_min * {b}^j",
                c.radius, c.id
            )));
        }
    }
    decision_search(
        inst,
        &mut LayeredPkso {
            name: "pkso-powers",
            spec: PlanSpec::Geometric(b * b),
        },
    )
}

/// Two distinct radii: two exact layers, shared facility per path edge,
/// guarantee exactly 3.
pub fn solve_pkso_two_radii(inst: &Instance) -> Result<Solution, SolveError> {
    require_single_color(inst, "pkso-2radii")?;
    let radii = distinct_radii(inst);
    if radii.len() != 2 {
        return Err(SolveError::Precondition(format!(
            "pkso-2radii requires exactly two distinct radii, found {}",
            radii.len()
        )));
    }
    let groups = vec![vec![radii[0].clone()], vec![radii[1].clone()]];
    decision_search(
        inst,
        &mut LayeredPkso {
            name: "pkso-2radii",
            spec: PlanSpec::ByRadius(groups),
        },
    )
}

/// The three worst-case ratios of the three-radii partitions, as exact
/// rationals: full three-layer split, merge-top, merge-bottom.
pub fn three_radii_bounds(alpha_ratio: &Rat, beta_ratio: &Rat) -> (Rat, Rat, Rat) {
    let three_layer = int(3) + int(2) / (alpha_ratio * beta_ratio);
    let merge_top = Rat::one() + int(2) * beta_ratio;
    let merge_bottom = Rat::one() + int(2) * alpha_ratio;
    (three_layer, merge_top, merge_bottom)
}

/// Three distinct radii r0 < r1 < r2: evaluates the three partition bounds
/// with alpha = r1/r0, beta = r2/r1 and runs the minimizing layering; the
/// minimum never exceeds 3.94.
pub fn solve_pkso_three_radii(inst: &Instance) -> Result<Solution, SolveError> {
    require_single_color(inst, "pkso-3radii")?;
    let radii = distinct_radii(inst);
    if radii.len() != 3 {
        return Err(SolveError::Precondition(format!(
            "pkso-3radii requires exactly three distinct radii, found {}",
            radii.len()
        )));
    }
    let alpha_ratio = &radii[1] / &radii[0];
    let beta_ratio = &radii[2] / &radii[1];
    let (b_three, b_top, b_bottom) = three_radii_bounds(&alpha_ratio, &beta_ratio);
    debug_assert!(
        [&b_three, &b_top, &b_bottom].iter().any(|b| **b <= rat(197, 50)),
        "the minimum of the three bounds stays below 3.94"
    );
    let r0 = vec![radii[0].clone()];
    let r1 = vec![radii[1].clone()];
    let r2 = vec![radii[2].clone()];
    // ties prefer the full three-layer split, then merge-top
    let groups = if b_three <= b_top && b_three <= b_bottom {
        vec![r0, r1, r2]
    } else if b_top <= b_bottom {
        vec![r0, [r1, r2].concat()]
    } else {
        vec![[r0, r1].concat(), r2]
    };
    decision_search(
        inst,
        &mut LayeredPkso {
            name: "pkso-3radii",
            spec: PlanSpec::ByRadius(groups),
        },
    )
}
