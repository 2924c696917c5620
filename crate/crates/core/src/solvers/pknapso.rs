//! Knapsack-constrained solver: the configuration polytope of feasible
//! facility sets is accessed either explicitly (small |F|) or through a
//! round-or-cut loop; a coverage point is rounded through the out-forest
//! pipeline and the knapsack path-packing DP.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::instance::Instance;
use crate::lp::{solve_lp, Direction, LpProblem, LpStatus, Relation};
use crate::pathpack::{solve_wknappp, PathPacking};
use crate::rational::{int_u, Rat};

use super::{
    decision_search, DecisionProcedure, RoundOutput, ScaledInstance, Solution, SolveError,
    TraceEntry,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnapsackBackend {
    /// Enumerate the maximal knapsack-feasible facility sets and solve the
    /// configuration LP directly. Guarded to |F| <= 15; the rounding then
    /// succeeds in one shot.
    Explicit,
    /// Round-or-cut: a master LP over coverage vectors accumulates
    /// separating cuts until the rounding succeeds or the master empties.
    CuttingPlane { iteration_cap: usize },
}

impl Default for KnapsackBackend {
    fn default() -> Self {
        KnapsackBackend::CuttingPlane { iteration_cap: 500 }
    }
}

/// All knapsack-feasible facility sets that cannot absorb another facility.
/// Restricting the configuration LP to these loses nothing: moving mass to a
/// superset only improves coverage.
fn maximal_feasible_sets(inst: &Instance) -> Result<Vec<Vec<usize>>, SolveError> {
    let nf = inst.n_facilities();
    if nf > 15 {
        return Err(SolveError::Precondition(format!(
            "explicit backend enumerates facility sets; |F| = {nf} exceeds 15 \
             (use the cutting-plane backend)"
        )));
    }
    let weight = |mask: u32| -> u64 {
        (0..nf)
            .filter(|f| mask >> f & 1 == 1)
            .map(|f| inst.facilities[f].weight)
            .sum()
    };
    let mut sets = Vec::new();
    for mask in 0u32..(1u32 << nf) {
        if weight(mask) > inst.k {
            continue;
        }
        let maximal = (0..nf).all(|f| mask >> f & 1 == 1 || weight(mask | 1 << f) > inst.k);
        if maximal {
            sets.push((0..nf).filter(|f| mask >> f & 1 == 1).collect());
        }
    }
    Ok(sets)
}

/// Feasibility of the explicit configuration LP; on success returns the
/// coverage point, a genuine member of the configuration polytope.
fn explicit_cov(view: &ScaledInstance) -> Result<Option<Vec<Rat>>, SolveError> {
    let inst = view.inst;
    let sets = maximal_feasible_sets(inst)?;
    let mut p = LpProblem::new(Direction::Feasibility);
    let z: Vec<_> = (0..sets.len())
        .map(|i| p.add_var(format!("z_{i}"), Rat::zero(), Some(Rat::one())))
        .collect();
    let cov: Vec<(usize, crate::lp::VarId)> = view
        .active
        .iter()
        .map(|&v| (v, p.add_var(format!("cov_{v}"), Rat::zero(), Some(Rat::one()))))
        .collect();
    p.add_row(
        z.iter().map(|&zi| (zi, Rat::one())).collect(),
        Relation::Le,
        Rat::one(),
    )
    .unwrap();
    for &(v, cv) in &cov {
        let mut row = vec![(cv, Rat::one())];
        let in_range = view.facilities_within(v);
        for (i, set) in sets.iter().enumerate() {
            if set.iter().any(|f| in_range.contains(f)) {
                row.push((z[i], -Rat::one()));
            }
        }
        p.add_row(row, Relation::Le, Rat::zero()).unwrap();
    }
    p.add_row(
        cov.iter().map(|&(_, cv)| (cv, Rat::one())).collect(),
        Relation::Ge,
        int_u(inst.requirements[0]),
    )
    .unwrap();
    let sol = solve_lp(&p);
    match sol.status {
        LpStatus::Optimal => {
            let mut out = vec![Rat::zero(); inst.n_clients()];
            for &(v, cv) in &cov {
                out[v] = sol.assignment[cv.0].clone();
            }
            Ok(Some(out))
        }
        _ => Ok(None),
    }
}

struct RoundedForest {
    packing: PathPacking,
    forest: crate::contact::ContactGraph,
}

/// One pass of the forest pipeline + knapsack DP on a coverage point.
fn try_round(view: &ScaledInstance, cov: &[Rat]) -> Result<Result<RoundedForest, Vec<u64>>, SolveError> {
    let inst = view.inst;
    let (_plan, forest) = super::forest_pipeline(view, cov)?;
    let packing =
        solve_wknappp(&forest, inst.k).map_err(|e| SolveError::InvariantViolation(e.to_string()))?;
    if packing.total_value() >= inst.requirements[0] {
        Ok(Ok(RoundedForest { packing, forest }))
    } else {
        // the separating coefficients: |D(v)| on representatives, 0 elsewhere
        let mut lambda = vec![0u64; inst.n_clients()];
        for node in &forest.nodes {
            lambda[node.client] = node.lambda_total();
        }
        Ok(Err(lambda))
    }
}

/// Opens, per path, the cheapest facility within the sink's radius.
fn open_packing(
    view: &ScaledInstance,
    rounded: &RoundedForest,
) -> Result<RoundOutput, SolveError> {
    let inst = view.inst;
    let mut opened = BTreeSet::new();
    let mut claimed = BTreeSet::new();
    let mut trace = Vec::new();
    for path in &rounded.packing.paths {
        let sink = *path.last().expect("nonempty path");
        let rep = rounded.forest.nodes[sink].client;
        let f = view.cheapest_facility_within(rep).ok_or_else(|| {
            SolveError::InvariantViolation(format!(
                "sink {} has no facility in range",
                inst.clients[rep].id
            ))
        })?;
        opened.insert(f);
        for &node in path {
            claimed.extend(rounded.forest.nodes[node].cluster.iter().copied());
        }
        trace.push(TraceEntry {
            path: path
                .iter()
                .map(|&n| inst.clients[rounded.forest.nodes[n].client].id.clone())
                .collect(),
            facility: inst.facilities[f].id.clone(),
            rule: "sink-min-weight".into(),
        });
    }
    Ok(RoundOutput { opened, claimed, trace })
}

enum LoopOutcome {
    Feasible(Vec<Rat>),
    Infeasible,
}

/// The round-or-cut loop: master LP over coverage vectors in [0,1]^C with
/// the coverage row and accumulated cuts. A failed rounding proves (via the
/// path-packing optimum) that every genuine coverage point satisfies
/// `sum lambda(v) cov(v) <= m - 1`, which the current master point violates,
/// so each cut strictly excludes it.
fn cutting_plane_loop(
    view: &ScaledInstance,
    iteration_cap: usize,
) -> Result<LoopOutcome, SolveError> {
    let inst = view.inst;
    let m = inst.requirements[0];
    let mut cuts: Vec<Vec<u64>> = Vec::new();
    for _ in 0..iteration_cap {
        let mut p = LpProblem::new(Direction::Feasibility);
        let cov: Vec<(usize, crate::lp::VarId)> = view
            .active
            .iter()
            .map(|&v| (v, p.add_var(format!("cov_{v}"), Rat::zero(), Some(Rat::one()))))
            .collect();
        p.add_row(
            cov.iter().map(|&(_, cv)| (cv, Rat::one())).collect(),
            Relation::Ge,
            int_u(m),
        )
        .unwrap();
        for cut in &cuts {
            let row: Vec<_> = cov
                .iter()
                .filter(|&&(v, _)| cut[v] > 0)
                .map(|&(v, cv)| (cv, int_u(cut[v])))
                .collect();
            p.add_row(row, Relation::Le, int_u(m) - Rat::one()).unwrap();
        }
        let sol = solve_lp(&p);
        let point = match sol.status {
            LpStatus::Optimal => {
                let mut out = vec![Rat::zero(); inst.n_clients()];
                for &(v, cv) in &cov {
                    out[v] = sol.assignment[cv.0].clone();
                }
                out
            }
            _ => return Ok(LoopOutcome::Infeasible),
        };
        match try_round(view, &point)? {
            Ok(_) => return Ok(LoopOutcome::Feasible(point)),
            Err(lambda) => cuts.push(lambda),
        }
    }
    Err(SolveError::Undecided {
        iterations: iteration_cap,
    })
}

struct Pknapso {
    backend: KnapsackBackend,
    /// Coverage point found by the last successful probe, keyed by alpha.
    cache: Option<(Rat, Vec<Rat>)>,
}

impl Pknapso {
    fn cov_at(&mut self, view: &ScaledInstance) -> Result<Option<Vec<Rat>>, SolveError> {
        match self.backend {
            KnapsackBackend::Explicit => explicit_cov(view),
            KnapsackBackend::CuttingPlane { iteration_cap } => {
                match cutting_plane_loop(view, iteration_cap)? {
                    LoopOutcome::Feasible(cov) => Ok(Some(cov)),
                    LoopOutcome::Infeasible => Ok(None),
                }
            }
        }
    }
}

impl DecisionProcedure for Pknapso {
    fn name(&self) -> &'static str {
        "pknapso"
    }

    fn probe(&mut self, view: &ScaledInstance) -> Result<bool, SolveError> {
        match self.cov_at(view)? {
            Some(cov) => {
                self.cache = Some((view.alpha.clone(), cov));
                Ok(true)
            }
            None => Ok(false),
        }
    }

    fn round(&mut self, view: &ScaledInstance) -> Result<RoundOutput, SolveError> {
        let cov = match self.cache.take() {
            Some((alpha, cov)) if alpha == view.alpha => cov,
            _ => self
                .cov_at(view)?
                .ok_or_else(|| SolveError::InvariantViolation("round at infeasible alpha".into()))?,
        };
        match try_round(view, &cov)? {
            Ok(rounded) => {
                debug_assert!(rounded.packing.budget_used <= view.inst.k);
                open_packing(view, &rounded)
            }
            Err(_) => match self.backend {
                // a configuration-LP point admits a one-shot rounding; a
                // failure here is a bug, never a retry
                KnapsackBackend::Explicit => Err(SolveError::InvariantViolation(
                    "rounding failed on a configuration-polytope point".into(),
                )),
                KnapsackBackend::CuttingPlane { .. } => Err(SolveError::InvariantViolation(
                    "cutting-plane probe returned a point whose rounding fails".into(),
                )),
            },
        }
    }
}

/// Knapsack-constrained priority supplier with outliers, guarantee 17.
pub fn solve_pknapso(inst: &Instance, backend: KnapsackBackend) -> Result<Solution, SolveError> {
    if inst.colors != 1 {
        return Err(SolveError::Precondition(format!(
            "pknapso requires a single color, instance has {}",
            inst.colors
        )));
    }
    if let KnapsackBackend::Explicit = backend {
        maximal_feasible_sets(inst)?; // guard early
    }
    decision_search(inst, &mut Pknapso { backend, cache: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::line_instance;
    use crate::rational::int;
    use crate::oracle::{brute_force_opt, ConstraintKind};
    use crate::solvers::BoundTag;

    #[test]
    fn zero_weights_reduce_to_unbounded_centers() {
        let inst = line_instance(
            &[(0, int(1), 1), (10, int(1), 1)],
            &[(2, 0), (12, 0)],
            1,
            0, // budget 0, but facilities are free
            vec![2],
        )
        .unwrap();
        let sol = solve_pknapso(&inst, KnapsackBackend::Explicit).unwrap();
        assert_eq!(sol.weight_used, 0);
        assert_eq!(sol.covered_per_color, vec![2]);
        assert_eq!(sol.alpha, int(2));
    }

    #[test]
    fn single_affordable_facility_covering_everything() {
        let inst = line_instance(
            &[(0, int(2), 1), (1, int(2), 1), (2, int(2), 1)],
            &[(1, 3)],
            1,
            3,
            vec![3],
        )
        .unwrap();
        for backend in [
            KnapsackBackend::Explicit,
            KnapsackBackend::CuttingPlane { iteration_cap: 100 },
        ] {
            let sol = solve_pknapso(&inst, backend).unwrap();
            assert_eq!(sol.opened, vec![0]);
            assert!(sol.weight_used <= 3);
            let oracle = brute_force_opt(&inst, ConstraintKind::Knapsack).unwrap();
            assert!(BoundTag::Seventeen.check(&sol.realized_ratio, &oracle.optimal_alpha));
        }
    }

    #[test]
    fn budget_forces_the_cheap_facility() {
        // near facility too heavy, far facility affordable
        let inst = line_instance(
            &[(0, int(1), 1)],
            &[(1, 9), (4, 1)],
            1,
            2,
            vec![1],
        )
        .unwrap();
        let sol = solve_pknapso(&inst, KnapsackBackend::Explicit).unwrap();
        assert_eq!(sol.opened, vec![1]);
        assert_eq!(sol.alpha, int(4));
        assert_eq!(sol.weight_used, 1);
    }

    #[test]
    fn infeasible_when_everything_is_too_heavy() {
        let inst = line_instance(&[(0, int(1), 1)], &[(1, 5)], 1, 2, vec![1]).unwrap();
        assert!(matches!(
            solve_pknapso(&inst, KnapsackBackend::Explicit),
            Err(SolveError::Infeasible { .. })
        ));
        assert!(matches!(
            solve_pknapso(&inst, KnapsackBackend::CuttingPlane { iteration_cap: 50 }),
            Err(SolveError::Infeasible { .. })
        ));
    }

    #[test]
    fn zero_iteration_cap_is_undecided_not_wrong() {
        let inst = line_instance(&[(0, int(1), 1)], &[(1, 1)], 1, 2, vec![1]).unwrap();
        assert!(matches!(
            solve_pknapso(&inst, KnapsackBackend::CuttingPlane { iteration_cap: 0 }),
            Err(SolveError::Undecided { .. })
        ));
    }

    #[test]
    fn backends_agree_on_threshold_alpha() {
        let inst = line_instance(
            &[
                (0, int(1), 1),
                (3, int(2), 1),
                (9, int(1), 1),
                (14, int(4), 1),
            ],
            &[(1, 2), (8, 1), (13, 3)],
            1,
            3,
            vec![3],
        )
        .unwrap();
        let a = solve_pknapso(&inst, KnapsackBackend::Explicit).unwrap();
        let b = solve_pknapso(&inst, KnapsackBackend::CuttingPlane { iteration_cap: 200 }).unwrap();
        assert_eq!(a.alpha, b.alpha);
        assert!(a.weight_used <= inst.k && b.weight_used <= inst.k);
    }
}
