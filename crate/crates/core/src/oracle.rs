//! Exhaustive ground-truth solvers, used by tests and the `compare` command.
//! Deliberately a separate implementation path from the solvers: no shared
//! coverage code.

use num_traits::Zero;
use thiserror::Error;

use crate::contact::{ContactGraph, GraphKind};
use crate::instance::Instance;
use crate::rational::Rat;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("oracle guard exceeded: {0}")]
    Guard(String),
    #[error("no facility subset meets the requirements: {0}")]
    Infeasible(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    /// |S| <= k
    Cardinality,
    /// total facility weight <= k
    Knapsack,
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub optimal_alpha: Rat,
    /// A facility subset attaining the optimum.
    pub witness: Vec<usize>,
    /// Subsets examined.
    pub enumerated: u64,
}

/// Smallest alpha achievable by any feasible facility subset: for each
/// subset, each color needs its m_i-th smallest ratio d(v,S)/r_v; the
/// subset's alpha is the max over colors, and the result is the min over
/// subsets. Exact rational comparisons throughout.
pub fn brute_force_opt(
    inst: &Instance,
    constraint: ConstraintKind,
) -> Result<OracleResult, OracleError> {
    let nf = inst.n_facilities();
    if nf > 20 {
        return Err(OracleError::Guard(format!(
            "{nf} facilities exceeds the enumeration guard of 20"
        )));
    }
    let classes = inst.color_classes();
    let mut best: Option<(Rat, Vec<usize>)> = None;
    let mut enumerated = 0u64;
    for mask in 0u32..(1u32 << nf) {
        let subset: Vec<usize> = (0..nf).filter(|f| mask >> f & 1 == 1).collect();
        let feasible = match constraint {
            ConstraintKind::Cardinality => subset.len() as u64 <= inst.k,
            ConstraintKind::Knapsack => {
                subset.iter().map(|&f| inst.facilities[f].weight).sum::<u64>() <= inst.k
            }
        };
        if !feasible {
            continue;
        }
        enumerated += 1;
        let mut alpha = Rat::zero();
        let mut ok = true;
        for (i, class) in classes.iter().enumerate() {
            let m = inst.requirements[i] as usize;
            if m == 0 {
                continue;
            }
            if subset.is_empty() || class.len() < m {
                ok = false;
                break;
            }
            let mut ratios: Vec<Rat> = class
                .iter()
                .map(|&v| {
                    let d = subset
                        .iter()
                        .map(|&f| inst.d_cf(v, f))
                        .min()
                        .expect("nonempty subset");
                    d / &inst.clients[v].radius
                })
                .collect();
            ratios.sort();
            let needed = ratios[m - 1].clone();
            if needed > alpha {
                alpha = needed;
            }
        }
        if !ok {
            continue;
        }
        let better = match &best {
            None => true,
            Some((cur, _)) => alpha < *cur,
        };
        if better {
            best = Some((alpha, subset));
        }
    }
    match best {
        Some((optimal_alpha, witness)) => Ok(OracleResult {
            optimal_alpha,
            witness,
            enumerated,
        }),
        None => Err(OracleError::Infeasible(format!(
            "no subset of {nf} facilities satisfies the requirements"
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PackingMode {
    /// budget = path count (DAG).
    Count,
    /// budget = total sink weight (forest).
    Weight,
}

/// Exact optimum of the path-packing problems by subset enumeration:
/// count mode enumerates sets of at most `budget` maximal paths of the DAG;
/// weight mode enumerates sink sets over all nodes with total weight within
/// budget, counting a node when a sink lies in its subtree.
pub fn brute_force_path_packing(
    g: &ContactGraph,
    budget: u64,
    mode: PackingMode,
) -> Result<u64, OracleError> {
    match mode {
        PackingMode::Count => {
            let paths = maximal_paths(g);
            if paths.len() > 12 {
                return Err(OracleError::Guard(format!(
                    "{} maximal paths exceeds the enumeration guard of 12",
                    paths.len()
                )));
            }
            let take = (budget as usize).min(paths.len());
            let mut best = 0u64;
            for mask in 0u32..(1u32 << paths.len()) {
                if (mask.count_ones() as usize) > take {
                    continue;
                }
                let mut covered = vec![false; g.nodes.len()];
                for (i, path) in paths.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        for &v in path {
                            covered[v] = true;
                        }
                    }
                }
                let value: u64 = covered
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c)
                    .map(|(v, _)| g.nodes[v].lambda_total())
                    .sum();
                best = best.max(value);
            }
            Ok(best)
        }
        PackingMode::Weight => {
            if g.kind != GraphKind::Forest {
                return Err(OracleError::Guard("weight mode needs a forest".into()));
            }
            let n = g.nodes.len();
            if n > 18 {
                return Err(OracleError::Guard(format!(
                    "{n} nodes exceeds the enumeration guard of 18"
                )));
            }
            let mut best = 0u64;
            for mask in 0u32..(1u32 << n) {
                let sinks: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
                let weight: Option<u64> = sinks
                    .iter()
                    .map(|&v| g.nodes[v].weight)
                    .try_fold(0u64, |acc, w| w.map(|w| acc + w));
                match weight {
                    Some(w) if w <= budget => {}
                    _ => continue,
                }
                let mut covered = vec![false; n];
                for &s in &sinks {
                    for v in g.root_path(s) {
                        covered[v] = true;
                    }
                }
                let value: u64 = covered
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c)
                    .map(|(v, _)| g.nodes[v].lambda_total())
                    .sum();
                best = best.max(value);
            }
            Ok(best)
        }
    }
}

/// All maximal directed paths of the DAG (every path is a subpath of one).
fn maximal_paths(g: &ContactGraph) -> Vec<Vec<usize>> {
    let n = g.nodes.len();
    let has_incoming: Vec<bool> = (0..n)
        .map(|v| g.edges.iter().any(|e| e.to == v))
        .collect();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..n)
        .filter(|&v| !has_incoming[v])
        .map(|v| vec![v])
        .collect();
    while let Some(path) = stack.pop() {
        let last = *path.last().unwrap();
        let next = g.children(last);
        if next.is_empty() {
            out.push(path);
        } else {
            for c in next {
                let mut ext = path.clone();
                ext.push(c);
                stack.push(ext);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::line_instance;
    use crate::pathpack::synthetic_graph;
    use crate::rational::{int, rat};

    #[test]
    fn open_everything_when_k_large() {
        let inst = line_instance(
            &[(0, int(1), 1), (10, int(2), 1)],
            &[(2, 1), (9, 1)],
            1,
            2,
            vec![2],
        )
        .unwrap();
        let res = brute_force_opt(&inst, ConstraintKind::Cardinality).unwrap();
        // with both facilities: ratios are 2/1 and 1/2; second smallest is 2
        assert_eq!(res.optimal_alpha, int(2));
        assert_eq!(res.witness.len(), 2);
    }

    #[test]
    fn zero_requirements_mean_zero_alpha() {
        let inst = line_instance(&[(0, int(1), 1)], &[(5, 1)], 1, 1, vec![0]).unwrap();
        let res = brute_force_opt(&inst, ConstraintKind::Cardinality).unwrap();
        assert_eq!(res.optimal_alpha, int(0));
    }

    #[test]
    fn six_point_line_hand_check() {
        // clients 0,1,3 (r=1), facilities 7,8,20, k=1, m=3:
        // f@7 -> max ratio 7; f@8 -> 8; f@20 -> 20. Optimum 7.
        let inst = line_instance(
            &[(0, int(1), 1), (1, int(1), 1), (3, int(1), 1)],
            &[(7, 1), (8, 1), (20, 1)],
            1,
            1,
            vec![3],
        )
        .unwrap();
        let res = brute_force_opt(&inst, ConstraintKind::Cardinality).unwrap();
        assert_eq!(res.optimal_alpha, int(7));
        assert_eq!(res.witness, vec![0]);
        // optimum is a candidate alpha
        assert!(inst.candidate_alphas().contains(&res.optimal_alpha));
    }

    #[test]
    fn knapsack_constraint_restricts_subsets() {
        let inst = line_instance(
            &[(0, int(1), 1)],
            &[(1, 5), (3, 1)],
            1,
            1, // budget 1: only the far facility is affordable
            vec![1],
        )
        .unwrap();
        let res = brute_force_opt(&inst, ConstraintKind::Knapsack).unwrap();
        assert_eq!(res.optimal_alpha, int(3));
        assert_eq!(res.witness, vec![1]);
    }

    #[test]
    fn infeasible_when_k_zero_and_m_positive() {
        let inst = line_instance(&[(0, int(1), 1)], &[(1, 1)], 1, 0, vec![1]).unwrap();
        assert!(matches!(
            brute_force_opt(&inst, ConstraintKind::Cardinality),
            Err(OracleError::Infeasible(_))
        ));
    }

    #[test]
    fn fractional_radii_are_exact() {
        let inst = line_instance(&[(0, rat(2, 3), 1)], &[(1, 1)], 1, 1, vec![1]).unwrap();
        let res = brute_force_opt(&inst, ConstraintKind::Cardinality).unwrap();
        assert_eq!(res.optimal_alpha, rat(3, 2));
    }

    #[test]
    fn empty_graph_packs_zero() {
        let g = synthetic_graph(GraphKind::Dag, vec![], vec![], vec![], vec![]);
        assert_eq!(brute_force_path_packing(&g, 3, PackingMode::Count).unwrap(), 0);
    }

    #[test]
    fn diamond_dag_matches_flow_example() {
        let g = synthetic_graph(
            GraphKind::Dag,
            vec![vec![1], vec![10], vec![10], vec![1]],
            vec![Some(1); 4],
            vec![(0, 1), (0, 2), (1, 3), (2, 3)],
            vec![2, 1, 1, 0],
        );
        assert_eq!(brute_force_path_packing(&g, 2, PackingMode::Count).unwrap(), 22);
    }

    #[test]
    fn star_forest_weight_mode() {
        let g = synthetic_graph(
            GraphKind::Forest,
            vec![vec![5], vec![3], vec![4]],
            vec![Some(10), Some(1), Some(1)],
            vec![(0, 1), (0, 2)],
            vec![1, 0, 0],
        );
        assert_eq!(brute_force_path_packing(&g, 1, PackingMode::Weight).unwrap(), 9);
        assert_eq!(brute_force_path_packing(&g, 2, PackingMode::Weight).unwrap(), 12);
    }
}
