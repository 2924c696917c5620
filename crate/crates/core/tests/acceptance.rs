//! Acceptance suite: every guarantee the solvers advertise, exercised on
//! randomized desk-scale instances against exhaustive oracles, with exact
//! rational comparisons (zero tolerance). One pass line per criterion.

use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use priosup::contact::{ContactGraph, GraphKind};
use priosup::filtering::{build_layer_plan, filter, LayerMode};
use priosup::instance::{generate_random, GeneratorConfig, Geometry, RadiusMode};
use priosup::lp::{rank_of_tight_set, solve_lp, Direction, LpProblem, LpStatus, Relation};
use priosup::oracle::{
    brute_force_opt, brute_force_path_packing, ConstraintKind, OracleError, PackingMode,
};
use priosup::pathpack::{solve_wckpp, solve_wknappp, solve_wkpp, synthetic_graph, PathPackError};
use priosup::rational::{int, pow_u, rat, Rat};
use priosup::solvers::{
    solve_ksupplier_outliers, solve_pcks, solve_pknapso, solve_pkso, solve_pkso_powers_of_b,
    solve_pkso_three_radii, solve_pkso_two_radii, solve_upcks_two_colors, BoundTag,
    KnapsackBackend, SolveError,
};

fn pass(criterion: &str, detail: String, started: Instant) {
    println!(
        "criterion {criterion}: PASS — {detail} ({:.2}s)",
        started.elapsed().as_secs_f64()
    );
}

fn grid_config(rng: &mut ChaCha8Rng, colors: usize, radii: RadiusMode) -> GeneratorConfig {
    GeneratorConfig {
        clients: rng.gen_range(6..=18),
        facilities: rng.gen_range(3..=6),
        colors,
        k: rng.gen_range(1..=4),
        geometry: Geometry::Grid {
            span: rng.gen_range(8..=30),
        },
        radii,
        requirement_fractions: vec![rat(1, 2); colors],
        weight_max: None,
    }
}

// -------------------------------------------------------------------------
// 1. Filter invariant suite: 500 random (instance, cov) pairs, slack 0 and 4^i.
// -------------------------------------------------------------------------
#[test]
fn acceptance_01_filter_invariants() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut checked = 0usize;
    for seed in 0..500u64 {
        let config = grid_config(
            &mut rng,
            1,
            RadiusMode::Set(vec![int(1), int(2), int(5), int(30), int(100)]),
        );
        let inst = generate_random(&config, seed).unwrap();
        let radii: Vec<Rat> = inst.clients.iter().map(|c| c.radius.clone()).collect();
        let denom = [4i64, 8, 16][rng.gen_range(0..3)];
        let cov: Vec<Rat> = (0..inst.n_clients())
            .map(|_| rat(rng.gen_range(0..=denom), denom))
            .collect();
        let all: Vec<usize> = (0..inst.n_clients()).collect();

        let mut jobs: Vec<(Vec<usize>, Rat)> = vec![(all.clone(), int(0))];
        let plan = build_layer_plan(&radii, &all, &int(16), LayerMode::Ascending);
        for p in 0..plan.t() {
            let slack = &plan.unit * pow_u(&int(4), plan.order[p] as u32);
            jobs.push((plan.layer(p).to_vec(), slack));
        }
        for (clients, slack) in jobs {
            let fam = filter(&inst, &clients, &radii, &cov, &slack);
            // (a) partition
            let mut union: Vec<usize> = fam.clusters.values().flatten().copied().collect();
            union.sort_unstable();
            let mut expect = clients.clone();
            expect.sort_unstable();
            assert_eq!(union, expect, "clusters must partition the input");
            // (b) separation between representatives
            for &u in &fam.representatives {
                for &v in &fam.representatives {
                    if u != v {
                        assert!(
                            inst.d_cc(u, v) > &(&radii[u] + &radii[v] + &slack),
                            "separation failed (seed {seed})"
                        );
                    }
                }
            }
            // (c) membership radius and cov dominance
            for &v in &fam.representatives {
                for &u in fam.cluster_of(v) {
                    assert!(inst.d_cc(u, v) <= &(&radii[u] + &radii[v] + &slack));
                    assert!(cov[v] >= cov[u]);
                }
            }
            checked += 1;
        }
    }
    pass("1", format!("filter invariants on {checked} filtered families"), started);
}

// -------------------------------------------------------------------------
// 2. k-Supplier with Outliers: realized <= 3 * oracle alpha, 100 instances.
// -------------------------------------------------------------------------
#[test]
fn acceptance_02_ksupplier_outliers_three_approx() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for seed in 0..100u64 {
        let radius = [int(1), int(2), rat(5, 2)][rng.gen_range(0..3)].clone();
        let config = GeneratorConfig {
            clients: rng.gen_range(8..=30),
            facilities: rng.gen_range(3..=8),
            colors: 1,
            k: rng.gen_range(1..=4),
            geometry: Geometry::Grid { span: rng.gen_range(10..=40) },
            radii: RadiusMode::Set(vec![radius]),
            requirement_fractions: vec![rat(1, 2)],
            weight_max: None,
        };
        let inst = generate_random(&config, seed).unwrap();
        let sol = solve_ksupplier_outliers(&inst).unwrap();
        let oracle = brute_force_opt(&inst, ConstraintKind::Cardinality).unwrap();
        assert!(sol.alpha <= oracle.optimal_alpha, "lp threshold exceeds optimum (seed {seed})");
        assert!(
            BoundTag::Three.check(&sol.realized_ratio, &oracle.optimal_alpha),
            "3-approximation violated (seed {seed})"
        );
        assert!(sol.centers_used as u64 <= inst.k);
    }
    pass("2", "100/100 uniform-radius instances within 3x the oracle".into(), started);
}

// -------------------------------------------------------------------------
// 3. PkSO general: (rho - 1)^2 <= 27 against the oracle, 200 instances,
//    and the LP threshold never exceeds the optimum.
// -------------------------------------------------------------------------
#[test]
fn acceptance_03_pkso_general_bound() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for seed in 0..200u64 {
        let config = grid_config(
            &mut rng,
            1,
            RadiusMode::Cycle(vec![int(1), int(2), int(5), int(30), int(100)]),
        );
        let inst = generate_random(&config, seed).unwrap();
        let sol = solve_pkso(&inst).unwrap();
        let oracle = brute_force_opt(&inst, ConstraintKind::Cardinality).unwrap();
        assert!(
            inst.candidate_alphas().binary_search(&oracle.optimal_alpha).is_ok(),
            "oracle optimum must be a candidate alpha (seed {seed})"
        );
        assert!(
            sol.alpha <= oracle.optimal_alpha,
            "lp relaxation must lower-bound the optimum (seed {seed})"
        );
        assert!(
            BoundTag::OnePlusThreeSqrt3.check(&sol.realized_ratio, &oracle.optimal_alpha),
            "(1+3sqrt3)-approximation violated (seed {seed}: realized {} vs alpha {})",
            sol.realized_ratio,
            oracle.optimal_alpha
        );
    }
    pass("3", "200/200 spread-radii instances within (1+3sqrt3)x, lp_alpha <= optimum".into(), started);
}

// -------------------------------------------------------------------------
// 4. Structured radii: two radii at bound 3, three radii at 3.94 with the
//    adversarial ratio regime, powers of 2 at 11/3.
// -------------------------------------------------------------------------
#[test]
fn acceptance_04_structured_radii_bounds() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for seed in 0..100u64 {
        let pair = [
            vec![int(1), int(3)],
            vec![int(2), int(5)],
            vec![rat(1, 2), int(2)],
        ][rng.gen_range(0..3)]
        .clone();
        let config = grid_config(&mut rng, 1, RadiusMode::Cycle(pair));
        let inst = generate_random(&config, seed).unwrap();
        let sol = solve_pkso_two_radii(&inst).unwrap();
        let oracle = brute_force_opt(&inst, ConstraintKind::Cardinality).unwrap();
        assert!(
            BoundTag::Three.check(&sol.realized_ratio, &oracle.optimal_alpha),
            "two-radii bound violated (seed {seed})"
        );
    }
    for seed in 0..100u64 {
        // adversarial regime r1/r0 = r2/r1 in [1.4, 1.6], plus asymmetric
        // ratio pairs that punish a wrong partition choice
        let (ra, rb) = [
            (rat(7, 5), rat(7, 5)),
            (rat(3, 2), rat(3, 2)),
            (rat(8, 5), rat(8, 5)),
            (rat(22, 15), rat(22, 15)),
            (rat(21, 20), rat(9, 5)),
            (rat(9, 5), rat(21, 20)),
            (rat(11, 10), int(6)),
        ][rng.gen_range(0..7)]
        .clone();
        let r0 = int(1);
        let r1 = &r0 * &ra;
        let r2 = &r1 * &rb;
        let config = grid_config(&mut rng, 1, RadiusMode::Cycle(vec![r0, r1, r2]));
        let inst = generate_random(&config, seed).unwrap();
        let sol = solve_pkso_three_radii(&inst).unwrap();
        let oracle = brute_force_opt(&inst, ConstraintKind::Cardinality).unwrap();
        // the minimizing partition's own bound holds, not just 3.94
        let (b_three, b_top, b_bottom) = priosup::solvers::three_radii_bounds(&ra, &rb);
        let chosen = [b_three, b_top, b_bottom].into_iter().min().unwrap();
        assert!(chosen <= rat(197, 50), "the minimum bound must stay below 3.94");
        assert!(
            sol.realized_ratio <= &chosen * &oracle.optimal_alpha,
            "chosen partition bound violated (seed {seed})"
        );
        assert!(
            BoundTag::ThreeNinetyFour.check(&sol.realized_ratio, &oracle.optimal_alpha),
            "three-radii bound violated (seed {seed})"
        );
    }
    for seed in 0..100u64 {
        let config = grid_config(&mut rng, 1, RadiusMode::Cycle(vec![int(1), int(2), int(4)]));
        let inst = generate_random(&config, seed).unwrap();
        let sol = solve_pkso_powers_of_b(&inst, &int(2)).unwrap();
        let oracle = brute_force_opt(&inst, ConstraintKind::Cardinality).unwrap();
        // (3*4 - 1)/(4 - 1) = 11/3
        assert!(
            sol.realized_ratio <= rat(11, 3) * &oracle.optimal_alpha,
            "powers-of-2 bound violated (seed {seed})"
        );
    }
    pass("4", "two radii at 3, three radii at 3.94 (adversarial ratios), powers of 2 at 11/3 — 100 each".into(), started);
}

fn random_dag(rng: &mut ChaCha8Rng) -> ContactGraph {
    loop {
        let n = rng.gen_range(1..=12);
        let lambdas: Vec<Vec<u64>> = (0..n).map(|_| vec![rng.gen_range(0..=9)]).collect();
        let layer_pos: Vec<usize> = (0..n).map(|_| rng.gen_range(0..4)).collect();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if layer_pos[a] > layer_pos[b] && rng.gen_bool(0.22) {
                    edges.push((a, b));
                }
            }
        }
        let g = synthetic_graph(
            GraphKind::Dag,
            lambdas,
            vec![Some(1); n],
            edges,
            layer_pos,
        );
        // keep the brute-force enumeration within its guard
        if brute_force_path_packing(&g, 1, PackingMode::Count).is_ok() {
            return g;
        }
    }
}

// -------------------------------------------------------------------------
// 5. WkPP engine equals brute force on 200 random DAGs (integrality).
// -------------------------------------------------------------------------
#[test]
fn acceptance_05_wkpp_matches_brute_force() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for case in 0..200 {
        let g = random_dag(&mut rng);
        let k = rng.gen_range(0..=4u64);
        let flow = solve_wkpp(&g, k).unwrap();
        let brute = brute_force_path_packing(&g, k, PackingMode::Count).unwrap();
        assert_eq!(flow.total_value(), brute, "case {case}");
        assert!(flow.budget_used <= k);
        // value recomputation from the de-duplicated union
        let recount: u64 = flow.node_union().iter().map(|&v| g.nodes[v].lambda_total()).sum();
        assert_eq!(recount, flow.total_value());
    }
    pass("5", "200/200 random DAGs: flow value equals the path-subset oracle".into(), started);
}

fn random_forest(rng: &mut ChaCha8Rng, colors: usize) -> ContactGraph {
    let n = rng.gen_range(1..=12);
    let lambdas: Vec<Vec<u64>> = (0..n)
        .map(|_| (0..colors).map(|_| rng.gen_range(0..=6)).collect())
        .collect();
    let weights: Vec<Option<u64>> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.1) {
                None
            } else {
                Some(rng.gen_range(0..=10))
            }
        })
        .collect();
    let mut edges = Vec::new();
    for v in 1..n {
        if rng.gen_bool(0.7) {
            edges.push((rng.gen_range(0..v), v));
        }
    }
    synthetic_graph(GraphKind::Forest, lambdas, weights, edges, vec![0; n])
}

// -------------------------------------------------------------------------
// 6. WKnapPP DP equals brute force on 200 random forests.
// -------------------------------------------------------------------------
#[test]
fn acceptance_06_wknappp_matches_brute_force() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for case in 0..200 {
        let g = random_forest(&mut rng, 1);
        let budget = rng.gen_range(0..=15u64);
        let dp = solve_wknappp(&g, budget).unwrap();
        let brute = brute_force_path_packing(&g, budget, PackingMode::Weight).unwrap();
        assert_eq!(dp.total_value(), brute, "case {case}");
        assert!(dp.budget_used <= budget);
        let recount: u64 = dp.node_union().iter().map(|&v| g.nodes[v].lambda_total()).sum();
        assert_eq!(recount, dp.total_value());
    }
    pass("6", "200/200 random forests: knapsack DP equals the sink-subset oracle".into(), started);
}

// -------------------------------------------------------------------------
// 7. PKnapSO explicit backend: budget kept, coverage met, 17x the oracle,
//    one-shot rounding (an internal failure would error the solve).
// -------------------------------------------------------------------------
#[test]
fn acceptance_07_pknapso_explicit() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut solved = 0;
    let mut both_infeasible = 0;
    for seed in 0..100u64 {
        let config = GeneratorConfig {
            clients: rng.gen_range(6..=14),
            facilities: rng.gen_range(3..=7),
            colors: 1,
            k: rng.gen_range(2..=8),
            geometry: Geometry::Grid { span: rng.gen_range(8..=25) },
            radii: RadiusMode::Set(vec![int(1), int(2), int(5)]),
            requirement_fractions: vec![rat(1, 2)],
            weight_max: Some(6),
        };
        let inst = generate_random(&config, seed).unwrap();
        let sol = solve_pknapso(&inst, KnapsackBackend::Explicit);
        let oracle = brute_force_opt(&inst, ConstraintKind::Knapsack);
        match (sol, oracle) {
            (Ok(sol), Ok(oracle)) => {
                assert!(sol.weight_used <= inst.k, "budget violated (seed {seed})");
                assert!(sol.covered_per_color[0] >= inst.requirements[0]);
                assert!(
                    BoundTag::Seventeen.check(&sol.realized_ratio, &oracle.optimal_alpha),
                    "17-approximation violated (seed {seed})"
                );
                solved += 1;
            }
            (Err(SolveError::Infeasible { .. }), Err(OracleError::Infeasible(_))) => {
                both_infeasible += 1;
            }
            (s, o) => panic!("solver/oracle disagree on feasibility (seed {seed}): {s:?} vs {o:?}"),
        }
    }
    pass(
        "7",
        format!("{solved} solved within 17x (+{both_infeasible} agreed-infeasible), budget kept, one-shot rounding"),
        started,
    );
}

// -------------------------------------------------------------------------
// 8. PCkS: center excess <= 2c-1, all requirements met, 17x the oracle;
//    plus the extreme-point fractional-leaf bound on 200 random forest LPs.
// -------------------------------------------------------------------------
#[test]
fn acceptance_08_pcks_pseudo_approximation() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    for seed in 0..100u64 {
        let colors = if seed % 2 == 0 { 2 } else { 3 };
        let config = GeneratorConfig {
            clients: rng.gen_range(8..=16),
            facilities: rng.gen_range(3..=6),
            colors,
            k: rng.gen_range(1..=3),
            geometry: Geometry::Grid { span: rng.gen_range(8..=25) },
            radii: RadiusMode::Set(vec![int(1), int(2), int(8)]),
            requirement_fractions: vec![rat(1, 2); colors],
            weight_max: None,
        };
        let inst = generate_random(&config, seed).unwrap();
        let sol = solve_pcks(&inst).unwrap();
        let oracle = brute_force_opt(&inst, ConstraintKind::Cardinality).unwrap();
        assert!(
            sol.centers_used as u64 <= inst.k + 2 * colors as u64 - 1,
            "center excess violated (seed {seed})"
        );
        for (i, &m) in inst.requirements.iter().enumerate() {
            assert!(sol.covered_per_color[i] >= m, "color {} short (seed {seed})", i + 1);
        }
        assert!(
            BoundTag::Seventeen.check(&sol.realized_ratio, &oracle.optimal_alpha),
            "17-approximation violated (seed {seed})"
        );
    }
    // extreme points of 200 random forest LPs have at most 2c fractional
    // leaves; tight requirements push many vertices into the fractional regime
    let mut lp_checked = 0;
    let mut fractional_seen = 0;
    for _ in 0..200 {
        let colors = rng.gen_range(1..=3);
        let g = random_forest(&mut rng, colors);
        let totals: Vec<u64> = (0..colors)
            .map(|i| g.nodes.iter().map(|n| n.lambda[i]).sum::<u64>())
            .collect();
        let requirements: Vec<u64> = totals
            .iter()
            .map(|&t| if t == 0 { 0 } else { rng.gen_range(t / 3..=t) })
            .collect();
        let k = rng.gen_range(1..=4);
        match solve_wckpp(&g, &requirements, k) {
            // solve_wckpp rejects any vertex with more than 2c fractional leaves
            Ok(vertex) => {
                assert!(vertex.fractional_leaves.len() <= 2 * colors);
                if !vertex.fractional_leaves.is_empty() {
                    fractional_seen += 1;
                }
                lp_checked += 1;
            }
            Err(PathPackError::Infeasible(_)) => {}
            Err(e) => panic!("unexpected wckpp failure: {e}"),
        }
    }
    assert!(lp_checked >= 100, "too few feasible forest LPs ({lp_checked})");
    assert!(fractional_seen >= 5, "the fractional regime was not exercised");
    pass(
        "8",
        format!("100/100 colorful instances within (17, k+2c-1); {lp_checked} forest vertices obey the 2c fractional-leaf bound ({fractional_seen} fractional)"),
        started,
    );
}

// -------------------------------------------------------------------------
// 9. UPCkS two colors: both branches, centers <= k+1, (rho-2)^2 <= 5.
// -------------------------------------------------------------------------
#[test]
fn acceptance_09_upcks_two_colors() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let below = [vec![int(1), int(1)], vec![int(1), rat(3, 2)], vec![int(2), int(3)]];
    let above = [vec![int(1), int(2)], vec![int(1), rat(5, 2)], vec![int(1), int(4)]];
    for (branch, radii_sets) in [("below", &below), ("above", &above)] {
        for seed in 0..100u64 {
            let radii = radii_sets[rng.gen_range(0..radii_sets.len())].clone();
            let config = GeneratorConfig {
                clients: rng.gen_range(8..=16),
                facilities: rng.gen_range(3..=6),
                colors: 2,
                k: rng.gen_range(1..=3),
                geometry: Geometry::Grid { span: rng.gen_range(8..=25) },
                radii: RadiusMode::PerColor(radii),
                requirement_fractions: vec![rat(1, 2), rat(1, 2)],
                weight_max: None,
            };
            let inst = generate_random(&config, seed).unwrap();
            let sol = solve_upcks_two_colors(&inst).unwrap();
            let oracle = brute_force_opt(&inst, ConstraintKind::Cardinality).unwrap();
            assert!(
                sol.centers_used as u64 <= inst.k + 1,
                "k+1 centers violated ({branch}, seed {seed})"
            );
            for (i, &m) in inst.requirements.iter().enumerate() {
                assert!(sol.covered_per_color[i] >= m);
            }
            assert!(
                BoundTag::TwoPlusSqrt5.check(&sol.realized_ratio, &oracle.optimal_alpha),
                "(2+sqrt5)-approximation violated ({branch}, seed {seed})"
            );
        }
    }
    pass("9", "100 instances per radius-ratio branch within (2+sqrt5, k+1)".into(), started);
}

// -------------------------------------------------------------------------
// 10. LP kernel: substitution, tight-set rank, brute-force basic solutions.
// -------------------------------------------------------------------------

/// Solves a square rational system by Gaussian elimination; None if singular.
fn gauss_solve(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for c in col..n {
            a[col][c] = &a[col][c] / &p;
        }
        b[col] = &b[col] / &p;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..n {
                    let delta = &f * &a[col][c];
                    a[r][c] = &a[r][c] - delta;
                }
                let delta = &f * &b[col];
                b[r] = &b[r] - delta;
            }
        }
    }
    Some(b)
}

struct RandomLp {
    problem: LpProblem,
    rows: Vec<(Vec<Rat>, Relation, Rat)>,
    lower: Vec<Rat>,
    upper: Vec<Rat>,
    objective: Vec<Rat>,
    maximize: bool,
}

fn random_lp(rng: &mut ChaCha8Rng) -> RandomLp {
    let n = rng.gen_range(2..=4);
    let m = rng.gen_range(1..=4);
    let maximize = rng.gen_bool(0.5);
    let mut problem = LpProblem::new(if maximize {
        Direction::Maximize
    } else {
        Direction::Minimize
    });
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut objective = Vec::new();
    let mut vars = Vec::new();
    for j in 0..n {
        let lo = int(rng.gen_range(-3..=0));
        let hi = &lo + int(rng.gen_range(1..=6));
        let c = int(rng.gen_range(-4..=4));
        let v = problem.add_var(format!("x{j}"), lo.clone(), Some(hi.clone()));
        problem.set_objective(v, c.clone());
        vars.push(v);
        lower.push(lo);
        upper.push(hi);
        objective.push(c);
    }
    let mut rows = Vec::new();
    for _ in 0..m {
        let coeffs: Vec<Rat> = (0..n).map(|_| int(rng.gen_range(-3..=3))).collect();
        let rel = [Relation::Le, Relation::Eq, Relation::Ge][rng.gen_range(0..3)];
        let rhs = int(rng.gen_range(-6..=8));
        problem
            .add_row(
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, c)| (vars[j], c.clone()))
                    .collect(),
                rel,
                rhs.clone(),
            )
            .unwrap();
        rows.push((coeffs, rel, rhs));
    }
    RandomLp { problem, rows, lower, upper, objective, maximize }
}

/// All basic points: solve every n-subset of {constraint rows as equalities,
/// bound rows}, keep the feasible ones.
fn brute_force_optimum(lp: &RandomLp) -> Option<Rat> {
    let n = lp.lower.len();
    let mut candidate_rows: Vec<(Vec<Rat>, Rat)> = Vec::new();
    for (coeffs, _, rhs) in &lp.rows {
        candidate_rows.push((coeffs.clone(), rhs.clone()));
    }
    for j in 0..n {
        let mut unit = vec![Rat::zero(); n];
        unit[j] = Rat::one();
        candidate_rows.push((unit.clone(), lp.lower[j].clone()));
        candidate_rows.push((unit, lp.upper[j].clone()));
    }
    let total = candidate_rows.len();
    let mut best: Option<Rat> = None;
    let mut subset: Vec<usize> = (0..n).collect();
    loop {
        let a: Vec<Vec<Rat>> = subset.iter().map(|&i| candidate_rows[i].0.clone()).collect();
        let b: Vec<Rat> = subset.iter().map(|&i| candidate_rows[i].1.clone()).collect();
        if let Some(x) = gauss_solve(a, b) {
            let feasible = (0..n).all(|j| x[j] >= lp.lower[j] && x[j] <= lp.upper[j])
                && lp.rows.iter().all(|(coeffs, rel, rhs)| {
                    let lhs: Rat = coeffs.iter().zip(&x).map(|(c, v)| c * v).sum();
                    match rel {
                        Relation::Le => &lhs <= rhs,
                        Relation::Eq => &lhs == rhs,
                        Relation::Ge => &lhs >= rhs,
                    }
                });
            if feasible {
                let obj: Rat = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                best = Some(match best {
                    None => obj,
                    Some(cur) => {
                        if lp.maximize {
                            cur.max(obj)
                        } else {
                            cur.min(obj)
                        }
                    }
                });
            }
        }
        // next n-subset in lexicographic order
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if subset[i] + 1 <= total - (n - i) {
                subset[i] += 1;
                for j in (i + 1)..n {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[test]
fn acceptance_10_lp_kernel() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut optimal = 0;
    let mut infeasible = 0;
    for case in 0..300 {
        let lp = random_lp(&mut rng);
        let sol = solve_lp(&lp.problem);
        let brute = brute_force_optimum(&lp);
        match sol.status {
            LpStatus::Optimal => {
                assert!(
                    lp.problem.satisfied_exactly(&sol.assignment),
                    "substitution failed (case {case})"
                );
                assert_eq!(
                    rank_of_tight_set(&lp.problem, &sol),
                    lp.problem.n_vars(),
                    "tight-set rank must equal the variable count (case {case})"
                );
                assert_eq!(
                    Some(sol.objective_value.clone()),
                    brute,
                    "objective must match the basic-solution enumeration (case {case})"
                );
                optimal += 1;
            }
            LpStatus::Infeasible => {
                assert_eq!(brute, None, "solver says infeasible but a basic point exists (case {case})");
                infeasible += 1;
            }
            LpStatus::Unbounded => panic!("boxed LP cannot be unbounded (case {case})"),
        }
    }
    pass(
        "10",
        format!("300 random LPs: {optimal} optimal verified by substitution+rank+enumeration, {infeasible} agreed-infeasible"),
        started,
    );
}

// -------------------------------------------------------------------------
// determinism within the library: same inputs, same outputs
// -------------------------------------------------------------------------
#[test]
fn acceptance_11_library_determinism() {
    let started = Instant::now();
    let config = GeneratorConfig {
        clients: 14,
        facilities: 5,
        colors: 2,
        k: 2,
        geometry: Geometry::Grid { span: 18 },
        radii: RadiusMode::Set(vec![int(1), int(3)]),
        requirement_fractions: vec![rat(1, 2), rat(1, 2)],
        weight_max: Some(4),
    };
    let a = generate_random(&config, 42).unwrap();
    let b = generate_random(&config, 42).unwrap();
    assert_eq!(a.to_json_string(), b.to_json_string());
    let s1 = solve_pcks(&a).unwrap();
    let s2 = solve_pcks(&a).unwrap();
    assert_eq!(
        serde_json::to_string(&s1.to_json(&a)).unwrap(),
        serde_json::to_string(&s2.to_json(&a)).unwrap()
    );
    pass("11 (library half)", "regenerated and re-solved outputs are byte-identical".into(), started);
}

