//! Top-level solvers: each wraps a rounding procedure in the decision-version
//! alpha search and returns a [`Solution`] whose guarantee can be certified
//! with exact arithmetic.

mod pcks;
mod pkso;
mod pknapso;

pub use pcks::{solve_pcks, solve_upcks_two_colors};
pub use pkso::{
    solve_ksupplier_outliers, solve_pkso, solve_pkso_powers_of_b, solve_pkso_three_radii,
    solve_pkso_two_radii, three_radii_bounds,
};
pub use pknapso::{solve_pknapso, KnapsackBackend};

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::instance::Instance;
use crate::lp::{solve_lp, Direction, LpProblem, LpStatus, Relation};
use crate::rational::{format_rat, int, int_u, leq_base_plus_sqrt, pow_u, rat, Rat};

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("infeasible: no facility set meets the requirements at any alpha (largest candidate {max_alpha:?})")]
    Infeasible { max_alpha: Option<String> },
    #[error("undecided: cutting-plane loop hit the iteration cap ({iterations})")]
    Undecided { iterations: usize },
    #[error("precondition violation: {0}")]
    Precondition(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

impl From<crate::contact::ContactError> for SolveError {
    fn from(e: crate::contact::ContactError) -> Self {
        SolveError::InvariantViolation(e.to_string())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceEntry {
    /// Client ids along the path, root/source first.
    pub path: Vec<String>,
    /// Facility id opened for this path.
    pub facility: String,
    /// Which opening rule applied.
    pub rule: String,
}

/// A solver output at its decision threshold alpha.
#[derive(Debug, Clone)]
pub struct Solution {
    pub algorithm: String,
    /// The smallest candidate alpha whose relaxation was feasible; the
    /// rounding ran at this threshold.
    pub alpha: Rat,
    /// Opened facility indices, sorted.
    pub opened: Vec<usize>,
    /// Max over claimed clients of d(v, opened)/r_v, original radii.
    pub realized_ratio: Rat,
    /// Clients within realized_ratio * r_v of the opened set, per color.
    pub covered_per_color: Vec<u64>,
    pub centers_used: usize,
    pub weight_used: u64,
    pub trace: Vec<TraceEntry>,
    /// The clients the rounding argues are covered (sorted indices).
    pub claimed: Vec<usize>,
}

impl Solution {
    pub fn opened_ids(&self, inst: &Instance) -> Vec<String> {
        self.opened
            .iter()
            .map(|&f| inst.facilities[f].id.clone())
            .collect()
    }

    /// The normative solution JSON.
    pub fn to_json(&self, inst: &Instance) -> serde_json::Value {
        serde_json::json!({
            "algorithm": self.algorithm,
            "alpha": format_rat(&self.alpha),
            "opened": self.opened_ids(inst),
            "realized_ratio": format_rat(&self.realized_ratio),
            "covered_per_color": self.covered_per_color,
            "centers_used": self.centers_used,
            "weight_used": self.weight_used,
            "trace": self.trace,
        })
    }
}

/// The instance viewed at a decision alpha: radii scaled, clients with no
/// facility in range dropped as definitive outliers.
pub struct ScaledInstance<'a> {
    pub inst: &'a Instance,
    pub alpha: Rat,
    /// alpha * r_v for every client (active or not).
    pub radii: Vec<Rat>,
    /// Smallest scaled radius among active clients; zero iff alpha is zero
    /// (or no client is active).
    pub unit: Rat,
    /// Clients with at least one facility within the scaled radius.
    pub active: Vec<usize>,
}

impl<'a> ScaledInstance<'a> {
    pub fn at(inst: &'a Instance, alpha: &Rat) -> ScaledInstance<'a> {
        let radii: Vec<Rat> = inst
            .clients
            .iter()
            .map(|c| &c.radius * alpha)
            .collect();
        let active: Vec<usize> = (0..inst.n_clients())
            .filter(|&v| (0..inst.n_facilities()).any(|f| inst.d_cf(v, f) <= &radii[v]))
            .collect();
        let unit = active
            .iter()
            .map(|&v| radii[v].clone())
            .min()
            .unwrap_or_else(Rat::zero);
        ScaledInstance {
            inst,
            alpha: alpha.clone(),
            radii,
            unit,
            active,
        }
    }

    pub fn facilities_within(&self, v: usize) -> Vec<usize> {
        (0..self.inst.n_facilities())
            .filter(|&f| self.inst.d_cf(v, f) <= &self.radii[v])
            .collect()
    }

    /// Smallest-id facility within the scaled radius of `v`.
    pub fn smallest_facility_within(&self, v: usize) -> Option<usize> {
        self.facilities_within(v)
            .into_iter()
            .min_by(|&a, &b| self.inst.facilities[a].id.cmp(&self.inst.facilities[b].id))
    }

    /// Cheapest facility within the scaled radius of `v`, ties by id.
    pub fn cheapest_facility_within(&self, v: usize) -> Option<usize> {
        self.facilities_within(v).into_iter().min_by(|&a, &b| {
            self.inst.facilities[a]
                .weight
                .cmp(&self.inst.facilities[b].weight)
                .then_with(|| self.inst.facilities[a].id.cmp(&self.inst.facilities[b].id))
        })
    }

    pub fn active_of_color(&self, color: usize) -> Vec<usize> {
        self.active
            .iter()
            .copied()
            .filter(|&v| self.inst.clients[v].color == color)
            .collect()
    }
}

/// Solves the natural relaxation at the view's alpha: facility openings
/// x_f in [0,1] summing to at most k, coverage variables capped by the open
/// mass within each client's scaled radius, and one coverage row per color.
/// Returns cov per client (zero for inactive clients), or None if infeasible.
pub fn natural_lp_cov(view: &ScaledInstance) -> Option<Vec<Rat>> {
    let inst = view.inst;
    let mut p = LpProblem::new(Direction::Feasibility);
    let x: Vec<_> = (0..inst.n_facilities())
        .map(|f| p.add_var(format!("x_{f}"), Rat::zero(), Some(Rat::one())))
        .collect();
    let mut cov = Vec::new();
    for &v in &view.active {
        cov.push((v, p.add_var(format!("cov_{v}"), Rat::zero(), Some(Rat::one()))));
    }
    let budget_row: Vec<_> = x.iter().map(|&f| (f, Rat::one())).collect();
    p.add_row(budget_row, Relation::Le, int_u(inst.k)).unwrap();
    for &(v, cv) in &cov {
        let mut row = vec![(cv, Rat::one())];
        for f in view.facilities_within(v) {
            row.push((x[f], -Rat::one()));
        }
        p.add_row(row, Relation::Le, Rat::zero()).unwrap();
    }
    for color in 1..=inst.colors {
        let row: Vec<_> = cov
            .iter()
            .filter(|&&(v, _)| inst.clients[v].color == color)
            .map(|&(_, cv)| (cv, Rat::one()))
            .collect();
        p.add_row(row, Relation::Ge, int_u(inst.requirements[color - 1]))
            .unwrap();
    }
    let sol = solve_lp(&p);
    match sol.status {
        LpStatus::Optimal => {
            let mut out = vec![Rat::zero(); inst.n_clients()];
            for &(v, cv) in &cov {
                out[v] = sol.assignment[cv.0].clone();
            }
            Some(out)
        }
        _ => None,
    }
}

/// What a rounding procedure produces at a feasible alpha.
pub struct RoundOutput {
    pub opened: BTreeSet<usize>,
    pub claimed: BTreeSet<usize>,
    pub trace: Vec<TraceEntry>,
}

/// One decision-version rounding algorithm.
pub trait DecisionProcedure {
    fn name(&self) -> &'static str;
    /// Is the algorithm's relaxation feasible at this alpha? Must be
    /// monotone in alpha.
    fn probe(&mut self, view: &ScaledInstance) -> Result<bool, SolveError>;
    /// Run the rounding at a feasible alpha.
    fn round(&mut self, view: &ScaledInstance) -> Result<RoundOutput, SolveError>;
}

/// Binary-searches the candidate alphas for the smallest feasible one and
/// rounds there. Feasibility is monotone because coverage sets only grow
/// with alpha.
pub fn decision_search(
    inst: &Instance,
    proc: &mut dyn DecisionProcedure,
) -> Result<Solution, SolveError> {
    let name = proc.name();
    if inst.requirements.iter().all(|&m| m == 0) {
        // nothing to cover: the empty opening at the smallest candidate
        let alpha = inst
            .candidate_alphas()
            .into_iter()
            .next()
            .unwrap_or_else(Rat::zero);
        return assemble(inst, name, alpha, BTreeSet::new(), BTreeSet::new(), Vec::new());
    }
    let candidates = inst.candidate_alphas();
    if candidates.is_empty() {
        return Err(SolveError::Infeasible { max_alpha: None });
    }
    let feasible_at = |proc: &mut dyn DecisionProcedure, alpha: &Rat| -> Result<bool, SolveError> {
        let view = ScaledInstance::at(inst, alpha);
        proc.probe(&view)
    };
    if !feasible_at(proc, candidates.last().unwrap())? {
        return Err(SolveError::Infeasible {
            max_alpha: Some(format_rat(candidates.last().unwrap())),
        });
    }
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible_at(proc, &candidates[mid])? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let alpha = candidates[lo].clone();
    let view = ScaledInstance::at(inst, &alpha);
    let out = proc.round(&view)?;
    assemble(inst, name, alpha, out.opened, out.claimed, out.trace)
}

/// Builds the Solution record and verifies the coverage requirements on the
/// claimed set; counts the threshold coverage per color independently.
fn assemble(
    inst: &Instance,
    algorithm: &str,
    alpha: Rat,
    opened: BTreeSet<usize>,
    claimed: BTreeSet<usize>,
    trace: Vec<TraceEntry>,
) -> Result<Solution, SolveError> {
    let mut claimed_per_color = vec![0u64; inst.colors];
    for &v in &claimed {
        claimed_per_color[inst.clients[v].color - 1] += 1;
    }
    for (i, (&have, &need)) in claimed_per_color
        .iter()
        .zip(&inst.requirements)
        .enumerate()
    {
        if have < need {
            return Err(SolveError::InvariantViolation(format!(
                "rounding claimed {have} clients of color {} but m = {need}",
                i + 1
            )));
        }
    }
    let ratio_of = |v: usize| -> Option<Rat> {
        opened
            .iter()
            .map(|&f| inst.d_cf(v, f))
            .min()
            .map(|d| d / &inst.clients[v].radius)
    };
    let realized_ratio = claimed
        .iter()
        .filter_map(|&v| ratio_of(v))
        .max()
        .unwrap_or_else(Rat::zero);
    let mut covered_per_color = vec![0u64; inst.colors];
    for v in 0..inst.n_clients() {
        if let Some(r) = ratio_of(v) {
            if r <= realized_ratio {
                covered_per_color[inst.clients[v].color - 1] += 1;
            }
        }
    }
    let weight_used = opened.iter().map(|&f| inst.facilities[f].weight).sum();
    Ok(Solution {
        algorithm: algorithm.to_string(),
        alpha,
        centers_used: opened.len(),
        opened: opened.into_iter().collect(),
        realized_ratio,
        covered_per_color,
        weight_used,
        trace,
        claimed: claimed.into_iter().collect(),
    })
}

/// Independent recomputation of a solution's reported coverage fields from
/// the opened ids alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub covered_per_color: Vec<u64>,
    pub max_ratio_covered: Rat,
    pub centers_used: usize,
    pub weight_used: u64,
}

pub fn evaluate_solution(
    inst: &Instance,
    opened_ids: &[String],
    threshold: &Rat,
) -> Result<Evaluation, SolveError> {
    let mut opened = Vec::new();
    for id in opened_ids {
        let f = inst
            .facilities
            .iter()
            .position(|fac| &fac.id == id)
            .ok_or_else(|| SolveError::Precondition(format!("unknown facility id `{id}`")))?;
        opened.push(f);
    }
    let mut covered_per_color = vec![0u64; inst.colors];
    let mut max_ratio = Rat::zero();
    for v in 0..inst.n_clients() {
        let Some(d) = opened.iter().map(|&f| inst.d_cf(v, f)).min() else {
            continue;
        };
        let ratio = d / &inst.clients[v].radius;
        if &ratio <= threshold {
            covered_per_color[inst.clients[v].color - 1] += 1;
            if ratio > max_ratio {
                max_ratio = ratio;
            }
        }
    }
    Ok(Evaluation {
        covered_per_color,
        max_ratio_covered: max_ratio,
        centers_used: opened.len(),
        weight_used: opened.iter().map(|&f| inst.facilities[f].weight).sum(),
    })
}

/// The guarantee a solver certifies, with its exact-arithmetic check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundTag {
    /// 3
    Three,
    /// (3b^2 - 1)/(b^2 - 1) for rational b
    PowersOfB(Rat),
    /// 197/50
    ThreeNinetyFour,
    /// 1 + 3*sqrt(3), via the squaring transform
    OnePlusThreeSqrt3,
    /// 17
    Seventeen,
    /// 2 + sqrt(5), via the squaring transform
    TwoPlusSqrt5,
}

impl BoundTag {
    pub fn label(&self) -> String {
        match self {
            BoundTag::Three => "3".into(),
            BoundTag::PowersOfB(_) => "powers-of-b".into(),
            BoundTag::ThreeNinetyFour => "3.94".into(),
            BoundTag::OnePlusThreeSqrt3 => "1+3sqrt3".into(),
            BoundTag::Seventeen => "17".into(),
            BoundTag::TwoPlusSqrt5 => "2+sqrt5".into(),
        }
    }

    /// Exact check of `realized <= bound * alpha`.
    pub fn check(&self, realized: &Rat, alpha: &Rat) -> bool {
        match self {
            BoundTag::Three => realized <= &(int(3) * alpha),
            BoundTag::Seventeen => realized <= &(int(17) * alpha),
            BoundTag::ThreeNinetyFour => realized <= &(rat(197, 50) * alpha),
            BoundTag::PowersOfB(b) => {
                let b_sq = b * b;
                let bound = (int(3) * &b_sq - Rat::one()) / (&b_sq - Rat::one());
                realized <= &(bound * alpha)
            }
            BoundTag::OnePlusThreeSqrt3 => leq_base_plus_sqrt(realized, alpha, 1, 27),
            BoundTag::TwoPlusSqrt5 => leq_base_plus_sqrt(realized, alpha, 2, 5),
        }
    }
}

/// The certified guarantee for each algorithm tag.
pub fn bound_for_algorithm(algo: &str, b: Option<&Rat>) -> Option<BoundTag> {
    match algo {
        "ksupplier-outliers" | "pkso-2radii" => Some(BoundTag::Three),
        "pkso" => Some(BoundTag::OnePlusThreeSqrt3),
        "pkso-powers" => b.cloned().map(BoundTag::PowersOfB),
        "pkso-3radii" => Some(BoundTag::ThreeNinetyFour),
        "pknapso" | "pcks" => Some(BoundTag::Seventeen),
        "upcks2" => Some(BoundTag::TwoPlusSqrt5),
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub struct RatioCertificate {
    /// Smallest candidate alpha with a feasible relaxation (a lower bound on
    /// the optimal alpha).
    pub lp_alpha: Rat,
    pub guarantee: BoundTag,
    pub pass: bool,
}

/// Certifies `realized <= guarantee * against_alpha`, exactly.
pub fn certify(sol: &Solution, guarantee: BoundTag, against_alpha: &Rat) -> RatioCertificate {
    let pass = guarantee.check(&sol.realized_ratio, against_alpha);
    RatioCertificate {
        lp_alpha: sol.alpha.clone(),
        guarantee,
        pass,
    }
}

/// Scales radii then normalizes nothing: helper for building the decision
/// view directly at a given alpha (used by tests).
pub fn view_at<'a>(inst: &'a Instance, alpha: &Rat) -> ScaledInstance<'a> {
    ScaledInstance::at(inst, alpha)
}

pub(crate) fn four_pow(class_index: usize) -> Rat {
    pow_u(&int(4), class_index as u32)
}

/// The shared out-forest pipeline of the knapsack and colorful solvers:
/// ascending base-4 radius classes, per-layer widened filter with slack
/// unit*4^i, then the distance-rule contact forest.
pub(crate) fn forest_pipeline(
    view: &ScaledInstance,
    cov: &[Rat],
) -> Result<(crate::filtering::LayerPlan, crate::contact::ContactGraph), SolveError> {
    use crate::filtering::{build_layer_plan, filter, LayerMode};
    let plan = build_layer_plan(&view.radii, &view.active, &int(16), LayerMode::Ascending);
    let families: Vec<crate::filtering::ClusterFamily> = (0..plan.t())
        .map(|p| {
            let class = plan.order[p];
            let slack = &plan.unit * four_pow(class);
            filter(view.inst, plan.layer(p), &view.radii, cov, &slack)
        })
        .collect();
    let forest =
        crate::contact::build_contact_forest(&plan, &families, view.inst, &view.radii, &plan.unit)?;
    Ok((plan, forest))
}
