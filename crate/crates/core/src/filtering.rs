//! Greedy filtering into well-separated clusters, and the radius-class layer
//! plans that drive the layered rounding pipelines.
//!
//! `filter` with zero slack is the classic coverage-ordered pass; a positive
//! slack widens the merge rule (used by the knapsack/colorful pipelines so
//! the contact graph collapses to an out-forest).

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::instance::Instance;
use crate::rational::Rat;

/// Representatives and their clusters. Selection order is preserved;
/// `clusters[v]` partitions the filtered client set.
#[derive(Debug, Clone)]
pub struct ClusterFamily {
    pub representatives: Vec<usize>,
    pub clusters: BTreeMap<usize, Vec<usize>>,
    pub slack: Rat,
}

impl ClusterFamily {
    pub fn cluster_of(&self, rep: usize) -> &[usize] {
        &self.clusters[&rep]
    }
}

/// Greedy pass over `clients` in decreasing `cov` order (ties broken by
/// smallest client id): each selected representative absorbs every remaining
/// client within `r_u + r_v + slack`.
///
/// `radii` and `cov` are indexed by client index and must cover every member
/// of `clients`.
pub fn filter(
    inst: &Instance,
    clients: &[usize],
    radii: &[Rat],
    cov: &[Rat],
    slack: &Rat,
) -> ClusterFamily {
    let mut remaining: Vec<usize> = clients.to_vec();
    // decreasing cov, ties by id
    remaining.sort_by(|&a, &b| {
        cov[b]
            .cmp(&cov[a])
            .then_with(|| inst.clients[a].id.cmp(&inst.clients[b].id))
    });
    let mut representatives = Vec::new();
    let mut clusters = BTreeMap::new();
    while let Some(&rep) = remaining.first() {
        let bound_base = &radii[rep] + slack;
        let (mine, rest): (Vec<usize>, Vec<usize>) = remaining
            .iter()
            .partition(|&&u| inst.d_cc(u, rep) <= &(&radii[u] + &bound_base));
        representatives.push(rep);
        clusters.insert(rep, {
            let mut c = mine;
            c.sort_unstable();
            c
        });
        remaining = rest;
    }
    ClusterFamily {
        representatives,
        clusters,
        slack: slack.clone(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerMode {
    /// Largest class first, layers placed alternately on two sides of the
    /// smallest class; used with the facility-in-the-middle opening rule.
    Alternating,
    /// Classes in increasing order; used for the out-forest pipelines.
    Ascending,
}

/// Radius classes and the order in which they become layers.
///
/// `classes[i]` holds class `i+1`; class `i` contains the clients with
/// `unit * base^(i-1) <= r_v < unit * base^i`, compared via squares so
/// irrational bases stay exact. `order[p]` is the 1-based class index of the
/// layer at position `p`.
#[derive(Debug, Clone)]
pub struct LayerPlan {
    pub classes: Vec<Vec<usize>>,
    pub order: Vec<usize>,
    pub base_squared: Rat,
    /// Position of the smallest class in `order`.
    pub middle: usize,
    /// Straddle threshold for the middle-facility rule: the opened edge
    /// crosses from positions >= boundary to positions < boundary. Equals
    /// ceil(t/2).
    pub boundary: usize,
    /// The smallest radius among the planned clients; class boundaries and
    /// forest slacks are multiples of it. Zero when all radii are zero.
    pub unit: Rat,
}

impl LayerPlan {
    /// Builds a plan from explicit classes (1-based semantics, `classes[0]`
    /// is the smallest). Used by the fixed-radii solvers.
    pub fn from_classes(classes: Vec<Vec<usize>>, base_squared: Rat, mode: LayerMode) -> LayerPlan {
        Self::from_classes_with_unit(classes, base_squared, mode, Rat::one())
    }

    pub fn from_classes_with_unit(
        classes: Vec<Vec<usize>>,
        base_squared: Rat,
        mode: LayerMode,
        unit: Rat,
    ) -> LayerPlan {
        let t = classes.len();
        assert!(t >= 1, "layer plan needs at least one class");
        let order = match mode {
            LayerMode::Ascending => (1..=t).collect::<Vec<_>>(),
            LayerMode::Alternating => alternating_order(t),
        };
        let middle = order.iter().position(|&c| c == 1).expect("class 1 present");
        let boundary = t.div_ceil(2);
        LayerPlan {
            classes,
            order,
            base_squared,
            middle,
            boundary,
            unit,
        }
    }

    pub fn t(&self) -> usize {
        self.classes.len()
    }

    /// Clients of the layer at position `p`.
    pub fn layer(&self, p: usize) -> &[usize] {
        &self.classes[self.order[p] - 1]
    }
}

/// Descending side first: classes whose index has the parity of `t` in
/// decreasing order, then the remaining classes in increasing order. For
/// t=4 this yields (B4, B2, B1, B3); for t=3, (B3, B1, B2).
fn alternating_order(t: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (1..=t).rev().filter(|i| i % 2 == t % 2).collect();
    order.extend((1..=t).filter(|i| i % 2 != t % 2));
    order
}

/// Partitions the given clients into radius classes with growth `base`
/// (supplied squared) relative to `unit` = the smallest radius present.
/// Radii and `unit` must be strictly positive unless all are zero, in which
/// case everything lands in class 1.
pub fn build_layer_plan(
    inst_radii: &[Rat],
    clients: &[usize],
    base_squared: &Rat,
    mode: LayerMode,
) -> LayerPlan {
    assert!(base_squared > &Rat::one(), "base must exceed 1");
    let unit = clients
        .iter()
        .map(|&v| &inst_radii[v])
        .min()
        .cloned()
        .unwrap_or_else(Rat::zero);
    let unit_sq = &unit * &unit;
    let mut class_of = Vec::with_capacity(clients.len());
    let mut t = 1;
    for &v in clients {
        let r_sq = &inst_radii[v] * &inst_radii[v];
        let mut i = 1;
        if !unit_sq.is_zero() {
            let mut hi = &unit_sq * base_squared;
            while r_sq >= hi {
                hi *= base_squared;
                i += 1;
            }
        }
        t = t.max(i);
        class_of.push(i);
    }
    let mut classes = vec![Vec::new(); t];
    for (&v, &i) in clients.iter().zip(&class_of) {
        classes[i - 1].push(v);
    }
    for class in &mut classes {
        class.sort_unstable();
    }
    LayerPlan::from_classes_with_unit(classes, base_squared.clone(), mode, unit)
}
