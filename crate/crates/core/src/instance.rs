//! Instance data model: clients with per-client radii and colors, weighted
//! facilities, an explicit exact metric, coverage requirements, and the
//! decision-version alpha machinery.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{int, int_u, rat_serde, Rat};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("generator error: {0}")]
    Generator(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Client {
    pub id: String,
    /// Color index in `1..=colors`.
    pub color: usize,
    #[serde(with = "rat_serde")]
    pub radius: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facility {
    pub id: String,
    /// Knapsack weight; ignored by cardinality-constrained solvers.
    #[serde(default = "default_weight")]
    pub weight: u64,
}

fn default_weight() -> u64 {
    1
}

/// A priority supplier instance over the metric `clients ∪ facilities`.
///
/// Immutable after construction; the distance matrix is validated to be
/// symmetric with zero diagonal and to satisfy the triangle inequality
/// exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub colors: usize,
    pub k: u64,
    pub requirements: Vec<u64>,
    pub clients: Vec<Client>,
    pub facilities: Vec<Facility>,
    /// Full (n_clients + n_facilities)^2 matrix, clients first.
    dist: Vec<Vec<Rat>>,
}

#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    colors: usize,
    k: u64,
    requirements: Vec<u64>,
    clients: Vec<Client>,
    facilities: Vec<Facility>,
    /// Unordered pair keys: lowercase ids joined by '|' in lexicographic order.
    distances: BTreeMap<String, DocRat>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct DocRat(#[serde(with = "rat_serde")] Rat);

/// Positive scaling factor for the decision version: radii become
/// `alpha * r_v`, everything else is unchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaScale {
    pub alpha: Rat,
}

impl AlphaScale {
    pub fn new(alpha: Rat) -> Result<Self, InstanceError> {
        if alpha.is_negative() {
            return Err(InstanceError::Validation(format!(
                "alpha scale must be nonnegative, got {}",
                alpha
            )));
        }
        Ok(AlphaScale { alpha })
    }
}

fn pair_key(a: &str, b: &str) -> String {
    let (a, b) = (a.to_lowercase(), b.to_lowercase());
    if a <= b {
        format!("{a}|{b}")
    } else {
        format!("{b}|{a}")
    }
}

impl Instance {
    /// Builds and validates an instance from parts. `distances` maps
    /// unordered pair keys (see [`Instance::to_json_string`]) to values.
    pub fn new(
        colors: usize,
        k: u64,
        requirements: Vec<u64>,
        clients: Vec<Client>,
        facilities: Vec<Facility>,
        distances: &BTreeMap<String, Rat>,
    ) -> Result<Self, InstanceError> {
        if colors == 0 {
            return Err(InstanceError::Validation("color count must be >= 1".into()));
        }
        if requirements.len() != colors {
            return Err(InstanceError::Validation(format!(
                "requirements has {} entries for {} colors",
                requirements.len(),
                colors
            )));
        }
        let mut seen = BTreeSet::new();
        let ids: Vec<String> = clients
            .iter()
            .map(|c| c.id.clone())
            .chain(facilities.iter().map(|f| f.id.clone()))
            .collect();
        for id in &ids {
            if !seen.insert(id.to_lowercase()) {
                return Err(InstanceError::Validation(format!(
                    "duplicate id `{id}` (ids are case-insensitive in pair keys)"
                )));
            }
        }
        for c in &clients {
            if c.color == 0 || c.color > colors {
                return Err(InstanceError::Validation(format!(
                    "client `{}` has color {} outside 1..={}",
                    c.id, c.color, colors
                )));
            }
            if !c.radius.is_positive() {
                return Err(InstanceError::Validation(format!(
                    "client `{}` has nonpositive radius {}",
                    c.id, c.radius
                )));
            }
        }
        for (i, &m) in requirements.iter().enumerate() {
            let class_size = clients.iter().filter(|c| c.color == i + 1).count() as u64;
            if m > class_size {
                return Err(InstanceError::Validation(format!(
                    "requirement m_{} = {} exceeds |C_{}| = {}",
                    i + 1,
                    m,
                    i + 1,
                    class_size
                )));
            }
        }

        let n = ids.len();
        let mut dist = vec![vec![Rat::zero(); n]; n];
        let mut used: BTreeSet<&str> = BTreeSet::new();
        for (i, a) in ids.iter().enumerate() {
            for (j, b) in ids.iter().enumerate().skip(i + 1) {
                let key = pair_key(a, b);
                let d = distances.get(&key).ok_or_else(|| {
                    InstanceError::Validation(format!("missing distance for pair `{key}`"))
                })?;
                if d.is_negative() {
                    return Err(InstanceError::Validation(format!(
                        "negative distance {} for pair `{key}`",
                        d
                    )));
                }
                dist[i][j] = d.clone();
                dist[j][i] = d.clone();
            }
        }
        for key in distances.keys() {
            used.insert(key);
        }
        if distances.len() != n * (n - 1) / 2 {
            // surplus keys: find one that maps to no pair
            let valid: BTreeSet<String> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .map(|(i, j)| pair_key(&ids[i], &ids[j]))
                .collect();
            for key in distances.keys() {
                if !valid.contains(key) {
                    return Err(InstanceError::Validation(format!(
                        "distance key `{key}` does not name a pair of distinct known ids"
                    )));
                }
            }
        }
        // triangle inequality, exact: d(a,c) <= d(a,b) + d(b,c)
        for a in 0..n {
            for c in (a + 1)..n {
                for b in 0..n {
                    if b == a || b == c {
                        continue;
                    }
                    if dist[a][c] > &dist[a][b] + &dist[b][c] {
                        return Err(InstanceError::Validation(format!(
                            "triangle inequality violated for ({}, {}, {}): d={} > {} + {}",
                            ids[a], ids[b], ids[c], dist[a][c], dist[a][b], dist[b][c]
                        )));
                    }
                }
            }
        }

        Ok(Instance {
            colors,
            k,
            requirements,
            clients,
            facilities,
            dist,
        })
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, InstanceError> {
        let doc: InstanceDoc = serde_json::from_slice(bytes)
            .map_err(|e| InstanceError::Parse(e.to_string()))?;
        let distances = doc
            .distances
            .into_iter()
            .map(|(k, v)| (k, v.0))
            .collect::<BTreeMap<_, _>>();
        Instance::new(
            doc.colors,
            doc.k,
            doc.requirements,
            doc.clients,
            doc.facilities,
            &distances,
        )
    }

    /// Canonical serialization: fixed field order, distance keys sorted.
    /// Loading the output yields an equal instance.
    pub fn to_json_string(&self) -> String {
        let ids: Vec<&str> = self.point_ids().collect();
        let mut distances = BTreeMap::new();
        for i in 0..ids.len() {
            for j in (i + 1)..ids.len() {
                distances.insert(pair_key(ids[i], ids[j]), DocRat(self.dist[i][j].clone()));
            }
        }
        let doc = InstanceDoc {
            colors: self.colors,
            k: self.k,
            requirements: self.requirements.clone(),
            clients: self.clients.clone(),
            facilities: self.facilities.clone(),
            distances,
        };
        let mut out = serde_json::to_string_pretty(&doc).expect("instance serialization");
        out.push('\n');
        out
    }

    fn point_ids(&self) -> impl Iterator<Item = &str> {
        self.clients
            .iter()
            .map(|c| c.id.as_str())
            .chain(self.facilities.iter().map(|f| f.id.as_str()))
    }

    pub fn n_clients(&self) -> usize {
        self.clients.len()
    }

    pub fn n_facilities(&self) -> usize {
        self.facilities.len()
    }

    /// Client-to-client distance.
    pub fn d_cc(&self, u: usize, v: usize) -> &Rat {
        &self.dist[u][v]
    }

    /// Client-to-facility distance.
    pub fn d_cf(&self, v: usize, f: usize) -> &Rat {
        &self.dist[v][self.clients.len() + f]
    }

    /// Client indices per color, colors ordered 1..=c.
    pub fn color_classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.colors];
        for (i, c) in self.clients.iter().enumerate() {
            classes[c.color - 1].push(i);
        }
        classes
    }

    /// Multiplies every client radius by `s.alpha`; all else unchanged.
    pub fn scale_radii(&self, s: &AlphaScale) -> Instance {
        let mut out = self.clone();
        for c in &mut out.clients {
            c.radius = &c.radius * &s.alpha;
        }
        out
    }

    /// Sorted, deduplicated `{ d(v,f)/r_v : v in C, f in F }`. The optimal
    /// alpha of every variant lies in this set.
    pub fn candidate_alphas(&self) -> Vec<Rat> {
        let mut set = BTreeSet::new();
        for (v, c) in self.clients.iter().enumerate() {
            for f in 0..self.n_facilities() {
                set.insert(self.d_cf(v, f) / &c.radius);
            }
        }
        set.into_iter().collect()
    }

    /// True iff every client has at least one facility within its radius.
    pub fn coverable(&self) -> bool {
        (0..self.n_clients()).all(|v| {
            (0..self.n_facilities()).any(|f| self.d_cf(v, f) <= &self.clients[v].radius)
        })
    }
}

/// Geometry for generated instances; both give exact L1 metrics.
#[derive(Debug, Clone)]
pub enum Geometry {
    Line { span: u64 },
    Grid { span: u64 },
}

#[derive(Debug, Clone)]
pub enum RadiusMode {
    /// Radius drawn uniformly from the set.
    Set(Vec<Rat>),
    /// Radii assigned cyclically; guarantees every value appears when
    /// `|C| >= len`.
    Cycle(Vec<Rat>),
    /// Radius determined by the client's color (UPCkS-style instances).
    PerColor(Vec<Rat>),
}

#[derive(Debug, Clone)]
pub struct GeneratorConfig {
    pub clients: usize,
    pub facilities: usize,
    pub colors: usize,
    pub k: u64,
    pub geometry: Geometry,
    pub radii: RadiusMode,
    /// Per-color fraction of |C_i| that must be covered: m_i = floor(frac * |C_i|).
    pub requirement_fractions: Vec<Rat>,
    /// None: all weights 1. Some(w): weights uniform in 0..=w.
    pub weight_max: Option<u64>,
}

/// Deterministic per seed. Points live on an integer line or grid with L1
/// distances, so the metric is exact by construction; the result is still
/// passed through full validation.
pub fn generate_random(config: &GeneratorConfig, seed: u64) -> Result<Instance, InstanceError> {
    if config.clients == 0 {
        return Err(InstanceError::Generator("need at least one client".into()));
    }
    if config.facilities == 0 {
        return Err(InstanceError::Generator(
            "need at least one facility".into(),
        ));
    }
    if config.colors == 0 {
        return Err(InstanceError::Generator("need at least one color".into()));
    }
    if config.requirement_fractions.len() != config.colors {
        return Err(InstanceError::Generator(format!(
            "{} requirement fractions for {} colors",
            config.requirement_fractions.len(),
            config.colors
        )));
    }
    match &config.radii {
        RadiusMode::Set(rs) | RadiusMode::Cycle(rs) => {
            if rs.is_empty() {
                return Err(InstanceError::Generator("empty radius set".into()));
            }
            if rs.iter().any(|r| !r.is_positive()) {
                return Err(InstanceError::Generator("radii must be positive".into()));
            }
        }
        RadiusMode::PerColor(rs) => {
            if rs.len() != config.colors {
                return Err(InstanceError::Generator(format!(
                    "{} per-color radii for {} colors",
                    rs.len(),
                    config.colors
                )));
            }
            if rs.iter().any(|r| !r.is_positive()) {
                return Err(InstanceError::Generator("radii must be positive".into()));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = config.clients + config.facilities;
    let coords: Vec<(u64, u64)> = (0..n)
        .map(|_| match config.geometry {
            Geometry::Line { span } => (rng.gen_range(0..=span), 0),
            Geometry::Grid { span } => (rng.gen_range(0..=span), rng.gen_range(0..=span)),
        })
        .collect();

    // colors: balanced via a shuffled round-robin assignment
    let mut color_of: Vec<usize> = (0..config.clients)
        .map(|i| (i % config.colors) + 1)
        .collect();
    color_of.shuffle(&mut rng);

    let clients: Vec<Client> = (0..config.clients)
        .map(|i| {
            let radius = match &config.radii {
                RadiusMode::Set(rs) => rs[rng.gen_range(0..rs.len())].clone(),
                RadiusMode::Cycle(rs) => rs[i % rs.len()].clone(),
                RadiusMode::PerColor(rs) => rs[color_of[i] - 1].clone(),
            };
            Client {
                id: format!("c{i}"),
                color: color_of[i],
                radius,
            }
        })
        .collect();
    let facilities: Vec<Facility> = (0..config.facilities)
        .map(|j| Facility {
            id: format!("f{j}"),
            weight: match config.weight_max {
                None => 1,
                Some(w) => rng.gen_range(0..=w),
            },
        })
        .collect();

    let mut requirements = Vec::with_capacity(config.colors);
    for (i, frac) in config.requirement_fractions.iter().enumerate() {
        let class_size = clients.iter().filter(|c| c.color == i + 1).count() as u64;
        let m = (frac * int_u(class_size)).floor().to_integer();
        let m = u64::try_from(m.max(num_bigint::BigInt::zero()))
            .map_err(|_| InstanceError::Generator("requirement fraction out of range".into()))?;
        requirements.push(m.min(class_size));
    }

    let l1 = |a: (u64, u64), b: (u64, u64)| -> Rat {
        int(a.0.abs_diff(b.0) as i64 + a.1.abs_diff(b.1) as i64)
    };
    let ids: Vec<String> = clients
        .iter()
        .map(|c| c.id.clone())
        .chain(facilities.iter().map(|f| f.id.clone()))
        .collect();
    let mut distances = BTreeMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            distances.insert(pair_key(&ids[i], &ids[j]), l1(coords[i], coords[j]));
        }
    }

    Instance::new(
        config.colors,
        config.k,
        requirements,
        clients,
        facilities,
        &distances,
    )
}

/// Convenience for tests and docs: builds an instance from explicit
/// coordinates on a line (clients then facilities, L1 metric).
pub fn line_instance(
    client_coords: &[(i64, Rat, usize)], // (coordinate, radius, color)
    facility_coords: &[(i64, u64)],      // (coordinate, weight)
    colors: usize,
    k: u64,
    requirements: Vec<u64>,
) -> Result<Instance, InstanceError> {
    let clients: Vec<Client> = client_coords
        .iter()
        .enumerate()
        .map(|(i, (_, r, col))| Client {
            id: format!("c{i}"),
            color: *col,
            radius: r.clone(),
        })
        .collect();
    let facilities: Vec<Facility> = facility_coords
        .iter()
        .enumerate()
        .map(|(j, (_, w))| Facility {
            id: format!("f{j}"),
            weight: *w,
        })
        .collect();
    let coords: Vec<i64> = client_coords
        .iter()
        .map(|(x, _, _)| *x)
        .chain(facility_coords.iter().map(|(x, _)| *x))
        .collect();
    let ids: Vec<String> = clients
        .iter()
        .map(|c| c.id.clone())
        .chain(facilities.iter().map(|f| f.id.clone()))
        .collect();
    let mut distances = BTreeMap::new();
    for i in 0..ids.len() {
        for j in (i + 1)..ids.len() {
            distances.insert(pair_key(&ids[i], &ids[j]), int((coords[i] - coords[j]).abs()));
        }
    }
    Instance::new(colors, k, requirements, clients, facilities, &distances)
}

pub use crate::rational::format_rat;
