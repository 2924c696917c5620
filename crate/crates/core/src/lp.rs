//! Exact-rational LP solver returning vertex (basic feasible) solutions with
//! an explicit tight-constraint certificate.
//!
//! Bounded-variable primal simplex with Bland's anti-cycling rule, two
//! phases, all arithmetic over `BigRational`. No tolerances anywhere: a
//! returned solution satisfies every relation exactly, and the tight set of
//! an optimal vertex always contains `n` linearly independent rows.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Maximize,
    Minimize,
    /// Zero objective; any vertex of the feasible region.
    Feasibility,
}

#[derive(Debug, Clone)]
pub struct LpProblem {
    names: Vec<String>,
    lower: Vec<Rat>,
    upper: Vec<Option<Rat>>,
    rows: Vec<(Vec<(usize, Rat)>, Relation, Rat)>,
    objective: Vec<Rat>,
    direction: Direction,
}

#[derive(Debug, Error)]
pub enum LpError {
    #[error("lp construction error: {0}")]
    Build(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Indices of constraints and bounds satisfied with equality.
#[derive(Debug, Clone, Default)]
pub struct TightSet {
    pub rows: Vec<usize>,
    pub lower_bounds: Vec<usize>,
    pub upper_bounds: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct VertexSolution {
    pub status: LpStatus,
    /// Variable assignment; empty unless status is Optimal.
    pub assignment: Vec<Rat>,
    pub objective_value: Rat,
    pub tight_set: TightSet,
}

impl LpProblem {
    pub fn new(direction: Direction) -> Self {
        LpProblem {
            names: Vec::new(),
            lower: Vec::new(),
            upper: Vec::new(),
            rows: Vec::new(),
            objective: Vec::new(),
            direction,
        }
    }

    /// Adds a variable with a finite lower bound and an optional upper bound.
    pub fn add_var(&mut self, name: impl Into<String>, lower: Rat, upper: Option<Rat>) -> VarId {
        self.names.push(name.into());
        self.lower.push(lower);
        self.upper.push(upper);
        self.objective.push(Rat::zero());
        VarId(self.names.len() - 1)
    }

    pub fn set_objective(&mut self, var: VarId, coeff: Rat) {
        self.objective[var.0] = coeff;
    }

    pub fn add_row(
        &mut self,
        coeffs: Vec<(VarId, Rat)>,
        relation: Relation,
        rhs: Rat,
    ) -> Result<usize, LpError> {
        let mut row = Vec::with_capacity(coeffs.len());
        for (v, c) in coeffs {
            if v.0 >= self.names.len() {
                return Err(LpError::Build(format!("row references unknown var {}", v.0)));
            }
            if !c.is_zero() {
                row.push((v.0, c));
            }
        }
        self.rows.push((row, relation, rhs));
        Ok(self.rows.len() - 1)
    }

    pub fn n_vars(&self) -> usize {
        self.names.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn var_name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn row(&self, i: usize) -> (&[(usize, Rat)], Relation, &Rat) {
        let (c, r, b) = &self.rows[i];
        (c, *r, b)
    }

    /// LP-text dump for inspection.
    pub fn dump(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        let dir = match self.direction {
            Direction::Maximize => "max",
            Direction::Minimize => "min",
            Direction::Feasibility => "feas",
        };
        let term = |coeff: &Rat, var: usize| format!("{} {}", coeff, self.names[var]);
        writeln!(
            s,
            "{dir} {}",
            self.objective
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| term(c, j))
                .collect::<Vec<_>>()
                .join(" + ")
        )
        .unwrap();
        for (row, rel, rhs) in &self.rows {
            let rel = match rel {
                Relation::Le => "<=",
                Relation::Eq => "=",
                Relation::Ge => ">=",
            };
            writeln!(
                s,
                "  {} {rel} {rhs}",
                row.iter()
                    .map(|(j, c)| term(c, *j))
                    .collect::<Vec<_>>()
                    .join(" + ")
            )
            .unwrap();
        }
        for j in 0..self.n_vars() {
            match &self.upper[j] {
                Some(u) => writeln!(s, "  {} <= {} <= {}", self.lower[j], self.names[j], u).unwrap(),
                None => writeln!(s, "  {} <= {}", self.lower[j], self.names[j]).unwrap(),
            }
        }
        s
    }

    /// Exact check that `assignment` satisfies every row and bound.
    pub fn satisfied_exactly(&self, assignment: &[Rat]) -> bool {
        if assignment.len() != self.n_vars() {
            return false;
        }
        for j in 0..self.n_vars() {
            if assignment[j] < self.lower[j] {
                return false;
            }
            if let Some(u) = &self.upper[j] {
                if &assignment[j] > u {
                    return false;
                }
            }
        }
        for (row, rel, rhs) in &self.rows {
            let lhs: Rat = row.iter().map(|(j, c)| c * &assignment[*j]).sum();
            let ok = match rel {
                Relation::Le => &lhs <= rhs,
                Relation::Eq => &lhs == rhs,
                Relation::Ge => &lhs >= rhs,
            };
            if !ok {
                return false;
            }
        }
        true
    }

    pub fn objective_of(&self, assignment: &[Rat]) -> Rat {
        self.objective
            .iter()
            .zip(assignment)
            .map(|(c, x)| c * x)
            .sum()
    }

    fn tight_set_of(&self, assignment: &[Rat]) -> TightSet {
        let mut t = TightSet::default();
        for (i, (row, rel, rhs)) in self.rows.iter().enumerate() {
            let lhs: Rat = row.iter().map(|(j, c)| c * &assignment[*j]).sum();
            let tight = match rel {
                Relation::Eq => true,
                _ => &lhs == rhs,
            };
            if tight {
                t.rows.push(i);
            }
        }
        for j in 0..self.n_vars() {
            if assignment[j] == self.lower[j] {
                t.lower_bounds.push(j);
            }
            if let Some(u) = &self.upper[j] {
                if &assignment[j] == u {
                    t.upper_bounds.push(j);
                }
            }
        }
        t
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum VarStatus {
    Basic(usize),
    AtLower,
    AtUpper,
}

/// Internal simplex state over the extended variable space
/// (structural, slack per row, artificial per row).
struct Simplex {
    m: usize,
    total: usize,
    lower: Vec<Rat>,
    upper: Vec<Option<Rat>>,
    /// tableau = B^-1 * [A | b]; column `total` is B^-1 b.
    tab: Vec<Vec<Rat>>,
    status: Vec<VarStatus>,
    basis: Vec<usize>,
}

impl Simplex {
    /// Value of variable `j` under the current basis.
    fn value_of(&self, j: usize) -> Rat {
        match self.status[j] {
            VarStatus::Basic(r) => self.basic_value(r),
            VarStatus::AtLower => self.lower[j].clone(),
            VarStatus::AtUpper => self.upper[j].clone().expect("at-upper needs upper"),
        }
    }

    fn basic_value(&self, r: usize) -> Rat {
        let mut v = self.tab[r][self.total].clone();
        for j in 0..self.total {
            match self.status[j] {
                VarStatus::Basic(_) => {}
                VarStatus::AtLower => {
                    if !self.lower[j].is_zero() && !self.tab[r][j].is_zero() {
                        v -= &self.tab[r][j] * &self.lower[j];
                    }
                }
                VarStatus::AtUpper => {
                    let u = self.upper[j].as_ref().unwrap();
                    if !u.is_zero() && !self.tab[r][j].is_zero() {
                        v -= &self.tab[r][j] * u;
                    }
                }
            }
        }
        v
    }

    fn pivot(&mut self, enter: usize, leave_row: usize) {
        let piv = self.tab[leave_row][enter].clone();
        debug_assert!(!piv.is_zero());
        let inv = Rat::one() / piv;
        for c in 0..=self.total {
            if !self.tab[leave_row][c].is_zero() {
                self.tab[leave_row][c] = &self.tab[leave_row][c] * &inv;
            }
        }
        for r in 0..self.m {
            if r == leave_row || self.tab[r][enter].is_zero() {
                continue;
            }
            let factor = self.tab[r][enter].clone();
            for c in 0..=self.total {
                if !self.tab[leave_row][c].is_zero() {
                    let delta = &factor * &self.tab[leave_row][c];
                    self.tab[r][c] = &self.tab[r][c] - delta;
                }
            }
        }
    }

    /// One phase of Bland-rule simplex minimizing `costs`. Returns false when
    /// an unbounded improving ray is found.
    fn run(&mut self, costs: &[Rat]) -> bool {
        loop {
            // y = c_B B^-1 via the tableau rows
            let mut reduced = vec![Rat::zero(); self.total];
            let mut cb = Vec::with_capacity(self.m);
            for r in 0..self.m {
                cb.push(costs[self.basis[r]].clone());
            }
            for j in 0..self.total {
                if matches!(self.status[j], VarStatus::Basic(_)) {
                    continue;
                }
                let mut z = costs[j].clone();
                for r in 0..self.m {
                    if !cb[r].is_zero() && !self.tab[r][j].is_zero() {
                        z -= &cb[r] * &self.tab[r][j];
                    }
                }
                reduced[j] = z;
            }

            // Bland: smallest-index eligible entering variable
            let mut entering = None;
            for j in 0..self.total {
                let fixed = match &self.upper[j] {
                    Some(u) => *u == self.lower[j],
                    None => false,
                };
                if fixed {
                    continue;
                }
                match self.status[j] {
                    VarStatus::AtLower if reduced[j].is_negative() => {
                        entering = Some((j, true));
                        break;
                    }
                    VarStatus::AtUpper if reduced[j].is_positive() => {
                        entering = Some((j, false));
                        break;
                    }
                    _ => {}
                }
            }
            let Some((enter, increasing)) = entering else {
                return true; // optimal for this phase
            };

            // ratio test: how far can the entering variable move?
            // `increasing`: x_enter grows from lower; else shrinks from upper.
            let mut best: Option<(Rat, usize)> = None; // (delta, leaving var) — leaving==enter means bound flip
            if let Some(u) = &self.upper[enter] {
                let span = u - &self.lower[enter];
                best = Some((span, enter));
            }
            for r in 0..self.m {
                let d = if increasing {
                    self.tab[r][enter].clone()
                } else {
                    -self.tab[r][enter].clone()
                };
                if d.is_zero() {
                    continue;
                }
                let bv = self.basis[r];
                let xv = self.basic_value(r);
                // x_basic moves by -d * delta
                let limit = if d.is_positive() {
                    Some(&(&xv - &self.lower[bv]) / &d)
                } else {
                    self.upper[bv].as_ref().map(|u| &(u - &xv) / &(-&d))
                };
                if let Some(limit) = limit {
                    debug_assert!(!limit.is_negative(), "negative ratio implies infeasible state");
                    let replace = match &best {
                        None => true,
                        Some((cur, who)) => {
                            limit < *cur || (limit == *cur && bv < *who)
                        }
                    };
                    if replace {
                        best = Some((limit, bv));
                    }
                }
            }

            match best {
                None => return false, // unbounded
                Some((_, who)) if who == enter => {
                    // bound flip
                    self.status[enter] = if increasing {
                        VarStatus::AtUpper
                    } else {
                        VarStatus::AtLower
                    };
                }
                Some((delta, who)) => {
                    let VarStatus::Basic(row) = self.status[who] else {
                        unreachable!("leaving variable must be basic");
                    };
                    // which bound does the leaving variable hit?
                    let d = if increasing {
                        self.tab[row][enter].clone()
                    } else {
                        -self.tab[row][enter].clone()
                    };
                    let leave_status = if d.is_positive() {
                        VarStatus::AtLower
                    } else {
                        VarStatus::AtUpper
                    };
                    let _ = delta;
                    self.status[who] = leave_status;
                    self.status[enter] = VarStatus::Basic(row);
                    self.basis[row] = enter;
                    self.pivot(enter, row);
                }
            }
        }
    }
}

/// Solves the problem to a vertex. Requires at least one variable; cycling is
/// prevented by Bland's rule, so termination is unconditional.
pub fn solve_lp(p: &LpProblem) -> VertexSolution {
    assert!(p.n_vars() >= 1, "lp must have at least one variable");
    let n = p.n_vars();
    let m = p.n_rows();
    // extended space: structural | slack per row | artificial per row
    let total = n + 2 * m;
    let mut lower = p.lower.clone();
    let mut upper = p.upper.clone();
    for (_, rel, _) in &p.rows {
        match rel {
            Relation::Le => {
                lower.push(Rat::zero());
                upper.push(None);
            }
            Relation::Eq => {
                lower.push(Rat::zero());
                upper.push(Some(Rat::zero()));
            }
            Relation::Ge => {
                // slack in (-inf, 0]: shifted as s' = -s in [0, inf) with coeff -1
                lower.push(Rat::zero());
                upper.push(None);
            }
        }
    }
    for _ in 0..m {
        lower.push(Rat::zero());
        upper.push(Some(Rat::zero())); // unlocked per-row below when needed
    }

    // rows: a x + sigma_s * s + sigma_a * t = b
    let mut tab = vec![vec![Rat::zero(); total + 1]; m];
    let mut slack_sign = Vec::with_capacity(m);
    for (i, (row, rel, rhs)) in p.rows.iter().enumerate() {
        for (j, c) in row {
            tab[i][*j] += c; // repeated variables accumulate
        }
        let s = match rel {
            Relation::Le => Rat::one(),
            Relation::Eq => Rat::one(), // fixed at 0 anyway
            Relation::Ge => -Rat::one(),
        };
        slack_sign.push(s.clone());
        tab[i][n + i] = s;
        tab[i][total] = rhs.clone();
    }

    // initial point: structurals at lower, slacks basic where possible,
    // artificials absorb bound violations. The basic variable's column must
    // read +1, so rows are negated when it would read -1.
    let mut status = vec![VarStatus::AtLower; total];
    let mut basis = Vec::with_capacity(m);
    let mut need_phase1 = false;
    for i in 0..m {
        let resid: Rat = {
            let mut v = tab[i][total].clone();
            for j in 0..n {
                if !tab[i][j].is_zero() && !lower[j].is_zero() {
                    v -= &tab[i][j] * &lower[j];
                }
            }
            v
        };
        // slack value would be resid / slack_sign = ±resid
        let slack_var = n + i;
        let art_var = n + m + i;
        let slack_val = &resid / &slack_sign[i];
        let slack_ok = {
            let lo_ok = slack_val >= lower[slack_var];
            let hi_ok = match &upper[slack_var] {
                Some(u) => &slack_val <= u,
                None => true,
            };
            lo_ok && hi_ok
        };
        let negate_row = |tab: &mut Vec<Vec<Rat>>| {
            for c in 0..=total {
                if !tab[i][c].is_zero() {
                    tab[i][c] = -tab[i][c].clone();
                }
            }
        };
        if slack_ok {
            if slack_sign[i].is_negative() {
                negate_row(&mut tab);
            }
            status[slack_var] = VarStatus::Basic(i);
            basis.push(slack_var);
        } else {
            // pin slack at its nearest feasible bound (0 in all cases here),
            // artificial takes the absolute residual
            status[slack_var] = VarStatus::AtLower;
            if resid.is_negative() {
                negate_row(&mut tab);
            }
            upper[art_var] = None;
            status[art_var] = VarStatus::Basic(i);
            basis.push(art_var);
            need_phase1 = true;
        }
        tab[i][art_var] = Rat::one();
    }

    let mut sx = Simplex {
        m,
        total,
        lower,
        upper,
        tab,
        status,
        basis,
    };

    if need_phase1 {
        let mut costs = vec![Rat::zero(); total];
        for j in (n + m)..total {
            costs[j] = Rat::one();
        }
        let ok = sx.run(&costs);
        debug_assert!(ok, "phase 1 objective is bounded below by zero");
        let phase1: Rat = (0..m)
            .map(|r| {
                let v = sx.basis[r];
                if v >= n + m { sx.basic_value(r) } else { Rat::zero() }
            })
            .sum();
        if !phase1.is_zero() {
            return VertexSolution {
                status: LpStatus::Infeasible,
                assignment: Vec::new(),
                objective_value: Rat::zero(),
                tight_set: TightSet::default(),
            };
        }
        // drive artificials out of the basis where possible
        for r in 0..m {
            let v = sx.basis[r];
            if v < n + m {
                continue;
            }
            let mut target = None;
            for j in 0..(n + m) {
                if !matches!(sx.status[j], VarStatus::Basic(_)) && !sx.tab[r][j].is_zero() {
                    target = Some(j);
                    break;
                }
            }
            if let Some(j) = target {
                sx.status[v] = VarStatus::AtLower;
                sx.status[j] = VarStatus::Basic(r);
                sx.basis[r] = j;
                sx.pivot(j, r);
            }
            // else: redundant row; artificial stays basic at value 0
        }
    }
    // freeze artificials
    for j in (n + m)..total {
        sx.lower[j] = Rat::zero();
        sx.upper[j] = Some(Rat::zero());
    }

    let mut costs = vec![Rat::zero(); total];
    match p.direction {
        Direction::Feasibility => {}
        Direction::Minimize => costs[..n].clone_from_slice(&p.objective),
        Direction::Maximize => {
            for (c, obj) in costs.iter_mut().zip(&p.objective) {
                *c = -obj.clone();
            }
        }
    }
    let bounded = sx.run(&costs);
    if !bounded {
        return VertexSolution {
            status: LpStatus::Unbounded,
            assignment: Vec::new(),
            objective_value: Rat::zero(),
            tight_set: TightSet::default(),
        };
    }

    let assignment: Vec<Rat> = (0..n).map(|j| sx.value_of(j)).collect();
    debug_assert!(p.satisfied_exactly(&assignment), "simplex output must verify");
    let objective_value = p.objective_of(&assignment);
    let tight_set = p.tight_set_of(&assignment);
    VertexSolution {
        status: LpStatus::Optimal,
        assignment,
        objective_value,
        tight_set,
    }
}

/// Rank over the rationals of the tight rows (constraint rows plus attained
/// bound rows) of a solution. Equals the variable count for every vertex.
pub fn rank_of_tight_set(p: &LpProblem, s: &VertexSolution) -> usize {
    assert_eq!(s.status, LpStatus::Optimal, "rank needs an optimal solution");
    let n = p.n_vars();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for &i in &s.tight_set.rows {
        let mut dense = vec![Rat::zero(); n];
        for (j, c) in &p.rows[i].0 {
            dense[*j] += c;
        }
        rows.push(dense);
    }
    for &j in s
        .tight_set
        .lower_bounds
        .iter()
        .chain(s.tight_set.upper_bounds.iter())
    {
        let mut dense = vec![Rat::zero(); n];
        dense[j] = Rat::one();
        rows.push(dense);
    }
    rank(rows, n)
}

fn rank(mut rows: Vec<Vec<Rat>>, n_cols: usize) -> usize {
    let mut r = 0;
    for col in 0..n_cols {
        let Some(pivot_row) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot_row);
        let piv = rows[r][col].clone();
        for i in (r + 1)..rows.len() {
            if rows[i][col].is_zero() {
                continue;
            }
            let factor = &rows[i][col] / &piv;
            for c in col..n_cols {
                let delta = &factor * &rows[r][c];
                rows[i][c] = &rows[i][c] - delta;
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}
