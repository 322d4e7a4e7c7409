//! Exact linear algebra: inequality systems and a two-phase simplex solver.
//!
//! Everything here is generic over an ordered field scalar so the same code
//! runs over `f64` or exact rationals; the rest of the crate instantiates it
//! at [`crate::Rat`], where pivoting is exact and feasibility answers are
//! decisions, not approximations. Pivot selection uses Bland's rule, so the
//! solver terminates on degenerate systems.

use num_traits::{Num, Signed};

/// Scalar requirements for the solvers: an ordered field with signs.
pub trait Scalar: Clone + PartialOrd + Num + Signed {}
impl<T: Clone + PartialOrd + Num + Signed> Scalar for T {}

/// One linear inequality `coeffs . x <= rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality<T> {
    pub coeffs: Vec<T>,
    pub rhs: T,
}

impl<T: Scalar> Inequality<T> {
    pub fn new(coeffs: Vec<T>, rhs: T) -> Self {
        Self { coeffs, rhs }
    }

    pub fn lhs_at(&self, x: &[T]) -> T {
        dot(&self.coeffs, x)
    }

    pub fn holds_at(&self, x: &[T]) -> bool {
        self.lhs_at(x) <= self.rhs
    }
}

/// A finite system of inequalities over a fixed variable count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem<T> {
    n_vars: usize,
    rows: Vec<Inequality<T>>,
}

impl<T: Scalar> LinearSystem<T> {
    pub fn new(n_vars: usize) -> Self {
        Self {
            n_vars,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, coeffs: Vec<T>, rhs: T) {
        assert_eq!(coeffs.len(), self.n_vars);
        self.rows.push(Inequality::new(coeffs, rhs));
    }

    /// Add `coeffs . x = rhs` as a pair of opposite inequalities.
    pub fn push_equality(&mut self, coeffs: Vec<T>, rhs: T) {
        let neg: Vec<T> = coeffs.iter().map(|c| -c.clone()).collect();
        let neg_rhs = -rhs.clone();
        self.push(coeffs, rhs);
        self.push(neg, neg_rhs);
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Inequality<T>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Inequality<T>> {
        self.rows
    }

    pub fn from_rows(n_vars: usize, rows: Vec<Inequality<T>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.coeffs.len() == n_vars));
        Self { n_vars, rows }
    }

    pub fn holds_at(&self, x: &[T]) -> bool {
        self.rows.iter().all(|r| r.holds_at(x))
    }

    /// Whether some (free) point satisfies every row.
    pub fn is_feasible(&self) -> bool {
        let zero = vec![T::zero(); self.n_vars];
        !matches!(minimize_over_system(self, &zero), LpOutcome::Infeasible)
    }
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Result of a linear program.
#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { value: T, point: Vec<T> },
    Infeasible,
    Unbounded,
}

/// Find some `x >= 0` with `A x = b`, or `None` if the system is infeasible.
pub fn feasible_point<T: Scalar>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let n = a.first().map_or(0, Vec::len);
    match phase_one(a, b, n) {
        Some(tab) => Some(tab.extract_point(n)),
        None => None,
    }
}

/// Minimize `c . x` subject to `A x = b`, `x >= 0`.
pub fn minimize_standard<T: Scalar>(a: &[Vec<T>], b: &[T], c: &[T]) -> LpOutcome<T> {
    let n = c.len();
    let mut tab = match phase_one(a, b, n) {
        Some(tab) => tab,
        None => return LpOutcome::Infeasible,
    };
    tab.set_objective(c);
    match tab.run_bland() {
        SimplexEnd::Optimal => LpOutcome::Optimal {
            value: tab.objective_value(),
            point: tab.extract_point(n),
        },
        SimplexEnd::Unbounded => LpOutcome::Unbounded,
    }
}

/// Minimize `c . x` over the free-variable system `rows: a . x <= rhs`.
///
/// Free variables are split as differences of nonnegative pairs and each row
/// gets a slack, then the standard-form solver runs on the result.
pub fn minimize_over_system<T: Scalar>(sys: &LinearSystem<T>, c: &[T]) -> LpOutcome<T> {
    let n = sys.n_vars();
    let m = sys.n_rows();
    assert_eq!(c.len(), n);
    let cols = 2 * n + m;
    let mut a: Vec<Vec<T>> = Vec::with_capacity(m);
    let mut b: Vec<T> = Vec::with_capacity(m);
    for (i, row) in sys.rows().iter().enumerate() {
        let mut r = vec![T::zero(); cols];
        for (j, v) in row.coeffs.iter().enumerate() {
            r[j] = v.clone();
            r[n + j] = -v.clone();
        }
        r[2 * n + i] = T::one();
        a.push(r);
        b.push(row.rhs.clone());
    }
    let mut obj = vec![T::zero(); cols];
    for (j, v) in c.iter().enumerate() {
        obj[j] = v.clone();
        obj[n + j] = -v.clone();
    }
    match minimize_standard(&a, &b, &obj) {
        LpOutcome::Optimal { value, point } => {
            let x = (0..n)
                .map(|j| point[j].clone() - point[n + j].clone())
                .collect();
            LpOutcome::Optimal { value, point: x }
        }
        other => other,
    }
}

enum SimplexEnd {
    Optimal,
    Unbounded,
}

/// Dense simplex tableau. Column layout: `n_real` problem columns followed
/// by one artificial column per row; artificials never re-enter the basis
/// after phase one.
struct Tableau<T> {
    /// Each row has `n_real + n_art + 1` entries, rhs last.
    rows: Vec<Vec<T>>,
    cost: Vec<T>,
    basis: Vec<usize>,
    n_real: usize,
}

impl<T: Scalar> Tableau<T> {
    fn width(&self) -> usize {
        self.cost.len()
    }

    fn rhs_index(&self) -> usize {
        self.width() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() / piv.clone();
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c].clone();
            if f.is_zero() {
                continue;
            }
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v = v.clone() - f.clone() * p.clone();
            }
        }
        let f = self.cost[c].clone();
        if !f.is_zero() {
            for (v, p) in self.cost.iter_mut().zip(&pivot_row) {
                *v = v.clone() - f.clone() * p.clone();
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule: entering column is the lowest eligible index, leaving
    /// row breaks ratio ties by lowest basic variable index.
    fn run_bland(&mut self) -> SimplexEnd {
        let rhs = self.rhs_index();
        loop {
            let entering = (0..self.n_real).find(|&j| self.cost[j] < T::zero());
            let c = match entering {
                Some(c) => c,
                None => return SimplexEnd::Optimal,
            };
            let mut best: Option<(T, usize)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if *a <= T::zero() {
                    continue;
                }
                let ratio = self.rows[i][rhs].clone() / a.clone();
                let better = match &best {
                    None => true,
                    Some((r, bi)) => {
                        ratio < *r || (ratio == *r && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((ratio, i));
                }
            }
            match best {
                Some((_, r)) => self.pivot(r, c),
                None => return SimplexEnd::Unbounded,
            }
        }
    }

    /// Install the phase-two objective and price out the current basis.
    fn set_objective(&mut self, c: &[T]) {
        let w = self.width();
        self.cost = vec![T::zero(); w];
        self.cost[..c.len()].clone_from_slice(c);
        for i in 0..self.rows.len() {
            let f = self.cost[self.basis[i]].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..w {
                self.cost[j] = self.cost[j].clone() - f.clone() * self.rows[i][j].clone();
            }
        }
    }

    fn objective_value(&self) -> T {
        -self.cost[self.rhs_index()].clone()
    }

    fn extract_point(&self, n: usize) -> Vec<T> {
        let rhs = self.rhs_index();
        let mut x = vec![T::zero(); n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.rows[i][rhs].clone();
            }
        }
        x
    }
}

/// Phase one: start from the all-artificial basis and drive the artificial
/// mass to zero. Returns a feasible tableau for `A x = b, x >= 0`, with no
/// artificial left basic, or `None` if infeasible. Redundant equation rows
/// are dropped.
fn phase_one<T: Scalar>(a: &[Vec<T>], b: &[T], n_real: usize) -> Option<Tableau<T>> {
    let m = a.len();
    assert_eq!(b.len(), m);
    let width = n_real + m + 1;
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        assert_eq!(row.len(), n_real);
        let flip = b[i] < T::zero();
        let mut r = vec![T::zero(); width];
        for (j, v) in row.iter().enumerate() {
            r[j] = if flip { -v.clone() } else { v.clone() };
        }
        r[n_real + i] = T::one();
        r[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        rows.push(r);
    }
    // Phase-one cost: sum of artificials, priced out against the basis.
    let mut cost = vec![T::zero(); width];
    for row in &rows {
        for j in 0..width {
            if j >= n_real && j < n_real + m {
                continue;
            }
            cost[j] = cost[j].clone() - row[j].clone();
        }
    }
    let mut tab = Tableau {
        rows,
        cost,
        basis: (n_real..n_real + m).collect(),
        n_real,
    };
    tab.run_bland();
    if tab.objective_value() > T::zero() {
        return None;
    }
    // Pivot lingering artificials out of the basis; rows that cannot pivot
    // are redundant equations and get dropped.
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] < n_real {
            i += 1;
            continue;
        }
        match (0..n_real).find(|&j| !tab.rows[i][j].is_zero()) {
            Some(j) => {
                tab.pivot(i, j);
                i += 1;
            }
            None => {
                tab.rows.remove(i);
                tab.basis.remove(i);
            }
        }
    }
    Some(tab)
}
