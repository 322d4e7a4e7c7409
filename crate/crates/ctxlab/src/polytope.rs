//! Fourier-Motzkin elimination and complete inequality descriptions of the
//! non-contextual polytope (in table coordinates) and the correlation
//! polytope (in expectation coordinates).
//!
//! Rows follow the crate-wide `coeffs . x <= rhs` convention. Elimination
//! keeps the variable count fixed: an eliminated column stays in place with
//! zero coefficients, so table and expectation blocks never shift.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::contextuality::IncidenceMatrix;
use crate::inequalities::{
    rational_to_logical, CorrelationInequality, LogicalBellInequality, RationalInequality,
};
use crate::linear::{dot, minimize_over_system, Inequality, LinearSystem, LpOutcome, Scalar};
use crate::model::MeasurementCover;
use crate::{Error, Int, Rat, Result};

/// Default cap on `|X|` for the full non-contextual pipeline.
pub const FM_VAR_LIMIT: usize = 8;
/// Default cap on the number of contexts for the correlation pipeline.
pub const FM_CONTEXT_LIMIT: usize = 8;

/// One Fourier-Motzkin step on `var`: every lower-bound row (negative
/// coefficient) is combined with every upper-bound row (positive
/// coefficient) using positive multipliers that cancel the column, and rows
/// not mentioning `var` pass through. A point of the remaining variables
/// satisfies the output iff it extends to a value of `var` satisfying the
/// input.
pub fn fm_eliminate<T: Scalar>(sys: &LinearSystem<T>, var: usize) -> LinearSystem<T> {
    let mut out = LinearSystem::new(sys.n_vars());
    let mut lowers: Vec<&Inequality<T>> = Vec::new();
    let mut uppers: Vec<&Inequality<T>> = Vec::new();
    for row in sys.rows() {
        let a = &row.coeffs[var];
        if a.is_zero() {
            push_unless_trivial(&mut out, row.coeffs.clone(), row.rhs.clone());
        } else if a.is_positive() {
            uppers.push(row);
        } else {
            lowers.push(row);
        }
    }
    for l in &lowers {
        for u in &uppers {
            let lm = u.coeffs[var].clone();
            let um = -l.coeffs[var].clone();
            let mut coeffs: Vec<T> = (0..sys.n_vars())
                .map(|j| l.coeffs[j].clone() * lm.clone() + u.coeffs[j].clone() * um.clone())
                .collect();
            // The column cancels by construction; write the zero explicitly
            // so inexact scalars cannot leave residue.
            coeffs[var] = T::zero();
            let rhs = l.rhs.clone() * lm + u.rhs.clone() * um;
            let (coeffs, rhs) = scale_leading(coeffs, rhs);
            push_unless_trivial(&mut out, coeffs, rhs);
        }
    }
    out
}

/// Divide a row by the absolute value of its first nonzero coefficient.
fn scale_leading<T: Scalar>(coeffs: Vec<T>, rhs: T) -> (Vec<T>, T) {
    match coeffs.iter().find(|c| !c.is_zero()) {
        None => (coeffs, rhs),
        Some(lead) => {
            let d = lead.abs();
            (
                coeffs.iter().map(|c| c.clone() / d.clone()).collect(),
                rhs / d,
            )
        }
    }
}

/// Append a row unless it is `0 <= rhs` with `rhs >= 0`. All-zero rows with
/// a negative right side are kept: they mark infeasibility.
fn push_unless_trivial<T: Scalar>(sys: &mut LinearSystem<T>, coeffs: Vec<T>, rhs: T) {
    if coeffs.iter().all(|c| c.is_zero()) && rhs >= T::zero() {
        return;
    }
    sys.push(coeffs, rhs);
}

/// Scale a row to integer coefficients with gcd 1. The bound scales along
/// and may stay fractional; only positive factors are used, so the solution
/// set is unchanged. Requires a nonzero coefficient.
fn primitive(coeffs: &[Rat], rhs: &Rat) -> (Vec<Int>, Rat) {
    let mut lcd = Int::one();
    for c in coeffs {
        lcd = lcd.lcm(c.denom());
    }
    let ints: Vec<Int> = coeffs
        .iter()
        .map(|c| (c * Rat::from_integer(lcd.clone())).to_integer())
        .collect();
    let mut g = Int::zero();
    for i in &ints {
        g = g.gcd(i);
    }
    let ints: Vec<Int> = ints.iter().map(|i| i / &g).collect();
    let rhs = rhs * Rat::from_integer(lcd) / Rat::from_integer(g);
    (ints, rhs)
}

/// Cheap syntactic pass: normalize rows to primitive integer form, drop
/// trivially true rows, collapse infeasibility markers, and merge rows with
/// identical coefficients keeping the tightest bound. First-occurrence
/// order is preserved.
fn syntactic_reduce(sys: &LinearSystem<Rat>) -> LinearSystem<Rat> {
    let mut order: Vec<Vec<Int>> = Vec::new();
    let mut best: BTreeMap<Vec<Int>, Rat> = BTreeMap::new();
    let mut infeasible = false;
    for row in sys.rows() {
        if row.coeffs.iter().all(|c| c.is_zero()) {
            if row.rhs < Rat::zero() {
                infeasible = true;
            }
            continue;
        }
        let (ints, rhs) = primitive(&row.coeffs, &row.rhs);
        match best.entry(ints.clone()) {
            Entry::Vacant(e) => {
                order.push(ints);
                e.insert(rhs);
            }
            Entry::Occupied(mut e) => {
                if rhs < *e.get() {
                    e.insert(rhs);
                }
            }
        }
    }
    let mut out = LinearSystem::new(sys.n_vars());
    if infeasible {
        out.push(vec![Rat::zero(); sys.n_vars()], -Rat::one());
    }
    for key in order {
        let rhs = best[&key].clone();
        out.push(
            key.into_iter().map(Rat::from_integer).collect(),
            rhs,
        );
    }
    out
}

/// Drop every row that is implied by the others, decided by exact linear
/// programming: a row is implied iff maximizing its left side subject to
/// the remaining rows stays within its bound. The result has the same
/// solution set, keeps input order, and is irredundant, so a second
/// application changes nothing.
///
/// When the solution set is not full-dimensional the irredundant
/// representation is not unique; candidates are examined densest-first so
/// that sparse rows win such ties.
pub fn remove_redundant(sys: &LinearSystem<Rat>) -> LinearSystem<Rat> {
    let rows = sys.rows();
    let mut keep = vec![true; rows.len()];
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by_key(|&i| {
        let nonzero = rows[i].coeffs.iter().filter(|c| !c.is_zero()).count();
        (std::cmp::Reverse(nonzero), i)
    });
    for i in order {
        let mut others = LinearSystem::new(sys.n_vars());
        for (j, row) in rows.iter().enumerate() {
            if j != i && keep[j] {
                others.push(row.coeffs.clone(), row.rhs.clone());
            }
        }
        let row = &rows[i];
        if others.n_rows() == 0 {
            if row.coeffs.iter().all(|c| c.is_zero()) {
                keep[i] = row.rhs < Rat::zero();
            }
            // A nonzero objective over free space is unbounded: keep.
            continue;
        }
        let neg: Vec<Rat> = row.coeffs.iter().map(|c| -c.clone()).collect();
        keep[i] = match minimize_over_system(&others, &neg) {
            LpOutcome::Optimal { value, .. } => (-value).gt(&row.rhs),
            LpOutcome::Unbounded => true,
            // The rest is already infeasible, so the row adds nothing.
            LpOutcome::Infeasible => false,
        };
    }
    let mut out = LinearSystem::new(sys.n_vars());
    for (row, k) in rows.iter().zip(&keep) {
        if *k {
            out.push(row.coeffs.clone(), row.rhs.clone());
        }
    }
    out
}

/// Eliminate a set of columns, reducing after every step. Variables are
/// taken greedily by the smallest lower-times-upper row count product,
/// ties by lowest index, which keeps the intermediate systems small at the
/// cover sizes this crate targets.
pub fn eliminate_all(sys: &LinearSystem<Rat>, vars: &[usize]) -> LinearSystem<Rat> {
    let mut sys = remove_redundant(&syntactic_reduce(sys));
    let mut remaining: BTreeSet<usize> = vars.iter().copied().collect();
    while !remaining.is_empty() {
        let v = *remaining
            .iter()
            .min_by_key(|&&v| {
                let mut lo = 0usize;
                let mut hi = 0usize;
                for row in sys.rows() {
                    let a = &row.coeffs[v];
                    if a.is_positive() {
                        hi += 1;
                    } else if a.is_negative() {
                        lo += 1;
                    }
                }
                (lo * hi, v)
            })
            .expect("nonempty");
        sys = fm_eliminate(&sys, v);
        sys = remove_redundant(&syntactic_reduce(&sys));
        remaining.remove(&v);
    }
    sys
}

/// A duplicate-free list of cell inequalities in canonical integer form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalitySet {
    n_coords: usize,
    inequalities: Vec<RationalInequality>,
}

impl InequalitySet {
    /// Canonicalize every row and deduplicate, preserving first-occurrence
    /// order.
    pub fn new(n_coords: usize, rows: Vec<RationalInequality>) -> Self {
        let mut seen: BTreeSet<(Vec<Int>, Int)> = BTreeSet::new();
        let mut inequalities = Vec::new();
        for r in rows {
            let canon = r.canonical();
            if seen.insert(canon.integer_data()) {
                inequalities.push(canon);
            }
        }
        Self {
            n_coords,
            inequalities,
        }
    }

    pub fn n_coords(&self) -> usize {
        self.n_coords
    }

    pub fn len(&self) -> usize {
        self.inequalities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inequalities.is_empty()
    }

    pub fn inequalities(&self) -> &[RationalInequality] {
        &self.inequalities
    }

    /// Index of the first inequality violated at a raw coordinate vector.
    pub fn first_violated_at(&self, point: &[Rat]) -> Option<usize> {
        self.inequalities
            .iter()
            .position(|r| dot(r.coeffs(), point).gt(r.bound()))
    }

    pub fn holds_at(&self, point: &[Rat]) -> bool {
        self.first_violated_at(point).is_none()
    }
}

/// Complete inequality description of the non-contextual polytope: the set
/// of table vectors of the form `M x` with `x` a distribution on global
/// assignments. Computed by eliminating the `x` block from the system
/// `M x = y, sum x = 1, x >= 0`.
///
/// Each returned inequality is supported: the elimination output describes
/// a nonempty bounded polytope, an irredundant row of such a description is
/// tight somewhere on it, and its tight face contains a vertex, which is a
/// deterministic column.
pub fn noncontextual_polytope(
    cover: &MeasurementCover,
    var_limit: usize,
) -> Result<InequalitySet> {
    let n_vars = cover.n_vars();
    if n_vars > var_limit {
        return Err(Error::LimitExceeded {
            got: n_vars,
            limit: var_limit,
        });
    }
    let m = IncidenceMatrix::new(cover, var_limit)?;
    let n_globals = 1usize << n_vars;
    let d = cover.n_table_cells();
    let n = n_globals + d;
    let mut sys = LinearSystem::new(n);
    for r in 0..d {
        let mut coeffs = vec![Rat::zero(); n];
        for t in 0..n_globals {
            if m.entry(r, t as u64) {
                coeffs[t] = Rat::one();
            }
        }
        coeffs[n_globals + r] = -Rat::one();
        sys.push_equality(coeffs, Rat::zero());
    }
    let mut norm = vec![Rat::zero(); n];
    for slot in norm.iter_mut().take(n_globals) {
        *slot = Rat::one();
    }
    sys.push_equality(norm, Rat::one());
    for t in 0..n_globals {
        let mut row = vec![Rat::zero(); n];
        row[t] = -Rat::one();
        sys.push(row, Rat::zero());
    }
    let elim: Vec<usize> = (0..n_globals).collect();
    let reduced = eliminate_all(&sys, &elim);
    let mut out = Vec::with_capacity(reduced.n_rows());
    for row in reduced.rows() {
        debug_assert!(row.coeffs[..n_globals].iter().all(|c| c.is_zero()));
        let coeffs = row.coeffs[n_globals..].to_vec();
        out.push(RationalInequality::new(cover, coeffs, row.rhs.clone())?);
    }
    Ok(InequalitySet::new(d, out))
}

/// The non-contextual polytope as logical Bell inequalities: a model over
/// the cover is contextual iff it violates at least one member. Every
/// member passes the consistency check by construction, since each source
/// inequality holds on all deterministic models.
pub fn complete_logical_bell_set(
    cover: &MeasurementCover,
    var_limit: usize,
) -> Result<Vec<LogicalBellInequality>> {
    let set = noncontextual_polytope(cover, var_limit)?;
    set.inequalities()
        .iter()
        .map(|r| rational_to_logical(cover, r, var_limit))
        .collect()
}

/// Scale a row to all-integer data, bound included.
fn clear_to_integers(coeffs: &[Rat], rhs: &Rat) -> (Vec<Int>, Int) {
    let mut lcd = Int::one();
    for v in coeffs.iter().chain(std::iter::once(rhs)) {
        lcd = lcd.lcm(v.denom());
    }
    let scale = |v: &Rat| (v * Rat::from_integer(lcd.clone())).to_integer();
    (coeffs.iter().map(scale).collect(), scale(rhs))
}

/// Complete inequality description of the correlation polytope: the convex
/// hull of the deterministic expectation vectors, one `+-1` coordinate per
/// context. Computed by eliminating the hull weights from
/// `sum_t lambda_t eta^t = E, sum lambda = 1, lambda >= 0`.
pub fn correlation_polytope(
    cover: &MeasurementCover,
    context_limit: usize,
) -> Result<Vec<CorrelationInequality>> {
    let d = cover.n_contexts();
    if d > context_limit {
        return Err(Error::LimitExceeded {
            got: d,
            limit: context_limit,
        });
    }
    let n_vars = cover.n_vars();
    if n_vars > crate::DEFAULT_VAR_LIMIT {
        return Err(Error::LimitExceeded {
            got: n_vars,
            limit: crate::DEFAULT_VAR_LIMIT,
        });
    }
    // Distinct vertices only; different global assignments often share an
    // expectation vector.
    let mut verts: BTreeSet<Vec<i8>> = BTreeSet::new();
    for t in 0..(1u64 << n_vars) {
        let v: Vec<i8> = (0..d)
            .map(|c| {
                let cell = cover.restrict_bits(t as u32, cover.context(c));
                if cell.count_ones() % 2 == 0 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        verts.insert(v);
    }
    let verts: Vec<Vec<i8>> = verts.into_iter().collect();
    let vn = verts.len();
    let n = vn + d;
    let mut sys = LinearSystem::new(n);
    for c in 0..d {
        let mut coeffs = vec![Rat::zero(); n];
        for (i, v) in verts.iter().enumerate() {
            coeffs[i] = crate::rat_int(v[c] as i64);
        }
        coeffs[vn + c] = -Rat::one();
        sys.push_equality(coeffs, Rat::zero());
    }
    let mut norm = vec![Rat::zero(); n];
    for slot in norm.iter_mut().take(vn) {
        *slot = Rat::one();
    }
    sys.push_equality(norm, Rat::one());
    for i in 0..vn {
        let mut row = vec![Rat::zero(); n];
        row[i] = -Rat::one();
        sys.push(row, Rat::zero());
    }
    let elim: Vec<usize> = (0..vn).collect();
    let reduced = eliminate_all(&sys, &elim);
    let mut seen: BTreeSet<(Vec<Int>, Int)> = BTreeSet::new();
    let mut out = Vec::new();
    for row in reduced.rows() {
        debug_assert!(row.coeffs[..vn].iter().all(|c| c.is_zero()));
        let (ints, bound) = clear_to_integers(&row.coeffs[vn..], &row.rhs);
        let ineq = CorrelationInequality::new(cover, ints, bound)?.canonical();
        if seen.insert((ineq.coeffs().to_vec(), ineq.bound().clone())) {
            out.push(ineq);
        }
    }
    Ok(out)
}
