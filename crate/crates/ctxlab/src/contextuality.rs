//! Global sections, the contextuality hierarchy, and exact non-contextual
//! decompositions.
//!
//! A model is non-contextual when it is a convex combination of
//! deterministic models, equivalently when the linear system `M x = v`,
//! `x >= 0` over the incidence matrix has a solution. The classifier layers
//! the possibilistic tests (which only look at supports) in front of the
//! exact-rational feasibility check, so strongly contextual models over
//! large covers never touch the linear program.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::linear::feasible_point;
use crate::model::{EmpiricalModel, GlobalAssignment, MeasurementCover, SupportModel};
use crate::{rat_int, Error, Rat, Result};

/// Cap on dense LP tableau entries for the decomposition search.
const LP_ENTRY_BUDGET: usize = 1 << 20;
/// Cap on incidence-matrix bits.
const INCIDENCE_BIT_BUDGET: usize = 1 << 28;

/// The four mutually exclusive classes, ordered from weakest to strongest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ContextualityClass {
    Noncontextual,
    ProbabilisticallyContextual,
    PossibilisticallyContextual,
    StronglyContextual,
}

impl ContextualityClass {
    pub fn is_contextual(self) -> bool {
        self != ContextualityClass::Noncontextual
    }

    pub fn name(self) -> &'static str {
        match self {
            ContextualityClass::Noncontextual => "NONCONTEXTUAL",
            ContextualityClass::ProbabilisticallyContextual => "PROBABILISTICALLY_CONTEXTUAL",
            ContextualityClass::PossibilisticallyContextual => "POSSIBILISTICALLY_CONTEXTUAL",
            ContextualityClass::StronglyContextual => "STRONGLY_CONTEXTUAL",
        }
    }
}

impl std::fmt::Display for ContextualityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Depth-first search over contexts, extending a partial outcome assignment
/// one support cell at a time. `assigned` marks which variables are pinned.
struct SectionSearch<'a> {
    sm: &'a SupportModel,
    /// Per context, the variable mask and per-cell precomputed global bits.
    masks: Vec<u32>,
    spread: Vec<Vec<u32>>,
}

impl<'a> SectionSearch<'a> {
    fn new(sm: &'a SupportModel) -> Self {
        let cover = sm.cover();
        let mut masks = Vec::with_capacity(cover.n_contexts());
        let mut spread = Vec::with_capacity(cover.n_contexts());
        for c in 0..cover.n_contexts() {
            let vars = cover.context(c);
            masks.push(vars.iter().fold(0u32, |m, &v| m | (1 << v)));
            spread.push(
                sm.support(c)
                    .iter()
                    .map(|&cell| {
                        vars.iter()
                            .enumerate()
                            .fold(0u32, |g, (j, &v)| g | (((cell >> j) & 1) << v))
                    })
                    .collect(),
            );
        }
        Self { sm, masks, spread }
    }

    /// Visit every completion of `(assigned, bits)`; `visit` returns false
    /// to stop the whole search early.
    fn walk(
        &self,
        c: usize,
        assigned: u32,
        bits: u32,
        visit: &mut impl FnMut(u32) -> bool,
    ) -> bool {
        if c == self.sm.cover().n_contexts() {
            return visit(bits);
        }
        let mask = self.masks[c];
        let overlap = mask & assigned;
        for &cell_bits in &self.spread[c] {
            if cell_bits & overlap != bits & overlap {
                continue;
            }
            if !self.walk(c + 1, assigned | mask, bits | cell_bits, visit) {
                return false;
            }
        }
        true
    }
}

/// All global assignments `t` with `t|U` in `S(U)` for every context,
/// sorted by bit pattern.
pub fn global_sections(sm: &SupportModel, limit: usize) -> Result<Vec<GlobalAssignment>> {
    let n = sm.cover().n_vars();
    if n > limit {
        return Err(Error::LimitExceeded { got: n, limit });
    }
    let search = SectionSearch::new(sm);
    let mut out = Vec::new();
    search.walk(0, 0, 0, &mut |bits| {
        out.push(GlobalAssignment::from_bits(bits, n));
        true
    });
    out.sort();
    Ok(out)
}

/// Whether the support admits any global section.
pub fn section_exists(sm: &SupportModel, limit: usize) -> Result<bool> {
    let n = sm.cover().n_vars();
    if n > limit {
        return Err(Error::LimitExceeded { got: n, limit });
    }
    let search = SectionSearch::new(sm);
    let mut found = false;
    search.walk(0, 0, 0, &mut |_| {
        found = true;
        false
    });
    Ok(found)
}

/// Whether the support cell `(context, cell)` extends to a global section.
pub fn extends_to_section(
    sm: &SupportModel,
    context: usize,
    cell: u32,
    limit: usize,
) -> Result<bool> {
    let n = sm.cover().n_vars();
    if n > limit {
        return Err(Error::LimitExceeded { got: n, limit });
    }
    if cell >= sm.cover().n_cells(context) {
        return Err(Error::CellOutOfRange { context, cell });
    }
    let search = SectionSearch::new(sm);
    let mask = search.masks[context];
    let bits = sm
        .cover()
        .context(context)
        .iter()
        .enumerate()
        .fold(0u32, |g, (j, &v)| g | (((cell >> j) & 1) << v));
    let mut found = false;
    search.walk(0, mask, bits, &mut |_| {
        found = true;
        false
    });
    Ok(found)
}

/// The 0/1 matrix with one row per `(context, cell)` pair and one column
/// per global assignment; the column of `t` is the stacked deterministic
/// model of `t`.
pub struct IncidenceMatrix {
    cover: MeasurementCover,
    /// Row-major over `(context, cell)`; each row is a column bitset.
    rows: Vec<Vec<u64>>,
    n_cols: u64,
}

impl IncidenceMatrix {
    pub fn new(cover: &MeasurementCover, limit: usize) -> Result<Self> {
        let n = cover.n_vars();
        if n > limit {
            return Err(Error::LimitExceeded { got: n, limit });
        }
        let n_cols = cover.n_global();
        let d = cover.n_table_cells();
        if (n_cols as usize).saturating_mul(d) > INCIDENCE_BIT_BUDGET {
            return Err(Error::LimitExceeded {
                got: n_cols as usize * d,
                limit: INCIDENCE_BIT_BUDGET,
            });
        }
        let words = ((n_cols + 63) / 64) as usize;
        let mut rows = vec![vec![0u64; words]; d];
        for t in 0..n_cols {
            let mut base = 0usize;
            for c in 0..cover.n_contexts() {
                let cell = cover.restrict_bits(t as u32, cover.context(c));
                let r = base + cell as usize;
                rows[r][(t >> 6) as usize] |= 1 << (t & 63);
                base += cover.n_cells(c) as usize;
            }
        }
        Ok(Self {
            cover: cover.clone(),
            rows,
            n_cols,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> u64 {
        self.n_cols
    }

    /// Flat row index of the `(context, cell)` pair.
    pub fn row_index(&self, context: usize, cell: u32) -> usize {
        let mut base = 0usize;
        for c in 0..context {
            base += self.cover.n_cells(c) as usize;
        }
        base + cell as usize
    }

    pub fn entry(&self, row: usize, col: u64) -> bool {
        (self.rows[row][(col >> 6) as usize] >> (col & 63)) & 1 == 1
    }

    /// Column `t` as a rational model vector (the flattened `delta^t`).
    pub fn column(&self, col: u64) -> Vec<Rat> {
        (0..self.n_rows())
            .map(|r| {
                if self.entry(r, col) {
                    rat_int(1)
                } else {
                    Rat::zero()
                }
            })
            .collect()
    }

    pub fn cover(&self) -> &MeasurementCover {
        &self.cover
    }
}

/// Convex weights over global assignments reconstructing a model row-wise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoncontextualDecomposition {
    cover: MeasurementCover,
    weights: BTreeMap<u32, Rat>,
}

impl NoncontextualDecomposition {
    /// Validate a weight map: nonnegative entries summing to exactly 1,
    /// keyed by global assignments of the cover.
    pub fn new(cover: MeasurementCover, weights: BTreeMap<u32, Rat>) -> Result<Self> {
        let mut sum = rat_int(0);
        for (&bits, w) in &weights {
            if u64::from(bits) >= cover.n_global() {
                return Err(Error::BadDocument(format!(
                    "global assignment {bits:#b} out of range for {} variables",
                    cover.n_vars()
                )));
            }
            if w < &rat_int(0) {
                return Err(Error::BadDocument(format!(
                    "negative weight {w} on global assignment {bits:#b}"
                )));
            }
            sum += w;
        }
        if sum != rat_int(1) {
            return Err(Error::BadDocument(format!(
                "decomposition weights sum to {sum}, expected 1"
            )));
        }
        Ok(Self { cover, weights })
    }

    pub fn weights(&self) -> &BTreeMap<u32, Rat> {
        &self.weights
    }

    pub fn cover(&self) -> &MeasurementCover {
        &self.cover
    }

    /// Mix the deterministic models back together; equals the source model
    /// exactly when the decomposition is genuine.
    pub fn reconstruct(&self) -> Result<EmpiricalModel> {
        let models: Vec<EmpiricalModel> = self
            .weights
            .keys()
            .map(|&bits| {
                EmpiricalModel::deterministic(
                    &self.cover,
                    &GlobalAssignment::from_bits(bits, self.cover.n_vars()),
                )
            })
            .collect();
        let weights: Vec<Rat> = self.weights.values().cloned().collect();
        EmpiricalModel::mix(&models, &weights)
    }
}

/// Exact-rational feasibility of `M x = v, sum x = 1, x >= 0`; a solution
/// is returned as the weight map of a non-contextual decomposition.
pub fn find_noncontextual_decomposition(
    m: &EmpiricalModel,
    limit: usize,
) -> Result<Option<NoncontextualDecomposition>> {
    let cover = m.cover();
    let n = cover.n_vars();
    if n > limit {
        return Err(Error::LimitExceeded { got: n, limit });
    }
    let n_cols = cover.n_global() as usize;
    let d = cover.n_table_cells();
    if n_cols.saturating_mul(d + 1) > LP_ENTRY_BUDGET {
        return Err(Error::LimitExceeded {
            got: n_cols * (d + 1),
            limit: LP_ENTRY_BUDGET,
        });
    }

    let mut a: Vec<Vec<Rat>> = vec![vec![Rat::zero(); n_cols]; d + 1];
    for t in 0..n_cols {
        let mut base = 0usize;
        for c in 0..cover.n_contexts() {
            let cell = cover.restrict_bits(t as u32, cover.context(c));
            a[base + cell as usize][t] = rat_int(1);
            base += cover.n_cells(c) as usize;
        }
        a[d][t] = rat_int(1);
    }
    let mut b = m.to_vector();
    b.push(rat_int(1));

    Ok(feasible_point(&a, &b).map(|x| {
        let weights = x
            .into_iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(t, w)| (t as u32, w))
            .collect();
        NoncontextualDecomposition {
            cover: cover.clone(),
            weights,
        }
    }))
}

/// Strongest applicable class for the model.
///
/// The support-level tests run first: they are cheap, and they already
/// decide the two upper classes, so the linear program only ever sees
/// models whose support is globally consistent.
pub fn classify(m: &EmpiricalModel, limit: usize) -> Result<ContextualityClass> {
    let sm = m.support();
    if !section_exists(&sm, limit)? {
        return Ok(ContextualityClass::StronglyContextual);
    }
    let cover = m.cover();
    for c in 0..cover.n_contexts() {
        for &cell in sm.support(c) {
            if !extends_to_section(&sm, c, cell, limit)? {
                return Ok(ContextualityClass::PossibilisticallyContextual);
            }
        }
    }
    if find_noncontextual_decomposition(m, limit)?.is_some() {
        Ok(ContextualityClass::Noncontextual)
    } else {
        Ok(ContextualityClass::ProbabilisticallyContextual)
    }
}
