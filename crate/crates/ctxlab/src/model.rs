//! Measurement covers, assignments, probability and support models.
//!
//! A [`MeasurementCover`] fixes an ordered set of two-outcome variables `X`
//! and a family of contexts (jointly measurable subsets of `X`) whose union
//! is `X`. Outcomes are `0` and `1`. A joint outcome for a context of size
//! `m` is canonically encoded as an `m`-bit cell index: bit `j` holds the
//! outcome of the `j`-th context variable in the cover's variable order.
//! Global assignments are encoded the same way over all of `X`. This gives
//! every row of a probability table a fixed total order on its cells, used
//! for serialization and for incidence-matrix indexing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::{Error, Rat, Result};

/// Representational caps: cells are `u32` bit patterns.
const MAX_VARS: usize = 32;
const MAX_CONTEXT: usize = 24;

/// A set of two-outcome variables together with a family of measurement
/// contexts covering it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementCover {
    variables: Vec<String>,
    /// Per context, the member variables as sorted cover indices.
    contexts: Vec<Vec<usize>>,
}

impl MeasurementCover {
    pub fn new(variables: Vec<String>, contexts: Vec<Vec<String>>) -> Result<Self> {
        if variables.len() > MAX_VARS {
            return Err(Error::LimitExceeded {
                got: variables.len(),
                limit: MAX_VARS,
            });
        }
        let mut seen = BTreeMap::new();
        for (i, v) in variables.iter().enumerate() {
            if seen.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVariable(v.clone()));
            }
        }
        let mut resolved: Vec<Vec<usize>> = Vec::with_capacity(contexts.len());
        for (c, ctx) in contexts.iter().enumerate() {
            if ctx.is_empty() {
                return Err(Error::EmptyContext(c));
            }
            let mut ids = Vec::with_capacity(ctx.len());
            for name in ctx {
                let id = *seen
                    .get(name)
                    .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
                ids.push(id);
            }
            ids.sort_unstable();
            ids.dedup();
            if ids.len() != ctx.len() {
                // A repeated variable inside one context collapses; treat as duplicate.
                return Err(Error::DuplicateVariable(ctx[0].clone()));
            }
            if ids.len() > MAX_CONTEXT {
                return Err(Error::LimitExceeded {
                    got: ids.len(),
                    limit: MAX_CONTEXT,
                });
            }
            resolved.push(ids);
        }
        for i in 0..resolved.len() {
            for j in i + 1..resolved.len() {
                if resolved[i] == resolved[j] {
                    return Err(Error::DuplicateContext(i, j));
                }
            }
        }
        let mut covered = vec![false; variables.len()];
        for ctx in &resolved {
            for &v in ctx {
                covered[v] = true;
            }
        }
        if let Some(v) = covered.iter().position(|c| !c) {
            return Err(Error::UncoveredVariable(variables[v].clone()));
        }
        Ok(Self {
            variables,
            contexts: resolved,
        })
    }

    /// Convenience constructor from string slices.
    pub fn from_names(variables: &[&str], contexts: &[&[&str]]) -> Result<Self> {
        Self::new(
            variables.iter().map(|s| s.to_string()).collect(),
            contexts
                .iter()
                .map(|c| c.iter().map(|s| s.to_string()).collect())
                .collect(),
        )
    }

    pub fn n_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn var_name(&self, v: usize) -> &str {
        &self.variables[v]
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn n_contexts(&self) -> usize {
        self.contexts.len()
    }

    /// Member variables of context `c`, as sorted cover indices.
    pub fn context(&self, c: usize) -> &[usize] {
        &self.contexts[c]
    }

    pub fn contexts(&self) -> &[Vec<usize>] {
        &self.contexts
    }

    pub fn context_names(&self, c: usize) -> Vec<String> {
        self.contexts[c]
            .iter()
            .map(|&v| self.variables[v].clone())
            .collect()
    }

    pub fn context_size(&self, c: usize) -> usize {
        self.contexts[c].len()
    }

    /// Number of cells (joint outcomes) of context `c`.
    pub fn n_cells(&self, c: usize) -> u32 {
        1u32 << self.contexts[c].len()
    }

    /// Number of global assignments `2^|X|`.
    pub fn n_global(&self) -> u64 {
        1u64 << self.variables.len()
    }

    /// Total number of `(context, cell)` pairs across all rows.
    pub fn n_table_cells(&self) -> usize {
        self.contexts.iter().map(|c| 1usize << c.len()).sum()
    }

    /// Offset of context `c`'s block in the row-major table layout.
    pub fn row_offset(&self, c: usize) -> usize {
        self.contexts[..c].iter().map(|x| 1usize << x.len()).sum()
    }

    /// Find the context whose variable set equals `names`, in any order.
    pub fn find_context(&self, names: &[String]) -> Result<usize> {
        let mut ids: Vec<usize> = Vec::with_capacity(names.len());
        for n in names {
            ids.push(self.var_index(n)?);
        }
        ids.sort_unstable();
        ids.dedup();
        self.contexts
            .iter()
            .position(|c| *c == ids)
            .ok_or_else(|| Error::NoSuchContext(names.to_vec()))
    }

    /// Restrict a global bit pattern to the given variable list.
    pub fn restrict_bits(&self, global: u32, vars: &[usize]) -> u32 {
        let mut cell = 0u32;
        for (j, &v) in vars.iter().enumerate() {
            cell |= ((global >> v) & 1) << j;
        }
        cell
    }

    pub fn cell_bitstring(&self, c: usize, cell: u32) -> String {
        bits_to_string(cell, self.contexts[c].len())
    }

    pub fn parse_cell(&self, c: usize, s: &str) -> Result<u32> {
        let m = self.contexts[c].len();
        let bits = string_to_bits(s, m).ok_or_else(|| Error::BadDocument(format!(
            "cell `{s}` is not a {m}-bit outcome string"
        )))?;
        Ok(bits)
    }

    pub fn global_bitstring(&self, t: &GlobalAssignment) -> String {
        bits_to_string(t.bits, self.variables.len())
    }

    pub fn parse_global(&self, s: &str) -> Result<GlobalAssignment> {
        let n = self.variables.len();
        let bits = string_to_bits(s, n).ok_or_else(|| Error::BadDocument(format!(
            "assignment `{s}` is not a {n}-bit outcome string"
        )))?;
        Ok(GlobalAssignment { bits, n_vars: n })
    }

    /// Iterate all global assignments, gated by the enumeration limit.
    pub fn all_globals(&self, limit: usize) -> Result<impl Iterator<Item = GlobalAssignment> + '_> {
        let n = self.variables.len();
        if n > limit {
            return Err(Error::LimitExceeded { got: n, limit });
        }
        Ok((0u64..self.n_global()).map(move |t| GlobalAssignment {
            bits: t as u32,
            n_vars: n,
        }))
    }
}

fn bits_to_string(bits: u32, len: usize) -> String {
    (0..len)
        .map(|j| if (bits >> j) & 1 == 1 { '1' } else { '0' })
        .collect()
}

fn string_to_bits(s: &str, len: usize) -> Option<u32> {
    if s.len() != len {
        return None;
    }
    let mut bits = 0u32;
    for (j, ch) in s.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => bits |= 1 << j,
            _ => return None,
        }
    }
    Some(bits)
}

/// A total outcome assignment `t : X -> {0,1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GlobalAssignment {
    bits: u32,
    n_vars: usize,
}

impl GlobalAssignment {
    pub fn from_bits(bits: u32, n_vars: usize) -> Self {
        debug_assert!(n_vars >= 32 || bits < (1u32 << n_vars) as u32 || n_vars == 32);
        Self { bits, n_vars }
    }

    /// Build from a full map of variable names to outcomes.
    pub fn from_map(cover: &MeasurementCover, values: &BTreeMap<String, u8>) -> Result<Self> {
        let mut bits = 0u32;
        for (name, &val) in values {
            let v = cover.var_index(name)?;
            if val == 1 {
                bits |= 1 << v;
            }
        }
        if values.len() != cover.n_vars() {
            for v in cover.variables() {
                if !values.contains_key(v) {
                    return Err(Error::UnknownVariable(v.clone()));
                }
            }
        }
        Ok(Self {
            bits,
            n_vars: cover.n_vars(),
        })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// Outcome of variable `v`.
    pub fn value(&self, v: usize) -> u8 {
        ((self.bits >> v) & 1) as u8
    }

    /// Restriction `t|U` to a sorted list of variable indices.
    pub fn restrict_to(&self, vars: &[usize]) -> LocalAssignment {
        let mut cell = 0u32;
        for (j, &v) in vars.iter().enumerate() {
            cell |= ((self.bits >> v) & 1) << j;
        }
        LocalAssignment {
            vars: vars.to_vec(),
            cell,
        }
    }

    /// Restriction by variable names; errors on names outside the cover.
    pub fn restrict(&self, cover: &MeasurementCover, names: &[String]) -> Result<LocalAssignment> {
        let mut ids = Vec::with_capacity(names.len());
        for n in names {
            ids.push(cover.var_index(n)?);
        }
        ids.sort_unstable();
        ids.dedup();
        Ok(self.restrict_to(&ids))
    }
}

/// A joint outcome `s : U -> {0,1}` for one set of variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalAssignment {
    vars: Vec<usize>,
    cell: u32,
}

impl LocalAssignment {
    pub fn new(vars: Vec<usize>, cell: u32) -> Self {
        debug_assert!(vars.windows(2).all(|w| w[0] < w[1]));
        Self { vars, cell }
    }

    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn cell(&self) -> u32 {
        self.cell
    }

    pub fn value_of(&self, v: usize) -> Option<u8> {
        self.vars
            .iter()
            .position(|&x| x == v)
            .map(|j| ((self.cell >> j) & 1) as u8)
    }

    /// Further restriction to a subset of this assignment's variables.
    pub fn restrict_to(&self, vars: &[usize]) -> LocalAssignment {
        let mut cell = 0u32;
        for (j, &v) in vars.iter().enumerate() {
            let pos = self
                .vars
                .iter()
                .position(|&x| x == v)
                .expect("restriction target must be a subset");
            cell |= ((self.cell >> pos) & 1) << j;
        }
        LocalAssignment {
            vars: vars.to_vec(),
            cell,
        }
    }

    pub fn to_map(&self, cover: &MeasurementCover) -> BTreeMap<String, u8> {
        self.vars
            .iter()
            .enumerate()
            .map(|(j, &v)| (cover.var_name(v).to_string(), ((self.cell >> j) & 1) as u8))
            .collect()
    }

    pub fn bitstring(&self) -> String {
        bits_to_string(self.cell, self.vars.len())
    }
}

/// An exact-rational probability distribution on every row of the cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalModel {
    cover: MeasurementCover,
    /// `rows[c][cell]`, dense in canonical cell order.
    rows: Vec<Vec<Rat>>,
}

impl EmpiricalModel {
    /// Validates row lengths, non-negativity and exact row sums.
    pub fn new(cover: MeasurementCover, rows: Vec<Vec<Rat>>) -> Result<Self> {
        if rows.len() != cover.n_contexts() {
            return Err(Error::BadDocument(format!(
                "{} rows for {} contexts",
                rows.len(),
                cover.n_contexts()
            )));
        }
        for (c, row) in rows.iter().enumerate() {
            let want = cover.n_cells(c) as usize;
            if row.len() != want {
                return Err(Error::RowLength {
                    context: c,
                    expected: want,
                    got: row.len(),
                });
            }
            let mut sum = Rat::zero();
            for (cell, p) in row.iter().enumerate() {
                if p < &Rat::zero() {
                    return Err(Error::NegativeProbability {
                        context: c,
                        cell: cell as u32,
                        value: p.to_string(),
                    });
                }
                sum += p;
            }
            if !sum.is_one() {
                return Err(Error::RowSum {
                    context: c,
                    sum: sum.to_string(),
                });
            }
        }
        Ok(Self { cover, rows })
    }

    /// The deterministic model `δ^t`: each row puts all mass on `t|U`.
    pub fn deterministic(cover: &MeasurementCover, t: &GlobalAssignment) -> Self {
        let rows = cover
            .contexts()
            .iter()
            .map(|ctx| {
                let cell = cover.restrict_bits(t.bits(), ctx);
                let mut row = vec![Rat::zero(); 1usize << ctx.len()];
                row[cell as usize] = Rat::one();
                row
            })
            .collect();
        Self {
            cover: cover.clone(),
            rows,
        }
    }

    /// Convex combination of models over a shared cover.
    pub fn mix(models: &[EmpiricalModel], weights: &[Rat]) -> Result<EmpiricalModel> {
        if models.is_empty() || models.len() != weights.len() {
            return Err(Error::BadWeights(format!(
                "{} weights for {} models",
                weights.len(),
                models.len()
            )));
        }
        let cover = &models[0].cover;
        if models.iter().any(|m| &m.cover != cover) {
            return Err(Error::CoverMismatch);
        }
        let mut sum = Rat::zero();
        for w in weights {
            if w < &Rat::zero() {
                return Err(Error::BadWeights(format!("negative weight {w}")));
            }
            sum += w;
        }
        if !sum.is_one() {
            return Err(Error::BadWeights(format!("weights sum to {sum}")));
        }
        let mut rows: Vec<Vec<Rat>> = cover
            .contexts()
            .iter()
            .map(|ctx| vec![Rat::zero(); 1usize << ctx.len()])
            .collect();
        for (m, w) in models.iter().zip(weights) {
            for (c, row) in m.rows.iter().enumerate() {
                for (cell, p) in row.iter().enumerate() {
                    if !p.is_zero() {
                        rows[c][cell] += w * p;
                    }
                }
            }
        }
        Self::new(cover.clone(), rows)
    }

    /// Uniform distribution on each row's support.
    pub fn uniform_on_support(sm: &SupportModel) -> Self {
        let rows = sm
            .supports
            .iter()
            .enumerate()
            .map(|(c, sup)| {
                let share = Rat::new(1.into(), (sup.len() as i64).into());
                let mut row = vec![Rat::zero(); sm.cover.n_cells(c) as usize];
                for &cell in sup {
                    row[cell as usize] = share.clone();
                }
                row
            })
            .collect();
        Self {
            cover: sm.cover.clone(),
            rows,
        }
    }

    pub fn cover(&self) -> &MeasurementCover {
        &self.cover
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    pub fn row(&self, c: usize) -> &[Rat] {
        &self.rows[c]
    }

    pub fn prob(&self, c: usize, cell: u32) -> &Rat {
        &self.rows[c][cell as usize]
    }

    /// Probability of an event (set of cells) in one row.
    pub fn event_prob<I: IntoIterator<Item = u32>>(&self, c: usize, cells: I) -> Rat {
        let mut p = Rat::zero();
        for cell in cells {
            p += &self.rows[c][cell as usize];
        }
        p
    }

    /// The possibilistic shadow: cells with strictly positive probability.
    pub fn support(&self) -> SupportModel {
        let supports = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(cell, _)| cell as u32)
                    .collect()
            })
            .collect();
        SupportModel {
            cover: self.cover.clone(),
            supports,
        }
    }

    /// No-signalling: marginals of every pair of rows agree exactly on the
    /// overlap of their contexts.
    pub fn is_no_signalling(&self) -> bool {
        let n = self.cover.n_contexts();
        for a in 0..n {
            for b in a + 1..n {
                let overlap: Vec<usize> = self
                    .cover
                    .context(a)
                    .iter()
                    .copied()
                    .filter(|v| self.cover.context(b).contains(v))
                    .collect();
                if overlap.is_empty() {
                    continue;
                }
                if self.marginal(a, &overlap) != self.marginal(b, &overlap) {
                    return false;
                }
            }
        }
        true
    }

    /// Marginal distribution of row `c` on a sorted subset of its variables,
    /// keyed by cell over `target`.
    pub fn marginal(&self, c: usize, target: &[usize]) -> BTreeMap<u32, Rat> {
        let ctx = self.cover.context(c);
        let mut out: BTreeMap<u32, Rat> = BTreeMap::new();
        for (cell, p) in self.rows[c].iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let local = LocalAssignment::new(ctx.to_vec(), cell as u32);
            let key = local.restrict_to(target).cell();
            *out.entry(key).or_insert_with(Rat::zero) += p;
        }
        out
    }

    /// Flatten to the model vector over `(context, cell)` pairs in row-major
    /// canonical order.
    pub fn to_vector(&self) -> Vec<Rat> {
        self.rows.iter().flatten().cloned().collect()
    }

    pub fn from_vector(cover: &MeasurementCover, v: &[Rat]) -> Result<Self> {
        if v.len() != cover.n_table_cells() {
            return Err(Error::CoefficientLength {
                expected: cover.n_table_cells(),
                got: v.len(),
            });
        }
        let mut rows = Vec::with_capacity(cover.n_contexts());
        let mut at = 0usize;
        for c in 0..cover.n_contexts() {
            let len = cover.n_cells(c) as usize;
            rows.push(v[at..at + len].to_vec());
            at += len;
        }
        Self::new(cover.clone(), rows)
    }
}

/// The supports `S(U)` of a model, one nonempty cell set per context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportModel {
    cover: MeasurementCover,
    supports: Vec<BTreeSet<u32>>,
}

impl SupportModel {
    pub fn new(cover: MeasurementCover, supports: Vec<BTreeSet<u32>>) -> Result<Self> {
        if supports.len() != cover.n_contexts() {
            return Err(Error::BadDocument(format!(
                "{} support rows for {} contexts",
                supports.len(),
                cover.n_contexts()
            )));
        }
        for (c, sup) in supports.iter().enumerate() {
            if sup.is_empty() {
                return Err(Error::EmptySupport(c));
            }
            for &cell in sup {
                if cell >= cover.n_cells(c) {
                    return Err(Error::CellOutOfRange {
                        context: c,
                        cell,
                    });
                }
            }
        }
        Ok(Self { cover, supports })
    }

    pub fn cover(&self) -> &MeasurementCover {
        &self.cover
    }

    pub fn support(&self, c: usize) -> &BTreeSet<u32> {
        &self.supports[c]
    }

    pub fn supports(&self) -> &[BTreeSet<u32>] {
        &self.supports
    }

    pub fn contains(&self, c: usize, cell: u32) -> bool {
        self.supports[c].contains(&cell)
    }

    /// Full support on every row.
    pub fn full(cover: MeasurementCover) -> Self {
        let supports = (0..cover.n_contexts())
            .map(|c| (0..cover.n_cells(c)).collect())
            .collect();
        Self { cover, supports }
    }
}

impl fmt::Display for GlobalAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", bits_to_string(self.bits, self.n_vars))
    }
}

/// The `(n, k, 2^p)` scenario cover: `n` sites, `k` settings per site, each
/// setting a block of `p` dichotomic variables. Contexts pick one setting
/// block per site; there are `k^n` of them, each of size `n*p`.
///
/// Variable names: sites are lettered `a`, `b`, ..; a setting adds one prime
/// per extra setting index; for `p > 1` a numeric suffix distinguishes the
/// block members. `(2,2,1)` yields `a, a', b, b'` with the four familiar
/// contexts in setting-choice order.
pub fn bell_scenario_cover(n: usize, k: usize, p: usize) -> Result<MeasurementCover> {
    if n < 1 || k < 1 || p < 1 {
        return Err(Error::BadScenario(format!(
            "(n,k,p) = ({n},{k},{p}) must all be at least 1"
        )));
    }
    if n > 26 {
        return Err(Error::BadScenario(format!("{n} sites exceed 26")));
    }
    if n * k * p > MAX_VARS {
        return Err(Error::LimitExceeded {
            got: n * k * p,
            limit: MAX_VARS,
        });
    }
    let contexts_total = (k as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if contexts_total > 1 << 16 {
        return Err(Error::BadScenario(format!(
            "{contexts_total} contexts exceed the supported maximum"
        )));
    }

    let mut variables = Vec::with_capacity(n * k * p);
    for site in 0..n {
        let letter = (b'a' + site as u8) as char;
        for setting in 0..k {
            for l in 0..p {
                let mut name = String::new();
                name.push(letter);
                for _ in 0..setting {
                    name.push('\'');
                }
                if p > 1 {
                    name.push_str(&(l + 1).to_string());
                }
                variables.push(name);
            }
        }
    }

    // Setting choices enumerated with site 1 as the most significant digit.
    let mut contexts = Vec::with_capacity(contexts_total as usize);
    for mut choice in 0..contexts_total {
        let mut settings = vec![0usize; n];
        for site in (0..n).rev() {
            settings[site] = (choice % k as u64) as usize;
            choice /= k as u64;
        }
        let mut ctx = Vec::with_capacity(n * p);
        for (site, &setting) in settings.iter().enumerate() {
            let base = site * k * p + setting * p;
            for l in 0..p {
                ctx.push(variables[base + l].clone());
            }
        }
        contexts.push(ctx);
    }

    MeasurementCover::new(variables, contexts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, rat_int};

    pub(crate) fn bell_cover() -> MeasurementCover {
        MeasurementCover::from_names(
            &["a", "a'", "b", "b'"],
            &[&["a", "b"], &["a", "b'"], &["a'", "b"], &["a'", "b'"]],
        )
        .unwrap()
    }

    #[test]
    fn cover_validation() {
        assert!(matches!(
            MeasurementCover::from_names(&["a", "a"], &[&["a"]]),
            Err(Error::DuplicateVariable(_))
        ));
        assert!(matches!(
            MeasurementCover::from_names(&["a", "b"], &[&["a"]]),
            Err(Error::UncoveredVariable(_))
        ));
        assert!(matches!(
            MeasurementCover::from_names(&["a", "b"], &[&["a", "b"], &["b", "a"]]),
            Err(Error::DuplicateContext(0, 1))
        ));
        assert!(matches!(
            MeasurementCover::from_names(&["a"], &[&[], &["a"]]),
            Err(Error::EmptyContext(0))
        ));
        // Nested contexts are allowed.
        let nested = MeasurementCover::from_names(&["a", "b"], &[&["a", "b"], &["a"]]);
        assert!(nested.is_ok());
    }

    #[test]
    fn restriction_examples() {
        let cover = bell_cover();
        // t = {a -> 0, b -> 1, a' -> 1, b' -> 0}
        let mut map = BTreeMap::new();
        map.insert("a".to_string(), 0);
        map.insert("b".to_string(), 1);
        map.insert("a'".to_string(), 1);
        map.insert("b'".to_string(), 0);
        let t = GlobalAssignment::from_map(&cover, &map).unwrap();
        let s = t
            .restrict(&cover, &["a".to_string(), "b".to_string()])
            .unwrap();
        assert_eq!(s.to_map(&cover), {
            let mut m = BTreeMap::new();
            m.insert("a".to_string(), 0);
            m.insert("b".to_string(), 1);
            m
        });

        // Restriction to all of X is the identity.
        let all: Vec<String> = cover.variables().to_vec();
        let full = t.restrict(&cover, &all).unwrap();
        assert_eq!(full.cell(), t.bits());

        // Singleton projection.
        let b_only = t.restrict(&cover, &["b".to_string()]).unwrap();
        assert_eq!(b_only.value_of(cover.var_index("b").unwrap()), Some(1));

        // Unknown variable is a domain error.
        assert!(t.restrict(&cover, &["z".to_string()]).is_err());
    }

    #[test]
    fn restriction_is_functorial() {
        for bits in 0..16u32 {
            let t = GlobalAssignment::from_bits(bits, 4);
            let u = vec![0usize, 2, 3]; // {a, b, b'}
            let u_prime = vec![0usize, 3]; // {a, b'}
            let via_u = t.restrict_to(&u).restrict_to(&u_prime);
            let direct = t.restrict_to(&u_prime);
            assert_eq!(via_u, direct);
        }
    }

    #[test]
    fn deterministic_model_rows() {
        let cover = bell_cover();
        let zero = GlobalAssignment::from_bits(0, 4);
        let m = EmpiricalModel::deterministic(&cover, &zero);
        assert_eq!(m.prob(0, 0), &rat_int(1));
        for cell in 1..4 {
            assert_eq!(m.prob(0, cell), &rat_int(0));
        }
        for c in 0..4 {
            assert_eq!(m.support().support(c).len(), 1);
        }

        // t = {a->0, b->1, a'->1, b'->0}: row (a', b') puts mass 1 on (1, 0).
        let mut map = BTreeMap::new();
        map.insert("a".to_string(), 0);
        map.insert("b".to_string(), 1);
        map.insert("a'".to_string(), 1);
        map.insert("b'".to_string(), 0);
        let t = GlobalAssignment::from_map(&cover, &map).unwrap();
        let m = EmpiricalModel::deterministic(&cover, &t);
        let c = cover
            .find_context(&["a'".to_string(), "b'".to_string()])
            .unwrap();
        // cell (a'->1, b'->0) has bit 0 set.
        assert_eq!(m.prob(c, 0b01), &rat_int(1));
    }

    #[test]
    fn mix_identity_and_uniform() {
        let cover = bell_cover();
        let t = GlobalAssignment::from_bits(6, 4);
        let m = EmpiricalModel::deterministic(&cover, &t);
        let same = EmpiricalModel::mix(std::slice::from_ref(&m), &[rat_int(1)]).unwrap();
        assert_eq!(same, m);

        // Equal mixture of all 16 deterministic models. Independent oracle:
        // count, per row cell, how many global assignments restrict onto it.
        let models: Vec<_> = (0..16u32)
            .map(|bits| EmpiricalModel::deterministic(&cover, &GlobalAssignment::from_bits(bits, 4)))
            .collect();
        let weights = vec![rat(1, 16); 16];
        let mixed = EmpiricalModel::mix(&models, &weights).unwrap();
        for c in 0..cover.n_contexts() {
            for cell in 0..cover.n_cells(c) {
                let count = (0..16u32)
                    .filter(|&t| cover.restrict_bits(t, cover.context(c)) == cell)
                    .count();
                let expected = rat(count as i64, 16);
                assert_eq!(mixed.prob(c, cell), &expected);
                assert_eq!(expected, rat(1, 4));
            }
        }
    }

    #[test]
    fn mix_ignores_vars_outside_shared_rows() {
        let cover = bell_cover();
        // t and t' differ only at b' (bit 3).
        let t = GlobalAssignment::from_bits(0b0000, 4);
        let t2 = GlobalAssignment::from_bits(0b1000, 4);
        let m1 = EmpiricalModel::deterministic(&cover, &t);
        let m2 = EmpiricalModel::deterministic(&cover, &t2);
        let mixed = EmpiricalModel::mix(&[m1.clone(), m2], &[rat(1, 2), rat(1, 2)]).unwrap();
        // Rows not containing b' coincide with the rows of δ^t.
        for c in 0..cover.n_contexts() {
            if !cover.context(c).contains(&3) {
                assert_eq!(mixed.row(c), m1.row(c));
            }
        }
    }

    #[test]
    fn mix_rejects_bad_weights() {
        let cover = bell_cover();
        let m = EmpiricalModel::deterministic(&cover, &GlobalAssignment::from_bits(0, 4));
        assert!(EmpiricalModel::mix(&[m.clone()], &[rat(1, 2)]).is_err());
        assert!(EmpiricalModel::mix(&[m.clone(), m.clone()], &[rat(3, 2), rat(-1, 2)]).is_err());
    }

    #[test]
    fn model_validation_rejects_bad_rows() {
        let cover = bell_cover();
        let mut rows: Vec<Vec<Rat>> = (0..4).map(|_| vec![rat(1, 4); 4]).collect();
        rows[2][0] = rat(1, 2);
        assert!(matches!(
            EmpiricalModel::new(cover.clone(), rows),
            Err(Error::RowSum { context: 2, .. })
        ));
        let mut rows: Vec<Vec<Rat>> = (0..4).map(|_| vec![rat(1, 4); 4]).collect();
        rows[1][0] = rat(-1, 4);
        rows[1][1] = rat(3, 4);
        assert!(matches!(
            EmpiricalModel::new(cover, rows),
            Err(Error::NegativeProbability { context: 1, .. })
        ));
    }

    #[test]
    fn no_signalling_detects_marginal_mismatch() {
        let cover = bell_cover();
        // Row (a,b) is a point mass on (0,0); row (a,b') on (1,0): the
        // marginal of `a` differs, 0 against 1.
        let mut rows: Vec<Vec<Rat>> = (0..4).map(|_| vec![rat(1, 4); 4]).collect();
        rows[0] = vec![rat_int(1), rat_int(0), rat_int(0), rat_int(0)];
        rows[1] = vec![rat_int(0), rat_int(1), rat_int(0), rat_int(0)];
        let m = EmpiricalModel::new(cover, rows).unwrap();
        assert!(!m.is_no_signalling());
    }

    #[test]
    fn scenario_covers() {
        let c221 = bell_scenario_cover(2, 2, 1).unwrap();
        assert_eq!(c221, bell_cover());

        let c321 = bell_scenario_cover(3, 2, 1).unwrap();
        assert_eq!(c321.n_contexts(), 8);
        assert!((0..8).all(|c| c321.context_size(c) == 3));
        assert_eq!(c321.n_vars(), 6);

        let c112 = bell_scenario_cover(1, 1, 2).unwrap();
        assert_eq!(c112.n_contexts(), 1);
        assert_eq!(c112.context_size(0), 2);
        assert_eq!(c112.variables(), &["a1".to_string(), "a2".to_string()]);

        assert!(bell_scenario_cover(0, 1, 1).is_err());
    }

    #[test]
    fn scenario_cover_shape_property() {
        for (n, k, p) in [(2, 2, 1), (3, 2, 1), (2, 3, 1), (2, 2, 2)] {
            let cover = bell_scenario_cover(n, k, p).unwrap();
            assert_eq!(cover.n_contexts(), k.pow(n as u32));
            assert!((0..cover.n_contexts()).all(|c| cover.context_size(c) == n * p));
            assert_eq!(cover.n_vars(), n * k * p);
        }
    }

    #[test]
    fn vector_round_trip() {
        let cover = bell_cover();
        let m = EmpiricalModel::deterministic(&cover, &GlobalAssignment::from_bits(9, 4));
        let v = m.to_vector();
        assert_eq!(v.len(), 16);
        let back = EmpiricalModel::from_vector(&cover, &v).unwrap();
        assert_eq!(back, m);
    }
}
