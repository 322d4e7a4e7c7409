//! Logical Bell inequalities, their evaluation, and the conversions between
//! the rational, correlation, and logical presentations.
//!
//! A logical Bell inequality states `sum k_i p(phi_i) <= K` for a multiset
//! of context-tagged formulas that is `K`-consistent: no simultaneously
//! satisfiable sub-multiset has cardinality above `K`. Every non-contextual
//! model obeys it. The conversions here translate linear inequalities over
//! table cells (valid on all deterministic models) and over expectation
//! values into that logical form and back, preserving the satisfaction set
//! model-for-model.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::logic::{
    self, max_satisfiable, parity_formula, point_formula, support_formula, FormulaMultiset,
    Parity, TaggedFormula, TruthTable,
};
use crate::model::{EmpiricalModel, MeasurementCover, SupportModel};
use crate::{rat_int, Error, Int, Rat, Result};

/// A `K`-consistent formula multiset with its bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicalBellInequality {
    multiset: FormulaMultiset,
    bound: u64,
}

impl LogicalBellInequality {
    /// Verifies `K`-consistency by MAX-SAT before accepting the bound.
    pub fn new(multiset: FormulaMultiset, bound: u64, limit: usize) -> Result<Self> {
        let max_sat = max_satisfiable(&multiset, limit)?;
        if max_sat > bound {
            return Err(Error::NotConsistent { bound, max_sat });
        }
        Ok(Self { multiset, bound })
    }

    /// Skips the consistency check. Only for pipelines where the bound is
    /// guaranteed by construction; independent verification stays possible
    /// through [`Self::verify_consistency`].
    pub fn new_unchecked(multiset: FormulaMultiset, bound: u64) -> Self {
        Self { multiset, bound }
    }

    pub fn multiset(&self) -> &FormulaMultiset {
        &self.multiset
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn cardinality(&self) -> u64 {
        self.multiset.cardinality()
    }

    /// Re-run the MAX-SAT check; the inequality is sound iff this holds.
    pub fn verify_consistency(&self, limit: usize) -> Result<bool> {
        Ok(max_satisfiable(&self.multiset, limit)? <= self.bound)
    }

    /// Divide all multiplicities and the bound by their common gcd. The
    /// satisfaction set is unchanged; a shared factor scales both sides.
    pub fn reduced(&self) -> Self {
        let mut g = self.bound;
        for (k, _) in self.multiset.entries() {
            g = g.gcd(k);
        }
        if g <= 1 {
            return self.clone();
        }
        let entries = self
            .multiset
            .entries()
            .iter()
            .map(|(k, tf)| (k / g, tf.clone()))
            .collect();
        Self {
            multiset: FormulaMultiset::from_entries(entries),
            bound: self.bound / g,
        }
    }
}

/// Probability of the formula's satisfying event in its model row.
pub fn formula_probability(m: &EmpiricalModel, tf: &TaggedFormula) -> Result<Rat> {
    let c = m.cover().find_context(tf.context())?;
    let names = m.cover().context_names(c);
    let table = TruthTable::of(tf.formula(), &names)?;
    Ok(m.event_prob(c, table.satisfying().into_iter().map(|s| s as u32)))
}

/// Left side `sum k_i p(phi_i)` and violation `max(0, lhs - K)` of the
/// inequality on the model.
pub fn evaluate_logical(
    m: &EmpiricalModel,
    ineq: &LogicalBellInequality,
) -> Result<(Rat, Rat)> {
    let mut lhs = Rat::zero();
    for (k, tf) in ineq.multiset().entries() {
        if *k == 0 {
            continue;
        }
        lhs += Rat::from_integer((*k).into()) * formula_probability(m, tf)?;
    }
    let bound = rat_int(ineq.bound() as i64);
    let violation = if lhs > bound {
        lhs.clone() - bound
    } else {
        Rat::zero()
    };
    Ok((lhs, violation))
}

/// One support formula per context, with the bound set to the computed
/// MAX-SAT value. Strongly contextual supports get `K = |contexts| - 1`
/// and are violated maximally by any model carrying those supports.
pub fn canonical_support_inequality(
    sm: &SupportModel,
    limit: usize,
) -> Result<LogicalBellInequality> {
    let cover = sm.cover();
    let mut ms = FormulaMultiset::new();
    for c in 0..cover.n_contexts() {
        let names = cover.context_names(c);
        let cells: Vec<u32> = sm.support(c).iter().copied().collect();
        let formula = support_formula(&names, &cells)?;
        ms.push(1, TaggedFormula::new(names, formula)?);
    }
    let bound = max_satisfiable(&ms, limit)?;
    Ok(LogicalBellInequality::new_unchecked(ms, bound))
}

/// The witness inequality of a support cell that extends to no global
/// section: its point formula plus the other rows' support formulas, with
/// bound `|contexts| - 1`. The violation on the source model is exactly the
/// cell's probability.
pub fn possibilistic_witness_inequality(
    m: &EmpiricalModel,
    context: usize,
    cell: u32,
    limit: usize,
) -> Result<LogicalBellInequality> {
    let cover = m.cover();
    if cell >= cover.n_cells(context) {
        return Err(Error::CellOutOfRange { context, cell });
    }
    if m.prob(context, cell).is_zero() {
        return Err(Error::NotInSupport { context, cell });
    }
    let sm = m.support();
    if crate::contextuality::extends_to_section(&sm, context, cell, limit)? {
        return Err(Error::ExtendsToSection { context, cell });
    }
    let mut ms = FormulaMultiset::new();
    ms.push(
        1,
        TaggedFormula::new(
            cover.context_names(context),
            point_formula(&cover.context_names(context), cell),
        )?,
    );
    for c in 0..cover.n_contexts() {
        if c == context {
            continue;
        }
        let names = cover.context_names(c);
        let cells: Vec<u32> = sm.support(c).iter().copied().collect();
        ms.push(1, TaggedFormula::new(names.clone(), support_formula(&names, &cells)?)?);
    }
    let bound = cover.n_contexts() as u64 - 1;
    LogicalBellInequality::new(ms, bound, limit)
}

/// Per-context expectation values, each in `[-1, +1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectationVector {
    values: Vec<Rat>,
}

impl ExpectationVector {
    pub fn new(values: Vec<Rat>) -> Result<Self> {
        for v in &values {
            if v.abs() > rat_int(1) {
                return Err(Error::ExpectationRange(v.to_string()));
            }
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn value(&self, c: usize) -> &Rat {
        &self.values[c]
    }
}

/// `E_U = 2 p(psi_U) - 1`, where `psi_U` holds on the cells with an even
/// number of `1` outcomes. Equivalently the signed sum over the row.
pub fn expectation_vector(m: &EmpiricalModel) -> ExpectationVector {
    let values = (0..m.cover().n_contexts())
        .map(|c| {
            let mut e = Rat::zero();
            for (cell, p) in m.row(c).iter().enumerate() {
                if cell.count_ones() % 2 == 0 {
                    e += p;
                } else {
                    e -= p;
                }
            }
            e
        })
        .collect();
    ExpectationVector { values }
}

/// The vertex `eta^t`: `+1` on contexts where `t` restricts to an even
/// number of `1`s, else `-1`.
pub fn deterministic_expectation(cover: &MeasurementCover, t_bits: u32) -> ExpectationVector {
    let values = (0..cover.n_contexts())
        .map(|c| {
            let cell = cover.restrict_bits(t_bits, cover.context(c));
            if cell.count_ones() % 2 == 0 {
                rat_int(1)
            } else {
                rat_int(-1)
            }
        })
        .collect();
    ExpectationVector { values }
}

/// `|sum_i (2 p(phi_i) - 1)|` for a jointly unsatisfiable formula family;
/// non-contextual models keep this at or below `N - 2`.
pub fn chsh_functional(
    m: &EmpiricalModel,
    formulas: &[TaggedFormula],
    limit: usize,
) -> Result<Rat> {
    if logic::is_jointly_satisfiable(formulas, limit)?.is_some() {
        return Err(Error::JointlySatisfiable);
    }
    let mut sum = Rat::zero();
    for tf in formulas {
        sum += rat_int(2) * formula_probability(m, tf)? - rat_int(1);
    }
    Ok(sum.abs())
}

/// A linear inequality `sum_(U,s) r[U,s] d_U(s) <= bound` over the
/// row-major table cells of a cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalInequality {
    coeffs: Vec<Rat>,
    bound: Rat,
}

impl RationalInequality {
    pub fn new(cover: &MeasurementCover, coeffs: Vec<Rat>, bound: Rat) -> Result<Self> {
        if coeffs.len() != cover.n_table_cells() {
            return Err(Error::CoefficientLength {
                expected: cover.n_table_cells(),
                got: coeffs.len(),
            });
        }
        Ok(Self { coeffs, bound })
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn bound(&self) -> &Rat {
        &self.bound
    }

    /// Clear denominators and divide by the gcd of all entries, giving the
    /// canonical integer form with the same solution set.
    pub fn canonical(&self) -> RationalInequality {
        let (ints, bound) = self.integer_data();
        RationalInequality {
            coeffs: ints.into_iter().map(Rat::from_integer).collect(),
            bound: Rat::from_integer(bound),
        }
    }

    /// Canonical integer coefficients and bound.
    pub fn integer_data(&self) -> (Vec<Int>, Int) {
        let mut lcd = Int::one();
        for v in self.coeffs.iter().chain(std::iter::once(&self.bound)) {
            lcd = lcd.lcm(v.denom());
        }
        let scale = |v: &Rat| -> Int { (v * Rat::from_integer(lcd.clone())).to_integer() };
        let ints: Vec<Int> = self.coeffs.iter().map(scale).collect();
        let bound = scale(&self.bound);
        let mut g = bound.abs();
        for v in &ints {
            g = g.gcd(v);
        }
        if g > Int::one() {
            (ints.iter().map(|v| v / &g).collect(), bound / g)
        } else {
            (ints, bound)
        }
    }

    /// `sum r . v` for the model's flattened table vector.
    pub fn lhs_on(&self, m: &EmpiricalModel) -> Rat {
        self.coeffs
            .iter()
            .zip(m.to_vector())
            .fold(Rat::zero(), |acc, (r, v)| acc + r * v)
    }

    pub fn holds_on(&self, m: &EmpiricalModel) -> bool {
        self.lhs_on(m) <= self.bound
    }
}

/// A correlation inequality `sum_U l_U E_U <= M` with integer data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationInequality {
    coeffs: Vec<Int>,
    bound: Int,
}

impl CorrelationInequality {
    pub fn new(cover: &MeasurementCover, coeffs: Vec<Int>, bound: Int) -> Result<Self> {
        if coeffs.len() != cover.n_contexts() {
            return Err(Error::CoefficientLength {
                expected: cover.n_contexts(),
                got: coeffs.len(),
            });
        }
        Ok(Self { coeffs, bound })
    }

    pub fn from_i64(cover: &MeasurementCover, coeffs: &[i64], bound: i64) -> Result<Self> {
        Self::new(
            cover,
            coeffs.iter().map(|&c| Int::from(c)).collect(),
            Int::from(bound),
        )
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn bound(&self) -> &Int {
        &self.bound
    }

    pub fn lhs_on(&self, ev: &ExpectationVector) -> Rat {
        self.coeffs
            .iter()
            .zip(ev.values())
            .fold(Rat::zero(), |acc, (l, e)| acc + Rat::from_integer(l.clone()) * e)
    }

    pub fn holds_on(&self, ev: &ExpectationVector) -> bool {
        self.lhs_on(ev) <= Rat::from_integer(self.bound.clone())
    }

    /// Divide coefficients and bound by their common gcd.
    pub fn canonical(&self) -> CorrelationInequality {
        let mut g = self.bound.abs();
        for l in &self.coeffs {
            g = g.gcd(l);
        }
        if g > Int::one() {
            CorrelationInequality {
                coeffs: self.coeffs.iter().map(|l| l / &g).collect(),
                bound: &self.bound / &g,
            }
        } else {
            self.clone()
        }
    }
}

fn multiplicity(k: &Int) -> Result<u64> {
    k.abs()
        .to_u64()
        .ok_or_else(|| Error::BadDocument(format!("coefficient {k} too large for a multiplicity")))
}

/// Left side of the cell inequality on the deterministic model of `t`.
fn deterministic_cell_lhs(cover: &MeasurementCover, k: &[Int], t: u32) -> Int {
    let mut lhs = Int::zero();
    for c in 0..cover.n_contexts() {
        let cell = cover.restrict_bits(t, cover.context(c));
        lhs += &k[cover.row_offset(c) + cell as usize];
    }
    lhs
}

/// Convert a cell inequality that is valid on all deterministic models into
/// an equivalent logical Bell inequality.
///
/// Each cell with coefficient `k` contributes `|k|` copies of its point
/// formula when `k > 0` and of the negated point formula when `k < 0`;
/// the bound becomes `M` plus the total negative magnitude. Replacing
/// `p(!phi)` by `1 - p(phi)` recovers the input left side, so the two
/// inequalities hold on exactly the same models.
pub fn rational_to_logical(
    cover: &MeasurementCover,
    ineq: &RationalInequality,
    limit: usize,
) -> Result<LogicalBellInequality> {
    let n = cover.n_vars();
    if n > limit {
        return Err(Error::LimitExceeded { got: n, limit });
    }
    let (k, m_bound) = ineq.integer_data();
    if k.len() != cover.n_table_cells() {
        return Err(Error::CoefficientLength {
            expected: cover.n_table_cells(),
            got: k.len(),
        });
    }
    for t in 0..cover.n_global() as u32 {
        if deterministic_cell_lhs(cover, &k, t) > m_bound {
            return Err(Error::InvalidOnDeterministic {
                witness: crate::model::GlobalAssignment::from_bits(t, n).to_string(),
            });
        }
    }
    let mut ms = FormulaMultiset::new();
    let mut negative_total = Int::zero();
    for c in 0..cover.n_contexts() {
        let names = cover.context_names(c);
        let offset = cover.row_offset(c);
        for cell in 0..cover.n_cells(c) {
            let coeff = &k[offset + cell as usize];
            if coeff.is_zero() {
                continue;
            }
            let phi = point_formula(&names, cell);
            let theta = if coeff.is_negative() {
                negative_total += coeff.abs();
                crate::logic::Formula::not(phi)
            } else {
                phi
            };
            ms.push(multiplicity(coeff)?, TaggedFormula::new(names.clone(), theta)?);
        }
    }
    let bound_int = m_bound + negative_total;
    let bound = bound_int
        .to_u64()
        .ok_or_else(|| Error::BadDocument(format!("bound {bound_int} out of range")))?;
    LogicalBellInequality::new(ms, bound, limit)
}

/// Convert a correlation inequality valid on all deterministic expectation
/// vectors into its logical form: each context contributes `2|l_U|` copies
/// of the even-parity formula (negated when `l_U < 0`), with bound
/// `M + sum |l_U|`. Substituting `E_U = 2 p(psi_U) - 1` shows the two
/// inequalities agree on every model.
pub fn correlation_to_logical(
    cover: &MeasurementCover,
    c_ineq: &CorrelationInequality,
    limit: usize,
) -> Result<LogicalBellInequality> {
    let n = cover.n_vars();
    if n > limit {
        return Err(Error::LimitExceeded { got: n, limit });
    }
    if c_ineq.coeffs().len() != cover.n_contexts() {
        return Err(Error::CoefficientLength {
            expected: cover.n_contexts(),
            got: c_ineq.coeffs().len(),
        });
    }
    for t in 0..cover.n_global() as u32 {
        let eta = deterministic_expectation(cover, t);
        if !c_ineq.holds_on(&eta) {
            return Err(Error::InvalidOnDeterministic {
                witness: crate::model::GlobalAssignment::from_bits(t, n).to_string(),
            });
        }
    }
    let mut ms = FormulaMultiset::new();
    let mut magnitude_total = Int::zero();
    for c in 0..cover.n_contexts() {
        let l = &c_ineq.coeffs()[c];
        if l.is_zero() {
            continue;
        }
        magnitude_total += l.abs();
        let names = cover.context_names(c);
        let psi = parity_formula(&names, Parity::Even);
        let theta = if l.is_negative() {
            crate::logic::Formula::not(psi)
        } else {
            psi
        };
        ms.push(2 * multiplicity(l)?, TaggedFormula::new(names, theta)?);
    }
    let bound_int = c_ineq.bound() + magnitude_total;
    let bound = bound_int
        .to_u64()
        .ok_or_else(|| Error::BadDocument(format!("bound {bound_int} out of range")))?;
    LogicalBellInequality::new(ms, bound, limit)
}

/// Inverse of [`correlation_to_logical`] on inequalities whose entries are
/// parity literals, at most one per context.
///
/// An entry `e_U * psi_U` (or its negation) with bound `K` maps to
/// `l_U = +-e_U` with `M = 2K - sum e_U`, then the common gcd is divided
/// out. For the even-multiplicity entries `2 k_U` produced by the forward
/// conversion, this is exactly `l_U = +-k_U`, `M = K - sum k_U`; odd
/// multiplicities, which arise after [`LogicalBellInequality::reduced`],
/// are handled by the same substitution.
pub fn logical_to_correlation(
    cover: &MeasurementCover,
    ineq: &LogicalBellInequality,
) -> Result<CorrelationInequality> {
    let mut coeffs = vec![Int::zero(); cover.n_contexts()];
    let mut seen = vec![false; cover.n_contexts()];
    let mut magnitude_total = Int::zero();
    for (k, tf) in ineq.multiset().entries() {
        if *k == 0 {
            continue;
        }
        let c = cover.find_context(tf.context())?;
        if seen[c] {
            return Err(Error::RepeatedContext(c));
        }
        seen[c] = true;
        let names = cover.context_names(c);
        let table = TruthTable::of(tf.formula(), &names)?;
        let even = TruthTable::of(&parity_formula(&names, Parity::Even), &names)?;
        let odd = TruthTable::of(&parity_formula(&names, Parity::Odd), &names)?;
        let sign = if table == even {
            1
        } else if table == odd {
            -1
        } else {
            return Err(Error::NotParityForm(c));
        };
        let e = Int::from(*k);
        magnitude_total += &e;
        coeffs[c] = Int::from(sign) * e;
    }
    let bound = Int::from(2) * Int::from(ineq.bound()) - magnitude_total;
    Ok(CorrelationInequality { coeffs, bound }.canonical())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Formula;
    use crate::model::bell_scenario_cover;
    use crate::{rat, DEFAULT_VAR_LIMIT};
    use std::collections::BTreeSet;

    fn bell_cover() -> MeasurementCover {
        bell_scenario_cover(2, 2, 1).unwrap()
    }

    fn bell_table() -> EmpiricalModel {
        let rows = vec![
            vec![rat(1, 2), rat(0, 1), rat(0, 1), rat(1, 2)],
            vec![rat(3, 8), rat(1, 8), rat(1, 8), rat(3, 8)],
            vec![rat(3, 8), rat(1, 8), rat(1, 8), rat(3, 8)],
            vec![rat(1, 8), rat(3, 8), rat(3, 8), rat(1, 8)],
        ];
        EmpiricalModel::new(bell_cover(), rows).unwrap()
    }

    fn bell_formulas() -> Vec<TaggedFormula> {
        let texts = [
            (["a", "b"], "a <-> b"),
            (["a", "b'"], "a <-> b'"),
            (["a'", "b"], "a' <-> b"),
            (["a'", "b'"], "a' ^ b'"),
        ];
        texts
            .iter()
            .map(|(ctx, t)| {
                TaggedFormula::new(
                    ctx.iter().map(|s| s.to_string()).collect(),
                    Formula::parse(t).unwrap(),
                )
                .unwrap()
            })
            .collect()
    }

    #[test]
    fn constructor_checks_consistency() {
        let x = TaggedFormula::new(vec!["x".into()], Formula::var("x")).unwrap();
        let ms = FormulaMultiset::from_entries(vec![(1, x)]);
        assert!(matches!(
            LogicalBellInequality::new(ms.clone(), 0, 24),
            Err(Error::NotConsistent { bound: 0, max_sat: 1 })
        ));
        let ok = LogicalBellInequality::new(ms, 1, 24).unwrap();
        assert!(ok.verify_consistency(24).unwrap());
    }

    #[test]
    fn reduced_divides_common_factor() {
        let x = TaggedFormula::new(vec!["x".into()], Formula::var("x")).unwrap();
        let nx = TaggedFormula::new(vec!["x".into()], Formula::parse("!x").unwrap()).unwrap();
        let ms = FormulaMultiset::from_entries(vec![(2, x), (6, nx)]);
        let ineq = LogicalBellInequality::new(ms, 14, 24).unwrap();
        let red = ineq.reduced();
        assert_eq!(red.bound(), 7);
        let ks: Vec<u64> = red.multiset().entries().iter().map(|(k, _)| *k).collect();
        assert_eq!(ks, vec![1, 3]);
        // Already-primitive inequalities are untouched.
        assert_eq!(red.reduced(), red);
    }

    #[test]
    fn bell_table_canonical_numbers() {
        let m = bell_table();
        let ms = FormulaMultiset::from_entries(
            bell_formulas().into_iter().map(|tf| (1, tf)).collect(),
        );
        let ineq = LogicalBellInequality::new(ms, 3, DEFAULT_VAR_LIMIT).unwrap();
        let (lhs, violation) = evaluate_logical(&m, &ineq).unwrap();
        assert_eq!(lhs, rat(13, 4));
        assert_eq!(violation, rat(1, 4));
    }

    #[test]
    fn deterministic_models_never_violate() {
        let cover = bell_cover();
        let ms = FormulaMultiset::from_entries(
            bell_formulas().into_iter().map(|tf| (1, tf)).collect(),
        );
        let ineq = LogicalBellInequality::new(ms, 3, DEFAULT_VAR_LIMIT).unwrap();
        for t in 0..16u32 {
            let d = EmpiricalModel::deterministic(
                &cover,
                &crate::model::GlobalAssignment::from_bits(t, 4),
            );
            let (_, violation) = evaluate_logical(&d, &ineq).unwrap();
            assert_eq!(violation, Rat::zero(), "t = {t}");
        }
    }

    #[test]
    fn canonical_support_inequality_of_deterministic() {
        let cover = bell_cover();
        let d = EmpiricalModel::deterministic(
            &cover,
            &crate::model::GlobalAssignment::from_bits(0b0101, 4),
        );
        let ineq = canonical_support_inequality(&d.support(), DEFAULT_VAR_LIMIT).unwrap();
        assert_eq!(ineq.bound(), 4);
        let (lhs, violation) = evaluate_logical(&d, &ineq).unwrap();
        assert_eq!(lhs, rat_int(4));
        assert_eq!(violation, Rat::zero());
    }

    fn hardy_model() -> EmpiricalModel {
        let cover = bell_cover();
        let supports: Vec<BTreeSet<u32>> = vec![
            [0u32, 1, 2, 3].into_iter().collect(),
            [1u32, 2, 3].into_iter().collect(),
            [1u32, 2, 3].into_iter().collect(),
            [0u32, 1, 2].into_iter().collect(),
        ];
        let sm = SupportModel::new(cover, supports).unwrap();
        EmpiricalModel::uniform_on_support(&sm)
    }

    #[test]
    fn hardy_witness_violation_is_cell_probability() {
        let m = hardy_model();
        let ineq = possibilistic_witness_inequality(&m, 0, 0b00, DEFAULT_VAR_LIMIT).unwrap();
        assert_eq!(ineq.bound(), 3);
        let (_, violation) = evaluate_logical(&m, &ineq).unwrap();
        assert_eq!(violation, rat(1, 4));
        assert_eq!(&violation, m.prob(0, 0));

        // CHSH form doubles the witness violation.
        let formulas: Vec<TaggedFormula> = ineq
            .multiset()
            .entries()
            .iter()
            .map(|(_, tf)| tf.clone())
            .collect();
        let value = chsh_functional(&m, &formulas, DEFAULT_VAR_LIMIT).unwrap();
        assert_eq!(value, rat_int(2) + rat(2, 4));
    }

    #[test]
    fn witness_preconditions() {
        let m = bell_table();
        // (a,b) cell 01 has probability 0.
        assert!(matches!(
            possibilistic_witness_inequality(&m, 0, 0b01, DEFAULT_VAR_LIMIT),
            Err(Error::NotInSupport { context: 0, cell: 1 })
        ));
        // Bell table is possibilistically non-contextual: every support
        // cell extends, so no witness exists anywhere.
        let sm = m.support();
        for c in 0..4 {
            for &cell in sm.support(c) {
                assert!(matches!(
                    possibilistic_witness_inequality(&m, c, cell, DEFAULT_VAR_LIMIT),
                    Err(Error::ExtendsToSection { .. })
                ));
            }
        }
    }

    #[test]
    fn bell_expectations_and_chsh() {
        let m = bell_table();
        let ev = expectation_vector(&m);
        assert_eq!(
            ev.values(),
            &[rat_int(1), rat(1, 2), rat(1, 2), rat(-1, 2)]
        );
        let chsh = CorrelationInequality::from_i64(m.cover(), &[1, 1, 1, -1], 2).unwrap();
        assert_eq!(chsh.lhs_on(&ev), rat(5, 2));

        let value = chsh_functional(&m, &bell_formulas(), DEFAULT_VAR_LIMIT).unwrap();
        assert_eq!(value, rat(5, 2));
    }

    #[test]
    fn chsh_functional_rejects_satisfiable_families() {
        let m = bell_table();
        let fine: Vec<TaggedFormula> = bell_formulas()[..3].to_vec();
        assert!(matches!(
            chsh_functional(&m, &fine, DEFAULT_VAR_LIMIT),
            Err(Error::JointlySatisfiable)
        ));
    }

    #[test]
    fn expectation_of_uniform_vanishes() {
        let cover = bell_cover();
        let rows = vec![vec![rat(1, 4); 4]; 4];
        let m = EmpiricalModel::new(cover, rows).unwrap();
        let ev = expectation_vector(&m);
        assert!(ev.values().iter().all(|e| e.is_zero()));
    }

    #[test]
    fn rational_to_logical_trivial_cases() {
        let cover = bell_cover();
        let zero = RationalInequality::new(
            &cover,
            vec![Rat::zero(); cover.n_table_cells()],
            Rat::zero(),
        )
        .unwrap();
        let ineq = rational_to_logical(&cover, &zero, DEFAULT_VAR_LIMIT).unwrap();
        assert_eq!(ineq.bound(), 0);
        assert!(ineq.multiset().entries().is_empty());

        let mut coeffs = vec![Rat::zero(); cover.n_table_cells()];
        coeffs[0] = rat_int(1);
        let point = RationalInequality::new(&cover, coeffs, rat_int(1)).unwrap();
        let ineq = rational_to_logical(&cover, &point, DEFAULT_VAR_LIMIT).unwrap();
        assert_eq!(ineq.bound(), 1);
        assert_eq!(ineq.multiset().entries().len(), 1);
        let (k, tf) = &ineq.multiset().entries()[0];
        assert_eq!(*k, 1);
        assert_eq!(tf.formula().to_string(), "a & b");
    }

    #[test]
    fn rational_to_logical_rejects_invalid() {
        let cover = bell_cover();
        let mut coeffs = vec![Rat::zero(); cover.n_table_cells()];
        coeffs[0] = rat_int(1);
        // delta^0000 puts mass 1 on cell 0 of row 0, so the bound 0 fails.
        let bad = RationalInequality::new(&cover, coeffs, Rat::zero()).unwrap();
        assert!(matches!(
            rational_to_logical(&cover, &bad, DEFAULT_VAR_LIMIT),
            Err(Error::InvalidOnDeterministic { witness }) if witness == "0000"
        ));
    }

    #[test]
    fn rational_to_logical_equivalence_on_bell_table() {
        // The CHSH functional as a cell inequality: +-1 per cell by parity
        // on the first three contexts, flipped on the fourth; bound 2.
        let cover = bell_cover();
        let mut coeffs = Vec::new();
        for c in 0..4 {
            for cell in 0..4u32 {
                let sign = if cell.count_ones() % 2 == 0 { 1 } else { -1 };
                let sign = if c == 3 { -sign } else { sign };
                coeffs.push(rat_int(sign));
            }
        }
        let rational = RationalInequality::new(&cover, coeffs, rat_int(2)).unwrap();
        let logical = rational_to_logical(&cover, &rational, DEFAULT_VAR_LIMIT).unwrap();

        let m = bell_table();
        let (lhs, violation) = evaluate_logical(&m, &logical).unwrap();
        // Satisfaction must agree with the rational form on the model.
        assert_eq!(rational.holds_on(&m), violation.is_zero());
        assert_eq!(rational.lhs_on(&m), rat(5, 2));
        // The logical lhs differs from the rational lhs by the constant
        // negative magnitude absorbed into the bound.
        let shift = rat_int(logical.bound() as i64) - rat_int(2);
        assert_eq!(lhs - shift, rat(5, 2));
    }

    #[test]
    fn correlation_to_logical_chsh() {
        let cover = bell_cover();
        let chsh = CorrelationInequality::from_i64(&cover, &[1, 1, 1, -1], 2).unwrap();
        let logical = correlation_to_logical(&cover, &chsh, DEFAULT_VAR_LIMIT).unwrap();
        assert_eq!(logical.bound(), 6);
        assert_eq!(logical.multiset().entries().len(), 4);
        assert!(logical
            .multiset()
            .entries()
            .iter()
            .all(|(k, _)| *k == 2));

        let m = bell_table();
        let (lhs, violation) = evaluate_logical(&m, &logical).unwrap();
        assert_eq!(lhs, rat(13, 2));
        // Logical and correlation violations coincide.
        assert_eq!(violation, rat(1, 2));

        // Round trip.
        let back = logical_to_correlation(&cover, &logical).unwrap();
        assert_eq!(back, chsh);
    }

    #[test]
    fn correlation_to_logical_rejects_invalid() {
        let cover = bell_cover();
        let bad = CorrelationInequality::from_i64(&cover, &[1, 1, 1, 1], 2).unwrap();
        assert!(matches!(
            correlation_to_logical(&cover, &bad, DEFAULT_VAR_LIMIT),
            Err(Error::InvalidOnDeterministic { .. })
        ));
    }

    #[test]
    fn logical_to_correlation_single_context() {
        let cover = MeasurementCover::from_names(&["x", "y"], &[&["x", "y"]]).unwrap();
        let names = vec!["x".to_string(), "y".to_string()];
        let psi = parity_formula(&names, Parity::Even);
        let ms = FormulaMultiset::from_entries(vec![(
            2,
            TaggedFormula::new(names, psi).unwrap(),
        )]);
        let ineq = LogicalBellInequality::new(ms, 2, 24).unwrap();
        let corr = logical_to_correlation(&cover, &ineq).unwrap();
        assert_eq!(corr.coeffs(), &[Int::from(1)]);
        assert_eq!(corr.bound(), &Int::from(1));
    }

    #[test]
    fn logical_to_correlation_rejects_non_parity() {
        let cover = bell_cover();
        let names = cover.context_names(0);
        let tf = TaggedFormula::new(names, Formula::var("a")).unwrap();
        let ms = FormulaMultiset::from_entries(vec![(2, tf)]);
        let ineq = LogicalBellInequality::new(ms, 2, 24).unwrap();
        assert!(matches!(
            logical_to_correlation(&cover, &ineq),
            Err(Error::NotParityForm(0))
        ));
    }

    #[test]
    fn logical_to_correlation_rejects_repeats() {
        let cover = bell_cover();
        let names = cover.context_names(0);
        let psi = parity_formula(&names, Parity::Even);
        let tf = TaggedFormula::new(names, psi).unwrap();
        let ms = FormulaMultiset::from_entries(vec![(2, tf.clone()), (2, tf)]);
        let ineq = LogicalBellInequality::new(ms, 4, 24).unwrap();
        assert!(matches!(
            logical_to_correlation(&cover, &ineq),
            Err(Error::RepeatedContext(0))
        ));
    }

    #[test]
    fn rational_canonicalization() {
        let cover = MeasurementCover::from_names(&["x"], &[&["x"]]).unwrap();
        let ineq = RationalInequality::new(
            &cover,
            vec![rat(2, 3), rat(4, 3)],
            rat(2, 1),
        )
        .unwrap();
        let (ints, bound) = ineq.integer_data();
        assert_eq!(ints, vec![Int::from(1), Int::from(2)]);
        assert_eq!(bound, Int::from(3));
    }
}
