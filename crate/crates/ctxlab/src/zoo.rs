//! The model zoo: standard covers, tables, and inequalities used across the
//! examples and the self-test.
//!
//! Every fixture is an exact transcription; probabilities are rationals and
//! supports are explicit cell sets. Cell indices follow the crate's
//! canonical encoding: within a context, bit `j` is the outcome of the
//! `j`-th context variable in cover order.

use std::collections::BTreeSet;

use crate::inequalities::CorrelationInequality;
use crate::logic::{one_hot_formula, parity_formula, Parity, TruthTable};
use crate::model::{bell_scenario_cover, EmpiricalModel, MeasurementCover, SupportModel};
use crate::{rat, Error, Result};

/// A named zoo entry.
#[derive(Debug, Clone)]
pub enum Fixture {
    Probability(EmpiricalModel),
    Support(SupportModel),
    Correlation {
        cover: MeasurementCover,
        inequality: CorrelationInequality,
    },
}

impl Fixture {
    pub fn cover(&self) -> &MeasurementCover {
        match self {
            Fixture::Probability(m) => m.cover(),
            Fixture::Support(sm) => sm.cover(),
            Fixture::Correlation { cover, .. } => cover,
        }
    }

    /// The probability model, materializing supports uniformly.
    pub fn model(&self) -> Option<EmpiricalModel> {
        match self {
            Fixture::Probability(m) => Some(m.clone()),
            Fixture::Support(sm) => Some(EmpiricalModel::uniform_on_support(sm)),
            Fixture::Correlation { .. } => None,
        }
    }

    pub fn support(&self) -> Option<SupportModel> {
        match self {
            Fixture::Probability(m) => Some(m.support()),
            Fixture::Support(sm) => Some(sm.clone()),
            Fixture::Correlation { .. } => None,
        }
    }
}

pub const ZOO_NAMES: [&str; 8] = [
    "bell",
    "hardy",
    "pr-box",
    "ghz",
    "ks18",
    "peres-mermin",
    "werner-wolf-a2",
    "vertex4-322",
];

/// Look up a fixture by its catalogue name.
pub fn zoo(name: &str) -> Result<Fixture> {
    match name {
        "bell" => Ok(Fixture::Probability(bell_model())),
        "hardy" => Ok(Fixture::Support(hardy_support())),
        "pr-box" => Ok(Fixture::Probability(pr_box_model())),
        "ghz" => Ok(Fixture::Support(ghz_support())),
        "ks18" => Ok(Fixture::Support(ks18_support())),
        "peres-mermin" => Ok(Fixture::Support(peres_mermin_support())),
        "werner-wolf-a2" => {
            let (cover, inequality) = werner_wolf_a2();
            Ok(Fixture::Correlation { cover, inequality })
        }
        "vertex4-322" => Ok(Fixture::Probability(vertex4_model())),
        other => Err(Error::UnknownFixture(other.to_string())),
    }
}

fn cells(list: &[u32]) -> BTreeSet<u32> {
    list.iter().copied().collect()
}

/// The two-party table realized by quantum spin measurements: row `(a, b)`
/// is perfectly correlated, the mixed rows lean `3/8 - 1/8`, and the last
/// row leans the opposite way.
pub fn bell_model() -> EmpiricalModel {
    let cover = bell_scenario_cover(2, 2, 1).expect("static scenario");
    let rows = vec![
        vec![rat(1, 2), rat(0, 1), rat(0, 1), rat(1, 2)],
        vec![rat(3, 8), rat(1, 8), rat(1, 8), rat(3, 8)],
        vec![rat(3, 8), rat(1, 8), rat(1, 8), rat(3, 8)],
        vec![rat(1, 8), rat(3, 8), rat(3, 8), rat(1, 8)],
    ];
    EmpiricalModel::new(cover, rows).expect("static table")
}

/// Support of the Hardy construction: full first row, the off-diagonal
/// rows lose their `00` cell, and the last row loses `11`.
pub fn hardy_support() -> SupportModel {
    let cover = bell_scenario_cover(2, 2, 1).expect("static scenario");
    SupportModel::new(
        cover,
        vec![
            cells(&[0b00, 0b01, 0b10, 0b11]),
            cells(&[0b01, 0b10, 0b11]),
            cells(&[0b01, 0b10, 0b11]),
            cells(&[0b00, 0b01, 0b10]),
        ],
    )
    .expect("static support")
}

/// The Popescu-Rohrlich box: uniformly correlated on three rows, uniformly
/// anti-correlated on `(a', b')`.
pub fn pr_box_model() -> EmpiricalModel {
    let cover = bell_scenario_cover(2, 2, 1).expect("static scenario");
    let corr = vec![rat(1, 2), rat(0, 1), rat(0, 1), rat(1, 2)];
    let anti = vec![rat(0, 1), rat(1, 2), rat(1, 2), rat(0, 1)];
    EmpiricalModel::new(cover, vec![corr.clone(), corr.clone(), corr, anti])
        .expect("static table")
}

/// Support of the tripartite GHZ state under X and Y measurements, on the
/// four-context cover `abc, ab'c', a'bc', a'b'c`: the first row is
/// even-parity, the other three odd-parity.
pub fn ghz_support() -> SupportModel {
    let cover = MeasurementCover::from_names(
        &["a", "a'", "b", "b'", "c", "c'"],
        &[
            &["a", "b", "c"],
            &["a", "b'", "c'"],
            &["a'", "b", "c'"],
            &["a'", "b'", "c"],
        ],
    )
    .expect("static cover");
    let even = cells(&[0b000, 0b011, 0b101, 0b110]);
    let odd = cells(&[0b001, 0b010, 0b100, 0b111]);
    SupportModel::new(cover, vec![even, odd.clone(), odd.clone(), odd]).expect("static support")
}

/// The 18-variable Kochen-Specker cover with nine 4-element contexts, each
/// variable shared by exactly two. Supports are the `ONE(U)` cells: exactly
/// one variable per context at outcome `0`.
pub fn ks18_support() -> SupportModel {
    let cover = ks18_cover();
    let one = cells(&[0b0111, 0b1011, 0b1101, 0b1110]);
    let supports = vec![one; 9];
    SupportModel::new(cover, supports).expect("static support")
}

pub fn ks18_cover() -> MeasurementCover {
    let vars: Vec<&str> = vec![
        "A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L", "M", "N", "O", "P", "Q", "R",
    ];
    let contexts: [&[&str]; 9] = [
        &["A", "B", "C", "D"],
        &["A", "E", "F", "G"],
        &["H", "I", "C", "J"],
        &["H", "K", "G", "L"],
        &["B", "E", "M", "N"],
        &["I", "K", "N", "O"],
        &["P", "Q", "D", "J"],
        &["P", "R", "F", "L"],
        &["Q", "R", "M", "O"],
    ];
    MeasurementCover::from_names(&vars, &contexts).expect("static cover")
}

/// The Peres-Mermin square: rows `ABC, DEF, GHI` carry an odd number of
/// `1` outcomes, columns `ADG, BEH, CFI` an even number.
pub fn peres_mermin_support() -> SupportModel {
    let vars: Vec<&str> = vec!["A", "B", "C", "D", "E", "F", "G", "H", "I"];
    let contexts: [&[&str]; 6] = [
        &["A", "B", "C"],
        &["D", "E", "F"],
        &["G", "H", "I"],
        &["A", "D", "G"],
        &["B", "E", "H"],
        &["C", "F", "I"],
    ];
    let cover = MeasurementCover::from_names(&vars, &contexts).expect("static cover");
    let odd = cells(&[0b001, 0b010, 0b100, 0b111]);
    let even = cells(&[0b000, 0b011, 0b101, 0b110]);
    SupportModel::new(
        cover,
        vec![odd.clone(), odd.clone(), odd, even.clone(), even.clone(), even],
    )
    .expect("static support")
}

/// The Werner-Wolf A2 correlation inequality on the `(3,2,1)` cover, in
/// cleared form: the sum of the first seven expectations minus three times
/// the last is at most 4. Context `i` is the setting combination whose
/// binary string is `i-1`, site 1 first.
pub fn werner_wolf_a2() -> (MeasurementCover, CorrelationInequality) {
    let cover = bell_scenario_cover(3, 2, 1).expect("static scenario");
    let inequality =
        CorrelationInequality::from_i64(&cover, &[1, 1, 1, 1, 1, 1, 1, -3], 4).expect("static");
    (cover, inequality)
}

/// The extremal no-signalling model whose rows are uniform on the supports
/// of two-variable parity formulas (and one three-variable parity pair):
/// it satisfies every correlation inequality yet has a strongly contextual
/// support.
pub fn vertex4_model() -> EmpiricalModel {
    let cover = bell_scenario_cover(3, 2, 1).expect("static scenario");
    // Context order: abc, abc', ab'c, ab'c', a'bc, a'bc', a'b'c, a'b'c'.
    let formulas = [
        parity_on(&cover, 0, &["a", "b"], Parity::Even),
        parity_on(&cover, 1, &["a", "b"], Parity::Even),
        parity_on(&cover, 2, &["a", "b'", "c"], Parity::Even),
        parity_on(&cover, 3, &["b'", "c'"], Parity::Even),
        parity_on(&cover, 4, &["a'", "c"], Parity::Even),
        parity_on(&cover, 5, &["a'", "b", "c'"], Parity::Odd),
        parity_on(&cover, 6, &["a'", "c"], Parity::Even),
        parity_on(&cover, 7, &["b'", "c'"], Parity::Even),
    ];
    let supports = formulas.into_iter().collect();
    let sm = SupportModel::new(cover, supports).expect("static support");
    EmpiricalModel::uniform_on_support(&sm)
}

/// Cells of context `c` satisfying the parity formula over a variable
/// subset.
fn parity_on(
    cover: &MeasurementCover,
    c: usize,
    subset: &[&str],
    parity: Parity,
) -> BTreeSet<u32> {
    let names = cover.context_names(c);
    let subset: Vec<String> = subset.iter().map(|s| s.to_string()).collect();
    let table = TruthTable::of(&parity_formula(&subset, parity), &names).expect("static formula");
    table.satisfying().into_iter().map(|s| s as u32).collect()
}

/// The `ONE(U)` formulas of the KS cover, tagged with their contexts.
pub fn ks18_one_formulas() -> Vec<crate::logic::TaggedFormula> {
    let cover = ks18_cover();
    (0..cover.n_contexts())
        .map(|c| {
            let names = cover.context_names(c);
            crate::logic::TaggedFormula::new(names.clone(), one_hot_formula(&names))
                .expect("static formula")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contextuality::{classify, ContextualityClass};
    use crate::inequalities::{
        canonical_support_inequality, evaluate_logical, expectation_vector,
    };
    use crate::logic::is_jointly_satisfiable;
    use crate::{rat_int, DEFAULT_VAR_LIMIT};

    #[test]
    fn all_names_resolve() {
        for name in ZOO_NAMES {
            assert!(zoo(name).is_ok(), "{name}");
        }
        assert!(matches!(zoo("nope"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn bell_fixture() {
        let m = bell_model();
        assert!(m.is_no_signalling());
        let sm = m.support();
        assert_eq!(sm.support(0), &cells(&[0b00, 0b11]));
        for c in 1..4 {
            assert_eq!(sm.support(c).len(), 4);
        }
        assert_eq!(
            classify(&m, DEFAULT_VAR_LIMIT).unwrap(),
            ContextualityClass::ProbabilisticallyContextual
        );
    }

    #[test]
    fn hardy_fixture() {
        let sm = hardy_support();
        let m = EmpiricalModel::uniform_on_support(&sm);
        assert_eq!(
            classify(&m, DEFAULT_VAR_LIMIT).unwrap(),
            ContextualityClass::PossibilisticallyContextual
        );
    }

    #[test]
    fn pr_box_fixture() {
        let m = pr_box_model();
        assert!(m.is_no_signalling());
        assert_eq!(
            classify(&m, DEFAULT_VAR_LIMIT).unwrap(),
            ContextualityClass::StronglyContextual
        );
        let ev = expectation_vector(&m);
        assert_eq!(
            ev.values(),
            &[rat_int(1), rat_int(1), rat_int(1), rat_int(-1)]
        );
    }

    #[test]
    fn ghz_fixture() {
        let sm = ghz_support();
        let m = EmpiricalModel::uniform_on_support(&sm);
        assert_eq!(
            classify(&m, DEFAULT_VAR_LIMIT).unwrap(),
            ContextualityClass::StronglyContextual
        );
        let ineq = canonical_support_inequality(&sm, DEFAULT_VAR_LIMIT).unwrap();
        assert_eq!(ineq.bound(), 3);
        let (lhs, violation) = evaluate_logical(&m, &ineq).unwrap();
        assert_eq!(lhs, rat_int(4));
        assert_eq!(violation, rat_int(1));
    }

    #[test]
    fn ks18_fixture() {
        let sm = ks18_support();
        let cover = sm.cover();
        assert_eq!(cover.n_vars(), 18);
        assert_eq!(cover.n_contexts(), 9);
        // Every variable occurs in exactly two contexts.
        for v in 0..18 {
            let count = (0..9).filter(|&c| cover.context(c).contains(&v)).count();
            assert_eq!(count, 2, "{}", cover.var_name(v));
        }
        let one = ks18_one_formulas();
        assert!(is_jointly_satisfiable(&one, DEFAULT_VAR_LIMIT)
            .unwrap()
            .is_none());
        // Dropping any single context makes the conjunction satisfiable,
        // so the configuration is critical, not trivially inconsistent.
        for skip in 0..9 {
            let rest: Vec<_> = one
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, tf)| tf.clone())
                .collect();
            assert!(
                is_jointly_satisfiable(&rest, DEFAULT_VAR_LIMIT)
                    .unwrap()
                    .is_some(),
                "dropping context {skip}"
            );
        }
    }

    #[test]
    fn ks18_is_strongly_contextual() {
        let m = EmpiricalModel::uniform_on_support(&ks18_support());
        assert_eq!(
            classify(&m, DEFAULT_VAR_LIMIT).unwrap(),
            ContextualityClass::StronglyContextual
        );
    }

    #[test]
    fn peres_mermin_fixture() {
        let sm = peres_mermin_support();
        let texts = [
            ("A", "B", "C", Parity::Odd),
            ("D", "E", "F", Parity::Odd),
            ("G", "H", "I", Parity::Odd),
            ("A", "D", "G", Parity::Even),
            ("B", "E", "H", Parity::Even),
            ("C", "F", "I", Parity::Even),
        ];
        for (c, (x, y, z, parity)) in texts.iter().enumerate() {
            let expected = parity_on(sm.cover(), c, &[x, y, z], *parity);
            assert_eq!(sm.support(c), &expected, "context {c}");
        }
        let m = EmpiricalModel::uniform_on_support(&sm);
        assert_eq!(
            classify(&m, DEFAULT_VAR_LIMIT).unwrap(),
            ContextualityClass::StronglyContextual
        );
    }

    #[test]
    fn werner_wolf_fixture() {
        let (cover, ineq) = werner_wolf_a2();
        assert_eq!(cover.n_contexts(), 8);
        assert_eq!(ineq.coeffs().len(), 8);
        // Valid on every deterministic expectation vector.
        for t in 0..cover.n_global() as u32 {
            let eta = crate::inequalities::deterministic_expectation(&cover, t);
            assert!(ineq.holds_on(&eta), "t = {t}");
        }
    }

    #[test]
    fn vertex4_fixture() {
        let m = vertex4_model();
        assert!(m.is_no_signalling());
        let ev = expectation_vector(&m);
        let expected: Vec<_> = [0, 0, 1, 0, 0, -1, 0, 0]
            .iter()
            .map(|&v| rat_int(v))
            .collect();
        assert_eq!(ev.values(), &expected[..]);

        let (_, ww) = werner_wolf_a2();
        assert!(ww.holds_on(&ev));

        let ineq = canonical_support_inequality(&m.support(), DEFAULT_VAR_LIMIT).unwrap();
        assert_eq!(ineq.bound(), 7);
        let (lhs, violation) = evaluate_logical(&m, &ineq).unwrap();
        assert_eq!(lhs, rat_int(8));
        assert_eq!(violation, rat_int(1));
        assert_eq!(
            classify(&m, DEFAULT_VAR_LIMIT).unwrap(),
            ContextualityClass::StronglyContextual
        );
    }

    #[test]
    fn all_model_fixtures_validate_and_have_sections_as_expected() {
        // uniform_on_support round trip and support stability.
        for name in ["hardy", "ghz", "ks18", "peres-mermin"] {
            let sm = zoo(name).unwrap().support().unwrap();
            let m = EmpiricalModel::uniform_on_support(&sm);
            assert_eq!(m.support(), sm, "{name}");
        }
    }
}
