//! Propositional formulas over measurement variables.
//!
//! Outcome `0` denotes true and outcome `1` denotes false, everywhere. This
//! matches the tables elsewhere in the crate: a formula like `a <-> b` is
//! satisfied by the joint outcomes `00` and `11`.
//!
//! Satisfiability questions are answered by exhaustive enumeration with
//! bit-parallel evaluation: a [`TruthTable`] packs one truth bit per
//! assignment of the variable universe, 64 assignments per word. All paper
//! instances have at most 18 variables, so enumeration doubles as its own
//! verification oracle; [`crate::DEFAULT_VAR_LIMIT`] gates runaway input.

use std::collections::BTreeMap;
use std::fmt;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Var(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Xor(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Formula::Var(name.into())
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn xor(l: Formula, r: Formula) -> Self {
        Formula::Xor(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Self {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    /// Left-folded conjunction; empty input is `TRUE`.
    pub fn conj<I: IntoIterator<Item = Formula>>(parts: I) -> Self {
        let mut it = parts.into_iter();
        match it.next() {
            None => Formula::True,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Left-folded disjunction; empty input is `FALSE`.
    pub fn disj<I: IntoIterator<Item = Formula>>(parts: I) -> Self {
        let mut it = parts.into_iter();
        match it.next() {
            None => Formula::False,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    /// Variable names referenced by the formula, sorted and deduplicated.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Var(v) => out.push(v.clone()),
            Formula::Not(x) => x.collect_vars(out),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Xor(l, r)
            | Formula::Iff(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    /// Parse the CLI/JSON text syntax: identifiers, `! & | ^ <->`,
    /// parentheses, `TRUE`/`FALSE`. Precedence from tightest to loosest is
    /// `!`, `&`, `|`, `^`, `<->`; binary operators associate to the left.
    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text).parse_all()
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 0,
            Formula::Xor(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(..) => 4,
            _ => 5,
        }
    }

    fn fmt_prec(&self, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.precedence();
        if p < min {
            write!(f, "(")?;
        }
        match self {
            Formula::True => write!(f, "TRUE")?,
            Formula::False => write!(f, "FALSE")?,
            Formula::Var(v) => write!(f, "{v}")?,
            Formula::Not(x) => {
                write!(f, "!")?;
                x.fmt_prec(4, f)?;
            }
            Formula::And(l, r) => {
                l.fmt_prec(3, f)?;
                write!(f, " & ")?;
                r.fmt_prec(4, f)?;
            }
            Formula::Or(l, r) => {
                l.fmt_prec(2, f)?;
                write!(f, " | ")?;
                r.fmt_prec(3, f)?;
            }
            Formula::Xor(l, r) => {
                l.fmt_prec(1, f)?;
                write!(f, " ^ ")?;
                r.fmt_prec(2, f)?;
            }
            Formula::Iff(l, r) => {
                l.fmt_prec(0, f)?;
                write!(f, " <-> ")?;
                r.fmt_prec(1, f)?;
            }
        }
        if p < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(0, f)
    }
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            text,
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::FormulaParse {
            at: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn parse_all(&mut self) -> Result<Formula> {
        let f = self.parse_iff()?;
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(self.error("unexpected trailing input"));
        }
        Ok(f)
    }

    fn parse_iff(&mut self) -> Result<Formula> {
        let mut f = self.parse_xor()?;
        while self.eat("<->") {
            f = Formula::iff(f, self.parse_xor()?);
        }
        Ok(f)
    }

    fn parse_xor(&mut self) -> Result<Formula> {
        let mut f = self.parse_or()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            f = Formula::xor(f, self.parse_or()?);
        }
        Ok(f)
    }

    fn parse_or(&mut self) -> Result<Formula> {
        let mut f = self.parse_and()?;
        while self.peek() == Some(b'|') {
            self.pos += 1;
            f = Formula::or(f, self.parse_and()?);
        }
        Ok(f)
    }

    fn parse_and(&mut self) -> Result<Formula> {
        let mut f = self.parse_unary()?;
        while self.peek() == Some(b'&') {
            self.pos += 1;
            f = Formula::and(f, self.parse_unary()?);
        }
        Ok(f)
    }

    fn parse_unary(&mut self) -> Result<Formula> {
        if self.peek() == Some(b'!') {
            self.pos += 1;
            return Ok(Formula::not(self.parse_unary()?));
        }
        self.parse_atom()
    }

    fn parse_atom(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let f = self.parse_iff()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(f)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .bytes
                    .get(self.pos)
                    .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
                {
                    self.pos += 1;
                }
                while self.bytes.get(self.pos) == Some(&b'\'') {
                    self.pos += 1;
                }
                let name = &self.text[start..self.pos];
                match name {
                    "TRUE" => Ok(Formula::True),
                    "FALSE" => Ok(Formula::False),
                    _ => Ok(Formula::var(name)),
                }
            }
            Some(c) => Err(self.error(format!("unexpected character `{}`", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// A formula attached to the context its variables are drawn from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedFormula {
    context: Vec<String>,
    formula: Formula,
}

impl TaggedFormula {
    /// Checks that every variable of the formula lies in the context.
    pub fn new(context: Vec<String>, formula: Formula) -> Result<Self> {
        let mut seen = context.clone();
        seen.sort();
        let no_dups = seen.windows(2).all(|w| w[0] != w[1]);
        if !no_dups {
            return Err(Error::DuplicateVariable(context[0].clone()));
        }
        for v in formula.vars() {
            if !context.contains(&v) {
                return Err(Error::VariableOutsideContext { variable: v });
            }
        }
        Ok(Self { context, formula })
    }

    /// Variables of the context, in the order used for cell encoding.
    pub fn context(&self) -> &[String] {
        &self.context
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }
}

/// A multiset of tagged formulas with non-negative integer multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormulaMultiset {
    entries: Vec<(u64, TaggedFormula)>,
}

impl FormulaMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: Vec<(u64, TaggedFormula)>) -> Self {
        Self { entries }
    }

    pub fn push(&mut self, k: u64, formula: TaggedFormula) {
        self.entries.push((k, formula));
    }

    pub fn entries(&self) -> &[(u64, TaggedFormula)] {
        &self.entries
    }

    /// Multiset cardinality `sum k_i`.
    pub fn cardinality(&self) -> u64 {
        self.entries.iter().map(|(k, _)| k).sum()
    }

    /// Union of the entry contexts, in order of first appearance.
    pub fn universe(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for (_, tf) in &self.entries {
            for v in tf.context() {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        }
        out
    }
}

const VAR_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Outcome bit of variable `j` across the 64 assignments of `block`.
fn outcome_word(j: usize, block: usize) -> u64 {
    if j < 6 {
        VAR_PATTERNS[j]
    } else if (block >> (j - 6)) & 1 == 1 {
        !0
    } else {
        0
    }
}

/// Truth values of a formula across all `2^n` assignments of an ordered
/// variable universe, packed 64 per word. Assignment index bit `j` is the
/// outcome of universe variable `j`; a variable is true when its outcome
/// bit is `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    n_vars: usize,
    words: Vec<u64>,
}

impl TruthTable {
    pub fn of(formula: &Formula, universe: &[String]) -> Result<Self> {
        let n = universe.len();
        for v in formula.vars() {
            if !universe.contains(&v) {
                return Err(Error::UnknownVariable(v));
            }
        }
        let n_words = 1usize << n.saturating_sub(6);
        let mut words = vec![0u64; n_words];
        for (block, word) in words.iter_mut().enumerate() {
            *word = eval_word(formula, universe, block);
        }
        if n < 6 {
            words[0] &= (1u64 << (1usize << n)) - 1;
        }
        Ok(Self { n_vars: n, words })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_assignments(&self) -> u64 {
        1u64 << self.n_vars
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_true(&self, assignment: u64) -> bool {
        (self.words[(assignment >> 6) as usize] >> (assignment & 63)) & 1 == 1
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn first_true(&self) -> Option<u64> {
        for (block, w) in self.words.iter().enumerate() {
            if *w != 0 {
                return Some((block as u64) * 64 + w.trailing_zeros() as u64);
            }
        }
        None
    }

    /// Satisfying assignment indices; intended for small universes.
    pub fn satisfying(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for (block, w) in self.words.iter().enumerate() {
            let mut w = *w;
            while w != 0 {
                out.push((block as u64) * 64 + w.trailing_zeros() as u64);
                w &= w - 1;
            }
        }
        out
    }

    pub fn intersect_with(&mut self, other: &TruthTable) {
        debug_assert_eq!(self.n_vars, other.n_vars);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn full(n_vars: usize) -> Self {
        let n_words = 1usize << n_vars.saturating_sub(6);
        let mut words = vec![!0u64; n_words];
        if n_vars < 6 {
            words[0] = (1u64 << (1usize << n_vars)) - 1;
        }
        Self { n_vars, words }
    }
}

fn eval_word(formula: &Formula, universe: &[String], block: usize) -> u64 {
    match formula {
        Formula::True => !0,
        Formula::False => 0,
        // Outcome 0 is true, so the truth word flips the outcome word.
        Formula::Var(v) => {
            let j = universe.iter().position(|u| u == v).expect("checked in of()");
            !outcome_word(j, block)
        }
        Formula::Not(x) => !eval_word(x, universe, block),
        Formula::And(l, r) => eval_word(l, universe, block) & eval_word(r, universe, block),
        Formula::Or(l, r) => eval_word(l, universe, block) | eval_word(r, universe, block),
        Formula::Xor(l, r) => eval_word(l, universe, block) ^ eval_word(r, universe, block),
        Formula::Iff(l, r) => !(eval_word(l, universe, block) ^ eval_word(r, universe, block)),
    }
}

/// The joint outcomes of the tagged context satisfying the formula, as cell
/// indices in the stored context order.
pub fn satisfying_assignments(tf: &TaggedFormula, limit: usize) -> Result<Vec<u32>> {
    let n = tf.context().len();
    if n > limit {
        return Err(Error::LimitExceeded { got: n, limit });
    }
    let table = TruthTable::of(tf.formula(), tf.context())?;
    Ok(table.satisfying().into_iter().map(|c| c as u32).collect())
}

/// The formula `phi_s` satisfied only by the given joint outcome: the
/// conjunction of `x` where the outcome of `x` is `0` and `!x` where it
/// is `1`.
pub fn point_formula(context: &[String], cell: u32) -> Formula {
    Formula::conj(context.iter().enumerate().map(|(j, v)| {
        if (cell >> j) & 1 == 0 {
            Formula::var(v.clone())
        } else {
            Formula::not(Formula::var(v.clone()))
        }
    }))
}

/// Disjunction of point formulas over a nonempty cell set; its satisfying
/// set is exactly `cells`.
pub fn support_formula(context: &[String], cells: &[u32]) -> Result<Formula> {
    if cells.is_empty() {
        return Err(Error::EmptyAssignmentSet);
    }
    Ok(Formula::disj(
        cells.iter().map(|&c| point_formula(context, c)),
    ))
}

/// Satisfied exactly when one variable of the context has outcome `0`.
pub fn one_hot_formula(context: &[String]) -> Formula {
    debug_assert!(!context.is_empty());
    Formula::disj((0..context.len()).map(|j| {
        Formula::conj(context.iter().enumerate().map(|(i, v)| {
            if i == j {
                Formula::var(v.clone())
            } else {
                Formula::not(Formula::var(v.clone()))
            }
        }))
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Parity of the count of `1` outcomes across the context. `Odd` is the
/// exclusive-or of the negated variables; `Even` is its negation, the
/// formula written `psi` in correlation work.
pub fn parity_formula(context: &[String], parity: Parity) -> Formula {
    debug_assert!(!context.is_empty());
    let mut it = context.iter().map(|v| Formula::not(Formula::var(v.clone())));
    let first = it.next().expect("nonempty context");
    let odd = it.fold(first, Formula::xor);
    match parity {
        Parity::Odd => odd,
        Parity::Even => Formula::not(odd),
    }
}

/// Largest cardinality of a simultaneously satisfiable sub-multiset,
/// together with a witnessing assignment of the universe.
///
/// A satisfied entry contributes its full multiplicity. The scan is chunked
/// so the per-assignment score buffer stays small even at the variable
/// limit.
pub fn max_satisfiable_with_witness(
    ms: &FormulaMultiset,
    limit: usize,
) -> Result<(u64, BTreeMap<String, u8>)> {
    let universe = ms.universe();
    let n = universe.len();
    if n > limit {
        return Err(Error::LimitExceeded { got: n, limit });
    }
    let mut tables = Vec::with_capacity(ms.entries().len());
    for (k, tf) in ms.entries() {
        if *k == 0 {
            continue;
        }
        tables.push((*k, TruthTable::of(tf.formula(), &universe)?));
    }
    let n_assignments = 1u64 << n;
    let n_words = 1usize << n.saturating_sub(6);
    const CHUNK_WORDS: usize = 1024;
    let chunk = CHUNK_WORDS.min(n_words);
    let mut scores = vec![0u64; chunk * 64];
    let mut best = 0u64;
    let mut best_at = 0u64;
    let mut base = 0usize;
    while base < n_words {
        let w = chunk.min(n_words - base);
        scores[..w * 64].fill(0);
        for (k, table) in &tables {
            for i in 0..w {
                let mut word = table.words()[base + i];
                while word != 0 {
                    scores[i * 64 + word.trailing_zeros() as usize] += k;
                    word &= word - 1;
                }
            }
        }
        for (i, score) in scores[..w * 64].iter().enumerate() {
            let assignment = (base as u64) * 64 + i as u64;
            if assignment >= n_assignments {
                break;
            }
            if *score > best {
                best = *score;
                best_at = assignment;
            }
        }
        base += w;
    }
    let witness = universe
        .iter()
        .enumerate()
        .map(|(j, v)| (v.clone(), ((best_at >> j) & 1) as u8))
        .collect();
    Ok((best, witness))
}

/// See [`max_satisfiable_with_witness`]; the multiset is `K`-consistent
/// exactly when this value is at most `K`.
pub fn max_satisfiable(ms: &FormulaMultiset, limit: usize) -> Result<u64> {
    max_satisfiable_with_witness(ms, limit).map(|(k, _)| k)
}

/// A single assignment of the union of contexts satisfying every formula,
/// if one exists.
pub fn is_jointly_satisfiable(
    formulas: &[TaggedFormula],
    limit: usize,
) -> Result<Option<BTreeMap<String, u8>>> {
    let ms = FormulaMultiset::from_entries(
        formulas.iter().map(|tf| (1, tf.clone())).collect(),
    );
    let universe = ms.universe();
    let n = universe.len();
    if n > limit {
        return Err(Error::LimitExceeded { got: n, limit });
    }
    let mut acc = TruthTable::full(n);
    for tf in formulas {
        acc.intersect_with(&TruthTable::of(tf.formula(), &universe)?);
    }
    Ok(acc.first_true().map(|t| {
        universe
            .iter()
            .enumerate()
            .map(|(j, v)| (v.clone(), ((t >> j) & 1) as u8))
            .collect()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_VAR_LIMIT;

    fn ctx(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn tagged(context: &[&str], text: &str) -> TaggedFormula {
        TaggedFormula::new(ctx(context), Formula::parse(text).unwrap()).unwrap()
    }

    fn sat(context: &[&str], text: &str) -> Vec<u32> {
        satisfying_assignments(&tagged(context, text), DEFAULT_VAR_LIMIT).unwrap()
    }

    #[test]
    fn satisfying_assignment_examples() {
        // 0 is true: correlation formulas pick out the equal-outcome cells.
        assert_eq!(sat(&["a", "b"], "a <-> b"), vec![0b00, 0b11]);
        assert_eq!(sat(&["a'", "b'"], "a' ^ b'"), vec![0b01, 0b10]);
        assert_eq!(sat(&["a", "b"], "TRUE"), vec![0, 1, 2, 3]);
        assert_eq!(sat(&["a", "b"], "a & b"), vec![0b00]);
        assert_eq!(sat(&["a", "b"], "a | b"), vec![0b00, 0b01, 0b10]);
    }

    #[test]
    fn parser_precedence_and_round_trip() {
        let f = Formula::parse("a & b | c").unwrap();
        assert_eq!(f, Formula::or(Formula::and(Formula::var("a"), Formula::var("b")), Formula::var("c")));
        let g = Formula::parse("!a <-> b ^ c").unwrap();
        assert_eq!(
            g,
            Formula::iff(
                Formula::not(Formula::var("a")),
                Formula::xor(Formula::var("b"), Formula::var("c"))
            )
        );
        // Left associativity.
        let h = Formula::parse("a ^ b ^ c").unwrap();
        assert_eq!(
            h,
            Formula::xor(Formula::xor(Formula::var("a"), Formula::var("b")), Formula::var("c"))
        );
        for text in [
            "a & (b | !c')",
            "!(a <-> b) ^ TRUE",
            "!!x_1 | FALSE",
            "(a ^ b) & (c ^ d)",
        ] {
            let parsed = Formula::parse(text).unwrap();
            let reparsed = Formula::parse(&parsed.to_string()).unwrap();
            assert_eq!(parsed, reparsed, "{text}");
        }
    }

    #[test]
    fn parser_errors_carry_position() {
        match Formula::parse("a & ") {
            Err(Error::FormulaParse { at, .. }) => assert_eq!(at, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Formula::parse("(a").is_err());
        assert!(Formula::parse("a b").is_err());
        assert!(Formula::parse("&").is_err());
    }

    #[test]
    fn tagged_formula_checks_scope() {
        let err = TaggedFormula::new(ctx(&["a"]), Formula::parse("a & b").unwrap());
        assert!(matches!(err, Err(Error::VariableOutsideContext { variable }) if variable == "b"));
    }

    #[test]
    fn point_formula_examples() {
        // s = (a -> 0, b -> 1) is the cell with bit 1 set.
        let f = point_formula(&ctx(&["a", "b"]), 0b10);
        assert_eq!(f.to_string(), "a & !b");
        let tf = TaggedFormula::new(ctx(&["a", "b"]), f).unwrap();
        assert_eq!(satisfying_assignments(&tf, 24).unwrap(), vec![0b10]);

        // All-0 outcome: plain conjunction of the variables.
        let g = point_formula(&ctx(&["x", "y", "z"]), 0);
        assert_eq!(g.to_string(), "x & y & z");

        for cell in 0..8u32 {
            let tf = TaggedFormula::new(
                ctx(&["x", "y", "z"]),
                point_formula(&ctx(&["x", "y", "z"]), cell),
            )
            .unwrap();
            assert_eq!(satisfying_assignments(&tf, 24).unwrap(), vec![cell]);
        }
    }

    #[test]
    fn support_formula_round_trip() {
        let context = ctx(&["a", "b"]);
        let f = support_formula(&context, &[0b00, 0b11]).unwrap();
        let tf = TaggedFormula::new(context.clone(), f).unwrap();
        assert_eq!(satisfying_assignments(&tf, 24).unwrap(), sat(&["a", "b"], "a <-> b"));

        let tautology = support_formula(&context, &[0, 1, 2, 3]).unwrap();
        let tf = TaggedFormula::new(context.clone(), tautology).unwrap();
        assert_eq!(satisfying_assignments(&tf, 24).unwrap().len(), 4);

        assert!(matches!(
            support_formula(&context, &[]),
            Err(Error::EmptyAssignmentSet)
        ));

        // Round trip at the level of satisfying sets, arbitrary formula.
        let phi = tagged(&["p", "q", "r"], "(p ^ q) | !r");
        let cells = satisfying_assignments(&phi, 24).unwrap();
        let back = support_formula(&ctx(&["p", "q", "r"]), &cells).unwrap();
        let back = TaggedFormula::new(ctx(&["p", "q", "r"]), back).unwrap();
        assert_eq!(satisfying_assignments(&back, 24).unwrap(), cells);
    }

    #[test]
    fn one_hot_examples() {
        let u4 = ctx(&["A", "B", "C", "D"]);
        let tf = TaggedFormula::new(u4.clone(), one_hot_formula(&u4)).unwrap();
        let cells = satisfying_assignments(&tf, 24).unwrap();
        assert_eq!(cells.len(), 4);
        // Exactly one 0-outcome per satisfying cell.
        for c in cells {
            assert_eq!((!c & 0b1111).count_ones(), 1);
        }

        let u1 = ctx(&["x"]);
        let tf1 = TaggedFormula::new(u1.clone(), one_hot_formula(&u1)).unwrap();
        let var = TaggedFormula::new(u1, Formula::var("x")).unwrap();
        assert_eq!(
            satisfying_assignments(&tf1, 24).unwrap(),
            satisfying_assignments(&var, 24).unwrap()
        );
    }

    #[test]
    fn parity_examples() {
        let ab = ctx(&["a", "b"]);
        let even = TaggedFormula::new(ab.clone(), parity_formula(&ab, Parity::Even)).unwrap();
        assert_eq!(satisfying_assignments(&even, 24).unwrap(), vec![0b00, 0b11]);

        let abc = ctx(&["A", "B", "C"]);
        let odd = TaggedFormula::new(abc.clone(), parity_formula(&abc, Parity::Odd)).unwrap();
        assert_eq!(
            satisfying_assignments(&odd, 24).unwrap(),
            vec![0b001, 0b010, 0b100, 0b111]
        );

        // The two parities split 2^U in half for several sizes.
        for n in 1..=6 {
            let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let even = TruthTable::of(&parity_formula(&names, Parity::Even), &names).unwrap();
            let odd = TruthTable::of(&parity_formula(&names, Parity::Odd), &names).unwrap();
            assert_eq!(even.count(), 1 << (n - 1));
            assert_eq!(odd.count(), 1 << (n - 1));
            let mut both = even.clone();
            both.intersect_with(&odd);
            assert_eq!(both.count(), 0);
        }
    }

    #[test]
    fn max_satisfiable_bell_family() {
        // Three of the four correlation formulas hold at the all-0
        // assignment, and the family is contradictory, so the answer is 3.
        let ms = FormulaMultiset::from_entries(vec![
            (1, tagged(&["a", "b"], "a <-> b")),
            (1, tagged(&["a", "b'"], "a <-> b'")),
            (1, tagged(&["a'", "b"], "a' <-> b")),
            (1, tagged(&["a'", "b'"], "a' ^ b'")),
        ]);
        let (max, witness) = max_satisfiable_with_witness(&ms, DEFAULT_VAR_LIMIT).unwrap();
        assert_eq!(max, 3);
        // The witness really does satisfy three of the four.
        let outcome = |v: &str| *witness.get(v).unwrap() as u32;
        let sat_count = [
            outcome("a") == outcome("b"),
            outcome("a") == outcome("b'"),
            outcome("a'") == outcome("b"),
            outcome("a'") != outcome("b'"),
        ]
        .iter()
        .filter(|s| **s)
        .count();
        assert_eq!(sat_count, 3);
    }

    #[test]
    fn max_satisfiable_counts_multiplicity() {
        // k copies of x plus one !x: best is max(k, 1).
        for k in [0u64, 1, 2, 5] {
            let ms = FormulaMultiset::from_entries(vec![
                (k, tagged(&["x"], "x")),
                (1, tagged(&["x"], "!x")),
            ]);
            assert_eq!(max_satisfiable(&ms, 24).unwrap(), k.max(1));
        }
        assert_eq!(max_satisfiable(&FormulaMultiset::new(), 24).unwrap(), 0);
    }

    #[test]
    fn max_satisfiable_respects_limit() {
        let names: Vec<String> = (0..30).map(|i| format!("v{i}")).collect();
        let tf = TaggedFormula::new(names.clone(), Formula::var("v0")).unwrap();
        let ms = FormulaMultiset::from_entries(vec![(1, tf)]);
        assert!(matches!(
            max_satisfiable(&ms, 24),
            Err(Error::LimitExceeded { got: 30, limit: 24 })
        ));
    }

    #[test]
    fn joint_satisfiability() {
        let sat = is_jointly_satisfiable(
            &[tagged(&["a", "b"], "a <-> b"), tagged(&["b", "c"], "b ^ c")],
            24,
        )
        .unwrap();
        let w = sat.expect("satisfiable");
        assert_eq!(w["a"], w["b"]);
        assert_ne!(w["b"], w["c"]);

        let unsat = is_jointly_satisfiable(
            &[tagged(&["x"], "x"), tagged(&["x"], "!x")],
            24,
        )
        .unwrap();
        assert!(unsat.is_none());
    }

    #[test]
    fn complementation() {
        let context = ctx(&["p", "q", "r"]);
        for text in ["p & q", "p ^ (q | r)", "TRUE", "p <-> (q <-> r)"] {
            let f = Formula::parse(text).unwrap();
            let table = TruthTable::of(&f, &context).unwrap();
            let neg = TruthTable::of(&Formula::not(f), &context).unwrap();
            assert_eq!(table.count() + neg.count(), 8);
            let mut overlap = table.clone();
            overlap.intersect_with(&neg);
            assert_eq!(overlap.count(), 0);
        }
    }

    #[test]
    fn truth_table_wide_universe() {
        // 7 variables crosses the one-word boundary; check a var identity.
        let names: Vec<String> = (0..7).map(|i| format!("v{i}")).collect();
        let t = TruthTable::of(&Formula::var("v6"), &names).unwrap();
        assert_eq!(t.count(), 64);
        for a in 0..128u64 {
            // v6 true exactly when outcome bit 6 is 0.
            assert_eq!(t.is_true(a), (a >> 6) & 1 == 0);
        }
    }
}
