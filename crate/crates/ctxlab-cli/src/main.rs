//! `ctxlab`: command-line front end for the ctxlab library.
//!
//! Every run is a pure function of its arguments: no clock, no environment,
//! and randomness only behind an explicit `--seed`. Human-readable reports go
//! to stdout; `--out FILE` additionally writes the JSON document. Exit codes:
//! 0 on success (a contextual verdict is a result, not an error), 1 on domain
//! errors, 2 on usage errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::{json, Value};

use ctxlab::contextuality::{
    classify, extends_to_section, find_noncontextual_decomposition, ContextualityClass,
};
use ctxlab::inequalities::{
    canonical_support_inequality, chsh_functional, correlation_to_logical, evaluate_logical,
    expectation_vector, logical_to_correlation, possibilistic_witness_inequality,
    rational_to_logical, LogicalBellInequality,
};
use ctxlab::json::{
    cell_to_bits, format_rat, pretty_rat, read_correlation, read_logical, read_model,
    read_observables, read_rational, read_rays, render_correlation, render_logical,
    render_rational, write_correlation, write_decomposition, write_inequality_set, write_logical,
    write_model, write_support,
};
use ctxlab::logic::{max_satisfiable, FormulaMultiset};
use ctxlab::model::{bell_scenario_cover, EmpiricalModel, MeasurementCover, SupportModel};
use ctxlab::polytope::{complete_logical_bell_set, correlation_polytope, noncontextual_polytope};
use ctxlab::quantum::{
    bell_state, bell_xy_assignment, born_model_with_denominator, ghz_state, ghz_xy_assignment,
    ks18_rays, ks_observables, random_state, Complex64, ObservableAssignment, StateVector,
    DEFAULT_MAX_DENOMINATOR,
};
use ctxlab::{rat_int, zoo, DEFAULT_VAR_LIMIT};
use ctxlab_cli::checks;

type CliError = Box<dyn std::error::Error>;
type CliResult = Result<(), CliError>;

#[derive(Parser)]
#[command(
    name = "ctxlab",
    version,
    about = "Exact contextuality analysis of empirical models over measurement covers"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Classify a model and report its canonical logical Bell inequality
    Classify(ClassifyArgs),
    /// Compute a complete inequality set for a cover
    Derive(DeriveArgs),
    /// Evaluate a stored inequality against a model
    Eval(EvalArgs),
    /// Convert an inequality between rational, correlation and logical form
    Convert(ConvertArgs),
    /// Print a model's per-context expectation vector
    Expect(ExpectArgs),
    /// Generate an exact model table from a quantum state and observables
    Quantum(QuantumArgs),
    /// List the built-in fixtures, or print one
    Zoo(ZooArgs),
    /// Run the built-in reproduction checks
    Selftest(SelftestArgs),
}

/// Where a probability model comes from.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct ModelSource {
    /// Model file (JSON)
    #[arg(long, value_name = "FILE")]
    model: Option<PathBuf>,
    /// Built-in fixture name
    #[arg(long, value_name = "NAME")]
    zoo: Option<String>,
}

impl ModelSource {
    fn load(&self) -> Result<EmpiricalModel, CliError> {
        if let Some(path) = &self.model {
            Ok(read_model(&read_file(path)?)?)
        } else {
            let name = self.zoo.as_deref().unwrap();
            zoo::zoo(name)?
                .model()
                .ok_or_else(|| format!("fixture {name} carries no probability model").into())
        }
    }
}

/// Where a measurement cover comes from.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct CoverSource {
    /// Take the cover from a model file (JSON)
    #[arg(long, value_name = "FILE")]
    model: Option<PathBuf>,
    /// Take the cover from a built-in fixture
    #[arg(long, value_name = "NAME")]
    zoo: Option<String>,
    /// Bell-type scenario as parties,settings,outcome-bits
    #[arg(long, value_name = "N,K,P")]
    scenario: Option<String>,
}

impl CoverSource {
    fn load(&self) -> Result<MeasurementCover, CliError> {
        if let Some(path) = &self.model {
            Ok(read_model(&read_file(path)?)?.cover().clone())
        } else if let Some(name) = &self.zoo {
            Ok(zoo::zoo(name)?.cover().clone())
        } else {
            let spec = self.scenario.as_deref().unwrap();
            let parts: Vec<usize> = spec
                .split(',')
                .map(|p| p.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| format!("bad scenario {spec:?}, expected N,K,P"))?;
            if parts.len() != 3 {
                return Err(format!("bad scenario {spec:?}, expected N,K,P").into());
            }
            Ok(bell_scenario_cover(parts[0], parts[1], parts[2])?)
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum InequalityKind {
    Logical,
    Rational,
    Correlation,
}

impl InequalityKind {
    fn name(self) -> &'static str {
        match self {
            InequalityKind::Logical => "logical",
            InequalityKind::Rational => "rational",
            InequalityKind::Correlation => "correlation",
        }
    }
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    source: ModelSource,
    /// Write the JSON report here
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Variable cap for exhaustive enumeration
    #[arg(long, value_name = "N", default_value_t = DEFAULT_VAR_LIMIT)]
    limit_vars: usize,
}

#[derive(Args)]
struct DeriveArgs {
    #[command(flatten)]
    source: CoverSource,
    /// Kind of inequality set to derive
    #[arg(long, value_enum)]
    target: InequalityKind,
    /// Write the JSON document here
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Variable cap for exhaustive enumeration
    #[arg(long, value_name = "N", default_value_t = DEFAULT_VAR_LIMIT)]
    limit_vars: usize,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    source: ModelSource,
    /// Inequality file (JSON)
    #[arg(long, value_name = "FILE")]
    inequality: PathBuf,
    /// Treat the inequality file as this kind instead of auto-detecting
    #[arg(long, value_enum)]
    from: Option<InequalityKind>,
    /// Write the JSON report here
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConvertArgs {
    #[command(flatten)]
    source: CoverSource,
    /// Inequality file (JSON)
    #[arg(long, value_name = "FILE")]
    inequality: PathBuf,
    /// Kind to convert into
    #[arg(long, value_enum)]
    target: InequalityKind,
    /// Treat the inequality file as this kind instead of auto-detecting
    #[arg(long, value_enum)]
    from: Option<InequalityKind>,
    /// Write the JSON document here
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Variable cap for exhaustive enumeration
    #[arg(long, value_name = "N", default_value_t = DEFAULT_VAR_LIMIT)]
    limit_vars: usize,
}

#[derive(Args)]
struct ExpectArgs {
    #[command(flatten)]
    source: ModelSource,
    /// Write the JSON report here
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Preset {
    /// Two-qubit singlet-plane measurements at the standard Bell angles
    BellXy,
    /// Three-qubit equatorial X/Y measurements
    GhzXy,
    /// The 18-ray Kochen-Specker configuration in dimension 4
    Ks18,
}

#[derive(Args)]
#[command(group = ArgGroup::new("observable-source").required(true).args(["preset", "observables", "rays"]))]
struct QuantumArgs {
    /// Built-in cover and observable preset
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Observable file (JSON); the cover comes from --model
    #[arg(long, value_name = "FILE", requires = "model")]
    observables: Option<PathBuf>,
    /// Model file (JSON) supplying the measurement cover for --observables
    #[arg(long, value_name = "FILE")]
    model: Option<PathBuf>,
    /// Ray file (JSON): a list of real vectors
    #[arg(long, value_name = "FILE")]
    rays: Option<PathBuf>,
    /// State preparation: bell, ghz, basis:<i>, or random
    #[arg(long, value_name = "STATE")]
    state: Option<String>,
    /// RNG seed, required by --state random
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Largest denominator allowed when snapping probabilities
    #[arg(long, value_name = "N", default_value_t = DEFAULT_MAX_DENOMINATOR)]
    max_denominator: u64,
    /// Write the model JSON here
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ZooArgs {
    /// Fixture name; omit to list all fixtures
    name: Option<String>,
    /// Write the fixture JSON here
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    /// RNG seed for the randomized checks
    #[arg(long, value_name = "N", default_value_t = checks::DEFAULT_SEED)]
    seed: u64,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

fn run(cli: &Cli) -> CliResult {
    match &cli.verb {
        Verb::Classify(args) => classify_cmd(args),
        Verb::Derive(args) => derive_cmd(args),
        Verb::Eval(args) => eval_cmd(args),
        Verb::Convert(args) => convert_cmd(args),
        Verb::Expect(args) => expect_cmd(args),
        Verb::Quantum(args) => quantum_cmd(args),
        Verb::Zoo(args) => zoo_cmd(args),
        Verb::Selftest(args) => selftest_cmd(args),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

/// Re-parse a library writer's output for embedding in a larger document.
fn val(text: String) -> Value {
    serde_json::from_str(&text).expect("library writers emit valid JSON")
}

fn write_out(out: &Option<PathBuf>, doc: &Value) -> CliResult {
    if let Some(path) = out {
        let mut text = serde_json::to_string_pretty(doc)?;
        text.push('\n');
        fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

fn yesno(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn context_label(cover: &MeasurementCover, c: usize) -> String {
    format!("{{{}}}", cover.context_names(c).join(", "))
}

fn print_model(m: &EmpiricalModel) {
    let cover = m.cover();
    for c in 0..cover.n_contexts() {
        let width = cover.context(c).len();
        let cells: Vec<String> = (0..cover.n_cells(c))
            .map(|cell| format!("{}: {}", cell_to_bits(cell, width), pretty_rat(m.prob(c, cell))))
            .collect();
        println!("  {}  {}", context_label(cover, c), cells.join("  "));
    }
}

fn print_support(sm: &SupportModel) {
    let cover = sm.cover();
    for c in 0..cover.n_contexts() {
        let width = cover.context(c).len();
        let cells: Vec<String> = sm
            .support(c)
            .iter()
            .map(|&cell| cell_to_bits(cell, width))
            .collect();
        println!("  {}  {}", context_label(cover, c), cells.join(" "));
    }
}

fn classify_cmd(args: &ClassifyArgs) -> CliResult {
    let m = args.source.load()?;
    let limit = args.limit_vars;
    let cover = m.cover().clone();
    let class = classify(&m, limit)?;
    let no_signalling = m.is_no_signalling();

    // The headline inequality: for strongly contextual models the support
    // inequality is always maximally violated; otherwise the per-context
    // parity formulas, negated on negative expectations, reproduce the
    // standard Bell-type violations.
    let family = checks::signed_parity_family(&m)?;
    let (canonical, family_name) = if class == ContextualityClass::StronglyContextual {
        (canonical_support_inequality(&m.support(), limit)?, "support")
    } else {
        let ms =
            FormulaMultiset::from_entries(family.iter().map(|tf| (1, tf.clone())).collect());
        let bound = max_satisfiable(&ms, limit)?;
        (
            LogicalBellInequality::new_unchecked(ms, bound),
            "signed-parity",
        )
    };
    let (lhs, violation) = evaluate_logical(&m, &canonical)?;
    let max_violation = rat_int(cover.n_contexts() as i64 - canonical.bound() as i64);
    let maximal = !violation.is_zero() && violation == max_violation;

    println!(
        "model: {} variables, {} contexts",
        cover.n_vars(),
        cover.n_contexts()
    );
    println!("class: {}", class.name());
    println!("contextual: {}", yesno(class.is_contextual()));
    println!("no-signalling: {}", yesno(no_signalling));
    println!("canonical inequality ({family_name}): {}", render_logical(&canonical));
    println!("  lhs: {}", pretty_rat(&lhs));
    println!(
        "  violation: {}  maximal: {}",
        pretty_rat(&violation),
        yesno(maximal)
    );

    let chsh = match chsh_functional(&m, &family, limit) {
        Ok(value) => {
            let bound = cover.n_contexts() as i64 - 2;
            let violated = value > rat_int(bound);
            println!(
                "CHSH functional: {} against bound {}  violated: {}",
                pretty_rat(&value),
                bound,
                yesno(violated)
            );
            Some(json!({
                "value": format_rat(&value),
                "bound": bound,
                "violated": violated,
            }))
        }
        Err(ctxlab::Error::JointlySatisfiable) => {
            println!("CHSH functional: not applicable (context formulas jointly satisfiable)");
            None
        }
        Err(e) => return Err(e.into()),
    };

    let witness = if class >= ContextualityClass::PossibilisticallyContextual {
        let sm = m.support();
        let mut found = None;
        'outer: for c in 0..cover.n_contexts() {
            for &cell in sm.support(c) {
                if !extends_to_section(&sm, c, cell, limit)? {
                    found = Some((c, cell));
                    break 'outer;
                }
            }
        }
        let (c, cell) = found.ok_or("classifier found no non-extending support cell")?;
        let ineq = possibilistic_witness_inequality(&m, c, cell, limit)?;
        let (_, w_violation) = evaluate_logical(&m, &ineq)?;
        let bits = cell_to_bits(cell, cover.context(c).len());
        println!(
            "witness: cell {} of {} extends to no global section",
            bits,
            context_label(&cover, c)
        );
        println!("  inequality: {}", render_logical(&ineq));
        println!("  violation: {}", pretty_rat(&w_violation));
        Some(json!({
            "context": cover.context_names(c),
            "cell": bits,
            "inequality": val(write_logical(&ineq)),
            "violation": format_rat(&w_violation),
        }))
    } else {
        None
    };

    let decomposition = if class == ContextualityClass::Noncontextual {
        let d = find_noncontextual_decomposition(&m, limit)?
            .ok_or("classifier and decomposition search disagree")?;
        println!(
            "noncontextual decomposition over {} global assignments",
            d.weights().len()
        );
        Some(val(write_decomposition(&d)))
    } else {
        None
    };

    let report = json!({
        "class": class.name(),
        "contextual": class.is_contextual(),
        "no_signalling": no_signalling,
        "canonical": {
            "family": family_name,
            "inequality": val(write_logical(&canonical)),
            "lhs": format_rat(&lhs),
            "violation": format_rat(&violation),
            "maximal": maximal,
        },
        "chsh": chsh,
        "witness": witness,
        "decomposition": decomposition,
    });
    write_out(&args.out, &report)
}

fn derive_cmd(args: &DeriveArgs) -> CliResult {
    let cover = args.source.load()?;
    match args.target {
        InequalityKind::Rational => {
            let set = noncontextual_polytope(&cover, args.limit_vars)?;
            println!(
                "non-contextual polytope: {} inequalities over {} table cells",
                set.len(),
                set.n_coords()
            );
            for ineq in set.inequalities() {
                println!("  {}", render_rational(&cover, ineq));
            }
            write_out(&args.out, &val(write_inequality_set(&cover, &set)))
        }
        InequalityKind::Logical => {
            let list = complete_logical_bell_set(&cover, args.limit_vars)?;
            println!("logical Bell inequalities: {}", list.len());
            for ineq in &list {
                println!("  {}", render_logical(ineq));
            }
            let docs: Vec<Value> = list.iter().map(|i| val(write_logical(i))).collect();
            write_out(&args.out, &json!({ "inequalities": docs }))
        }
        InequalityKind::Correlation => {
            let list = correlation_polytope(&cover, args.limit_vars)?;
            println!("correlation polytope: {} inequalities", list.len());
            for ineq in &list {
                println!("  {}", render_correlation(&cover, ineq));
            }
            let docs: Vec<Value> = list
                .iter()
                .map(|i| val(write_correlation(&cover, i)))
                .collect();
            write_out(&args.out, &json!({ "inequalities": docs }))
        }
    }
}

/// Accept either a bare inequality document or a wrapper (such as a zoo
/// fixture) holding one under an "inequality" key.
fn inequality_payload(text: &str) -> Result<(Value, String), CliError> {
    let parsed: Value = serde_json::from_str(text)?;
    let payload = match parsed.get("inequality") {
        Some(inner) => inner.clone(),
        None => parsed,
    };
    let text = payload.to_string();
    Ok((payload, text))
}

/// Tell the three inequality documents apart by shape: logical documents
/// carry a multiset, rational documents cell-keyed string coefficients, and
/// correlation documents integer coefficients per context.
fn detect_kind(v: &Value) -> Result<InequalityKind, CliError> {
    let obj = v
        .as_object()
        .ok_or("inequality file is not a JSON object")?;
    if obj.contains_key("multiset") {
        return Ok(InequalityKind::Logical);
    }
    if obj.contains_key("coeffs") {
        let rational = obj.get("bound").map_or(false, Value::is_string);
        return Ok(if rational {
            InequalityKind::Rational
        } else {
            InequalityKind::Correlation
        });
    }
    Err("unrecognized inequality document".into())
}

fn eval_cmd(args: &EvalArgs) -> CliResult {
    let m = args.source.load()?;
    let (parsed, text) = inequality_payload(&read_file(&args.inequality)?)?;
    let kind = match args.from {
        Some(k) => k,
        None => detect_kind(&parsed)?,
    };
    let (rendered, lhs, bound, violation, holds) = match kind {
        InequalityKind::Logical => {
            let ineq = read_logical(&text)?;
            let (lhs, violation) = evaluate_logical(&m, &ineq)?;
            let holds = violation.is_zero();
            (
                render_logical(&ineq),
                lhs,
                ineq.bound().to_string(),
                violation,
                holds,
            )
        }
        InequalityKind::Rational => {
            let ineq = read_rational(m.cover(), &text)?;
            let lhs = ineq.lhs_on(&m);
            let violation = (&lhs - ineq.bound()).max(rat_int(0));
            (
                render_rational(m.cover(), &ineq),
                lhs,
                format_rat(ineq.bound()),
                violation,
                ineq.holds_on(&m),
            )
        }
        InequalityKind::Correlation => {
            let ineq = read_correlation(m.cover(), &text)?;
            let ev = expectation_vector(&m);
            let lhs = ineq.lhs_on(&ev);
            let bound = ctxlab::Rat::from_integer(ineq.bound().clone());
            let violation = (&lhs - &bound).max(rat_int(0));
            (
                render_correlation(m.cover(), &ineq),
                lhs,
                ineq.bound().to_string(),
                violation,
                ineq.holds_on(&ev),
            )
        }
    };
    println!("kind: {}", kind.name());
    println!("inequality: {rendered}");
    println!("lhs: {}", pretty_rat(&lhs));
    println!("bound: {bound}");
    println!("violation: {}", pretty_rat(&violation));
    println!("holds: {}", yesno(holds));
    let report = json!({
        "kind": kind.name(),
        "lhs": format_rat(&lhs),
        "bound": bound,
        "violation": format_rat(&violation),
        "holds": holds,
    });
    write_out(&args.out, &report)
}

fn convert_cmd(args: &ConvertArgs) -> CliResult {
    let cover = args.source.load()?;
    let (parsed, text) = inequality_payload(&read_file(&args.inequality)?)?;
    let from = match args.from {
        Some(k) => k,
        None => detect_kind(&parsed)?,
    };
    match (from, args.target) {
        (InequalityKind::Rational, InequalityKind::Logical) => {
            let r = read_rational(&cover, &text)?;
            let l = rational_to_logical(&cover, &r, args.limit_vars)?.reduced();
            println!("{}", render_logical(&l));
            write_out(&args.out, &val(write_logical(&l)))
        }
        (InequalityKind::Correlation, InequalityKind::Logical) => {
            let c = read_correlation(&cover, &text)?;
            let l = correlation_to_logical(&cover, &c, args.limit_vars)?.reduced();
            println!("{}", render_logical(&l));
            write_out(&args.out, &val(write_logical(&l)))
        }
        (InequalityKind::Logical, InequalityKind::Correlation) => {
            let l = read_logical(&text)?;
            let c = logical_to_correlation(&cover, &l)?;
            println!("{}", render_correlation(&cover, &c));
            write_out(&args.out, &val(write_correlation(&cover, &c)))
        }
        (a, b) if a == b => {
            Err(format!("inequality is already in {} form", a.name()).into())
        }
        (a, b) => Err(format!("no conversion from {} to {}", a.name(), b.name()).into()),
    }
}

fn expect_cmd(args: &ExpectArgs) -> CliResult {
    let m = args.source.load()?;
    let cover = m.cover();
    let ev = expectation_vector(&m);
    let mut contexts = Vec::new();
    let mut values = Vec::new();
    for (c, value) in ev.values().iter().enumerate() {
        println!("E{} = {}", context_label(cover, c), pretty_rat(value));
        contexts.push(cover.context_names(c));
        values.push(format_rat(value));
    }
    let report = json!({ "contexts": contexts, "values": values });
    write_out(&args.out, &report)
}

fn parse_state(
    spec: &str,
    dim: usize,
    seed: Option<u64>,
) -> Result<StateVector, CliError> {
    match spec {
        "bell" => {
            let s = bell_state();
            if s.dim() != dim {
                return Err(
                    format!("bell state has dimension 4, observables act on {dim}").into(),
                );
            }
            Ok(s)
        }
        "ghz" => {
            let n = dim.trailing_zeros() as usize;
            if !dim.is_power_of_two() || n < 2 {
                return Err(format!("no ghz state in dimension {dim}").into());
            }
            Ok(ghz_state(n)?)
        }
        "random" => {
            let seed = seed.ok_or("--state random requires --seed")?;
            let mut rng = StdRng::seed_from_u64(seed);
            Ok(random_state(dim, &mut rng)?)
        }
        _ => {
            if let Some(index) = spec.strip_prefix("basis:") {
                let i: usize = index
                    .parse()
                    .map_err(|_| format!("bad basis index {index:?}"))?;
                if i >= dim {
                    return Err(format!("basis index {i} out of range for dimension {dim}").into());
                }
                let mut amplitudes = vec![Complex64::ZERO; dim];
                amplitudes[i] = Complex64::ONE;
                Ok(StateVector::new(amplitudes)?)
            } else {
                Err(format!("unknown state {spec:?}; use bell, ghz, basis:<i> or random").into())
            }
        }
    }
}

fn quantum_cmd(args: &QuantumArgs) -> CliResult {
    let (cover, obs): (MeasurementCover, ObservableAssignment) = if let Some(preset) = args.preset
    {
        match preset {
            Preset::BellXy => bell_xy_assignment()?,
            Preset::GhzXy => ghz_xy_assignment()?,
            Preset::Ks18 => ks_observables(&ks18_rays())?,
        }
    } else if let Some(path) = &args.rays {
        let rays = read_rays(&read_file(path)?)?;
        ks_observables(&rays)?
    } else {
        let obs_path = args.observables.as_ref().unwrap();
        let model_path = args.model.as_ref().unwrap();
        let obs = read_observables(&read_file(obs_path)?)?;
        let cover = read_model(&read_file(model_path)?)?.cover().clone();
        obs.verify_cover(&cover)?;
        (cover, obs)
    };

    let default_state = match args.preset {
        Some(Preset::BellXy) => Some("bell"),
        Some(Preset::GhzXy) => Some("ghz"),
        _ => None,
    };
    let spec = match args.state.as_deref().or(default_state) {
        Some(s) => s,
        None => return Err("this source has no default state; pass --state".into()),
    };
    let state = parse_state(spec, obs.dim(), args.seed)?;

    let m = born_model_with_denominator(&state, &cover, &obs, args.max_denominator)?;
    println!(
        "born model: {} contexts, state {spec}, denominator cap {}",
        cover.n_contexts(),
        args.max_denominator
    );
    print_model(&m);
    write_out(&args.out, &val(write_model(&m)))
}

fn zoo_cmd(args: &ZooArgs) -> CliResult {
    match &args.name {
        None => {
            let mut listed = Vec::new();
            for name in zoo::ZOO_NAMES {
                let fixture = zoo::zoo(name)?;
                let kind = match &fixture {
                    zoo::Fixture::Probability(_) => "probability",
                    zoo::Fixture::Support(_) => "support",
                    zoo::Fixture::Correlation { .. } => "correlation",
                };
                let cover = fixture.cover();
                println!(
                    "{name:<16} {kind:<12} {} variables, {} contexts",
                    cover.n_vars(),
                    cover.n_contexts()
                );
                listed.push(json!({ "name": name, "kind": kind }));
            }
            write_out(&args.out, &json!({ "fixtures": listed }))
        }
        Some(name) => {
            let fixture = zoo::zoo(name)?;
            match &fixture {
                zoo::Fixture::Probability(m) => {
                    println!("{name}: probability model");
                    print_model(m);
                    write_out(&args.out, &val(write_model(m)))
                }
                zoo::Fixture::Support(sm) => {
                    println!("{name}: support model");
                    print_support(sm);
                    write_out(&args.out, &val(write_support(sm)))
                }
                zoo::Fixture::Correlation { cover, inequality } => {
                    println!("{name}: correlation inequality");
                    println!("  {}", render_correlation(cover, inequality));
                    let contexts: Vec<Vec<String>> = (0..cover.n_contexts())
                        .map(|c| cover.context_names(c))
                        .collect();
                    let doc = json!({
                        "cover": {
                            "variables": cover.variables(),
                            "contexts": contexts,
                        },
                        "inequality": val(write_correlation(cover, inequality)),
                    });
                    write_out(&args.out, &doc)
                }
            }
        }
    }
}

fn selftest_cmd(args: &SelftestArgs) -> CliResult {
    let list = checks::all();
    let total = list.len();
    let mut failed = 0usize;
    for (i, check) in list.iter().enumerate() {
        let start = Instant::now();
        let outcome = (check.run)(args.seed);
        let elapsed = start.elapsed();
        let tag = format!("[{:>2}/{total}] {}", i + 1, check.name);
        match outcome {
            Ok(()) if elapsed <= check.budget => {
                println!("{tag} ... ok ({elapsed:.2?})");
            }
            Ok(()) => {
                failed += 1;
                println!(
                    "{tag} ... FAIL (took {elapsed:.2?}, budget {:?})",
                    check.budget
                );
            }
            Err(e) => {
                failed += 1;
                println!("{tag} ... FAIL ({e})");
            }
        }
    }
    if failed > 0 {
        Err(format!("{failed} of {total} checks failed").into())
    } else {
        println!("selftest: {total} passed");
        Ok(())
    }
}
