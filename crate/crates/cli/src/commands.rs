//! Argument parsing and the subcommands. [`run`] returns the process exit
//! code: 0 when the outcome matches the expectation, 1 when it does not,
//! 2 for usage and input errors, 3 when the run was inconclusive.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use finitopos_core::checks::{
    check_adjunction_verdict, check_exponential_ideal, check_frobenius_all, check_lcc, check_locally_connected,
    check_semi_left_exact, check_stable_units, replay, DEFAULT_PI_INSTANCES,
};
use finitopos_core::fincat::{check_adjunction, FinCategory, FinFunctor, Reflection};
use finitopos_core::fixtures;
use finitopos_core::graphpre::{
    check_exponential_ideal_graphs, check_product_preservation, find_pi_witness, find_sieve_witness,
    find_sle_failure, GraphBounds, ProductBounds, SearchBounds,
};
use finitopos_core::kan::{lan, ran, restrict};
use finitopos_core::presheaf::{dependent_product, exponential, Presheaf, PresheafMap};
use finitopos_core::verdict::{Outcome, ReflectionData, Verdict, Witness};
use finitopos_core::{Budget, Error};

use crate::dsl::{self, CatName, Document, Value};
use crate::report::{Report, ResultData};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

/// Preorder size used by `check exp-ideal --graphs` unless given.
pub const DEFAULT_GRAPH_PREORDER: usize = 3;
/// Vertex bound used by `check exp-ideal --graphs` unless given.
pub const DEFAULT_GRAPH_VERTICES: usize = 3;
/// Carrier bound of the locally-connected check unless given.
pub const DEFAULT_LC_CARRIER: usize = 1;

#[derive(Debug, Parser)]
#[command(name = "finitopos", version, about = "Exact checks on finite categories and presheaves")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Object cutoff for reflection checks; carrier bound for `locally-connected`.
    #[arg(long, global = true)]
    bound: Option<usize>,
    #[arg(long, global = true)]
    max_vertices: Option<usize>,
    /// Edges beyond the distinguished loops.
    #[arg(long, global = true)]
    max_edges: Option<usize>,
    #[arg(long, global = true)]
    max_preorder: Option<usize>,
    /// Enumeration budget; overrides FINITOPOS_BUDGET.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Worker threads for searches.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Outcome that counts as success.
    #[arg(long, global = true, value_enum)]
    expect: Option<Expect>,
    /// Where to write the JSON report.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Searches stop at the first witness any worker finds.
    #[arg(long, global = true)]
    fast: bool,
    /// Built-in reflection (or category, for `lcc`) by name.
    #[arg(long, global = true)]
    fixture: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Expect {
    Pass,
    Fail,
    Found,
    NotFound,
}

impl Expect {
    fn outcome(self) -> Outcome {
        match self {
            Expect::Pass => Outcome::Pass,
            Expect::Fail | Expect::Found => Outcome::Fail,
            Expect::NotFound => Outcome::NotFound,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate spec files; reflections are checked for the universal property.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Print the canonical form.
        #[arg(long)]
        emit: bool,
    },
    /// Restriction and Kan extensions of a presheaf along a functor.
    Kan {
        #[arg(value_enum)]
        op: KanOp,
        /// FILE[@NAME] or a built-in functor name.
        #[arg(long)]
        functor: String,
        /// FILE[@NAME].
        #[arg(long)]
        presheaf: String,
    },
    /// The exponential Y^X.
    Exp {
        /// Y, as FILE[@NAME].
        #[arg(long)]
        presheaf: String,
        /// X, as FILE[@NAME].
        #[arg(long)]
        exponent: String,
    },
    /// The dependent product of g : Z -> X along f : X -> Y.
    Pi {
        /// f, as FILE[@NAME].
        #[arg(long)]
        along: String,
        /// g, as FILE[@NAME].
        #[arg(long)]
        map: String,
    },
    /// Property checks on a reflection.
    Check {
        #[arg(value_enum)]
        property: CheckProp,
        /// FILE[@NAME] of a reflection, instead of --fixture.
        #[arg(long)]
        reflection: Option<String>,
        /// FILE[@NAME] of a category, for `lcc`.
        #[arg(long)]
        category: Option<String>,
        /// Check the reflexive-graph/preorder reflection (`exp-ideal` only).
        #[arg(long)]
        graphs: bool,
        /// Dependent-product instances examined by `locally-connected`.
        #[arg(long)]
        pi_instances: Option<usize>,
    },
    /// Bounded witness searches over reflexive graphs and preorders.
    Search {
        #[arg(value_enum)]
        target: SearchTarget,
        /// Also try graphs that are already preorders (`sieve-witness`).
        #[arg(long)]
        exhaustive: bool,
    },
    /// Re-verify the witness and digest stored in a report.
    Replay { file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KanOp {
    Restrict,
    Lan,
    Ran,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckProp {
    Adjunction,
    Frobenius,
    Sle,
    StableUnits,
    ExpIdeal,
    LocallyConnected,
    Lcc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SearchTarget {
    SleFailure,
    PiWitness,
    SieveWitness,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Input(Vec<String>),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CResult<T> = Result<T, CliError>;

/// Everything a command produced.
struct Run {
    command: String,
    verdict: Verdict,
    result: Option<ResultData>,
    default_expect: Expect,
    /// Printed after the summary line.
    text: Option<String>,
    /// Set by `replay`: whether the stored verdict and digest were reproduced.
    replay_matches: Option<bool>,
}

/// Parses arguments and runs; never exits the process.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let budget = cli.budget.map(Budget::new).unwrap_or_else(Budget::from_env);
    match execute(&cli, &budget) {
        Ok(run) => finish(&cli, run),
        Err(CliError::Core(Error::BudgetExceeded { limit })) => {
            let v = Verdict::new("budget", &[("budget", limit)])
                .inconclusive(format!("enumeration budget of {limit} exceeded"));
            println!("{}", v.summary());
            if let Err(code) = write_report(&cli, &Report::new(&command_name(&cli), &v, None)) {
                return code;
            }
            EXIT_INCONCLUSIVE
        }
        Err(CliError::Core(e)) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
        Err(CliError::Input(lines)) => {
            for l in lines {
                eprintln!("{l}");
            }
            EXIT_USAGE
        }
    }
}

fn command_name(cli: &Cli) -> String {
    match &cli.command {
        Command::Validate { .. } => "validate".into(),
        Command::Kan { op, .. } => format!("kan {}", op.to_possible_value().unwrap().get_name()),
        Command::Exp { .. } => "exp".into(),
        Command::Pi { .. } => "pi".into(),
        Command::Check { property, .. } => format!("check {}", property.to_possible_value().unwrap().get_name()),
        Command::Search { target, .. } => format!("search {}", target.to_possible_value().unwrap().get_name()),
        Command::Replay { .. } => "replay".into(),
    }
}

fn write_report(cli: &Cli, report: &Report) -> Result<(), i32> {
    if let Some(path) = &cli.out {
        if let Err(e) = fs::write(path, report.to_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return Err(EXIT_USAGE);
        }
    }
    Ok(())
}

fn finish(cli: &Cli, run: Run) -> i32 {
    let v = &run.verdict;
    println!("{}", v.summary());
    if let Some(w) = &v.witness {
        println!("witness: {}", w.kind());
    }
    for n in &v.stats.notes {
        println!("note: {n}");
    }
    if let Some(t) = &run.text {
        print!("{t}");
    }
    let report = Report::new(&run.command, v, run.result);
    if let Err(code) = write_report(cli, &report) {
        return code;
    }
    if let Some(matches) = run.replay_matches {
        return match (matches, v.outcome) {
            (false, _) => EXIT_MISMATCH,
            (true, Outcome::Inconclusive) => EXIT_INCONCLUSIVE,
            (true, _) => EXIT_OK,
        };
    }
    let expect = cli.expect.unwrap_or(run.default_expect);
    match v.outcome {
        Outcome::Inconclusive => EXIT_INCONCLUSIVE,
        o if o == expect.outcome() => EXIT_OK,
        _ => EXIT_MISMATCH,
    }
}

fn execute(cli: &Cli, budget: &Budget) -> CResult<Run> {
    let command = command_name(cli);
    let run = |verdict, default_expect| Run {
        command: command.clone(),
        verdict,
        result: None,
        default_expect,
        text: None,
        replay_matches: None,
    };
    match &cli.command {
        Command::Validate { files, emit } => validate(files, *emit).map(|(v, text)| Run {
            text,
            ..run(v, Expect::Pass)
        }),
        Command::Kan {
            op,
            functor,
            presheaf,
        } => {
            let l = load_functor(functor)?;
            let x = load_presheaf(presheaf)?;
            let (property, out) = match op {
                KanOp::Restrict => ("kan.restrict", restrict(&l, &x)?),
                KanOp::Lan => ("kan.lan", lan(&l, &x, budget)?.output),
                KanOp::Ran => ("kan.ran", ran(&l, &x, budget)?.output),
            };
            Ok(computed(run(Verdict::new(property, &[]), Expect::Pass), &out))
        }
        Command::Exp { presheaf, exponent } => {
            let y = load_presheaf(presheaf)?;
            let x = load_presheaf(exponent)?;
            let e = exponential(&x, &y, budget)?;
            Ok(computed(run(Verdict::new("exp", &[]), Expect::Pass), &e.object))
        }
        Command::Pi { along, map } => {
            let (f, g) = load_maps(along, map)?;
            let p = dependent_product(&f, &g, budget)?;
            Ok(computed(run(Verdict::new("pi", &[]), Expect::Pass), p.object()))
        }
        Command::Check {
            property,
            reflection,
            category,
            graphs,
            pi_instances,
        } => {
            let v = check(cli, *property, reflection.as_deref(), category.as_deref(), *graphs, *pi_instances, budget)?;
            Ok(run(v, Expect::Pass))
        }
        Command::Search { target, exhaustive } => {
            let d = SearchBounds::default();
            let b = SearchBounds {
                max_vertices: cli.max_vertices.unwrap_or(d.max_vertices),
                max_edges: cli.max_edges.unwrap_or(d.max_edges),
                max_preorder: cli.max_preorder.unwrap_or(d.max_preorder),
                jobs: cli.jobs.max(1),
                fast: cli.fast,
            };
            let v = match target {
                SearchTarget::SleFailure => find_sle_failure(&b, budget)?,
                SearchTarget::PiWitness => find_pi_witness(&b, budget)?,
                SearchTarget::SieveWitness => find_sieve_witness(&b, *exhaustive, budget)?,
            };
            Ok(run(v, Expect::Found))
        }
        Command::Replay { file } => replay_report(file, budget).map(|(v, result, matches)| Run {
            result,
            replay_matches: Some(matches),
            ..run(v, Expect::Fail)
        }),
    }
}

fn computed(mut run: Run, x: &Presheaf) -> Run {
    let mut doc = Document::new();
    doc.insert("Base", Value::Category(x.base().clone())).expect("fresh document");
    doc.insert(
        "Result",
        Value::Presheaf {
            base: CatName::Declared("Base".into()),
            presheaf: x.clone(),
        },
    )
    .expect("fresh document");
    let text = dsl::serialize(&doc);
    run.verdict.stats.examined = x.total_size() as u64;
    run.result = Some(ResultData::new(x, text.clone()));
    run.text = Some(text);
    run
}

fn check(
    cli: &Cli,
    property: CheckProp,
    reflection: Option<&str>,
    category: Option<&str>,
    graphs: bool,
    pi_instances: Option<usize>,
    budget: &Budget,
) -> CResult<Verdict> {
    let bound = cli.bound.unwrap_or(usize::MAX);
    if property == CheckProp::Lcc {
        let c = match (category, &cli.fixture) {
            (Some(src), None) => load_category(src)?,
            (None, Some(name)) => Arc::new(fixtures::category(name)?),
            _ => return Err(CliError::Usage("give exactly one of --category and --fixture".into())),
        };
        return Ok(check_lcc(&c, bound)?);
    }
    if property == CheckProp::ExpIdeal && graphs {
        let d = ProductBounds::default();
        let pb = ProductBounds {
            exhaustive: GraphBounds::new(
                cli.max_vertices.unwrap_or(d.exhaustive.max_vertices),
                cli.max_edges.unwrap_or(d.exhaustive.max_edges),
            ),
            ..d
        };
        let products = check_product_preservation(&pb, budget)?;
        let exps = check_exponential_ideal_graphs(
            cli.max_preorder.unwrap_or(DEFAULT_GRAPH_PREORDER),
            cli.max_vertices.unwrap_or(DEFAULT_GRAPH_VERTICES),
            budget,
        )?;
        return Ok(Verdict::combine("graphpre.exp-ideal", vec![products, exps]));
    }
    let r = match (reflection, &cli.fixture) {
        (Some(src), None) => load_reflection(src)?,
        (None, Some(name)) => builtin_reflection(name)?,
        _ => return Err(CliError::Usage("give exactly one of --reflection and --fixture".into())),
    };
    // the checkers refuse non-reflections; report that as a failure instead
    if property != CheckProp::LocallyConnected {
        let adj = check_adjunction_verdict(&r);
        if property == CheckProp::Adjunction || adj.is_fail() {
            return Ok(adj);
        }
    }
    Ok(match property {
        CheckProp::Frobenius => check_frobenius_all(&r, bound)?,
        CheckProp::Sle => check_semi_left_exact(&r, bound)?,
        CheckProp::StableUnits => check_stable_units(&r, bound)?,
        CheckProp::ExpIdeal => check_exponential_ideal(&r, bound)?.combined(),
        CheckProp::LocallyConnected => check_locally_connected(
            r.left(),
            cli.bound.unwrap_or(DEFAULT_LC_CARRIER),
            pi_instances.unwrap_or(DEFAULT_PI_INSTANCES),
            budget,
        )?
        .combined(),
        CheckProp::Adjunction | CheckProp::Lcc => unreachable!("handled above"),
    })
}

fn validate(files: &[PathBuf], emit: bool) -> CResult<(Verdict, Option<String>)> {
    let mut v = Verdict::new("validate", &[("files", files.len() as u64)]);
    let mut text = String::new();
    for path in files {
        let doc = load_document(path)?;
        for (name, value) in doc.entries() {
            v.stats.examined += 1;
            let line = match value {
                Value::Category(c) => format!("category {name}: {} objects, {} morphisms", c.num_objects(), c.num_morphisms()),
                Value::Functor { functor, .. } => format!(
                    "functor {name}: {} objects, {} morphisms mapped",
                    functor.source().num_objects(),
                    functor.source().num_morphisms()
                ),
                Value::Presheaf { presheaf, .. } => format!("presheaf {name}: carriers {:?}", presheaf.sizes()),
                Value::Map { source, target, .. } => format!("map {name}: {source} -> {target}"),
                Value::Reflection { reflection, .. } => {
                    if let Err(failure) = check_adjunction(reflection) {
                        if !v.is_fail() {
                            v = v.fail(Witness::Adjunction {
                                reflection: ReflectionData::from_reflection(reflection),
                                failure,
                            });
                        }
                        format!("reflection {name}: unit is not universal")
                    } else {
                        format!("reflection {name}: adjunction holds")
                    }
                }
            };
            v.note(format!("{}: {line}", path.display()));
        }
        if emit {
            text.push_str(&dsl::serialize(&doc));
        }
    }
    Ok((v, emit.then_some(text)))
}

/// Re-checks a stored witness with the independent verifier and
/// recomputes the digest. The verdict is the reproduced one; the flag
/// says whether verdict and digest both match the report.
fn replay_report(path: &Path, budget: &Budget) -> CResult<(Verdict, Option<ResultData>, bool)> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let report = Report::from_json(&text).map_err(|e| CliError::Input(vec![format!("{}: {e}", path.display())]))?;
    let recorded = report.verdict.outcome;
    let mut v = Verdict::new(&report.verdict.property, &[]);
    v.bounds = report.bounds.clone();
    match &report.witness {
        None => {
            // nothing to re-run; the digest still pins the recorded content
            v.outcome = recorded;
            v.note("no witness stored");
        }
        Some(w) => match replay(w, budget) {
            Ok(()) => v = v.fail(w.clone()),
            Err(Error::BudgetExceeded { limit }) => return Err(CliError::Core(Error::BudgetExceeded { limit })),
            Err(e) => {
                v.outcome = Outcome::Inconclusive;
                v.note(format!("witness does not replay: {e}"));
            }
        },
    }
    let digest = crate::report::digest(&v.property, v.outcome, &v.witness, &report.result);
    let matches = v.outcome == recorded && digest == report.digest;
    if matches {
        v.note(format!("reproduced {recorded} with digest {digest}"));
    } else if digest != report.digest {
        v.note(format!("digest {digest} differs from the recorded {}", report.digest));
    } else {
        v.note(format!("replay gave {} but the report records {recorded}", v.outcome));
    }
    Ok((v, report.result, matches))
}

fn split_ref(src: &str) -> (&str, Option<&str>) {
    match src.rsplit_once('@') {
        Some((p, n)) if !n.is_empty() && !n.contains('/') => (p, Some(n)),
        _ => (src, None),
    }
}

fn load_document(path: &Path) -> CResult<Document> {
    let bytes = fs::read(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    dsl::load_bytes(&bytes).map_err(|ds| {
        CliError::Input(ds.iter().map(|d| format!("{}:{d}", path.display())).collect())
    })
}

/// Loads `FILE[@NAME]` and returns the document with the chosen name.
fn pick(src: &str, kind: &str) -> CResult<(Document, String)> {
    let (path, name) = split_ref(src);
    let doc = load_document(Path::new(path))?;
    let names = doc.names_of(kind);
    let chosen = match name {
        Some(n) if names.contains(&n) => n.to_string(),
        Some(n) => return Err(CliError::Usage(format!("{path} has no {kind} named {n}"))),
        None if names.len() == 1 => names[0].to_string(),
        None => {
            return Err(CliError::Usage(format!(
                "{path} has {} {kind} declarations; choose one with {path}@NAME",
                names.len()
            )))
        }
    };
    Ok((doc, chosen))
}

fn load_category(src: &str) -> CResult<Arc<FinCategory>> {
    let (doc, n) = pick(src, "category")?;
    Ok(doc.category(&n).expect("picked by kind").clone())
}

fn load_presheaf(src: &str) -> CResult<Presheaf> {
    let (doc, n) = pick(src, "presheaf")?;
    Ok(doc.presheaf(&n).expect("picked by kind").clone())
}

fn load_reflection(src: &str) -> CResult<Reflection> {
    let (doc, n) = pick(src, "reflection")?;
    Ok(doc.reflection(&n).expect("picked by kind").clone())
}

/// Two maps from one file keep their shared presheaves identical.
fn load_maps(f: &str, g: &str) -> CResult<(PresheafMap, PresheafMap)> {
    let (pf, _) = split_ref(f);
    let (pg, _) = split_ref(g);
    if pf == pg {
        let (doc, nf) = pick(f, "map")?;
        let (_, ng) = pick(g, "map")?;
        return Ok((doc.map(&nf).expect("picked").clone(), doc.map(&ng).expect("picked").clone()));
    }
    Err(CliError::Usage("both maps must come from the same file".into()))
}

fn builtin_reflection(name: &str) -> CResult<Reflection> {
    if name == "lattice-3-2:corrupted" {
        return Ok(fixtures::corrupted_lattice_reflection());
    }
    fixtures::all_reflections()
        .into_iter()
        .find(|(n, _)| n == name)
        .map(|(_, r)| r)
        .ok_or_else(|| {
            let names: Vec<String> = fixtures::all_reflections().into_iter().map(|(n, _)| n).collect();
            CliError::Usage(format!("unknown fixture {name}; known: {}", names.join(", ")))
        })
}

/// `FILE[@NAME]`, or a built-in: a Kan fixture functor, or `FIXTURE:left`
/// / `FIXTURE:right` for the adjoints of a built-in reflection.
fn load_functor(src: &str) -> CResult<FinFunctor> {
    if !Path::new(split_ref(src).0).exists() {
        if let Some((_, f)) = fixtures::delta1_functors().into_iter().find(|(n, _)| n == src) {
            return Ok(f);
        }
        if let Some((fix, side)) = src.rsplit_once(':') {
            if side == "left" || side == "right" {
                let r = builtin_reflection(fix)?;
                return Ok(if side == "left" { r.left().clone() } else { r.right().clone() });
            }
        }
    }
    let (doc, n) = pick(src, "functor")?;
    Ok(doc.functor(&n).expect("picked by kind").clone())
}
