//! `ultrameasure`: JSON in, JSON out.
//!
//! Exit codes: 0 on success, 1 on a domain or input error (with an error
//! object on stderr), 2 on a usage error.

mod error;
mod load;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use ultrameasure::io::{
    self, GeneratorsJson, KernelJson, MeasureOfMeasuresJson, PointMapJson, TestFunctionJson,
};
use ultrameasure::laws::{check_monad_laws, LawReport, SampleBudget};
use ultrameasure::measures::measure_distance;
use ultrameasure::monad::{
    convert, log_weight, multiply, non_isomorphism_witness, non_isomorphism_witness_log, Direction,
};
use ultrameasure::sympow::{check_kleisli_extension, sympow_distance, SymPower};
use ultrameasure::tensor::tensor;
use ultrameasure::ultra::hausdorff_distance;
use ultrameasure::{
    Budgets, ExtReal, FiniteSubset, Measure, MeasureKind, OrbitPoint, OrderBijection,
    PermutationGroup,
};

use error::{CliError, CliResult};
use load::Space;

#[derive(Parser, Debug)]
#[command(
    name = "ultrameasure",
    version,
    about = "Idempotent measures on finite ultrametric spaces"
)]
struct Cli {
    #[command(flatten)]
    config: CliConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct CliConfig {
    /// Seed for the law harnesses.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Trials per law.
    #[arg(long, global = true, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Order bijection used by `convert` and `witness-noniso`.
    #[arg(long, global = true, value_enum, default_value_t = Alpha::Default)]
    alpha: Alpha,
    /// Indent the output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Largest product space to materialize.
    #[arg(long, global = true, default_value_t = Budgets::default().product_points)]
    budget_product: usize,
    /// Largest permutation group to materialize.
    #[arg(long, global = true, default_value_t = Budgets::default().group_order)]
    budget_group: usize,
}

impl CliConfig {
    fn budgets(&self) -> Budgets {
        Budgets {
            product_points: self.budget_product,
            group_order: self.budget_group,
        }
    }
}

/// `default` is exact; `log` reports `t -> -ln(-t)` as floats.
#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Alpha {
    Default,
    Log,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Maxmin,
    Maxplus,
}

impl From<Kind> for MeasureKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Maxmin => MeasureKind::MaxMin,
            Kind::Maxplus => MeasureKind::MaxPlus,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate any input file; prints its canonical form.
    Validate {
        file: PathBuf,
        #[arg(long)]
        space: Option<PathBuf>,
    },
    /// Distance between two measures: `dist [SPACE] MU NU`.
    Dist {
        #[arg(num_args = 2..=3, required = true)]
        files: Vec<PathBuf>,
    },
    /// Value of a measure on a test function.
    Eval {
        measure: PathBuf,
        function: PathBuf,
        #[arg(long)]
        space: Option<PathBuf>,
    },
    /// Pushforward of a measure along a point map.
    Push { measure: PathBuf, map: PathBuf },
    /// Multiplication of a measure of measures.
    Flatten {
        file: PathBuf,
        #[arg(long)]
        space: Option<PathBuf>,
    },
    /// Kleisli composite `FIRST` then `SECOND`.
    Compose {
        first: PathBuf,
        second: PathBuf,
        /// Also extend the composite to this measure on the source space.
        #[arg(long)]
        apply: Option<PathBuf>,
    },
    /// Transport along the order bijection, max-plus to max-min or back.
    Convert {
        measure: PathBuf,
        #[arg(long)]
        space: Option<PathBuf>,
    },
    /// Tensor product on the max-metric product space.
    Tensor {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        space: Option<PathBuf>,
    },
    /// Distance between two orbits; tuples are JSON label arrays or `a,b,c`.
    SympowDist {
        space: PathBuf,
        generators: PathBuf,
        x: String,
        y: String,
    },
    /// Symmetric-power extension of a tuple of max-min measures.
    Theta {
        generators: PathBuf,
        #[arg(required = true)]
        measures: Vec<PathBuf>,
        #[arg(long)]
        space: Option<PathBuf>,
    },
    /// Support of a measure.
    Support {
        measure: PathBuf,
        #[arg(long)]
        space: Option<PathBuf>,
    },
    /// Hausdorff distance between two subsets given as label lists.
    Hausdorff {
        space: PathBuf,
        a: String,
        b: String,
    },
    /// Seeded monad-law harness.
    Laws {
        /// Omit to check both kinds.
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        /// Fix the space instead of sampling one per trial.
        #[arg(long)]
        space: Option<PathBuf>,
    },
    /// Seeded check of both extension conditions for theta.
    KleisliCheck { generators: PathBuf, space: PathBuf },
    /// The measure of measures separating the two monad structures.
    WitnessNoniso,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(&cli) {
        Ok(value) => {
            println!("{}", render(&value, cli.config.pretty));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", render(&e.to_json(), cli.config.pretty));
            ExitCode::from(1)
        }
    }
}

fn render(value: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .expect("serializable")
}

fn optional_space(path: &Option<PathBuf>) -> CliResult<Option<Space>> {
    path.as_deref().map(load::space).transpose()
}

fn rational(r: &ultrameasure::Rational) -> Value {
    Value::String(io::rational_string(r))
}

fn float(v: f64) -> Value {
    if v == 0.0 {
        json!(0.0)
    } else if v.is_finite() {
        json!(v)
    } else if v > 0.0 {
        json!("inf")
    } else if v < 0.0 {
        json!("-inf")
    } else {
        json!("nan")
    }
}

fn report_json(report: &LawReport) -> Value {
    serde_json::to_value(report).expect("serializable")
}

fn group(path: &Path, cfg: &CliConfig) -> CliResult<PermutationGroup> {
    let json: GeneratorsJson = load::read(path)?;
    Ok(io::group_from_json(&json, cfg.budget_group)?)
}

fn run(cli: &Cli) -> CliResult<Value> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Validate { file, space } => validate(file, optional_space(space)?.as_ref(), cfg),
        Command::Dist { files } => {
            let (explicit, pair) = match files.as_slice() {
                [s, rest @ ..] if files.len() == 3 => (Some(load::space(s)?), rest),
                _ => (None, files.as_slice()),
            };
            let ms = load::measures_on_one_space(pair, explicit.as_ref())?;
            Ok(json!({ "distance": rational(&measure_distance(&ms[0], &ms[1])?) }))
        }
        Command::Eval {
            measure,
            function,
            space,
        } => {
            let mu = load::measure(measure, optional_space(space)?.as_ref())?;
            let phi: TestFunctionJson = load::read(function)?;
            let phi = io::test_function_from_json(&phi, mu.space().clone())?;
            Ok(json!({ "value": mu.evaluate(&phi)?.to_string() }))
        }
        Command::Push { measure, map } => {
            let json: PointMapJson = load::read(map)?;
            let source = load::space_ref(&json.source, map)?;
            let target = load::space_ref(&json.target, map)?;
            let f = io::point_map_from_json(&json, source.clone(), target)?;
            let mu = load::measure(measure, Some(&source))?;
            Ok(io::measure_to_json(&mu.pushforward(&f)?))
        }
        Command::Flatten { file, space } => {
            let m = measure_of_measures(file, optional_space(space)?.as_ref())?;
            Ok(io::measure_to_json(&multiply(&m)))
        }
        Command::Compose {
            first,
            second,
            apply,
        } => {
            let f = kernel(first)?;
            let g = kernel(second)?;
            let fg = f.then(&g)?;
            let composite = serde_json::to_value(io::kernel_to_json(&fg)).expect("serializable");
            match apply {
                None => Ok(composite),
                Some(path) => {
                    let mu = load::measure(path, Some(fg.source()))?;
                    Ok(json!({
                        "kernel": composite,
                        "image": io::measure_to_json(&fg.extend(&mu)?),
                    }))
                }
            }
        }
        Command::Convert { measure, space } => {
            let mu = load::measure(measure, optional_space(space)?.as_ref())?;
            convert_cmd(&mu, cfg.alpha)
        }
        Command::Tensor { left, right, space } => {
            let explicit = optional_space(space)?;
            let mu = load::measure(left, explicit.as_ref())?;
            let nu = load::measure(right, explicit.as_ref())?;
            let (_, t) = tensor(&mu, &nu, &cfg.budgets())?;
            Ok(io::measure_to_json(&t))
        }
        Command::SympowDist {
            space,
            generators,
            x,
            y,
        } => {
            let space = load::space(space)?;
            let g = group(generators, cfg)?;
            let x = OrbitPoint::new(&g, &load::indices(&space, &load::labels(x)?)?)?;
            let y = OrbitPoint::new(&g, &load::indices(&space, &load::labels(y)?)?)?;
            Ok(json!({ "distance": rational(&sympow_distance(&space, &g, &x, &y)?) }))
        }
        Command::Theta {
            generators,
            measures,
            space,
        } => {
            let g = group(generators, cfg)?;
            let ms = load::measures_on_one_space(measures, optional_space(space)?.as_ref())?;
            let sp = SymPower::new(ms[0].space(), &g, &cfg.budgets())?;
            Ok(io::measure_to_json(&sp.theta(&ms)?))
        }
        Command::Support { measure, space } => {
            let mu = load::measure(measure, optional_space(space)?.as_ref())?;
            Ok(json!({ "support": mu.support().labels() }))
        }
        Command::Hausdorff { space, a, b } => {
            let space = load::space(space)?;
            let a = FiniteSubset::from_labels(space.clone(), &load::labels(a)?)?;
            let b = FiniteSubset::from_labels(space, &load::labels(b)?)?;
            Ok(json!({ "distance": rational(&hausdorff_distance(&a, &b)?) }))
        }
        Command::Laws { kind, space } => {
            let space = optional_space(space)?;
            let trials = cfg.trials as usize;
            let check = |k: MeasureKind| {
                check_monad_laws(
                    k,
                    space.as_ref(),
                    trials,
                    cfg.seed,
                    &SampleBudget::default(),
                )
            };
            Ok(match kind {
                Some(k) => report_json(&check((*k).into())),
                None => json!({
                    "maxmin": report_json(&check(MeasureKind::MaxMin)),
                    "maxplus": report_json(&check(MeasureKind::MaxPlus)),
                }),
            })
        }
        Command::KleisliCheck { generators, space } => {
            let g = group(generators, cfg)?;
            let space = load::space(space)?;
            let report = check_kleisli_extension(
                &g,
                &space,
                cfg.trials as usize,
                cfg.seed,
                &cfg.budgets(),
                &SampleBudget::default(),
            )?;
            Ok(report_json(&report))
        }
        Command::WitnessNoniso => match cfg.alpha {
            Alpha::Default => {
                let w = non_isomorphism_witness(&OrderBijection::default())?;
                Ok(json!({
                    "side1": io::atom_map(&w.side1),
                    "side2": io::atom_map(&w.side2),
                    "distance": rational(&w.distance),
                }))
            }
            Alpha::Log => {
                let (side1, side2) = non_isomorphism_witness_log();
                let floats = |m: BTreeMap<String, f64>| -> Value {
                    m.into_iter().map(|(k, v)| (k, float(v))).collect()
                };
                Ok(json!({ "side1": floats(side1), "side2": floats(side2) }))
            }
        },
    }
}

fn measure_of_measures(
    path: &Path,
    explicit: Option<&Space>,
) -> CliResult<ultrameasure::MeasureOfMeasures> {
    let json: MeasureOfMeasuresJson = load::read(path)?;
    let space = load::pick_space(json.space.as_ref(), path, explicit)?;
    Ok(io::measure_of_measures_from_json(&json, space)?)
}

fn kernel(path: &Path) -> CliResult<ultrameasure::Kernel> {
    let json: KernelJson = load::read(path)?;
    let source = load::space_ref(&json.source, path)?;
    let target = load::space_ref(&json.target, path)?;
    Ok(io::kernel_from_json(&json, source, target)?)
}

/// Max-plus goes to max-min and back. In log mode only the max-plus side
/// is supported, reported as floats.
fn convert_cmd(mu: &Measure, alpha: Alpha) -> CliResult<Value> {
    let direction = match mu.kind() {
        MeasureKind::MaxPlus => Direction::ToMaxMin,
        MeasureKind::MaxMin => Direction::ToMaxPlus,
    };
    match alpha {
        Alpha::Default => Ok(io::measure_to_json(&convert(
            mu,
            &OrderBijection::default(),
            direction,
        )?)),
        Alpha::Log if mu.kind() == MeasureKind::MaxPlus => {
            let atoms: serde_json::Map<String, Value> = mu
                .labelled_atoms()
                .into_iter()
                .map(|(label, t)| {
                    let v = if t == ExtReal::zero() {
                        f64::INFINITY
                    } else {
                        log_weight(&t)
                    };
                    (label, float(v))
                })
                .collect();
            Ok(json!({ "kind": "maxmin", "map": "-ln(-t)", "atoms": atoms }))
        }
        Alpha::Log => Err(CliError::Input(
            "--alpha log only reports max-plus to max-min conversions".into(),
        )),
    }
}

/// Detects the file type from its keys.
fn validate(path: &Path, explicit: Option<&Space>, cfg: &CliConfig) -> CliResult<Value> {
    let value = load::read_value(path)?;
    let has = |k: &str| value.get(k).is_some();
    let (kind, canonical) = if has("points") {
        let space = load::space(path)?;
        (
            "space",
            serde_json::to_value(io::space_to_json(&space)).expect("serializable"),
        )
    } else if has("outer") {
        (
            "measure_of_measures",
            io::measure_of_measures_to_json(&measure_of_measures(path, explicit)?),
        )
    } else if has("atoms") {
        (
            "measure",
            io::measure_to_json(&load::measure(path, explicit)?),
        )
    } else if has("images") {
        (
            "kernel",
            serde_json::to_value(io::kernel_to_json(&kernel(path)?)).expect("serializable"),
        )
    } else if has("map") {
        let json: PointMapJson = load::read(path)?;
        let source = load::space_ref(&json.source, path)?;
        let target = load::space_ref(&json.target, path)?;
        let f = io::point_map_from_json(&json, source, target)?;
        (
            "point_map",
            serde_json::to_value(io::point_map_to_json(&f)).expect("serializable"),
        )
    } else if has("values") {
        let space =
            explicit.ok_or_else(|| CliError::Input("a test function needs --space".into()))?;
        let json: TestFunctionJson = load::read(path)?;
        let phi = io::test_function_from_json(&json, space.clone())?;
        let values: BTreeMap<String, Value> = (0..space.len())
            .map(|i| (space.label(i).to_string(), rational(phi.value(i))))
            .collect();
        ("test_function", json!({ "values": values }))
    } else if has("n") {
        let json: GeneratorsJson = load::read(path)?;
        (
            "group",
            io::group_to_json(&io::group_from_json(&json, cfg.budget_group)?),
        )
    } else {
        return Err(CliError::Input(format!(
            "{}: unrecognized file type",
            path.display()
        )));
    };
    Ok(json!({ "valid": true, "type": kind, "value": canonical }))
}
