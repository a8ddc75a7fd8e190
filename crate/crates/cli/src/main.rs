use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lvint::analyzer::{
    build_case6_curve, classify, solve_first_integral_with_power, solve_iif, FirstIntegralOutcome,
    IifOutcome,
};
use lvint::family::{AplicaParams, SampleMode};
use lvint::harness::{
    curve_to_json, first_integral_to_json, iif_to_json, run_sweep, verdict_to_json, verdict_to_text,
};
use lvint::lv::check_invariant_curve;
use lvint::normal_form::normal_form;
use lvint::rational::parse_rational;
use lvint::{BiPoly, Error, PlanarField};

const EXIT_OBSTRUCTED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "lvint", version, about = "Formal integrability of planar fields with a quadratic Lotka-Volterra leading part")]
struct Cli {
    /// File of key=value lines supplying defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct Input {
    /// Parameters of the cubic family, e.g. "a20=1,b02=-1/2".
    #[arg(long)]
    aplica: Option<String>,

    /// JSON file {"P": "...", "Q": "..."} holding the field.
    #[arg(long)]
    field: Option<PathBuf>,

    /// Truncation degree (default 7 with --aplica, 12 otherwise).
    #[arg(long)]
    max_degree: Option<u32>,

    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide integrability through the truncation degree.
    Classify(Input),
    /// Print the orbital normal form coefficients and generators.
    NormalForm(Input),
    /// Solve for a first integral truncated at --max-degree.
    FirstIntegral {
        #[command(flatten)]
        input: Input,
        /// Seed the integral with this power of the primitive integral.
        #[arg(long)]
        power: Option<u32>,
    },
    /// Solve for an inverse integrating factor truncated at --max-degree.
    Iif(Input),
    /// Check that a curve is invariant and compute its cofactor.
    VerifyCurve {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        curve: Option<String>,
    },
    /// Classify seeded random samples of the cubic family.
    Sweep {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        count: Option<usize>,
        /// on-case-1 .. on-case-6, or generic.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Build the invariant curve of case 6 from its recurrence.
    Case6Curve {
        #[arg(long, allow_hyphen_values = true)]
        b02: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b11: Option<String>,
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

struct Config(BTreeMap<String, String>);

impl Config {
    fn load(path: Option<&Path>) -> CliResult<Config> {
        let mut map = BTreeMap::new();
        let Some(path) = path else {
            return Ok(Config(map));
        };
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Failure::Usage(format!("config line {}: expected key=value", i + 1))
            })?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Config(map))
    }

    fn string(&self, key: &str, flag: Option<String>) -> Option<String> {
        flag.or_else(|| self.0.get(key).cloned())
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, flag: Option<T>) -> CliResult<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Failure::Usage(format!("config value for {key} is invalid: {v:?}"))),
        }
    }

    fn format(&self, flag: Option<Format>) -> CliResult<Format> {
        if let Some(f) = flag {
            return Ok(f);
        }
        match self.0.get("format").map(String::as_str) {
            None | Some("json") => Ok(Format::Json),
            Some("text") => Ok(Format::Text),
            Some(other) => Err(Failure::Usage(format!("unknown format {other:?}"))),
        }
    }
}

struct Resolved {
    field: PlanarField,
    max_degree: u32,
    format: Format,
}

fn read_field(path: &Path) -> CliResult<PlanarField> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read field {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| {
        Failure::Usage(format!(
            "field file {}: line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })?;
    let component = |key: &str| -> CliResult<BiPoly> {
        let s = v
            .get(key)
            .and_then(Value::as_str)
            .ok_or_else(|| Failure::Usage(format!("field file needs a string member {key:?}")))?;
        BiPoly::parse(s).map_err(|e| Failure::Usage(format!("component {key}: {e}")))
    };
    Ok(PlanarField::new(component("P")?, component("Q")?)?)
}

fn resolve(input: Input, cfg: &Config) -> CliResult<Resolved> {
    let aplica = cfg.string("aplica", input.aplica);
    let field_path = cfg.string("field", input.field.map(|p| p.display().to_string()));
    let (field, default_degree) = match (aplica, field_path) {
        (Some(_), Some(_)) => {
            return Err(Failure::Usage("give only one of --aplica and --field".into()))
        }
        (Some(a), None) => (AplicaParams::parse(&a)?.field(), 7),
        (None, Some(p)) => (read_field(Path::new(&p))?, 12),
        (None, None) => return Err(Failure::Usage("one of --aplica or --field is required".into())),
    };
    Ok(Resolved {
        field,
        max_degree: cfg.parsed("max-degree", input.max_degree)?.unwrap_or(default_degree),
        format: cfg.format(input.format)?,
    })
}

fn emit(format: Format, json_value: &Value, text: String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(json_value).expect("serializable")),
        Format::Text => print!("{text}"),
    }
}

fn verdict_code(success: bool) -> u8 {
    if success {
        0
    } else {
        EXIT_OBSTRUCTED
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    let cfg = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Classify(input) => {
            let r = resolve(input, &cfg)?;
            match classify(&r.field, r.max_degree) {
                Ok(v) => {
                    emit(r.format, &verdict_to_json(&v), verdict_to_text(&v));
                    Ok(verdict_code(v.integrable))
                }
                // The leading part already fails the necessary condition.
                Err(Error::NotPolynomiallyIntegrable(reason)) => {
                    let j = json!({"integrable": false, "reason": reason});
                    emit(r.format, &j, format!("obstructed\nleading part: {reason}\n"));
                    Ok(EXIT_OBSTRUCTED)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::NormalForm(input) => {
            let r = resolve(input, &cfg)?;
            let report = normal_form(&r.field, r.max_degree)?;
            let mut text = format!(
                "(p,q,r) = ({},{},{})\n",
                report.lv.p, report.lv.q, report.lv.r
            );
            for j in report.eta.keys() {
                text.push_str(&format!("eta_{j} = {}\n", report.eta_poly(*j)));
            }
            emit(r.format, &report.to_json(), text);
            Ok(verdict_code(report.is_trivial()))
        }
        Command::FirstIntegral { input, power } => {
            let power = cfg.parsed("power", power)?.unwrap_or(1);
            let r = resolve(input, &cfg)?;
            let outcome = solve_first_integral_with_power(&r.field, r.max_degree, power)?;
            let text = match &outcome {
                FirstIntegralOutcome::Integral(c) => format!("first integral: {}\n", c.integral),
                FirstIntegralOutcome::Obstructed(o) => format!("obstructed at degree {}\n", o.degree),
            };
            emit(r.format, &first_integral_to_json(&outcome), text);
            Ok(verdict_code(outcome.succeeded()))
        }
        Command::Iif(input) => {
            let r = resolve(input, &cfg)?;
            let outcome = solve_iif(&r.field, r.max_degree)?;
            let text = match &outcome {
                IifOutcome::Factor(c) => format!("inverse integrating factor: {}\n", c.v),
                IifOutcome::Obstructed(o) => format!("obstructed at degree {}\n", o.degree),
            };
            emit(r.format, &iif_to_json(&outcome), text);
            Ok(verdict_code(outcome.succeeded()))
        }
        Command::VerifyCurve { input, curve } => {
            let curve = cfg
                .string("curve", curve)
                .ok_or_else(|| Failure::Usage("--curve is required".into()))?;
            let r = resolve(input, &cfg)?;
            let c = BiPoly::parse(&curve)?;
            match check_invariant_curve(&r.field, &c, r.max_degree) {
                Ok(cert) => {
                    emit(r.format, &curve_to_json(&cert), format!("invariant, cofactor {}\n", cert.cofactor));
                    Ok(0)
                }
                Err(Error::NotInvariant { degree }) => {
                    let j = json!({"invariant": false, "degree": degree});
                    emit(r.format, &j, format!("not invariant at degree {degree}\n"));
                    Ok(EXIT_OBSTRUCTED)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Sweep {
            seed,
            count,
            mode,
            max_degree,
            format,
        } => {
            let seed = cfg.parsed("seed", seed)?.unwrap_or(0);
            let count = cfg.parsed("count", count)?.unwrap_or(20);
            if count == 0 {
                return Err(Failure::Usage("--count must be at least 1".into()));
            }
            let mode: SampleMode = cfg.string("mode", mode).unwrap_or_else(|| "generic".into()).parse()?;
            let max_degree = cfg.parsed("max-degree", max_degree)?.unwrap_or(7);
            let format = cfg.format(format)?;
            let report = run_sweep(seed, count, mode, max_degree)?;
            emit(format, &report.to_json(), report.to_text());
            let bad = report.disagreements();
            if !bad.is_empty() {
                eprintln!("COUNTEREXAMPLE: samples {bad:?} contradict the case conditions");
                return Ok(EXIT_INTERNAL);
            }
            Ok(0)
        }
        Command::Case6Curve {
            b02,
            b11,
            max_degree,
            format,
        } => {
            let value = |key: &str, flag: Option<String>| {
                cfg.string(key, flag)
                    .map(|s| parse_rational(&s))
                    .transpose()
                    .map(Option::unwrap_or_default)
            };
            let b02 = value("b02", b02)?;
            let b11 = value("b11", b11)?;
            let n = cfg.parsed("max-degree", max_degree)?.unwrap_or(12);
            let format = cfg.format(format)?;
            let cert = build_case6_curve(&b02, &b11, n)?;
            emit(format, &curve_to_json(&cert), format!("C = {}\nK = {}\n", cert.curve, cert.cofactor));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
