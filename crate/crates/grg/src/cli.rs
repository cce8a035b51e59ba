//! Command-line front end: loads a manifold from a spec file, answers
//! component/invariant/Laplacian queries, and reports cache statistics.
//! Expressions are printed in the same grammar the parser accepts, so every
//! printed result re-parses.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::invariants::CmInvariant;
use crate::manifold::{to_matrix, Manifold};
use crate::symexpr::{
    equivalent_with, parse, AssumptionSet, EquivOptions, Equivalence, Expr, Symbol,
};
use crate::tensor::{IndexTuple, Scope, Session};

/// Bundled manifold specs, addressable by bare name in `--spec`.
pub const BUNDLED_SPECS: &[(&str, &str)] = &[
    ("schwarzschild", include_str!("../specs/schwarzschild.spec")),
    ("catenoid", include_str!("../specs/catenoid.spec")),
    ("polar", include_str!("../specs/polar.spec")),
    ("sphere2", include_str!("../specs/sphere2.spec")),
    ("minkowski", include_str!("../specs/minkowski.spec")),
    ("cartesian2", include_str!("../specs/cartesian2.spec")),
];

#[derive(Parser)]
#[command(
    name = "grg",
    version,
    about = "Symbolic tensor calculus over manifold spec files"
)]
pub struct Cli {
    /// Bundled spec name (schwarzschild, catenoid, polar, sphere2, minkowski,
    /// cartesian2) or a path to a spec file.
    #[arg(long, global = true)]
    pub spec: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Seed for the numeric sampling used by `--check`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Re-parse every printed expression and verify it is numerically
    /// equivalent to the computed one.
    #[arg(long, global = true)]
    pub check: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
pub enum Command {
    /// Print one tensor component.
    Component {
        tensor: String,
        /// Comma-separated signed integers; positive covariant, negative
        /// contravariant.
        indices: String,
    },
    /// Print one curvature invariant, or all ten.
    Invariant {
        /// R1 R2 R3 W1 W2 M1 M2 M3 M4 M5, or `all`.
        #[arg(default_value = "all")]
        which: String,
    },
    /// Print the scalar Laplacian of an opaque function of all coordinates.
    Laplacian {
        function: String,
    },
    /// Inspect or clear per-tensor caches.
    Cache {
        action: CacheAction,
        tensor: Option<String>,
    },
    /// Execute a script of queries in one shared session.
    Run {
        /// Script path; one query per line, `#` comments allowed.
        script: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CacheAction {
    View,
    Associated,
    Stats,
    Retreat,
}

/// Maps every library error onto the documented exit codes:
/// 2 bad indices, 3 unknown tensor, 4 spec problems, 5 dimension, 1 other.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::IndexOutOfRange { .. }
        | Error::ZeroIndex
        | Error::BadIndices(_)
        | Error::WrongArity(..) => 2,
        Error::UnknownTensor(_) => 3,
        Error::Parse(_)
        | Error::SpecFile(_)
        | Error::LineElement(_)
        | Error::NonSquareMetric { .. }
        | Error::AsymmetricMetric { .. }
        | Error::SingularMetric
        | Error::DuplicateCoordinate(_)
        | Error::Assumption(_)
        | Error::NoManifold => 4,
        Error::NeedsDimensionFour(_) | Error::Dimension { .. } => 5,
        Error::NullVector(_) | Error::Other(_) => 1,
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap prints its own help/version output
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Manifold description as stored in spec files: JSON with expression strings.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSpec {
    pub coordinates: Vec<String>,
    #[serde(default)]
    pub metric: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub line_element: Option<String>,
    #[serde(default)]
    pub assumptions: Vec<String>,
}

impl ManifoldSpec {
    pub fn parse(src: &str) -> Result<ManifoldSpec> {
        serde_json::from_str(src).map_err(|e| Error::SpecFile(e.to_string()))
    }

    pub fn build(&self) -> Result<Manifold> {
        let coords: Vec<Symbol> = self.coordinates.iter().map(|s| Symbol::new(s)).collect();
        let assumptions =
            AssumptionSet::from_strings(&self.assumptions).map_err(Error::Assumption)?;
        let g: Vec<Vec<Expr>> = match (&self.metric, &self.line_element) {
            (Some(rows), None) => {
                let mut out = Vec::with_capacity(rows.len());
                for row in rows {
                    let mut r = Vec::with_capacity(row.len());
                    for entry in row {
                        r.push(parse(entry)?);
                    }
                    out.push(r);
                }
                out
            }
            (None, Some(le)) => {
                let form = parse(le)?;
                to_matrix(&form, &coords, &assumptions)?
            }
            _ => {
                return Err(Error::SpecFile(
                    "exactly one of `metric` and `line_element` must be present".into(),
                ))
            }
        };
        Manifold::open(coords, g, assumptions)
    }
}

/// Resolves `--spec`: bare bundled names win, anything else is a file path.
pub fn load_spec_source(arg: &str) -> Result<String> {
    let bare = arg.strip_suffix(".spec").unwrap_or(arg);
    if !arg.contains('/') && !arg.contains('\\') {
        if let Some((_, src)) = BUNDLED_SPECS.iter().find(|(n, _)| *n == bare) {
            return Ok((*src).to_string());
        }
    }
    std::fs::read_to_string(arg).map_err(|e| Error::SpecFile(format!("cannot read `{arg}`: {e}")))
}

fn open_session(cli: &Cli) -> Result<Session> {
    let arg = cli
        .spec
        .as_deref()
        .ok_or_else(|| Error::SpecFile("`--spec` is required".into()))?;
    let spec = ManifoldSpec::parse(&load_spec_source(arg)?)?;
    let session = Session::new();
    session.open_with(spec.build()?)?;
    Ok(session)
}

fn parse_indices(s: &str) -> Result<IndexTuple> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<i32>()
                .map_err(|_| Error::BadIndices(format!("`{p}` is not a signed integer")))
        })
        .collect()
}

fn check_printed(session: &Session, value: &Expr, printed: &str, seed: u64) -> Result<()> {
    let reparsed = parse(printed)?;
    let opts = EquivOptions {
        seed,
        ..EquivOptions::default()
    };
    let a = session.assumptions()?;
    if equivalent_with(&reparsed, value, &a, &opts) == Equivalence::Different {
        return Err(Error::Other(format!(
            "self-check failed: printed form `{printed}` is not equivalent to the computed value"
        )));
    }
    Ok(())
}

fn counts_json(session: &Session) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    for (name, count) in session.evaluated_counts() {
        map.insert(name, serde_json::Value::from(count));
    }
    serde_json::Value::Object(map)
}

fn tuple_text(idx: &[i32]) -> String {
    let parts: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
    format!("({})", parts.join(","))
}

fn invariant_values(session: &Session, which: &str) -> Result<Vec<(&'static str, Expr)>> {
    if which.eq_ignore_ascii_case("all") {
        session.cm_all()
    } else {
        let inv = CmInvariant::from_str(which)?;
        Ok(vec![(inv.name(), session.cm_invariant(inv)?)])
    }
}

fn run(cli: &Cli) -> Result<()> {
    let session = open_session(cli)?;
    let seed = cli.seed.unwrap_or(EquivOptions::default().seed);
    match &cli.command {
        Command::Component { tensor, indices } => {
            let idx = parse_indices(indices)?;
            let value = session.component(tensor, &idx)?;
            let printed = value.to_string();
            if cli.check {
                check_printed(&session, &value, &printed, seed)?;
            }
            match cli.format {
                Format::Text => println!("{printed}"),
                Format::Json => {
                    let doc = serde_json::json!({
                        "tensor": tensor,
                        "indices": idx,
                        "expression": printed,
                        "evaluated_counts": counts_json(&session),
                    });
                    println!("{doc}");
                }
            }
        }
        Command::Invariant { which } => {
            let values = invariant_values(&session, which)?;
            if cli.check {
                for (_, v) in &values {
                    check_printed(&session, v, &v.to_string(), seed)?;
                }
            }
            match cli.format {
                Format::Text => {
                    if values.len() == 1 {
                        println!("{}", values[0].1);
                    } else {
                        for (name, v) in &values {
                            println!("{name} = {v}");
                        }
                    }
                }
                Format::Json => {
                    let list: Vec<serde_json::Value> = values
                        .iter()
                        .map(|(name, v)| {
                            serde_json::json!({"invariant": name, "expression": v.to_string()})
                        })
                        .collect();
                    let doc = serde_json::json!({
                        "invariants": list,
                        "evaluated_counts": counts_json(&session),
                    });
                    println!("{doc}");
                }
            }
        }
        Command::Laplacian { function } => {
            let ok_name = !function.is_empty()
                && function.chars().next().unwrap().is_ascii_alphabetic()
                && function.chars().all(|c| c.is_ascii_alphanumeric());
            if !ok_name {
                return Err(Error::Other(format!(
                    "`{function}` is not a valid function name"
                )));
            }
            let coords = session.coords()?;
            let names: Vec<&str> = coords.iter().map(|c| c.name()).collect();
            let f = Expr::opaque(function, &names);
            let value = session.scalar_laplacian(&f)?;
            let printed = value.to_string();
            if cli.check {
                check_printed(&session, &value, &printed, seed)?;
            }
            match cli.format {
                Format::Text => println!("{printed}"),
                Format::Json => {
                    let doc = serde_json::json!({
                        "function": function,
                        "expression": printed,
                        "evaluated_counts": counts_json(&session),
                    });
                    println!("{doc}");
                }
            }
        }
        Command::Cache { action, tensor } => {
            let need_tensor = || {
                tensor
                    .clone()
                    .ok_or_else(|| Error::Other("this cache action needs `--tensor`".into()))
            };
            match action {
                CacheAction::View => {
                    let name = need_tensor()?;
                    let keys = session.cacheview(&name)?;
                    print_view(cli.format, &name, &keys);
                }
                CacheAction::Associated => {
                    let name = need_tensor()?;
                    let entries = session.associated(&name)?;
                    print_associated(cli.format, &name, &entries);
                }
                CacheAction::Stats => print_stats(cli.format, &session),
                CacheAction::Retreat => {
                    let name = need_tensor()?;
                    session.retreat(&name, Scope::Associated)?;
                    match cli.format {
                        Format::Text => println!("retreat[{name}] = ok"),
                        Format::Json => println!("{}", serde_json::json!({"ok": true})),
                    }
                }
            }
        }
        Command::Run { script } => {
            let text = std::fs::read_to_string(script)
                .map_err(|e| Error::Other(format!("cannot read script: {e}")))?;
            run_script(&session, &text, cli.check, seed)?;
        }
    }
    Ok(())
}

fn print_view(format: Format, name: &str, keys: &[IndexTuple]) {
    match format {
        Format::Text => {
            let parts: Vec<String> = keys.iter().map(|k| tuple_text(k)).collect();
            println!("cacheview[{name}] = [{}]", parts.join(", "));
        }
        Format::Json => {
            println!("{}", serde_json::json!({"tensor": name, "keys": keys}));
        }
    }
}

fn print_associated(format: Format, name: &str, entries: &[(String, IndexTuple)]) {
    match format {
        Format::Text => {
            let parts: Vec<String> = entries
                .iter()
                .map(|(n, k)| format!("{n}{}", tuple_text(k)))
                .collect();
            println!("associated[{name}] = [{}]", parts.join(", "));
        }
        Format::Json => {
            let list: Vec<serde_json::Value> = entries
                .iter()
                .map(|(n, k)| serde_json::json!({"tensor": n, "indices": k}))
                .collect();
            println!("{}", serde_json::json!({"tensor": name, "entries": list}));
        }
    }
}

fn print_stats(format: Format, session: &Session) {
    match format {
        Format::Text => {
            for (name, count) in session.evaluated_counts() {
                println!("count[{name}] = {count}");
            }
        }
        Format::Json => {
            println!(
                "{}",
                serde_json::json!({"evaluated_counts": counts_json(session)})
            );
        }
    }
}

/// Script lines: `component <tensor> <indices>` | `invariant <which>` |
/// `laplacian <fn>` | `ricciscalar` | `cache view|associated|retreat <tensor>`
/// | `cache stats`; `cache retreat <tensor> associated` widens the scope.
fn run_script(session: &Session, text: &str, check: bool, seed: u64) -> Result<()> {
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: &str| Error::Other(format!("script line {}: {msg}", lineno + 1));
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["component", tensor, indices] => {
                let idx = parse_indices(indices)?;
                let value = session.component(tensor, &idx)?;
                let printed = value.to_string();
                if check {
                    check_printed(session, &value, &printed, seed)?;
                }
                println!("{tensor}[{}] = {printed}", indices.trim());
            }
            ["invariant", which] => {
                for (name, v) in invariant_values(session, which)? {
                    let printed = v.to_string();
                    if check {
                        check_printed(session, &v, &printed, seed)?;
                    }
                    println!("{name} = {printed}");
                }
            }
            ["laplacian", function] => {
                let coords = session.coords()?;
                let names: Vec<&str> = coords.iter().map(|c| c.name()).collect();
                let f = Expr::opaque(function, &names);
                let value = session.scalar_laplacian(&f)?;
                let printed = value.to_string();
                if check {
                    check_printed(session, &value, &printed, seed)?;
                }
                println!("laplacian[{function}] = {printed}");
            }
            ["ricciscalar"] => {
                let value = session.ricci_scalar()?;
                let printed = value.to_string();
                if check {
                    check_printed(session, &value, &printed, seed)?;
                }
                println!("ricciScalar = {printed}");
            }
            ["cache", "view", tensor] => {
                print_view(Format::Text, tensor, &session.cacheview(tensor)?);
            }
            ["cache", "associated", tensor] => {
                print_associated(Format::Text, tensor, &session.associated(tensor)?);
            }
            ["cache", "stats"] => print_stats(Format::Text, session),
            ["cache", "retreat", tensor] => {
                session.retreat(tensor, Scope::SelfOnly)?;
                println!("retreat[{tensor}] = ok");
            }
            ["cache", "retreat", tensor, "associated"] => {
                session.retreat(tensor, Scope::Associated)?;
                println!("retreat[{tensor}] = ok");
            }
            _ => return Err(bad("unrecognized query")),
        }
    }
    Ok(())
}
