use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use slicereg::ast::parse_point;
use slicereg::demo;
use slicereg::fibers::{find_wings, solve_fiber};
use slicereg::jacobian::jacobian_matrix;
use slicereg::registry;
use slicereg::roots::SearchOptions;
use slicereg::singular::{dimension_triple, sample_singular, SingularPart};
use slicereg::{BoundingBox, Error, SliceFunction};

#[derive(Parser)]
#[command(name = "slicereg", version, about = "Quaternionic slice regular functions")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct Search {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Grid points per axis for the searches.
    #[arg(long, default_value_t = 400)]
    grid: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Search window `alpha_min,alpha_max,beta_min,beta_max`.
    #[arg(long)]
    bbox: Option<String>,
}

impl Search {
    fn options(&self) -> SearchOptions {
        SearchOptions {
            grid: self.grid.max(8),
            seed: self.seed,
            tol: self.tol,
            ..SearchOptions::default()
        }
    }
}

#[derive(Args)]
struct Target {
    /// Registry name (see `list`).
    #[arg(long = "fn")]
    name: String,
    #[command(flatten)]
    search: Search,
}

impl Target {
    fn function(&self) -> Result<SliceFunction, Error> {
        let f = registry::function(&self.name)?;
        match &self.search.bbox {
            None => Ok(f),
            Some(b) => {
                let v = parse_list(b)?;
                let b = BoundingBox::from_slice(&v)?;
                Ok(f.with_domain(f.domain().clone().with_bbox(b)))
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Value of f at a quaternion.
    Eval {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        x: String,
    },
    /// Real Jacobian, determinant and rank at a quaternion.
    Jacobian {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        x: String,
    },
    /// Components of the fiber f⁻¹(c).
    Fiber {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        c: String,
    },
    /// The set of wing values.
    Wings {
        #[command(flatten)]
        target: Target,
    },
    /// Class flags and the dimension triple.
    Classify {
        #[command(flatten)]
        target: Target,
    },
    /// Points of the singular set, written as CSV.
    SampleSingular {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recomputes the dimension-triple table.
    Table {
        #[command(flatten)]
        search: Search,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Boundary-univalence example for x − 1/x.
    Univalence {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Registry names.
    List,
}

enum Failure {
    Usage(String),
    Domain(String),
    Mismatch(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { .. } | Error::ProductDomainRealPoint(_) | Error::EmptyDomain | Error::RealPoint => {
                Failure::Domain(e.to_string())
            }
            Error::Parse(_) | Error::UnknownFunction(_) | Error::InvalidUnit(_) => Failure::Usage(e.to_string()),
            other => Failure::Mismatch(other.to_string()),
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Error::Parse(format!("expected comma-separated numbers, got `{s}`")))
}

/// Integral floats become integers and `-0` becomes `0`, so output is stable.
fn tidy(v: Value) -> Value {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() && x.fract() == 0.0 && x.abs() < 1e15 => json!(x as i64),
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(tidy).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, tidy(v))).collect()),
        other => other,
    }
}

fn emit<T: serde::Serialize>(v: &T) {
    let v = tidy(serde_json::to_value(v).expect("serializable output"));
    println!("{v}");
}

fn run(cmd: Command) -> Result<ExitCode, Failure> {
    match cmd {
        Command::Eval { target, x } => {
            let f = target.function()?;
            emit(&f.eval(parse_point(&x)?)?);
        }
        Command::Jacobian { target, x } => {
            let f = target.function()?;
            let y = parse_point(&x)?;
            let m = jacobian_matrix(&f, y)?;
            let std = m.standard();
            let rows: Vec<[f64; 4]> = (0..4)
                .map(|r| [std[(r, 0)], std[(r, 1)], std[(r, 2)], std[(r, 3)]])
                .collect();
            emit(&json!({
                "matrix": rows,
                "adapted": m.rows(),
                "basis": m.basis(),
                "det": slicereg::jacobian::jacobian_det(&f, y)?,
                "rank": slicereg::jacobian::rank(&f, y)?,
            }));
        }
        Command::Fiber { target, c } => {
            let f = target.function()?;
            let opts = target.search.options();
            emit(&solve_fiber(&f, parse_point(&c)?, &opts));
        }
        Command::Wings { target } => {
            emit(&find_wings(&target.function()?));
        }
        Command::Classify { target } => {
            let f = target.function()?;
            let t = dimension_triple(&f, &target.search.options());
            let witnesses = t.extra.as_ref().map(|e| e.witnesses.clone()).unwrap_or_default();
            let mut out = serde_json::Map::new();
            out.insert("d".into(), json!(t.d));
            out.insert("w".into(), json!(t.w));
            out.insert("m".into(), json!(t.m));
            out.insert("n".into(), json!(t.n));
            out.insert("whole_domain".into(), json!(t.whole_domain));
            out.insert("admissible".into(), json!(t.admissible));
            out.insert("forced_m".into(), json!(t.extra.as_ref().is_some_and(|e| e.forced)));
            out.insert(
                "class".into(),
                serde_json::to_value(f.classify()).expect("serializable"),
            );
            out.insert("witnesses".into(), json!(witnesses));
            emit(&Value::Object(out));
        }
        Command::SampleSingular { target, out } => {
            let f = target.function()?;
            let pts = sample_singular(&f, &target.search.options())?;
            let mut w = csv::Writer::from_path(&out).map_err(|e| Failure::Io(e.to_string()))?;
            w.write_record(["x0", "x1", "x2", "x3", "det", "set"])
                .map_err(|e| Failure::Io(e.to_string()))?;
            for p in &pts {
                let set = match p.part {
                    SingularPart::Degenerate => "Df",
                    SingularPart::Wing => "Wf",
                    SingularPart::Extra => "Nf_extra",
                };
                let a = p.point.to_array();
                let rec = [a[0], a[1], a[2], a[3], p.det].map(|x| x.to_string());
                w.write_record(rec.iter().map(String::as_str).chain([set]))
                    .map_err(|e| Failure::Io(e.to_string()))?;
            }
            w.flush().map_err(|e| Failure::Io(e.to_string()))?;
            emit(&json!({"points": pts.len(), "out": out}));
        }
        Command::Table { search, json } => {
            let rows = demo::run_table(&search.options())?;
            if json {
                emit(&rows);
            } else {
                println!(
                    "{:>3}  {:<12} {:<18} {:<18} {:<8} status",
                    "row", "function", "expected", "computed", "witness"
                );
                for r in &rows {
                    let wit = match &r.witness {
                        Some(w) if w.ok => "ok",
                        Some(_) => "FAIL",
                        None => "-",
                    };
                    println!(
                        "{:>3}  {:<12} {:<18} {:<18} {:<8} {}",
                        r.row,
                        r.name,
                        format!("{:?}", r.expected),
                        format!("{:?}", r.computed),
                        wit,
                        if r.passed() { "ok" } else { "MISMATCH" }
                    );
                }
            }
            let failed: Vec<String> = rows.iter().filter(|r| !r.passed()).map(|r| r.name.clone()).collect();
            if !failed.is_empty() {
                return Err(Failure::Mismatch(format!("rows failed: {}", failed.join(", "))));
            }
        }
        Command::Univalence { samples } => {
            let r = demo::univalence_demo(samples)?;
            emit(&r);
            if !r.passed() {
                return Err(Failure::Mismatch("univalence assertions failed".into()));
            }
        }
        Command::List => {
            for e in registry::entries() {
                println!("{:<12} {}", e.name, e.description);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (2, m),
                Failure::Domain(m) => (3, m),
                Failure::Mismatch(m) => (1, m),
                Failure::Io(m) => (1, m),
            };
            eprintln!("slicereg: {msg}");
            ExitCode::from(code)
        }
    }
}
