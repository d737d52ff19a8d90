//! The `hlz` command line.
//!
//! Records go to stdout as JSON lines (default) or CSV. The effective
//! configuration, trend summaries and errors go to stderr. Exit status is
//! 0 on success, 2 for usage or configuration errors and 3 for numerical
//! or budget failures.

pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::engine::{Config, Engine};
use crate::error::{Error, Result};
use crate::harness::report::{fmt_num, json_num, json_object, json_str};
use crate::harness::{self, FormulaId};
use crate::quadrature::Interval;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "hlz",
    version,
    about = "Hardy Z, its square integral and the ladder φ(T)"
)]
pub struct Cli {
    /// JSON lines on stdout (the default)
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// CSV on stdout
    #[arg(long, global = true)]
    pub csv: bool,
    /// key=value configuration file
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Checkpoint file for I(T), created if missing
    #[arg(long, global = true, value_name = "PATH")]
    pub checkpoint: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Z(t)
    Z {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
    /// Zeros of Z in [from, to]
    Zeros {
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
    },
    /// Integral of Z² over [from, to]
    Integrate {
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
    },
    /// I(T), the integral of Z² over [0, T]
    Hl {
        #[arg(long)]
        t: f64,
    },
    /// φ(T) and dφ/dT
    Ladder {
        #[arg(long)]
        t: f64,
    },
    /// Chord of φ/2 over [T, T + U]
    Chord {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        u: f64,
    },
    /// Chord of slope X from the first zero above G
    Rotate {
        #[arg(long = "gamma-near", value_name = "G")]
        gamma_near: f64,
        #[arg(long, value_name = "X")]
        tan: f64,
    },
    /// Formula checks, one id or `all`
    Verify {
        formula: String,
        #[arg(long = "t-grid", value_delimiter = ',', required = true, num_args = 1..)]
        t_grid: Vec<f64>,
    },
    /// Windows of length L near T whose mean of Z² is close to ln T
    ScanMean {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        len: f64,
        #[arg(long)]
        count: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Num(f64),
    Int(u64),
    Bool(bool),
}

impl Value {
    fn json(&self) -> String {
        match self {
            Value::Num(x) => json_num(*x),
            Value::Int(n) => n.to_string(),
            Value::Bool(b) => b.to_string(),
        }
    }

    fn csv(&self) -> String {
        match self {
            Value::Num(x) => fmt_num(*x),
            Value::Int(n) => n.to_string(),
            Value::Bool(b) => b.to_string(),
        }
    }
}

struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn write(&self, csv_out: bool, out: &mut dyn Write) -> Result<()> {
        if csv_out {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&self.columns)?;
            for row in &self.rows {
                w.write_record(row.iter().map(Value::csv))?;
            }
            w.flush()?;
        } else {
            for row in &self.rows {
                let fields: Vec<(&str, String)> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (*c, v.json()))
                    .collect();
                writeln!(out, "{}", json_object(&fields))?;
            }
        }
        Ok(())
    }
}

fn error_record(e: &Error) -> String {
    json_object(&[
        ("error", json_str(e.kind())),
        ("message", json_str(&e.to_string())),
    ])
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let cfg = match effective_config(&cli, std::env::vars()) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "{}", error_record(&e));
            return EXIT_USAGE;
        }
    };
    let _ = write!(err, "{}", config::render(&cfg));
    match execute(&cli, cfg, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "{}", error_record(&e));
            match e {
                Error::Config(_) => EXIT_USAGE,
                _ => EXIT_NUMERIC,
            }
        }
    }
}

/// File, then `HLZ_*` variables, then command-line flags.
pub fn effective_config(
    cli: &Cli,
    vars: impl IntoIterator<Item = (String, String)>,
) -> Result<Config> {
    let mut cfg = config::load(cli.config.as_deref(), vars)?;
    if let Some(p) = &cli.checkpoint {
        cfg.checkpoint_path = Some(p.clone());
    }
    if let Some(n) = cli.threads {
        cfg.threads = n;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cli: &Cli, cfg: Config, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let engine = Engine::new(cfg)?;
    let tol = engine.config().tol;
    use Value::{Bool, Int, Num};
    let table = match &cli.command {
        Command::Z { t } => {
            let s = engine.z(*t)?;
            let mut tb = Table::new(&["t", "z", "z2", "err"]);
            tb.push(vec![Num(*t), Num(s.z), Num(s.z2), Num(s.err)]);
            tb
        }
        Command::Zeros { from, to } => {
            let mut tb = Table::new(&["index", "gamma", "bracket_width"]);
            for (i, z) in engine.zeros_in(*from, *to)?.iter().enumerate() {
                tb.push(vec![
                    Int(i as u64 + 1),
                    Num(z.gamma.get()),
                    Num(z.bracket_width),
                ]);
            }
            tb
        }
        Command::Integrate { from, to } => {
            let r = engine.integrate_z2(Interval::new(*from, *to)?, tol)?;
            let mut tb = Table::new(&["from", "to", "value", "err_est", "evals", "tol_met"]);
            tb.push(vec![
                Num(*from),
                Num(*to),
                Num(r.value),
                Num(r.err_est),
                Int(r.evals),
                Bool(r.tol_met),
            ]);
            tb
        }
        Command::Hl { t } => {
            let r = engine.hl_integral(*t, tol)?;
            let mut tb = Table::new(&["t", "value", "err_est", "tol_met"]);
            tb.push(vec![Num(*t), Num(r.value), Num(r.err_est), Bool(r.tol_met)]);
            tb
        }
        Command::Ladder { t } => {
            let p = engine.solve_phi(*t, &engine.config().mu, tol)?;
            let mut tb = Table::new(&["t", "phi", "dphi_dt", "residual", "i_t", "phi_prime", "z"]);
            tb.push(vec![
                Num(p.t),
                Num(p.phi),
                Num(p.dphi_dt),
                Num(p.residual),
                Num(p.i_t),
                Num(p.phi_prime),
                Num(p.z),
            ]);
            tb
        }
        Command::Chord { t, u } => {
            let c = engine.chord(*t, *u)?;
            let mut tb = Table::new(&[
                "n",
                "m",
                "phi_n",
                "phi_m",
                "tan_alpha",
                "is_fundamental",
                "is_almost_parallel",
            ]);
            tb.push(vec![
                Num(c.n),
                Num(c.m),
                Num(c.lo.phi),
                Num(c.hi.phi),
                Num(c.tan_alpha),
                Bool(c.is_fundamental),
                Bool(c.is_almost_parallel),
            ]);
            tb
        }
        Command::Rotate { gamma_near, tan } => {
            let r = engine.check_rotating_chord(*gamma_near, *tan)?;
            let get = |k| Num(r.input(k).unwrap_or(f64::NAN));
            let mut tb = Table::new(&["gamma", "u", "u0", "tan_alpha", "mean_over_ln_gamma"]);
            let g = r.input("gamma").unwrap_or(f64::NAN);
            tb.push(vec![
                get("gamma"),
                get("U"),
                Num(engine.u0(g)),
                get("tan_alpha"),
                Num(r.lhs),
            ]);
            tb
        }
        Command::Verify { formula, t_grid } => {
            let ids: Vec<FormulaId> = if formula.eq_ignore_ascii_case("all") {
                FormulaId::ALL.to_vec()
            } else {
                vec![formula.parse().map_err(Error::Config)?]
            };
            let reports = engine.verify(&ids, t_grid)?;
            if cli.csv {
                harness::write_csv(&mut *out, &reports)?;
            } else {
                harness::write_json_lines(&mut &mut *out, &reports)?;
            }
            for s in harness::trend_summaries(&reports) {
                writeln!(
                    err,
                    "{}",
                    json_object(&[
                        ("trend", json_str(s.formula_id.as_str())),
                        ("non_increasing", s.non_increasing.to_string()),
                        ("fitted_constant", json_num(s.series.fitted_constant)),
                    ])
                )?;
            }
            return Ok(());
        }
        Command::ScanMean { t, len, count } => {
            let mut tb = Table::new(&["t", "n", "len", "mean", "ln_t"]);
            for iv in engine.find_intervals_with_mean(*t, *len, *count)? {
                let mean = engine.integrate_z2(iv, tol)?.value / iv.len();
                tb.push(vec![Num(*t), Num(iv.a), Num(*len), Num(mean), Num(t.ln())]);
            }
            tb
        }
    };
    table.write(cli.csv, out)
}
