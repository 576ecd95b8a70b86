//! The `econlife` command-line front end.
//!
//! Subcommands:
//!
//! * `classify`: regime, economic life and diagnostics for one asset.
//! * `curve`: CSV samples of the capital, maintenance and property costs.
//! * `fleet`: batch classification of a CSV fleet, one result row per asset.
//! * `finance`: capital recovery, present/future value and effective rate.
//!
//! Exit codes: 0 success, 1 input error, 2 numeric failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::classifier::{CaseLabel, Classifier, EconomicLifeResult, MinimizerSet};
use crate::cost_model::{self, AssetParams};
use crate::error::Error;
use crate::finance_equiv;
use crate::format::{round_sig, sig};
use crate::oracle::{self, CrossCheckTolerance};

pub const FLEET_HEADER: [&str; 5] = [
    "id",
    "acquisition_cost",
    "maint_slope",
    "depreciation_rate",
    "interest_rate",
];
pub const RESULT_HEADER: [&str; 7] = [
    "id",
    "case",
    "econ_life_lo",
    "econ_life_hi",
    "secondary_minimizer",
    "min_annual_cost",
    "error",
];
pub const CURVE_HEADER: [&str; 4] = ["t", "capital_cost", "maintenance_cost", "property_cost"];

/// Grid step of the oracle cross-check.
pub const VERIFY_STEP: f64 = 1e-3;
/// Cap on oracle grid points per asset; coarser steps are used beyond it.
pub const VERIFY_MAX_POINTS: f64 = 2e6;

#[derive(Debug, Parser)]
#[command(
    name = "econlife",
    version,
    about = "Economic life of physical assets under linear maintenance and straight-line salvage"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify one asset and report its economic life.
    Classify(ClassifyArgs),
    /// Emit the cost curves as CSV.
    Curve(CurveArgs),
    /// Classify every asset of a CSV fleet file.
    Fleet(FleetArgs),
    /// Financial equivalence utilities.
    Finance {
        #[command(subcommand)]
        op: FinanceOp,
    },
}

#[derive(Debug, Args)]
pub struct AssetArgs {
    /// Acquisition cost A (currency units).
    #[arg(long, allow_negative_numbers = true)]
    pub acquisition: f64,
    /// Maintenance slope a (currency units per year²).
    #[arg(long, allow_negative_numbers = true)]
    pub maint_slope: f64,
    /// Yearly depreciation b (currency units per year).
    #[arg(long, allow_negative_numbers = true)]
    pub depreciation: f64,
    /// Nominal interest rate r per year, 0 < r <= 1.
    #[arg(long, allow_negative_numbers = true)]
    pub rate: f64,
}

impl AssetArgs {
    fn params(&self) -> Result<AssetParams, Error> {
        AssetParams::new(
            self.acquisition,
            self.maint_slope,
            self.depreciation,
            self.rate,
        )
    }
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub asset: AssetArgs,
    /// Identifier printed in csv/json output.
    #[arg(long, default_value = "asset")]
    pub id: String,
    /// Relative band within which boundary cases (a = b·r, a = a*, A = A₄) count as equal.
    #[arg(long, default_value_t = 0.0)]
    pub tolerance: f64,
    /// Cross-check the closed form against the brute-force oracle.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub asset: AssetArgs,
    /// Last sample time; defaults to 2·max(A/b, t*).
    #[arg(long, allow_negative_numbers = true)]
    pub t_max: Option<f64>,
    /// Sample spacing; defaults to t_max/500.
    #[arg(long, allow_negative_numbers = true)]
    pub step: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FleetArgs {
    /// CSV with header id,acquisition_cost,maint_slope,depreciation_rate,interest_rate.
    #[arg(long)]
    pub input: PathBuf,
    /// Output path; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Cross-check every row against the brute-force oracle.
    #[arg(long)]
    pub verify: bool,
    /// Relative band for boundary cases.
    #[arg(long, default_value_t = 0.0)]
    pub tolerance: f64,
}

#[derive(Debug, Subcommand)]
pub enum FinanceOp {
    /// Level payment equivalent to a present value.
    CapitalRecovery {
        #[arg(long, allow_negative_numbers = true)]
        present: f64,
        #[arg(long, allow_negative_numbers = true)]
        rate: f64,
        #[arg(long)]
        periods: u32,
    },
    /// Present value of a level annuity.
    PresentValue {
        #[arg(long, allow_negative_numbers = true)]
        annuity: f64,
        #[arg(long, allow_negative_numbers = true)]
        rate: f64,
        #[arg(long)]
        periods: u32,
    },
    /// Future value of a level annuity.
    FutureValue {
        #[arg(long, allow_negative_numbers = true)]
        annuity: f64,
        #[arg(long, allow_negative_numbers = true)]
        rate: f64,
        #[arg(long)]
        periods: u32,
    },
    /// Effective rate of a nominal rate compounded `periods` times.
    EffectiveRate {
        #[arg(long, allow_negative_numbers = true)]
        nominal: f64,
        #[arg(long)]
        periods: u32,
    },
}

impl FinanceOp {
    fn name(&self) -> &'static str {
        match self {
            FinanceOp::CapitalRecovery { .. } => "capital-recovery",
            FinanceOp::PresentValue { .. } => "present-value",
            FinanceOp::FutureValue { .. } => "future-value",
            FinanceOp::EffectiveRate { .. } => "effective-rate",
        }
    }

    fn evaluate(&self) -> Result<f64, Error> {
        match *self {
            FinanceOp::CapitalRecovery {
                present,
                rate,
                periods,
            } => finance_equiv::capital_recovery(present, rate, periods),
            FinanceOp::PresentValue {
                annuity,
                rate,
                periods,
            } => finance_equiv::present_value(annuity, rate, periods),
            FinanceOp::FutureValue {
                annuity,
                rate,
                periods,
            } => finance_equiv::future_value_of_annuity(annuity, rate, periods),
            FinanceOp::EffectiveRate { nominal, periods } => {
                finance_equiv::effective_rate(nominal, periods)
            }
        }
    }
}

/// Failure of a CLI invocation, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numeric(String),
    /// The reader of standard output went away; not reported.
    OutputClosed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Numeric(_) => 2,
            CliError::OutputClosed => 0,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric error: {m}"),
            CliError::OutputClosed => write!(f, "output closed"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Numeric(e.to_string())
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return CliError::OutputClosed;
        }
        CliError::Input(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.kind() {
            csv::ErrorKind::Io(io) if io.kind() == io::ErrorKind::BrokenPipe => {
                CliError::OutputClosed
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

/// One line of fleet output.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub id: String,
    pub case: Option<CaseLabel>,
    pub econ_life_lo: Option<f64>,
    pub econ_life_hi: Option<f64>,
    pub secondary_minimizer: Option<f64>,
    pub min_annual_cost: Option<f64>,
    pub error: Option<String>,
}

impl ResultRow {
    pub fn from_result(id: &str, res: &EconomicLifeResult) -> Self {
        Self {
            id: id.to_owned(),
            case: Some(res.case),
            econ_life_lo: Some(res.minimizers.lo()),
            econ_life_hi: Some(res.minimizers.hi()),
            secondary_minimizer: res.minimizers.secondary(),
            min_annual_cost: Some(res.min_cost),
            error: None,
        }
    }

    pub fn failed(id: &str, message: impl Into<String>) -> Self {
        Self {
            id: id.to_owned(),
            case: None,
            econ_life_lo: None,
            econ_life_hi: None,
            secondary_minimizer: None,
            min_annual_cost: None,
            error: Some(message.into()),
        }
    }

    pub fn csv_record(&self) -> Vec<String> {
        let num = |v: Option<f64>| v.map(sig).unwrap_or_default();
        vec![
            self.id.clone(),
            self.case.map(|c| c.to_string()).unwrap_or_default(),
            num(self.econ_life_lo),
            num(self.econ_life_hi),
            num(self.secondary_minimizer),
            num(self.min_annual_cost),
            self.error.clone().unwrap_or_default(),
        ]
    }

    /// Parses a record written by [`ResultRow::csv_record`].
    pub fn from_csv_record(record: &csv::StringRecord) -> Result<Self, Error> {
        if record.len() != RESULT_HEADER.len() {
            return Err(Error::invalid(format!(
                "expected {} fields, found {}",
                RESULT_HEADER.len(),
                record.len()
            )));
        }
        let num = |i: usize| -> Result<Option<f64>, Error> {
            let s = &record[i];
            if s.is_empty() {
                return Ok(None);
            }
            s.parse()
                .map(Some)
                .map_err(|_| Error::invalid(format!("{}: invalid number {s:?}", RESULT_HEADER[i])))
        };
        let opt = |s: &str| (!s.is_empty()).then(|| s.to_owned());
        Ok(Self {
            id: record[0].to_owned(),
            case: opt(&record[1]).map(|s| s.parse()).transpose()?,
            econ_life_lo: num(2)?,
            econ_life_hi: num(3)?,
            secondary_minimizer: num(4)?,
            min_annual_cost: num(5)?,
            error: opt(&record[6]),
        })
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("id".into(), json!(self.id));
        obj.insert("case".into(), json!(self.case.map(|c| c.as_str())));
        obj.insert("econ_life_lo".into(), json_num(self.econ_life_lo));
        obj.insert("econ_life_hi".into(), json_num(self.econ_life_hi));
        obj.insert(
            "secondary_minimizer".into(),
            json_num(self.secondary_minimizer),
        );
        obj.insert("min_annual_cost".into(), json_num(self.min_annual_cost));
        obj.insert("error".into(), json!(self.error));
        Value::Object(obj)
    }
}

fn json_num(v: Option<f64>) -> Value {
    v.map(round_sig)
        .and_then(serde_json::Number::from_f64)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

/// Search horizon and grid step for the oracle cross-check of one asset.
pub fn verify_grid(p: &AssetParams, res: &EconomicLifeResult) -> (f64, f64) {
    let mut t_max = (2.0 * p.junction()).max(10.0);
    if let Some(ts) = res.t_star {
        t_max = t_max.max(1.5 * ts);
    }
    let step = VERIFY_STEP.max(t_max / VERIFY_MAX_POINTS);
    (t_max, step)
}

/// Runs the oracle for `p` and compares it with `res`.
pub fn verify(p: &AssetParams, res: &EconomicLifeResult) -> Result<Result<(), String>, Error> {
    let (t_max, step) = verify_grid(p, res);
    let report = oracle::brute_force_minimize(p, t_max, step)?;
    let tol = CrossCheckTolerance {
        point: CrossCheckTolerance::default().point * t_max.max(1.0),
        plateau: CrossCheckTolerance::default().plateau.max(step),
        ..CrossCheckTolerance::default()
    };
    Ok(oracle::cross_check(res, &report, tol))
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(CliError::OutputClosed) => 0,
        Err(e) => {
            let _ = writeln!(err, "econlife: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Classify(args) => cmd_classify(args, cli.format, out),
        Command::Curve(args) => cmd_curve(args, out).map(|_| 0),
        Command::Fleet(args) => cmd_fleet(args, cli.format, out).map(|_| 0),
        Command::Finance { op } => cmd_finance(op, cli.format, out).map(|_| 0),
    }
}

fn classifier(tolerance: f64) -> Result<Classifier, CliError> {
    Classifier::with_tolerance(tolerance).map_err(CliError::from)
}

fn describe_minimizers(m: &MinimizerSet) -> String {
    match *m {
        MinimizerSet::Point(t) => sig(t),
        MinimizerSet::TwoPoints(s, t) => format!("{} and {}", sig(s), sig(t)),
        MinimizerSet::Interval { lo, hi } => format!("any age in [{}, {}]", sig(lo), sig(hi)),
    }
}

/// `classify`: returns 2 when `--verify` finds a discrepancy.
pub fn cmd_classify(
    args: &ClassifyArgs,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let p = args.asset.params()?;
    let res = classifier(args.tolerance)?.economic_life(&p)?;
    let mut row = ResultRow::from_result(&args.id, &res);
    let mut code = 0;
    if args.verify {
        if let Err(msg) = verify(&p, &res)? {
            row.error = Some(format!("oracle discrepancy: {msg}"));
            code = 2;
        }
    }
    let opt = |v: Option<f64>| v.map(sig).unwrap_or_else(|| "-".to_owned());
    match format {
        OutputFormat::Text => {
            writeln!(out, "case: {}", res.case)?;
            writeln!(
                out,
                "economic life: {}",
                describe_minimizers(&res.minimizers)
            )?;
            writeln!(out, "min annual cost: {}", sig(res.min_cost))?;
            writeln!(out, "t_star: {}", opt(res.t_star))?;
            writeln!(out, "c: {}", sig(res.c))?;
            writeln!(out, "a_star: {}", sig(res.a_star))?;
            writeln!(out, "A_threshold: {}", opt(res.a_threshold))?;
            if args.verify {
                match &row.error {
                    None => writeln!(out, "verify: ok")?,
                    Some(msg) => writeln!(out, "verify: {msg}")?,
                }
            }
        }
        OutputFormat::Json => {
            let mut obj = match row.to_json() {
                Value::Object(m) => m,
                _ => unreachable!(),
            };
            obj.insert("t_star".into(), json_num(res.t_star));
            obj.insert("c".into(), json_num(Some(res.c)));
            obj.insert("a_star".into(), json_num(Some(res.a_star)));
            obj.insert("a_threshold".into(), json_num(res.a_threshold));
            writeln!(out, "{}", Value::Object(obj))?;
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(RESULT_HEADER)?;
            w.write_record(row.csv_record())?;
            w.flush()?;
        }
    }
    Ok(code)
}

/// `curve`: CSV of `t, g, f, h`.
pub fn cmd_curve(args: &CurveArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let p = args.asset.params()?;
    let t_max = match args.t_max {
        Some(t) => t,
        None => {
            let res = Classifier::exact().economic_life(&p)?;
            2.0 * res.t_star.unwrap_or(0.0).max(p.junction())
        }
    };
    let step = args.step.unwrap_or(t_max / 500.0);
    let samples = cost_model::curve(&p, t_max, step)?;
    write_curve_csv(&samples, out)
}

/// Writes curve samples with the `t,capital_cost,maintenance_cost,property_cost` header.
pub fn write_curve_csv(
    samples: &[cost_model::CostSample],
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CURVE_HEADER)?;
    for s in samples {
        w.write_record([
            sig(s.t),
            sig(s.capital),
            sig(s.maintenance),
            sig(s.property),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// A parsed fleet line: its id and either parameters or the reason they are unusable.
#[derive(Debug, Clone, PartialEq)]
pub struct FleetRow {
    pub id: String,
    pub params: Result<AssetParams, String>,
}

/// Reads a fleet CSV. Header problems and unreadable input fail the whole
/// batch; everything else becomes a per-row error.
pub fn read_fleet(reader: impl io::Read) -> Result<Vec<FleetRow>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.iter().ne(FLEET_HEADER.iter().copied()) {
        return Err(CliError::Input(format!(
            "malformed header {:?}; expected {}",
            header.iter().collect::<Vec<_>>().join(","),
            FLEET_HEADER.join(",")
        )));
    }
    let mut seen = std::collections::HashSet::new();
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let id = record.get(0).unwrap_or_default().to_owned();
        let params = if record.len() != FLEET_HEADER.len() {
            Err(format!(
                "expected {} fields, found {}",
                FLEET_HEADER.len(),
                record.len()
            ))
        } else if !seen.insert(id.clone()) {
            Err(format!("duplicate id {id:?}"))
        } else {
            parse_params(&record)
        };
        rows.push(FleetRow { id, params });
    }
    Ok(rows)
}

fn parse_params(record: &csv::StringRecord) -> Result<AssetParams, String> {
    let mut values = [0.0; 4];
    for (i, v) in values.iter_mut().enumerate() {
        let field = record[i + 1].trim();
        *v = field
            .parse()
            .map_err(|_| format!("{}: invalid number {field:?}", FLEET_HEADER[i + 1]))?;
    }
    AssetParams::new(values[0], values[1], values[2], values[3]).map_err(|e| e.to_string())
}

/// Classifies every fleet row, in input order.
pub fn process_fleet(
    rows: &[FleetRow],
    classifier: Classifier,
    verify_rows: bool,
) -> Vec<ResultRow> {
    rows.par_iter()
        .map(|row| {
            let p = match &row.params {
                Ok(p) => p,
                Err(msg) => return ResultRow::failed(&row.id, msg.clone()),
            };
            let res = match classifier.economic_life(p) {
                Ok(res) => res,
                Err(e) => return ResultRow::failed(&row.id, e.to_string()),
            };
            let mut out = ResultRow::from_result(&row.id, &res);
            if verify_rows {
                match verify(p, &res) {
                    Ok(Ok(())) => {}
                    Ok(Err(msg)) => out.error = Some(format!("oracle discrepancy: {msg}")),
                    Err(e) => out.error = Some(format!("oracle failed: {e}")),
                }
            }
            out
        })
        .collect()
}

/// Writes fleet results as CSV, or as one JSON object per line.
pub fn write_results(
    rows: &[ResultRow],
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    match format {
        OutputFormat::Json => {
            for row in rows {
                writeln!(out, "{}", row.to_json())?;
            }
        }
        OutputFormat::Csv | OutputFormat::Text => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(RESULT_HEADER)?;
            for row in rows {
                w.write_record(row.csv_record())?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// `fleet`: text format falls back to CSV.
pub fn cmd_fleet(
    args: &FleetArgs,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let classifier = classifier(args.tolerance)?;
    let file = File::open(&args.input)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", args.input.display())))?;
    let rows = read_fleet(io::BufReader::new(file))?;
    let results = process_fleet(&rows, classifier, args.verify);
    match &args.output {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write_results(&results, format, &mut w)?;
            w.flush()?;
        }
        None => write_results(&results, format, out)?,
    }
    Ok(())
}

/// `finance`: prints one value.
pub fn cmd_finance(
    op: &FinanceOp,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let value = op.evaluate()?;
    match format {
        OutputFormat::Text => writeln!(out, "{}", sig(value))?,
        OutputFormat::Json => writeln!(
            out,
            "{}",
            json!({ "operation": op.name(), "value": json_num(Some(value)) })
        )?,
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["operation", "value"])?;
            w.write_record([op.name().to_owned(), sig(value)])?;
            w.flush()?;
        }
    }
    Ok(())
}
