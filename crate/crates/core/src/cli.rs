//! The `bmt` command-line driver.
//!
//! Every subcommand writes JSON (or CSV) to stdout or `--out`. Exit codes are
//! 0 on success, 1 when a verification fails and 2 for usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::char_groups::{enumerate_ggamma, enumerate_gi};
use crate::cycle_calculus::{check_generic_cycles, verify_transfer, Cycle, CycleBasis, TransferReport};
use crate::gl2_types::{SemistableFlavor, TameInertialTypeGL2, TameInertialTypePGL2};
use crate::serre_weights::{enumerate_s, enumerate_sigma, SerreWeightSL};
use crate::transfer::{CheckOutcome, Fault, IntegredReport};
use crate::weight_lattice::{GLWeight, SLWeight};
use crate::{BmtError, Engine, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "bmt", version, about = "Serre-weight multiplicities and the GL2/PGL2 Breuil-Mezard transfer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List Serre weights, tame types or twisting characters.
    Enumerate(EnumerateArgs),
    /// Compute a GL2 table a_{l,t} or a PGL2 table alpha_{lambda,tau}.
    Multiplicity(MultiplicityArgs),
    /// Run the verification sweep.
    Verify(VerifyArgs),
    /// Check the cycle identity for one (lambda, tau) against a random basis.
    Cycles(CyclesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EnumerateKind {
    /// Serre weights of GL_n(F_q).
    Weights,
    /// Serre weights of SL_n(F_q).
    SlWeights,
    /// Tame inertial types for GL_2.
    Types,
    /// Tame inertial types for PGL_2.
    PglTypes,
    /// Characters of I_K of order dividing n.
    Chars,
    /// Characters of Gamma_K of order dividing n.
    GammaChars,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    kind: EnumerateKind,
    #[arg(long)]
    p: Option<u64>,
    /// Residue field size, a power of p.
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, default_value_t = 2)]
    n: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableKind {
    /// a_{l,t}(s) for GL_2.
    A,
    /// alpha_{lambda,tau}(sigma) for PGL_2.
    Alpha,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlphaMethod {
    Direct,
    Gl,
}

#[derive(Debug, Args)]
struct MultiplicityArgs {
    table: TableKind,
    #[arg(long)]
    p: u64,
    /// GL_2 Hodge type "l1,l2".
    #[arg(long, allow_hyphen_values = true)]
    ell: Option<String>,
    /// PGL_2 Hodge type "c" or "c,0".
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Type descriptor: scalar:e, ps:e1,e2, cusp:f or JSON.
    #[arg(long = "type")]
    ty: String,
    #[arg(long, default_value = "cr")]
    flavor: SemistableFlavor,
    #[arg(long, value_enum, default_value_t = AlphaMethod::Direct)]
    method: AlphaMethod,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FlavorChoice {
    Cr,
    St,
    Both,
}

impl FlavorChoice {
    fn flavors(self) -> Vec<SemistableFlavor> {
        match self {
            FlavorChoice::Cr => vec![SemistableFlavor::Crystalline],
            FlavorChoice::St => vec![SemistableFlavor::Semistable],
            FlavorChoice::Both => SemistableFlavor::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Detail {
    /// Only failing items.
    Failures,
    /// Every item.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FaultArg {
    CorruptATable,
    BreakCycleBasis,
    OverlappingCycles,
}

impl From<FaultArg> for Fault {
    fn from(f: FaultArg) -> Self {
        match f {
            FaultArg::CorruptATable => Fault::CorruptATable,
            FaultArg::BreakCycleBasis => Fault::BreakCycleBasis,
            FaultArg::OverlappingCycles => Fault::OverlappingCycles,
        }
    }
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Comma-separated odd primes.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    primes: Option<Vec<u64>>,
    /// Largest l1 - l2 (and lambda) to sweep; defaults to 2p.
    #[arg(long)]
    bound: Option<u64>,
    #[arg(long, value_enum)]
    flavor: Option<FlavorChoice>,
    #[arg(long)]
    seed: Option<u64>,
    /// Random cycle bases per (p, tau, lambda, flavor).
    #[arg(long)]
    bases: Option<u64>,
    #[arg(long, value_enum)]
    inject_fault: Option<FaultArg>,
    /// TOML file with defaults; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_enum)]
    detail: Option<Detail>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct CyclesArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    #[arg(long = "type")]
    ty: String,
    #[arg(long, default_value = "cr")]
    flavor: SemistableFlavor,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of point labels in the random basis.
    #[arg(long, default_value_t = 3)]
    labels: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Settings of a verification run after merging the config file and flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub primes: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_bound: Option<u64>,
    pub flavor: FlavorChoice,
    pub output_format: Format,
    pub seed: u64,
    pub bases: u64,
    pub detail: Detail,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
    #[serde(skip)]
    pub jobs: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            primes: vec![3, 5, 7, 11, 13],
            weight_bound: None,
            flavor: FlavorChoice::Both,
            output_format: Format::Json,
            seed: 0,
            bases: 1,
            detail: Detail::Failures,
            fault: None,
            jobs: None,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    primes: Option<Vec<u64>>,
    bound: Option<u64>,
    flavor: Option<FlavorChoice>,
    seed: Option<u64>,
    bases: Option<u64>,
    format: Option<Format>,
    detail: Option<Detail>,
    inject_fault: Option<Fault>,
    jobs: Option<usize>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.primes.is_empty() {
            return Err(BmtError::InvalidArgument("empty prime list".into()));
        }
        for &p in &self.primes {
            crate::arith::require_odd_prime(p)?;
        }
        if self.weight_bound == Some(0) {
            return Err(BmtError::InvalidArgument("weight bound must be at least 1".into()));
        }
        if self.jobs == Some(0) {
            return Err(BmtError::InvalidArgument("jobs must be at least 1".into()));
        }
        Ok(())
    }

    fn bound(&self, p: u64) -> u64 {
        self.weight_bound.unwrap_or(2 * p)
    }
}

fn load_config(args: &VerifyArgs) -> Result<RunConfig> {
    let file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| BmtError::InvalidArgument(format!("{}: {e}", path.display())))?;
            toml::from_str::<FileConfig>(&text).map_err(|e| BmtError::Parse { what: "config", detail: e.to_string() })?
        }
        None => FileConfig::default(),
    };
    let d = RunConfig::default();
    let mut cfg = RunConfig {
        primes: args.primes.clone().or(file.primes).unwrap_or(d.primes),
        weight_bound: args.bound.or(file.bound),
        flavor: args.flavor.or(file.flavor).unwrap_or(d.flavor),
        output_format: args.format.or(file.format).unwrap_or(d.output_format),
        seed: args.seed.or(file.seed).unwrap_or(d.seed),
        bases: args.bases.or(file.bases).unwrap_or(d.bases),
        detail: args.detail.or(file.detail).unwrap_or(d.detail),
        fault: args.inject_fault.map(Fault::from).or(file.inject_fault),
        jobs: args.jobs.or(file.jobs),
    };
    cfg.primes.sort_unstable();
    cfg.primes.dedup();
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub total: u64,
    pub failed: u64,
}

impl Tally {
    fn count(&mut self, passed: bool) {
        self.total += 1;
        self.failed += u64::from(!passed);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenericCycleReport {
    pub p: u64,
    pub tau: TameInertialTypePGL2,
    pub check: CheckOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeSummary {
    pub p: u64,
    pub bound: u64,
    pub moduli: [u64; 2],
    pub integred: Tally,
    pub transfer: Tally,
    pub generic_cycles: Tally,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub config: RunConfig,
    pub summary: Vec<PrimeSummary>,
    pub integred: Vec<IntegredReport>,
    pub transfer: Vec<TransferReport>,
    pub generic_cycles: Vec<GenericCycleReport>,
    pub passed: bool,
}

/// A random basis whose `C_sigma` for `sigma = Symm^0` no longer equals the fiber sum.
pub fn broken_basis(mut basis: CycleBasis) -> CycleBasis {
    let sigma = SerreWeightSL::single(0);
    let c = basis.sl(&sigma).cloned().unwrap_or_default().add(&Cycle::point("extra"));
    basis.set_sl(sigma, c);
    basis
}

fn basis_seed(seed: u64, p: u64, index: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (p << 48) ^ index
}

/// Runs the sweep described by `cfg`. Items are ordered by `(p, type, weight, flavor)`.
pub fn verify(cfg: &RunConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    let body = || -> Result<VerifyReport> {
        let mut report = VerifyReport {
            config: cfg.clone(),
            summary: Vec::new(),
            integred: Vec::new(),
            transfer: Vec::new(),
            generic_cycles: Vec::new(),
            passed: true,
        };
        let mut primes = cfg.primes.clone();
        primes.sort_unstable();
        primes.dedup();
        report.config.primes = primes.clone();
        let flavors = cfg.flavor.flavors();
        for p in primes {
            let bound = cfg.bound(p);
            let engine = Engine::for_bound(p, bound)?;
            let mut summary = PrimeSummary {
                p,
                bound,
                moduli: engine.reps().moduli_values(),
                integred: Tally::default(),
                transfer: Tally::default(),
                generic_cycles: Tally::default(),
            };

            let corrupt = cfg.fault.filter(|f| *f == Fault::CorruptATable);
            let mut integred = engine.sweep_integred(bound, &flavors, corrupt)?;
            integred.sort_by(|x, y| (&x.t, &x.ell, x.flavor).cmp(&(&y.t, &y.ell, y.flavor)));
            for r in integred {
                summary.integred.count(r.passed);
                if !r.passed || cfg.detail == Detail::All {
                    report.integred.push(r);
                }
            }

            let taus = TameInertialTypePGL2::all(p)?;
            let mut items = Vec::new();
            for tau in &taus {
                for c in 1..=bound as i64 {
                    for &flavor in &flavors {
                        for k in 0..cfg.bases {
                            items.push((*tau, c, flavor, k));
                        }
                    }
                }
            }
            let transfers: Vec<TransferReport> = items
                .par_iter()
                .enumerate()
                .map(|(i, (tau, c, flavor, _))| {
                    let mut rng = ChaCha8Rng::seed_from_u64(basis_seed(cfg.seed, p, i as u64));
                    let mut basis = CycleBasis::random(p, 3, &mut rng)?;
                    if cfg.fault == Some(Fault::BreakCycleBasis) {
                        basis = broken_basis(basis);
                    }
                    let lambda = SLWeight::from_any(&[*c, 0])?;
                    Ok(verify_transfer(&engine, &lambda, tau, *flavor, &basis))
                })
                .collect::<Result<_>>()?;
            for r in transfers {
                summary.transfer.count(r.passed);
                if !r.passed || cfg.detail == Detail::All {
                    report.transfer.push(r);
                }
            }

            let shared = cfg.fault == Some(Fault::OverlappingCycles);
            for tau in taus {
                let check = check_generic_cycles(&tau, shared);
                summary.generic_cycles.count(check.passed);
                if !check.passed || cfg.detail == Detail::All {
                    report.generic_cycles.push(GenericCycleReport { p, tau, check });
                }
            }
            report.passed &= summary.integred.failed + summary.transfer.failed + summary.generic_cycles.failed == 0;
            report.summary.push(summary);
        }
        Ok(report)
    };
    match cfg.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| BmtError::InvalidArgument(e.to_string()))?
            .install(body),
        None => body(),
    }
}

fn write_csv_rows(rows: Vec<Vec<String>>, header: &[&str]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| BmtError::InvalidArgument(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| BmtError::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn weight_str(w: &[i64]) -> String {
    w.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn report_csv(report: &VerifyReport) -> Result<String> {
    let mut rows = Vec::new();
    for r in &report.integred {
        for c in &r.checks {
            rows.push(vec![
                r.p.to_string(),
                "integred".into(),
                r.t.to_string(),
                weight_str(r.ell.entries()),
                r.flavor.short().into(),
                c.name.clone(),
                c.passed.to_string(),
                c.detail.clone(),
            ]);
        }
    }
    for r in &report.transfer {
        for c in &r.checks {
            rows.push(vec![
                r.p.to_string(),
                "transfer".into(),
                r.tau.to_string(),
                weight_str(r.lambda.entries()),
                r.flavor.short().into(),
                c.name.clone(),
                c.passed.to_string(),
                c.detail.clone(),
            ]);
        }
    }
    for r in &report.generic_cycles {
        let c = &r.check;
        rows.push(vec![
            r.p.to_string(),
            "generic_cycles".into(),
            r.tau.to_string(),
            String::new(),
            String::new(),
            c.name.clone(),
            c.passed.to_string(),
            c.detail.clone(),
        ]);
    }
    write_csv_rows(rows, &["p", "kind", "type", "weight", "flavor", "check", "passed", "detail"])
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    let res = match out {
        Some(path) => std::fs::write(path, text),
        None => stdout.write_all(text.as_bytes()),
    };
    match res {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => other.map_err(|e| BmtError::InvalidArgument(format!("cannot write output: {e}"))),
    }
}

fn parse_ints(s: &str, what: &'static str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| BmtError::Parse { what, detail: s.into() }))
        .collect()
}

fn parse_lambda(s: &str) -> Result<SLWeight> {
    let mut v = parse_ints(s, "lambda")?;
    if v.len() == 1 {
        v.push(0);
    }
    SLWeight::from_any(&v)
}

fn enumerate(args: &EnumerateArgs, stdout: &mut dyn Write) -> Result<()> {
    if let Some(p) = args.p {
        crate::arith::require_odd_prime(p)?;
    }
    let q = args.q.or(args.p).ok_or_else(|| BmtError::InvalidArgument("--p or --q is required".into()))?;
    let p = crate::arith::prime_power(q).ok_or(BmtError::NotPrimePower(q))?.0;
    if let (Some(p0), Some(_)) = (args.p, args.q) {
        if p0 != p {
            return Err(BmtError::InvalidArgument(format!("q = {q} is not a power of p = {p0}")));
        }
    }
    let n = args.n as usize;
    let (json, rows, header): (String, Vec<Vec<String>>, Vec<&str>) = match args.kind {
        EnumerateKind::Weights => {
            let w = enumerate_s(n, q)?;
            let rows = w.iter().map(|s| vec![weight_str(&to_i64(s.w())), s.det().to_string()]).collect();
            (to_json(&w), rows, vec!["w", "det"])
        }
        EnumerateKind::SlWeights => {
            let w = enumerate_sigma(n, q)?;
            let rows = w.iter().map(|s| vec![weight_str(&to_i64(s.w()))]).collect();
            (to_json(&w), rows, vec!["w"])
        }
        EnumerateKind::Types | EnumerateKind::PglTypes => {
            require_gl2(q, n)?;
            if args.kind == EnumerateKind::Types {
                let t = TameInertialTypeGL2::all(q)?;
                let rows = t.iter().map(|t| vec![t.to_string()]).collect();
                (to_json(&t), rows, vec!["type"])
            } else {
                let t = TameInertialTypePGL2::all(q)?;
                let rows = t.iter().map(|t| vec![t.to_string()]).collect();
                (to_json(&t), rows, vec!["type"])
            }
        }
        EnumerateKind::Chars => {
            let c = enumerate_gi(args.n, q)?;
            let rows = c.iter().map(|c| vec![c.exponent.to_string()]).collect();
            (to_json(&c), rows, vec!["exponent"])
        }
        EnumerateKind::GammaChars => {
            let c = enumerate_ggamma(args.n, q)?;
            let rows = c
                .iter()
                .map(|c| vec![c.unramified_part.to_string(), c.tame_part.exponent.to_string()])
                .collect();
            (to_json(&c), rows, vec!["unramified", "tame_exponent"])
        }
    };
    let text = match args.format {
        Format::Json => json,
        Format::Csv => write_csv_rows(rows, &header)?,
    };
    emit(&text, args.out.as_deref(), stdout)
}

fn require_gl2(q: u64, n: usize) -> Result<()> {
    if n != 2 {
        return Err(BmtError::InvalidArgument("tame types are only enumerated for n = 2".into()));
    }
    crate::arith::require_odd_prime(q)
}

fn to_i64(w: &[u64]) -> Vec<i64> {
    w.iter().map(|&x| x as i64).collect()
}

fn multiplicity(args: &MultiplicityArgs, stdout: &mut dyn Write) -> Result<()> {
    let p = args.p;
    crate::arith::require_odd_prime(p)?;
    let t = TameInertialTypeGL2::parse(&args.ty, p)?;
    let text = match args.table {
        TableKind::A => {
            let ell = args.ell.as_deref().ok_or_else(|| BmtError::InvalidArgument("--ell is required".into()))?;
            let ell = GLWeight::new(parse_ints(ell, "ell")?)?;
            if !ell.is_regular() {
                return Err(BmtError::NotRegular(ell.entries().to_vec()));
            }
            let c = (ell.entries()[0] - ell.entries()[1]) as u64;
            let engine = Engine::for_bound(p, c)?;
            let table = engine.a_table(&ell, &t, args.flavor)?;
            match args.format {
                Format::Json => to_json(&table),
                Format::Csv => {
                    let rows = table
                        .entries
                        .terms()
                        .iter()
                        .map(|(s, n)| vec![s.a().to_string(), s.b().to_string(), n.to_string()])
                        .collect();
                    write_csv_rows(rows, &["a", "b", "multiplicity"])?
                }
            }
        }
        TableKind::Alpha => {
            let lambda = args.lambda.as_deref().ok_or_else(|| BmtError::InvalidArgument("--lambda is required".into()))?;
            let lambda = parse_lambda(lambda)?;
            if !lambda.is_regular() {
                return Err(BmtError::NotRegular(lambda.entries().to_vec()));
            }
            let engine = Engine::for_bound(p, lambda.entries()[0] as u64)?;
            let tau = TameInertialTypePGL2::from_gl(&t);
            let table = match args.method {
                AlphaMethod::Direct => engine.alpha_table_direct(&lambda, &tau, args.flavor)?,
                AlphaMethod::Gl => engine.alpha_table_via_gl(&lambda, &tau, args.flavor)?,
            };
            match args.format {
                Format::Json => to_json(&table),
                Format::Csv => {
                    let rows = table
                        .entries
                        .terms()
                        .iter()
                        .map(|(s, n)| vec![s.a().to_string(), n.to_string()])
                        .collect();
                    write_csv_rows(rows, &["a", "multiplicity"])?
                }
            }
        }
    };
    emit(&text, args.out.as_deref(), stdout)
}

#[derive(Serialize)]
struct CyclesOutput<'a> {
    basis: &'a CycleBasis,
    report: &'a TransferReport,
}

fn cycles(args: &CyclesArgs, stdout: &mut dyn Write) -> Result<bool> {
    let p = args.p;
    crate::arith::require_odd_prime(p)?;
    let t = TameInertialTypeGL2::parse(&args.ty, p)?;
    let lambda = parse_lambda(&args.lambda)?;
    if !lambda.is_regular() {
        return Err(BmtError::NotRegular(lambda.entries().to_vec()));
    }
    let engine = Engine::for_bound(p, lambda.entries()[0] as u64)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let basis = CycleBasis::random(p, args.labels, &mut rng)?;
    let tau = TameInertialTypePGL2::from_gl(&t);
    let report = verify_transfer(&engine, &lambda, &tau, args.flavor, &basis);
    emit(&to_json(&CyclesOutput { basis: &basis, report: &report }), args.out.as_deref(), stdout)?;
    Ok(report.passed)
}

fn verify_cmd(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<bool> {
    let cfg = load_config(args)?;
    let report = verify(&cfg)?;
    let text = match cfg.output_format {
        Format::Json => to_json(&report),
        Format::Csv => report_csv(&report)?,
    };
    emit(&text, args.out.as_deref(), stdout)?;
    Ok(report.passed)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run_from<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let result = match &cli.command {
        Command::Enumerate(a) => enumerate(a, stdout).map(|_| true),
        Command::Multiplicity(a) => multiplicity(a, stdout).map(|_| true),
        Command::Verify(a) => verify_cmd(a, stdout),
        Command::Cycles(a) => cycles(a, stdout),
    };
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_usage() {
                EXIT_USAGE
            } else {
                EXIT_FAILED
            }
        }
    }
}

pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_from(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
