//! Command-line front end. Exit codes: 0 all checks pass, 1 a check
//! failed, 2 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use prolong_core::flat::killing::DEFAULT_DEGREE_CAP;
use prolong_core::flat::{killing_kernel, killing_potential_solve, RangeResult};
use prolong_core::kostant::{lie_algebra_cohomology_of, v_dimension};
use prolong_core::prolong::{
    check_cap, cochain_dims_predicted, complex_cohomology_of, CohomologyReport, DEFAULT_DIMENSION_CAP,
};

use crate::cache::BasisCache;
use crate::checks::{a1_key, Context};
use crate::error::CliError;
use crate::format::{parse_json, CohomologyReportJson, PolyFieldJson};
use crate::report::{run_jobs, Report, SCHEMA_VERSION};
use crate::suite::{suite_plan, SuiteConfig};

#[derive(Debug, Parser)]
#[command(name = "prolong", version, about = "Exact verification of Killing-operator prolongations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write the JSON report here; the summary table then goes to stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank check of the key isomorphism.
    VerifyKey {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Cohomology of the prolongation complex against the predicted diagrams.
    Complex {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = DEFAULT_DIMENSION_CAP)]
        cap: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Lie algebra cohomology of the abelian nilradical with Dynkin labels.
    Kostant {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = DEFAULT_DIMENSION_CAP)]
        cap: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Polynomial Killing tensors of bounded degree.
    Killing {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: usize,
        /// Defaults to the valence.
        #[arg(long)]
        max_degree: Option<u32>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Solve `∇_(a X_b) = ω` or print the obstruction `N(ω)`.
    RangeCheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        input: PathBuf,
    },
    /// Run every acceptance check over ranges of `n` and `ℓ`.
    Suite {
        /// Inclusive range `a..b`, or a single value.
        #[arg(long, default_value = "2..3", value_parser = parse_range)]
        n: RangeInclusive<usize>,
        #[arg(long, default_value = "1..2", value_parser = parse_range)]
        ell: RangeInclusive<usize>,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        max_degree: u32,
        #[arg(long, default_value_t = DEFAULT_DIMENSION_CAP)]
        cap: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Include wall times in the JSON report.
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
}

pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected `a..b` or a single integer, got {s:?}");
    match s.split_once("..") {
        Some((a, b)) => {
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if a > b {
                return Err(format!("empty range {s:?}"));
            }
            Ok(a..=b)
        }
        None => {
            let a = s.trim().parse().map_err(|_| bad())?;
            Ok(a..=a)
        }
    }
}

/// Where the JSON and the table go.
struct Sink<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Sink<'_> {
    /// JSON to `path` (table to stdout) or JSON to stdout (table to stderr).
    fn emit(&mut self, path: Option<&Path>, json: &str, table: &str) -> Result<(), CliError> {
        match path {
            Some(p) => {
                std::fs::write(p, json).map_err(|err| CliError::Write { path: p.to_path_buf(), err })?;
                let _ = self.stdout.write_all(table.as_bytes());
            }
            None => {
                let _ = self.stdout.write_all(json.as_bytes());
                let _ = self.stderr.write_all(table.as_bytes());
            }
        }
        Ok(())
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn validate_n_ell(n: usize, ell: Option<usize>) -> Result<(), CliError> {
    if n < 2 {
        return Err(CliError::Usage(format!("--n must be at least 2, got {n}")));
    }
    if ell == Some(0) {
        return Err(CliError::Usage("--ell must be at least 1".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct VersionedCohomology {
    schema_version: u32,
    #[serde(flatten)]
    report: CohomologyReportJson,
}

fn cohomology_table(kind: &str, r: &CohomologyReport) -> String {
    let mut t = format!("{kind} cohomology, n={} ell={}\n p  computed  predicted  diagram  ok\n", r.n, r.ell);
    for e in &r.entries {
        let ok = if e.matches() { "PASS" } else { "FAIL" };
        t.push_str(&format!("{:>2}  {:>8}  {:>9}  {:?}  {ok}\n", e.p, e.computed, e.predicted, e.diagram));
    }
    t
}

fn cohomology_outcome(sink: &mut Sink, out: &OutputArgs, kind: &str, r: &CohomologyReport) -> Result<i32, CliError> {
    let json =
        pretty(&VersionedCohomology { schema_version: SCHEMA_VERSION, report: CohomologyReportJson::from_report(r) });
    sink.emit(out.output.as_deref(), &json, &cohomology_table(kind, r))?;
    let failing: Vec<String> = r.entries.iter().filter(|e| !e.matches()).map(|e| format!("H^{}", e.p)).collect();
    if failing.is_empty() {
        Ok(0)
    } else {
        let _ = writeln!(sink.stderr, "mismatch in {kind} cohomology: {}", failing.join(", "));
        Ok(1)
    }
}

#[derive(Serialize)]
struct KillingJson {
    schema_version: u32,
    n: usize,
    ell: usize,
    max_degree: u32,
    dim: usize,
    predicted_dim: u64,
    #[serde(rename = "match")]
    matches: bool,
    basis: Vec<PolyFieldJson>,
}

fn execute(cli: Cli, argv: &[String], sink: &mut Sink) -> Result<i32, CliError> {
    let cache = BasisCache::from_env();
    match cli.command {
        Command::VerifyKey { n, out } => {
            validate_n_ell(n, None)?;
            let report = Report::new(argv.to_vec(), vec![a1_key(n)], false);
            finish_report(sink, &out, &report)
        }
        Command::Complex { n, ell, cap, out } => {
            validate_n_ell(n, Some(ell))?;
            check_cap(&cochain_dims_predicted(n, ell), cap)?;
            let space = cache.prolongation_space(n, ell)?;
            let r = complex_cohomology_of(&space, cap)?;
            cohomology_outcome(sink, &out, "prolongation", &r)
        }
        Command::Kostant { n, ell, cap, out } => {
            validate_n_ell(n, Some(ell))?;
            check_cap(&cochain_dims_predicted(n, ell), cap)?;
            let rep = cache.representation(n, ell)?;
            let r = lie_algebra_cohomology_of(&rep, cap)?;
            cohomology_outcome(sink, &out, "Lie algebra", &r)
        }
        Command::Killing { n, ell, max_degree, out } => {
            validate_n_ell(n, Some(ell))?;
            let d = max_degree.unwrap_or(ell as u32);
            if d < ell as u32 || d > DEFAULT_DEGREE_CAP {
                return Err(CliError::Usage(format!("--max-degree must lie in {ell}..{DEFAULT_DEGREE_CAP}, got {d}")));
            }
            let k = killing_kernel(n, ell, d)?;
            let predicted = v_dimension(n, ell);
            let j = KillingJson {
                schema_version: SCHEMA_VERSION,
                n,
                ell,
                max_degree: d,
                dim: k.dim(),
                predicted_dim: predicted,
                matches: k.dim() as u64 == predicted,
                basis: k.basis.iter().map(PolyFieldJson::from_field).collect(),
            };
            let ok = if j.matches { "PASS" } else { "FAIL" };
            let table =
                format!("Killing tensors n={n} ell={ell} degree<={d}: dim {} (predicted {predicted}) {ok}\n", k.dim());
            sink.emit(out.output.as_deref(), &pretty(&j), &table)?;
            if j.matches {
                Ok(0)
            } else {
                let _ = writeln!(sink.stderr, "mismatch: Killing kernel dimension");
                Ok(1)
            }
        }
        Command::RangeCheck { n, input } => {
            validate_n_ell(n, None)?;
            let text = std::fs::read_to_string(&input).map_err(|err| CliError::Read { path: input.clone(), err })?;
            let source = input.display().to_string();
            let field: PolyFieldJson = parse_json(&source, &text)?;
            if field.n != n || field.arity != 2 {
                return Err(CliError::InvalidInput(
                    source,
                    format!("expected a symmetric 2-tensor field in n={n}, got n={} arity={}", field.n, field.arity),
                ));
            }
            let omega = field.to_field().map_err(|m| CliError::InvalidInput(source.clone(), m))?;
            if !omega.is_symmetric() {
                return Err(CliError::InvalidInput(source, "ω is not symmetric".into()));
            }
            let (kind, result) = match killing_potential_solve(&omega)? {
                RangeResult::Potential(x) => ("potential", x),
                RangeResult::Obstruction(nt) => ("obstruction", nt),
            };
            let _ = sink.stdout.write_all(pretty(&PolyFieldJson::from_field(&result)).as_bytes());
            let _ = writeln!(sink.stderr, "{kind}");
            Ok(0)
        }
        Command::Suite { n, ell, max_degree, cap, jobs, timings, out } => {
            let cfg = SuiteConfig {
                n_range: n,
                ell_range: ell,
                max_degree,
                dimension_cap: cap,
                jobs,
                ..SuiteConfig::default()
            };
            cfg.validate()?;
            let ctx = Context::new(cache, cap);
            let checks = run_jobs(&ctx, suite_plan(&cfg), cfg.jobs);
            finish_report(sink, &out, &Report::new(argv.to_vec(), checks, timings))
        }
    }
}

fn finish_report(sink: &mut Sink, out: &OutputArgs, report: &Report) -> Result<i32, CliError> {
    sink.emit(out.output.as_deref(), &report.to_json(), &report.table())?;
    if report.all_pass() {
        Ok(0)
    } else {
        let _ = writeln!(sink.stderr, "failing checks: {}", report.summary.failed.join(", "));
        Ok(1)
    }
}

/// Run with explicit streams; returns the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut sink = Sink { stdout, stderr };
    match execute(cli, &echo, &mut sink) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(sink.stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..3").unwrap(), 2..=3);
        assert_eq!(parse_range("2..=4").unwrap(), 2..=4);
        assert_eq!(parse_range("5").unwrap(), 5..=5);
        assert!(parse_range("3..2").is_err());
        assert!(parse_range("a..b").is_err());
    }
}
