mod config;
mod error;
mod output;
mod verify;

use clap::{Parser, Subcommand};
use config::{Format, MethodArg, RunArgs, RunConfig};
use dpgap::family::{FamilyName, LatticeKind};
use dpgap::painleve::painleve_route;
use dpgap::table::{compute_adaptive, Converged, Method};
use dpgap::{BigFloat, Real};
use error::CliError;
use serde::Serialize;
use std::io::Write;
use std::process::ExitCode;

type B = BigFloat;

/// Gap probabilities of discrete orthogonal polynomial ensembles.
#[derive(Debug, Parser)]
#[command(name = "dpgap", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate D_s and its density by one or all methods.
    Compute(RunArgs),
    /// Check the recurrence invariants and the agreement of the methods step by step.
    Verify(RunArgs),
    /// Print the supported families.
    ListFamilies {
        #[arg(long)]
        json: bool,
    },
}

/// An error together with what was being run when it happened.
struct Failure {
    err: CliError,
    family: Option<&'static str>,
    method: Option<&'static str>,
}

impl From<CliError> for Failure {
    fn from(err: CliError) -> Self {
        Failure {
            err,
            family: None,
            method: None,
        }
    }
}

impl Failure {
    fn report(&self) -> String {
        let mut ctx = Vec::new();
        if let Some(f) = self.family {
            ctx.push(format!("family={f}"));
        }
        if let Some(m) = self.method {
            ctx.push(format!("method={m}"));
        }
        if let Some(s) = self.err.step() {
            ctx.push(format!("step={s}"));
        }
        if ctx.is_empty() {
            format!("error: {}", self.err)
        } else {
            format!("error: {}: {}", ctx.join(" "), self.err)
        }
    }
}

fn lattice_name(k: LatticeKind) -> &'static str {
    match k {
        LatticeKind::Linear => "x",
        LatticeKind::QGeometricDecreasing => "q^x",
        LatticeKind::QGeometricIncreasing => "q^-x",
    }
}

#[derive(Serialize)]
struct FamilyEntry {
    key: &'static str,
    title: &'static str,
    params: &'static [&'static str],
    lattice: &'static str,
    finite: bool,
    recurrence: bool,
    painleve: Option<&'static str>,
}

fn list_families(json: bool) -> Result<(), Failure> {
    let entries: Vec<FamilyEntry> = FamilyName::ALL
        .iter()
        .map(|f| FamilyEntry {
            key: f.key(),
            title: f.title(),
            params: f.param_names(),
            lattice: lattice_name(f.lattice_kind()),
            finite: f.is_finite(),
            recurrence: f.supports_linear_recurrence(),
            painleve: painleve_route(*f).map(|r| r.name()),
        })
        .collect();
    let mut out = std::io::stdout().lock();
    let res = if json {
        serde_json::to_writer_pretty(&mut out, &entries)
            .map_err(std::io::Error::from)
            .and_then(|_| writeln!(out))
    } else {
        let mut r = writeln!(
            out,
            "{:<24} {:<20} {:<7} {:<10} {:<8}",
            "family", "params", "lattice", "recurrence", "painleve"
        );
        for e in &entries {
            r = r.and_then(|_| {
                writeln!(
                    out,
                    "{:<24} {:<20} {:<7} {:<10} {:<8}",
                    e.key,
                    e.params.join(","),
                    e.lattice,
                    if e.recurrence { "yes" } else { "no" },
                    e.painleve.unwrap_or("-")
                )
            });
        }
        r
    };
    res.map_err(|source| {
        CliError::Io {
            path: "<stdout>".into(),
            source,
        }
        .into()
    })
}

/// Methods to run; `all` drops the ones the family has no route for.
fn methods_for(cfg: &RunConfig) -> Vec<Method> {
    let f = cfg.spec.family;
    match cfg.method {
        MethodArg::All => Method::ALL
            .into_iter()
            .filter(|m| match m {
                Method::Oracle => true,
                Method::General => f.supports_linear_recurrence(),
                Method::Painleve => painleve_route(f).is_some(),
            })
            .collect(),
        m => m.methods(),
    }
}

fn run_methods(cfg: &RunConfig, methods: &[Method]) -> Result<Vec<(Method, Converged<B>)>, Failure> {
    let family = cfg.spec.family.key();
    let results: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = methods
            .iter()
            .map(|&m| (m, scope.spawn(move || compute_adaptive::<B>(&cfg.spec, m))))
            .collect();
        handles
            .into_iter()
            .map(|(m, h)| (m, h.join().expect("worker panicked")))
            .collect()
    });
    results
        .into_iter()
        .map(|(m, r)| {
            r.map(|c| (m, c)).map_err(|e| Failure {
                err: e.into(),
                family: Some(family),
                method: Some(m.name()),
            })
        })
        .collect()
}

/// Largest pairwise relative difference, failing past `tol`.
fn check_agreement(runs: &[(Method, Converged<B>)], k: usize, tol: f64) -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for (i, (ma, a)) in runs.iter().enumerate() {
        for (mb, b) in &runs[i + 1..] {
            for (j, (x, y)) in a.values.iter().zip(&b.values).enumerate() {
                let d = B::rel_diff(x, y).to_f64_lossy();
                if d.is_nan() || d > tol {
                    return Err(CliError::Disagreement {
                        first: ma.name(),
                        second: mb.name(),
                        s: k + j,
                        diff: d,
                        tol,
                    });
                }
                worst = worst.max(d);
            }
        }
    }
    Ok(worst)
}

fn compute(args: &RunArgs) -> Result<(), Failure> {
    let cfg = args.resolve()?;
    let family = cfg.spec.family.key();
    let methods = methods_for(&cfg);
    let runs = run_methods(&cfg, &methods)?;
    let with_ctx = |err: CliError| Failure {
        err,
        family: Some(family),
        method: None,
    };

    let mut log = std::io::stderr().lock();
    for (m, c) in &runs {
        let _ = writeln!(
            log,
            "{}: {} at {} bits (discrepancy {:.3e})",
            m.name(),
            if cfg.spec.adaptive { "converged" } else { "computed" },
            c.precision,
            c.discrepancy
        );
    }
    if runs.len() > 1 {
        let worst = check_agreement(&runs, cfg.spec.k, cfg.spec.tol).map_err(with_ctx)?;
        let _ = writeln!(log, "methods agree: max relative difference {worst:.3e}");
    }
    if cfg.method == MethodArg::All && methods.len() < Method::ALL.len() {
        let _ = writeln!(log, "{family}: oracle only; no recurrence route for this family");
    }

    let rows = runs
        .iter()
        .map(|(m, c)| output::rows_from(&cfg.spec, *m, c))
        .collect::<Result<Vec<_>, _>>()
        .map_err(with_ctx)?;
    let doc = output::Document {
        family,
        params: cfg.spec.params.clone(),
        k: cfg.spec.k,
        s_max: cfg.spec.s_max,
        precision: cfg.spec.precision,
        runs: rows,
    };
    let emit = |w: &mut dyn Write| match cfg.format {
        Format::Csv => output::write_csv(w, &doc.runs),
        Format::Json => output::write_json(w, &doc),
    };
    match &cfg.out {
        None => emit(&mut std::io::stdout().lock()).map_err(with_ctx)?,
        Some(path) => {
            let io = |source| CliError::Io {
                path: path.clone(),
                source,
            };
            let mut file = std::fs::File::create(path).map_err(io).map_err(with_ctx)?;
            emit(&mut file).map_err(with_ctx)?;
            if cfg.format == Format::Csv {
                let script = path.with_extension("gp");
                let text = output::gnuplot_script(path, &cfg.spec, &doc.runs);
                std::fs::write(&script, text)
                    .map_err(|source| CliError::Io {
                        path: script.clone(),
                        source,
                    })
                    .map_err(with_ctx)?;
                let _ = writeln!(log, "wrote {} and {}", path.display(), script.display());
            } else {
                let _ = writeln!(log, "wrote {}", path.display());
            }
        }
    }
    Ok(())
}

fn verify_cmd(args: &RunArgs) -> Result<(), Failure> {
    let cfg = args.resolve()?;
    let family = cfg.spec.family.key();
    let report = verify::verify(&cfg).map_err(|err| Failure {
        err,
        family: Some(family),
        method: None,
    })?;
    let params: Vec<String> = cfg.spec.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let header = format!(
        "verify {family} {} k={} smax={} precision={} bits",
        params.join(" "),
        cfg.spec.k,
        cfg.spec.s_max,
        cfg.spec.precision
    );
    print!("{}", report.render(&header));
    if report.passed() {
        Ok(())
    } else {
        Err(Failure {
            err: CliError::VerifyFailed,
            family: Some(family),
            method: None,
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let res = match &cli.cmd {
        Command::Compute(a) => compute(a),
        Command::Verify(a) => verify_cmd(a),
        Command::ListFamilies { json } => list_families(*json),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.report());
            ExitCode::from(f.err.exit_code())
        }
    }
}
