use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;

use valnag_core::error::Severity;
use valnag_core::serde_json;
use valnag_core::parser::parse_scene;
use valnag_core::rat::parse_rat;
use valnag_core::report::{run_subcommand, to_json_string, RunFailure, RunOptions};
use valnag_core::zariski::TMax;

/// Exact invariants of plane divisorial valuations: chamber walks,
/// Newton-Okounkov polygons and Seshadri-type bounds.
#[derive(Parser, Debug)]
#[command(name = "valnag", version, about)]
struct Cli {
    /// One of: invariants, zariski, walk, nok, bounds, verdict, suite, threshold
    subcommand: String,

    /// Scene file (.valnag); omit when using --batch
    scene: Option<PathBuf>,

    /// Write the JSON report here instead of standard output
    #[arg(long)]
    json: Option<PathBuf>,

    /// Write an SVG rendering (nok subcommand only)
    #[arg(long)]
    svg: Option<PathBuf>,

    /// Segment parameter for the zariski subcommand, e.g. 3/2
    #[arg(long)]
    t: Option<String>,

    /// Walk bound: a rational or `auto`
    #[arg(long = "t-max")]
    t_max: Option<String>,

    /// Process every .valnag file in a directory; one JSON line per scene,
    /// in file-name order
    #[arg(long)]
    batch: Option<PathBuf>,
}

fn build_options(cli: &Cli) -> Result<RunOptions> {
    let t = match &cli.t {
        Some(text) => Some(parse_rat(text).context("invalid --t")?),
        None => None,
    };
    let t_max = match cli.t_max.as_deref() {
        None => None,
        Some("auto") => Some(TMax::Auto),
        Some(text) => Some(TMax::Value(parse_rat(text).context("invalid --t-max")?)),
    };
    Ok(RunOptions { t, t_max, want_svg: cli.svg.is_some() })
}

enum Outcome {
    Ok,
    UserError,
    InternalError,
}

fn report_failure(path: &Path, failure: &RunFailure) -> Outcome {
    match failure {
        RunFailure::Diagnostics(diags) => {
            for d in diags {
                eprintln!("{}: {}", path.display(), d);
            }
            if diags.iter().any(|d| d.severity == Severity::Error) {
                Outcome::UserError
            } else {
                Outcome::Ok
            }
        }
        RunFailure::Internal(msg) => {
            eprintln!("{}: internal inconsistency: {}", path.display(), msg);
            Outcome::InternalError
        }
    }
}

fn run_single(cli: &Cli, path: &Path) -> Result<Outcome> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let scene = match parse_scene(&text) {
        Ok(scene) => scene,
        Err(diags) => {
            for d in &diags {
                eprintln!("{}: {}", path.display(), d);
            }
            return Ok(Outcome::UserError);
        }
    };
    let opts = build_options(cli)?;
    match run_subcommand(&cli.subcommand, &scene, &opts) {
        Ok(output) => {
            let rendered = to_json_string(&output.json);
            match &cli.json {
                Some(dest) => std::fs::write(dest, rendered)
                    .with_context(|| format!("cannot write {}", dest.display()))?,
                None => print!("{rendered}"),
            }
            if let Some(dest) = &cli.svg {
                match output.svg {
                    Some(svg) => std::fs::write(dest, svg)
                        .with_context(|| format!("cannot write {}", dest.display()))?,
                    None => bail!("--svg applies to the nok subcommand only"),
                }
            }
            Ok(Outcome::Ok)
        }
        Err(failure) => Ok(report_failure(path, &failure)),
    }
}

fn run_batch(cli: &Cli, dir: &Path) -> Result<Outcome> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("cannot read directory {}", dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().map_or(false, |ext| ext == "valnag"))
        .collect();
    files.sort();
    if files.is_empty() {
        bail!("no .valnag files found in {}", dir.display());
    }
    let opts = build_options(cli)?;
    let subcommand = cli.subcommand.clone();
    // Scenes are independent; evaluate them in parallel and emit the
    // results through one writer in input order.
    let results: Vec<(PathBuf, Result<valnag_core::report::RunOutput, RunFailure>)> =
        std::thread::scope(|scope| {
            let handles: Vec<_> = files
                .iter()
                .map(|path| {
                    let subcommand = subcommand.as_str();
                    let opts = &opts;
                    scope.spawn(move || {
                        let text = std::fs::read_to_string(path).map_err(|e| {
                            RunFailure::Diagnostics(vec![valnag_core::Diagnostic::error(
                                e.to_string(),
                            )])
                        })?;
                        let scene = parse_scene(&text).map_err(RunFailure::Diagnostics)?;
                        run_subcommand(subcommand, &scene, opts)
                    })
                })
                .collect();
            files
                .iter()
                .cloned()
                .zip(handles.into_iter().map(|h| h.join().expect("worker panicked")))
                .collect()
        });
    let stdout = std::io::stdout();
    let mut writer = stdout.lock();
    let mut worst = Outcome::Ok;
    for (path, result) in results {
        match result {
            Ok(output) => {
                let mut line = output.json;
                if let Some(obj) = line.as_object_mut() {
                    obj.insert(
                        "file".into(),
                        serde_json_value_string(path.file_name().unwrap().to_string_lossy()),
                    );
                }
                writeln!(writer, "{line}")?;
            }
            Err(failure) => match (report_failure(&path, &failure), &worst) {
                (Outcome::InternalError, _) => worst = Outcome::InternalError,
                (Outcome::UserError, Outcome::Ok) => worst = Outcome::UserError,
                _ => {}
            },
        }
    }
    Ok(worst)
}

fn serde_json_value_string(s: impl Into<String>) -> serde_json::Value {
    serde_json::Value::String(s.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match (&cli.batch, &cli.scene) {
        (Some(dir), None) => run_batch(&cli, &dir.clone()),
        (None, Some(path)) => run_single(&cli, &path.clone()),
        (Some(_), Some(_)) => {
            eprintln!("error: give either a scene file or --batch, not both");
            return ExitCode::from(1);
        }
        (None, None) => {
            eprintln!("error: a scene file or --batch directory is required");
            return ExitCode::from(1);
        }
    };
    match outcome {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::UserError) => ExitCode::from(1),
        Ok(Outcome::InternalError) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
