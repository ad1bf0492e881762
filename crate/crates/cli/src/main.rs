use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;

use cdimpact::builtin::NamingConvention;
use cdimpact::checklist::RenderMode;
use cdimpact::engine::{Filters, UnresolvedPolicy};
use cdimpact::model::serialize_model;
use cdimpact::pipeline::{run, RunConfig, RunError};
use cdimpact::rules::Severity;
use cdimpact::synth::generate_synthetic;

/// Diff two class-diagram models and turn the differences into a checklist
/// of follow-up development steps.
#[derive(Debug, Parser)]
#[command(name = "cdimpact", version)]
struct Cli {
    /// Old model version (.cd).
    #[arg(long, required_unless_present = "gen_synthetic")]
    old: Option<PathBuf>,
    /// New model version (.cd).
    #[arg(long, required_unless_present = "gen_synthetic")]
    new: Option<PathBuf>,
    /// Presettings correcting the matching (.ups).
    #[arg(long)]
    presettings: Option<PathBuf>,
    /// Rule file (.ir); repeat to concatenate in order.
    #[arg(long)]
    rules: Vec<PathBuf>,
    /// Extension declarations (.irx); repeatable.
    #[arg(long)]
    extensions: Vec<PathBuf>,
    /// Evaluate the shipped rule pack before any --rules files.
    #[arg(long)]
    builtin_rules: bool,
    #[arg(long, default_value = "short", value_parser = parse_mode)]
    mode: RenderMode,
    /// Checklist destination; stdout when absent. With --gen-synthetic, the
    /// output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Structured checklist export.
    #[arg(long)]
    json_out: Option<PathBuf>,
    /// Difference export; JSON when the name ends in .json, records otherwise.
    #[arg(long)]
    diff_out: Option<PathBuf>,
    #[arg(long, default_value = "flag", value_parser = parse_policy)]
    unresolved: UnresolvedPolicy,
    /// Similarity threshold in (0, 1].
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long, default_value = "upper_snake", value_parser = parse_naming)]
    naming: NamingConvention,
    #[arg(long)]
    orm_file: Option<PathBuf>,
    #[arg(long)]
    property_file: Option<PathBuf>,
    /// Source tree to scan for SQL identifiers.
    #[arg(long)]
    sources: Option<PathBuf>,
    /// Keep only rules whose relevantFor lists this tag.
    #[arg(long)]
    relevant_for: Option<String>,
    #[arg(long, value_parser = parse_severity)]
    min_severity: Option<Severity>,
    /// Write a synthetic model pair and its manifest: CLASSES,EDITS,SEED.
    #[arg(long, value_name = "N,E,SEED", value_parser = parse_synthetic)]
    gen_synthetic: Option<(usize, usize, u64)>,
}

fn parse_mode(s: &str) -> Result<RenderMode, String> {
    s.parse()
}

fn parse_policy(s: &str) -> Result<UnresolvedPolicy, String> {
    s.parse()
}

fn parse_naming(s: &str) -> Result<NamingConvention, String> {
    s.parse().map_err(|_| format!("unknown naming `{s}` (expected upper_snake, as_is or lower_snake)"))
}

fn parse_severity(s: &str) -> Result<Severity, String> {
    s.parse().map_err(|_| format!("unknown severity `{s}` (expected minor, normal or critical)"))
}

fn parse_synthetic(s: &str) -> Result<(usize, usize, u64), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [n, e, seed] = parts[..] else {
        return Err("expected CLASSES,EDITS,SEED".into());
    };
    let n: usize = n.parse().map_err(|_| format!("bad class count `{n}`"))?;
    let e: usize = e.parse().map_err(|_| format!("bad edit count `{e}`"))?;
    let seed: u64 = seed.parse().map_err(|_| format!("bad seed `{seed}`"))?;
    if n == 0 {
        return Err("class count must be positive".into());
    }
    Ok((n, e, seed))
}

fn gen_synthetic(dir: &Path, (classes, edits, seed): (usize, usize, u64)) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let s = generate_synthetic(classes, edits, seed);
    for (name, text) in [
        ("old.cd", serialize_model(&s.old)),
        ("new.cd", serialize_model(&s.new)),
        ("manifest.json", s.manifest_json()),
    ] {
        let p = dir.join(name);
        fs::write(&p, text).with_context(|| format!("cannot write {}", p.display()))?;
    }
    eprintln!(
        "wrote {} classes, {} edits, {} expected differences to {}",
        s.old.class_count(),
        s.script.len(),
        s.manifest.len(),
        dir.display()
    );
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    if let Some(spec) = cli.gen_synthetic {
        return gen_synthetic(cli.out.as_deref().unwrap_or(Path::new(".")), spec);
    }
    let (Some(old), Some(new)) = (cli.old, cli.new) else {
        bail!("--old and --new are required");
    };
    let cfg = RunConfig {
        presettings: cli.presettings,
        rules: cli.rules,
        builtin_rules: cli.builtin_rules,
        extensions: cli.extensions,
        mode: cli.mode,
        filters: Filters {
            relevant_for: cli.relevant_for,
            min_severity: cli.min_severity,
        },
        policy: cli.unresolved,
        threshold: cli.threshold,
        naming: cli.naming,
        orm_file: cli.orm_file,
        property_file: cli.property_file,
        sources: cli.sources,
        out: cli.out,
        json_out: cli.json_out,
        diff_out: cli.diff_out,
        ..RunConfig::new(old, new)
    };
    let out = run(&cfg)?;
    for w in &out.warnings {
        eprintln!("{w}");
    }
    if cfg.out.is_none() {
        print!("{}", out.text);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are input errors; 2 is reserved for unresolved names
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<RunError>().map_or(1, RunError::exit_code);
            ExitCode::from(code as u8)
        }
    }
}
