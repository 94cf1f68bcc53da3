use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::path::{Path, PathBuf};
use std::time::Instant;

use sbc_core::analysis::{
    consolidate_max, export_csv, quality_band, read_results_csv, render_chart, summary_stats, GroupStats,
};
use sbc_core::{score_pair, EvaluationResult, HashEmbedder, Layer, SbcBreakdown, SbcWeights, ScoreError};
use sbc_harness::{load_dataset, load_results, persist_results, Evaluator, RunConfig};

use crate::args::{Command, Format, ReportArgs, ResultsArgs, ResumeArgs, RunArgs, ScoreArgs, ValidateArgs};
use crate::error::CliError;

/// Dimension of the offline embedding used when `score` has no config.
const FALLBACK_DIMENSION: usize = 256;

pub fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Score(a) => score(a),
        Command::Run(a) => run(a),
        Command::Resume(a) => resume(a),
        Command::Consolidate(a) => consolidate(a),
        Command::Report(a) => report(a),
        Command::Chart(a) => chart(a),
        Command::ValidateDataset(a) => validate_dataset(a),
    }
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Reads `arg` as a file if one exists at that path, otherwise returns it.
fn text_or_file(arg: &str) -> Result<String, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        fs::read_to_string(path).map_err(|e| io_error(path, e))
    } else {
        Ok(arg.to_string())
    }
}

fn write_output(path: &Path, contents: &str) -> Result<(), CliError> {
    ensure_parent(path)?;
    fs::write(path, contents).map_err(|e| io_error(path, e))
}

fn ensure_parent(path: &Path) -> Result<(), CliError> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => fs::create_dir_all(dir).map_err(|e| io_error(dir, e)),
        _ => Ok(()),
    }
}

fn score(args: ScoreArgs) -> Result<(), CliError> {
    let original = text_or_file(&args.original)?;
    let breakdown = match (&args.reversed, &args.code, &args.config) {
        (Some(reversed), _, Some(config)) => {
            let reversed = text_or_file(reversed)?;
            let evaluator = Evaluator::from_config(&RunConfig::load(config)?)?;
            evaluator.score_texts(&original, &reversed).map_err(|e| match e {
                ScoreError::Embedding(e) => CliError::Provider(e.to_string()),
                ScoreError::Metric(e) => CliError::Io(e.to_string()),
            })?
        }
        (Some(reversed), _, None) => {
            eprintln!("note: no --config given; using the offline hash embedding (dimension {FALLBACK_DIMENSION})");
            let reversed = text_or_file(reversed)?;
            let embedder = HashEmbedder::new(FALLBACK_DIMENSION).expect("fallback dimension is valid");
            score_pair(&original, &reversed, &embedder, &SbcWeights::default())
                .map_err(|e| CliError::Io(e.to_string()))?
        }
        (None, Some(code), Some(config)) => {
            let code = fs::read_to_string(code).map_err(|e| io_error(code, e))?;
            let evaluator = Evaluator::from_config(&RunConfig::load(config)?)?;
            let result = evaluator.evaluate_pair(&original, &code, args.provider.as_deref())?;
            if let Some(error) = result.error {
                return Err(CliError::Provider(error));
            }
            eprintln!("reverse-generated ({}): {}", result.model, result.reverse_generated_requirements);
            breakdown_of(result)
        }
        _ => return Err(CliError::Usage("either --reversed, or --code with --config, is required".into())),
    };
    match args.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&breakdown).expect("breakdown serializes")),
        Format::Text => print!("{}", breakdown_text(&breakdown)),
    }
    Ok(())
}

fn breakdown_of(result: EvaluationResult) -> SbcBreakdown {
    SbcBreakdown {
        semantic_similarity: result.semantic_similarity.unwrap_or_default(),
        bleu_score: result.bleu_score.unwrap_or_default(),
        completeness_score: result.completeness_score.unwrap_or_default(),
        final_accuracy_score: result.final_accuracy_score.unwrap_or_default(),
        missing_elements: result.missing_elements.into_iter().collect(),
        extra_elements: result.extra_elements.into_iter().collect(),
    }
}

fn breakdown_text(b: &SbcBreakdown) -> String {
    let list = |set: &std::collections::BTreeSet<String>| {
        if set.is_empty() {
            "-".to_string()
        } else {
            set.iter().cloned().collect::<Vec<_>>().join(", ")
        }
    };
    let band = quality_band(b.final_accuracy_score).map(|q| q.to_string()).unwrap_or_else(|e| e.to_string());
    let mut out = String::new();
    for (label, value) in [
        ("final_accuracy_score", format!("{:.6}", b.final_accuracy_score)),
        ("quality_band", band),
        ("semantic_similarity", format!("{:.6}", b.semantic_similarity)),
        ("BLEU_score", format!("{:.6}", b.bleu_score)),
        ("completeness_score", format!("{:.6}", b.completeness_score)),
        ("missing_elements", list(&b.missing_elements)),
        ("extra_elements", list(&b.extra_elements)),
    ] {
        let _ = writeln!(out, "{label:<22}{value}");
    }
    out
}

fn output_path(out: Option<PathBuf>, config: &RunConfig) -> Result<PathBuf, CliError> {
    out.or_else(|| config.output_path.clone())
        .ok_or_else(|| CliError::Usage("no --out given and the config has no output_path".into()))
}

fn run(args: RunArgs) -> Result<(), CliError> {
    let config = RunConfig::load(&args.config)?;
    let out = output_path(args.out, &config)?;
    let dataset = load_dataset(&args.dataset)?;
    let started = Instant::now();
    let results = Evaluator::from_config(&config)?.run(&dataset)?;
    ensure_parent(&out)?;
    persist_results(&results, &out)?;
    println!("{}", summary_line(&results, &out, started));
    Ok(())
}

fn resume(args: ResumeArgs) -> Result<(), CliError> {
    let config = RunConfig::load(&args.config)?;
    let out = args.out.unwrap_or_else(|| args.existing.clone());
    let dataset = load_dataset(&args.dataset)?;
    let existing = load_results(&args.existing)?;
    let before = existing.len();
    let started = Instant::now();
    let results = Evaluator::from_config(&config)?.resume(&dataset, existing)?;
    ensure_parent(&out)?;
    persist_results(&results, &out)?;
    println!("{} new records; {}", results.len() - before, summary_line(&results, &out, started));
    Ok(())
}

fn summary_line(results: &[EvaluationResult], out: &Path, started: Instant) -> String {
    let errors = results.iter().filter(|r| r.is_error()).count();
    format!(
        "wrote {} records ({errors} errors) to {} in {:.2}s",
        results.len(),
        out.display(),
        started.elapsed().as_secs_f64()
    )
}

fn read_all_results(paths: &[PathBuf]) -> Result<Vec<EvaluationResult>, CliError> {
    let mut all = Vec::new();
    for path in paths {
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
            let file = File::open(path).map_err(|e| io_error(path, e))?;
            all.extend(read_results_csv(file).map_err(|e| io_error(path, e))?);
        } else {
            all.extend(load_results(path)?);
        }
    }
    Ok(all)
}

fn consolidate(args: ResultsArgs) -> Result<(), CliError> {
    let rows = consolidate_max(&read_all_results(&args.results)?);
    ensure_parent(&args.out)?;
    export_csv(rows.as_slice(), &args.out)?;
    println!("wrote {} questions to {}", rows.len(), args.out.display());
    Ok(())
}

fn chart(args: ResultsArgs) -> Result<(), CliError> {
    let rows = consolidate_max(&read_all_results(&args.results)?);
    let svg = render_chart(&rows)?;
    write_output(&args.out, &svg)?;
    println!("wrote chart of {} questions to {}", rows.len(), args.out.display());
    Ok(())
}

fn report(args: ReportArgs) -> Result<(), CliError> {
    let results = read_all_results(&args.results)?;
    let layers: BTreeMap<u64, Layer> = match &args.dataset {
        Some(path) => load_dataset(path)?.into_iter().map(|r| (r.id, r.layer)).collect(),
        None => BTreeMap::new(),
    };
    let stats = summary_stats(&results, &layers)?;
    let errors = results.iter().filter(|r| r.is_error()).count();
    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&stats).expect("stats serialize") + "\n",
        Format::Text => report_text(&stats, results.len(), errors),
    };
    match &args.out {
        Some(path) => write_output(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report_text(stats: &[GroupStats], total: usize, errors: usize) -> String {
    let width = stats.iter().map(|s| s.model.len()).chain(["model".len()]).max().unwrap_or(5);
    let mut out = String::new();
    let _ = writeln!(out, "{total} records, {errors} errors (excluded)");
    let _ = writeln!(out, "bands: LOW < 0.55 <= INTERPRETABLE < 0.65 <= SEMANTICALLY_ALIGNED");
    let _ = writeln!(
        out,
        "{:<width$}  {:<5}  {:>5}  {:>8}  {:>8}  {:>5}  {:>13}  {:>7}",
        "model", "layer", "n", "mean", "sd", "low", "interpretable", "aligned"
    );
    for s in stats {
        let layer = s.layer.map_or("-", Layer::as_str);
        let _ = writeln!(
            out,
            "{:<width$}  {:<5}  {:>5}  {:>8.4}  {:>8.4}  {:>5}  {:>13}  {:>7}",
            s.model,
            layer,
            s.count,
            s.mean,
            s.std_dev,
            s.bands.low,
            s.bands.interpretable,
            s.bands.semantically_aligned
        );
    }
    out
}

fn validate_dataset(args: ValidateArgs) -> Result<(), CliError> {
    let records = load_dataset(&args.dataset)?;
    let mut per_layer: BTreeMap<Layer, usize> = BTreeMap::new();
    for r in &records {
        *per_layer.entry(r.layer).or_default() += 1;
    }
    let layers: Vec<String> = per_layer.iter().map(|(l, n)| format!("{l} {n}")).collect();
    println!("{}: {} records ({})", args.dataset.display(), records.len(), layers.join(", "));
    Ok(())
}
