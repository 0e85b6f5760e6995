use std::io::{self, Write};
use std::path::{Path, PathBuf};

use dirsparse::bounds::{
    helper_bound, theorem1_bound, theorem2_bound, theorem3_bound, BoundResult, KChoice,
    Theorem1Bound,
};
use dirsparse::experiments::proofs::{check_all, ProofGrids, ProofReport};
use dirsparse::experiments::{pair_index, run_experiment, ExperimentReport};
use dirsparse::samplers::{derive_stream, sample_dirichlet_log, DirichletSpec, StreamSeed};
use serde_json::json;

use crate::args::{BoundsArgs, ExperimentArgs, Format, ProofArgs, ReportFormat, SampleArgs, Which};
use crate::config_file;
use crate::error::CliError;
use crate::output::{create_dir, create_file, write_curves, write_trials, write_verdicts};

fn stdout_error(source: io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    }
}

pub fn sample(args: &SampleArgs) -> Result<(), CliError> {
    let alpha = args.alpha_mode.shape_for(args.n)?;
    let spec = DirichletSpec::new(args.n, alpha)?;
    if args.count > u32::MAX as u64 + 1 || args.n as u64 > u32::MAX as u64 {
        return Err(CliError::Usage("count and n must not exceed 2^32".into()));
    }
    let (mut out, path): (Box<dyn Write>, PathBuf) = match &args.out {
        Some(dir) => {
            create_dir(dir)?;
            let path = dir.join(format!("samples.{}", args.format.extension()));
            (Box::new(create_file(&path)?), path)
        }
        None => (
            Box::new(io::BufWriter::new(io::stdout().lock())),
            PathBuf::from("<stdout>"),
        ),
    };
    let io_err = |source| CliError::Io {
        path: path.clone(),
        source,
    };
    // point i uses the same stream as trial i of an experiment at this n
    let points = (0..args.count).map(|i| {
        let mut rng = derive_stream(StreamSeed::new(args.seed, pair_index(args.n, i)));
        sample_dirichlet_log(&mut rng, &spec)
    });
    match args.format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(&mut out);
            w.write_record((1..=args.n).map(|i| format!("ln_x{i}")))?;
            for p in points {
                w.serialize(p.log_coords())?;
            }
            w.flush().map_err(io_err)?;
        }
        Format::Json => {
            let coords: Vec<Vec<f64>> = points.map(|p| p.log_coords().to_vec()).collect();
            let doc = json!({
                "n": args.n,
                "alpha": alpha.get(),
                "seed": args.seed,
                "log_coords": coords,
            });
            serde_json::to_writer(&mut out, &doc)?;
            writeln!(out).map_err(io_err)?;
        }
    }
    out.flush().map_err(io_err)
}

fn required<T>(value: Option<T>, flag: &str, which: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("bounds {which} requires --{flag}")))
}

pub fn bounds(args: &BoundsArgs) -> Result<(), CliError> {
    let (name, result, mut extra) = match args.which {
        Which::Lemma4 => {
            let n = required(args.n, "n", "lemma4")?;
            let alpha = required(args.alpha, "alpha", "lemma4")?;
            let epsilon = required(args.epsilon, "epsilon", "lemma4")?;
            let k = required(args.k, "k", "lemma4")?;
            let r = helper_bound(epsilon, alpha, k, n)?;
            (
                format!("lemma4 (n = {n}, alpha = {alpha}, epsilon = {epsilon}, k = {k})"),
                r,
                vec![],
            )
        }
        Which::Theorem1 => {
            let n = required(args.n, "n", "theorem1")?;
            let Theorem1Bound {
                result,
                event,
                via_theorem2,
                closing_inequality_holds,
            } = theorem1_bound(n, args.c0)?;
            (
                format!("theorem1 (n = {n}, c0 = {}, k = {})", args.c0, event.k),
                result,
                vec![
                    ("via_theorem2", json!(via_theorem2.lower_bound)),
                    ("closing_inequality_holds", json!(closing_inequality_holds)),
                ],
            )
        }
        Which::Theorem2 => {
            let n = required(args.n, "n", "theorem2")?;
            let r = theorem2_bound(n, args.c1, args.c2, args.c3)?;
            (
                format!(
                    "theorem2 (n = {n}, c1 = {}, c2 = {}, c3 = {})",
                    args.c1, args.c2, args.c3
                ),
                r,
                vec![],
            )
        }
        Which::Theorem3 => {
            let (choice, n) = match args.ln_g {
                Some(ln_g) => (
                    KChoice::LnG(ln_g),
                    required(args.n, "n", "theorem3 --ln-g")?,
                ),
                // the k = 5 value does not depend on n
                None => (KChoice::Constant, args.n.unwrap_or(3)),
            };
            let r = theorem3_bound(n, choice)?;
            let label = match choice {
                KChoice::Constant => "theorem3 (k = 5)".to_string(),
                KChoice::LnG(ln_g) => format!("theorem3 (n = {n}, k = ln g = {ln_g})"),
            };
            (label, r, vec![("≥ 0.64", json!(r.lower_bound >= 0.64))])
        }
    };
    print_bound(args.format, &name, &result, &mut extra)?;
    if !result.preconditions_met {
        return Err(CliError::Precondition(format!(
            "{name} is outside its stated range"
        )));
    }
    Ok(())
}

fn print_bound(
    format: ReportFormat,
    name: &str,
    r: &BoundResult,
    extra: &mut Vec<(&str, serde_json::Value)>,
) -> Result<(), CliError> {
    let mut fields = vec![
        ("lower_bound", json!(r.lower_bound)),
        ("first_term", json!(r.terms.first_term)),
        ("second_term", json!(r.terms.second_term)),
        ("preconditions_met", json!(r.preconditions_met)),
        ("vacuous", json!(r.is_vacuous())),
    ];
    fields.append(extra);
    let mut out = io::stdout().lock();
    match format {
        ReportFormat::Text => {
            writeln!(out, "{name}").map_err(stdout_error)?;
            for (k, v) in fields {
                writeln!(out, "{k}: {v}").map_err(stdout_error)?;
            }
        }
        ReportFormat::Json => {
            let mut map = serde_json::Map::new();
            map.insert("bound".into(), json!(name));
            for (k, v) in fields {
                map.insert(k.into(), v);
            }
            writeln!(out, "{}", serde_json::Value::Object(map)).map_err(stdout_error)?;
        }
    }
    Ok(())
}

fn print_verdict_summary(report: &ExperimentReport) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    for v in &report.verdicts {
        writeln!(
            out,
            "{:<5} n = {:<5} {:<32} rate = {:<8} bound = {:<10.6} limits = [{:.6}, {:.6}]{}",
            if v.pass { "PASS" } else { "FAIL" },
            v.event.n,
            v.label,
            v.empirical_success_rate,
            v.theoretical_lower_bound,
            v.confidence_lower,
            v.confidence_upper,
            if v.rerun { " (rerun)" } else { "" }
        )
        .map_err(stdout_error)?;
    }
    for (n, label) in &report.skipped {
        writeln!(out, "SKIP  n = {n:<5} {label} (preconditions not met)").map_err(stdout_error)?;
    }
    let passed = report.verdicts.iter().filter(|v| v.pass).count();
    let demonstrated = report.verdicts.iter().filter(|v| v.demonstrated).count();
    writeln!(
        out,
        "{passed}/{} verdicts pass, {demonstrated} with the lower limit above the bound, {} skipped",
        report.verdicts.len(),
        report.skipped.len()
    )
    .map_err(stdout_error)?;
    Ok(())
}

fn verification_result(report: &ExperimentReport) -> Result<(), CliError> {
    let failed: Vec<String> = report
        .verdicts
        .iter()
        .filter(|v| !v.pass)
        .map(|v| format!("{} at n = {}", v.label, v.event.n))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed.join(", ")))
    }
}

pub fn verify(args: &ExperimentArgs) -> Result<(), CliError> {
    let config = config_file::resolve(args)?;
    let report = run_experiment(&config)?;
    print_verdict_summary(&report)?;
    if let Some(dir) = &args.out {
        create_dir(dir)?;
        write_verdicts(dir, args.format, config.alpha_mode, &report.verdicts)?;
    }
    verification_result(&report)
}

pub fn reproduce_figure(args: &ExperimentArgs) -> Result<(), CliError> {
    let config = config_file::resolve(args)?;
    let report = run_experiment(&config)?;
    let dir = args.out.as_deref().unwrap_or(Path::new("."));
    create_dir(dir)?;
    let written = [
        write_trials(dir, args.format, config.alpha_mode, &report.records)?,
        write_curves(dir, args.format, config.alpha_mode, &report.curves)?,
        write_verdicts(dir, args.format, config.alpha_mode, &report.verdicts)?,
    ];

    let mut out = io::stdout().lock();
    writeln!(
        out,
        "alpha_mode = {}, {} dimensions, {} trials each, seed {}",
        config.alpha_mode,
        config.n_grid.len(),
        config.trials,
        config.master_seed
    )
    .map_err(stdout_error)?;
    let unit = if report.curves.first().is_some_and(|c| c.scaled_by_log_n) {
        "count / ln n"
    } else {
        "count"
    };
    writeln!(
        out,
        "{:>6} {:>4} {:>10} {:>10} {:>10}  ({unit})",
        "n", "c", "q25", "q50", "q75"
    )
    .map_err(stdout_error)?;
    for c in &report.curves {
        writeln!(
            out,
            "{:>6} {:>4} {:>10.4} {:>10.4} {:>10.4}",
            c.n, c.threshold_exponent, c.q25, c.q50, c.q75
        )
        .map_err(stdout_error)?;
    }
    drop(out);
    print_verdict_summary(&report)?;
    let mut out = io::stdout().lock();
    for path in written {
        writeln!(out, "wrote {}", path.display()).map_err(stdout_error)?;
    }
    drop(out);
    verification_result(&report)
}

fn print_proof_summary(report: &ProofReport) -> io::Result<()> {
    let verdict = |ok: bool| if ok { "ok" } else { "VIOLATED" };
    let mut out = io::stdout().lock();
    let b = &report.blowup;
    let z_one: Vec<_> = b.points.iter().filter(|p| p.z == 1.0).collect();
    writeln!(
        out,
        "gamma blowup: {} points, max violation {:e} at alpha = {}, z = {}, c = {}: {}",
        b.points.len(),
        b.max_violation(),
        b.worst.alpha,
        b.worst.z,
        b.worst.c,
        verdict(report.blowup_ok())
    )?;
    writeln!(
        out,
        "  z = 1 rows: {}, of which exactly zero: {}",
        z_one.len(),
        z_one.iter().filter(|p| p.violation == 0.0).count()
    )?;
    if let Some(worst) = report
        .thresholds
        .iter()
        .max_by(|a, b| a.max_violation().total_cmp(&b.max_violation()))
    {
        writeln!(
            out,
            "threshold construction: {} cases, max violation {:e} at alpha = {}, k = {}, n = {}, epsilon = {}: {}",
            report.thresholds.len(),
            worst.max_violation(),
            worst.alpha,
            worst.k,
            worst.n,
            worst.epsilon,
            verdict(report.thresholds_ok())
        )?;
    }
    for c in &report.chernoff {
        writeln!(
            out,
            "chernoff n = {}, p = {}: Pr[Bin >= {}] = {:e} vs bound {:e}, simulated {} in [{:e}, {:e}]",
            c.n, c.p, c.threshold, c.exact_tail, c.bound, c.empirical_frequency, c.confidence_interval.0, c.confidence_interval.1
        )?;
    }
    let g = &report.tail_grid;
    writeln!(
        out,
        "chernoff tail grid: {} cases, max ln(exact / bound) = {} at n = {}, k = {}",
        g.cases, g.max_ln_ratio, g.worst_n, g.worst_k
    )?;
    writeln!(out, "chernoff step: {}", verdict(report.chernoff_ok()))?;
    writeln!(
        out,
        "slack = {:e}: {}",
        report.slack,
        if report.all_ok() {
            "all checks hold"
        } else {
            "FAILED"
        }
    )
}

pub fn check_proofs(args: &ProofArgs) -> Result<(), CliError> {
    let grids = ProofGrids {
        chernoff_seed: args.seed,
        ..ProofGrids::default()
    };
    let report = check_all(&grids, args.slack)?;
    match args.format {
        ReportFormat::Text => print_proof_summary(&report).map_err(stdout_error)?,
        ReportFormat::Json => {
            let mut out = io::stdout().lock();
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out).map_err(stdout_error)?;
        }
    }
    if report.all_ok() {
        Ok(())
    } else {
        Err(CliError::Verification(
            "a proof-step inequality exceeds the slack".into(),
        ))
    }
}
