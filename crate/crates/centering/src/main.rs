use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use centering::analysis::{
    chi_square_2x2, evaluate_gold, tabulate_disambiguation, tabulate_transitions, Outcome,
};
use centering::report::{serialize_reports, Format};
use centering::{analyze_corpus, load_corpus, load_valid_corpus, LoadError};
use centering_core::{validate_discourse, Discourse, DiscourseReport, EngineConfig};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "centering",
    version,
    about = "Centering analysis of annotated discourse corpora"
)]
struct Cli {
    /// Maximum number of parallel readings kept per utterance.
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    beam: u32,
    /// Disable Zero Topic Assignment.
    #[arg(long, global = true)]
    no_zta: bool,
    /// Disable retrieval from the list of former Cbs.
    #[arg(long, global = true)]
    no_global: bool,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Per-utterance trace.
    Analyze {
        file: PathBuf,
        /// List every expanded reading, not only the preferred one.
        #[arg(long)]
        all: bool,
    },
    /// Transition and cue tables with the χ² statistic.
    Stats {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Antecedent of every zero.
    Resolve { file: PathBuf },
    /// Check a corpus file.
    Validate { file: PathBuf },
    /// Compare resolutions with gold annotations.
    Eval { file: PathBuf },
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let mut out = String::new();
    let result = run(&cli, &mut out);
    let _ = std::io::stdout().write_all(out.as_bytes());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, out: &mut String) -> Result<(), Failure> {
    let cfg = EngineConfig {
        beam: cli.beam as usize,
        zta: !cli.no_zta,
        global: !cli.no_global,
    };
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Machine => Format::Machine,
    };
    let analyse = |corpus: &[Discourse]| -> Result<Vec<DiscourseReport>, Failure> {
        analyze_corpus(corpus, &cfg).map_err(|e| Failure::Internal(e.to_string()))
    };
    match &cli.command {
        Command::Validate { file } => validate(file, format, out),
        Command::Analyze { file, all } => {
            let corpus = load_valid_corpus(file)?;
            let reports = analyse(&corpus)?;
            let pairs: Vec<_> = corpus.iter().zip(&reports).collect();
            out.push_str(&serialize_reports(&pairs, format, *all));
            Ok(())
        }
        Command::Resolve { file } => {
            let corpus = load_valid_corpus(file)?;
            let reports = analyse(&corpus)?;
            resolve(&corpus, &reports, format, out);
            Ok(())
        }
        Command::Eval { file } => {
            let corpus = load_valid_corpus(file)?;
            let reports = analyse(&corpus)?;
            let summary = evaluate_gold(&reports, &corpus);
            match format {
                Format::Text => {
                    for z in summary
                        .zeros
                        .iter()
                        .filter(|z| z.outcome != Outcome::Correct)
                    {
                        out.push_str(&format!(
                            "{}\t{}\t{}\t{}\n",
                            z.discourse,
                            z.utterance,
                            z.expression,
                            z.outcome.tag()
                        ));
                    }
                    out.push_str(&summary.to_string());
                    out.push('\n');
                }
                Format::Machine => {
                    for z in &summary.zeros {
                        push_json(
                            out,
                            json!({
                                "record": "zero",
                                "discourse": z.discourse,
                                "index": z.utterance,
                                "expression": z.expression,
                                "transition": z.transition.tag(),
                                "outcome": z.outcome.tag(),
                            }),
                        );
                    }
                    push_json(
                        out,
                        json!({
                            "record": "summary",
                            "zeros": summary.zeros.len(),
                            "correct": summary.count(Outcome::Correct),
                            "incorrect": summary.count(Outcome::Incorrect),
                            "unresolved": summary.count(Outcome::Unresolved),
                            "accuracy": summary.accuracy(),
                        }),
                    );
                }
            }
            Ok(())
        }
        Command::Stats { files } => {
            let mut corpus = Vec::new();
            for f in files {
                corpus.extend(load_valid_corpus(f)?);
            }
            let reports = analyse(&corpus)?;
            let table = tabulate_transitions(&reports);
            let cues = tabulate_disambiguation(&reports);
            let (a, b, c, d) = table.continue_split();
            let chi = chi_square_2x2(a as u64, b as u64, c as u64, d as u64);
            match format {
                Format::Text => {
                    out.push_str(&format!(
                        "utterances (excluding discourse-initial) {}\n\n",
                        table.total()
                    ));
                    out.push_str(&table.to_string());
                    out.push_str("\n\n");
                    match chi {
                        Some(x) => out.push_str(&format!(
                            "chi-square (CONTINUE vs other, zero vs none) = {x:.3}\n\n"
                        )),
                        None => out
                            .push_str("chi-square (CONTINUE vs other, zero vs none) undefined\n\n"),
                    }
                    out.push_str(&cues.to_string());
                    out.push('\n');
                }
                Format::Machine => {
                    push_json(
                        out,
                        json!({"record": "transitions", "with_zero": table.counts[0], "without_zero": table.counts[1]}),
                    );
                    push_json(
                        out,
                        json!({"record": "chi_square", "cells": [a, b, c, d], "value": chi}),
                    );
                    push_json(
                        out,
                        json!({
                            "record": "cues",
                            "lexical": cues.lexical,
                            "tense": cues.tense,
                            "agreement": cues.agreement,
                            "cases": cues.cases,
                        }),
                    );
                }
            }
            Ok(())
        }
    }
}

fn push_json(out: &mut String, v: serde_json::Value) {
    out.push_str(&v.to_string());
    out.push('\n');
}

fn validate(file: &std::path::Path, format: Format, out: &mut String) -> Result<(), Failure> {
    let corpus = load_corpus(file)?;
    let mut problems = 0;
    for d in &corpus {
        let violations = validate_discourse(d);
        problems += violations.len();
        for v in &violations {
            match format {
                Format::Text => out.push_str(&format!("{}\t{}\n", d.id, v)),
                Format::Machine => push_json(
                    out,
                    json!({"record": "violation", "discourse": d.id, "message": v.to_string()}),
                ),
            }
        }
    }
    if problems > 0 {
        return Err(Failure::Input(format!(
            "{}: {problems} violation(s)",
            file.display()
        )));
    }
    match format {
        Format::Text => out.push_str(&format!(
            "{}: {} discourse(s), ok\n",
            file.display(),
            corpus.len()
        )),
        Format::Machine => push_json(out, json!({"record": "ok", "discourses": corpus.len()})),
    }
    Ok(())
}

fn resolve(corpus: &[Discourse], reports: &[DiscourseReport], format: Format, out: &mut String) {
    for (d, r) in corpus.iter().zip(reports) {
        for (u, utt) in r.utterances.iter().zip(&d.utterances) {
            let best = u.best();
            for i in utt.zero_order() {
                let antecedent: Option<Vec<&str>> = best
                    .resolution
                    .get(i)
                    .map(|a| a.members().iter().map(|&m| d.name(m)).collect());
                let cues: Vec<&str> = best.cues.iter().map(|c| c.tag()).collect();
                match format {
                    Format::Text => {
                        let a = match &antecedent {
                            None => "UNRESOLVED".to_string(),
                            Some(m) if m.len() == 1 => m[0].to_string(),
                            Some(m) => format!("{{{}}}", m.join(", ")),
                        };
                        let cues = if cues.is_empty() {
                            "-".to_string()
                        } else {
                            cues.join(",")
                        };
                        out.push_str(&format!(
                            "{}\t{}\t{}@{}\t{}\t{}\t{}\n",
                            d.id,
                            utt.index,
                            utt.expressions[i].role.tag(),
                            i,
                            a,
                            best.transition.tag(),
                            cues
                        ));
                    }
                    Format::Machine => push_json(
                        out,
                        json!({
                            "record": "zero",
                            "discourse": d.id,
                            "index": utt.index,
                            "expression": i,
                            "role": utt.expressions[i].role.tag(),
                            "antecedent": antecedent,
                            "transition": best.transition.tag(),
                            "cues": cues,
                        }),
                    ),
                }
            }
        }
    }
}
