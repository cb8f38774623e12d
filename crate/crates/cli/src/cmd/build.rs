use std::fmt::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use forge_core::corpus::{build_corpus, summary_json, write_corpus, BuildConfig};
use forge_core::eval::corpus_consistency_report;

use crate::output::Out;

#[derive(clap::Args)]
pub struct Args {
    /// Build configuration (JSON). Relative source paths resolve against
    /// the directory of this file.
    #[arg(long)]
    config: PathBuf,
    /// Output pairs file; the summary is written next to it.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Antonym lexicon (TSV) replacing the configured or bundled one.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Sentence cap applied to every text.
    #[arg(long)]
    max_sentences: Option<usize>,
}

pub fn run(args: Args, out: &Out) -> Result<bool> {
    let raw = std::fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let mut config: BuildConfig =
        serde_json::from_str(&raw).with_context(|| format!("parsing {}", args.config.display()))?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(n) = args.max_sentences {
        config.max_sentences = n;
    }
    if let Some(lexicon) = args.lexicon {
        config.lexicon = Some(std::path::absolute(lexicon)?);
    }
    // the snapshot keeps paths as written so artifacts do not depend on the
    // checkout location
    let snapshot = serde_json::to_value(&config)?;
    let base = args.config.parent().unwrap_or_else(|| std::path::Path::new("."));
    config.resolve_paths(base);

    let (mut manifest, report) = build_corpus(&config)?;
    manifest.created_with = snapshot;
    write_corpus(&args.out, &manifest, &report)?;

    let audit = corpus_consistency_report(&manifest);
    out.report(&summary_json(&manifest, &report), || {
        let mut s = audit.class_table();
        s.push('\n');
        s.push_str(&audit.metric_table());
        let _ = writeln!(s, "\nwrote {} pairs to {}", manifest.pairs.len(), args.out.display());
        if report.skipped_stories + report.dropped_concepts + report.rejected_slogans > 0 {
            let _ = writeln!(
                s,
                "skipped stories {}, dropped concepts {}, rejected slogans {}",
                report.skipped_stories, report.dropped_concepts, report.rejected_slogans
            );
        }
        for (class, n) in &report.rejected_negative_candidates {
            let _ = writeln!(s, "{class}: {n} candidates without a lexicon keyword");
        }
        s
    })?;
    Ok(audit.is_consistent())
}
