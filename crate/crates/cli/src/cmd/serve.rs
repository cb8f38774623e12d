use std::fmt::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use forge_core::corpus::read_pairs;
use forge_core::rng::rng_for;
use forge_service::http::{ADDR_ENV, DEFAULT_ADDR, MEDIA_ROOT_ENV};
use forge_service::session::system_clock;
use forge_service::{AnnotationSession, AppState, SessionConfig};
use serde::{Deserialize, Serialize};

use crate::config::{merge, required};
use crate::output::{write_text, Out};

const SAMPLE_STREAM: u64 = 3 << 32;

#[derive(clap::Args, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Args {
    /// JSON file with any of the options below; flags win.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// Corpus pairs file.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Annotator ids, comma separated. Every annotator sees every pair.
    #[arg(long, value_delimiter = ',')]
    annotators: Option<Vec<String>>,
    /// Append-only label log; replayed on start.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Seeds the per-annotator serving order and the sample.
    #[arg(long)]
    seed: Option<u64>,
    /// Annotate a seeded sample of this many pairs instead of all.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, env = ADDR_ENV)]
    addr: Option<String>,
    /// Directory that image references resolve against under /media.
    #[arg(long, env = MEDIA_ROOT_ENV)]
    media_root: Option<PathBuf>,
    /// Browser bundle served at /; a built-in page otherwise.
    #[arg(long)]
    ui_dir: Option<PathBuf>,
    /// Count Unsure as its own category in live agreement [default: true].
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    unsure_as_category: Option<bool>,
    /// Write the export of the replayed log to this file and exit.
    #[arg(long)]
    export: Option<PathBuf>,
}

pub fn run(args: Args, out: &Out) -> Result<bool> {
    let opts = merge(args.config.as_deref(), &args)?;
    let corpus = required(opts.corpus.clone(), "corpus")?;
    let annotators = required(opts.annotators.clone(), "annotators")?;
    let seed = opts.seed.unwrap_or(0);

    let mut pairs = read_pairs(&corpus)?;
    if let Some(n) = opts.sample.filter(|n| *n < pairs.len()) {
        let mut rng = rng_for(seed, SAMPLE_STREAM);
        let mut keep = rand::seq::index::sample(&mut rng, pairs.len(), n).into_vec();
        keep.sort_unstable();
        pairs = keep.into_iter().map(|i| pairs[i].clone()).collect();
    }
    let session = AnnotationSession::open(
        pairs,
        SessionConfig {
            annotators,
            seed,
            unsure_as_category: opts.unsure_as_category.unwrap_or(true),
            log_path: opts.log.clone(),
        },
        system_clock(),
    )?;

    if let Some(dest) = &opts.export {
        let export = session.export();
        write_text(dest, &export.to_jsonl())?;
        out.report(&session.progress(), || {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "{} label records, {} resolved, {} excluded; wrote {}",
                export.records.len(),
                export.resolved.len(),
                export.excluded.len(),
                dest.display()
            );
            s
        })?;
        return Ok(true);
    }

    if opts.log.is_none() {
        eprintln!("warning: no --log given; labels are kept in memory only");
    }
    let addr = opts.addr.clone().unwrap_or_else(|| DEFAULT_ADDR.to_string());
    let mut state = AppState::new(session);
    state.media_root = opts.media_root.clone();
    state.ui_dir = opts.ui_dir.clone();
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(&addr)
            .await
            .with_context(|| format!("binding {addr}"))?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        forge_service::serve(listener, state).await?;
        anyhow::Ok(())
    })?;
    Ok(true)
}
