use std::path::PathBuf;

use anyhow::Result;
use forge_core::augment::{derive_negative, negative_of, substitute_antonyms};
use forge_core::corpus::{read_pairs, write_pairs};
use forge_core::AugmentError;
use serde::Serialize;

use crate::output::Out;

#[derive(clap::Args)]
pub struct Args {
    /// Pairs file; every positive pair with a lexicon keyword yields a negative.
    #[arg(long, required_unless_present = "text", conflicts_with = "text", requires = "out")]
    input: Option<PathBuf>,
    /// Output file for the derived negatives.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Rewrite a single text and print it.
    #[arg(long)]
    text: Option<String>,
    /// Antonym lexicon (TSV); the bundled one by default.
    #[arg(long)]
    lexicon: Option<PathBuf>,
}

#[derive(Serialize)]
struct TextResult {
    text: String,
    replacements: usize,
}

#[derive(Serialize)]
struct FileResult {
    derived: usize,
    rejected: usize,
    not_positive: usize,
}

pub fn run(args: Args, out: &Out) -> Result<bool> {
    let lex = super::lexicon(args.lexicon.as_deref())?;
    if let Some(text) = args.text {
        let (text, replacements) = substitute_antonyms(&text, &lex);
        if replacements == 0 {
            eprintln!("rejected: no lexicon keyword in the text");
            return Ok(false);
        }
        let result = TextResult { text, replacements };
        out.report(&result, || format!("{}\n{} replacements\n", result.text, result.replacements))?;
        return Ok(true);
    }

    let (Some(input), Some(dest)) = (args.input, args.out) else {
        unreachable!("clap enforces --input with --out");
    };
    let pairs = read_pairs(&input)?;
    let mut negatives = Vec::new();
    let mut result = FileResult {
        derived: 0,
        rejected: 0,
        not_positive: 0,
    };
    for pair in &pairs {
        if negative_of(pair.auto_class).is_none() {
            result.not_positive += 1;
            continue;
        }
        match derive_negative(pair, &lex) {
            Ok(neg) => negatives.push(neg),
            Err(AugmentError::NoReplacement { .. }) => result.rejected += 1,
            Err(e) => return Err(e.into()),
        }
    }
    result.derived = negatives.len();
    write_pairs(&dest, &negatives)?;
    out.report(&result, || {
        format!(
            "derived {} negatives into {} ({} positives without a keyword, {} pairs not positive)\n",
            result.derived,
            dest.display(),
            result.rejected,
            result.not_positive
        )
    })?;
    Ok(true)
}
