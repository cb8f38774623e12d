pub mod augment;
pub mod build;
pub mod consistency;
pub mod evaluate;
pub mod predict;
pub mod serve;
pub mod taxonomy;
pub mod train;

use std::path::Path;

use anyhow::Result;
use forge_core::augment::{load_lexicon, AntonymLexicon};

pub fn lexicon(path: Option<&Path>) -> Result<AntonymLexicon> {
    Ok(match path {
        Some(p) => load_lexicon(p)?,
        None => AntonymLexicon::bundled(),
    })
}
