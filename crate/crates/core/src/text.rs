//! Tokenization helpers shared by the generators, the antonym substitution
//! and the feature extractor.

use std::collections::HashSet;
use std::ops::Range;
use std::sync::OnceLock;

/// Characters that may appear inside a word. Everything else is a boundary.
pub fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '\'' || c == '-'
}

/// Byte ranges of the words in `text`, left to right.
pub fn word_spans(text: &str) -> Vec<Range<usize>> {
    let mut spans = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (is_word_char(c), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                spans.push(s..i);
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        spans.push(s..text.len());
    }
    spans
}

/// Case-folded word tokens.
pub fn tokens(text: &str) -> Vec<String> {
    word_spans(text)
        .into_iter()
        .map(|r| text[r].to_lowercase())
        .collect()
}

const STOPWORDS_RAW: &str = include_str!("../data/stopwords.txt");

/// Bundled English function-word list.
pub fn stopwords() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        STOPWORDS_RAW
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect()
    })
}

pub fn is_stopword(token: &str) -> bool {
    stopwords().contains(token)
}

/// Splits on '.', '!' or '?' followed by whitespace or the end of the text.
/// Each returned slice keeps its terminal punctuation and is trimmed; empty
/// pieces are dropped. Text after the last terminator is its own sentence.
pub fn split_sentences(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut iter = text.char_indices().peekable();
    while let Some((i, c)) = iter.next() {
        if matches!(c, '.' | '!' | '?') {
            let boundary = match iter.peek() {
                None => true,
                Some(&(_, next)) => next.is_whitespace(),
            };
            if boundary {
                let end = i + c.len_utf8();
                push_trimmed(&mut out, &text[start..end]);
                start = end;
            }
        }
    }
    push_trimmed(&mut out, &text[start..]);
    out
}

fn push_trimmed<'a>(out: &mut Vec<&'a str>, piece: &'a str) {
    let piece = piece.trim();
    if !piece.is_empty() {
        out.push(piece);
    }
}

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
