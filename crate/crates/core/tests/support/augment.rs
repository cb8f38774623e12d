use forge_core::augment::{AntonymLexicon, LexiconEntry};
use forge_core::corpus::{ImageTextPair, Provenance};
use forge_core::taxonomy::{triple_of_class, RelationClass};
use forge_core::text::is_word_char;
use proptest::prelude::*;

/// The lexicon entries documented for the worked example, plus their
/// reverse directions and a few overlapping keywords.
pub const ENTRIES: &[(&str, &str)] = &[
    ("tall", "small"),
    ("man", "woman"),
    ("in front of", "behind"),
    ("front", "back"),
    ("green", "red"),
    ("on top of", "underneath"),
    ("top", "bottom"),
    ("red", "green"),
];

pub fn lexicon() -> AntonymLexicon {
    AntonymLexicon::from_entries(
        ENTRIES
            .iter()
            .map(|(k, r)| LexiconEntry {
                keyword: k.to_string(),
                replacement: r.to_string(),
            })
            .collect(),
    )
    .unwrap()
}

/// Character-level reference: at every word start try the keywords with the
/// most words first, requiring a non-word character (or the end) after the
/// match. ASCII input only.
pub fn naive_substitute(text: &str) -> (String, usize) {
    let mut order: Vec<&(&str, &str)> = ENTRIES.iter().collect();
    order.sort_by_key(|(k, _)| std::cmp::Reverse(k.split(' ').count()));
    let bytes = text.as_bytes();
    let lower = text.to_ascii_lowercase();
    let mut out = String::new();
    let mut count = 0;
    let mut p = 0;
    while p < bytes.len() {
        let at_start = p == 0 || !is_word_char(bytes[p - 1] as char);
        let hit = at_start
            .then(|| {
                order.iter().find(|(k, _)| {
                    lower[p..].starts_with(k)
                        && bytes
                            .get(p + k.len())
                            .is_none_or(|&b| !is_word_char(b as char))
                })
            })
            .flatten();
        match hit {
            Some((k, r)) => {
                if bytes[p].is_ascii_uppercase() {
                    out.push_str(&r[..1].to_ascii_uppercase());
                    out.push_str(&r[1..]);
                } else {
                    out.push_str(r);
                }
                count += 1;
                p += k.len();
            }
            None => {
                // copy the rest of the current word, or one boundary char
                let mut q = p + 1;
                if is_word_char(bytes[p] as char) {
                    while q < bytes.len() && is_word_char(bytes[q] as char) {
                        q += 1;
                    }
                }
                out.push_str(&text[p..q]);
                p = q;
            }
        }
    }
    (out, count)
}

pub fn word() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("tall"), Just("Tall"), Just("man"), Just("MAN"), Just("in"), Just("front"),
        Just("of"), Just("on"), Just("top"), Just("Top"), Just("red"), Just("green"),
        Just("car"), Just("dog"), Just("redder"), Just("x-red"), Just("red-x"), Just("a"),
    ]
    .prop_map(String::from)
}

pub fn separator() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just(" "), Just(" "), Just(" "), Just("  "), Just(", "), Just(". "), Just("\n")]
}

pub fn sentence() -> impl Strategy<Value = String> {
    prop::collection::vec((word(), separator()), 0..25).prop_map(|parts| {
        parts
            .into_iter()
            .map(|(w, s)| format!("{w}{s}"))
            .collect::<String>()
    })
}

pub fn positive_pair() -> impl Strategy<Value = ImageTextPair> {
    let classes = prop_oneof![
        Just(RelationClass::Complementary),
        Just(RelationClass::Illustration),
        Just(RelationClass::Anchorage),
    ];
    (classes, sentence(), word(), "[a-z]{1,8}", prop::collection::vec("[a-z]{1,6}", 0..4), any::<u64>())
        .prop_map(|(class, text, keyword, image, tags, seed)| ImageTextPair {
            id: format!("p-{image}"),
            image_ref: format!("{image}.jpg"),
            // guarantees at least one keyword occurrence
            text: format!("{text} red {keyword}."),
            concept_tags: tags,
            auto_triple: triple_of_class(class).unwrap(),
            auto_class: class,
            provenance: Provenance {
                generator: "anchorage".into(),
                seed,
                parent_ids: vec![],
                replacements: None,
            },
        })
}
