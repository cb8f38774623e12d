#![allow(dead_code)]

use std::sync::atomic::{AtomicI64, Ordering};
use std::sync::Arc;

use chrono::{TimeZone, Utc};
use forge_core::corpus::{ImageTextPair, Provenance};
use forge_core::taxonomy::{triple_of_class, RelationClass};
use forge_service::session::Clock;

pub fn pairs(n: usize) -> Vec<ImageTextPair> {
    (0..n)
        .map(|i| {
            let class = RelationClass::VALID[i % 8];
            ImageTextPair {
                id: format!("pair-{i:02}"),
                image_ref: format!("img/{i}.jpg"),
                text: format!("text number {i}"),
                concept_tags: vec!["dog".into()],
                auto_triple: triple_of_class(class).unwrap(),
                auto_class: class,
                provenance: Provenance {
                    generator: "test".into(),
                    seed: 1,
                    parent_ids: vec![],
                    replacements: None,
                },
            }
        })
        .collect()
}

/// Ticks one second per call from a fixed epoch.
pub fn ticking_clock() -> Clock {
    let t = Arc::new(AtomicI64::new(1_700_000_000));
    Arc::new(move || Utc.timestamp_opt(t.fetch_add(1, Ordering::SeqCst), 0).unwrap())
}
