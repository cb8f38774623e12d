use std::fmt::Write;

use anyhow::Result;
use forge_core::taxonomy::{
    classify_triple, triple_of_class, validity_reason, InvalidCase, MetricTriple, RelationClass,
    Validity,
};
use serde::Serialize;

use crate::output::Out;

#[derive(clap::Args)]
pub struct Args {
    /// List all 18 metric triples with their class or invalid case.
    #[arg(long)]
    enumerate: bool,
}

#[derive(Serialize)]
struct Row {
    triple: MetricTriple,
    class: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    case: Option<InvalidCase>,
    valid: bool,
}

fn row(triple: MetricTriple) -> Row {
    let case = match validity_reason(triple) {
        Validity::Valid => None,
        Validity::Invalid(c) => Some(c),
    };
    Row {
        triple,
        class: classify_triple(triple).name(),
        case,
        valid: case.is_none(),
    }
}

pub fn run(args: Args, out: &Out) -> Result<bool> {
    let rows: Vec<Row> = if args.enumerate {
        MetricTriple::all().map(row).collect()
    } else {
        RelationClass::VALID
            .iter()
            .map(|c| row(triple_of_class(*c).expect("valid classes have triples")))
            .collect()
    };
    out.report(&rows, || {
        let mut s = String::new();
        let _ = writeln!(s, "{:>3} | {:>3} | {:>4} | Class", "CMI", "SC", "STAT");
        let _ = writeln!(s, "{}", "-".repeat(40));
        for r in &rows {
            let label = match r.case {
                Some(case) => format!("Undefined ({case})"),
                None => r.class.to_string(),
            };
            let t = r.triple;
            let _ = writeln!(s, "{:>3} | {:>3} | {:>4} | {label}", t.cmi, t.sc, t.stat);
        }
        let valid = rows.iter().filter(|r| r.valid).count();
        let _ = writeln!(s, "{valid} valid, {} undefined", rows.len() - valid);
        s
    })?;
    Ok(true)
}
