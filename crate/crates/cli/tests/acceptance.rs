//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode, Output, Stdio};
use std::time::{Duration, Instant};

use forge_core::augment::{derive_negative, negative_of, substitute_antonyms};
use forge_core::classifier::network::softmax;
use forge_core::classifier::{argmax, train, TrainConfig};
use forge_core::corpus::{ImageTextPair, Provenance};
use forge_core::eval::{
    augmentation_quality_report, classification_report, compare_metric_rows, krippendorff_alpha,
    majority_vote, ConsistencyReport, EvalReport, TableDiscrepancy, VoteOutcome,
};
use forge_core::rng::rng_for;
use forge_core::taxonomy::{
    classify_triple, triple_of_class, validity_reason, InvalidCase, MetricTriple, RelationClass,
    ScLevel, Validity,
};
use forge_core::AugmentError;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::Rng;
use serde_json::Value;

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- taxonomy

fn taxonomy_exhaustiveness() -> Verdict {
    let mut valid = Vec::new();
    let mut cases: BTreeMap<InvalidCase, usize> = BTreeMap::new();
    for t in MetricTriple::all() {
        let want = support::taxonomy::reference(t.cmi.value(), t.sc.value(), t.stat.as_str());
        match validity_reason(t) {
            Validity::Valid => {
                ensure(classify_triple(t).name() == want, || format!("{t} -> {}", classify_triple(t)))?;
                valid.push(classify_triple(t));
            }
            Validity::Invalid(case) => {
                ensure(case.as_str() == want, || format!("{t} -> {case}, expected {want}"))?;
                *cases.entry(case).or_default() += 1;
            }
        }
    }
    valid.sort();
    ensure(valid == RelationClass::VALID.to_vec(), || format!("valid classes {valid:?}"))?;
    let counts: Vec<usize> = InvalidCase::ALL.iter().map(|c| cases.get(c).copied().unwrap_or(0)).collect();
    ensure(counts == [3, 2, 2, 3], || format!("case counts {counts:?}"))?;
    for class in RelationClass::VALID {
        let back = classify_triple(triple_of_class(class).map_err(|e| e.to_string())?);
        ensure(back == class, || format!("{class} round-trips to {back}"))?;
    }
    Ok("18 triples: 8 classes, cases A/B/C/D = 3/2/2/3, round trip exact".into())
}

// ------------------------------------------------------------- consistency

fn class_counts_to_metric_counts() -> Verdict {
    let counts: BTreeMap<RelationClass, u64> = RelationClass::VALID
        .into_iter()
        .zip(support::tables::CLASS_COUNTS)
        .collect();
    let report = ConsistencyReport::from_class_counts(&counts);
    let m = &report.metrics;
    ensure(report.total == 224_856, || format!("total {}", report.total))?;
    ensure(m.sc == [62677, 60000, 102179], || format!("SC {:?}", m.sc))?;
    ensure(m.cmi == [61007, 163849], || format!("CMI {:?}", m.cmi))?;
    ensure(m.stat == [9546, 125463, 89847], || format!("STAT {:?}", m.stat))?;
    ensure(report.is_consistent(), || format!("{:?}", report.mismatches))?;
    let discrepancies = compare_metric_rows(m, &forge_core::eval::PUBLISHED_METRIC_ROWS);
    let swap_flagged = discrepancies.iter().any(|d| {
        matches!(d, TableDiscrepancy::Swapped { rows, .. }
            if (rows.0.as_str(), rows.1.as_str()) == ("STAT T", "STAT 0")
                || (rows.0.as_str(), rows.1.as_str()) == ("STAT 0", "STAT T"))
    });
    ensure(swap_flagged && discrepancies.len() == 1, || format!("discrepancies {discrepancies:?}"))?;
    Ok("SC 62677/60000/102179, CMI 61007/163849, STAT 9546/125463/89847, STAT T/0 swap flagged".into())
}

// --------------------------------------------------------------- agreement

fn krippendorff() -> Verdict {
    use support::agreement::*;
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    let mut seed = 0;
    while checked < 100 {
        let units = random_units(seed, true);
        seed += 1;
        let oracle = alpha_by_pair_enumeration(&units);
        let Ok(alpha) = krippendorff_alpha(&to_matrix(&units)) else {
            ensure(!oracle.is_finite(), || format!("seed {}: alpha undefined, oracle {oracle}", seed - 1))?;
            continue;
        };
        worst = worst.max((alpha - oracle).abs());
        checked += 1;
    }
    ensure(worst < 1e-9, || format!("max deviation {worst:e}"))?;
    let perfect = krippendorff_alpha(&to_matrix(&perfect_units())).map_err(|e| e.to_string())?;
    ensure(perfect == 1.0, || format!("perfect agreement alpha {perfect}"))?;
    let two = krippendorff_alpha(&to_matrix(&two_unit_units())).map_err(|e| e.to_string())?;
    ensure(two == 0.0, || format!("two-unit alpha {two}"))?;
    let uniform = krippendorff_alpha(&to_matrix(&uniform_units(2024))).map_err(|e| e.to_string())?;
    ensure(uniform.abs() < 0.05, || format!("uniform alpha {uniform}"))?;
    Ok(format!(
        "100 matrices max |diff| {worst:.1e}; perfect 1.0; two-unit 0.0; uniform {uniform:+.4}"
    ))
}

fn majority() -> Verdict {
    let outcome = majority_vote(&support::tables::vote_fixture());
    let resolved = outcome.values().filter(|o| matches!(o, VoteOutcome::Resolved(_))).count();
    ensure(outcome.len() == 800 && resolved == 798, || {
        format!("{} pairs, {resolved} resolved", outcome.len())
    })?;
    Ok("800 pairs -> 798 resolved".into())
}

// -------------------------------------------------------- published tables

fn labels_report(matrix: &[[u64; 8]; 8], quality: bool) -> Result<EvalReport, String> {
    let (pred, truth) = support::tables::labels_from(matrix);
    if quality {
        augmentation_quality_report(&pred, &truth)
    } else {
        classification_report(&pred, &truth)
    }
    .map_err(|e| e.to_string())
}

fn compare_rows(name: &str, report: &EvalReport, precision: &[f64; 8], recall: &[f64; 8]) -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    for i in 0..8 {
        for (what, got, want) in [("precision", report.precision[i], precision[i]), ("recall", report.recall[i], recall[i])] {
            let got = 100.0 * got.ok_or_else(|| format!("{name}: undefined {what}"))?;
            let diff = (got - want).abs();
            worst = worst.max(diff);
            ensure(diff <= 0.1, || {
                format!("{name} {} {what}: {got:.2} vs {want}", RelationClass::VALID[i])
            })?;
        }
    }
    Ok(worst)
}

fn published_tables() -> Verdict {
    use support::tables::*;
    let classic = labels_report(&CLASSIC_CONFUSION, false)?;
    let w4 = compare_rows("confusion table", &classic, &CLASSIC_PRECISION, &CLASSIC_RECALL)?;
    let quality = labels_report(&AUGMENTATION_CONFUSION, true)?;
    let w3 = compare_rows("quality table", &quality, &AUGMENTATION_PRECISION, &AUGMENTATION_RECALL)?;
    Ok(format!(
        "confusion rows max diff {w4:.3} pp, quality rows max diff {w3:.3} pp (Uncorrelated {:.1}%/{:.1}%)",
        100.0 * classic.precision[0].unwrap_or(f64::NAN),
        100.0 * classic.recall[0].unwrap_or(f64::NAN)
    ))
}

// ------------------------------------------------------------ augmentation

fn augmentation() -> Verdict {
    use support::augment::{lexicon, positive_pair};
    let lex = lexicon();
    let (out, n) = substitute_antonyms("tall man standing in front of a green car", &lex);
    ensure(out == "small woman standing behind a red car" && n == 4, || format!("{out:?} with {n}"))?;

    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&positive_pair(), |pair| {
            let neg = derive_negative(&pair, &lex).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let same = neg.image_ref == pair.image_ref
                && neg.concept_tags == pair.concept_tags
                && neg.auto_triple.cmi == pair.auto_triple.cmi
                && neg.auto_triple.stat == pair.auto_triple.stat
                && neg.auto_triple.sc == ScLevel::Neg
                && Some(neg.auto_class) == negative_of(pair.auto_class);
            if same {
                Ok(())
            } else {
                Err(TestCaseError::fail(format!("{pair:?} -> {neg:?}")))
            }
        })
        .map_err(|e| e.to_string())?;

    let class = RelationClass::Anchorage;
    let plain = ImageTextPair {
        id: "p".into(),
        image_ref: "i.jpg".into(),
        text: "a dog on the grass".into(),
        concept_tags: vec![],
        auto_triple: triple_of_class(class).map_err(|e| e.to_string())?,
        auto_class: class,
        provenance: Provenance {
            generator: "anchorage".into(),
            seed: 0,
            parent_ids: vec![],
            replacements: None,
        },
    };
    ensure(
        matches!(derive_negative(&plain, &lex), Err(AugmentError::NoReplacement { .. })),
        || "zero-replacement input was accepted".into(),
    )?;
    Ok("worked example exact (4 replacements); 1000 generated positives flip only SC; zero replacements rejected".into())
}

// -------------------------------------------------------------- classifier

fn classifier_numerics() -> Verdict {
    use support::classifier::{blobs, max_gradient_error, perceptron_separates};
    let worst_grad = (0..20).map(|s| max_gradient_error(s, 1e-5)).fold(0.0, f64::max);
    ensure(worst_grad <= 1e-4, || format!("gradient relative error {worst_grad:e}"))?;

    let mut rng = rng_for(31, 0);
    let mut worst_sum: f64 = 0.0;
    for _ in 0..1000 {
        let len = rng.gen_range(1..12);
        let z: Vec<f64> = (0..len).map(|_| rng.gen_range(-50.0..50.0)).collect();
        worst_sum = worst_sum.max((softmax(&z).iter().sum::<f64>() - 1.0).abs());
    }
    ensure(worst_sum <= 1e-9, || format!("softmax sum off by {worst_sum:e}"))?;

    let rows = blobs();
    ensure(perceptron_separates(&rows).is_some(), || "blob fixture is not separable".into())?;
    let out = train(&rows, 3, &TrainConfig { epochs: 200, seed: 3, ..TrainConfig::default() })
        .map_err(|e| e.to_string())?;
    let correct = rows.iter().filter(|(x, y)| argmax(&out.network.proba(x)) == *y).count();
    ensure(correct == rows.len(), || format!("{correct}/{} after 200 epochs", rows.len()))?;
    Ok(format!(
        "max gradient rel error {worst_grad:.1e}; softmax sum error {worst_sum:.1e}; blobs {correct}/{} in 200 epochs",
        rows.len()
    ))
}

// ---------------------------------------------------------------- pipeline

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn forge(dir: &Path, args: &[&str]) -> Result<Output, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_forge"))
        .args(args)
        .current_dir(dir)
        .env_remove("FORGE_ADDR")
        .env_remove("FORGE_MEDIA_ROOT")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "forge {} exited {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out)
}

const SEED: &str = "11";

/// Builds, trains and evaluates inside `dir`, using relative paths only.
fn pipeline(dir: &Path) -> Result<(), String> {
    let config = workspace_root().join("data/mini/build.json");
    let config = config.to_str().ok_or("non-UTF-8 path")?;
    forge(dir, &["build", "--config", config, "--out", "corpus.jsonl", "--seed", SEED])?;
    forge(dir, &["train", "--corpus", "corpus.jsonl", "--out-dir", "models", "--seed", SEED])?;
    for mode in ["classic", "cascade"] {
        let pred = format!("pred-{mode}.json");
        let report = format!("eval-{mode}.json");
        forge(dir, &["predict", "--models", "models", "--input", "models/holdout.jsonl", "--mode", mode, "--out", &pred])?;
        forge(dir, &["evaluate", "--predictions", &pred, "--truth", "models/holdout.jsonl", "--out", &report])?;
    }
    Ok(())
}

fn read_json(path: &Path) -> Result<Value, String> {
    let raw = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&raw).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_jsonl(path: &Path) -> Result<Vec<Value>, String> {
    let raw = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    raw.lines().map(|l| serde_json::from_str(l).map_err(|e| e.to_string())).collect()
}

fn end_to_end(dir: &Path) -> Verdict {
    pipeline(dir)?;
    let corpus = read_jsonl(&dir.join("corpus.jsonl"))?;
    ensure(corpus.len() == 400, || format!("corpus has {} pairs", corpus.len()))?;

    let holdout = read_jsonl(&dir.join("models/holdout.jsonl"))?;
    let truth: BTreeMap<String, &Value> = holdout.iter().map(|p| (p["id"].as_str().unwrap_or("").to_string(), p)).collect();
    let mut per_class: BTreeMap<&str, usize> = BTreeMap::new();
    for p in &holdout {
        *per_class.entry(p["auto_class"].as_str().unwrap_or("")).or_default() += 1;
    }
    let baseline = per_class.values().copied().max().unwrap_or(0) as f64 / holdout.len() as f64;

    let classic = read_json(&dir.join("eval-classic.json"))?;
    let classic_acc = classic["report"]["accuracy"].as_f64().ok_or("classic accuracy missing")?;
    ensure(classic_acc >= baseline + 0.20, || {
        format!("classic accuracy {classic_acc:.3} vs majority baseline {baseline:.3}")
    })?;

    let cascade = read_json(&dir.join("eval-cascade.json"))?;
    let confusion = cascade["report"]["confusion"].as_array().ok_or("cascade confusion missing")?;
    let undefined: u64 = confusion.iter().filter_map(|row| row[8].as_u64()).sum();
    let undefined_rate = undefined as f64 / holdout.len() as f64;

    // per-head accuracy on the whole held-out set and on each true class
    let preds = read_json(&dir.join("pred-cascade.json"))?;
    let preds = preds["predictions"].as_array().ok_or("predictions missing")?;
    let mut subsets: BTreeMap<String, Vec<&Value>> = BTreeMap::new();
    for p in preds {
        let t = truth[p["pair_id"].as_str().unwrap_or("")];
        subsets.entry("all held-out".into()).or_default().push(p);
        subsets.entry(t["auto_class"].as_str().unwrap_or("").to_string()).or_default().push(p);
    }
    let mut qualifying = 0;
    let mut lowest_cascade: f64 = 1.0;
    for (name, members) in &subsets {
        let n = members.len() as f64;
        let share = |f: &dyn Fn(&Value, &Value) -> bool| {
            members.iter().filter(|p| f(p, truth[p["pair_id"].as_str().unwrap_or("")])).count() as f64 / n
        };
        let head = |key: &'static str| share(&move |p: &Value, t: &Value| p["triple"][key] == t["auto_triple"][key]);
        let (cmi, sc, stat) = (head("cmi"), head("sc"), head("stat"));
        let cascade_acc = share(&|p: &Value, t: &Value| p["class"] == t["auto_class"]);
        if cmi >= 0.95 && sc >= 0.95 && stat >= 0.95 {
            qualifying += 1;
            lowest_cascade = lowest_cascade.min(cascade_acc);
            ensure(cascade_acc >= 0.90, || {
                format!("{name}: heads {cmi:.3}/{sc:.3}/{stat:.3} but cascade {cascade_acc:.3}")
            })?;
        }
    }
    ensure(qualifying > 0, || "no subset has all three heads at 95% or better".into())?;
    ensure(cascade["report"]["undefined_predictions"].is_u64(), || "undefined count not reported".into())?;
    Ok(format!(
        "classic {:.1}% vs baseline {:.1}%; cascade undefined rate {:.1}%; {qualifying}/{} subsets with heads >= 95%, cascade >= {:.1}% on each",
        classic_acc * 100.0,
        baseline * 100.0,
        undefined_rate * 100.0,
        subsets.len(),
        lowest_cascade * 100.0
    ))
}

// ------------------------------------------------------------- determinism

fn files_under(root: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).into_iter().flatten().flatten() {
            let p = entry.path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push(p.strip_prefix(root).expect("under root").to_path_buf());
            }
        }
    }
    out.sort();
    out
}

fn same_tree(a: &Path, b: &Path) -> Result<usize, String> {
    let (fa, fb) = (files_under(a), files_under(b));
    ensure(fa == fb, || format!("file sets differ: {fa:?} vs {fb:?}"))?;
    for f in &fa {
        let (x, y) = (std::fs::read(a.join(f)), std::fs::read(b.join(f)));
        ensure(x.ok() == y.ok(), || format!("{} differs between runs", f.display()))?;
    }
    Ok(fa.len())
}

/// A label log with fixed timestamps for the annotation export.
fn write_label_log(path: &Path, corpus: &[Value]) -> Result<(), String> {
    let mut log = String::new();
    for (i, pair) in corpus.iter().take(30).enumerate() {
        for (a, who) in ["ann-a", "ann-b", "ann-c"].iter().enumerate() {
            let label = if (i + a) % 7 == 0 { "Unsure" } else { pair["auto_class"].as_str().unwrap_or("") };
            log.push_str(&serde_json::json!({
                "pair_id": pair["id"],
                "annotator_id": who,
                "label": label,
                "timestamp": format!("2020-01-01T00:{:02}:{:02}Z", i % 60, a),
            }).to_string());
            log.push('\n');
        }
    }
    std::fs::write(path, log).map_err(|e| e.to_string())
}

/// Starts the server on an ephemeral port and returns the first pair served
/// to each annotator.
fn live_first_pairs(dir: &Path) -> Result<String, String> {
    let mut child = Command::new(env!("CARGO_BIN_EXE_forge"))
        .args(["annotate-serve", "--corpus", "corpus.jsonl", "--annotators", "ann-a,ann-b,ann-c", "--seed", SEED, "--sample", "40"])
        .current_dir(dir)
        .env("FORGE_ADDR", "127.0.0.1:0")
        .stderr(Stdio::piped())
        .stdout(Stdio::null())
        .spawn()
        .map_err(|e| e.to_string())?;
    let result = (|| {
        let stderr = child.stderr.take().ok_or("no stderr")?;
        let mut lines = BufReader::new(stderr).lines();
        let addr = loop {
            let line = lines.next().ok_or("server exited before listening")?.map_err(|e| e.to_string())?;
            if let Some(addr) = line.trim().strip_prefix("listening on http://") {
                break addr.to_string();
            }
        };
        let mut bodies = String::new();
        for who in ["ann-a", "ann-b", "ann-c"] {
            let mut stream = std::net::TcpStream::connect(&addr).map_err(|e| e.to_string())?;
            stream.set_read_timeout(Some(Duration::from_secs(10))).map_err(|e| e.to_string())?;
            write!(stream, "GET /api/pairs/next?annotator={who} HTTP/1.1\r\nHost: {addr}\r\nConnection: close\r\n\r\n")
                .map_err(|e| e.to_string())?;
            let mut response = String::new();
            stream.read_to_string(&mut response).map_err(|e| e.to_string())?;
            let body = response.split("\r\n\r\n").nth(1).ok_or("no body")?;
            ensure(response.starts_with("HTTP/1.1 200"), || response.clone())?;
            bodies.push_str(body);
            bodies.push('\n');
        }
        Ok(bodies)
    })();
    let _ = child.kill();
    let _ = child.wait();
    result
}

fn determinism(first: &Path, second: &Path) -> Verdict {
    pipeline(second)?;
    let pipeline_files = same_tree(first, second)?;

    let mut compared = vec![format!("{pipeline_files} build/train/predict/evaluate artifacts")];
    let corpus = read_jsonl(&first.join("corpus.jsonl"))?;
    for dir in [first, second] {
        forge(dir, &["augment", "--input", "corpus.jsonl", "--out", "aug/negatives.jsonl"])?;
        write_label_log(&dir.join("labels.jsonl"), &corpus)?;
        forge(dir, &[
            "annotate-serve", "--corpus", "corpus.jsonl", "--annotators", "ann-a,ann-b,ann-c",
            "--log", "labels.jsonl", "--seed", SEED, "--export", "serve/export.jsonl",
        ])?;
        forge(dir, &["evaluate", "--truth", "corpus.jsonl", "--human", "serve/export.jsonl", "--out", "serve/quality.json"])?;
    }
    same_tree(&first.join("aug"), &second.join("aug"))?;
    same_tree(&first.join("serve"), &second.join("serve"))?;
    compared.push("augment, annotate-serve export and quality report".into());

    for args in [
        vec!["taxonomy", "--enumerate"],
        vec!["--json", "taxonomy", "--enumerate"],
        vec!["--json", "consistency", "--manifest", "corpus.jsonl"],
        vec!["consistency", "--published"],
    ] {
        let a = forge(first, &args)?.stdout;
        let b = forge(second, &args)?.stdout;
        ensure(a == b, || format!("stdout of forge {} differs", args.join(" ")))?;
    }
    compared.push("taxonomy and consistency reports".into());

    let a = live_first_pairs(first)?;
    let b = live_first_pairs(second)?;
    ensure(a == b, || format!("served pairs differ:\n{a}\n{b}"))?;
    compared.push("live serving order".into());
    Ok(format!("byte-identical: {}", compared.join("; ")))
}

// -------------------------------------------------------------------- main

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: Box<dyn FnOnce() -> Verdict>,
}

fn main() -> ExitCode {
    let first = tempfile::tempdir().expect("tempdir");
    let second = tempfile::tempdir().expect("tempdir");
    let (p1, p2) = (first.path().to_path_buf(), second.path().to_path_buf());
    let p1b = p1.clone();
    let criteria = vec![
        Criterion { name: "taxonomy exhaustiveness", budget: Duration::from_secs(1), run: Box::new(taxonomy_exhaustiveness) },
        Criterion { name: "class counts to metric counts", budget: Duration::from_secs(1), run: Box::new(class_counts_to_metric_counts) },
        Criterion { name: "krippendorff alpha", budget: Duration::from_secs(10), run: Box::new(krippendorff) },
        Criterion { name: "majority vote", budget: Duration::from_secs(1), run: Box::new(majority) },
        Criterion { name: "published table recomputation", budget: Duration::from_secs(1), run: Box::new(published_tables) },
        Criterion { name: "augmentation", budget: Duration::from_secs(5), run: Box::new(augmentation) },
        Criterion { name: "classifier numerics", budget: Duration::from_secs(60), run: Box::new(classifier_numerics) },
        Criterion { name: "end-to-end desk pipeline", budget: Duration::from_secs(300), run: Box::new(move || end_to_end(&p1)) },
        Criterion { name: "determinism", budget: Duration::from_secs(300), run: Box::new(move || determinism(&p1b, &p2)) },
    ];

    let mut failed = 0;
    for c in criteria {
        let start = Instant::now();
        let verdict = (c.run)();
        let elapsed = start.elapsed();
        let verdict = verdict.and_then(|detail| {
            if elapsed <= c.budget {
                Ok(detail)
            } else {
                Err(format!("took {elapsed:.2?}, budget {:?}; {detail}", c.budget))
            }
        });
        match verdict {
            Ok(detail) => println!("PASS  {:<32} {:>9.2?}  {detail}", c.name, elapsed),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:<32} {:>9.2?}  {why}", c.name, elapsed);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
