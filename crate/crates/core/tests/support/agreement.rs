use forge_core::eval::ReliabilityMatrix;
use forge_core::rng::rng_for;
use rand::Rng;

/// Alpha from first principles: observed disagreement over ordered rating
/// pairs inside each unit (weighted 1/(m_u - 1)), expected disagreement over
/// all ordered pairs of pairable values.
pub fn alpha_by_pair_enumeration(units: &[Vec<Option<usize>>]) -> f64 {
    let mut observed = 0.0;
    let mut values = Vec::new();
    for unit in units {
        let present: Vec<usize> = unit.iter().flatten().copied().collect();
        let m = present.len();
        if m < 2 {
            continue;
        }
        for (i, a) in present.iter().enumerate() {
            for (j, b) in present.iter().enumerate() {
                if i != j && a != b {
                    observed += 1.0 / (m - 1) as f64;
                }
            }
        }
        values.extend(present);
    }
    let n = values.len() as f64;
    let mut expected = 0.0;
    for (i, a) in values.iter().enumerate() {
        for (j, b) in values.iter().enumerate() {
            if i != j && a != b {
                expected += 1.0;
            }
        }
    }
    1.0 - (observed / n) / (expected / (n * (n - 1.0)))
}

pub fn to_matrix(units: &[Vec<Option<usize>>]) -> ReliabilityMatrix {
    let mut m = ReliabilityMatrix::new();
    for (u, ratings) in units.iter().enumerate() {
        for (a, r) in ratings.iter().enumerate() {
            if let Some(c) = r {
                m.insert(format!("u{u:04}"), format!("a{a}"), format!("c{c}"));
            }
        }
    }
    m
}

pub fn random_units(seed: u64, with_missing: bool) -> Vec<Vec<Option<usize>>> {
    let mut rng = rng_for(seed, 7);
    let n_units = rng.gen_range(2..40);
    let n_annotators = rng.gen_range(2..6);
    let n_cats = rng.gen_range(2..6);
    // a bias towards agreement keeps alpha away from zero
    (0..n_units)
        .map(|_| {
            let truth = rng.gen_range(0..n_cats);
            (0..n_annotators)
                .map(|_| {
                    if with_missing && rng.gen_bool(0.25) {
                        None
                    } else if rng.gen_bool(0.6) {
                        Some(truth)
                    } else {
                        Some(rng.gen_range(0..n_cats))
                    }
                })
                .collect()
        })
        .collect()
}

/// Uniform labels: 3 annotators, 2000 units, 4 categories.
pub fn uniform_units(seed: u64) -> Vec<Vec<Option<usize>>> {
    let mut rng = rng_for(seed, 0);
    (0..2000)
        .map(|_| (0..3).map(|_| Some(rng.gen_range(0..4))).collect())
        .collect()
}

pub fn perfect_units() -> Vec<Vec<Option<usize>>> {
    vec![vec![Some(0), Some(0)], vec![Some(1), Some(1), Some(1)]]
}

/// Units {A, B} and {A, A}.
pub fn two_unit_units() -> Vec<Vec<Option<usize>>> {
    vec![vec![Some(0), Some(1)], vec![Some(0), Some(0)]]
}
