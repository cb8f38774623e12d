use forge_core::classifier::network::Sample;
use forge_core::classifier::Mlp;
use forge_core::rng::rng_for;
use rand::Rng;

/// Standard normal draw (Box-Muller).
pub fn normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn random_problem(seed: u64) -> (Mlp, Vec<Sample>) {
    let mut rng = rng_for(seed, 11);
    let input = rng.gen_range(3..8);
    let hidden = rng.gen_range(2..7);
    let output = rng.gen_range(2..5);
    let mut net = Mlp::init(input, hidden, output, seed);
    for b in net.b1.iter_mut().chain(net.b2.iter_mut()) {
        *b = rng.gen_range(-0.5..0.5);
    }
    let samples = (0..10)
        .map(|_| Sample {
            x: (0..input)
                .filter_map(|i| rng.gen_bool(0.8).then(|| (i, rng.gen_range(-2.0..2.0))))
                .collect(),
            label: rng.gen_range(0..output),
            weight: rng.gen_range(0.5..2.0),
        })
        .collect();
    (net, samples)
}

/// Largest relative error between the analytic gradient and central
/// differences with step `h`, over every parameter of one random problem.
pub fn max_gradient_error(seed: u64, h: f64) -> f64 {
    let (net, batch) = random_problem(seed);
    let (_, grad) = net.loss_and_gradient(&batch);
    let analytic = grad.tensors();
    let mut worst: f64 = 0.0;
    for t in 0..4 {
        for i in 0..analytic[t].len() {
            let mut plus = net.clone();
            plus.tensors_mut()[t][i] += h;
            let mut minus = net.clone();
            minus.tensors_mut()[t][i] -= h;
            let numeric = (plus.loss(&batch) - minus.loss(&batch)) / (2.0 * h);
            let a = analytic[t][i];
            worst = worst.max((a - numeric).abs() / (a.abs() + numeric.abs()).max(1e-7));
        }
    }
    worst
}

/// Three 2-D blobs with centers 6 sigma apart.
pub fn blobs() -> Vec<(Vec<f64>, usize)> {
    let centers = [(0.0, 0.0), (6.0, 0.0), (3.0, 5.2)];
    let mut rng = rng_for(77, 0);
    let mut rows = Vec::new();
    for i in 0..150 {
        let k = i % 3;
        let (cx, cy) = centers[k];
        let x = cx + normal(&mut rng).clamp(-2.0, 2.0);
        let y = cy + normal(&mut rng).clamp(-2.0, 2.0);
        rows.push((vec![x / 6.0, y / 6.0], k));
    }
    rows
}

/// Multiclass perceptron with a bias input; returns the epoch at which it
/// classified every row correctly.
pub fn perceptron_separates(rows: &[(Vec<f64>, usize)]) -> Option<usize> {
    let mut w = vec![[0.0f64; 3]; 3];
    for epoch in 0..1000 {
        let mut errors = 0;
        for (x, y) in rows {
            let xb = [x[0], x[1], 1.0];
            let score = |k: usize| (0..3).map(|d| w[k][d] * xb[d]).sum::<f64>();
            let pred = (0..3).max_by(|a, b| score(*a).total_cmp(&score(*b))).unwrap();
            if pred != *y {
                errors += 1;
                for d in 0..3 {
                    w[*y][d] += xb[d];
                    w[pred][d] -= xb[d];
                }
            }
        }
        if errors == 0 {
            return Some(epoch);
        }
    }
    None
}
