use aisgd::datagen::{excess_risk, make_normal_design, Covariance, SyntheticSpec};
use aisgd::solver::DEFAULT_TOL;
use aisgd::{Algorithm, Family, GlmLoss, OptimizerState, RngSeed, Sample};
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

fn spec_with(eigs: Vec<f64>, n: usize, seed: u64) -> SyntheticSpec {
    let p = eigs.len();
    SyntheticSpec {
        n,
        theta_star: vec![0.0; p],
        covariance: Covariance::random(eigs, RngSeed(seed)).unwrap(),
        noise_sd: 1.0,
        seed: RngSeed(seed + 1),
        task: aisgd::datagen::Task::Linear,
    }
}

#[test]
fn outcome_variance_p1() {
    let data = make_normal_design(&spec_with(vec![1.0], 100_000, 3)).unwrap();
    let n = data.len() as f64;
    let mean = data.samples.iter().map(|s| s.y).sum::<f64>() / n;
    let var = data
        .samples
        .iter()
        .map(|s| (s.y - mean).powi(2))
        .sum::<f64>()
        / (n - 1.0);
    // y = 0·x + ε, so Var y = noise_sd²
    assert!((0.98..=1.02).contains(&var), "{var}");
}

#[test]
fn empirical_covariance_matches() {
    let spec = SyntheticSpec::harmonic(100_000, 5, RngSeed(8)).unwrap();
    let h = spec.covariance.matrix();
    let data = make_normal_design(&spec).unwrap();
    let xs: Vec<Vec<f64>> = data.samples.iter().map(|s| s.x.to_dense()).collect();
    let n = xs.len() as f64;
    for i in 0..5 {
        for j in 0..5 {
            let emp = xs.iter().map(|x| x[i] * x[j]).sum::<f64>() / n;
            assert!(
                (emp - h[(i, j)]).abs() <= 0.02,
                "H[{i},{j}] {emp} vs {}",
                h[(i, j)]
            );
        }
    }
}

#[test]
fn excess_risk_matches_monte_carlo() {
    let spec = SyntheticSpec::harmonic(100_000, 6, RngSeed(21))
        .unwrap()
        .with_theta_star(vec![0.5, -1.0, 0.0, 2.0, 0.3, -0.7]);
    let mut rng = RngSeed(22).rng();
    let theta: Vec<f64> = (0..6).map(|_| rng.sample(StandardNormal)).collect();
    let data = make_normal_design(&spec).unwrap();
    let r: Vec<f64> = data
        .samples
        .iter()
        .map(|s| (s.y - s.x.dot(&theta)).powi(2) - spec.noise_sd.powi(2))
        .collect();
    let n = r.len() as f64;
    let mean = r.iter().sum::<f64>() / n;
    let se = (r.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0) / n).sqrt();
    let exact = excess_risk(&theta, &spec).unwrap();
    assert!(
        (mean - exact).abs() <= 3.0 * se,
        "mc {mean} ± {se}, exact {exact}"
    );
}

#[test]
fn harmonic_covariance_min_eigenvalue() {
    for p in [2, 7, 20] {
        let h = Covariance::harmonic(p, RngSeed(p as u64)).unwrap().matrix();
        let min = h.symmetric_eigen().eigenvalues.min();
        assert!(min >= 1.0 / p as f64 - 1e-8, "p={p}: {min}");
    }
}

/// `‖implicit − explicit‖` shrinks like γ²: halving γ divides the gap by ≈4.
/// For squared loss the exact ratio is `4(1+γc)/(1+2γc)`, just below 4.
#[test]
fn small_rate_gap_is_quadratic() {
    let mut rng = RngSeed(31).rng();
    let families = [
        Family::Squared,
        Family::Logistic,
        Family::Poisson,
        Family::SmoothedHinge { delta: 0.5 },
    ];
    for i in 0..100 {
        let family = families[i % 4];
        let loss = GlmLoss::new(family);
        let p = rng.random_range(1..=20);
        let x: Vec<f64> = (0..p)
            .map(|_| rng.sample::<f64, _>(StandardNormal) / (p as f64).sqrt())
            .collect();
        let prev: Vec<f64> = (0..p).map(|_| rng.sample(StandardNormal)).collect();
        let y = match family {
            Family::Squared => rng.sample(StandardNormal),
            Family::Poisson => 3.0,
            _ => 1.0,
        };
        let s = Sample::dense(x, y).unwrap();
        let gap = |gamma: f64| {
            let mut imp = OptimizerState::new(Algorithm::Isgd, prev.clone());
            imp.implicit_step(&s, gamma, &loss, DEFAULT_TOL).unwrap();
            let mut exp = OptimizerState::new(Algorithm::Sgd, prev.clone());
            exp.explicit_step(&s, gamma, &loss).unwrap();
            aisgd::vector::dist(&imp.theta, &exp.theta)
        };
        let gamma = 1e-3;
        let (g1, g2) = (gap(gamma), gap(gamma / 2.0));
        if g1 == 0.0 {
            continue;
        }
        let ratio = g1 / g2;
        assert!(
            (3.9..=4.1).contains(&ratio),
            "case {i} {family}: ratio {ratio}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn excess_risk_dominates_scaled_distance(
        seed in 0u64..1000,
        p in 1usize..15,
        raw in prop::collection::vec(-5.0..5.0f64, 15),
    ) {
        let spec = SyntheticSpec::harmonic(1, p, RngSeed(seed)).unwrap();
        let theta = &raw[..p];
        let d2: f64 = theta.iter().map(|v| v * v).sum();
        let risk = excess_risk(theta, &spec).unwrap();
        prop_assert!(risk >= d2 / p as f64 - 1e-10 * (1.0 + d2));
    }

    #[test]
    fn implicit_step_is_proximal(
        seed in 0u64..10_000,
        fam in 0usize..4,
        log_gamma in -3.0..1.0f64,
        lambda in prop_oneof![Just(0.0), 0.0..1.0f64],
    ) {
        let family = [Family::Squared, Family::Logistic, Family::Poisson, Family::SmoothedHinge { delta: 0.25 }][fam];
        let loss = GlmLoss::with_lambda(family, lambda).unwrap();
        let mut rng = RngSeed(seed).rng();
        let p = rng.random_range(1..=10);
        let x: Vec<f64> = (0..p).map(|_| rng.sample::<f64, _>(StandardNormal) / (p as f64).sqrt()).collect();
        let prev: Vec<f64> = (0..p).map(|_| rng.sample(StandardNormal)).collect();
        let y = match family {
            Family::Squared => rng.sample(StandardNormal),
            Family::Poisson => f64::from(rng.random_range(0..6u8)),
            _ => if rng.random_bool(0.5) { 1.0 } else { -1.0 },
        };
        let gamma = 10f64.powf(log_gamma);
        let s = Sample::dense(x, y).unwrap();
        let mut st = OptimizerState::new(Algorithm::Aisgd, prev.clone());
        st.implicit_step(&s, gamma, &loss, DEFAULT_TOL).unwrap();
        let prox = |t: &[f64]| {
            let d2: f64 = t.iter().zip(&prev).map(|(a, b)| (a - b).powi(2)).sum();
            d2 / (2.0 * gamma) + loss.objective(t, &s).unwrap()
        };
        let at = prox(&st.theta);
        // any small perturbation must not lower the objective
        for j in 0..p {
            for h in [1e-4, -1e-4] {
                let mut t = st.theta.clone();
                t[j] += h;
                prop_assert!(at <= prox(&t) + 1e-12 * (1.0 + at.abs()));
            }
        }
    }
}
