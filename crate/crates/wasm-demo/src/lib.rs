//! Browser bindings for the demo page in `www/`.

use aisgd::experiments::{
    parse_kv, prepare, run_prepared, sensitivity_sweep, ExperimentConfig, SweepAxis,
};
use aisgd::solver::DEFAULT_TOL;
use aisgd::{solve_fixed_point, Family, GlmLoss, Sample};
use wasm_bindgen::prelude::*;

fn js_err(e: aisgd::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// A family of curves over a shared x axis. Non-finite values mark divergence.
#[wasm_bindgen]
pub struct Curves {
    xs: Vec<f64>,
    labels: Vec<String>,
    series: Vec<Vec<f64>>,
}

#[wasm_bindgen]
impl Curves {
    pub fn xs(&self) -> Vec<f64> {
        self.xs.clone()
    }

    pub fn count(&self) -> usize {
        self.series.len()
    }

    pub fn label(&self, i: usize) -> String {
        self.labels.get(i).cloned().unwrap_or_default()
    }

    pub fn series(&self, i: usize) -> Vec<f64> {
        self.series.get(i).cloned().unwrap_or_default()
    }
}

fn config(text: &str) -> Result<ExperimentConfig, aisgd::Error> {
    ExperimentConfig::from_map(&parse_kv(text)?)
}

/// Excess-risk traces of aisgd, asgd and isgd with constant rate `scale/R²`
/// on a 20-dimensional linear task, evaluated at log-spaced checkpoints.
#[wasm_bindgen]
pub fn stability_traces(scale: f64, n: u32, seed: u32) -> Result<Curves, JsValue> {
    let cfg = config(&format!(
        "task = linear
         algorithms = aisgd, asgd, isgd
         loss = squared
         schedule.kind = constant
         schedule.gamma = {scale}
         schedule.scale = r2
         n = {n}
         p = 20
         theta0 = unit
         eval.log_points = 120
         seed = {seed}
         out = ."
    ))
    .map_err(js_err)?;
    let prep = prepare(&cfg).map_err(js_err)?;
    let runs = run_prepared(&cfg, &prep).map_err(js_err)?;
    let xs = runs[0].trace.points.iter().map(|p| p.n as f64).collect();
    Ok(Curves {
        xs,
        labels: runs
            .iter()
            .map(|r| r.algorithm.name().to_string())
            .collect(),
        series: runs
            .iter()
            .map(|r| r.trace.points.iter().map(|p| p.metric).collect())
            .collect(),
    })
}

/// One implicit step in the coordinate `u` along `x`: the map
/// `u ↦ γ·g(u0 + u·c)` sampled over the search bracket, and its fixed point.
#[wasm_bindgen]
pub struct FixedPointView {
    us: Vec<f64>,
    hs: Vec<f64>,
    pub u_star: f64,
    pub s_n: f64,
    pub bound: f64,
    pub iterations: u32,
}

#[wasm_bindgen]
impl FixedPointView {
    pub fn us(&self) -> Vec<f64> {
        self.us.clone()
    }

    pub fn hs(&self) -> Vec<f64> {
        self.hs.clone()
    }
}

/// `c = ‖x‖²` and `u0 = xᵀθ` are set directly through a one-dimensional
/// sample `x = √c`, `θ = u0/√c`.
#[wasm_bindgen]
pub fn fixed_point(
    family: &str,
    u0: f64,
    c: f64,
    y: f64,
    gamma: f64,
) -> Result<FixedPointView, JsValue> {
    if c.is_nan() || c <= 0.0 {
        return Err(JsValue::from_str("c must be positive"));
    }
    let family: Family = family.parse().map_err(js_err)?;
    let loss = GlmLoss::new(family);
    let x = c.sqrt();
    let sample = Sample::dense(vec![x], y).map_err(js_err)?;
    let fp = solve_fixed_point(&loss, &sample, &[u0 / x], gamma, DEFAULT_TOL).map_err(js_err)?;

    let span = if fp.bound == 0.0 { 1.0 } else { fp.bound.abs() };
    let (lo, hi) = (
        -0.25 * span + fp.bound.min(0.0),
        0.25 * span + fp.bound.max(0.0),
    );
    let steps = 200;
    let mut us = Vec::with_capacity(steps + 1);
    let mut hs = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let u = lo + (hi - lo) * i as f64 / steps as f64;
        let g = -loss.deriv(u0 + u * c, y).map_err(js_err)?;
        us.push(u);
        hs.push(gamma * g);
    }
    Ok(FixedPointView {
        us,
        hs,
        u_star: fp.u_star,
        s_n: fp.s_n,
        bound: fp.bound,
        iterations: fp.iterations as u32,
    })
}

/// Final test error of aisgd and asgd on a logistic task for each λ in
/// `{10⁻², …, 10⁻⁶}`; `xs` holds `log10 λ`.
#[wasm_bindgen]
pub fn lambda_sweep(eta0_scale: f64, n: u32, seed: u32) -> Result<Curves, JsValue> {
    let cfg = config(&format!(
        "task = logistic
         algorithms = aisgd, asgd
         loss = logistic
         schedule.kind = xu
         schedule.eta0 = {eta0_scale}
         schedule.scale = r2
         n = {n}
         p = 20
         theta_star = ones
         test.n = 5000
         eval_every = {n}
         seed = {seed}
         out = ."
    ))
    .map_err(js_err)?;
    let lambdas = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
    let res = sensitivity_sweep(&cfg, SweepAxis::Lambda, &lambdas).map_err(js_err)?;
    let series = res
        .columns
        .iter()
        .map(|c| res.column(c).unwrap_or_default())
        .collect();
    Ok(Curves {
        xs: lambdas.iter().map(|l| l.log10()).collect(),
        labels: res.columns.clone(),
        series,
    })
}
