use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::config::check_grid;
use super::scan::FringeScan;
use crate::error::{Error, Result};
use crate::uur::principal_arg;

/// `A2 / scale` below this leaves `theta0` unconstrained.
pub const PHASE_IDENTIFIABILITY: f64 = 1e-3;

/// Internal coordinates used while fitting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameterisation {
    /// `A1 + A2 cos^2((theta - theta0)/2)`, refined by damped Gauss–Newton.
    #[default]
    CosSquared,
    /// `m + a cos(theta) + b sin(theta)`, solved as linear least squares.
    Harmonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub parameterisation: Parameterisation,
    pub max_iterations: usize,
    /// Stop once every parameter moves by less than this, relative.
    pub rel_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            parameterisation: Parameterisation::CosSquared,
            max_iterations: 200,
            rel_tol: 1e-12,
        }
    }
}

/// Fitted `A1 + A2 cos^2((theta - theta0)/2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FringeFit {
    #[serde(default)]
    pub left: String,
    #[serde(default)]
    pub right: String,
    #[serde(rename = "A1")]
    pub a1: f64,
    #[serde(rename = "A2")]
    pub a2: f64,
    /// Fringe maximum, in `(-pi, pi]`.
    pub theta0: f64,
    #[serde(rename = "se_A1")]
    pub se_a1: f64,
    #[serde(rename = "se_A2")]
    pub se_a2: f64,
    pub se_theta0: f64,
    /// `A2 / (2 A1 + A2)`.
    pub visibility: f64,
    pub visibility_se: f64,
    pub chi2_dof: f64,
    pub theta0_constrained: bool,
    pub iterations: usize,
}

impl FringeFit {
    pub fn model(&self, theta: f64) -> f64 {
        cos2_model(&Vector3::new(self.a1, self.a2, self.theta0), theta)
    }

    pub fn label(&self) -> String {
        format!("{}_{}", self.left, self.right)
    }

    pub(crate) fn require_phase(&self) -> Result<()> {
        if self.theta0_constrained {
            Ok(())
        } else {
            Err(Error::UnconstrainedPhase(self.label()))
        }
    }
}

fn cos2_model(p: &Vector3<f64>, theta: f64) -> f64 {
    p[0] + p[1] * 0.5 * (1.0 + (theta - p[2]).cos())
}

fn cos2_gradient(p: &Vector3<f64>, theta: f64) -> Vector3<f64> {
    let x = theta - p[2];
    Vector3::new(1.0, 0.5 * (1.0 + x.cos()), 0.5 * p[1] * x.sin())
}

struct Data {
    theta: Vec<f64>,
    y: Vec<f64>,
    w: Vec<f64>,
}

impl Data {
    fn chi2(&self, p: &Vector3<f64>) -> f64 {
        (0..self.y.len())
            .map(|i| {
                let r = self.y[i] - cos2_model(p, self.theta[i]);
                self.w[i] * r * r
            })
            .sum()
    }

    /// `J^T W J` and `J^T W r` over the active parameters.
    fn normal_equations(
        &self,
        p: &Vector3<f64>,
        active: [bool; 3],
    ) -> (Matrix3<f64>, Vector3<f64>) {
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for i in 0..self.y.len() {
            let mut g = cos2_gradient(p, self.theta[i]);
            for k in 0..3 {
                if !active[k] {
                    g[k] = 0.0;
                }
            }
            let r = self.y[i] - cos2_model(p, self.theta[i]);
            jtj += g * g.transpose() * self.w[i];
            jtr += g * (self.w[i] * r);
        }
        for k in 0..3 {
            if !active[k] {
                jtj[(k, k)] = 1.0;
            }
        }
        (jtj, jtr)
    }
}

/// Linear least squares for `m + a cos + b sin` with the given weights,
/// mapped to `(A1, A2, theta0)`.
fn harmonic_solution(data: &Data, weights: &[f64]) -> Result<Vector3<f64>> {
    let mut m = Matrix3::zeros();
    let mut rhs = Vector3::zeros();
    for ((theta, y), w) in data.theta.iter().zip(&data.y).zip(weights) {
        let (s, c) = theta.sin_cos();
        let g = Vector3::new(1.0, c, s);
        m += g * g.transpose() * *w;
        rhs += g * (w * y);
    }
    let x = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::NonSpanningGrid("phase settings do not determine a fringe".into()))?;
    let amp = x[1].hypot(x[2]);
    Ok(Vector3::new(x[0] - amp, 2.0 * amp, x[2].atan2(x[1])))
}

fn normalise(p: &mut Vector3<f64>) {
    if p[1] < 0.0 {
        p[0] += p[1];
        p[1] = -p[1];
        p[2] += std::f64::consts::PI;
    }
    p[2] = principal_arg(crate::Complex64::from_polar(1.0, p[2]));
}

/// Relative step below which the full step is taken without a line search.
const POLISH_STEP: f64 = 1e-6;

fn gauss_newton(
    data: &Data,
    mut p: Vector3<f64>,
    active: [bool; 3],
    opts: &FitOptions,
) -> (Vector3<f64>, usize) {
    let mut chi2 = data.chi2(&p);
    for it in 1..=opts.max_iterations {
        let (jtj, jtr) = data.normal_equations(&p, active);
        let Some(step) = jtj.lu().solve(&jtr) else {
            return (p, it);
        };
        let small = (0..3).all(|k| {
            let scale = if k == 2 { 1.0 } else { p[k].abs().max(1.0) };
            step[k].abs() <= POLISH_STEP * scale
        });
        let mut lambda = 1.0;
        let mut accepted = small.then(|| (p + step, data.chi2(&(p + step))));
        for _ in 0..40 {
            if accepted.is_some() {
                break;
            }
            let trial = p + step * lambda;
            let c = data.chi2(&trial);
            if c <= chi2 {
                accepted = Some((trial, c));
                break;
            }
            lambda *= 0.5;
        }
        let Some((next, c)) = accepted else {
            return (p, it);
        };
        let converged = (0..3).all(|k| {
            let scale = if k == 2 { 1.0 } else { p[k].abs().max(1.0) };
            (next[k] - p[k]).abs() <= opts.rel_tol * scale
        });
        p = next;
        chi2 = c;
        if converged {
            return (p, it);
        }
    }
    (p, opts.max_iterations)
}

pub fn fit_fringe(scan: &FringeScan) -> Result<FringeFit> {
    fit_fringe_with(scan, &FitOptions::default())
}

/// Weighted least-squares fringe fit with Poisson weights `1/max(count, 1)`.
///
/// Standard errors come from `(J^T W J)^{-1}` at the optimum. A fit
/// that wants `A1 < 0` is repeated with `A1` pinned to zero.
pub fn fit_fringe_with(scan: &FringeScan, opts: &FitOptions) -> Result<FringeFit> {
    let theta = scan.thetas();
    check_grid(&theta)?;
    let y = scan.counts();
    let w: Vec<f64> = y.iter().map(|&c| 1.0 / c.max(1.0)).collect();
    let data = Data { theta, y, w };

    let (mut p, mut iterations) = match opts.parameterisation {
        Parameterisation::Harmonic => (harmonic_solution(&data, &data.w)?, 0),
        Parameterisation::CosSquared => {
            let ones = vec![1.0; data.y.len()];
            let mut start = harmonic_solution(&data, &ones)?;
            normalise(&mut start);
            gauss_newton(&data, start, [true; 3], opts)
        }
    };
    normalise(&mut p);
    if p[0] < 0.0 {
        p[0] = 0.0;
        let (q, extra) = gauss_newton(&data, p, [false, true, true], opts);
        p = q;
        p[0] = 0.0;
        iterations += extra;
        normalise(&mut p);
    }

    let (jtj, _) = data.normal_equations(&p, [true; 3]);
    let cov = jtj
        .try_inverse()
        .unwrap_or_else(|| Matrix3::from_element(f64::INFINITY));
    let se = |k: usize| cov[(k, k)].max(0.0).sqrt();

    let (a1, a2) = (p[0], p[1]);
    let total = 2.0 * a1 + a2;
    let visibility = if total > 0.0 { a2 / total } else { 0.0 };
    let visibility_se = if total > 0.0 {
        let grad = Vector3::new(-2.0 * a2 / (total * total), 2.0 * a1 / (total * total), 0.0);
        (grad.transpose() * cov * grad)[(0, 0)].max(0.0).sqrt()
    } else {
        f64::INFINITY
    };
    let scale = scan.counts_scale.unwrap_or(total);
    let theta0_constrained = scale > 0.0 && a2 / scale >= PHASE_IDENTIFIABILITY;
    let dof = data.y.len().saturating_sub(3).max(1) as f64;

    Ok(FringeFit {
        left: scan.left.clone(),
        right: scan.right.clone(),
        a1,
        a2,
        theta0: p[2],
        se_a1: se(0),
        se_a2: se(1),
        se_theta0: se(2),
        visibility,
        visibility_se,
        chi2_dof: data.chi2(&p) / dof,
        theta0_constrained,
        iterations,
    })
}
