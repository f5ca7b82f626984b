//! Damped Gauss-Newton (Levenberg-Marquardt) least squares for scalar models
//! `y = f(x; p)` with a central-difference Jacobian.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// A curve-fitting problem: model, observations and a starting point.
pub struct FitProblem<M> {
    model: M,
    data: Vec<(f64, f64)>,
    initial_guess: Vec<f64>,
    tolerance: f64,
}

impl<M> FitProblem<M>
where
    M: Fn(f64, &[f64]) -> f64,
{
    /// `tolerance` is the relative decrease of the squared residual below
    /// which an accepted step counts as stationary.
    pub fn new(model: M, data: Vec<(f64, f64)>, initial_guess: Vec<f64>, tolerance: f64) -> Result<Self> {
        if initial_guess.is_empty() {
            return Err(Error::domain("fit needs at least one parameter"));
        }
        if data.len() < initial_guess.len() {
            return Err(Error::domain(format!(
                "{} data points cannot determine {} parameters",
                data.len(),
                initial_guess.len()
            )));
        }
        if data.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::domain("abscissas must be strictly increasing"));
        }
        if data.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::domain("data must be finite"));
        }
        if !(tolerance > 0.0) {
            return Err(Error::domain("tolerance must be positive"));
        }
        Ok(FitProblem {
            model,
            data,
            initial_guess,
            tolerance,
        })
    }

    pub fn data(&self) -> &[(f64, f64)] {
        &self.data
    }

    fn sum_of_squares(&self, p: &[f64]) -> f64 {
        self.data
            .iter()
            .map(|&(x, y)| {
                let r = y - (self.model)(x, p);
                r * r
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub parameters: Vec<f64>,
    /// Sum of squared residuals at `parameters`.
    pub residual: f64,
    /// Number of trial steps taken (accepted and rejected).
    pub iterations: usize,
    pub converged: bool,
    /// Squared residual after the start and after every accepted step.
    pub history: Vec<f64>,
}

/// Solver settings. Damping starts at 1e-3 and is scaled by 10 up on a
/// rejected step and down on an accepted one; at most 200 trial steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevenbergMarquardt {
    pub initial_damping: f64,
    pub damping_factor: f64,
    pub max_iterations: usize,
}

impl Default for LevenbergMarquardt {
    fn default() -> Self {
        LevenbergMarquardt {
            initial_damping: 1e-3,
            damping_factor: 10.0,
            max_iterations: 200,
        }
    }
}

const MAX_DAMPING: f64 = 1e16;

impl LevenbergMarquardt {
    /// Run the solver. Non-convergence is not an error here: the report carries
    /// the best parameters found and `converged == false`.
    pub fn minimize<M>(&self, problem: &FitProblem<M>) -> Result<FitReport>
    where
        M: Fn(f64, &[f64]) -> f64,
    {
        let n = problem.initial_guess.len();
        let m = problem.data.len();
        let mut p = problem.initial_guess.clone();
        let mut cost = problem.sum_of_squares(&p);
        if !cost.is_finite() {
            return Err(Error::domain("model is not finite at the initial guess"));
        }
        let mut history = vec![cost];
        let mut damping = self.initial_damping;
        let mut iterations = 0;
        let mut converged = cost == 0.0;

        let mut jac = DMatrix::<f64>::zeros(m, n);
        let mut resid = DVector::<f64>::zeros(m);

        'outer: while !converged && iterations < self.max_iterations {
            jacobian(problem, &p, &mut jac, &mut resid);
            let jtj = jac.tr_mul(&jac);
            let grad = jac.tr_mul(&resid);
            if grad.amax() == 0.0 {
                converged = true;
                break;
            }

            loop {
                iterations += 1;
                let mut lhs = jtj.clone();
                for i in 0..n {
                    lhs[(i, i)] += damping * jtj[(i, i)];
                }
                let step = match lhs.cholesky() {
                    Some(ch) => ch.solve(&grad),
                    None => return Err(Error::Singular { iteration: iterations }),
                };
                let trial: Vec<f64> = p.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
                let trial_cost = problem.sum_of_squares(&trial);

                if trial_cost.is_finite() && trial_cost < cost {
                    let decrease = cost - trial_cost;
                    let step_small = step.iter().zip(&p).all(|(s, x)| s.abs() <= 1e-14 * (x.abs() + 1e-14));
                    p = trial;
                    cost = trial_cost;
                    history.push(cost);
                    damping /= self.damping_factor;
                    if decrease <= problem.tolerance * cost || step_small || cost == 0.0 {
                        converged = true;
                    }
                    continue 'outer;
                }

                damping *= self.damping_factor;
                if damping > MAX_DAMPING {
                    // No descent direction is resolvable at this precision.
                    converged = true;
                    break 'outer;
                }
                if iterations >= self.max_iterations {
                    break 'outer;
                }
            }
        }

        Ok(FitReport {
            parameters: p,
            residual: cost,
            iterations,
            converged,
            history,
        })
    }
}

/// Columns are ∂f/∂p_j; `resid` receives `y − f`.
fn jacobian<M>(problem: &FitProblem<M>, p: &[f64], jac: &mut DMatrix<f64>, resid: &mut DVector<f64>)
where
    M: Fn(f64, &[f64]) -> f64,
{
    let mut work = p.to_vec();
    for (i, &(x, y)) in problem.data.iter().enumerate() {
        resid[i] = y - (problem.model)(x, p);
    }
    for j in 0..p.len() {
        let h = f64::EPSILON.cbrt() * p[j].abs().max(1.0);
        work[j] = p[j] + h;
        let up: Vec<f64> = problem.data.iter().map(|&(x, _)| (problem.model)(x, &work)).collect();
        work[j] = p[j] - h;
        for (i, &(x, _)) in problem.data.iter().enumerate() {
            jac[(i, j)] = (up[i] - (problem.model)(x, &work)) / (2.0 * h);
        }
        work[j] = p[j];
    }
}

/// Fit with default settings; non-convergence within the iteration cap is an error.
pub fn fit_least_squares<M>(problem: &FitProblem<M>) -> Result<(Vec<f64>, f64)>
where
    M: Fn(f64, &[f64]) -> f64,
{
    let report = LevenbergMarquardt::default().minimize(problem)?;
    if !report.converged {
        return Err(Error::NotConverged {
            iterations: report.iterations,
            residual: report.residual,
        });
    }
    Ok((report.parameters, report.residual))
}
