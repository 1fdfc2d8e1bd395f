//! Logit regression of a binary response on binary regressors, fitted over
//! the regressor cells of a contingency table.
//!
//! Regressors use 0/1 dummy coding with level 1 active, so the intercept is
//! the log-odds at the all-zero cell and each interaction coefficient is a
//! difference of lower-order log odds-ratios.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use libm::{exp, log, log1p, sqrt};

use crate::error::{Error, Result};
use crate::formula::{term_label, LogitFormula};
use crate::linalg;
use crate::measures::TwoByTwo;
use crate::table::{CellAddress, ContingencyTable, Schema};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogitOptions {
    /// Convergence threshold on the largest absolute score component.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for LogitOptions {
    fn default() -> Self {
        LogitOptions {
            tol: 1e-8,
            max_iter: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Coefficient {
    /// Regressor names of the term; empty for the intercept.
    pub term: Vec<String>,
    pub label: String,
    pub estimate: f64,
    pub se: Option<f64>,
    pub z: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LogitFit {
    pub formula: LogitFormula,
    /// Regressors in table order; indexes `cases`, `totals` and `fitted_probabilities`.
    pub regressors: Schema,
    pub cases: Vec<f64>,
    pub totals: Vec<f64>,
    /// Intercept first, then the formula terms in order.
    pub coefficients: Vec<Coefficient>,
    pub fitted_probabilities: Vec<f64>,
    /// LR statistic against the saturated logit.
    pub deviance: f64,
    pub df: usize,
    pub converged: bool,
    /// Some cell with all cases or all controls is fitted at probability
    /// within 1e-8 of 0 or 1: the estimates are drifting to infinity.
    pub separation: bool,
    pub iterations: usize,
    pub max_abs_score: f64,
}

impl LogitFit {
    pub fn coefficient(&self, label: &str) -> Option<&Coefficient> {
        self.coefficients.iter().find(|c| c.label == label)
    }

    /// Fitted case and control counts per regressor cell.
    pub fn fitted_counts(&self) -> (Vec<f64>, Vec<f64>) {
        let cases = self
            .totals
            .iter()
            .zip(&self.fitted_probabilities)
            .map(|(n, p)| n * p)
            .collect();
        let controls = self
            .totals
            .iter()
            .zip(&self.fitted_probabilities)
            .map(|(n, p)| n * (1.0 - p))
            .collect();
        (cases, controls)
    }
}

/// Binomial log-likelihood over the regressor cells for a given design.
#[derive(Clone, Debug)]
pub struct LogitProblem {
    formula: LogitFormula,
    regressors: Schema,
    cases: Vec<f64>,
    totals: Vec<f64>,
    /// Rows of the design for cells with positive total, row-major.
    design: Vec<f64>,
    rows: Vec<usize>,
    p: usize,
}

fn log_sigmoid(eta: f64) -> f64 {
    if eta >= 0.0 {
        -log1p(exp(-eta))
    } else {
        eta - log1p(exp(eta))
    }
}

fn sigmoid(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + exp(-eta))
    } else {
        let e = exp(eta);
        e / (1.0 + e)
    }
}

fn xlogy(x: f64, y: f64) -> f64 {
    if x > 0.0 {
        x * log(x / y)
    } else {
        0.0
    }
}

impl LogitProblem {
    /// Collapse `observed` onto the response and the formula regressors and
    /// build the dummy-coded design.
    pub fn new(observed: &ContingencyTable, formula: &LogitFormula) -> Result<Self> {
        formula.bind(observed.schema())?;
        let mut keep: Vec<&str> = vec![formula.response()];
        keep.extend(formula.variables().iter().map(String::as_str));
        let margin = observed.marginalize(&keep)?;
        let resp = formula.response();
        let regs: Vec<&str> = margin
            .schema()
            .names()
            .iter()
            .map(String::as_str)
            .filter(|n| *n != resp)
            .collect();
        let cases = margin.condition(&CellAddress::new([(resp, 1)])?)?.table;
        let controls = margin.condition(&CellAddress::new([(resp, 0)])?)?.table;
        let regressors = Schema::new(regs.iter().copied())?;
        let cases_v = cases.into_counts();
        let totals: Vec<f64> = cases_v
            .iter()
            .zip(controls.counts())
            .map(|(a, b)| a + b)
            .collect();
        let term_pos: Vec<Vec<usize>> = formula
            .terms()
            .iter()
            .map(|t| regressors.positions(t))
            .collect::<Result<_>>()?;
        let p = term_pos.len() + 1;
        let rows: Vec<usize> = (0..regressors.cells())
            .filter(|&i| totals[i] > 0.0)
            .collect();
        let mut design = Vec::with_capacity(rows.len() * p);
        for &i in &rows {
            design.push(1.0);
            for t in &term_pos {
                let on = t.iter().all(|&q| regressors.level(i, q) == 1);
                design.push(if on { 1.0 } else { 0.0 });
            }
        }
        Ok(LogitProblem {
            formula: formula.clone(),
            regressors,
            cases: cases_v,
            totals,
            design,
            rows,
            p,
        })
    }

    pub fn parameter_count(&self) -> usize {
        self.p
    }

    fn eta(&self, beta: &[f64]) -> Vec<f64> {
        self.design
            .chunks(self.p)
            .map(|x| x.iter().zip(beta).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn log_likelihood(&self, beta: &[f64]) -> f64 {
        self.eta(beta)
            .iter()
            .zip(&self.rows)
            .map(|(&e, &i)| {
                let y = self.cases[i];
                let n = self.totals[i];
                y * log_sigmoid(e) + (n - y) * log_sigmoid(-e)
            })
            .sum()
    }

    /// Gradient of the log-likelihood: `X'(y - n p)`.
    pub fn score(&self, beta: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.p];
        for ((x, e), &i) in self
            .design
            .chunks(self.p)
            .zip(self.eta(beta))
            .zip(&self.rows)
        {
            let r = self.cases[i] - self.totals[i] * sigmoid(e);
            for (gj, xj) in g.iter_mut().zip(x) {
                *gj += xj * r;
            }
        }
        g
    }

    /// Fisher information `X' diag(n p (1-p)) X`, row-major.
    pub fn information(&self, beta: &[f64]) -> Vec<f64> {
        let p = self.p;
        let mut info = vec![0.0; p * p];
        for ((x, e), &i) in self.design.chunks(p).zip(self.eta(beta)).zip(&self.rows) {
            let pr = sigmoid(e);
            let w = self.totals[i] * pr * (1.0 - pr);
            for a in 0..p {
                if x[a] == 0.0 {
                    continue;
                }
                for b in 0..p {
                    info[a * p + b] += w * x[a] * x[b];
                }
            }
        }
        info
    }

    fn deviance(&self, probs: &[f64]) -> f64 {
        let mut d = 0.0;
        for &i in &self.rows {
            let y = self.cases[i];
            let n = self.totals[i];
            let mu = n * probs[i];
            d += xlogy(y, mu) + xlogy(n - y, n - mu);
        }
        (2.0 * d).max(0.0)
    }

    fn probabilities(&self, beta: &[f64]) -> Vec<f64> {
        let mut probs = vec![f64::NAN; self.regressors.cells()];
        for (e, &i) in self.eta(beta).into_iter().zip(&self.rows) {
            probs[i] = sigmoid(e);
        }
        // cells without data still get a prediction
        for i in 0..probs.len() {
            if probs[i].is_nan() {
                let mut e = beta[0];
                for (t, b) in self.formula.terms().iter().zip(&beta[1..]) {
                    let on = t.iter().all(|v| {
                        self.regressors
                            .level(i, self.regressors.position(v).unwrap_or(0))
                            == 1
                    });
                    if on {
                        e += b;
                    }
                }
                probs[i] = sigmoid(e);
            }
        }
        probs
    }

    /// Newton-Raphson (equivalently IRLS) from zero with step halving.
    pub fn fit(&self, opts: LogitOptions) -> Result<LogitFit> {
        if !(opts.tol > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        if self.rows.is_empty() {
            return Err(Error::ZeroTotal);
        }
        let p = self.p;
        let mut beta = vec![0.0; p];
        let mut ll = self.log_likelihood(&beta);
        let mut dev = self.deviance(&self.probabilities(&beta));
        let mut iterations = 0;
        let mut converged = false;
        let mut max_score = f64::INFINITY;
        while iterations < opts.max_iter {
            let g = self.score(&beta);
            max_score = g.iter().fold(0.0, |m, x| f64::max(m, x.abs()));
            let Some(l) = linalg::cholesky(&self.information(&beta), p) else {
                break;
            };
            let step = linalg::cholesky_solve(&l, p, &g);
            let mut scale = 1.0;
            let mut next = beta.clone();
            let mut next_ll = f64::NEG_INFINITY;
            for _ in 0..40 {
                next = beta.iter().zip(&step).map(|(b, s)| b + scale * s).collect();
                next_ll = self.log_likelihood(&next);
                if next_ll >= ll - 1e-12 * ll.abs() {
                    break;
                }
                scale *= 0.5;
            }
            iterations += 1;
            let next_dev = self.deviance(&self.probabilities(&next));
            let rel = (dev - next_dev).abs() / (next_dev.abs() + 0.1);
            beta = next;
            ll = next_ll;
            dev = next_dev;
            let g = self.score(&beta);
            max_score = g.iter().fold(0.0, |m, x| f64::max(m, x.abs()));
            if max_score < opts.tol && rel < 1e-10 {
                converged = true;
                break;
            }
        }
        let info = self.information(&beta);
        let cov = linalg::cholesky(&info, p).map(|l| linalg::cholesky_inverse(&l, p));
        let mut coefficients = Vec::with_capacity(p);
        let mut names: Vec<Vec<String>> = vec![Vec::new()];
        names.extend(self.formula.terms().iter().cloned());
        for (j, term) in names.into_iter().enumerate() {
            let se = cov
                .as_ref()
                .map(|c| sqrt(c[j * p + j]))
                .filter(|s| s.is_finite() && *s > 0.0);
            coefficients.push(Coefficient {
                label: term_label(&term),
                term,
                estimate: beta[j],
                se,
                z: se.map(|s| beta[j] / s),
            });
        }
        let probs = self.probabilities(&beta);
        let separation = self.rows.iter().any(|&i| {
            let boundary = self.cases[i] == 0.0 || self.cases[i] == self.totals[i];
            boundary && (probs[i] < 1e-8 || probs[i] > 1.0 - 1e-8)
        });
        Ok(LogitFit {
            formula: self.formula.clone(),
            regressors: self.regressors.clone(),
            cases: self.cases.clone(),
            totals: self.totals.clone(),
            coefficients,
            deviance: self.deviance(&probs),
            fitted_probabilities: probs,
            df: self.rows.len().saturating_sub(p),
            converged: converged && !separation,
            separation,
            iterations,
            max_abs_score: max_score,
        })
    }
}

/// Maximum-likelihood logit fit of `formula` to the counts in `observed`,
/// which is first collapsed onto the formula variables.
pub fn fit_logit(
    observed: &ContingencyTable,
    formula: &LogitFormula,
    opts: LogitOptions,
) -> Result<LogitFit> {
    LogitProblem::new(observed, formula)?.fit(opts)
}

/// Difference of differences of four stratum log odds-ratios.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InteractionEstimate {
    pub estimate: Option<f64>,
    pub se: Option<f64>,
    pub z: Option<f64>,
}

/// Three-factor interaction from 2x2 tables indexed by two binary
/// modifiers, `strata[2 * i + j]` at levels `(i, j)`:
/// `log or(0,0) - log or(0,1) - log or(1,0) + log or(1,1)`, with standard
/// error the root of the sixteen reciprocal counts.
pub fn interaction_from_odds_ratios(strata: &[TwoByTwo; 4]) -> InteractionEstimate {
    let positive = strata.iter().all(|t| t.cells().iter().all(|&c| c > 0.0));
    if !positive {
        return InteractionEstimate {
            estimate: None,
            se: None,
            z: None,
        };
    }
    let lor = |t: &TwoByTwo| log(t.n11) + log(t.n00) - log(t.n10) - log(t.n01);
    let est = lor(&strata[0]) - lor(&strata[1]) - lor(&strata[2]) + lor(&strata[3]);
    let se = sqrt(
        strata
            .iter()
            .flat_map(|t| t.cells())
            .map(|c| 1.0 / c)
            .sum::<f64>(),
    );
    InteractionEstimate {
        estimate: Some(est),
        se: Some(se),
        z: Some(est / se),
    }
}

/// Fitted odds-ratios of the response and one regressor at each level
/// combination of `given`, from fitted counts summed over the remaining
/// regressors. Levels of `given` are listed lexicographically.
#[derive(Clone, Debug, PartialEq)]
pub struct FittedOddsRatios {
    pub factor: String,
    pub given: Vec<String>,
    pub values: Vec<(Vec<u8>, Option<f64>)>,
}

pub fn fitted_odds_ratios<S: AsRef<str>>(
    fit: &LogitFit,
    factor: &str,
    given: &[S],
) -> Result<FittedOddsRatios> {
    let regs = &fit.regressors;
    let f = regs.require(factor)?;
    let mut g = Vec::with_capacity(given.len());
    for name in given {
        let p = regs.require(name.as_ref())?;
        if p == f || g.contains(&p) {
            return Err(Error::InvalidArgument(alloc::format!(
                "conditioning set must be distinct from `{factor}`"
            )));
        }
        g.push(p);
    }
    let k = g.len();
    let stratum = |i: usize| {
        g.iter().enumerate().fold(0usize, |acc, (j, &p)| {
            acc | ((regs.level(i, p) as usize) << (k - 1 - j))
        })
    };
    let (cases, controls) = fit.fitted_counts();
    // [stratum][factor level] -> (cases, controls)
    let mut acc = vec![[(0.0, 0.0); 2]; 1 << k];
    for i in 0..regs.cells() {
        if !(fit.totals[i] > 0.0) {
            continue;
        }
        let slot = &mut acc[stratum(i)][regs.level(i, f) as usize];
        slot.0 += cases[i];
        slot.1 += controls[i];
    }
    let values = acc
        .iter()
        .enumerate()
        .map(|(idx, [lo, hi])| {
            let num = hi.0 * lo.1;
            let den = lo.0 * hi.1;
            let or = if num > 0.0 && den > 0.0 {
                Some(num / den)
            } else {
                None
            };
            let levels = (0..k).map(|j| ((idx >> (k - 1 - j)) & 1) as u8).collect();
            (levels, or)
        })
        .collect();
    Ok(FittedOddsRatios {
        factor: factor.into(),
        given: g.iter().map(|&p| regs.name(p).into()).collect(),
        values,
    })
}
