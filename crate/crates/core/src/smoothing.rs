//! Case-control smoothing: separate log-linear models for the case and the
//! control slices, recombined into one fitted table, plus collapsibility
//! checks for odds-ratios and relative risks.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use libm::sqrt;

use crate::error::{Error, Result};
use crate::graph::IndependenceStatement;
use crate::loglinear::{
    fit_independence, fit_ipf, log_contrast_variance, IpfOptions, LoglinearFit, LoglinearSpec,
};
use crate::measures::{odds_ratio, relative_risk, rr_mixture_weights, MixtureWeights, TwoByTwo};
use crate::table::{CellAddress, ContingencyTable, Schema};

/// Generators for the case slice and the control slice, over the
/// regressors (every variable except `response`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseControlModel {
    pub response: String,
    pub case_generators: Vec<Vec<String>>,
    pub control_generators: Vec<Vec<String>>,
}

impl CaseControlModel {
    pub fn new<S: AsRef<str>>(response: &str, case: &[Vec<S>], control: &[Vec<S>]) -> Self {
        let own = |g: &[Vec<S>]| -> Vec<Vec<String>> {
            g.iter()
                .map(|t| t.iter().map(|v| String::from(v.as_ref())).collect())
                .collect()
        };
        CaseControlModel {
            response: response.into(),
            case_generators: own(case),
            control_generators: own(control),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmoothedEstimates {
    pub response: String,
    pub observed: ContingencyTable,
    /// Fitted counts over the observed schema.
    pub fitted: ContingencyTable,
    pub case_fit: LoglinearFit,
    pub control_fit: LoglinearFit,
    pub case_total: f64,
    pub control_total: f64,
}

/// Smoothed odds-ratio of the response and a factor in one stratum.
#[derive(Clone, Debug, PartialEq)]
pub struct StratumOddsRatio {
    /// Levels of the conditioning variables, in their listed order.
    pub levels: Vec<u8>,
    pub odds_ratio: Option<f64>,
    /// Delta-method standard error of the log odds-ratio under the two
    /// fitted models.
    pub log_se: Option<f64>,
    pub observed_odds_ratio: Option<f64>,
    /// `sqrt(sum 1/n)` over the four observed counts.
    pub observed_log_se: Option<f64>,
}

/// Fit both slices and recombine.
pub fn smooth(
    observed: &ContingencyTable,
    model: &CaseControlModel,
    opts: IpfOptions,
) -> Result<SmoothedEstimates> {
    let schema = observed.schema();
    let r = schema.require(&model.response)?;
    let slice =
        |level: u8| observed.condition(&CellAddress::new([(model.response.as_str(), level)])?);
    let controls = slice(0)?.table;
    let cases = slice(1)?.table;
    let regs = controls.schema().clone();
    let control_spec = LoglinearSpec::new(regs.clone(), &model.control_generators)?;
    let case_spec = LoglinearSpec::new(regs.clone(), &model.case_generators)?;
    let control_fit = fit_ipf(&controls, &control_spec, opts)?;
    let case_fit = fit_ipf(&cases, &case_spec, opts)?;

    let rest: Vec<usize> = (0..schema.len()).filter(|&p| p != r).collect();
    let to_reg = schema.projection(&rest);
    let fitted = (0..schema.cells())
        .map(|i| {
            let src = if schema.level(i, r) == 1 {
                &case_fit
            } else {
                &control_fit
            };
            src.fitted.counts()[to_reg[i]]
        })
        .collect();
    Ok(SmoothedEstimates {
        response: model.response.clone(),
        observed: observed.clone(),
        fitted: ContingencyTable::new(schema.clone(), fitted)?,
        case_total: cases.total(),
        control_total: controls.total(),
        case_fit,
        control_fit,
    })
}

impl SmoothedEstimates {
    fn regressors(&self) -> &Schema {
        self.control_fit.fitted.schema()
    }

    /// Odds-ratios of the response and `factor` at every level combination
    /// of `given`, from fitted counts summed over the other regressors.
    pub fn odds_ratios<S: AsRef<str>>(
        &self,
        factor: &str,
        given: &[S],
    ) -> Result<Vec<StratumOddsRatio>> {
        let regs = self.regressors();
        let f = regs.require(factor)?;
        let mut g = Vec::with_capacity(given.len());
        for name in given {
            let p = regs.require(name.as_ref())?;
            if p == f || g.contains(&p) {
                return Err(Error::InvalidArgument(
                    "conditioning set must be distinct from the factor".into(),
                ));
            }
            g.push(p);
        }
        let cases_obs = self
            .observed
            .condition(&CellAddress::new([(self.response.as_str(), 1)])?)?
            .table;
        let controls_obs = self
            .observed
            .condition(&CellAddress::new([(self.response.as_str(), 0)])?)?
            .table;

        let mut out = Vec::with_capacity(1 << g.len());
        for k in 0..(1usize << g.len()) {
            let levels: Vec<u8> = (0..g.len())
                .map(|j| ((k >> (g.len() - 1 - j)) & 1) as u8)
                .collect();
            // cells of each slice in this stratum, split by factor level
            let mut cells = [Vec::new(), Vec::new()];
            for i in 0..regs.cells() {
                if g.iter().zip(&levels).all(|(&p, &l)| regs.level(i, p) == l) {
                    cells[regs.level(i, f) as usize].push(i);
                }
            }
            let sum = |t: &ContingencyTable, lv: usize| {
                cells[lv].iter().map(|&i| t.counts()[i]).sum::<f64>()
            };
            let fit_tab = TwoByTwo {
                n11: sum(&self.case_fit.fitted, 1),
                n10: sum(&self.case_fit.fitted, 0),
                n01: sum(&self.control_fit.fitted, 1),
                n00: sum(&self.control_fit.fitted, 0),
            };
            let obs_tab = TwoByTwo {
                n11: sum(&cases_obs, 1),
                n10: sum(&cases_obs, 0),
                n01: sum(&controls_obs, 1),
                n00: sum(&controls_obs, 0),
            };
            // d log(sum m) = sum (m_i / M) d log m_i
            let contrast = |fit: &LoglinearFit| -> Option<f64> {
                let mut w = Vec::new();
                for (lv, sign) in [(1usize, 1.0), (0, -1.0)] {
                    let total = sum(&fit.fitted, lv);
                    if total <= 0.0 {
                        return None;
                    }
                    w.extend(
                        cells[lv]
                            .iter()
                            .map(|&i| (i, sign * fit.fitted.counts()[i] / total)),
                    );
                }
                log_contrast_variance(fit, &w)
            };
            let log_se = match (contrast(&self.case_fit), contrast(&self.control_fit)) {
                (Some(a), Some(b)) if a + b >= 0.0 => Some(sqrt(a + b)),
                _ => None,
            };
            let observed_log_se = if obs_tab.cells().iter().all(|&c| c > 0.0) {
                Some(sqrt(obs_tab.cells().iter().map(|c| 1.0 / c).sum::<f64>()))
            } else {
                None
            };
            out.push(StratumOddsRatio {
                levels,
                odds_ratio: odds_ratio(&fit_tab),
                log_se,
                observed_odds_ratio: odds_ratio(&obs_tab),
                observed_log_se,
            });
        }
        Ok(out)
    }
}

/// How a statement about the data is judged.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Evidence {
    /// An analytic distribution: statements hold when cross-products agree
    /// to relative `rel_tol`.
    Exact { rel_tol: f64 },
    /// Sampled counts: a statement holds when its likelihood-ratio test is
    /// not rejected at level `alpha`.
    Sampled { alpha: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionCheck {
    pub statement: IndependenceStatement,
    pub deviance: f64,
    pub df: usize,
    pub p_value: f64,
    pub holds: bool,
}

/// Which of the two sufficient conditions hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionMet {
    Neither,
    First,
    Second,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    OddsRatio,
    RelativeRisk,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CollapsibilityReport {
    pub measure: Measure,
    /// Association of the pair at `over = 0` and `over = 1`.
    pub conditional: [Option<f64>; 2],
    pub marginal: Option<f64>,
    pub first: ConditionCheck,
    pub second: ConditionCheck,
    pub condition: ConditionMet,
    /// Exact evidence: the conditional values agree with each other and the
    /// marginal. Sampled evidence: some sufficient condition is not rejected.
    pub collapsible: bool,
    /// Mixture identity for relative risks.
    pub mixture: Option<MixtureWeights>,
}

fn check(
    t: &ContingencyTable,
    s: IndependenceStatement,
    evidence: Evidence,
) -> Result<ConditionCheck> {
    let fit = fit_independence(
        t,
        &s,
        IpfOptions {
            tol: 1e-11,
            max_iter: 1000,
        },
    )?;
    let holds = match evidence {
        Evidence::Exact { rel_tol } => {
            // every 2x2 slice has equal cross-products
            let mut ok = true;
            let x = &s.a[0];
            let y = &s.b[0];
            let margin = t.marginalize(&s.variables())?;
            for k in 0..(1usize << s.c.len()) {
                let addr = CellAddress::new(
                    s.c.iter()
                        .enumerate()
                        .map(|(j, v)| (v.as_str(), ((k >> j) & 1) as u8)),
                )?;
                let slice = margin.condition(&addr)?.table;
                let tab = TwoByTwo::from_table(&slice, x, y)?;
                let (p, q) = (tab.n11 * tab.n00, tab.n10 * tab.n01);
                if (p - q).abs() > rel_tol * p.max(q) {
                    ok = false;
                }
            }
            ok
        }
        Evidence::Sampled { alpha } => fit.p_value >= alpha,
    };
    Ok(ConditionCheck {
        statement: s,
        deviance: fit.deviance,
        df: fit.df,
        p_value: fit.p_value,
        holds,
    })
}

fn met(first: bool, second: bool) -> ConditionMet {
    match (first, second) {
        (true, true) => ConditionMet::Both,
        (true, false) => ConditionMet::First,
        (false, true) => ConditionMet::Second,
        (false, false) => ConditionMet::Neither,
    }
}

fn close(a: Option<f64>, b: Option<f64>, rel_tol: f64) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => (x - y).abs() <= rel_tol * x.abs().max(y.abs()),
        _ => false,
    }
}

fn validate(a: &str, b: &str, over: &str) -> Result<()> {
    if a == b || a == over || b == over {
        return Err(Error::InvalidArgument("variables must be distinct".into()));
    }
    Ok(())
}

fn check_evidence(evidence: Evidence) -> Result<()> {
    match evidence {
        Evidence::Exact { rel_tol } if !(rel_tol >= 0.0) => Err(Error::InvalidArgument(
            "tolerance must be nonnegative".into(),
        )),
        Evidence::Sampled { alpha } if !(alpha > 0.0 && alpha < 1.0) => {
            Err(Error::InvalidArgument("alpha must lie in (0, 1)".into()))
        }
        _ => Ok(()),
    }
}

fn strata(t: &ContingencyTable, a: &str, b: &str, over: &str) -> Result<([TwoByTwo; 2], TwoByTwo)> {
    let abc = t.marginalize(&[a, b, over])?;
    let at = |l: u8| -> Result<TwoByTwo> {
        let s = abc.condition(&CellAddress::new([(over, l)])?)?.table;
        TwoByTwo::from_table(&s, a, b)
    };
    Ok((
        [at(0)?, at(1)?],
        TwoByTwo::from_table(&abc.marginalize(&[a, b])?, a, b)?,
    ))
}

/// Odds-ratio collapsibility of `(a, b)` over `over`: equal conditional
/// odds-ratios equal the marginal one when `a _||_ over | b` or
/// `b _||_ over | a`.
pub fn check_or_collapsibility(
    t: &ContingencyTable,
    a: &str,
    b: &str,
    over: &str,
    evidence: Evidence,
) -> Result<CollapsibilityReport> {
    validate(a, b, over)?;
    check_evidence(evidence)?;
    let (cond, marg) = strata(t, a, b, over)?;
    let conditional = [odds_ratio(&cond[0]), odds_ratio(&cond[1])];
    let marginal = odds_ratio(&marg);
    let first = check(
        t,
        IndependenceStatement::new(&[a], &[over], &[b])?,
        evidence,
    )?;
    let second = check(
        t,
        IndependenceStatement::new(&[b], &[over], &[a])?,
        evidence,
    )?;
    let condition = met(first.holds, second.holds);
    let collapsible = match evidence {
        Evidence::Exact { rel_tol } => {
            close(conditional[0], conditional[1], rel_tol)
                && close(conditional[0], marginal, rel_tol)
        }
        Evidence::Sampled { .. } => condition != ConditionMet::Neither,
    };
    Ok(CollapsibilityReport {
        measure: Measure::OddsRatio,
        conditional,
        marginal,
        first,
        second,
        condition,
        collapsible,
        mixture: None,
    })
}

/// Relative-risk collapsibility of `a` given `b` over `over`: equal
/// conditional relative risks equal the marginal one when
/// `a _||_ over | b` or `b _||_ over`.
pub fn check_rr_collapsibility(
    t: &ContingencyTable,
    a: &str,
    b: &str,
    over: &str,
    evidence: Evidence,
) -> Result<CollapsibilityReport> {
    validate(a, b, over)?;
    check_evidence(evidence)?;
    let (cond, marg) = strata(t, a, b, over)?;
    let conditional = [relative_risk(&cond[0]), relative_risk(&cond[1])];
    let marginal = relative_risk(&marg);
    let first = check(
        t,
        IndependenceStatement::new(&[a], &[over], &[b])?,
        evidence,
    )?;
    let second = check(
        t,
        IndependenceStatement::new::<&str>(&[b], &[over], &[])?,
        evidence,
    )?;
    let condition = met(first.holds, second.holds);
    let collapsible = match evidence {
        Evidence::Exact { rel_tol } => {
            close(conditional[0], conditional[1], rel_tol)
                && close(conditional[0], marginal, rel_tol)
        }
        Evidence::Sampled { .. } => condition != ConditionMet::Neither,
    };
    Ok(CollapsibilityReport {
        measure: Measure::RelativeRisk,
        conditional,
        marginal,
        first,
        second,
        condition,
        collapsible,
        mixture: Some(rr_mixture_weights(t, a, b, over)?),
    })
}

/// Association of `a` with `b` within one table.
#[derive(Clone, Debug, PartialEq)]
pub struct Association {
    pub odds_ratio: Option<f64>,
    /// Percentage with `a = 1` at `b = 0` and at `b = 1`.
    pub percent: [Option<f64>; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub struct MixingStratum {
    pub levels: Vec<u8>,
    pub controls: Association,
    pub cases: Association,
    pub mixed: Association,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MixingReport {
    pub given: Vec<String>,
    pub strata: Vec<MixingStratum>,
}

fn association(t: &TwoByTwo) -> Association {
    let pct = |hit: f64, miss: f64| {
        let n = hit + miss;
        if n > 0.0 {
            Some(100.0 * hit / n)
        } else {
            None
        }
    };
    Association {
        odds_ratio: odds_ratio(t),
        percent: [pct(t.n10, t.n00), pct(t.n11, t.n01)],
    }
}

/// The `(a, b)` association given `given`, computed in the control slice,
/// the case slice and the table summed over `response`. Slices are taken
/// from `within` when supplied (typically fitted counts); the mixed table
/// always comes from `observed`.
pub fn mixing_artifact_demo<S: AsRef<str>>(
    observed: &ContingencyTable,
    within: Option<&ContingencyTable>,
    response: &str,
    pair: (&str, &str),
    given: &[S],
) -> Result<MixingReport> {
    let (a, b) = pair;
    let given: Vec<&str> = given.iter().map(AsRef::as_ref).collect();
    if a == b
        || a == response
        || b == response
        || given.iter().any(|g| *g == a || *g == b || *g == response)
    {
        return Err(Error::InvalidArgument("variables must be distinct".into()));
    }
    let src = within.unwrap_or(observed);
    if src.schema() != observed.schema() {
        return Err(Error::SchemaMismatch);
    }
    let mut keep = vec![response, a, b];
    keep.extend(&given);
    let slices = src.marginalize(&keep)?;
    let mut mixed_keep = vec![a, b];
    mixed_keep.extend(&given);
    let mixed = observed.marginalize(&mixed_keep)?;

    let mut strata_out = Vec::with_capacity(1 << given.len());
    for k in 0..(1usize << given.len()) {
        let levels: Vec<u8> = (0..given.len())
            .map(|j| ((k >> (given.len() - 1 - j)) & 1) as u8)
            .collect();
        let at = |t: &ContingencyTable, extra: Option<u8>| -> Result<TwoByTwo> {
            let mut pairs: Vec<(&str, u8)> =
                given.iter().copied().zip(levels.iter().copied()).collect();
            if let Some(l) = extra {
                pairs.push((response, l));
            }
            let s = t.condition(&CellAddress::new(pairs)?)?.table;
            TwoByTwo::from_table(&s, a, b)
        };
        strata_out.push(MixingStratum {
            controls: association(&at(&slices, Some(0))?),
            cases: association(&at(&slices, Some(1))?),
            mixed: association(&at(&mixed, None)?),
            levels,
        });
    }
    Ok(MixingReport {
        given: given.iter().map(|g| String::from(*g)).collect(),
        strata: strata_out,
    })
}
