//! Hierarchical log-linear models fitted by iterative proportional fitting.
//!
//! A model is identified by its generating class: the maximal sets of
//! variables whose joint margins are its sufficient statistics. Graphical
//! models take the cliques of a concentration graph as generators.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{self, Edge, EdgeKind, IndependenceStatement, MixedGraph};
use crate::linalg;
use crate::measures::{lr_statistic, pearson_statistic};
use crate::special::chi2_sf;
use crate::table::{CellAddress, ContingencyTable, Schema};

/// Variable subset as a bitmask over schema positions (bit `p` = position `p`).
pub type Mask = u32;

fn subsets(mask: Mask) -> impl Iterator<Item = Mask> {
    let mut sub = Some(mask);
    core::iter::from_fn(move || {
        let s = sub?;
        sub = if s == 0 { None } else { Some((s - 1) & mask) };
        Some(s)
    })
}

fn positions_of(mask: Mask) -> Vec<usize> {
    (0..32).filter(|p| mask & (1 << p) != 0).collect()
}

/// Generating class of a hierarchical log-linear model over a schema.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoglinearSpec {
    schema: Schema,
    generators: Vec<Mask>,
}

impl LoglinearSpec {
    /// Generators given by variable names. Repeated generators and those
    /// contained in another are dropped; the remaining order is kept.
    pub fn new<S: AsRef<str>>(schema: Schema, generators: &[Vec<S>]) -> Result<Self> {
        let masks = generators
            .iter()
            .map(|g| {
                if g.is_empty() {
                    Err(Error::InvalidArgument("generators must be nonempty".into()))
                } else {
                    schema.mask(g)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        LoglinearSpec::from_masks(schema, masks)
    }

    pub fn from_masks(schema: Schema, masks: Vec<Mask>) -> Result<Self> {
        if masks.is_empty() {
            return Err(Error::InvalidArgument(
                "a model needs at least one generator".into(),
            ));
        }
        let full: Mask = if schema.len() == 32 {
            !0
        } else {
            (1 << schema.len()) - 1
        };
        if masks.iter().any(|&m| m == 0 || m & !full != 0) {
            return Err(Error::InvalidArgument(
                "generator outside the schema".into(),
            ));
        }
        let mut kept: Vec<Mask> = Vec::new();
        for (i, &m) in masks.iter().enumerate() {
            let dominated = masks
                .iter()
                .enumerate()
                .any(|(j, &o)| (m & o == m) && (m != o || j < i));
            if !dominated {
                kept.push(m);
            }
        }
        Ok(LoglinearSpec {
            schema,
            generators: kept,
        })
    }

    /// Graphical model whose generators are the cliques of a full-line graph on
    /// the schema variables.
    pub fn from_graph(schema: Schema, g: &MixedGraph) -> Result<Self> {
        let mut names: Vec<&str> = g.nodes().iter().map(String::as_str).collect();
        names.sort_unstable();
        let mut mine: Vec<&str> = schema.names().iter().map(String::as_str).collect();
        mine.sort_unstable();
        if names != mine {
            return Err(Error::SchemaMismatch);
        }
        let masks = graph::cliques(g)?
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .try_fold(0, |m, v| Ok(m | (1 << schema.require(&g.nodes()[v])?)))
            })
            .collect::<Result<Vec<Mask>>>()?;
        LoglinearSpec::from_masks(schema, masks)
    }

    pub fn saturated(schema: Schema) -> Self {
        let full = (1 << schema.len()) - 1;
        LoglinearSpec {
            schema,
            generators: vec![full],
        }
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn generators(&self) -> &[Mask] {
        &self.generators
    }

    pub fn generator_names(&self) -> Vec<Vec<String>> {
        self.generators
            .iter()
            .map(|&m| {
                positions_of(m)
                    .into_iter()
                    .map(|p| self.schema.names()[p].clone())
                    .collect()
            })
            .collect()
    }

    /// Every interaction term of the hierarchical expansion, including the
    /// empty set, ordered by size then mask.
    pub fn terms(&self) -> Vec<Mask> {
        let set: BTreeSet<Mask> = self.generators.iter().flat_map(|&g| subsets(g)).collect();
        let mut terms: Vec<Mask> = set.into_iter().collect();
        terms.sort_by_key(|&m| (m.count_ones(), m));
        terms
    }

    pub fn parameter_count(&self) -> usize {
        self.terms().len()
    }

    /// Residual degrees of freedom: cells minus free parameters.
    pub fn df(&self) -> usize {
        self.schema.cells() - self.parameter_count()
    }

    pub fn is_saturated(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].count_ones() as usize == self.schema.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IpfOptions {
    /// Convergence when every generator margin is within `tol` of observed.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for IpfOptions {
    fn default() -> Self {
        IpfOptions {
            tol: 1e-8,
            max_iter: 10_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LoglinearFit {
    pub spec: LoglinearSpec,
    pub fitted: ContingencyTable,
    /// `2 sum n log(n / m)`.
    pub deviance: f64,
    pub pearson_chi2: f64,
    pub df: usize,
    pub p_value: f64,
    /// Completed sweeps over the generators.
    pub iterations: usize,
    pub converged: bool,
    /// Largest absolute difference between a fitted and an observed
    /// generator margin after the last sweep.
    pub max_margin_gap: f64,
}

struct MarginMap {
    projection: Vec<usize>,
    size: usize,
}

impl MarginMap {
    fn new(schema: &Schema, mask: Mask) -> Self {
        let ps = positions_of(mask);
        MarginMap {
            projection: schema.projection(&ps),
            size: 1 << ps.len(),
        }
    }

    fn sum(&self, counts: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.size];
        for (i, &c) in counts.iter().enumerate() {
            out[self.projection[i]] += c;
        }
        out
    }
}

/// Maximum-likelihood fit of `spec` to `observed` by iterative proportional
/// fitting. A run that exhausts `max_iter` is returned with
/// `converged = false`.
pub fn fit_ipf(
    observed: &ContingencyTable,
    spec: &LoglinearSpec,
    opts: IpfOptions,
) -> Result<LoglinearFit> {
    if observed.schema() != spec.schema() {
        return Err(Error::SchemaMismatch);
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let total = observed.total();
    if total <= 0.0 {
        return Err(Error::ZeroTotal);
    }
    let obs = observed.counts();
    let maps: Vec<MarginMap> = spec
        .generators
        .iter()
        .map(|&g| MarginMap::new(spec.schema(), g))
        .collect();
    let targets: Vec<Vec<f64>> = maps.iter().map(|m| m.sum(obs)).collect();

    let mut fitted = vec![total / obs.len() as f64; obs.len()];
    let mut iterations = 0;
    let mut gap = f64::INFINITY;
    while iterations < opts.max_iter {
        for (map, target) in maps.iter().zip(&targets) {
            let current = map.sum(&fitted);
            for (i, m) in fitted.iter_mut().enumerate() {
                let k = map.projection[i];
                *m = if current[k] > 0.0 {
                    *m * target[k] / current[k]
                } else {
                    0.0
                };
            }
        }
        iterations += 1;
        gap = maps
            .iter()
            .zip(&targets)
            .flat_map(|(map, target)| {
                map.sum(&fitted)
                    .into_iter()
                    .zip(target)
                    .map(|(f, t)| (f - t).abs())
                    .collect::<Vec<_>>()
            })
            .fold(0.0, f64::max);
        if gap < opts.tol {
            break;
        }
    }
    let converged = gap < opts.tol;
    let deviance = lr_statistic(obs, &fitted).max(0.0);
    let pearson_chi2 = pearson_statistic(obs, &fitted);
    let df = spec.df();
    Ok(LoglinearFit {
        spec: spec.clone(),
        fitted: ContingencyTable::new(observed.schema().clone(), fitted)?,
        deviance,
        pearson_chi2,
        df,
        p_value: chi2_sf(deviance, df as f64),
        iterations,
        converged,
        max_margin_gap: gap,
    })
}

/// Asymptotic variance of `sum_i w_i log m_i` for a fitted model, from the
/// inverse information `X' diag(m) X` of the hierarchical design. The weights
/// should sum to zero so the result does not depend on the sampling scheme
/// (Poisson or multinomial). `None` when the information is singular.
pub fn log_contrast_variance(fit: &LoglinearFit, contrast: &[(usize, f64)]) -> Option<f64> {
    let terms = fit.spec.terms();
    let schema = fit.fitted.schema();
    let p = terms.len();
    let m = fit.fitted.counts();
    let row = |cell: usize| -> Vec<f64> {
        let bits: Mask = (0..schema.len())
            .filter(|&q| schema.level(cell, q) == 1)
            .fold(0, |acc, q| acc | (1 << q));
        terms
            .iter()
            .map(|&t| if t & bits == t { 1.0 } else { 0.0 })
            .collect()
    };
    let mut info = vec![0.0; p * p];
    for (cell, &w) in m.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        let x = row(cell);
        for i in 0..p {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..p {
                info[i * p + j] += w * x[i] * x[j];
            }
        }
    }
    let l = linalg::cholesky(&info, p)?;
    let mut g = vec![0.0; p];
    for &(cell, w) in contrast {
        for (gi, xi) in g.iter_mut().zip(row(cell)) {
            *gi += w * xi;
        }
    }
    let h = linalg::cholesky_solve(&l, p, &g);
    Some(g.iter().zip(&h).map(|(a, b)| a * b).sum())
}

/// Control and case tables over the regressors from the closed-form case-control estimator.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormFit {
    /// `n_{0,clique,+} n_{0,+,rest} / n_{0,+,+}` over the regressors.
    pub controls: ContingencyTable,
    /// The observed case slice (saturated).
    pub cases: ContingencyTable,
}

/// Closed-form maximum-likelihood counts when the controls follow the model
/// `clique _||_ rest` and the cases are saturated. The table must contain
/// exactly `response`, `clique` and `rest`.
pub fn fit_closed_form_casecontrol<S: AsRef<str>>(
    observed: &ContingencyTable,
    response: &str,
    clique: &[S],
    rest: &[S],
) -> Result<ClosedFormFit> {
    let schema = observed.schema();
    let r = schema.require(response)?;
    let cm = schema.mask(clique)?;
    let rm = schema.mask(rest)?;
    if cm & rm != 0
        || (cm | rm) & (1 << r) != 0
        || (cm | rm | (1 << r)).count_ones() as usize != schema.len()
    {
        return Err(Error::InvalidArgument(
            "response, clique and rest must partition the table variables".into(),
        ));
    }
    let slice = |level| observed.condition(&CellAddress::new([(response, level)])?);
    let controls = slice(0)?.table;
    let cases = slice(1)?.table;
    let n0 = controls.total();
    if n0 <= 0.0 {
        return Err(Error::ZeroTotal);
    }
    let regs = controls.schema().clone();
    let cp = regs.positions(clique)?;
    let rp = regs.positions(rest)?;
    let cmap = regs.projection(&cp);
    let rmap = regs.projection(&rp);
    let cmarg = controls.margin(&cp);
    let rmarg = controls.margin(&rp);
    let fitted = (0..regs.cells())
        .map(|i| cmarg.counts()[cmap[i]] * rmarg.counts()[rmap[i]] / n0)
        .collect();
    Ok(ClosedFormFit {
        controls: ContingencyTable::new(regs, fitted)?,
        cases,
    })
}

/// Test `s.a _||_ s.b | s.c` within the margin over exactly those variables.
pub fn fit_independence(
    observed: &ContingencyTable,
    s: &IndependenceStatement,
    opts: IpfOptions,
) -> Result<LoglinearFit> {
    let vars = s.variables();
    let margin = observed.marginalize(&vars)?;
    let ac: Vec<String> = s.a.iter().chain(&s.c).cloned().collect();
    let bc: Vec<String> = s.b.iter().chain(&s.c).cloned().collect();
    let spec = LoglinearSpec::new(margin.schema().clone(), &[ac, bc])?;
    fit_ipf(&margin, &spec, opts)
}

/// One step of a deviance decomposition: an independence statement tested
/// in the margin over `margin`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionStep {
    pub statement: IndependenceStatement,
    pub margin: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepTest {
    pub chi2: f64,
    pub df: usize,
    pub p_value: f64,
}

/// Likelihood-ratio statistics for a nested sequence of independence tests.
/// Each step's statement must use exactly the variables of its margin, and
/// each margin must lie inside the previous one.
pub fn deviance_decomposition(
    observed: &ContingencyTable,
    sequence: &[DecompositionStep],
    opts: IpfOptions,
) -> Result<Vec<StepTest>> {
    if sequence.is_empty() {
        return Err(Error::MalformedSequence("empty sequence".into()));
    }
    let mut previous: Option<BTreeSet<&str>> = None;
    let mut out = Vec::with_capacity(sequence.len());
    for (k, step) in sequence.iter().enumerate() {
        let margin: BTreeSet<&str> = step.margin.iter().map(String::as_str).collect();
        if margin.len() != step.margin.len() {
            return Err(Error::MalformedSequence(alloc::format!(
                "step {}: repeated margin variable",
                k + 1
            )));
        }
        let vars = step.statement.variables();
        let used: BTreeSet<&str> = vars.iter().map(String::as_str).collect();
        if used != margin {
            return Err(Error::MalformedSequence(alloc::format!(
                "step {}: statement `{}` does not span its margin",
                k + 1,
                step.statement
            )));
        }
        if let Some(prev) = &previous {
            if !margin.is_subset(prev) {
                return Err(Error::MalformedSequence(alloc::format!(
                    "step {}: margin is not inside the previous margin",
                    k + 1
                )));
            }
        }
        let fit = fit_independence(observed, &step.statement, opts)?;
        out.push(StepTest {
            chi2: fit.deviance,
            df: fit.df,
            p_value: fit.p_value,
        });
        previous = Some(margin);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelectionStep {
    /// Schema positions of the added edge, ascending.
    pub edge: (usize, usize),
    pub deviance_drop: f64,
    pub df: usize,
    pub p_value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Selection {
    pub graph: MixedGraph,
    pub steps: Vec<SelectionStep>,
    /// Fit of the final graphical model.
    pub fit: LoglinearFit,
}

fn graph_with(schema: &Schema, edges: &[(usize, usize)]) -> Result<MixedGraph> {
    MixedGraph::new(
        schema.names().to_vec(),
        edges
            .iter()
            .map(|&(a, b)| Edge {
                a,
                b,
                kind: EdgeKind::Full,
            })
            .collect(),
        None,
    )
}

/// Forward selection of a concentration graph. Starting from the edgeless
/// graph, each round fits every graph with one more edge and adds the edge
/// whose deviance-difference test has the smallest p-value, provided it is
/// below `alpha`. Ties go to the lexicographically first edge.
pub fn forward_select(
    observed: &ContingencyTable,
    alpha: f64,
    opts: IpfOptions,
) -> Result<Selection> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument("alpha must lie in (0, 1)".into()));
    }
    let schema = observed.schema().clone();
    let k = schema.len();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut graph = graph_with(&schema, &edges)?;
    let mut current = fit_ipf(
        observed,
        &LoglinearSpec::from_graph(schema.clone(), &graph)?,
        opts,
    )?;
    let mut steps = Vec::new();
    loop {
        let mut best: Option<(f64, (usize, usize), LoglinearFit, MixedGraph)> = None;
        for i in 0..k {
            for j in i + 1..k {
                if edges.contains(&(i, j)) {
                    continue;
                }
                let mut trial_edges = edges.clone();
                trial_edges.push((i, j));
                let g = graph_with(&schema, &trial_edges)?;
                let fit = fit_ipf(
                    observed,
                    &LoglinearSpec::from_graph(schema.clone(), &g)?,
                    opts,
                )?;
                let ddf = current.df - fit.df;
                let drop = (current.deviance - fit.deviance).max(0.0);
                let p = chi2_sf(drop, ddf as f64);
                if best.as_ref().is_none_or(|b| p < b.0) {
                    best = Some((p, (i, j), fit, g));
                }
            }
        }
        match best {
            Some((p, edge, fit, g)) if p < alpha => {
                steps.push(SelectionStep {
                    edge,
                    deviance_drop: (current.deviance - fit.deviance).max(0.0),
                    df: current.df - fit.df,
                    p_value: p,
                });
                edges.push(edge);
                graph = g;
                current = fit;
            }
            _ => break,
        }
    }
    Ok(Selection {
        graph,
        steps,
        fit: current,
    })
}
