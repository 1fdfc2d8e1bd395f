//! Subcommands and their execution. Every flag is checked before any
//! fitting starts.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use casecontrol_core::graph::{
    clique_names, find_collision_vs, implied_independencies, is_markov_equivalent_to_concentration,
    marginalize_graph, separates,
};
use casecontrol_core::logit::{
    fit_logit, fitted_odds_ratios, interaction_from_odds_ratios, LogitFit,
};
use casecontrol_core::loglinear::{
    deviance_decomposition, fit_closed_form_casecontrol, fit_ipf, forward_select,
    DecompositionStep, LoglinearFit,
};
use casecontrol_core::measures::{
    pairwise_report, rr_mixture_weights, stratified_tables, DependenceSign, MixtureWeights,
};
use casecontrol_core::smoothing::{
    check_or_collapsibility, check_rr_collapsibility, mixing_artifact_demo, smooth, Association,
    CollapsibilityReport, ConditionCheck, ConditionMet, Evidence,
};
use casecontrol_core::{
    CaseControlModel, CellAddress, ContingencyTable, IndependenceStatement, IpfOptions,
    LogitFormula, LogitOptions, LoglinearSpec, MeasureReport, MixedGraph, Schema, TwoByTwo,
};

use crate::data;
use crate::error::{CliError, CliResult};
use crate::formats::{split_names, CaseControlFile, GraphFile, ModelFile};
use crate::io::{read_table_path, table_to_csv};
use crate::report::{f2, fmt, levels_label, or1, p3, to_json, Format, Output, TextTable};
use crate::reproduce;

#[derive(Debug, Parser)]
#[command(
    name = "casecontrol",
    version,
    about = "Log-linear, logit and graphical-model analysis of binary case-control tables"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Cell-list CSV (`-` for stdin); the bundled dataset when omitted.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Convergence tolerance for IPF and Newton iterations.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Iteration cap for IPF and Newton iterations.
    #[arg(long, global = true)]
    pub max_iter: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for `simulate`.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureKind {
    Or,
    Rr,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate the input table and print it in canonical cell order.
    Ingest,
    /// Marginal table over some variables, optionally within a slice.
    Marginal {
        #[arg(long)]
        keep: String,
        /// Condition first, e.g. `L=1`.
        #[arg(long = "where")]
        where_: Option<String>,
    },
    /// Count in one fully specified cell.
    Cell {
        #[arg(long)]
        at: String,
    },
    /// Odds-ratio, relative risk, correlation and chi-squares of a pair.
    Measure {
        /// `RESPONSE,FACTOR`.
        #[arg(long, conflicts_with = "response")]
        pair: Option<String>,
        /// Measure this response against every other variable.
        #[arg(long)]
        response: Option<String>,
        /// Stratify by these variables.
        #[arg(long, requires = "pair")]
        given: Option<String>,
        /// Relative-risk mixture weights over this variable.
        #[arg(long, requires = "pair", conflicts_with = "given")]
        mixture: Option<String>,
        #[arg(long = "where")]
        where_: Option<String>,
    },
    /// Fit a hierarchical log-linear model by iterative proportional fitting.
    FitLoglinear {
        /// Generator such as `V,C`; repeat for more.
        #[arg(long = "generator", conflicts_with_all = ["model", "graph"])]
        generators: Vec<String>,
        /// JSON model file with `generators`.
        #[arg(long, conflicts_with = "graph")]
        model: Option<PathBuf>,
        /// Graph file or bundled graph name; generators are its cliques.
        #[arg(long)]
        graph: Option<String>,
        #[arg(long)]
        slice: Option<String>,
        /// Print the fitted counts.
        #[arg(long)]
        fitted: bool,
    },
    /// Closed-form fit with controls `clique _||_ rest` and saturated cases.
    ClosedForm {
        #[arg(long, default_value = "L")]
        response: String,
        #[arg(long)]
        clique: String,
        #[arg(long)]
        rest: String,
    },
    /// Nested independence tests, e.g. `--step "E|A|V,C,R"`.
    Decompose {
        #[arg(long = "step", required = true)]
        steps: Vec<String>,
        #[arg(long)]
        slice: Option<String>,
    },
    /// Forward selection of a concentration graph.
    Select {
        #[arg(long, default_value_t = 0.2)]
        alpha: f64,
        #[arg(long)]
        slice: Option<String>,
    },
    /// Grouped logit regression, e.g. `--formula "L : V*C*R + A*E"`.
    FitLogit {
        #[arg(long)]
        formula: String,
    },
    /// Three-factor interaction from four stratum odds-ratios.
    Interaction {
        #[arg(long, default_value = "L")]
        response: String,
        #[arg(long)]
        factor: String,
        /// Exactly two modifiers.
        #[arg(long)]
        modifiers: String,
    },
    /// Odds-ratios from a fitted logit model, stratum by stratum.
    FittedOr {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        factor: String,
        #[arg(long, default_value = "")]
        given: String,
    },
    /// Separate case and control log-linear fits recombined into smoothed odds-ratios.
    Smooth {
        /// JSON with `response`, `case` and `control` generators.
        #[arg(long, conflicts_with_all = ["case_generators", "control_generators", "case_graph", "control_graph"])]
        model: Option<PathBuf>,
        #[arg(long, default_value = "L")]
        response: String,
        #[arg(long = "case-generator", conflicts_with = "case_graph")]
        case_generators: Vec<String>,
        #[arg(long = "control-generator", conflicts_with = "control_graph")]
        control_generators: Vec<String>,
        #[arg(long)]
        case_graph: Option<String>,
        #[arg(long)]
        control_graph: Option<String>,
        #[arg(long)]
        factor: Option<String>,
        #[arg(long, default_value = "")]
        given: String,
        #[arg(long)]
        fitted: bool,
    },
    /// Check whether a conditional odds-ratio or relative risk collapses.
    Collapse {
        #[arg(long)]
        pair: String,
        #[arg(long)]
        over: String,
        #[arg(long)]
        slice: Option<String>,
        #[arg(long, value_enum, default_value_t = MeasureKind::Or)]
        measure: MeasureKind,
        /// Significance level for sampled data.
        #[arg(long, conflicts_with = "exact")]
        alpha: Option<f64>,
        /// Treat the table as a distribution; cross-products must agree to this relative tolerance.
        #[arg(long)]
        exact: Option<f64>,
    },
    /// Association in controls, cases and the mixed table.
    Mixing {
        #[arg(long, default_value = "L")]
        response: String,
        #[arg(long)]
        pair: String,
        #[arg(long, default_value = "")]
        given: String,
        /// Use smoothed slices from these case generators.
        #[arg(long = "case-generator")]
        case_generators: Vec<String>,
        #[arg(long = "control-generator")]
        control_generators: Vec<String>,
    },
    /// Structure of a graph: collision Vs, cliques, implied independencies.
    GraphCheck {
        #[arg(long)]
        graph: String,
        /// List pairwise independencies with conditioning sets up to this size.
        #[arg(long)]
        independencies: Option<usize>,
        /// Marginalize over these nodes first.
        #[arg(long)]
        drop: Option<String>,
        /// Test a statement `A|B|C` (C may be empty).
        #[arg(long)]
        separates: Vec<String>,
    },
    /// Draw a multinomial sample with the input table's cell proportions.
    Simulate {
        #[arg(long)]
        n: u64,
    },
    /// Recompute every published value and report pass or fail.
    Reproduce,
}

/// Core operations reached by each subcommand.
pub const OPERATIONS: &[(&str, &[&str])] = &[
    ("ingest", &["ContingencyTable::new"]),
    (
        "marginal",
        &[
            "ContingencyTable::marginalize",
            "ContingencyTable::condition",
        ],
    ),
    ("cell", &["ContingencyTable::cell"]),
    (
        "measure",
        &[
            "pairwise_report",
            "odds_ratio",
            "log_or_se",
            "relative_risk",
            "risk_difference",
            "pearson_r",
            "dependence_sign",
            "independence_chi2",
            "lr_statistic",
            "pearson_statistic",
            "stratified_tables",
            "rr_mixture_weights",
        ],
    ),
    (
        "fit-loglinear",
        &[
            "fit_ipf",
            "LoglinearSpec::new",
            "LoglinearSpec::from_graph",
            "cliques",
        ],
    ),
    ("closed-form", &["fit_closed_form_casecontrol"]),
    ("decompose", &["deviance_decomposition", "fit_independence"]),
    ("select", &["forward_select"]),
    (
        "fit-logit",
        &["fit_logit", "LogitFormula::parse", "term_label"],
    ),
    (
        "interaction",
        &["interaction_from_odds_ratios", "stratified_tables"],
    ),
    ("fitted-or", &["fitted_odds_ratios", "fit_logit"]),
    (
        "smooth",
        &[
            "smooth",
            "SmoothedEstimates::odds_ratios",
            "log_contrast_variance",
        ],
    ),
    (
        "collapse",
        &[
            "check_or_collapsibility",
            "check_rr_collapsibility",
            "rr_mixture_weights",
        ],
    ),
    ("mixing", &["mixing_artifact_demo", "smooth"]),
    (
        "graph-check",
        &[
            "find_collision_vs",
            "is_markov_equivalent_to_concentration",
            "cliques",
            "clique_names",
            "implied_independencies",
            "marginalize_graph",
            "separates",
        ],
    ),
    ("simulate", &[]),
    ("reproduce", &[]),
];

struct Settings {
    ipf: IpfOptions,
    logit: LogitOptions,
}

fn settings(g: &Global) -> CliResult<Settings> {
    let mut ipf = IpfOptions::default();
    let mut logit = LogitOptions::default();
    if let Some(t) = g.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::usage("--tol must be a positive number"));
        }
        ipf.tol = t;
        logit.tol = t;
    }
    if let Some(m) = g.max_iter {
        if m == 0 {
            return Err(CliError::usage("--max-iter must be at least 1"));
        }
        ipf.max_iter = m;
        logit.max_iter = m;
    }
    Ok(Settings { ipf, logit })
}

fn load_input(g: &Global) -> CliResult<ContingencyTable> {
    match &g.input {
        Some(p) => read_table_path(p),
        None => Ok(data::selected()),
    }
}

fn read_file(path: &PathBuf) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(arg: &str) -> CliResult<MixedGraph> {
    if let Some(g) = data::graph(arg) {
        return Ok(g);
    }
    let path = PathBuf::from(arg);
    if !path.exists() {
        let names: Vec<&str> = data::GRAPHS.iter().map(|(n, _)| *n).collect();
        return Err(CliError::usage(format!(
            "`{arg}` is neither a file nor a bundled graph ({})",
            names.join(", ")
        )));
    }
    GraphFile::parse(&read_file(&path)?)?.to_graph()
}

fn address(s: &str) -> CliResult<CellAddress> {
    Ok(s.parse::<CellAddress>()?)
}

fn names_or_empty(s: &str) -> CliResult<Vec<String>> {
    if s.trim().is_empty() {
        Ok(Vec::new())
    } else {
        split_names(s)
    }
}

fn pair(s: &str) -> CliResult<(String, String)> {
    match split_names(s)?.as_slice() {
        [a, b] if a != b => Ok((a.clone(), b.clone())),
        _ => Err(CliError::usage(format!(
            "expected two distinct names `A,B`, got `{s}`"
        ))),
    }
}

fn statement(s: &str) -> CliResult<IndependenceStatement> {
    let parts: Vec<&str> = s.split('|').collect();
    if parts.len() < 2 || parts.len() > 3 {
        return Err(CliError::usage(format!(
            "expected `A|B` or `A|B|C`, got `{s}`"
        )));
    }
    let a = split_names(parts[0])?;
    let b = split_names(parts[1])?;
    let c = match parts.get(2) {
        Some(c) => names_or_empty(c)?,
        None => Vec::new(),
    };
    Ok(IndependenceStatement::new(&a, &b, &c)?)
}

fn sliced(t: ContingencyTable, slice: &Option<String>) -> CliResult<(ContingencyTable, String)> {
    match slice {
        None => Ok((t, String::new())),
        Some(s) => {
            let at = address(s)?;
            let part = t.condition(&at)?;
            if part.empty {
                return Err(CliError::data(format!("slice {s} is empty")));
            }
            Ok((part.table, s.clone()))
        }
    }
}

fn generators(list: &[String]) -> CliResult<Vec<Vec<String>>> {
    list.iter().map(|g| split_names(g)).collect()
}

fn validate_alpha(alpha: f64) -> CliResult<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(CliError::usage("alpha must lie strictly between 0 and 1"))
    }
}

/// Parse the command line, run it and return what to print with the exit
/// status.
pub fn run<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                (text, String::new(), 0)
            } else {
                (String::new(), text, code)
            };
        }
    };
    let format = cli.global.format;
    match execute(&cli) {
        Ok(out) => (
            out.render(format),
            String::new(),
            if out.ok { 0 } else { 1 },
        ),
        Err(e) => (String::new(), format!("{e}\n"), e.exit_code()),
    }
}

pub fn execute(cli: &Cli) -> CliResult<Output> {
    let s = settings(&cli.global)?;
    match &cli.command {
        Command::Ingest => cmd_ingest(&load_input(&cli.global)?),
        Command::Marginal { keep, where_ } => {
            let keep = split_names(keep)?;
            let (t, _) = sliced(load_input(&cli.global)?, where_)?;
            let m = t.marginalize(&keep)?;
            Ok(table_output(&m))
        }
        Command::Cell { at } => {
            let at = address(at)?;
            let t = load_input(&cli.global)?;
            let n = t.cell(&at)?;
            Ok(Output::new(
                format!("{n}"),
                json!({ "cell": at_json(&at), "count": n }),
            ))
        }
        Command::Measure {
            pair: p,
            response,
            given,
            mixture,
            where_,
        } => {
            let p = p.as_deref().map(pair).transpose()?;
            let given = given.as_deref().map(split_names).transpose()?;
            if p.is_none() && response.is_none() {
                return Err(CliError::usage("give --pair or --response"));
            }
            let (t, _) = sliced(load_input(&cli.global)?, where_)?;
            match (p, response) {
                (Some((a, b)), _) => match (given, mixture) {
                    (Some(g), _) => cmd_stratified(&t, &a, &b, &g),
                    (None, Some(c)) => cmd_mixture(&t, &a, &b, c),
                    (None, None) => Ok(measure_output(&[pairwise_report(&t, &a, &b)?])),
                },
                (None, Some(r)) => {
                    t.schema().require(r)?;
                    let reports = t
                        .schema()
                        .names()
                        .iter()
                        .filter(|n| *n != r)
                        .map(|n| pairwise_report(&t, r, n))
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(measure_output(&reports))
                }
                (None, None) => unreachable!(),
            }
        }
        Command::FitLoglinear {
            generators: gens,
            model,
            graph,
            slice,
            fitted,
        } => {
            let source = if !gens.is_empty() {
                ModelSource::Generators(generators(gens)?)
            } else if let Some(m) = model {
                ModelSource::Generators(ModelFile::parse(&read_file(m)?)?.generators)
            } else if let Some(g) = graph {
                ModelSource::Graph(load_graph(g)?)
            } else {
                return Err(CliError::usage("give --generator, --model or --graph"));
            };
            let (t, slice) = sliced(load_input(&cli.global)?, slice)?;
            let fit = fit_model(&t, &source, s.ipf)?;
            Ok(loglinear_output(&fit, &slice, *fitted))
        }
        Command::ClosedForm {
            response,
            clique,
            rest,
        } => {
            let clique = split_names(clique)?;
            let rest = split_names(rest)?;
            let t = load_input(&cli.global)?;
            let mut keep = vec![response.clone()];
            keep.extend(clique.iter().cloned());
            keep.extend(rest.iter().cloned());
            let m = t.marginalize(&keep)?;
            let fit = fit_closed_form_casecontrol(&m, response, &clique, &rest)?;
            let mut out = table_output(&fit.controls);
            out.text = format!(
                "controls fitted under {} _||_ {}\n{}",
                clique.join(","),
                rest.join(","),
                out.text
            );
            out.json = json!({
                "clique": clique,
                "rest": rest,
                "controls": table_json(&fit.controls),
                "cases": table_json(&fit.cases),
            });
            Ok(out)
        }
        Command::Decompose { steps, slice } => {
            let statements = steps
                .iter()
                .map(|s| statement(s))
                .collect::<CliResult<Vec<_>>>()?;
            let (t, slice) = sliced(load_input(&cli.global)?, slice)?;
            let seq: Vec<DecompositionStep> = statements
                .into_iter()
                .map(|st| DecompositionStep {
                    margin: st.variables(),
                    statement: st,
                })
                .collect();
            let tests = deviance_decomposition(&t, &seq, s.ipf)?;
            let mut tt = TextTable::new(["statement", "chi2", "df", "p"]);
            let mut rows = Vec::new();
            for (step, test) in seq.iter().zip(&tests) {
                tt.row([
                    step.statement.to_string(),
                    or1(Some(test.chi2)),
                    test.df.to_string(),
                    p3(test.p_value),
                ]);
                rows.push(json!({
                    "statement": step.statement.to_string(),
                    "chi2": test.chi2,
                    "df": test.df,
                    "p_value": test.p_value,
                }));
            }
            let total: f64 = tests.iter().map(|x| x.chi2).sum();
            let df: usize = tests.iter().map(|x| x.df).sum();
            tt.row([
                "total".to_string(),
                or1(Some(total)),
                df.to_string(),
                String::new(),
            ]);
            Ok(Output::new(
                with_slice(&slice, tt.render()),
                json!({ "slice": slice, "steps": rows, "total_chi2": total, "total_df": df }),
            ))
        }
        Command::Select { alpha, slice } => {
            validate_alpha(*alpha)?;
            let (t, slice) = sliced(load_input(&cli.global)?, slice)?;
            let sel = forward_select(&t, *alpha, s.ipf)?;
            let names = t.schema().names();
            let mut tt = TextTable::new(["added", "drop", "df", "p"]);
            let mut steps = Vec::new();
            for st in &sel.steps {
                let label = format!("{}-{}", names[st.edge.0], names[st.edge.1]);
                tt.row([
                    label.clone(),
                    or1(Some(st.deviance_drop)),
                    st.df.to_string(),
                    p3(st.p_value),
                ]);
                steps.push(json!({
                    "edge": label,
                    "deviance_drop": st.deviance_drop,
                    "df": st.df,
                    "p_value": st.p_value,
                }));
            }
            let edges = reproduce::edge_list(sel.graph.nodes(), sel.graph.edges());
            let text = format!(
                "{}edges: {}\nfinal model: deviance {} on {} df, p {}\n",
                tt.render(),
                edges,
                or1(Some(sel.fit.deviance)),
                sel.fit.df,
                p3(sel.fit.p_value)
            );
            Ok(Output::new(
                with_slice(&slice, text),
                json!({
                    "slice": slice,
                    "alpha": alpha,
                    "steps": steps,
                    "edges": edges.split(' ').filter(|e| !e.is_empty()).collect::<Vec<_>>(),
                    "graph": to_json(&GraphFile::from_graph(&sel.graph)),
                    "deviance": sel.fit.deviance,
                    "df": sel.fit.df,
                    "p_value": sel.fit.p_value,
                }),
            ))
        }
        Command::FitLogit { formula } => {
            let f = LogitFormula::parse(formula)?;
            let t = load_input(&cli.global)?;
            f.bind(t.schema())?;
            let fit = fit_logit(&t, &f, s.logit)?;
            Ok(logit_output(&fit))
        }
        Command::Interaction {
            response,
            factor,
            modifiers,
        } => {
            let mods = split_names(modifiers)?;
            if mods.len() != 2 {
                return Err(CliError::usage("--modifiers takes exactly two names"));
            }
            let t = load_input(&cli.global)?;
            let strata = stratified_tables(&t, response, factor, &mods)?;
            let four: [TwoByTwo; 4] = [strata[0].1, strata[1].1, strata[2].1, strata[3].1];
            let est = interaction_from_odds_ratios(&four);
            let text = format!(
                "interaction of {response},{factor} with {}: estimate {}, se {}, z {}\n",
                mods.join(","),
                fmt(est.estimate, 2),
                fmt(est.se, 2),
                fmt(est.z, 2)
            );
            Ok(Output::new(
                text,
                json!({
                    "response": response,
                    "factor": factor,
                    "modifiers": mods,
                    "estimate": est.estimate,
                    "se": est.se,
                    "z": est.z,
                }),
            ))
        }
        Command::FittedOr {
            formula,
            factor,
            given,
        } => {
            let f = LogitFormula::parse(formula)?;
            let given = names_or_empty(given)?;
            let t = load_input(&cli.global)?;
            f.bind(t.schema())?;
            let fit = fit_logit(&t, &f, s.logit)?;
            let ors = fitted_odds_ratios(&fit, factor, &given)?;
            let mut tt = TextTable::new(["stratum", "odds-ratio"]);
            let mut rows = Vec::new();
            for (levels, v) in &ors.values {
                let label = levels_label(&ors.given, levels);
                tt.row([label.clone(), or1(*v)]);
                rows.push(json!({ "stratum": label, "levels": levels, "odds_ratio": v }));
            }
            Ok(Output::new(
                format!(
                    "fitted odds-ratios of {} and {factor} under {f}\n{}",
                    f.response(),
                    tt.render()
                ),
                json!({ "formula": f.to_string(), "factor": factor, "given": ors.given, "strata": rows }),
            ))
        }
        Command::Smooth {
            model,
            response,
            case_generators,
            control_generators,
            case_graph,
            control_graph,
            factor,
            given,
            fitted,
        } => {
            let m = match model {
                Some(p) => CaseControlFile::parse(&read_file(p)?)?.to_model(),
                None => CaseControlModel::new(
                    response,
                    &side(case_generators, case_graph, "case")?,
                    &side(control_generators, control_graph, "control")?,
                ),
            };
            let given = names_or_empty(given)?;
            let t = load_input(&cli.global)?;
            cmd_smooth(&t, &m, factor.as_deref(), &given, *fitted, s.ipf)
        }
        Command::Collapse {
            pair: p,
            over,
            slice,
            measure,
            alpha,
            exact,
        } => {
            let (a, b) = pair(p)?;
            let evidence = match (alpha, exact) {
                (_, Some(tol)) => {
                    if !(tol.is_finite() && *tol > 0.0) {
                        return Err(CliError::usage("--exact needs a positive tolerance"));
                    }
                    Evidence::Exact { rel_tol: *tol }
                }
                (Some(a), None) => {
                    validate_alpha(*a)?;
                    Evidence::Sampled { alpha: *a }
                }
                (None, None) => Evidence::Sampled { alpha: 0.05 },
            };
            let (t, slice) = sliced(load_input(&cli.global)?, slice)?;
            let r = match measure {
                MeasureKind::Or => check_or_collapsibility(&t, &a, &b, over, evidence)?,
                MeasureKind::Rr => check_rr_collapsibility(&t, &a, &b, over, evidence)?,
            };
            Ok(collapse_output(&r, &a, &b, over, &slice))
        }
        Command::Mixing {
            response,
            pair: p,
            given,
            case_generators,
            control_generators,
        } => {
            let (a, b) = pair(p)?;
            let given = names_or_empty(given)?;
            if case_generators.is_empty() != control_generators.is_empty() {
                return Err(CliError::usage(
                    "give both --case-generator and --control-generator, or neither",
                ));
            }
            let cg = generators(case_generators)?;
            let kg = generators(control_generators)?;
            let t = load_input(&cli.global)?;
            let smoothed = if cg.is_empty() {
                None
            } else {
                let m = CaseControlModel::new(response, &cg, &kg);
                Some(smooth(&t, &m, s.ipf)?.fitted)
            };
            let rep = mixing_artifact_demo(&t, smoothed.as_ref(), response, (&a, &b), &given)?;
            let mut tt = TextTable::new([
                "stratum", "or ctrl", "or case", "or mixed", "% ctrl", "% case", "% mixed",
            ]);
            let assoc =
                |x: &Association| json!({ "odds_ratio": x.odds_ratio, "percent": x.percent });
            let pct =
                |x: &Association| format!("{}/{}", fmt(x.percent[0], 0), fmt(x.percent[1], 0));
            let mut rows = Vec::new();
            for st in &rep.strata {
                let label = levels_label(&rep.given, &st.levels);
                tt.row([
                    label.clone(),
                    or1(st.controls.odds_ratio),
                    or1(st.cases.odds_ratio),
                    or1(st.mixed.odds_ratio),
                    pct(&st.controls),
                    pct(&st.cases),
                    pct(&st.mixed),
                ]);
                rows.push(json!({
                    "stratum": label,
                    "controls": assoc(&st.controls),
                    "cases": assoc(&st.cases),
                    "mixed": assoc(&st.mixed),
                }));
            }
            Ok(Output::new(
                format!(
                    "association of {a} with {b}; percentages with {a}=1 at {b}=0/{b}=1\n{}",
                    tt.render()
                ),
                json!({ "pair": [a, b], "given": rep.given, "smoothed": smoothed.is_some(), "strata": rows }),
            ))
        }
        Command::GraphCheck {
            graph,
            independencies,
            drop,
            separates: tests,
        } => {
            let mut g = load_graph(graph)?;
            let statements = tests
                .iter()
                .map(|s| statement(s))
                .collect::<CliResult<Vec<_>>>()?;
            if let Some(d) = drop {
                g = marginalize_graph(&g, &split_names(d)?)?;
            }
            cmd_graph_check(&g, *independencies, &statements)
        }
        Command::Simulate { n } => {
            let t = load_input(&cli.global)?;
            let sample = simulate(&t, *n, cli.global.seed)?;
            let mut out = table_output(&sample);
            out.text = table_to_csv(&sample);
            Ok(out)
        }
        Command::Reproduce => {
            let t = load_input(&cli.global)?;
            let checks = reproduce::run(&t);
            let failed = checks.iter().filter(|c| !c.pass).count();
            let mut text: String = checks.iter().map(|c| c.line() + "\n").collect();
            text.push_str(&format!("{} checks, {} failed\n", checks.len(), failed));
            Ok(Output {
                text,
                json: to_json(&checks),
                ok: failed == 0,
            })
        }
    }
}

enum ModelSource {
    Generators(Vec<Vec<String>>),
    Graph(MixedGraph),
}

/// Fit on the margin over the model's variables.
fn fit_model(
    t: &ContingencyTable,
    source: &ModelSource,
    opts: IpfOptions,
) -> CliResult<LoglinearFit> {
    let vars: Vec<String> = match source {
        ModelSource::Generators(gs) => {
            let mut v: Vec<String> = Vec::new();
            for name in gs.iter().flatten() {
                if !v.contains(name) {
                    v.push(name.clone());
                }
            }
            v
        }
        ModelSource::Graph(g) => g.nodes().to_vec(),
    };
    let m = t.marginalize(&vars)?;
    let spec = match source {
        ModelSource::Generators(gs) => LoglinearSpec::new(m.schema().clone(), gs)?,
        ModelSource::Graph(g) => LoglinearSpec::from_graph(m.schema().clone(), g)?,
    };
    Ok(fit_ipf(&m, &spec, opts)?)
}

fn side(gens: &[String], graph: &Option<String>, which: &str) -> CliResult<Vec<Vec<String>>> {
    match graph {
        Some(g) => Ok(clique_names(&load_graph(g)?)?),
        None if !gens.is_empty() => generators(gens),
        None => Err(CliError::usage(format!(
            "give --{which}-generator or --{which}-graph, or --model"
        ))),
    }
}

fn with_slice(slice: &str, text: String) -> String {
    if slice.is_empty() {
        text
    } else {
        format!("within {slice}\n{text}")
    }
}

fn at_json(at: &CellAddress) -> Value {
    Value::Object(
        at.assignments()
            .iter()
            .map(|(n, l)| (n.clone(), json!(l)))
            .collect(),
    )
}

fn table_json(t: &ContingencyTable) -> Value {
    json!({
        "variables": t.schema().names(),
        "total": t.total(),
        "cells": t.iter().map(|(levels, n)| json!({ "levels": levels, "count": n })).collect::<Vec<_>>(),
    })
}

fn table_text(t: &ContingencyTable) -> String {
    let mut header: Vec<String> = t.schema().names().to_vec();
    header.push("count".into());
    let mut tt = TextTable::new(header);
    for (levels, n) in t.iter() {
        let mut row: Vec<String> = levels.iter().map(u8::to_string).collect();
        row.push(if n.fract() == 0.0 {
            format!("{n}")
        } else {
            f2(n)
        });
        tt.row(row);
    }
    tt.render()
}

fn table_output(t: &ContingencyTable) -> Output {
    Output::new(
        format!("{}total {}\n", table_text(t), t.total()),
        table_json(t),
    )
}

fn cmd_ingest(t: &ContingencyTable) -> CliResult<Output> {
    let nonzero = t.counts().iter().filter(|&&c| c > 0.0).count();
    let mut out = table_output(t);
    out.text = format!(
        "{} variables ({}), {} cells, {} nonzero, total {}\n{}",
        t.schema().len(),
        t.schema(),
        t.schema().cells(),
        nonzero,
        t.total(),
        table_to_csv(t)
    );
    Ok(out)
}

fn sign_label(s: DependenceSign) -> &'static str {
    match s {
        DependenceSign::Positive => "positive",
        DependenceSign::Zero => "zero",
        DependenceSign::Negative => "negative",
        DependenceSign::Undefined => "undefined",
    }
}

fn measure_json(r: &MeasureReport) -> Value {
    json!({
        "response": r.response,
        "factor": r.factor,
        "counts": { "n11": r.counts.n11, "n10": r.counts.n10, "n01": r.counts.n01, "n00": r.counts.n00 },
        "total": r.total,
        "odds_ratio": r.odds_ratio,
        "log_or_se": r.log_or_se,
        "relative_risk": r.relative_risk,
        "risk_difference": r.risk_difference,
        "pearson_r": r.pearson_r,
        "lr_chi2": r.lr_chi2,
        "pearson_chi2": r.pearson_chi2,
        "lr_p": r.lr_p,
        "sign": sign_label(r.sign),
    })
}

fn measure_output(reports: &[MeasureReport]) -> Output {
    let mut tt = TextTable::new([
        "pair",
        "odds-ratio",
        "rel. risk",
        "r",
        "LR chi2",
        "Pearson chi2",
        "p",
    ]);
    for r in reports {
        tt.row([
            format!("{},{}", r.response, r.factor),
            or1(r.odds_ratio),
            fmt(r.relative_risk, 2),
            fmt(r.pearson_r, 2),
            or1(Some(r.lr_chi2)),
            or1(Some(r.pearson_chi2)),
            p3(r.lr_p),
        ]);
    }
    Output::new(
        tt.render(),
        Value::Array(reports.iter().map(measure_json).collect()),
    )
}

fn cmd_stratified(t: &ContingencyTable, a: &str, b: &str, given: &[String]) -> CliResult<Output> {
    let strata = stratified_tables(t, a, b, given)?;
    let mut tt = TextTable::new([
        "stratum",
        "n11",
        "n10",
        "n01",
        "n00",
        "odds-ratio",
        "se(log)",
    ]);
    let mut rows = Vec::new();
    for (levels, tab) in &strata {
        let r = MeasureReport::from_counts(a, b, *tab);
        let label = levels_label(given, levels);
        tt.row([
            label.clone(),
            format!("{}", tab.n11),
            format!("{}", tab.n10),
            format!("{}", tab.n01),
            format!("{}", tab.n00),
            or1(r.odds_ratio),
            fmt(r.log_or_se, 2),
        ]);
        let mut j = measure_json(&r);
        j["stratum"] = json!(label);
        rows.push(j);
    }
    Ok(Output::new(
        format!("{a},{b} given {}\n{}", given.join(","), tt.render()),
        json!({ "pair": [a, b], "given": given, "strata": rows }),
    ))
}

fn mixture_json(w: &MixtureWeights) -> Value {
    json!({
        "alpha": w.alpha,
        "beta": w.beta,
        "rr_marginal": w.rr_marginal,
        "rr_given_c1": w.rr_given_c1,
        "rr_given_c0": w.rr_given_c0,
        "mixture": w.mixture,
        "residual": w.residual,
        "bc_independence_chi2": w.bc_independence_chi2,
    })
}

fn cmd_mixture(t: &ContingencyTable, a: &str, b: &str, c: &str) -> CliResult<Output> {
    let w = rr_mixture_weights(t, a, b, c)?;
    let text = format!(
        "relative risk of {a} on {b}: marginal {}, at {c}=1 {}, at {c}=0 {}\n\
         weights alpha {}, beta {}; weighted mean {}, residual {}\n\
         {b},{c} independence LR chi2 {}\n",
        fmt(w.rr_marginal, 2),
        fmt(w.rr_given_c1, 2),
        fmt(w.rr_given_c0, 2),
        fmt(w.alpha, 3),
        fmt(w.beta, 3),
        fmt(w.mixture, 2),
        fmt(w.residual, 3),
        or1(Some(w.bc_independence_chi2)),
    );
    Ok(Output::new(text, mixture_json(&w)))
}

fn loglinear_json(fit: &LoglinearFit) -> Value {
    json!({
        "generators": fit.spec.generator_names(),
        "deviance": fit.deviance,
        "pearson_chi2": fit.pearson_chi2,
        "df": fit.df,
        "p_value": fit.p_value,
        "iterations": fit.iterations,
        "converged": fit.converged,
        "max_margin_gap": fit.max_margin_gap,
    })
}

fn generators_label(gs: &[Vec<String>]) -> String {
    gs.iter()
        .map(|g| format!("[{}]", g.join("")))
        .collect::<Vec<_>>()
        .join("")
}

fn loglinear_output(fit: &LoglinearFit, slice: &str, fitted: bool) -> Output {
    let mut text = format!(
        "model {}\ndeviance {} on {} df, p {}; Pearson {}\n{} sweeps, {}\n",
        generators_label(&fit.spec.generator_names()),
        or1(Some(fit.deviance)),
        fit.df,
        p3(fit.p_value),
        or1(Some(fit.pearson_chi2)),
        fit.iterations,
        if fit.converged {
            "converged"
        } else {
            "NOT converged"
        },
    );
    let mut j = loglinear_json(fit);
    j["slice"] = json!(slice);
    if fitted {
        text.push_str(&table_text(&fit.fitted));
        j["fitted"] = table_json(&fit.fitted);
    }
    Output::new(with_slice(slice, text), j)
}

fn logit_output(fit: &LogitFit) -> Output {
    let mut tt = TextTable::new(["term", "estimate", "se", "z"]);
    let mut coefs = Vec::new();
    for c in &fit.coefficients {
        tt.row([c.label.clone(), f2(c.estimate), fmt(c.se, 2), fmt(c.z, 2)]);
        coefs.push(json!({
            "term": c.label,
            "estimate": c.estimate,
            "se": c.se,
            "z": c.z,
        }));
    }
    let mut text = format!(
        "{}\n{}deviance {} on {} df\n",
        fit.formula,
        tt.render(),
        or1(Some(fit.deviance)),
        fit.df
    );
    if fit.separation {
        text.push_str("warning: separation, some estimates diverge\n");
    } else if !fit.converged {
        text.push_str("warning: not converged\n");
    }
    Output::new(
        text,
        json!({
            "formula": fit.formula.to_string(),
            "coefficients": coefs,
            "deviance": fit.deviance,
            "df": fit.df,
            "converged": fit.converged,
            "separation": fit.separation,
            "iterations": fit.iterations,
        }),
    )
}

fn cmd_smooth(
    t: &ContingencyTable,
    m: &CaseControlModel,
    factor: Option<&str>,
    given: &[String],
    fitted: bool,
    opts: IpfOptions,
) -> CliResult<Output> {
    let est = smooth(t, m, opts)?;
    let mut text = format!(
        "cases {}: deviance {} on {} df\ncontrols {}: deviance {} on {} df\n",
        generators_label(&est.case_fit.spec.generator_names()),
        or1(Some(est.case_fit.deviance)),
        est.case_fit.df,
        generators_label(&est.control_fit.spec.generator_names()),
        or1(Some(est.control_fit.deviance)),
        est.control_fit.df,
    );
    let mut j = json!({
        "response": est.response,
        "case_fit": loglinear_json(&est.case_fit),
        "control_fit": loglinear_json(&est.control_fit),
    });
    if let Some(f) = factor {
        let ors = est.odds_ratios(f, given)?;
        let mut tt = TextTable::new(["stratum", "smoothed", "se(log)", "observed", "se(log)"]);
        let mut rows = Vec::new();
        for o in &ors {
            let label = levels_label(given, &o.levels);
            tt.row([
                label.clone(),
                or1(o.odds_ratio),
                fmt(o.log_se, 2),
                or1(o.observed_odds_ratio),
                fmt(o.observed_log_se, 2),
            ]);
            rows.push(json!({
                "stratum": label,
                "odds_ratio": o.odds_ratio,
                "log_se": o.log_se,
                "observed_odds_ratio": o.observed_odds_ratio,
                "observed_log_se": o.observed_log_se,
            }));
        }
        text.push_str(&format!(
            "odds-ratios of {} and {f}\n{}",
            est.response,
            tt.render()
        ));
        j["factor"] = json!(f);
        j["odds_ratios"] = json!(rows);
    }
    if fitted {
        text.push_str(&table_text(&est.fitted));
        j["fitted"] = table_json(&est.fitted);
    }
    Ok(Output::new(text, j))
}

fn condition_json(c: &ConditionCheck) -> Value {
    json!({
        "statement": c.statement.to_string(),
        "deviance": c.deviance,
        "df": c.df,
        "p_value": c.p_value,
        "holds": c.holds,
    })
}

fn collapse_output(r: &CollapsibilityReport, a: &str, b: &str, over: &str, slice: &str) -> Output {
    let what = match r.measure {
        casecontrol_core::smoothing::Measure::OddsRatio => "odds-ratio",
        casecontrol_core::smoothing::Measure::RelativeRisk => "relative risk",
    };
    let met = match r.condition {
        ConditionMet::Neither => "neither",
        ConditionMet::First => "first",
        ConditionMet::Second => "second",
        ConditionMet::Both => "both",
    };
    let cond = |c: &ConditionCheck| {
        format!(
            "{}: LR {} on {} df, p {} ({})",
            c.statement,
            or1(Some(c.deviance)),
            c.df,
            p3(c.p_value),
            if c.holds { "holds" } else { "fails" }
        )
    };
    let text = format!(
        "{what} of {a},{b}: {over}=0 {}, {over}=1 {}, marginal {}\n{}\n{}\nconditions met: {met}; collapsible: {}\n",
        or1(r.conditional[0]),
        or1(r.conditional[1]),
        or1(r.marginal),
        cond(&r.first),
        cond(&r.second),
        if r.collapsible { "yes" } else { "no" },
    );
    Output::new(
        with_slice(slice, text),
        json!({
            "slice": slice,
            "measure": what,
            "pair": [a, b],
            "over": over,
            "conditional": r.conditional,
            "marginal": r.marginal,
            "first": condition_json(&r.first),
            "second": condition_json(&r.second),
            "condition": met,
            "collapsible": r.collapsible,
            "mixture": r.mixture.as_ref().map(mixture_json),
        }),
    )
}

fn cmd_graph_check(
    g: &MixedGraph,
    independencies: Option<usize>,
    statements: &[IndependenceStatement],
) -> CliResult<Output> {
    let names = g.nodes();
    let vs = find_collision_vs(g);
    let equivalent = is_markov_equivalent_to_concentration(g);
    let mut text = format!(
        "nodes {}\nedges {}\n",
        names.join(","),
        reproduce::edge_list(names, g.edges())
    );
    let vs_label: Vec<String> = vs
        .iter()
        .map(|v| format!("{}-{}-{}", names[v.i], names[v.inner], names[v.j]))
        .collect();
    text.push_str(&format!(
        "collision Vs: {}\nMarkov equivalent to a concentration graph: {}\n",
        if vs_label.is_empty() {
            "none".to_string()
        } else {
            vs_label.join(" ")
        },
        if equivalent { "yes" } else { "no" }
    ));
    let mut j = json!({
        "graph": to_json(&GraphFile::from_graph(g)),
        "collision_vs": vs_label,
        "markov_equivalent_to_concentration": equivalent,
    });
    // separation and cliques need full lines; test the skeleton when there are none else
    let full = if g.is_full_line() {
        Some(g.clone())
    } else if equivalent {
        Some(MixedGraph::full_line(
            names,
            &g.skeleton()
                .iter()
                .map(|&(a, b)| (names[a].clone(), names[b].clone()))
                .collect::<Vec<_>>(),
        )?)
    } else {
        None
    };
    match &full {
        Some(f) => {
            let cl = clique_names(f)?;
            text.push_str(&format!("cliques {}\n", generators_label(&cl)));
            j["cliques"] = json!(cl);
            if let Some(k) = independencies {
                let list: Vec<String> = implied_independencies(f, k)?
                    .iter()
                    .map(ToString::to_string)
                    .collect();
                text.push_str(&format!("implied independencies ({}):\n", list.len()));
                for s in &list {
                    text.push_str(&format!("  {s}\n"));
                }
                j["independencies"] = json!(list);
            }
            let mut tested = Vec::new();
            for s in statements {
                let holds = separates(f, s)?;
                text.push_str(&format!(
                    "{s}: {}\n",
                    if holds { "separated" } else { "not separated" }
                ));
                tested.push(json!({ "statement": s.to_string(), "separated": holds }));
            }
            j["separation"] = json!(tested);
        }
        None => {
            if independencies.is_some() || !statements.is_empty() {
                return Err(CliError::data(
                    "graph has collision Vs; separation in a full-line graph does not apply",
                ));
            }
        }
    }
    Ok(Output::new(text, j))
}

/// `n` independent draws from the cell proportions of `t`.
pub fn simulate(t: &ContingencyTable, n: u64, seed: u64) -> CliResult<ContingencyTable> {
    let total = t.total();
    if !(total > 0.0) {
        return Err(CliError::data("table total is zero"));
    }
    let mut cdf = Vec::with_capacity(t.counts().len());
    let mut acc = 0.0;
    for &c in t.counts() {
        acc += c / total;
        cdf.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0.0; cdf.len()];
    for _ in 0..n {
        let u: f64 = rng.gen::<f64>() * acc;
        let i = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
        counts[i] += 1.0;
    }
    Ok(ContingencyTable::new(
        Schema::new(t.schema().names().iter().cloned())?,
        counts,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(args: &[&str]) -> String {
        let mut v = vec!["casecontrol"];
        v.extend_from_slice(args);
        let (out, err, code) = run(v);
        assert_eq!(code, 0, "{err}");
        out
    }

    #[test]
    fn parses_statements() {
        let s = statement("E|A|V,C,R").unwrap();
        assert_eq!(s.c, ["V", "C", "R"]);
        assert!(statement("E|C").unwrap().c.is_empty());
        assert!(statement("E").is_err());
        assert!(statement("E|A|B|C").is_err());
    }

    #[test]
    fn simulate_is_seeded() {
        let t = data::selected();
        let a = simulate(&t, 1000, 7).unwrap();
        assert_eq!(a, simulate(&t, 1000, 7).unwrap());
        assert_ne!(a, simulate(&t, 1000, 8).unwrap());
        assert_eq!(a.total(), 1000.0);
        // cells empty in the source stay empty
        for (s, d) in t.counts().iter().zip(a.counts()) {
            if *s == 0.0 {
                assert_eq!(*d, 0.0);
            }
        }
    }

    #[test]
    fn every_command_is_registered() {
        use clap::CommandFactory;
        let cmd = Cli::command();
        let names: Vec<&str> = cmd.get_subcommands().map(|c| c.get_name()).collect();
        let registered: Vec<&str> = OPERATIONS.iter().map(|(n, _)| *n).collect();
        assert_eq!(names, registered);
    }

    #[test]
    fn bad_flags_are_usage_errors() {
        let (_, _, code) = run(["casecontrol", "select", "--alpha", "1.5"]);
        assert_eq!(code, 2);
        let (_, _, code) = run(["casecontrol", "--tol", "-1", "ingest"]);
        assert_eq!(code, 2);
        let (_, _, code) = run(["casecontrol", "frobnicate"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn text_is_stable() {
        assert_eq!(
            ok(&["measure", "--pair", "L,V"]),
            ok(&["measure", "--pair", "L,V"])
        );
    }
}
