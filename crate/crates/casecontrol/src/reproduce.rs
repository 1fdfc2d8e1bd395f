//! Published values recomputed from a table with the layout of the bundled
//! dataset (`L, V, C, R, A, E`), one pass/fail line each.

use serde::Serialize;

use casecontrol_core::graph::{clique_names, Edge};
use casecontrol_core::logit::{fit_logit, fitted_odds_ratios, interaction_from_odds_ratios};
use casecontrol_core::loglinear::{
    deviance_decomposition, fit_ipf, forward_select, DecompositionStep,
};
use casecontrol_core::measures::{odds_ratio, pairwise_report, stratified_tables, TwoByTwo};
use casecontrol_core::smoothing::{check_or_collapsibility, smooth, ConditionMet, Evidence};
use casecontrol_core::{
    CaseControlModel, CellAddress, ContingencyTable, IndependenceStatement, IpfOptions,
    LogitFormula, LogitOptions, LoglinearSpec, Result,
};

use crate::data;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl Check {
    pub fn line(&self) -> String {
        let tol = self
            .tolerance
            .map(|t| format!(" +- {t}"))
            .unwrap_or_default();
        format!(
            "{}  {}: observed {}, expected {}{}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.observed,
            self.expected,
            tol
        )
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn num(&mut self, name: impl Into<String>, expected: f64, observed: Option<f64>, tol: f64) {
        let pass = observed.is_some_and(|x| (x - expected).abs() <= tol + 1e-12);
        self.0.push(Check {
            name: name.into(),
            expected: format!("{expected}"),
            observed: observed.map_or("undefined".into(), |x| format!("{x:.4}")),
            tolerance: Some(tol),
            pass,
        });
    }

    fn exact(&mut self, name: impl Into<String>, expected: impl ToString, observed: impl ToString) {
        let (e, o) = (expected.to_string(), observed.to_string());
        self.0.push(Check {
            name: name.into(),
            pass: e == o,
            expected: e,
            observed: o,
            tolerance: None,
        });
    }

    fn failed(&mut self, group: &str, err: impl ToString) {
        self.0.push(Check {
            name: group.into(),
            expected: "a result".into(),
            observed: format!("error: {}", err.to_string()),
            tolerance: None,
            pass: false,
        });
    }

    fn group(&mut self, name: &str, f: impl FnOnce(&mut Checks) -> Result<()>) {
        if let Err(e) = f(self) {
            self.failed(name, e);
        }
    }
}

fn slice(t: &ContingencyTable, var: &str, level: u8) -> Result<ContingencyTable> {
    Ok(t.condition(&CellAddress::new([(var, level)])?)?.table)
}

fn stratum_ors(t: &ContingencyTable, a: &str, b: &str, given: &[&str]) -> Result<Vec<Option<f64>>> {
    Ok(stratified_tables(t, a, b, given)?
        .iter()
        .map(|(_, s)| odds_ratio(s))
        .collect())
}

fn opts() -> IpfOptions {
    IpfOptions::default()
}

const FACTORS: [&str; 5] = ["V", "C", "A", "E", "R"];

/// Fitted counts of the `A _||_ VR | CL` model in `V, A, C, R` order (V
/// fastest), controls then cases.
pub const INDEPENDENCE_FIT_CONTROLS: [f64; 16] = [
    43.24, 4.15, 29.76, 2.85, 16.94, 1.30, 9.06, 0.70, 117.28, 5.33, 80.72, 3.67, 33.89, 5.87,
    18.11, 3.13,
];
pub const INDEPENDENCE_FIT_CASES: [f64; 16] = [
    4.14, 1.15, 13.86, 3.85, 3.08, 6.54, 4.92, 10.46, 13.81, 9.90, 46.19, 33.10, 11.54, 8.85,
    18.46, 14.15,
];

/// Every pinned value, recomputed from `t`.
pub fn run(t: &ContingencyTable) -> Vec<Check> {
    let mut c = Checks::default();

    c.group("marginal measures", |c| {
        let or = [9.8, 2.0, 3.8, 3.7, 1.3];
        let lr = [104.5, 13.4, 54.5, 46.2, 1.8];
        let pearson = [107.6, 13.7, 53.2, 43.9, 1.8];
        let r = [0.43, 0.15, 0.30, 0.28, 0.06];
        for (i, f) in FACTORS.iter().enumerate() {
            let m = pairwise_report(t, "L", f)?;
            c.num(format!("odds-ratio L,{f}"), or[i], m.odds_ratio, 0.05);
            c.num(format!("LR chi-square L,{f}"), lr[i], Some(m.lr_chi2), 0.05);
            c.num(
                format!("Pearson chi-square L,{f}"),
                pearson[i],
                Some(m.pearson_chi2),
                0.05,
            );
            c.num(format!("correlation L,{f}"), r[i], m.pearson_r, 0.05);
        }
        Ok(())
    });

    c.group("stratified odds-ratios", |c| {
        let lv = stratum_ors(t, "L", "V", &["R", "C"])?;
        for (label, exp, got) in [
            ("rural, regular smokers", 2.9, lv[0]),
            ("rural, heavy smokers", 27.6, lv[1]),
            ("urban, regular smokers", 15.8, lv[2]),
            ("urban, heavy smokers", 4.4, lv[3]),
        ] {
            c.num(format!("odds-ratio L,V {label}"), exp, got, 0.05);
        }
        let vc = stratum_ors(&slice(t, "L", 1)?, "V", "C", &["R"])?;
        c.num("cases odds-ratio V,C rural", 7.7, vc[0], 0.05);
        c.num("cases odds-ratio V,C urban", 1.1, vc[1], 0.05);
        Ok(())
    });

    c.group("three-factor interaction", |c| {
        let s: Vec<TwoByTwo> = stratified_tables(t, "L", "V", &["C", "R"])?
            .into_iter()
            .map(|(_, s)| s)
            .collect();
        let est = interaction_from_odds_ratios(&[s[0], s[1], s[2], s[3]]);
        c.num("interaction estimate", -3.52, est.estimate, 0.01);
        c.num("interaction standard error", 1.22, est.se, 0.01);
        c.num("interaction z", -2.9, est.z, 0.05);
        let fit = fit_logit(
            t,
            &LogitFormula::parse("L : (V+C+R)^2")?,
            LogitOptions::default(),
        )?;
        c.num("L : (V+C+R)^2 deviance", 9.2, Some(fit.deviance), 0.1);
        c.exact("L : (V+C+R)^2 df", 1, fit.df);
        c.num(
            "root of that deviance",
            3.0,
            Some(fit.deviance.sqrt()),
            0.05,
        );
        Ok(())
    });

    c.group("log-linear fits", |c| {
        let lvcra = t.marginalize(&["L", "V", "C", "R", "A"])?;
        let spec = LoglinearSpec::new(
            lvcra.schema().clone(),
            &[vec!["V", "R", "C", "L"], vec!["A", "C", "L"]],
        )?;
        let fit = fit_ipf(&lvcra, &spec, opts())?;
        c.num("A _||_ VR | CL deviance", 4.7, Some(fit.deviance), 0.1);
        c.exact("A _||_ VR | CL df", 12, fit.df);
        for (l, expected, who) in [
            (0u8, &INDEPENDENCE_FIT_CONTROLS, "controls"),
            (1u8, &INDEPENDENCE_FIT_CASES, "cases"),
        ] {
            for (k, &e) in expected.iter().enumerate() {
                let (v, a, cc, r) = (
                    (k & 1) as u8,
                    ((k >> 1) & 1) as u8,
                    ((k >> 2) & 1) as u8,
                    ((k >> 3) & 1) as u8,
                );
                let got = fit.fitted.get(&[l, v, cc, r, a]);
                c.num(
                    format!("A _||_ VR | CL fitted {who} V={v} A={a} C={cc} R={r}"),
                    e,
                    Some(got),
                    0.01,
                );
            }
        }
        for (l, graph, dev, df) in [
            (1u8, "cases_selected", 16.2, 21usize),
            (0u8, "controls_selected", 17.9, 23),
        ] {
            let s = slice(t, "L", l)?;
            let g = data::graph(graph).expect("bundled graph");
            let fit = fit_ipf(
                &s,
                &LoglinearSpec::from_graph(s.schema().clone(), &g)?,
                opts(),
            )?;
            c.num(format!("{graph} deviance"), dev, Some(fit.deviance), 0.1);
            c.exact(format!("{graph} df"), df, fit.df);
        }
        Ok(())
    });

    c.group("logit fits", |c| {
        let right = fit_logit(
            t,
            &LogitFormula::parse("L : V*C*R + A*E")?,
            LogitOptions::default(),
        )?;
        let pinned = [
            ("const", -3.37, Some(0.42)),
            ("V", 1.32, Some(0.71)),
            ("C", 0.29, Some(0.50)),
            ("R", 0.34, Some(0.32)),
            ("VC", 2.08, None),
            ("VR", 1.30, Some(0.83)),
            ("CR", 0.50, Some(0.58)),
            ("VCR", -3.39, Some(1.32)),
            ("A", 2.36, Some(0.43)),
            ("E", 1.96, Some(0.38)),
            ("AE", -1.87, Some(0.49)),
        ];
        for (label, est, se) in pinned {
            let co = right.coefficient(label);
            c.num(
                format!("L : V*C*R + A*E coefficient {label}"),
                est,
                co.map(|x| x.estimate),
                0.02,
            );
            if let Some(se) = se {
                c.num(
                    format!("L : V*C*R + A*E se {label}"),
                    se,
                    co.and_then(|x| x.se),
                    0.02,
                );
            }
        }
        c.num(
            "L : V*C*R + A*E z VCR",
            -2.56,
            right.coefficient("VCR").and_then(|x| x.z),
            0.02,
        );
        c.num(
            "L : V*C*R + A*E z AE",
            -3.79,
            right.coefficient("AE").and_then(|x| x.z),
            0.02,
        );
        c.num("L : V*C*R + A*E deviance", 21.4, Some(right.deviance), 0.1);
        c.exact("L : V*C*R + A*E df", 21, right.df);

        let left = fit_logit(
            t,
            &LogitFormula::parse("L : V*C*R + C*A + A*E + E*R")?,
            LogitOptions::default(),
        )?;
        let vcr = left.coefficient("VCR");
        c.num(
            "L : V*C*R + C*A + A*E + E*R coefficient VCR",
            -3.34,
            vcr.map(|x| x.estimate),
            0.02,
        );
        c.num(
            "L : V*C*R + C*A + A*E + E*R se VCR",
            1.32,
            vcr.and_then(|x| x.se),
            0.02,
        );
        c.num(
            "L : V*C*R + C*A + A*E + E*R z VCR",
            -2.53,
            vcr.and_then(|x| x.z),
            0.02,
        );
        c.num(
            "L : V*C*R + C*A + A*E + E*R deviance",
            19.8,
            Some(left.deviance),
            0.1,
        );
        c.exact("L : V*C*R + C*A + A*E + E*R df", 19, left.df);

        for (f, dev) in [("L : V*C*R + A", 4.1), ("L : V*C*R + E", 10.1)] {
            let fit = fit_logit(t, &LogitFormula::parse(f)?, LogitOptions::default())?;
            c.num(format!("{f} deviance"), dev, Some(fit.deviance), 0.1);
            c.exact(format!("{f} df"), 7, fit.df);
        }
        Ok(())
    });

    c.group("fitted odds-ratios", |c| {
        let rows: [(&str, &[&str], [f64; 4]); 3] = [
            ("L : V*C*R + A", &["A", "R", "C"], [3.1, 27.3, 14.4, 3.8]),
            ("L : V*C*R + E", &["E", "R", "C"], [3.6, 30.9, 14.3, 4.5]),
            (
                "L : V*C*R + A*E",
                &["E", "A", "R", "C"],
                [3.8, 30.1, 13.7, 3.7],
            ),
        ];
        for (f, given, exp) in rows {
            let fit = fit_logit(t, &LogitFormula::parse(f)?, LogitOptions::default())?;
            let ors = fitted_odds_ratios(&fit, "V", given)?;
            // first eight strata: C fastest, then R, then the added variable(s)
            for (k, (levels, or)) in ors.values.iter().take(8).enumerate() {
                let label: Vec<String> = given
                    .iter()
                    .zip(levels)
                    .map(|(g, l)| format!("{g}={l}"))
                    .collect();
                c.num(
                    format!("{f} fitted odds-ratio L,V at {}", label.join(",")),
                    exp[k % 4],
                    *or,
                    0.1,
                );
            }
        }
        Ok(())
    });

    c.group("smoothing", |c| {
        let lvcr = t.marginalize(&["L", "V", "C", "R"])?;
        let m = CaseControlModel::new("L", &[vec!["V", "C", "R"]], &[vec!["V", "C"], vec!["R"]]);
        let s = smooth(&lvcr, &m, opts())?;
        let controls = [77.8, 4.6, 22.4, 3.2, 193.2, 11.4, 55.6, 7.8];
        for (k, &e) in controls.iter().enumerate() {
            let (v, cc, r) = ((k & 1) as u8, ((k >> 1) & 1) as u8, ((k >> 2) & 1) as u8);
            let got = s.control_fit.fitted.get(&[v, cc, r]);
            c.num(
                format!("smoothed control count V={v} C={cc} R={r}"),
                e,
                Some(got),
                0.05,
            );
        }
        let ors = s.odds_ratios("V", &["R", "C"])?;
        for (o, e) in ors.iter().zip([4.7, 15.1, 12.1, 5.4]) {
            c.num(
                format!(
                    "smoothed odds-ratio L,V at R={},C={}",
                    o.levels[0], o.levels[1]
                ),
                e,
                o.odds_ratio,
                0.05,
            );
        }

        let cases_g = clique_names(&data::graph("cases_selected").expect("bundled graph"))?;
        let controls_g = clique_names(&data::graph("controls_selected").expect("bundled graph"))?;
        let full = smooth(
            t,
            &CaseControlModel::new("L", &cases_g, &controls_g),
            opts(),
        )?;
        let published = data::published_estimates();
        for ((levels, e), got) in published.iter().zip(full.fitted.counts()) {
            let label: String = levels.iter().map(|l| l.to_string()).collect();
            c.num(
                format!("smoothed count at LVCRAE={label}"),
                e,
                Some(*got),
                0.05,
            );
        }
        let ors = full.odds_ratios("V", &["A", "R", "C"])?;
        for (k, o) in ors.iter().enumerate() {
            c.num(
                format!(
                    "smoothed odds-ratio L,V at A={},R={},C={}",
                    o.levels[0], o.levels[1], o.levels[2]
                ),
                [4.7, 15.1, 12.1, 5.4][k % 4],
                o.odds_ratio,
                0.05,
            );
        }

        let lvcra = t.marginalize(&["L", "V", "C", "R", "A"])?;
        let models: [(&str, [Vec<&str>; 2], [f64; 8]); 2] = [
            (
                "A _||_ VR | CL",
                [vec!["V", "R", "C", "L"], vec!["A", "C", "L"]],
                [2.9, 27.6, 15.8, 4.4, 2.9, 27.6, 15.8, 4.4],
            ),
            (
                "V _||_ R | ACL",
                [vec!["L", "A", "C", "V"], vec!["L", "A", "C", "R"]],
                [6.5, 6.6, 6.5, 6.6, 15.1, 6.7, 15.1, 6.7],
            ),
        ];
        for (name, gens, exp) in models {
            let fit = fit_ipf(
                &lvcra,
                &LoglinearSpec::new(lvcra.schema().clone(), &gens)?,
                opts(),
            )?;
            let ors = stratum_ors(&fit.fitted, "L", "V", &["A", "R", "C"])?;
            for (k, or) in ors.iter().enumerate() {
                c.num(
                    format!("{name} fitted odds-ratio L,V stratum {}", k + 1),
                    exp[k],
                    *or,
                    0.1,
                );
            }
        }
        Ok(())
    });

    c.group("model search", |c| {
        for (l, who, expected) in [
            (1u8, "cases", "V-C V-R C-R C-A"),
            (0u8, "controls", "V-C R-E A-E"),
        ] {
            let s = slice(t, "L", l)?;
            let sel = forward_select(&s, 0.2, opts())?;
            c.exact(
                format!("{who} forward selection at 0.2"),
                expected,
                edge_list(sel.graph.nodes(), sel.graph.edges()),
            );
        }
        let cases = slice(t, "L", 1)?;
        let step = |a: &str, b: &str, given: &[&str]| -> Result<DecompositionStep> {
            let statement = IndependenceStatement::new(&[a], &[b], given)?;
            Ok(DecompositionStep {
                margin: statement.variables(),
                statement,
            })
        };
        let seq = [
            step("E", "A", &["V", "C", "R"])?,
            step("E", "R", &["V", "C"])?,
            step("E", "V", &["C"])?,
            step("E", "C", &[])?,
        ];
        let parts = deviance_decomposition(&cases, &seq, opts())?;
        for ((st, part), (dev, df)) in
            seq.iter()
                .zip(&parts)
                .zip([(5.3, 8), (3.7, 4), (2.9, 2), (1.2, 1)])
        {
            c.num(
                format!("cases {} deviance", st.statement),
                dev,
                Some(part.chi2),
                0.1,
            );
            c.exact(format!("cases {} df", st.statement), df, part.df);
        }
        Ok(())
    });

    c.group("collapsibility", |c| {
        let controls = slice(t, "L", 0)?;
        let r =
            check_or_collapsibility(&controls, "E", "A", "R", Evidence::Sampled { alpha: 0.05 })?;
        c.num(
            "controls odds-ratio E,A at R=0",
            7.2,
            r.conditional[0],
            0.05,
        );
        c.num(
            "controls odds-ratio E,A at R=1",
            7.5,
            r.conditional[1],
            0.05,
        );
        c.num("controls odds-ratio E,A", 7.1, r.marginal, 0.05);
        c.exact(
            "controls A _||_ R | E not rejected, E _||_ R | A rejected",
            format!("{:?}", ConditionMet::Second),
            format!("{:?}", r.condition),
        );
        let er =
            check_or_collapsibility(&controls, "E", "R", "A", Evidence::Sampled { alpha: 0.05 })?;
        c.num("controls odds-ratio E,R", 0.5, er.marginal, 0.05);
        let cases = slice(t, "L", 1)?;
        let ca = pairwise_report(&cases, "C", "A")?;
        c.num("cases C,A LR chi-square", 5.5, Some(ca.lr_chi2), 0.1);
        Ok(())
    });

    c.0
}

/// `X-Y` pairs in node order, sorted by first then second node position.
pub fn edge_list(nodes: &[String], edges: &[Edge]) -> String {
    let mut pairs: Vec<(usize, usize)> =
        edges.iter().map(|e| (e.a.min(e.b), e.a.max(e.b))).collect();
    pairs.sort_unstable();
    pairs
        .iter()
        .map(|&(a, b)| format!("{}-{}", nodes[a], nodes[b]))
        .collect::<Vec<_>>()
        .join(" ")
}
