//! Every acceptance criterion at its stated tolerance, one PASS/FAIL line
//! each. Values are recomputed through the core API directly.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use casecontrol_core::graph::{clique_names, separates};
use casecontrol_core::logit::{
    fit_logit, fitted_odds_ratios, interaction_from_odds_ratios, LogitProblem,
};
use casecontrol_core::loglinear::{
    deviance_decomposition, fit_closed_form_casecontrol, fit_ipf, forward_select, DecompositionStep,
};
use casecontrol_core::measures::{
    dependence_sign, independence_chi2, odds_ratio, pairwise_report, pearson_r, relative_risk,
    risk_difference, stratified_tables, DependenceSign, TwoByTwo,
};
use casecontrol_core::smoothing::{
    check_or_collapsibility, check_rr_collapsibility, smooth, ConditionMet, Evidence,
};
use casecontrol_core::{
    CaseControlModel, CellAddress, ContingencyTable, IndependenceStatement, IpfOptions,
    LogitFormula, LogitOptions, LoglinearSpec, MixedGraph, Result, Schema,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Default)]
struct Failures(Vec<String>);

impl Failures {
    fn near(&mut self, what: impl AsRef<str>, expected: f64, got: Option<f64>, tol: f64) {
        match got {
            Some(x) if (x - expected).abs() <= tol + 1e-12 => {}
            _ => self.0.push(format!(
                "{}: got {got:?}, expected {expected} +- {tol}",
                what.as_ref()
            )),
        }
    }

    fn equal<T: PartialEq + std::fmt::Debug>(
        &mut self,
        what: impl AsRef<str>,
        expected: T,
        got: T,
    ) {
        if expected != got {
            self.0.push(format!(
                "{}: got {got:?}, expected {expected:?}",
                what.as_ref()
            ));
        }
    }

    fn holds(&mut self, what: impl AsRef<str>, ok: bool) {
        if !ok {
            self.0.push(what.as_ref().to_string());
        }
    }
}

fn opts() -> IpfOptions {
    IpfOptions::default()
}

fn slice(t: &ContingencyTable, l: u8) -> Result<ContingencyTable> {
    Ok(t.condition(&CellAddress::new([("L", l)])?)?.table)
}

fn formula(text: &str) -> LogitFormula {
    LogitFormula::parse(text).expect("formula parses")
}

fn marginal_measures(t: &ContingencyTable, f: &mut Failures) -> Result<()> {
    let rows = [
        ("V", 9.8, 104.5, 107.6, 0.43),
        ("C", 2.0, 13.4, 13.7, 0.15),
        ("A", 3.8, 54.5, 53.2, 0.30),
        ("E", 3.7, 46.2, 43.9, 0.28),
        ("R", 1.3, 1.8, 1.8, 0.06),
    ];
    for (x, or, lr, pearson, r) in rows {
        let m = pairwise_report(t, "L", x)?;
        f.near(format!("odds-ratio L,{x}"), or, m.odds_ratio, 0.05);
        f.near(format!("LR chi2 L,{x}"), lr, Some(m.lr_chi2), 0.05);
        f.near(
            format!("Pearson chi2 L,{x}"),
            pearson,
            Some(m.pearson_chi2),
            0.05,
        );
        f.near(format!("correlation L,{x}"), r, m.pearson_r, 0.05);
    }
    Ok(())
}

fn stratified_odds_ratios(t: &ContingencyTable, f: &mut Failures) -> Result<()> {
    let lv = stratified_tables(t, "L", "V", &["C", "R"])?;
    // (C, R) = (0, 0), (0, 1), (1, 0), (1, 1)
    for ((levels, s), e) in lv.iter().zip([2.9, 15.8, 27.6, 4.4]) {
        f.near(
            format!("odds-ratio L,V at C,R = {levels:?}"),
            e,
            odds_ratio(s),
            0.05,
        );
    }
    let vc = stratified_tables(&slice(t, 1)?, "V", "C", &["R"])?;
    f.near(
        "cases odds-ratio V,C at R=0",
        7.7,
        odds_ratio(&vc[0].1),
        0.05,
    );
    f.near(
        "cases odds-ratio V,C at R=1",
        1.1,
        odds_ratio(&vc[1].1),
        0.05,
    );
    Ok(())
}

fn interaction(t: &ContingencyTable, f: &mut Failures) -> Result<()> {
    let s = stratified_tables(t, "L", "V", &["C", "R"])?;
    let est = interaction_from_odds_ratios(&[s[0].1, s[1].1, s[2].1, s[3].1]);
    f.near("estimate", -3.52, est.estimate, 0.01);
    f.near("se", 1.22, est.se, 0.01);
    f.near("z", -2.9, est.z, 0.05);
    let fit = fit_logit(t, &formula("L : (V+C+R)^2"), LogitOptions::default())?;
    f.near("L : (V+C+R)^2 deviance", 9.2, Some(fit.deviance), 0.1);
    f.equal("L : (V+C+R)^2 df", 1, fit.df);
    f.near("root deviance", 3.0, Some(fit.deviance.sqrt()), 0.05);
    Ok(())
}

fn loglinear_fits(t: &ContingencyTable, f: &mut Failures) -> Result<()> {
    let m = t.marginalize(&["L", "V", "C", "R", "A"])?;
    let fit = fit_ipf(
        &m,
        &LoglinearSpec::new(
            m.schema().clone(),
            &[vec!["L", "V", "C", "R"], vec!["L", "C", "A"]],
        )?,
        opts(),
    )?;
    f.near("A _||_ VR | CL deviance", 4.7, Some(fit.deviance), 0.1);
    f.equal("A _||_ VR | CL df", 12, fit.df);
    // rows in V, A, C, R order with V fastest
    let controls = [
        43.24, 4.15, 29.76, 2.85, 16.94, 1.30, 9.06, 0.70, 117.28, 5.33, 80.72, 3.67, 33.89, 5.87,
        18.11, 3.13,
    ];
    let cases = [
        4.14, 1.15, 13.86, 3.85, 3.08, 6.54, 4.92, 10.46, 13.81, 9.90, 46.19, 33.10, 11.54, 8.85,
        18.46, 14.15,
    ];
    for (l, printed) in [(0u8, controls), (1u8, cases)] {
        for (row, e) in printed.iter().enumerate() {
            let (v, a, c, r) = (row & 1, row >> 1 & 1, row >> 2 & 1, row >> 3 & 1);
            let at = CellAddress::new([
                ("L", l),
                ("V", v as u8),
                ("A", a as u8),
                ("C", c as u8),
                ("R", r as u8),
            ])?;
            f.near(
                format!("fitted L={l} V={v} A={a} C={c} R={r}"),
                *e,
                Some(fit.fitted.cell(&at)?),
                0.01,
            );
        }
    }
    let nodes = ["V", "C", "R", "A", "E"];
    let cases_graph =
        MixedGraph::full_line(&nodes, &[("V", "C"), ("V", "R"), ("C", "R"), ("C", "A")])?;
    let controls_graph = MixedGraph::full_line(&nodes, &[("V", "C"), ("R", "E"), ("A", "E")])?;
    for (l, g, dev, df) in [
        (1u8, &cases_graph, 16.2, 21),
        (0u8, &controls_graph, 17.9, 23),
    ] {
        let s = slice(t, l)?;
        let fit = fit_ipf(
            &s,
            &LoglinearSpec::from_graph(s.schema().clone(), g)?,
            opts(),
        )?;
        f.near(
            format!("selected graph at L={l} deviance"),
            dev,
            Some(fit.deviance),
            0.1,
        );
        f.equal(format!("selected graph at L={l} df"), df, fit.df);
    }
    Ok(())
}

fn logit_fits(t: &ContingencyTable, f: &mut Failures) -> Result<()> {
    let right = fit_logit(t, &formula("L : V*C*R + A*E"), LogitOptions::default())?;
    // the printed standard error of VC is a misprint and is not compared
    let printed = [
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
    for (label, est, se) in printed {
        let c = right.coefficient(label);
        f.near(
            format!("{label} estimate"),
            est,
            c.map(|c| c.estimate),
            0.02,
        );
        if let Some(se) = se {
            f.near(format!("{label} se"), se, c.and_then(|c| c.se), 0.02);
        }
    }
    f.near("L : V*C*R + A*E deviance", 21.4, Some(right.deviance), 0.1);
    f.equal("L : V*C*R + A*E df", 21, right.df);
    let left = fit_logit(
        t,
        &formula("L : V*C*R + C*A + A*E + E*R"),
        LogitOptions::default(),
    )?;
    let vcr = left.coefficient("VCR");
    f.near("left VCR estimate", -3.34, vcr.map(|c| c.estimate), 0.02);
    f.near("left VCR se", 1.32, vcr.and_then(|c| c.se), 0.02);
    f.near("left VCR z", -2.53, vcr.and_then(|c| c.z), 0.02);
    f.near("left deviance", 19.8, Some(left.deviance), 0.1);
    f.equal("left df", 19, left.df);
    for (text, dev) in [("L : V*C*R + A", 4.1), ("L : V*C*R + E", 10.1)] {
        let fit = fit_logit(t, &formula(text), LogitOptions::default())?;
        f.near(format!("{text} deviance"), dev, Some(fit.deviance), 0.1);
        f.equal(format!("{text} df"), 7, fit.df);
    }
    Ok(())
}

fn fitted_or_tables(t: &ContingencyTable, f: &mut Failures) -> Result<()> {
    // strata listed with C fastest, then R, then the remaining variables
    let rows: [(&str, &[&str], [f64; 4]); 3] = [
        ("L : V*C*R + A", &["A", "R", "C"], [3.1, 27.3, 14.4, 3.8]),
        ("L : V*C*R + E", &["E", "R", "C"], [3.6, 30.9, 14.3, 4.5]),
        (
            "L : A*E + V*C*R",
            &["E", "A", "R", "C"],
            [3.8, 30.1, 13.7, 3.7],
        ),
    ];
    for (text, given, printed) in rows {
        let fit = fit_logit(t, &formula(text), LogitOptions::default())?;
        let ors = fitted_odds_ratios(&fit, "V", given)?;
        for (k, (levels, or)) in ors.values.iter().take(8).enumerate() {
            f.near(
                format!("{text} at {given:?} = {levels:?}"),
                printed[k % 4],
                *or,
                0.1,
            );
        }
    }
    Ok(())
}

fn smoothing(t: &ContingencyTable, f: &mut Failures) -> Result<()> {
    let lvcr = t.marginalize(&["L", "V", "C", "R"])?;
    let closed = fit_closed_form_casecontrol(&lvcr, "L", &["V", "C"], &["R"])?;
    // V fastest, then C, then R
    let printed = [77.8, 4.6, 22.4, 3.2, 193.2, 11.4, 55.6, 7.8];
    for (k, e) in printed.iter().enumerate() {
        let levels = [(k & 1) as u8, (k >> 1 & 1) as u8, (k >> 2 & 1) as u8];
        f.near(
            format!("control estimate V,C,R = {levels:?}"),
            *e,
            Some(closed.controls.get(&levels)),
            0.05,
        );
    }
    let est = smooth(
        &lvcr,
        &CaseControlModel::new("L", &[vec!["V", "C", "R"]], &[vec!["V", "C"], vec!["R"]]),
        opts(),
    )?;
    for (o, e) in est
        .odds_ratios("V", &["R", "C"])?
        .iter()
        .zip([4.7, 15.1, 12.1, 5.4])
    {
        f.near(
            format!("smoothed odds-ratio at R,C = {:?}", o.levels),
            e,
            o.odds_ratio,
            0.05,
        );
    }

    let nodes = ["V", "C", "R", "A", "E"];
    let cases_graph =
        MixedGraph::full_line(&nodes, &[("V", "C"), ("V", "R"), ("C", "R"), ("C", "A")])?;
    let controls_graph = MixedGraph::full_line(&nodes, &[("V", "C"), ("R", "E"), ("A", "E")])?;
    let model = CaseControlModel::new(
        "L",
        &clique_names(&cases_graph)?,
        &clique_names(&controls_graph)?,
    );
    let full = smooth(t, &model, opts())?;
    let published = support::parse_cells(include_str!(
        "../../../data/zatonski_published_estimates.csv"
    ));
    f.equal("published estimated counts", 64, published.counts().len());
    for ((levels, e), got) in published.iter().zip(full.fitted.counts()) {
        f.near(
            format!("estimated count at {levels:?}"),
            e,
            Some(*got),
            0.05,
        );
    }

    let m = t.marginalize(&["L", "V", "C", "R", "A"])?;
    let models: [([&[&str]; 2], [f64; 8]); 2] = [
        (
            [&["L", "V", "C", "R"], &["L", "C", "A"]],
            [2.9, 27.6, 15.8, 4.4, 2.9, 27.6, 15.8, 4.4],
        ),
        (
            [&["L", "A", "C", "V"], &["L", "A", "C", "R"]],
            [6.5, 6.6, 6.5, 6.6, 15.1, 6.7, 15.1, 6.7],
        ),
    ];
    for (gens, printed) in models {
        let gens: Vec<Vec<&str>> = gens.iter().map(|g| g.to_vec()).collect();
        let fit = fit_ipf(&m, &LoglinearSpec::new(m.schema().clone(), &gens)?, opts())?;
        let strata = stratified_tables(&fit.fitted, "L", "V", &["A", "R", "C"])?;
        for ((levels, s), e) in strata.iter().zip(printed) {
            f.near(
                format!("model {gens:?} odds-ratio at A,R,C = {levels:?}"),
                e,
                odds_ratio(s),
                0.1,
            );
        }
    }
    Ok(())
}

fn edges_of(g: &MixedGraph) -> Vec<(String, String)> {
    let n = g.nodes();
    let mut e: Vec<(String, String)> = g
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = (e.a.min(e.b), e.a.max(e.b));
            (n[a].clone(), n[b].clone())
        })
        .collect();
    e.sort();
    e
}

fn model_search(t: &ContingencyTable, f: &mut Failures) -> Result<()> {
    let pair = |a: &str, b: &str| (a.to_string(), b.to_string());
    for (l, mut expected) in [
        (
            1u8,
            vec![
                pair("V", "C"),
                pair("V", "R"),
                pair("C", "R"),
                pair("C", "A"),
            ],
        ),
        (0u8, vec![pair("V", "C"), pair("A", "E"), pair("R", "E")]),
    ] {
        let s = slice(t, l)?;
        let sel = forward_select(&s, 0.2, opts())?;
        let pos = |n: &str| s.schema().position(n).unwrap();
        for e in &mut expected {
            if pos(&e.0) > pos(&e.1) {
                *e = (e.1.clone(), e.0.clone());
            }
        }
        expected.sort();
        f.equal(
            format!("selected edges at L={l}"),
            expected,
            edges_of(&sel.graph),
        );
    }
    let step = |a: &str, b: &str, c: &[&str]| -> Result<DecompositionStep> {
        let statement = IndependenceStatement::new(&[a], &[b], c)?;
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
    let parts = deviance_decomposition(&slice(t, 1)?, &seq, opts())?;
    for ((p, (dev, df)), st) in parts
        .iter()
        .zip([(5.3, 8), (3.7, 4), (2.9, 2), (1.2, 1)])
        .zip(&seq)
    {
        f.near(format!("{} chi2", st.statement), dev, Some(p.chi2), 0.1);
        f.equal(format!("{} df", st.statement), df, p.df);
    }
    Ok(())
}

fn dist3(g: impl Fn(u8, u8, u8) -> f64) -> ContingencyTable {
    ContingencyTable::from_fn(Schema::new(["A", "B", "C"]).unwrap(), |l: &[u8]| {
        g(l[0], l[1], l[2])
    })
    .unwrap()
}

fn bern(p: f64, x: u8) -> f64 {
    if x == 1 {
        p
    } else {
        1.0 - p
    }
}

fn property_suites(_: &ContingencyTable, f: &mut Failures) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(20240);

    // sign agreement
    let mut disagreements = 0;
    for _ in 0..10_000 {
        let c: Vec<f64> = (0..4).map(|_| rng.gen_range(1..300) as f64).collect();
        let t = TwoByTwo::new(c[0], c[1], c[2], c[3])?;
        let s = dependence_sign(&t);
        let (rr, or, rd) = (
            relative_risk(&t).unwrap(),
            odds_ratio(&t).unwrap(),
            risk_difference(&t).unwrap(),
        );
        let agree = match s {
            DependenceSign::Positive => rr > 1.0 && or > 1.0 && rd > 0.0,
            DependenceSign::Negative => rr < 1.0 && or < 1.0 && rd < 0.0,
            DependenceSign::Zero => rr == 1.0 && or == 1.0 && rd == 0.0,
            DependenceSign::Undefined => false,
        };
        disagreements += usize::from(!agree);
    }
    f.equal("sign disagreements in 10^4 tables", 0, disagreements);

    // chi2 = n r^2
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let c: Vec<f64> = (0..4).map(|_| rng.gen_range(1..1000) as f64).collect();
        let t = TwoByTwo::new(c[0], c[1], c[2], c[3])?;
        let (_, x2) = independence_chi2(&t);
        let r = pearson_r(&t).unwrap();
        worst = worst.max((x2 - t.total() * r * r).abs() / x2.max(1.0));
    }
    f.holds(
        format!("chi2 = n r^2 relative gap {worst:e} > 1e-9"),
        worst <= 1e-9,
    );

    // IPF margins
    let mut gap: f64 = 0.0;
    for trial in 0..60 {
        let k = 4 + trial % 3;
        let t = support::random_table(&mut rng, k, 1, 80);
        let gens: Vec<u32> = (0..rng.gen_range(1..=4))
            .map(|_| rng.gen_range(1..(1u32 << k)))
            .collect();
        let fit = fit_ipf(
            &t,
            &LoglinearSpec::from_masks(t.schema().clone(), gens.clone())?,
            opts(),
        )?;
        for g in gens {
            let ps: Vec<usize> = (0..k).filter(|p| g >> p & 1 == 1).collect();
            for (a, b) in fit
                .fitted
                .margin(&ps)
                .counts()
                .iter()
                .zip(t.margin(&ps).counts())
            {
                gap = gap.max((a - b).abs());
            }
        }
    }
    f.holds(format!("IPF margin gap {gap:e} > 1e-8"), gap <= 1e-8);

    // IPF against the closed-form case-control estimator
    let mut gap: f64 = 0.0;
    for split in 1..4 {
        let t = support::random_table(&mut rng, 5, 1, 50);
        let n = support::names(5);
        let clique: Vec<&str> = n[1..=split].iter().map(String::as_str).collect();
        let rest: Vec<&str> = n[split + 1..].iter().map(String::as_str).collect();
        let closed = fit_closed_form_casecontrol(&t, &n[0], &clique, &rest)?;
        let controls = t.condition(&CellAddress::new([(n[0].as_str(), 0)])?)?.table;
        let fit = fit_ipf(
            &controls,
            &LoglinearSpec::new(controls.schema().clone(), &[clique, rest])?,
            opts(),
        )?;
        for (a, b) in closed.controls.counts().iter().zip(fit.fitted.counts()) {
            gap = gap.max((a - b).abs());
        }
    }
    f.holds(
        format!("IPF against closed form gap {gap:e} > 1e-8"),
        gap <= 1e-8,
    );

    // logit score and finite differences
    let t = support::bundled();
    for text in ["L : V*C*R + A*E", "L : (V+C+R)^2", "L : V+C+R+A+E"] {
        let p = LogitProblem::new(&t, &formula(text))?;
        let fit = p.fit(LogitOptions::default())?;
        let beta: Vec<f64> = fit.coefficients.iter().map(|c| c.estimate).collect();
        let score = p.score(&beta).iter().fold(0.0f64, |m, s| m.max(s.abs()));
        f.holds(
            format!("{text}: score {score:e} at the fit exceeds 1e-6"),
            score < 1e-6,
        );
        let mut points = vec![beta];
        for _ in 0..5 {
            points.push(
                (0..p.parameter_count())
                    .map(|_| rng.gen_range(-1.0..1.0))
                    .collect(),
            );
        }
        for b in points {
            let s = p.score(&b);
            for j in 0..b.len() {
                let (mut up, mut down) = (b.clone(), b.clone());
                up[j] += 1e-5;
                down[j] -= 1e-5;
                let fd = (p.log_likelihood(&up) - p.log_likelihood(&down)) / 2e-5;
                let rel = (fd - s[j]).abs() / fd.abs().max(s[j].abs()).max(1.0);
                f.holds(
                    format!("{text}: score component {j} off by {rel:e}"),
                    rel < 1e-5,
                );
            }
        }
    }

    // collapsibility identities on constructed distributions
    let exact = Evidence::Exact { rel_tol: 1e-9 };
    let first = dist3(|a, b, c| {
        bern(0.4, b) * bern(0.2 + 0.5 * b as f64, a) * bern(0.3 + 0.4 * b as f64, c)
    });
    let r = check_or_collapsibility(&first, "A", "B", "C", exact)?;
    f.holds(
        "odds-ratio collapses when A _||_ C | B",
        r.collapsible && r.condition == ConditionMet::First,
    );
    let second = dist3(|a, b, c| {
        bern(0.3, a) * bern(0.25 + 0.4 * a as f64, b) * bern(0.6 - 0.3 * a as f64, c)
    });
    let r = check_or_collapsibility(&second, "A", "B", "C", exact)?;
    f.holds(
        "odds-ratio collapses when B _||_ C | A",
        r.collapsible && r.condition == ConditionMet::Second,
    );
    let indep = dist3(|a, b, c| {
        bern(0.4, b) * bern(0.7, c) * bern((0.1 + 0.2 * c as f64) * 2f64.powi(b as i32), a)
    });
    let r = check_rr_collapsibility(&indep, "A", "B", "C", exact)?;
    let residual = r
        .mixture
        .as_ref()
        .and_then(|m| m.residual)
        .unwrap_or(f64::NAN);
    f.holds(
        "relative risk collapses when B _||_ C with equal strata",
        r.collapsible && residual.abs() < 1e-12,
    );

    // separation: breadth-first search against path enumeration
    let mut mismatches = 0usize;
    for n in 2..=5usize {
        let names = support::names(n);
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        for code in 0..1u32 << pairs.len() {
            let mut adj = vec![vec![false; n]; n];
            let mut edges = Vec::new();
            for (bit, &(i, j)) in pairs.iter().enumerate() {
                if code >> bit & 1 == 1 {
                    adj[i][j] = true;
                    adj[j][i] = true;
                    edges.push((names[i].as_str(), names[j].as_str()));
                }
            }
            let names_ref: Vec<&str> = names.iter().map(String::as_str).collect();
            let g = MixedGraph::full_line(&names_ref, &edges)?;
            for roles in 0..4usize.pow(n as u32) {
                let set = |r: usize| {
                    (0..n)
                        .filter(|&v| roles / 4usize.pow(v as u32) % 4 == r)
                        .collect::<Vec<_>>()
                };
                let (a, b, c) = (set(1), set(2), set(3));
                if a.is_empty() || b.is_empty() {
                    continue;
                }
                let pick = |s: &[usize]| s.iter().map(|&i| names_ref[i]).collect::<Vec<_>>();
                let st = IndependenceStatement::new(&pick(&a), &pick(&b), &pick(&c))?;
                if separates(&g, &st)? != support::separated_by_paths(&adj, &a, &b, &c) {
                    mismatches += 1;
                }
            }
        }
    }
    f.equal(
        "separation mismatches on graphs with at most 5 nodes",
        0,
        mismatches,
    );
    Ok(())
}

fn diagnostics(t: &ContingencyTable, f: &mut Failures) -> Result<()> {
    let controls = slice(t, 0)?;
    let ea = check_or_collapsibility(&controls, "E", "A", "R", Evidence::Sampled { alpha: 0.05 })?;
    f.near(
        "controls odds-ratio E,A at R=0",
        7.2,
        ea.conditional[0],
        0.05,
    );
    f.near(
        "controls odds-ratio E,A at R=1",
        7.5,
        ea.conditional[1],
        0.05,
    );
    f.near("controls odds-ratio E,A", 7.1, ea.marginal, 0.05);
    let er = odds_ratio(&TwoByTwo::from_table(&controls, "E", "R")?);
    f.near("controls odds-ratio E,R", 0.5, er, 0.05);
    let cases = slice(t, 1)?;
    let (lr, _) = independence_chi2(&TwoByTwo::from_table(&cases, "C", "A")?);
    f.near("cases C,A LR chi2", 5.5, Some(lr), 0.1);
    Ok(())
}

type Criterion = fn(&ContingencyTable, &mut Failures) -> Result<()>;

fn main() {
    let t = support::bundled();
    let criteria: [(&str, Criterion); 10] = [
        ("marginal measures of L on V, C, A, E, R", marginal_measures),
        ("stratified odds-ratios", stratified_odds_ratios),
        (
            "three-factor interaction and its logit deviance",
            interaction,
        ),
        ("log-linear fits and fitted counts", loglinear_fits),
        ("logit coefficients, standard errors and fits", logit_fits),
        ("fitted odds-ratio tables", fitted_or_tables),
        ("smoothed counts and odds-ratios", smoothing),
        ("forward selection and deviance decomposition", model_search),
        ("property suites", property_suites),
        ("collapsibility diagnostics", diagnostics),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let mut f = Failures::default();
        if let Err(e) = check(&t, &mut f) {
            f.0.push(format!("error: {e}"));
        }
        if f.0.is_empty() {
            println!("PASS  {:>2} {name}", k + 1);
        } else {
            failed += 1;
            println!("FAIL  {:>2} {name}", k + 1);
            for line in &f.0 {
                println!("        {line}");
            }
        }
    }
    println!("{} criteria, {failed} failed", criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
