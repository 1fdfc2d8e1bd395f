//! Dependence measures for two binary variables: odds-ratios, relative risks,
//! risk differences, binary correlations and chi-square statistics.
//!
//! Undefined values are returned as `None` rather than patched with continuity
//! corrections.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use libm::{log, sqrt};

use crate::error::{Error, Result};
use crate::special::chi2_sf;
use crate::table::{CellAddress, ContingencyTable};

/// Counts of a 2x2 classification. The first index is the response level and
/// the second the factor level, so `n10` counts response 1 at factor 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoByTwo {
    pub n11: f64,
    pub n10: f64,
    pub n01: f64,
    pub n00: f64,
}

impl TwoByTwo {
    pub fn new(n11: f64, n10: f64, n01: f64, n00: f64) -> Result<Self> {
        for (index, v) in [n11, n10, n01, n00].into_iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteCount { index });
            }
            if v < 0.0 {
                return Err(Error::NegativeCount { index, value: v });
            }
        }
        Ok(TwoByTwo { n11, n10, n01, n00 })
    }

    /// The `(response, factor)` margin of `t`.
    pub fn from_table(t: &ContingencyTable, response: &str, factor: &str) -> Result<Self> {
        if response == factor {
            return Err(Error::InvalidArgument(alloc::format!(
                "response and factor are both `{response}`"
            )));
        }
        let r = t.schema().require(response)?;
        let f = t.schema().require(factor)?;
        let mut n = [[0.0; 2]; 2];
        for (i, &c) in t.counts().iter().enumerate() {
            n[t.schema().level(i, r) as usize][t.schema().level(i, f) as usize] += c;
        }
        Ok(TwoByTwo {
            n11: n[1][1],
            n10: n[1][0],
            n01: n[0][1],
            n00: n[0][0],
        })
    }

    pub fn total(&self) -> f64 {
        self.n11 + self.n10 + self.n01 + self.n00
    }

    /// Counts with response and factor roles exchanged.
    pub fn transpose(&self) -> Self {
        TwoByTwo {
            n11: self.n11,
            n10: self.n01,
            n01: self.n10,
            n00: self.n00,
        }
    }

    fn margins(&self) -> [f64; 4] {
        [
            self.n11 + self.n10, // response 1
            self.n01 + self.n00, // response 0
            self.n11 + self.n01, // factor 1
            self.n10 + self.n00, // factor 0
        ]
    }

    /// Fitted counts under independence, in `[n11, n10, n01, n00]` order.
    pub fn independence_fit(&self) -> [f64; 4] {
        let [r1, r0, f1, f0] = self.margins();
        let n = self.total();
        [r1 * f1 / n, r1 * f0 / n, r0 * f1 / n, r0 * f0 / n]
    }

    /// `[n11, n10, n01, n00]`.
    pub fn cells(&self) -> [f64; 4] {
        [self.n11, self.n10, self.n01, self.n00]
    }
}

/// Cross-product ratio `n11 n00 / (n10 n01)`; `None` when the ratio is zero
/// or infinite (some cell is empty).
pub fn odds_ratio(t: &TwoByTwo) -> Option<f64> {
    let num = t.n11 * t.n00;
    let den = t.n10 * t.n01;
    if num > 0.0 && den > 0.0 {
        Some(num / den)
    } else {
        None
    }
}

/// Large-sample standard deviation of the log odds-ratio.
pub fn log_or_se(t: &TwoByTwo) -> Option<f64> {
    let cells = t.cells();
    if cells.iter().any(|&c| c <= 0.0) {
        return None;
    }
    Some(sqrt(cells.iter().map(|c| 1.0 / c).sum()))
}

/// Response rate at factor 1 over response rate at factor 0.
pub fn relative_risk(t: &TwoByTwo) -> Option<f64> {
    let [_, _, f1, f0] = t.margins();
    if f1 <= 0.0 || f0 <= 0.0 || t.n10 <= 0.0 {
        return None;
    }
    Some((t.n11 / f1) / (t.n10 / f0))
}

/// Response rate at factor 1 minus response rate at factor 0.
pub fn risk_difference(t: &TwoByTwo) -> Option<f64> {
    let [_, _, f1, f0] = t.margins();
    if f1 <= 0.0 || f0 <= 0.0 {
        return None;
    }
    Some(t.n11 / f1 - t.n10 / f0)
}

/// Correlation coefficient of the two binary variables.
pub fn pearson_r(t: &TwoByTwo) -> Option<f64> {
    let [r1, r0, f1, f0] = t.margins();
    let d = r1 * r0 * f1 * f0;
    if d <= 0.0 {
        return None;
    }
    Some((t.n11 * t.n00 - t.n10 * t.n01) / sqrt(d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DependenceSign {
    Positive,
    Zero,
    Negative,
    /// Some margin is empty.
    Undefined,
}

/// Direction of dependence from the sign of `n11 n00 - n10 n01`.
///
/// With all margins positive this agrees with `relative_risk > 1`,
/// `odds_ratio > 1` and `risk_difference > 0` whenever those are defined.
pub fn dependence_sign(t: &TwoByTwo) -> DependenceSign {
    if t.margins().iter().any(|&m| m <= 0.0) {
        return DependenceSign::Undefined;
    }
    let d = t.n11 * t.n00 - t.n10 * t.n01;
    if d > 0.0 {
        DependenceSign::Positive
    } else if d < 0.0 {
        DependenceSign::Negative
    } else {
        DependenceSign::Zero
    }
}

/// `2 sum n log(n / m)` against `fitted`, with empty observed cells
/// contributing zero.
pub fn lr_statistic(observed: &[f64], fitted: &[f64]) -> f64 {
    observed
        .iter()
        .zip(fitted)
        .filter(|(&n, _)| n > 0.0)
        .map(|(&n, &m)| 2.0 * n * log(n / m))
        .sum()
}

/// `sum (n - m)^2 / m` over cells with positive fitted value.
pub fn pearson_statistic(observed: &[f64], fitted: &[f64]) -> f64 {
    observed
        .iter()
        .zip(fitted)
        .filter(|(_, &m)| m > 0.0)
        .map(|(&n, &m)| (n - m) * (n - m) / m)
        .sum()
}

/// Likelihood-ratio and Pearson chi-squares for independence on 1 df.
pub fn independence_chi2(t: &TwoByTwo) -> (f64, f64) {
    let fit = t.independence_fit();
    if fit.iter().any(|m| !m.is_finite()) {
        return (0.0, 0.0);
    }
    let obs = t.cells();
    (lr_statistic(&obs, &fit), pearson_statistic(&obs, &fit))
}

/// All pairwise measures of a response/factor margin.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureReport {
    pub response: String,
    pub factor: String,
    pub counts: TwoByTwo,
    pub total: f64,
    pub odds_ratio: Option<f64>,
    pub log_or_se: Option<f64>,
    pub relative_risk: Option<f64>,
    pub risk_difference: Option<f64>,
    pub pearson_r: Option<f64>,
    pub lr_chi2: f64,
    pub pearson_chi2: f64,
    /// Upper-tail probability of `lr_chi2` on 1 df.
    pub lr_p: f64,
    pub sign: DependenceSign,
}

impl MeasureReport {
    pub fn from_counts(response: &str, factor: &str, counts: TwoByTwo) -> Self {
        let (lr, pearson) = independence_chi2(&counts);
        MeasureReport {
            response: response.to_string(),
            factor: factor.to_string(),
            counts,
            total: counts.total(),
            odds_ratio: odds_ratio(&counts),
            log_or_se: log_or_se(&counts),
            relative_risk: relative_risk(&counts),
            risk_difference: risk_difference(&counts),
            pearson_r: pearson_r(&counts),
            lr_chi2: lr,
            pearson_chi2: pearson,
            lr_p: chi2_sf(lr, 1.0),
            sign: dependence_sign(&counts),
        }
    }
}

/// Measures on the `(a, b)` margin of `t`, with `a` as the response.
pub fn pairwise_report(t: &ContingencyTable, a: &str, b: &str) -> Result<MeasureReport> {
    let counts = TwoByTwo::from_table(t, a, b)?;
    Ok(MeasureReport::from_counts(a, b, counts))
}

/// The `(a, b)` table at every level combination of `given`, listed
/// lexicographically with the first conditioning variable most significant.
pub fn stratified_tables<S: AsRef<str>>(
    t: &ContingencyTable,
    a: &str,
    b: &str,
    given: &[S],
) -> Result<Vec<(Vec<u8>, TwoByTwo)>> {
    let mut keep: Vec<&str> = vec![a, b];
    keep.extend(given.iter().map(AsRef::as_ref));
    let margin = t.marginalize(&keep)?;
    let k = given.len();
    let mut out = Vec::with_capacity(1 << k);
    for idx in 0..(1usize << k) {
        let levels: Vec<u8> = (0..k).map(|j| ((idx >> (k - 1 - j)) & 1) as u8).collect();
        let at = CellAddress::new(given.iter().map(AsRef::as_ref).zip(levels.iter().copied()))?;
        let slice = margin.condition(&at)?.table;
        out.push((levels, TwoByTwo::from_table(&slice, a, b)?));
    }
    Ok(out)
}

/// Weights expressing the marginal relative risk of `a` on `b` as an average
/// of the two relative risks given `c`:
///
/// `rr(a|b) = (alpha rr(a|b, c=1) + beta rr(a|b, c=0)) / (alpha + beta)`,
/// with `alpha = P(c=1) P(a=1|b=0,c=1)` and `beta = P(c=0) P(a=1|b=0,c=0)`.
/// The identity is exact when `b` and `c` are independent; `residual` shows
/// how far it is off otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct MixtureWeights {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub rr_marginal: Option<f64>,
    pub rr_given_c1: Option<f64>,
    pub rr_given_c0: Option<f64>,
    pub mixture: Option<f64>,
    /// `rr_marginal - mixture`.
    pub residual: Option<f64>,
    /// Likelihood-ratio chi-square for `b` independent of `c` (1 df).
    pub bc_independence_chi2: f64,
}

pub fn rr_mixture_weights(
    t: &ContingencyTable,
    a: &str,
    b: &str,
    c: &str,
) -> Result<MixtureWeights> {
    if a == b || a == c || b == c {
        return Err(Error::InvalidArgument("variables must be distinct".into()));
    }
    let abc = t.marginalize(&[a, b, c])?.reorder(&[a, b, c])?;
    let n = abc.total();
    if n <= 0.0 {
        return Err(Error::ZeroTotal);
    }
    let slice = |cl: u8| TwoByTwo {
        n11: abc.get(&[1, 1, cl]),
        n10: abc.get(&[1, 0, cl]),
        n01: abc.get(&[0, 1, cl]),
        n00: abc.get(&[0, 0, cl]),
    };
    let s1 = slice(1);
    let s0 = slice(0);
    let marginal = TwoByTwo {
        n11: s1.n11 + s0.n11,
        n10: s1.n10 + s0.n10,
        n01: s1.n01 + s0.n01,
        n00: s1.n00 + s0.n00,
    };

    // weight = P(c) P(a=1 | b=0, c); zero when c is never observed at this level
    let weight = |s: &TwoByTwo| -> Option<f64> {
        let pc = s.total() / n;
        if pc == 0.0 {
            return Some(0.0);
        }
        let base = s.n10 + s.n00;
        if base <= 0.0 {
            None
        } else {
            Some(pc * s.n10 / base)
        }
    };
    let alpha = weight(&s1);
    let beta = weight(&s0);
    let rr1 = relative_risk(&s1);
    let rr0 = relative_risk(&s0);

    let mixture = match (alpha, beta) {
        (Some(al), Some(be)) if al + be > 0.0 => {
            let part = |w: f64, rr: Option<f64>| {
                if w == 0.0 {
                    Some(0.0)
                } else {
                    rr.map(|r| w * r)
                }
            };
            match (part(al, rr1), part(be, rr0)) {
                (Some(x), Some(y)) => Some((x + y) / (al + be)),
                _ => None,
            }
        }
        _ => None,
    };
    let rr_marginal = relative_risk(&marginal);
    let residual = match (rr_marginal, mixture) {
        (Some(r), Some(m)) => Some(r - m),
        _ => None,
    };

    let bc = TwoByTwo::from_table(&abc, b, c)?;
    Ok(MixtureWeights {
        alpha,
        beta,
        rr_marginal,
        rr_given_c1: rr1,
        rr_given_c0: rr0,
        mixture,
        residual,
        bc_independence_chi2: independence_chi2(&bc).0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::Schema;
    use alloc::vec;

    fn table3() -> TwoByTwo {
        // response L (cases 1), factor V
        TwoByTwo::new(88.0, 116.0, 27.0, 349.0).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn odds_ratio_and_se_for_vodka_margin() {
        let t = table3();
        assert!(close(odds_ratio(&t).unwrap(), 9.806, 0.01));
        assert!(close(log_or_se(&t).unwrap(), 0.245, 0.001));
        let ones = TwoByTwo::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(log_or_se(&ones), Some(2.0));
        assert_eq!(
            odds_ratio(&TwoByTwo::new(10.0, 10.0, 10.0, 10.0).unwrap()),
            Some(1.0)
        );
    }

    #[test]
    fn zero_cells_leave_measures_undefined() {
        // rural regular smokers with lower education: no heavy-drinking cases
        let t = TwoByTwo::new(0.0, 3.0, 5.0, 25.0).unwrap();
        assert_eq!(odds_ratio(&t), None);
        assert_eq!(log_or_se(&t), None);
        let t = TwoByTwo::new(4.0, 0.0, 5.0, 25.0).unwrap();
        assert_eq!(odds_ratio(&t), None);
        assert_eq!(relative_risk(&t), None);
    }

    #[test]
    fn relative_risk_is_rate_by_factor() {
        let t = table3();
        let rr = relative_risk(&t).unwrap();
        assert!(close(rr, (88.0 / 115.0) / (116.0 / 465.0), 1e-12));
        assert!(close(rr, 3.07, 0.01));
        assert_eq!(
            relative_risk(&TwoByTwo::new(10.0, 10.0, 10.0, 10.0).unwrap()),
            Some(1.0)
        );
        // heavy vodka drinking among rural cases, heavy (17 of 25) vs regular smokers (5 of 23)
        let rural_cases = TwoByTwo::new(17.0, 5.0, 8.0, 18.0).unwrap();
        let rr = relative_risk(&rural_cases).unwrap();
        assert!(close(rr, 3.1, 0.05));
    }

    #[test]
    fn sign_and_correlation() {
        let t = table3();
        assert_eq!(dependence_sign(&t), DependenceSign::Positive);
        assert_eq!(
            dependence_sign(&TwoByTwo::new(2.0, 4.0, 3.0, 6.0).unwrap()),
            DependenceSign::Zero
        );
        assert_eq!(
            dependence_sign(&TwoByTwo::new(0.0, 0.0, 3.0, 6.0).unwrap()),
            DependenceSign::Undefined
        );
        let r = pearson_r(&t).unwrap();
        let (_, pearson) = independence_chi2(&t);
        assert!(((pearson - t.total() * r * r) / pearson).abs() < 1e-9);
    }

    #[test]
    fn report_is_symmetric_in_chi_squares() {
        let s = Schema::new(["L", "V"]).unwrap();
        let t = ContingencyTable::new(s, vec![349.0, 27.0, 116.0, 88.0]).unwrap();
        let lv = pairwise_report(&t, "L", "V").unwrap();
        let vl = pairwise_report(&t, "V", "L").unwrap();
        assert!(close(lv.lr_chi2, vl.lr_chi2, 1e-12));
        assert!(close(lv.pearson_chi2, vl.pearson_chi2, 1e-12));
        assert!(close(
            lv.pearson_r.unwrap().abs(),
            vl.pearson_r.unwrap().abs(),
            1e-12
        ));
        assert!(close(lv.odds_ratio.unwrap(), 9.8, 0.05));
        assert!(close(lv.lr_chi2, 104.5, 0.05));
        assert!(close(lv.pearson_chi2, 107.6, 0.05));
        assert!(pairwise_report(&t, "L", "L").is_err());
    }

    #[test]
    fn mixture_with_degenerate_third_variable() {
        let s = Schema::new(["A", "B", "C"]).unwrap();
        // all mass at C = 0
        let t = ContingencyTable::from_fn(s, |l| {
            if l[2] == 1 {
                0.0
            } else {
                [[30.0, 10.0], [20.0, 40.0]][l[0] as usize][l[1] as usize]
            }
        })
        .unwrap();
        let w = rr_mixture_weights(&t, "A", "B", "C").unwrap();
        assert_eq!(w.alpha, Some(0.0));
        assert!(w.beta.unwrap() > 0.0);
        assert!(close(w.mixture.unwrap(), w.rr_given_c0.unwrap(), 1e-12));
        assert!(w.residual.unwrap().abs() < 1e-12);
    }
}
