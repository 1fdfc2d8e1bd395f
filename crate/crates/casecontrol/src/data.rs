//! Datasets and graphs shipped with the crate.

use casecontrol_core::{ContingencyTable, MixedGraph};

use crate::formats::GraphFile;
use crate::io::read_table;

/// Observed 2^6 table, variables `L, V, C, R, A, E`.
pub const SELECTED_CSV: &str = include_str!("../../../data/zatonski_selected.csv");

/// Published fitted counts for the same cells, two decimals.
pub const PUBLISHED_ESTIMATES_CSV: &str =
    include_str!("../../../data/zatonski_published_estimates.csv");

pub const GRAPHS: &[(&str, &str)] = &[
    (
        "controls_vcr",
        include_str!("../../../data/graphs/controls_vcr.json"),
    ),
    (
        "cases_vcr",
        include_str!("../../../data/graphs/cases_vcr.json"),
    ),
    (
        "a_indep_vr_given_cl",
        include_str!("../../../data/graphs/a_indep_vr_given_cl.json"),
    ),
    (
        "cases_selected",
        include_str!("../../../data/graphs/cases_selected.json"),
    ),
    (
        "controls_selected",
        include_str!("../../../data/graphs/controls_selected.json"),
    ),
    (
        "controls_regression",
        include_str!("../../../data/graphs/controls_regression.json"),
    ),
];

pub fn selected() -> ContingencyTable {
    read_table(SELECTED_CSV.as_bytes()).expect("bundled table is valid")
}

pub fn published_estimates() -> ContingencyTable {
    read_table(PUBLISHED_ESTIMATES_CSV.as_bytes()).expect("bundled estimates are valid")
}

pub fn graph(name: &str) -> Option<MixedGraph> {
    GRAPHS.iter().find(|(n, _)| *n == name).map(|(_, text)| {
        GraphFile::parse(text)
            .and_then(|f| f.to_graph())
            .expect("bundled graph is valid")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_tables_load() {
        let t = selected();
        assert_eq!(t.schema().names(), &["L", "V", "C", "R", "A", "E"]);
        assert_eq!(t.total(), 580.0);
        let e = published_estimates();
        assert_eq!(e.schema(), t.schema());
    }

    #[test]
    fn bundled_graphs_load() {
        for (name, _) in GRAPHS {
            assert!(graph(name).is_some(), "{name}");
        }
        assert!(graph("nope").is_none());
    }
}
