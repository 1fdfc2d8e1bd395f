//! Analysis of case-control data classified by binary variables.
//!
//! The crate covers dense contingency tables ([`table`]), pairwise dependence
//! measures ([`measures`]), mixed and concentration graphs ([`graph`]),
//! hierarchical log-linear models fitted by iterative proportional fitting
//! ([`loglinear`]), logit regressions on categorical regressors ([`logit`]),
//! and the recombination of separately fitted case and control structures
//! into smoothed odds-ratios ([`smoothing`]).
//!
//! Everything here is pure computation on `alloc` collections; file formats
//! and the command line live in the `casecontrol` crate.
#![no_std]

extern crate alloc;

pub mod error;
pub mod formula;
pub mod graph;
pub mod linalg;
pub mod logit;
pub mod loglinear;
pub mod measures;
pub mod smoothing;
pub mod special;
pub mod table;

pub use error::{Error, Result};
pub use formula::LogitFormula;
pub use graph::{Edge, EdgeKind, IndependenceStatement, MixedGraph};
pub use logit::{LogitFit, LogitOptions};
pub use loglinear::{IpfOptions, LoglinearFit, LoglinearSpec};
pub use measures::{MeasureReport, TwoByTwo};
pub use smoothing::{CaseControlModel, SmoothedEstimates};
pub use table::{CellAddress, ContingencyTable, Schema};
