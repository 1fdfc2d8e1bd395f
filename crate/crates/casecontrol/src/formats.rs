//! JSON documents for graphs and model specifications.
//!
//! Graph: `{"nodes": [...], "edges": [{"a", "b", "kind"}], "blocks": [[...]]}`
//! where `kind` is `full`, `dashed` or `arrow`; an arrow points from `b` to
//! `a`. Model: `{"generators": [["V", "C"], ["R"]]}`. Case-control model:
//! `{"response": "L", "case": {...}, "control": {...}}`.

use serde::{Deserialize, Serialize};

use casecontrol_core::{CaseControlModel, Edge, EdgeKind, MixedGraph};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindRecord {
    Full,
    Dashed,
    Arrow,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub a: String,
    pub b: String,
    pub kind: KindRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<Vec<String>>>,
}

impl GraphFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_graph(&self) -> CliResult<MixedGraph> {
        let index = |name: &str| -> CliResult<usize> {
            self.nodes
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| CliError::data(format!("edge refers to unknown node `{name}`")))
        };
        let edges = self
            .edges
            .iter()
            .map(|e| {
                Ok(Edge {
                    a: index(&e.a)?,
                    b: index(&e.b)?,
                    kind: match e.kind {
                        KindRecord::Full => EdgeKind::Full,
                        KindRecord::Dashed => EdgeKind::Dashed,
                        KindRecord::Arrow => EdgeKind::Arrow,
                    },
                })
            })
            .collect::<CliResult<Vec<_>>>()?;
        let blocks = match &self.blocks {
            Some(bs) => Some(
                bs.iter()
                    .map(|b| b.iter().map(|n| index(n)).collect::<CliResult<Vec<_>>>())
                    .collect::<CliResult<Vec<_>>>()?,
            ),
            None => None,
        };
        MixedGraph::new(self.nodes.clone(), edges, blocks)
            .map_err(|e| CliError::data(e.to_string()))
    }

    pub fn from_graph(g: &MixedGraph) -> Self {
        let name = |i: usize| g.nodes()[i].clone();
        GraphFile {
            note: None,
            nodes: g.nodes().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    a: name(e.a),
                    b: name(e.b),
                    kind: match e.kind {
                        EdgeKind::Full => KindRecord::Full,
                        EdgeKind::Dashed => KindRecord::Dashed,
                        EdgeKind::Arrow => KindRecord::Arrow,
                    },
                })
                .collect(),
            blocks: g.blocks().map(|bs| {
                bs.iter()
                    .map(|b| b.iter().map(|&i| name(i)).collect())
                    .collect()
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFile {
    pub generators: Vec<Vec<String>>,
}

impl ModelFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn default_response() -> String {
    "L".into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseControlFile {
    #[serde(default = "default_response")]
    pub response: String,
    pub case: ModelFile,
    pub control: ModelFile,
}

impl CaseControlFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_model(&self) -> CaseControlModel {
        CaseControlModel::new(
            &self.response,
            &self.case.generators,
            &self.control.generators,
        )
    }
}

/// `"V,C"` to `["V", "C"]`, trimming blanks and rejecting empty names.
pub fn split_names(list: &str) -> CliResult<Vec<String>> {
    let names: Vec<String> = list.split(',').map(|s| s.trim().to_string()).collect();
    if names.iter().any(String::is_empty) {
        return Err(CliError::usage(format!("empty variable name in `{list}`")));
    }
    Ok(names)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let text = r#"{"nodes": ["V", "C", "R"], "edges": [{"a": "V", "b": "C", "kind": "dashed"},
            {"a": "C", "b": "R", "kind": "arrow"}], "blocks": [["V", "C"], ["R"]]}"#;
        let f = GraphFile::parse(text).unwrap();
        let g = f.to_graph().unwrap();
        assert_eq!(GraphFile::from_graph(&g), f);
    }

    #[test]
    fn graph_errors() {
        let bad = r#"{"nodes": ["V"], "edges": [{"a": "V", "b": "Q", "kind": "full"}]}"#;
        assert!(GraphFile::parse(bad).unwrap().to_graph().is_err());
        assert!(GraphFile::parse(
            r#"{"nodes": ["V"], "edges": [{"a": "V", "b": "V", "kind": "bent"}]}"#
        )
        .is_err());
    }

    #[test]
    fn case_control_defaults_response() {
        let f = CaseControlFile::parse(
            r#"{"case": {"generators": [["V","C","R"]]}, "control": {"generators": [["V","C"],["R"]]}}"#,
        )
        .unwrap();
        let m = f.to_model();
        assert_eq!(m.response, "L");
        assert_eq!(m.control_generators.len(), 2);
    }
}
