use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Current config and report schema.
pub const SCHEMA_VERSION: u32 = 1;

/// Coordinates of a Lie algebra element: basis name to a rational string.
pub type ElementSpec = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub algebra: AlgebraSpec,
    /// The level `ℓ` as `"p/q"`.
    pub level: String,
    pub module: ModuleSpec,
    #[serde(default)]
    pub grading: GradingSpec,
    #[serde(default)]
    pub twist_chain: Vec<StepSpec>,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tables: Option<TablesSpec>,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default = "default_true")]
    pub parallel: bool,
    /// Wall-clock timings in the report; off by default since they break
    /// byte-identical reruns.
    #[serde(default)]
    pub timing: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    #[serde(rename = "type")]
    pub kind: String,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ModuleSpec {
    /// Dynkin labels of the top space.
    #[serde(default)]
    pub lambda: Vec<u32>,
    /// Depth above the top space to which the basis is enumerated.
    pub cutoff: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum GradingSpec {
    #[default]
    CmodZ,
    C,
    #[serde(rename = "stronglyC")]
    StronglyC,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", rename_all_fields = "camelCase", deny_unknown_fields)]
pub enum StepSpec {
    InnerSemisimple {
        element: ElementSpec,
    },
    InnerNilpotent {
        element: ElementSpec,
    },
    DiagramData {
        /// Permutation of the simple roots.
        permutation: Vec<usize>,
        #[serde(default)]
        h: ElementSpec,
    },
    TransportTau {
        /// Image of each basis element.
        images: BTreeMap<String, ElementSpec>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CheckName {
    Delta,
    Equivariance,
    Commutator,
    Axioms,
    GradingRestriction,
    L0Shift,
    ModeTable,
    Involution,
    JcAdditivity,
    BigradingCompat,
    StableSubspaces,
    Functor,
}

/// One requested check. Unset ranges take per-check defaults.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CheckSpec {
    pub name: CheckName,
    /// Chain stages to run on (0 is the untwisted module); for `delta`,
    /// the stages whose step supplies `u`. Defaults to the last stage.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stages: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ceiling: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode_range: Option<i64>,
    /// Branch index for equivariance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_depth: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_depth: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_min: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse_depth: Option<i64>,
    /// Generator pairs for commutators.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family_length: Option<usize>,
}

impl CheckSpec {
    pub fn new(name: CheckName) -> Self {
        CheckSpec {
            name,
            stages: None,
            depth: None,
            ceiling: None,
            mode_range: None,
            p: None,
            v_depth: None,
            w_depth: None,
            p_min: None,
            inverse_depth: None,
            pairs: None,
            family_length: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TablesSpec {
    /// Stages to tabulate; defaults to every stage.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stages: Option<Vec<usize>>,
    #[serde(default = "default_mode_range")]
    pub mode_range: i64,
    /// Generators to tabulate; defaults to the whole basis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
}

fn default_mode_range() -> i64 {
    2
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "schemaVersion": 1,
        "algebra": { "type": "A", "rank": 1 },
        "level": "2",
        "module": { "cutoff": "2" }
    }"#;

    #[test]
    fn defaults() {
        let c = RunConfig::from_json(MINIMAL).unwrap();
        assert!(c.parallel);
        assert!(!c.timing);
        assert_eq!(c.grading, GradingSpec::CmodZ);
        assert!(c.twist_chain.is_empty() && c.checks.is_empty());
        assert_eq!(c.output.format, Format::Json);
        assert!(c.module.lambda.is_empty());
    }

    #[test]
    fn round_trip() {
        let mut c = RunConfig::from_json(MINIMAL).unwrap();
        c.twist_chain = vec![
            StepSpec::InnerSemisimple {
                element: BTreeMap::from([("h".into(), "1/2".into())]),
            },
            StepSpec::DiagramData {
                permutation: vec![0],
                h: BTreeMap::new(),
            },
        ];
        let mut check = CheckSpec::new(CheckName::JcAdditivity);
        check.stages = Some(vec![1]);
        check.pairs = Some(vec![("e".into(), "f".into())]);
        c.checks = vec![check];
        c.grading = GradingSpec::StronglyC;
        c.tables = Some(TablesSpec {
            stages: None,
            mode_range: 3,
            generators: Some(vec!["e".into()]),
        });
        let text = c.to_json();
        assert!(text.contains(r#""kind": "innerSemisimple""#));
        assert!(text.contains(r#""name": "jcAdditivity""#));
        assert!(text.contains(r#""grading": "stronglyC""#));
        assert_eq!(RunConfig::from_json(&text).unwrap(), c);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = MINIMAL.replace(r#""level": "2","#, r#""level": "2", "lvl": 3,"#);
        assert!(RunConfig::from_json(&bad).is_err());
        let bad_step = MINIMAL.replace(
            r#""level": "2","#,
            r#""level": "2", "twistChain": [{ "kind": "outer", "element": {} }],"#,
        );
        assert!(RunConfig::from_json(&bad_step).is_err());
    }

    #[test]
    fn tables_default_range() {
        let text = MINIMAL.replace(r#""level": "2","#, r#""level": "2", "tables": {},"#);
        assert_eq!(RunConfig::from_json(&text).unwrap().tables.unwrap().mode_range, 2);
    }
}
