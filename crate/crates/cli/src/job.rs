//! Job descriptions read from `--spec` files.
//!
//! ```json
//! {
//!   "command": "normalizer",
//!   "parameters": { "type": "A3", "levi": [1, 3] },
//!   "output_format": "json"
//! }
//! ```

use serde::Deserialize;
use weylfold::chambers::DEFAULT_HYPERPLANE_LIMIT;
use weylfold::galois::StratumSpec;

use crate::verify::Suite;
use crate::Format;

/// A validated job, independent of where it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Job {
    Rootsys { ty: String },
    Fold { ty: String, r_bar: usize },
    Normalizer { ty: String, levi: Vec<usize> },
    Chambers { ty: String, levi: Vec<usize>, max_hyperplanes: usize },
    Galois { strata: Vec<StratumSpec> },
    Example29 { g: String },
    Verify { suite: Suite },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandName {
    Rootsys,
    Fold,
    Normalizer,
    Chambers,
    Galois,
    Example29,
    Verify,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumEntry {
    #[serde(rename = "type")]
    pub ty: String,
    pub r_bar: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    #[serde(rename = "type")]
    pub ty: Option<String>,
    pub levi: Option<Vec<usize>>,
    pub r_bar: Option<usize>,
    pub strata: Option<Vec<StratumEntry>>,
    pub g: Option<String>,
    pub suite: Option<String>,
    pub max_hyperplanes: Option<usize>,
    pub cap: Option<usize>,
    pub assume_birational: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: CommandName,
    #[serde(default)]
    pub parameters: Parameters,
    pub output_format: Option<Format>,
}

impl JobSpec {
    /// Parses a spec file. Syntax and schema errors carry line and column.
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    /// Checks that exactly the parameters the command uses are present.
    pub fn into_job(self) -> Result<Job, String> {
        let p = self.parameters;
        let present: Vec<&str> = [
            ("type", p.ty.is_some()),
            ("levi", p.levi.is_some()),
            ("r_bar", p.r_bar.is_some()),
            ("strata", p.strata.is_some()),
            ("g", p.g.is_some()),
            ("suite", p.suite.is_some()),
            ("max_hyperplanes", p.max_hyperplanes.is_some()),
        ]
        .into_iter()
        .filter(|(_, set)| *set)
        .map(|(name, _)| name)
        .collect();
        let (name, allowed): (&str, &[&str]) = match self.command {
            CommandName::Rootsys => ("rootsys", &["type"]),
            CommandName::Fold => ("fold", &["type", "r_bar"]),
            CommandName::Normalizer => ("normalizer", &["type", "levi"]),
            CommandName::Chambers => ("chambers", &["type", "levi", "max_hyperplanes"]),
            CommandName::Galois => ("galois", &["strata"]),
            CommandName::Example29 => ("example29", &["g"]),
            CommandName::Verify => ("verify", &["suite"]),
        };
        if let Some(extra) = present.iter().find(|f| !allowed.contains(f)) {
            return Err(format!("field parameters.{extra} is not used by command {name}"));
        }
        let need = |field: &str| format!("field parameters.{field} is required for command {name}");

        Ok(match self.command {
            CommandName::Rootsys => Job::Rootsys {
                ty: p.ty.ok_or_else(|| need("type"))?,
            },
            CommandName::Fold => Job::Fold {
                ty: p.ty.ok_or_else(|| need("type"))?,
                r_bar: p.r_bar.ok_or_else(|| need("r_bar"))?,
            },
            CommandName::Normalizer => Job::Normalizer {
                ty: p.ty.ok_or_else(|| need("type"))?,
                levi: p.levi.unwrap_or_default(),
            },
            CommandName::Chambers => Job::Chambers {
                ty: p.ty.ok_or_else(|| need("type"))?,
                levi: p.levi.unwrap_or_default(),
                max_hyperplanes: p.max_hyperplanes.unwrap_or(DEFAULT_HYPERPLANE_LIMIT),
            },
            CommandName::Galois => Job::Galois {
                strata: p
                    .strata
                    .ok_or_else(|| need("strata"))?
                    .into_iter()
                    .enumerate()
                    .map(|(i, s)| {
                        Ok(StratumSpec {
                            ade: s
                                .ty
                                .parse()
                                .map_err(|e| format!("field parameters.strata[{i}].type: {e}"))?,
                            r_bar: s.r_bar,
                        })
                    })
                    .collect::<Result<_, String>>()?,
            },
            CommandName::Example29 => Job::Example29 {
                g: p.g.ok_or_else(|| need("g"))?,
            },
            CommandName::Verify => Job::Verify {
                suite: p
                    .suite
                    .ok_or_else(|| need("suite"))?
                    .parse()
                    .map_err(|e| format!("field parameters.suite: {e}"))?,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_spec() {
        let spec = JobSpec::parse(
            r#"{"command": "fold", "parameters": {"type": "D4", "r_bar": 2, "cap": 500}, "output_format": "json"}"#,
        )
        .unwrap();
        assert_eq!(spec.parameters.cap, Some(500));
        assert_eq!(spec.output_format, Some(Format::Json));
        assert_eq!(
            spec.into_job().unwrap(),
            Job::Fold {
                ty: "D4".into(),
                r_bar: 2
            }
        );
    }

    #[test]
    fn unknown_fields_are_located() {
        let err = JobSpec::parse("{\n  \"command\": \"fold\",\n  \"parameters\": {\"type\": \"D4\", \"rbar\": 2}\n}").unwrap_err();
        assert!(err.contains("unknown field `rbar`"), "{err}");
        assert!(err.contains("line 3"), "{err}");
    }

    #[test]
    fn unused_and_missing_parameters() {
        let spec = JobSpec::parse(r#"{"command": "fold", "parameters": {"type": "D4", "levi": [1]}}"#).unwrap();
        assert_eq!(
            spec.into_job().unwrap_err(),
            "field parameters.levi is not used by command fold"
        );
        let spec = JobSpec::parse(r#"{"command": "fold", "parameters": {"type": "D4"}}"#).unwrap();
        assert_eq!(
            spec.into_job().unwrap_err(),
            "field parameters.r_bar is required for command fold"
        );
    }

    #[test]
    fn strata_entries() {
        let spec = JobSpec::parse(
            r#"{"command": "galois", "parameters": {"strata": [{"type": "A3", "r_bar": 2}, {"type": "Q9", "r_bar": 1}]}}"#,
        )
        .unwrap();
        let err = spec.into_job().unwrap_err();
        assert!(err.starts_with("field parameters.strata[1].type"), "{err}");
    }
}
