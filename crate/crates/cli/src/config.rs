//! JSON run configuration. Every field is optional; command-line flags take
//! precedence over anything set here.

use std::path::{Path, PathBuf};

use qkrt_core::{BackendSpec, EntanglementStrategy};
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub n: Option<usize>,
    #[serde(alias = "d")]
    pub reps: Option<usize>,
    pub entanglement: Option<EntanglementStrategy>,
}

/// Lists of job sizes for grid commands.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(rename = "M", default)]
    pub m: Vec<u64>,
    #[serde(rename = "S", default)]
    pub s: Vec<u64>,
    #[serde(default)]
    pub a: Vec<f64>,
}

/// A registry name, or a full backend description used as-is.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum BackendRef {
    Name(String),
    Inline(BackendSpec),
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub registry: Option<PathBuf>,
    pub backend: Option<BackendRef>,
    pub clops: Option<f64>,
    pub deff: Option<f64>,
    pub shots: Option<u64>,
    pub params: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub kernel_samples: Option<usize>,
    pub qv_samples: Option<usize>,
    #[serde(default)]
    pub family: FamilyConfig,
    #[serde(default)]
    pub grid: GridConfig,
}

impl FamilyConfig {
    /// Inline JSON (`{"n":4,"d":2,"entanglement":"linear"}`) or a path to it.
    pub fn parse(spec: &str) -> Result<Self> {
        let text = if spec.trim_start().starts_with('{') {
            spec.to_owned()
        } else {
            std::fs::read_to_string(spec).map_err(|e| CliError::io(spec, e))?
        };
        serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("family descriptor: {e}")))
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("config {}: {e}", path.display())))
    }
}

/// `flag`, else `config`, else nothing.
pub fn pick<T: Clone>(flag: Option<T>, config: &Option<T>) -> Option<T> {
    flag.or_else(|| config.clone())
}

/// Non-empty `flag` list, else the config list.
pub fn pick_list<T: Clone>(flag: Vec<T>, config: &[T]) -> Vec<T> {
    if flag.is_empty() {
        config.to_vec()
    } else {
        flag
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects_unknown_keys() {
        let c: RunConfig = serde_json::from_str(
            r#"{"seed": 3, "backend": "ibm_hanoi", "family": {"n": 4, "entanglement": "full"}, "grid": {"S": [10, 100]}}"#,
        )
        .unwrap();
        assert_eq!(c.seed, Some(3));
        assert_eq!(c.family.entanglement, Some(EntanglementStrategy::Full));
        assert_eq!(c.grid.s, vec![10, 100]);
        assert!(serde_json::from_str::<RunConfig>(r#"{"sead": 3}"#).is_err());
    }

    #[test]
    fn family_descriptor_accepts_d() {
        let f = FamilyConfig::parse(r#"{"n":4,"d":2,"entanglement":"linear"}"#).unwrap();
        assert_eq!((f.n, f.reps), (Some(4), Some(2)));
        assert_eq!(f.entanglement, Some(EntanglementStrategy::Linear));
    }

    #[test]
    fn backend_by_name_or_inline() {
        let c: RunConfig = serde_json::from_str(r#"{"backend": "ibm_hanoi"}"#).unwrap();
        assert_eq!(c.backend, Some(BackendRef::Name("ibm_hanoi".into())));
        let c: RunConfig = serde_json::from_str(
            r#"{"backend": {"name": "toy", "num_qubits": 3, "quantum_volume": 8, "clops": 1000,
                "coupling_map": {"n": 3, "edges": [[0, 1], [1, 2]]}}}"#,
        )
        .unwrap();
        assert!(matches!(c.backend, Some(BackendRef::Inline(b)) if b.name() == "toy"));
    }

    #[test]
    fn flags_win() {
        assert_eq!(pick(Some(1), &Some(2)), Some(1));
        assert_eq!(pick(None, &Some(2)), Some(2));
        assert_eq!(pick_list(vec![], &[4]), vec![4]);
        assert_eq!(pick_list(vec![5], &[4]), vec![5]);
    }
}
