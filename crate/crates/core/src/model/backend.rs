use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::transpiler::CouplingMap;

#[derive(Deserialize, Serialize)]
struct RawBackend {
    name: String,
    num_qubits: usize,
    quantum_volume: u64,
    clops: f64,
    coupling_map: CouplingMap,
}

/// A device as far as the runtime model cares: its quantum volume, its
/// CLOPS, and its connectivity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBackend", into = "RawBackend")]
pub struct BackendSpec {
    name: String,
    num_qubits: usize,
    quantum_volume: u64,
    clops: f64,
    coupling_map: CouplingMap,
}

impl TryFrom<RawBackend> for BackendSpec {
    type Error = Error;

    fn try_from(r: RawBackend) -> Result<Self> {
        BackendSpec::new(r.name, r.num_qubits, r.quantum_volume, r.clops, r.coupling_map)
    }
}

impl From<BackendSpec> for RawBackend {
    fn from(b: BackendSpec) -> Self {
        RawBackend {
            name: b.name,
            num_qubits: b.num_qubits,
            quantum_volume: b.quantum_volume,
            clops: b.clops,
            coupling_map: b.coupling_map,
        }
    }
}

impl BackendSpec {
    pub fn new(
        name: impl Into<String>,
        num_qubits: usize,
        quantum_volume: u64,
        clops: f64,
        coupling_map: CouplingMap,
    ) -> Result<Self> {
        let name = name.into();
        if !quantum_volume.is_power_of_two() {
            return Err(invalid(format!(
                "{name}: quantum volume {quantum_volume} is not a power of two"
            )));
        }
        if !(clops > 0.0 && clops.is_finite()) {
            return Err(invalid(format!("{name}: CLOPS must be positive, got {clops}")));
        }
        if quantum_volume.ilog2() as usize > num_qubits {
            return Err(invalid(format!(
                "{name}: log2(QV) = {} exceeds {num_qubits} qubits",
                quantum_volume.ilog2()
            )));
        }
        if coupling_map.num_qubits() != num_qubits {
            return Err(invalid(format!(
                "{name}: coupling map has {} qubits, backend has {num_qubits}",
                coupling_map.num_qubits()
            )));
        }
        Ok(BackendSpec {
            name,
            num_qubits,
            quantum_volume,
            clops,
            coupling_map,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn quantum_volume(&self) -> u64 {
        self.quantum_volume
    }

    pub fn clops(&self) -> f64 {
        self.clops
    }

    pub fn coupling_map(&self) -> &CouplingMap {
        &self.coupling_map
    }

    /// Layers of a square QV circuit at this device's quantum volume.
    pub fn qv_layers(&self) -> usize {
        self.quantum_volume.ilog2() as usize
    }

    /// Same device at a different speed.
    pub fn with_clops(&self, clops: f64) -> Result<Self> {
        BackendSpec::new(
            self.name.clone(),
            self.num_qubits,
            self.quantum_volume,
            clops,
            self.coupling_map.clone(),
        )
    }
}

/// Named set of backends, stored as `{"backends": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackendRegistry {
    backends: Vec<BackendSpec>,
}

impl BackendRegistry {
    pub fn new(backends: Vec<BackendSpec>) -> Result<Self> {
        for (i, b) in backends.iter().enumerate() {
            if backends[..i].iter().any(|o| o.name == b.name) {
                return Err(invalid(format!("duplicate backend name `{}`", b.name)));
            }
        }
        Ok(BackendRegistry { backends })
    }

    /// Five IBM Falcon-generation systems with their published QV and CLOPS,
    /// plus a sixth 27-qubit system.
    pub fn builtin() -> Self {
        let falcon27 = CouplingMap::heavy_hex_27;
        let entries = [
            ("ibm_hanoi", 64, 2300.0, falcon27()),
            ("ibmq_guadalupe", 32, 2400.0, CouplingMap::heavy_hex_16()),
            ("ibmq_jakarta", 16, 2400.0, CouplingMap::heavy_hex_7()),
            ("ibmq_mumbai", 128, 1800.0, falcon27()),
            ("ibmq_toronto", 32, 1800.0, falcon27()),
            ("ibmq_auckland", 64, 2400.0, falcon27()),
        ];
        let backends = entries
            .into_iter()
            .map(|(name, qv, clops, map)| {
                BackendSpec::new(name, map.num_qubits(), qv, clops, map).expect("builtin backend is valid")
            })
            .collect();
        BackendRegistry { backends }
    }

    pub fn backends(&self) -> &[BackendSpec] {
        &self.backends
    }

    /// Exact match first, then a match ignoring an `ibm_`/`ibmq_` prefix.
    pub fn get(&self, name: &str) -> Result<&BackendSpec> {
        let strip = |s: &str| {
            let s = s.to_ascii_lowercase();
            s.strip_prefix("ibmq_")
                .or_else(|| s.strip_prefix("ibm_"))
                .map(str::to_owned)
                .unwrap_or(s)
        };
        self.backends
            .iter()
            .find(|b| b.name == name)
            .or_else(|| self.backends.iter().find(|b| strip(&b.name) == strip(name)))
            .ok_or_else(|| Error::UnknownBackend(name.to_owned()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: BackendRegistry = serde_json::from_str(text).map_err(|e| invalid(format!("registry JSON: {e}")))?;
        BackendRegistry::new(raw.backends)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("registry serializes");
        s.push('\n');
        s
    }
}
