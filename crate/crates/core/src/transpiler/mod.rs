//! Lowering to an IBM-style basis `{RZ, SX, X, CX}` and routing onto a
//! coupling map, for measuring hardware depth.

mod coupling;
pub mod kak;
mod route;

use std::f64::consts::{FRAC_PI_2, PI};

pub use coupling::{CouplingMap, Topology};
pub use route::{route, RoutedCircuit};

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::Result;

/// The target gate set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BasisGateSet;

impl BasisGateSet {
    pub const ONE_QUBIT: [GateKind; 3] = [GateKind::Rz, GateKind::Sx, GateKind::X];
    pub const TWO_QUBIT: [GateKind; 1] = [GateKind::Cx];

    pub fn contains(&self, kind: GateKind) -> bool {
        Self::ONE_QUBIT.contains(&kind) || Self::TWO_QUBIT.contains(&kind)
    }

    pub fn accepts(&self, c: &Circuit) -> bool {
        c.gates().iter().all(|g| self.contains(g.kind()))
    }
}

fn lower(gate: &Gate) -> Vec<Gate> {
    let qs = gate.qubits();
    match gate.kind() {
        GateKind::Rz | GateKind::Sx | GateKind::X | GateKind::Cx => vec![gate.clone()],
        GateKind::H => vec![Gate::rz(qs[0], FRAC_PI_2), Gate::sx(qs[0]), Gate::rz(qs[0], FRAC_PI_2)],
        GateKind::Sxdg => vec![Gate::rz(qs[0], PI), Gate::sx(qs[0]), Gate::rz(qs[0], PI)],
        GateKind::U3 => {
            let q = qs[0];
            let p = gate.params();
            let (theta, phi, lambda) = (p[0], p[1], p[2]);
            vec![
                Gate::rz(q, lambda),
                Gate::sx(q),
                Gate::rz(q, theta + PI),
                Gate::sx(q),
                Gate::rz(q, phi + PI),
            ]
        }
        GateKind::Swap => vec![Gate::cx(qs[0], qs[1]), Gate::cx(qs[1], qs[0]), Gate::cx(qs[0], qs[1])],
        GateKind::Rzz => vec![
            Gate::cx(qs[0], qs[1]),
            Gate::rz(qs[1], gate.params()[0]),
            Gate::cx(qs[0], qs[1]),
        ],
        GateKind::Su4 => {
            let u = gate.unitary().expect("SU4 gates carry a payload");
            kak::synthesize_two_qubit(qs[0], qs[1], u)
        }
    }
}

/// Rewrite every gate into the basis set. Equal to the input up to global
/// phase. `SU4` payloads become three CX plus single-qubit dressings.
pub fn decompose(c: &Circuit) -> Result<Circuit> {
    let mut out = Circuit::new(c.width());
    if let Some(d) = c.base_layers() {
        out = out.with_base_layers(d);
    }
    for g in c.gates() {
        for lowered in lower(g) {
            out.push(lowered)?;
        }
    }
    Ok(out)
}

/// Basis-only circuit on physical qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Transpiled {
    pub circuit: Circuit,
    pub final_layout: Vec<usize>,
    pub swaps: usize,
}

/// Decompose, route, then lower the inserted SWAPs to CX triples.
pub fn transpile(c: &Circuit, map: &CouplingMap) -> Result<Transpiled> {
    let routed = route(&decompose(c)?, map)?;
    Ok(Transpiled {
        circuit: decompose(&routed.circuit)?,
        final_layout: routed.final_layout,
        swaps: routed.swaps,
    })
}

/// Unit-cost ASAP depth of the transpiled circuit.
pub fn transpiled_depth(c: &Circuit, map: &CouplingMap) -> Result<usize> {
    Ok(transpile(c, map)?.circuit.depth())
}
