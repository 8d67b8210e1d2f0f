//! Gate-level circuit IR.
//!
//! A [`Circuit`] is an ordered list of [`Gate`]s over `width` qubits. There are
//! no classical registers or measurements; sampling happens in the simulator.
//!
//! Qubit order for two-qubit matrices: the first listed qubit is the high bit
//! of the local index, i.e. the matrix acts on `|q0 q1⟩` with index
//! `2·q0 + q1`. [`GateKind::Su4`] stores a full 4×4 unitary payload in that
//! order instead of angles.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{c, cis, unitarity_error, Mat2, Mat4, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    X,
    Sx,
    Sxdg,
    Rz,
    /// Generic single-qubit gate `U3(θ, φ, λ)`.
    U3,
    Cx,
    Swap,
    /// `exp(-iθ/2 Z⊗Z)`, the entangling phase of the ZZ feature map.
    Rzz,
    /// Arbitrary two-qubit unitary carried as a matrix.
    Su4,
}

impl GateKind {
    pub const ALL: [GateKind; 10] = [
        GateKind::H,
        GateKind::X,
        GateKind::Sx,
        GateKind::Sxdg,
        GateKind::Rz,
        GateKind::U3,
        GateKind::Cx,
        GateKind::Swap,
        GateKind::Rzz,
        GateKind::Su4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Sx => "SX",
            GateKind::Sxdg => "SXDG",
            GateKind::Rz => "RZ",
            GateKind::U3 => "U3",
            GateKind::Cx => "CX",
            GateKind::Swap => "SWAP",
            GateKind::Rzz => "RZZ",
            GateKind::Su4 => "SU4",
        }
    }

    pub fn num_qubits(self) -> usize {
        match self {
            GateKind::Cx | GateKind::Swap | GateKind::Rzz | GateKind::Su4 => 2,
            _ => 1,
        }
    }

    /// Number of real angles. `Su4` carries a matrix instead.
    pub fn num_params(self) -> usize {
        match self {
            GateKind::Rz | GateKind::Rzz => 1,
            GateKind::U3 => 3,
            _ => 0,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GateKind::ALL
            .iter()
            .copied()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownGate(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    qubits: [usize; 2],
    params: [f64; 3],
    unitary: Option<Box<Mat4>>,
}

impl Gate {
    fn one(kind: GateKind, q: usize, params: [f64; 3]) -> Self {
        Gate {
            kind,
            qubits: [q, q],
            params,
            unitary: None,
        }
    }

    fn two(kind: GateKind, a: usize, b: usize, params: [f64; 3]) -> Self {
        Gate {
            kind,
            qubits: [a, b],
            params,
            unitary: None,
        }
    }

    pub fn h(q: usize) -> Self {
        Self::one(GateKind::H, q, [0.0; 3])
    }

    pub fn x(q: usize) -> Self {
        Self::one(GateKind::X, q, [0.0; 3])
    }

    pub fn sx(q: usize) -> Self {
        Self::one(GateKind::Sx, q, [0.0; 3])
    }

    pub fn sxdg(q: usize) -> Self {
        Self::one(GateKind::Sxdg, q, [0.0; 3])
    }

    pub fn rz(q: usize, theta: f64) -> Self {
        Self::one(GateKind::Rz, q, [theta, 0.0, 0.0])
    }

    pub fn u3(q: usize, theta: f64, phi: f64, lambda: f64) -> Self {
        Self::one(GateKind::U3, q, [theta, phi, lambda])
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self::two(GateKind::Cx, control, target, [0.0; 3])
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Self::two(GateKind::Swap, a, b, [0.0; 3])
    }

    pub fn rzz(a: usize, b: usize, theta: f64) -> Self {
        Self::two(GateKind::Rzz, a, b, [theta, 0.0, 0.0])
    }

    /// Generic two-qubit gate. The payload must be unitary within 1e-8.
    pub fn su4(a: usize, b: usize, unitary: Mat4) -> Result<Self> {
        let err = unitarity_error(&unitary);
        if !(err < 1e-8) {
            return Err(Error::InvalidGate(format!(
                "SU4 payload is not unitary (|UU†-I| = {err:.2e})"
            )));
        }
        Ok(Gate {
            kind: GateKind::Su4,
            qubits: [a, b],
            params: [0.0; 3],
            unitary: Some(Box::new(unitary)),
        })
    }

    /// Build a gate from its textual pieces. Used by the parser.
    pub fn from_parts(kind: GateKind, qubits: &[usize], params: &[f64]) -> Result<Self> {
        if qubits.len() != kind.num_qubits() {
            return Err(Error::InvalidGate(format!(
                "{kind} acts on {} qubit(s), got {}",
                kind.num_qubits(),
                qubits.len()
            )));
        }
        let expected = if kind == GateKind::Su4 { 32 } else { kind.num_params() };
        if params.len() != expected {
            return Err(Error::InvalidGate(format!(
                "{kind} takes {expected} parameter(s), got {}",
                params.len()
            )));
        }
        let p = |i: usize| params.get(i).copied().unwrap_or(0.0);
        Ok(match kind {
            GateKind::Su4 => {
                let m = Mat4::from_fn(|i, j| {
                    let k = 2 * (4 * i + j);
                    c(params[k], params[k + 1])
                });
                Gate::su4(qubits[0], qubits[1], m)?
            }
            k if k.num_qubits() == 1 => Gate::one(k, qubits[0], [p(0), p(1), p(2)]),
            k => Gate::two(k, qubits[0], qubits[1], [p(0), p(1), p(2)]),
        })
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits[..self.kind.num_qubits()]
    }

    /// Real angles of the gate (empty for fixed gates and for `SU4`).
    pub fn params(&self) -> &[f64] {
        &self.params[..self.kind.num_params()]
    }

    /// The `SU4` payload, if any.
    pub fn unitary(&self) -> Option<&Mat4> {
        self.unitary.as_deref()
    }

    pub fn is_two_qubit(&self) -> bool {
        self.kind.num_qubits() == 2
    }

    pub fn inverse(&self) -> Gate {
        let mut g = self.clone();
        match self.kind {
            GateKind::H | GateKind::X | GateKind::Cx | GateKind::Swap => {}
            GateKind::Sx => g.kind = GateKind::Sxdg,
            GateKind::Sxdg => g.kind = GateKind::Sx,
            GateKind::Rz | GateKind::Rzz => g.params[0] = -self.params[0],
            GateKind::U3 => {
                let [theta, phi, lambda] = self.params;
                g.params = [-theta, -lambda, -phi];
            }
            GateKind::Su4 => {
                g.unitary = self.unitary.as_ref().map(|u| Box::new(u.adjoint()));
            }
        }
        g
    }

    /// Same gate on relabelled qubits.
    pub fn remapped(&self, map: impl Fn(usize) -> usize) -> Gate {
        let mut g = self.clone();
        g.qubits = [map(self.qubits[0]), map(self.qubits[1])];
        g
    }

    /// 2×2 matrix of a single-qubit gate.
    pub fn matrix1(&self) -> Option<Mat2> {
        let h = FRAC_1_SQRT_2;
        Some(match self.kind {
            GateKind::H => Mat2::new(c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)),
            GateKind::X => Mat2::new(ZERO, ONE, ONE, ZERO),
            GateKind::Sx => Mat2::new(c(0.5, 0.5), c(0.5, -0.5), c(0.5, -0.5), c(0.5, 0.5)),
            GateKind::Sxdg => Mat2::new(c(0.5, -0.5), c(0.5, 0.5), c(0.5, 0.5), c(0.5, -0.5)),
            GateKind::Rz => {
                let t = self.params[0];
                Mat2::new(cis(-t / 2.0), ZERO, ZERO, cis(t / 2.0))
            }
            GateKind::U3 => {
                let [theta, phi, lambda] = self.params;
                let (s, co) = (theta / 2.0).sin_cos();
                Mat2::new(c(co, 0.0), -cis(lambda) * s, cis(phi) * s, cis(phi + lambda) * co)
            }
            _ => return None,
        })
    }

    /// 4×4 matrix of a two-qubit gate in `|q0 q1⟩` order.
    pub fn matrix2(&self) -> Option<Mat4> {
        Some(match self.kind {
            GateKind::Cx => {
                let mut m = Mat4::zeros();
                m[(0, 0)] = ONE;
                m[(1, 1)] = ONE;
                m[(2, 3)] = ONE;
                m[(3, 2)] = ONE;
                m
            }
            GateKind::Swap => {
                let mut m = Mat4::zeros();
                m[(0, 0)] = ONE;
                m[(1, 2)] = ONE;
                m[(2, 1)] = ONE;
                m[(3, 3)] = ONE;
                m
            }
            GateKind::Rzz => {
                let t = self.params[0] / 2.0;
                Mat4::from_diagonal(&nalgebra::Vector4::new(cis(-t), cis(t), cis(t), cis(-t)))
            }
            GateKind::Su4 => **self.unitary.as_ref()?,
            _ => return None,
        })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        let qs = self.qubits();
        write!(f, " {}", qs[0])?;
        for q in &qs[1..] {
            write!(f, ",{q}")?;
        }
        let mut nums: Vec<f64> = self.params().to_vec();
        if let Some(u) = self.unitary() {
            for i in 0..4 {
                for j in 0..4 {
                    nums.push(u[(i, j)].re);
                    nums.push(u[(i, j)].im);
                }
            }
        }
        for (i, p) in nums.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { "," })?;
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// An ordered gate list over a fixed number of qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    base_layers: Option<usize>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Circuit {
            width,
            gates: Vec::new(),
            base_layers: None,
        }
    }

    pub fn from_gates(width: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Circuit::new(width);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn with_base_layers(mut self, layers: usize) -> Self {
        self.base_layers = Some(layers);
        self
    }

    /// Append a gate, checking its qubits are distinct and in range.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let qs = gate.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= self.width) {
            return Err(Error::InvalidGate(format!(
                "{} uses qubit {q} on a width-{} circuit",
                gate.kind, self.width
            )));
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::InvalidGate(format!("{} repeats qubit {}", gate.kind, qs[0])));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn base_layers(&self) -> Option<usize> {
        self.base_layers
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    pub fn count_kind(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }

    /// ASAP depth with every gate at unit cost.
    pub fn depth(&self) -> usize {
        let mut frontier = vec![0usize; self.width];
        let mut depth = 0;
        for g in &self.gates {
            let layer = 1 + g.qubits().iter().map(|&q| frontier[q]).max().unwrap_or(0);
            for &q in g.qubits() {
                frontier[q] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Circuit) -> Result<Circuit> {
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                left: self.width,
                right: other.width,
            });
        }
        let mut gates = Vec::with_capacity(self.len() + other.len());
        gates.extend_from_slice(&self.gates);
        gates.extend_from_slice(&other.gates);
        Ok(Circuit {
            width: self.width,
            gates,
            base_layers: match (self.base_layers, other.base_layers) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
        })
    }

    pub fn inverse(&self) -> Circuit {
        Circuit {
            width: self.width,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            base_layers: self.base_layers,
        }
    }

    /// Line-oriented text form: `width=<n>`, an optional `# base_layers=<D>`
    /// comment, then one `KIND q0[,q1] [p0,p1,...]` line per gate.
    pub fn to_text(&self) -> String {
        let mut out = format!("width={}\n", self.width);
        if let Some(d) = self.base_layers {
            let _ = writeln!(out, "# base_layers={d}");
        }
        for g in &self.gates {
            let _ = writeln!(out, "{g}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Circuit> {
        let mut circuit: Option<Circuit> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let perr = |message: String| Error::Parse { line: line_no, message };
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let (Some(c), Some(v)) = (circuit.as_mut(), comment.trim().strip_prefix("base_layers=")) {
                    c.base_layers = Some(v.trim().parse().map_err(|e| perr(format!("{e}")))?);
                }
                continue;
            }
            let Some(c) = circuit.as_mut() else {
                let w = line
                    .strip_prefix("width=")
                    .ok_or_else(|| perr("expected `width=<n>` header".into()))?;
                circuit = Some(Circuit::new(
                    w.trim().parse().map_err(|e| perr(format!("bad width: {e}")))?,
                ));
                continue;
            };
            let mut fields = line.split_whitespace();
            let kind: GateKind = fields
                .next()
                .unwrap_or_default()
                .parse()
                .map_err(|e: Error| perr(e.to_string()))?;
            let qubits = fields
                .next()
                .ok_or_else(|| perr("missing qubit list".into()))?
                .split(',')
                .map(|s| s.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| perr(format!("bad qubit index: {e}")))?;
            let params = match fields.next() {
                Some(p) => p
                    .split(',')
                    .map(|s| s.parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| perr(format!("bad parameter: {e}")))?,
                None => Vec::new(),
            };
            if fields.next().is_some() {
                return Err(perr("trailing fields".into()));
            }
            let gate = Gate::from_parts(kind, &qubits, &params).map_err(|e| perr(e.to_string()))?;
            c.push(gate).map_err(|e| perr(e.to_string()))?;
        }
        circuit.ok_or(Error::Parse {
            line: 0,
            message: "empty input".into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{phase_distance, random_su4};
    use crate::seed::rng_from_seed;

    fn c3(gates: Vec<Gate>) -> Circuit {
        Circuit::from_gates(3, gates).unwrap()
    }

    #[test]
    fn depth_examples() {
        assert_eq!(Circuit::new(3).depth(), 0);
        assert_eq!(c3(vec![Gate::h(0)]).depth(), 1);
        // CX waits on H, RZ waits on CX
        assert_eq!(c3(vec![Gate::h(0), Gate::cx(0, 1), Gate::rz(1, 0.3)]).depth(), 3);
        // disjoint gates share a layer
        assert_eq!(c3(vec![Gate::h(0), Gate::h(1), Gate::h(2)]).depth(), 1);
    }

    #[test]
    fn push_rejects_bad_qubits() {
        let mut c = Circuit::new(2);
        assert!(c.push(Gate::h(2)).is_err());
        assert!(c.push(Gate::cx(1, 1)).is_err());
        assert!(c.push(Gate::cx(0, 1)).is_ok());
    }

    #[test]
    fn compose_width_mismatch() {
        let a = Circuit::new(2);
        let b = Circuit::new(3);
        assert_eq!(a.compose(&b), Err(Error::WidthMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn compose_with_empty_is_identity() {
        let a = c3(vec![Gate::h(0), Gate::cx(0, 2)]);
        assert_eq!(a.compose(&Circuit::new(3)).unwrap().gates(), a.gates());
    }

    #[test]
    fn inverse_examples() {
        let c = Circuit::from_gates(1, [Gate::rz(0, 0.5)]).unwrap();
        assert_eq!(c.inverse().gates(), &[Gate::rz(0, -0.5)]);
        let c = Circuit::from_gates(2, [Gate::h(0), Gate::cx(0, 1)]).unwrap();
        assert_eq!(c.inverse().gates(), &[Gate::cx(0, 1), Gate::h(0)]);
    }

    #[test]
    fn gate_inverse_matrices() {
        let mut rng = rng_from_seed(1);
        let one = [
            Gate::h(0),
            Gate::x(0),
            Gate::sx(0),
            Gate::sxdg(0),
            Gate::rz(0, 0.7),
            Gate::u3(0, 0.3, -1.2, 2.1),
        ];
        for g in one {
            let m = g.matrix1().unwrap() * g.inverse().matrix1().unwrap();
            assert!(phase_distance(&m, &Mat2::identity()) < 1e-12, "{g}");
        }
        let two = [
            Gate::cx(0, 1),
            Gate::swap(0, 1),
            Gate::rzz(0, 1, 0.9),
            Gate::su4(0, 1, random_su4(&mut rng)).unwrap(),
        ];
        for g in two {
            let m = g.matrix2().unwrap() * g.inverse().matrix2().unwrap();
            assert!(phase_distance(&m, &Mat4::identity()) < 1e-12, "{g}");
        }
    }

    #[test]
    fn su4_rejects_non_unitary() {
        assert!(Gate::su4(0, 1, Mat4::zeros()).is_err());
    }

    #[test]
    fn text_format_shape() {
        let c = Circuit::from_gates(2, [Gate::h(0), Gate::cx(0, 1), Gate::rz(1, 0.5)])
            .unwrap()
            .with_base_layers(2);
        assert_eq!(c.to_text(), "width=2\n# base_layers=2\nH 0\nCX 0,1\nRZ 1 0.5\n");
        assert_eq!(Circuit::from_text(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn text_parse_errors_carry_line_numbers() {
        let err = Circuit::from_text("width=2\nH 0\nFOO 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = Circuit::from_text("width=2\nRZ 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(Circuit::from_text("H 0\n").is_err());
    }
}
