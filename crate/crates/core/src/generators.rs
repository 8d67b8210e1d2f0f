//! The two circuit families: quantum volume model circuits and ZZ-feature-map
//! kernel circuits.

use std::f64::consts::PI;
use std::fmt;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{invalid, Error, Result};
use crate::linalg::random_su4;
use crate::seed::rng_from_seed;

/// Which qubit pairs receive an entangling ZZ phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntanglementStrategy {
    /// Adjacent pairs `(0,1), (1,2), …, (n-2,n-1)`.
    Linear,
    /// Every pair `(j,k)` with `j < k`.
    Full,
}

impl EntanglementStrategy {
    pub fn pairs(self, n: usize) -> Vec<(usize, usize)> {
        match self {
            EntanglementStrategy::Linear => (1..n).map(|k| (k - 1, k)).collect(),
            EntanglementStrategy::Full => (0..n).flat_map(|j| (j + 1..n).map(move |k| (j, k))).collect(),
        }
    }
}

impl fmt::Display for EntanglementStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntanglementStrategy::Linear => "linear",
            EntanglementStrategy::Full => "full",
        })
    }
}

impl std::str::FromStr for EntanglementStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(EntanglementStrategy::Linear),
            "full" => Ok(EntanglementStrategy::Full),
            other => Err(invalid(format!("unknown entanglement strategy `{other}`"))),
        }
    }
}

#[derive(Deserialize)]
struct RawFamily {
    n: usize,
    #[serde(default = "default_reps")]
    d: usize,
    entanglement: EntanglementStrategy,
}

fn default_reps() -> usize {
    1
}

/// Descriptor of a ZZ-feature-map encoding: `n` qubits, `d` repetitions of the
/// base template, and an entanglement strategy.
///
/// JSON form: `{"n":4,"d":2,"entanglement":"linear"}`; `d` defaults to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFamily")]
pub struct KernelFamily {
    n: usize,
    d: usize,
    entanglement: EntanglementStrategy,
}

impl TryFrom<RawFamily> for KernelFamily {
    type Error = Error;

    fn try_from(raw: RawFamily) -> Result<Self> {
        KernelFamily::new(raw.n, raw.d, raw.entanglement)
    }
}

impl KernelFamily {
    pub fn new(n: usize, d: usize, entanglement: EntanglementStrategy) -> Result<Self> {
        if n < 2 {
            return Err(invalid(format!("kernel family needs n >= 2, got {n}")));
        }
        if d < 1 {
            return Err(invalid("kernel family needs d >= 1"));
        }
        Ok(KernelFamily { n, d, entanglement })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn reps(&self) -> usize {
        self.d
    }

    pub fn entanglement(&self) -> EntanglementStrategy {
        self.entanglement
    }

    /// Width times base layers of the kernel circuit: `2·d·n`.
    pub fn volumetric_area(&self) -> usize {
        2 * self.d * self.n
    }

    pub fn aspect_ratio(&self) -> AspectRatio {
        aspect_ratio(self)
    }

    /// A uniformly random feature vector in `[0, 2π)^n`.
    pub fn random_features<R: Rng + ?Sized>(&self, rng: &mut R) -> FeatureVector {
        FeatureVector((0..self.n).map(|_| rng.random_range(0.0..2.0 * PI)).collect())
    }
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "zz(n={}, d={}, {})", self.n, self.d, self.entanglement)
    }
}

/// One classical data point, one component per qubit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(pub Vec<f64>);

impl FeatureVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for FeatureVector {
    fn from(v: Vec<f64>) -> Self {
        FeatureVector(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircuitShape {
    WideShallow,
    Square,
    NarrowDeep,
}

/// Exact `2d/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AspectRatio(pub Ratio<usize>);

impl AspectRatio {
    pub fn shape(&self) -> CircuitShape {
        match self.0.cmp(&Ratio::from_integer(1)) {
            std::cmp::Ordering::Less => CircuitShape::WideShallow,
            std::cmp::Ordering::Equal => CircuitShape::Square,
            std::cmp::Ordering::Greater => CircuitShape::NarrowDeep,
        }
    }

    pub fn to_f64(&self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }
}

impl fmt::Display for AspectRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn aspect_ratio(fam: &KernelFamily) -> AspectRatio {
    AspectRatio(Ratio::new(2 * fam.d, fam.n))
}

/// Quantum volume model circuit: each layer relabels the qubits by a uniform
/// random permutation, then applies Haar-random SU(4) gates to the
/// `floor(q/2)` consecutive pairs of the permuted order. The permutation is
/// logical, so no SWAP gates appear.
pub fn qv_circuit(q: usize, layers: usize, seed: u64) -> Result<Circuit> {
    if q < 2 {
        return Err(invalid(format!("quantum volume circuit needs q >= 2, got {q}")));
    }
    if layers < 1 {
        return Err(invalid("quantum volume circuit needs at least one layer"));
    }
    let mut rng = rng_from_seed(seed);
    let mut circuit = Circuit::new(q).with_base_layers(layers);
    let mut order: Vec<usize> = (0..q).collect();
    for _ in 0..layers {
        order.shuffle(&mut rng);
        for pair in order.chunks_exact(2) {
            circuit.push(Gate::su4(pair[0], pair[1], random_su4(&mut rng))?)?;
        }
    }
    Ok(circuit)
}

/// Random circuit drawing uniformly over every gate kind: `len` gates on
/// `n ≥ 2` qubits, angles uniform in `[-π, π)`. For tests and benchmarks.
pub fn random_circuit(n: usize, len: usize, seed: u64) -> Result<Circuit> {
    if n < 2 {
        return Err(invalid(format!("random circuits need n >= 2, got {n}")));
    }
    let mut rng = rng_from_seed(seed);
    let mut c = Circuit::new(n);
    for _ in 0..len {
        let kind = GateKind::ALL[rng.random_range(0..GateKind::ALL.len())];
        let a = rng.random_range(0..n);
        let b = (a + rng.random_range(1..n)) % n;
        let mut angle = || rng.random_range(-PI..PI);
        let g = match kind {
            GateKind::H => Gate::h(a),
            GateKind::X => Gate::x(a),
            GateKind::Sx => Gate::sx(a),
            GateKind::Sxdg => Gate::sxdg(a),
            GateKind::Rz => Gate::rz(a, angle()),
            GateKind::U3 => Gate::u3(a, angle(), angle(), angle()),
            GateKind::Cx => Gate::cx(a, b),
            GateKind::Swap => Gate::swap(a, b),
            GateKind::Rzz => Gate::rzz(a, b, angle()),
            GateKind::Su4 => Gate::su4(a, b, random_su4(&mut rng))?,
        };
        c.push(g)?;
    }
    Ok(c)
}

fn check_len(fam: &KernelFamily, x: &FeatureVector) -> Result<()> {
    if x.len() != fam.n {
        return Err(Error::FeatureLength {
            expected: fam.n,
            got: x.len(),
        });
    }
    Ok(())
}

/// `U(x)`: `d` repetitions of `[H on every qubit, V(x)]`, where `V(x)` is
/// `RZ(2·x_j)` on each qubit followed by `RZZ(2·(π-x_j)(π-x_k))` on every
/// pair of the strategy.
pub fn encoding_circuit(fam: &KernelFamily, x: &FeatureVector) -> Result<Circuit> {
    check_len(fam, x)?;
    let n = fam.n;
    let pairs = fam.entanglement.pairs(n);
    let mut circuit = Circuit::new(n).with_base_layers(fam.d);
    let xs = x.components();
    for _ in 0..fam.d {
        for q in 0..n {
            circuit.push(Gate::h(q))?;
        }
        for (q, &xq) in xs.iter().enumerate() {
            circuit.push(Gate::rz(q, 2.0 * xq))?;
        }
        for &(j, k) in &pairs {
            let phi = (PI - xs[j]) * (PI - xs[k]);
            circuit.push(Gate::rzz(j, k, 2.0 * phi))?;
        }
    }
    Ok(circuit)
}

/// `U(x)` followed by `U(y)†`; `2d` base layers on `n` qubits.
pub fn kernel_circuit(fam: &KernelFamily, x: &FeatureVector, y: &FeatureVector) -> Result<Circuit> {
    let ux = encoding_circuit(fam, x)?;
    let uy = encoding_circuit(fam, y)?;
    ux.compose(&uy.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;
    use crate::linalg::unitarity_error;
    use EntanglementStrategy::*;

    #[test]
    fn pair_sets() {
        assert_eq!(Linear.pairs(4), vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(Full.pairs(3), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(Full.pairs(6).len(), 15);
    }

    #[test]
    fn family_validation_and_json() {
        assert!(KernelFamily::new(1, 1, Linear).is_err());
        assert!(KernelFamily::new(3, 0, Full).is_err());
        let fam: KernelFamily = serde_json::from_str(r#"{"n":4,"d":2,"entanglement":"linear"}"#).unwrap();
        assert_eq!(fam, KernelFamily::new(4, 2, Linear).unwrap());
        let fam: KernelFamily = serde_json::from_str(r#"{"n":3,"entanglement":"full"}"#).unwrap();
        assert_eq!(fam.reps(), 1);
        assert!(serde_json::from_str::<KernelFamily>(r#"{"n":1,"entanglement":"full"}"#).is_err());
    }

    #[test]
    fn qv_two_qubits_two_layers() {
        let c = qv_circuit(2, 2, 9).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.count_kind(GateKind::Su4), 2);
        assert_eq!(c.base_layers(), Some(2));
    }

    #[test]
    fn qv_square_rule() {
        // a QV-16 device runs log2(16) = 4 layers on 4 qubits
        let layers = 16u32.ilog2() as usize;
        let c = qv_circuit(layers, layers, 1).unwrap();
        assert_eq!(c.width(), 4);
        assert_eq!(c.two_qubit_count(), 4 * 2);
    }

    #[test]
    fn qv_structure_and_determinism() {
        for q in 2..8 {
            let c = qv_circuit(q, 3, 42).unwrap();
            assert_eq!(c.len(), 3 * (q / 2));
            assert_eq!(c.two_qubit_count(), c.len());
            assert_eq!(c, qv_circuit(q, 3, 42).unwrap());
            for g in c.gates() {
                assert!(unitarity_error(g.unitary().unwrap()) < 1e-10);
            }
        }
        assert_ne!(qv_circuit(4, 2, 1).unwrap(), qv_circuit(4, 2, 2).unwrap());
        assert!(qv_circuit(1, 1, 0).is_err());
        assert!(qv_circuit(3, 0, 0).is_err());
    }

    #[test]
    fn encoding_phases() {
        let fam = KernelFamily::new(2, 1, Linear).unwrap();
        let x = FeatureVector(vec![0.3, 1.1]);
        let c = encoding_circuit(&fam, &x).unwrap();
        let rz: Vec<_> = c.gates().iter().filter(|g| g.kind() == GateKind::Rz).collect();
        assert_eq!(rz[0].params(), &[0.6]);
        assert_eq!(rz[1].params(), &[2.2]);
        let zz: Vec<_> = c.gates().iter().filter(|g| g.kind() == GateKind::Rzz).collect();
        assert_eq!(zz.len(), 1);
        assert_eq!(zz[0].qubits(), &[0, 1]);
        let expected = 2.0 * (PI - 0.3) * (PI - 1.1);
        assert!((zz[0].params()[0] - expected).abs() < 1e-15);

        let pi = FeatureVector(vec![PI, PI]);
        let c = encoding_circuit(&fam, &pi).unwrap();
        let zz = c.gates().iter().find(|g| g.kind() == GateKind::Rzz).unwrap();
        assert_eq!(zz.params(), &[0.0]);
    }

    #[test]
    fn full_entangles_all_pairs() {
        let fam = KernelFamily::new(3, 1, Full).unwrap();
        let c = encoding_circuit(&fam, &FeatureVector(vec![0.1, 0.2, 0.3])).unwrap();
        let pairs: Vec<_> = c
            .gates()
            .iter()
            .filter(|g| g.kind() == GateKind::Rzz)
            .map(|g| g.qubits().to_vec())
            .collect();
        assert_eq!(pairs, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn encoding_gate_counts() {
        for n in 2..7 {
            for d in 1..4 {
                let x = FeatureVector(vec![0.5; n]);
                let lin = KernelFamily::new(n, d, Linear).unwrap();
                assert_eq!(encoding_circuit(&lin, &x).unwrap().len(), d * (2 * n + n - 1));
                let full = KernelFamily::new(n, d, Full).unwrap();
                assert_eq!(
                    encoding_circuit(&full, &x).unwrap().len(),
                    d * (2 * n + n * (n - 1) / 2)
                );
            }
        }
    }

    #[test]
    fn kernel_circuit_shape() {
        let fam = KernelFamily::new(4, 2, Linear).unwrap();
        let x = FeatureVector(vec![0.1, 0.2, 0.3, 0.4]);
        let y = FeatureVector(vec![1.1, 1.2, 1.3, 1.4]);
        let k = kernel_circuit(&fam, &x, &y).unwrap();
        assert_eq!(k.width(), 4);
        assert_eq!(k.base_layers(), Some(4));
        assert_eq!(fam.volumetric_area(), 16);
        assert_eq!(k.len(), 2 * encoding_circuit(&fam, &x).unwrap().len());
        assert!(matches!(
            kernel_circuit(&fam, &x, &FeatureVector(vec![0.0; 3])),
            Err(Error::FeatureLength { expected: 4, got: 3 })
        ));
    }

    #[test]
    fn aspect_ratios() {
        let a = aspect_ratio(&KernelFamily::new(4, 2, Linear).unwrap());
        assert_eq!(a.0, Ratio::from_integer(1));
        assert_eq!(a.shape(), CircuitShape::Square);
        let a = aspect_ratio(&KernelFamily::new(6, 1, Linear).unwrap());
        assert_eq!(a.0, Ratio::new(1, 3));
        assert_eq!(a.shape(), CircuitShape::WideShallow);
        let a = aspect_ratio(&KernelFamily::new(2, 3, Full).unwrap());
        assert_eq!(a.0, Ratio::from_integer(3));
        assert_eq!(a.shape(), CircuitShape::NarrowDeep);
    }
}
