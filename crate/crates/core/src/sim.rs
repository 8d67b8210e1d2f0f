//! Dense statevector simulation and quantum-kernel evaluation.
//!
//! Basis index bit `q` holds qubit `q`. The kernel value of `(x, y)` is the
//! probability of the all-zeros outcome after the kernel circuit; the shot
//! estimator samples that outcome from the Born distribution.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{Circuit, Gate};
use crate::error::{invalid, Error, Result};
use crate::generators::{kernel_circuit, FeatureVector, KernelFamily};
use crate::linalg::{C64, ONE, ZERO};
use crate::seed::{derive_seed, domain, rng_from_seed};

pub const DEFAULT_QUBIT_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0…0⟩` on `n` qubits.
    pub fn zero(n: usize) -> Self {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = ONE;
        StateVector { n, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    pub fn apply(&mut self, gate: &Gate) {
        let qs = gate.qubits();
        if let Some(m) = gate.matrix1() {
            let bit = 1usize << qs[0];
            for i0 in 0..self.amps.len() {
                if i0 & bit != 0 {
                    continue;
                }
                let i1 = i0 | bit;
                let (a0, a1) = (self.amps[i0], self.amps[i1]);
                self.amps[i0] = m[(0, 0)] * a0 + m[(0, 1)] * a1;
                self.amps[i1] = m[(1, 0)] * a0 + m[(1, 1)] * a1;
            }
        } else if let Some(m) = gate.matrix2() {
            let (ba, bb) = (1usize << qs[0], 1usize << qs[1]);
            for base in 0..self.amps.len() {
                if base & (ba | bb) != 0 {
                    continue;
                }
                let idx = [base, base | bb, base | ba, base | ba | bb];
                let old = idx.map(|i| self.amps[i]);
                for (r, &i) in idx.iter().enumerate() {
                    self.amps[i] = (0..4).map(|k| m[(r, k)] * old[k]).sum();
                }
            }
        }
    }

    /// Draw `shots` outcomes by inverse-CDF sampling and count how many are
    /// the basis state `target`.
    pub fn sample_count<R: Rng + ?Sized>(&self, target: usize, shots: u64, rng: &mut R) -> u64 {
        let cdf: Vec<f64> = self
            .amps
            .iter()
            .scan(0.0, |acc, a| {
                *acc += a.norm_sqr();
                Some(*acc)
            })
            .collect();
        let total = *cdf.last().unwrap_or(&1.0);
        (0..shots)
            .filter(|_| {
                let u = rng.random::<f64>() * total;
                let idx = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
                idx == target
            })
            .count() as u64
    }
}

/// Shot-based estimate of a kernel value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelEstimate {
    pub estimate: f64,
    pub shots: u64,
    pub zero_count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelMode {
    Exact,
    Shots(u64),
}

/// Symmetric `N×N` kernel matrix plus the number of circuit evaluations
/// spent building it.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    pub values: DMatrix<f64>,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelMatrixSummary {
    pub size: usize,
    pub evaluations: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub min_eigenvalue: f64,
    pub psd: bool,
}

impl KernelMatrix {
    pub fn size(&self) -> usize {
        self.values.nrows()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        if self.size() == 0 {
            return 0.0;
        }
        SymmetricEigen::new(self.values.clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol
    }

    pub fn summary(&self) -> KernelMatrixSummary {
        let vals = self.values.as_slice();
        let min_eigenvalue = self.min_eigenvalue();
        KernelMatrixSummary {
            size: self.size(),
            evaluations: self.evaluations,
            min: vals.iter().copied().fold(f64::INFINITY, f64::min),
            max: vals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean: if vals.is_empty() {
                0.0
            } else {
                vals.iter().sum::<f64>() / vals.len() as f64
            },
            min_eigenvalue,
            psd: min_eigenvalue >= -1e-8,
        }
    }

    /// Header `k0,k1,…` then one row per data point.
    pub fn to_csv(&self) -> String {
        let header: Vec<String> = (0..self.size()).map(|j| format!("k{j}")).collect();
        let mut out = header.join(",");
        out.push('\n');
        for i in 0..self.size() {
            let row: Vec<String> = (0..self.size()).map(|j| self.values[(i, j)].to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Statevector simulator with a configurable width cap.
#[derive(Debug, Clone, Copy)]
pub struct Simulator {
    cap: usize,
}

impl Default for Simulator {
    fn default() -> Self {
        Simulator { cap: DEFAULT_QUBIT_CAP }
    }
}

impl Simulator {
    pub fn with_cap(cap: usize) -> Self {
        Simulator { cap }
    }

    fn check_width(&self, width: usize) -> Result<()> {
        if width > self.cap {
            return Err(Error::SimulatorCap { width, cap: self.cap });
        }
        Ok(())
    }

    pub fn simulate(&self, c: &Circuit) -> Result<StateVector> {
        self.run_from(c, StateVector::zero(c.width()))
    }

    pub fn run_from(&self, c: &Circuit, mut state: StateVector) -> Result<StateVector> {
        self.check_width(c.width())?;
        if state.n != c.width() {
            return Err(Error::WidthMismatch {
                left: state.n,
                right: c.width(),
            });
        }
        for g in c.gates() {
            state.apply(g);
        }
        Ok(state)
    }

    /// Full `2^n × 2^n` unitary, one basis column at a time.
    pub fn unitary(&self, c: &Circuit) -> Result<DMatrix<C64>> {
        self.check_width(c.width())?;
        let dim = 1usize << c.width();
        let mut u = DMatrix::from_element(dim, dim, ZERO);
        for col in 0..dim {
            let s = self.run_from(c, StateVector::basis(c.width(), col))?;
            for (row, a) in s.amplitudes().iter().enumerate() {
                u[(row, col)] = *a;
            }
        }
        Ok(u)
    }

    /// `|⟨0|U(y)† U(x)|0⟩|²`
    pub fn exact_kernel(&self, fam: &KernelFamily, x: &FeatureVector, y: &FeatureVector) -> Result<f64> {
        let state = self.simulate(&kernel_circuit(fam, x, y)?)?;
        Ok(state.probability(0).clamp(0.0, 1.0))
    }

    pub fn estimate_kernel(
        &self,
        fam: &KernelFamily,
        x: &FeatureVector,
        y: &FeatureVector,
        shots: u64,
        seed: u64,
    ) -> Result<KernelEstimate> {
        if shots == 0 {
            return Err(invalid("kernel estimation needs at least one shot"));
        }
        let state = self.simulate(&kernel_circuit(fam, x, y)?)?;
        let zero_count = state.sample_count(0, shots, &mut rng_from_seed(seed));
        Ok(KernelEstimate {
            estimate: zero_count as f64 / shots as f64,
            shots,
            zero_count,
        })
    }

    /// Pairwise kernel matrix. The diagonal is 1 and each unordered pair is
    /// evaluated once; pair `p` draws shots from a stream derived from
    /// `(seed, p)`, so the result does not depend on evaluation order.
    pub fn kernel_matrix(
        &self,
        fam: &KernelFamily,
        data: &[FeatureVector],
        mode: KernelMode,
        seed: u64,
    ) -> Result<KernelMatrix> {
        for x in data {
            if x.len() != fam.n() {
                return Err(Error::FeatureLength {
                    expected: fam.n(),
                    got: x.len(),
                });
            }
        }
        let n = data.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let values = pairs
            .par_iter()
            .enumerate()
            .map(|(p, &(i, j))| match mode {
                KernelMode::Exact => self.exact_kernel(fam, &data[i], &data[j]),
                KernelMode::Shots(s) => self
                    .estimate_kernel(fam, &data[i], &data[j], s, derive_seed(seed, domain::SHOTS, p as u64))
                    .map(|e| e.estimate),
            })
            .collect::<Result<Vec<f64>>>()?;
        let mut m = DMatrix::identity(n, n);
        for (&(i, j), v) in pairs.iter().zip(values) {
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
        Ok(KernelMatrix {
            values: m,
            evaluations: pairs.len(),
        })
    }
}

pub fn simulate(c: &Circuit) -> Result<StateVector> {
    Simulator::default().simulate(c)
}

pub fn exact_kernel(fam: &KernelFamily, x: &FeatureVector, y: &FeatureVector) -> Result<f64> {
    Simulator::default().exact_kernel(fam, x, y)
}

pub fn estimate_kernel(
    fam: &KernelFamily,
    x: &FeatureVector,
    y: &FeatureVector,
    shots: u64,
    seed: u64,
) -> Result<KernelEstimate> {
    Simulator::default().estimate_kernel(fam, x, y, shots, seed)
}

pub fn kernel_matrix(fam: &KernelFamily, data: &[FeatureVector], mode: KernelMode, seed: u64) -> Result<KernelMatrix> {
    Simulator::default().kernel_matrix(fam, data, mode, seed)
}
