#![allow(dead_code)]

use nalgebra::DMatrix;
use qkrt_core::linalg::C64;
use qkrt_core::Circuit;

pub fn random_circuit(n: usize, len: usize, seed: u64) -> Circuit {
    qkrt_core::generators::random_circuit(n, len, seed).unwrap()
}

/// `min_φ ‖A − e^{iφ}B‖_max`, aligning the phase on B's largest entry.
pub fn phase_distance(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    let (idx, _) = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .unwrap();
    let phase = a.as_slice()[idx] / b.as_slice()[idx];
    let phase = phase / phase.norm();
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - phase * y).norm())
        .fold(0.0, f64::max)
}

/// Permutation matrix sending basis state bit `q` to bit `layout[q]`.
pub fn layout_permutation(layout: &[usize]) -> DMatrix<C64> {
    let n = layout.len();
    let dim = 1 << n;
    let mut p = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
    for i in 0..dim {
        let mut j = 0;
        for (q, &phys) in layout.iter().enumerate() {
            if i >> q & 1 == 1 {
                j |= 1 << phys;
            }
        }
        p[(j, i)] = C64::new(1.0, 0.0);
    }
    p
}
