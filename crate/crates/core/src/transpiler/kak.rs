//! Two-qubit unitary synthesis with three CX gates.
//!
//! `U = e^{iγ} (A1⊗B1) · exp(i(a·XX + b·YY + c·ZZ)) · (A2⊗B2)`, found by
//! moving to the magic basis where local gates are real orthogonal and the
//! nonlocal part is diagonal. The canonical term is then realised by a fixed
//! three-CX circuit whose middle rotations carry `(a, b, c)`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use nalgebra::{Matrix4, SymmetricEigen, Vector4};

use crate::circuit::Gate;
use crate::linalg::{c, cis, to_special, Mat2, Mat4, ZERO};

/// Columns are the magic (Bell-like) basis states.
fn magic() -> Mat4 {
    let h = FRAC_1_SQRT_2;
    Mat4::new(
        c(h, 0.0),
        ZERO,
        ZERO,
        c(0.0, h),
        ZERO,
        c(0.0, h),
        c(h, 0.0),
        ZERO,
        ZERO,
        c(0.0, h),
        c(-h, 0.0),
        ZERO,
        c(h, 0.0),
        ZERO,
        ZERO,
        c(0.0, -h),
    )
}

// Diagonals of XX, YY, ZZ in the magic basis.
const XX_DIAG: [f64; 4] = [1.0, 1.0, -1.0, -1.0];
const YY_DIAG: [f64; 4] = [-1.0, 1.0, -1.0, 1.0];
const ZZ_DIAG: [f64; 4] = [1.0, -1.0, -1.0, 1.0];

// Real combinations tried when diagonalising Re(M) + t·Im(M).
const MIXES: [(f64, f64); 6] = [
    (1.0, 0.537_1),
    (0.291_3, 1.0),
    (1.0, -0.771_9),
    (0.613_7, 0.188_3),
    (-0.402_1, 1.0),
    (1.0, 2.683_9),
];

#[derive(Debug, Clone)]
pub struct KakDecomposition {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Locals applied after the canonical gate, on `(q0, q1)`.
    pub after: (Mat2, Mat2),
    /// Locals applied before the canonical gate, on `(q0, q1)`.
    pub before: (Mat2, Mat2),
}

pub fn rz_matrix(theta: f64) -> Mat2 {
    Mat2::new(cis(-theta / 2.0), ZERO, ZERO, cis(theta / 2.0))
}

pub fn ry_matrix(theta: f64) -> Mat2 {
    let (s, co) = (theta / 2.0).sin_cos();
    Mat2::new(c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0))
}

/// Split a 4×4 tensor product `A⊗B` (A on the high bit) into its factors,
/// each normalised to unit determinant.
pub fn factor_local(l: &Mat4) -> (Mat2, Mat2) {
    let (mut best, mut r, mut col) = (-1.0, 0, 0);
    for i in 0..4 {
        for j in 0..4 {
            if l[(i, j)].norm() > best {
                best = l[(i, j)].norm();
                r = i;
                col = j;
            }
        }
    }
    let (ra, rb) = (r / 2, r % 2);
    let (ca, cb) = (col / 2, col % 2);
    let block = Mat2::from_fn(|k, m| l[(2 * ra + k, 2 * ca + m)]);
    let b = block / block.determinant().sqrt();
    let a = Mat2::from_fn(|x, y| l[(2 * x + rb, 2 * y + cb)] / b[(rb, cb)]);
    let a = a / a.determinant().sqrt();
    (a, b)
}

pub fn kak_decompose(u: &Mat4) -> KakDecomposition {
    let mb = magic();
    let up = mb.adjoint() * to_special(u) * mb;
    let m2 = up.transpose() * up;
    let re: Matrix4<f64> = m2.map(|z| z.re);
    let im: Matrix4<f64> = m2.map(|z| z.im);

    // M2 is complex symmetric and unitary, so Re and Im commute and share a
    // real orthogonal eigenbasis; a generic real mix separates it.
    let mut best: Option<(f64, Matrix4<f64>)> = None;
    for &(s, t) in &MIXES {
        let eig = SymmetricEigen::new(re * s + im * t);
        let p = eig.eigenvectors;
        let pc = p.map(|x| c(x, 0.0));
        let d = pc.transpose() * m2 * pc;
        let off = (0..4)
            .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| d[(i, j)].norm())
            .fold(0.0, f64::max);
        if best.as_ref().is_none_or(|(e, _)| off < *e) {
            best = Some((off, p));
        }
        if off < 1e-10 {
            break;
        }
    }
    let (_, mut p) = best.expect("at least one mix tried");
    if p.determinant() < 0.0 {
        p.column_mut(0).neg_mut();
    }
    let pc = p.map(|x| c(x, 0.0));
    let diag = (pc.transpose() * m2 * pc).diagonal();
    let mut d: [f64; 4] = std::array::from_fn(|k| diag[k].arg() / 2.0);

    let k1_for = |d: &[f64; 4]| up * pc * Mat4::from_diagonal(&Vector4::from_fn(|k, _| cis(-d[k])));
    let mut k1 = k1_for(&d);
    if k1.determinant().re < 0.0 {
        d[0] += PI;
        k1 = k1_for(&d);
    }

    let proj = |w: &[f64; 4]| w.iter().zip(&d).map(|(s, x)| s * x).sum::<f64>() / 4.0;
    let after = factor_local(&(mb * k1 * mb.adjoint()));
    let before = factor_local(&(mb * pc.transpose() * mb.adjoint()));
    KakDecomposition {
        a: proj(&XX_DIAG),
        b: proj(&YY_DIAG),
        c: proj(&ZZ_DIAG),
        after,
        before,
    }
}

/// ZYZ Euler angles `(θ, φ, λ)` with `m ∝ U3(θ, φ, λ)`.
pub fn euler_zyz(m: &Mat2) -> (f64, f64, f64) {
    let v = m / m.determinant().sqrt();
    let theta = 2.0 * v[(1, 0)].norm().atan2(v[(0, 0)].norm());
    let sum = 2.0 * v[(1, 1)].arg();
    let diff = 2.0 * v[(1, 0)].arg();
    (theta, (sum + diff) / 2.0, (sum - diff) / 2.0)
}

fn is_trivial_angle(theta: f64) -> bool {
    let r = theta.rem_euclid(2.0 * PI);
    r < 1e-12 || 2.0 * PI - r < 1e-12
}

/// Realise an arbitrary single-qubit unitary as `RZ·SX·RZ·SX·RZ` (time
/// order `RZ(λ), SX, RZ(θ+π), SX, RZ(φ+π)`), or a single `RZ` when `m` is
/// diagonal. Trivial rotations are dropped.
pub fn synthesize_one_qubit(q: usize, m: &Mat2) -> Vec<Gate> {
    if m[(1, 0)].norm() < 1e-12 && m[(0, 1)].norm() < 1e-12 {
        let angle = (m[(1, 1)] / m[(0, 0)]).arg();
        return if is_trivial_angle(angle) {
            Vec::new()
        } else {
            vec![Gate::rz(q, angle)]
        };
    }
    let (theta, phi, lambda) = euler_zyz(m);
    let mut out = Vec::with_capacity(5);
    let rz = |angle: f64, out: &mut Vec<Gate>| {
        if !is_trivial_angle(angle) {
            out.push(Gate::rz(q, angle));
        }
    };
    rz(lambda, &mut out);
    out.push(Gate::sx(q));
    rz(theta + PI, &mut out);
    out.push(Gate::sx(q));
    rz(phi + PI, &mut out);
    out
}

/// Basis-gate circuit (RZ, SX, CX) for a two-qubit unitary on `(q0, q1)`.
/// Always three CX.
pub fn synthesize_two_qubit(q0: usize, q1: usize, u: &Mat4) -> Vec<Gate> {
    let k = kak_decompose(u);
    let mut out = Vec::new();
    let one = |q: usize, m: Mat2, out: &mut Vec<Gate>| out.extend(synthesize_one_qubit(q, &m));

    one(q0, k.before.0, &mut out);
    one(q1, rz_matrix(-FRAC_PI_2) * k.before.1, &mut out);
    out.push(Gate::cx(q1, q0));
    one(q0, rz_matrix(FRAC_PI_2 - 2.0 * k.c), &mut out);
    one(q1, ry_matrix(2.0 * k.a - FRAC_PI_2), &mut out);
    out.push(Gate::cx(q0, q1));
    one(q1, ry_matrix(FRAC_PI_2 - 2.0 * k.b), &mut out);
    out.push(Gate::cx(q1, q0));
    one(q0, k.after.0 * rz_matrix(FRAC_PI_2), &mut out);
    one(q1, k.after.1, &mut out);
    out
}
