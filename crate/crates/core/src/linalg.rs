//! Small dense complex matrices used by the gate set, the Haar sampler and
//! the two-qubit decomposition.

use nalgebra::{Complex, Matrix2, Matrix4};
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex<f64>;
pub type Mat2 = Matrix2<C64>;
pub type Mat4 = Matrix4<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `e^{iθ}`
pub(crate) fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// Kronecker product with `a` on the high bit of the local two-qubit index.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Distance between two equally sized matrices after removing the best global
/// phase: `max |a - e^{iφ} b|`.
pub fn phase_distance<const N: usize>(a: &nalgebra::SMatrix<C64, N, N>, b: &nalgebra::SMatrix<C64, N, N>) -> f64 {
    // overlap tr(b† a) carries the relative phase
    let overlap = (b.adjoint() * a).trace();
    let phase = if overlap.norm() > 1e-12 {
        overlap / overlap.norm()
    } else {
        ONE
    };
    (a - b * phase).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn unitarity_error<const N: usize>(u: &nalgebra::SMatrix<C64, N, N>) -> f64 {
    let id = nalgebra::SMatrix::<C64, N, N>::identity();
    (u * u.adjoint() - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Haar-random element of SU(4): QR of a complex Ginibre matrix, with the
/// phases of R's diagonal folded back into Q, then scaled to unit determinant.
pub fn random_su4<R: Rng + ?Sized>(rng: &mut R) -> Mat4 {
    let ginibre = Mat4::from_fn(|_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = ginibre.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..4 {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..4 {
            q[(i, j)] *= ph;
        }
    }
    to_special(&q)
}

/// Rescale a unitary to determinant one (one of the four branches).
pub fn to_special(u: &Mat4) -> Mat4 {
    let det = u.determinant();
    u * det.powf(-0.25)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;

    #[test]
    fn haar_samples_are_special_unitary() {
        let mut rng = rng_from_seed(3);
        for _ in 0..50 {
            let u = random_su4(&mut rng);
            assert!(unitarity_error(&u) < 1e-10);
            assert!((u.determinant() - ONE).norm() < 1e-10);
        }
    }

    #[test]
    fn phase_distance_ignores_global_phase() {
        let mut rng = rng_from_seed(5);
        let u = random_su4(&mut rng);
        let v = u * cis(1.234);
        assert!(phase_distance(&u, &v) < 1e-12);
        assert!(phase_distance(&u, &Mat4::identity()) > 0.1);
    }

    #[test]
    fn haar_first_moment_vanishes() {
        // E[U_ij] = 0 and E|U_ij|^2 = 1/4 for Haar measure on U(4)/SU(4).
        let mut rng = rng_from_seed(11);
        let n = 4000;
        let mut mean = C64::new(0.0, 0.0);
        let mut second = 0.0;
        for _ in 0..n {
            let u = random_su4(&mut rng);
            mean += u[(1, 2)];
            second += u[(1, 2)].norm_sqr();
        }
        mean /= n as f64;
        second /= n as f64;
        assert!(mean.norm() < 0.05, "mean {mean}");
        assert!((second - 0.25).abs() < 0.02, "second moment {second}");
    }
}
