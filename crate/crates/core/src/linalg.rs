//! Quaternions, SU(2) matrices and symmetric powers.

use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64;
use std::ops::Mul;

pub type C64 = Complex64;
pub type Mat2 = Matrix2<C64>;
pub type Mat4 = Matrix4<C64>;
pub type MatN = DMatrix<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Unit quaternion `w + x i + y j + z k`, identified with the SU(2) matrix
/// `[[w + ix, y + iz], [-y + iz, w - ix]]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Quat {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quat {
    pub const IDENTITY: Quat = Quat { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };
    /// `J₀ = [[0, 1], [-1, 0]]`.
    pub const J0: Quat = Quat { w: 0.0, x: 0.0, y: 1.0, z: 0.0 };

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    /// `diag(e^{iθ}, e^{-iθ})`.
    pub fn torus(theta: f64) -> Self {
        Self::new(theta.cos(), theta.sin(), 0.0, 0.0)
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        Self::new(self.w / n, self.x / n, self.y / n, self.z / n)
    }

    pub fn norm(&self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Inverse of a unit quaternion.
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }

    /// `self · q · self⁻¹`.
    pub fn conjugate(self, q: Quat) -> Quat {
        self * q * self.conj()
    }

    /// Half the trace, i.e. `cos θ` where the eigenvalues are `e^{±iθ}`.
    pub fn cos_angle(&self) -> f64 {
        self.w.clamp(-1.0, 1.0)
    }

    pub fn angle(&self) -> f64 {
        self.cos_angle().acos()
    }

    pub fn to_matrix(self) -> Mat2 {
        Mat2::new(
            C64::new(self.w, self.x),
            C64::new(self.y, self.z),
            C64::new(-self.y, self.z),
            C64::new(self.w, -self.x),
        )
    }
}

impl Mul for Quat {
    type Output = Quat;
    fn mul(self, o: Quat) -> Quat {
        Quat::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

/// `U_m(c)`: the character of `Sym^m` on an SU(2) element with `cos θ = c`.
pub fn sym_char(m: u32, c: f64) -> f64 {
    let mut u0 = 1.0;
    if m == 0 {
        return u0;
    }
    let mut u1 = 2.0 * c;
    for _ in 1..m {
        let u2 = 2.0 * c * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
    u1
}

/// Unitary matrix of `Sym^m(g)` on the orthonormal monomial basis
/// `sqrt(C(m, i)) x^{m-i} y^i`, `i = 0..=m`.
pub fn sym_power(g: &Mat2, m: usize) -> MatN {
    let d = m + 1;
    let gx = [g[(0, 0)], g[(1, 0)]];
    let gy = [g[(0, 1)], g[(1, 1)]];
    let mut out = MatN::zeros(d, d);
    for i in 0..d {
        // (g x)^{m-i} (g y)^i, as coefficients indexed by the power of y
        let mut poly = vec![ONE];
        for _ in 0..(m - i) {
            poly = poly_mul_linear(&poly, gx);
        }
        for _ in 0..i {
            poly = poly_mul_linear(&poly, gy);
        }
        for (r, c) in poly.into_iter().enumerate() {
            out[(r, i)] = c;
        }
    }
    // rescale to the orthonormal basis sqrt(C(m, i)) x^{m-i} y^i
    let w: Vec<f64> = (0..d).map(|i| binomial(m, i).sqrt()).collect();
    MatN::from_fn(d, d, |r, c| out[(r, c)] * (w[c] / w[r]))
}

fn binomial(m: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

fn poly_mul_linear(p: &[C64], lin: [C64; 2]) -> Vec<C64> {
    let mut out = vec![ZERO; p.len() + 1];
    for (k, &c) in p.iter().enumerate() {
        out[k] += c * lin[0];
        out[k + 1] += c * lin[1];
    }
    out
}

pub fn mat2_to_n(m: &Mat2) -> MatN {
    MatN::from_fn(2, 2, |i, j| m[(i, j)])
}

pub fn mat4_to_n(m: &Mat4) -> MatN {
    MatN::from_fn(4, 4, |i, j| m[(i, j)])
}

/// Block-diagonal 4×4 matrix `diag(a, b)`.
pub fn block_diag(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut m = Mat4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(b);
    m
}

/// 4×4 matrix from 2×2 blocks `[[a, b], [c, d]]`.
pub fn blocks(a: &Mat2, b: &Mat2, c: &Mat2, d: &Mat2) -> Mat4 {
    let mut m = Mat4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(b);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(c);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(d);
    m
}

/// Max-abs entry of a matrix difference.
pub fn max_abs_diff(a: &MatN, b: &MatN) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Eigenvalues of a square complex matrix via the Schur form.
pub fn eigenvalues(m: &MatN) -> Vec<C64> {
    let schur = nalgebra::linalg::Schur::new(m.clone());
    let (_, t) = schur.unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Permutation matrix of `v ⊗ w ↦ w ⊗ v` on `C^d ⊗ C^d`.
pub fn swap_matrix(d: usize) -> MatN {
    let n = d * d;
    let mut s = MatN::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            s[(j * d + i, i * d + j)] = ONE;
        }
    }
    s
}
