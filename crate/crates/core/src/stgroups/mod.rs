//! The thirteen Sato–Tate groups as samplable compact subgroups of USp(4).
//!
//! Two symplectic conventions are used. The `B` and `C` families embed
//! `(A, B) ↦ diag(A, B)` and preserve `Ω = diag(ε, ε)`; the `E` family embeds
//! `A ↦ diag(A, Ā)` and preserves `Ω = [[0, I], [-I, 0]]`. Class points are
//! basis independent, so each group carries its own form.

mod tag;

pub use tag::{Family, GroupTag};

use crate::error::{invalid, Error, Result};
use crate::finite_group::FiniteGroupTable;
use crate::linalg::{block_diag, blocks, Mat2, Mat4, Quat, C64};
use crate::quadrature::GaussLegendre;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Quadrature nodes per axis for Haar moments.
pub const QUADRATURE_NODES: usize = 256;
/// Tolerance for generator construction checks.
pub const CONSTRUCTION_TOL: f64 = 1e-10;
/// Tolerance for USp(4) membership of arbitrary input matrices.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IdentityComponent {
    SU2xSU2,
    NU1factorSU2,
    SU2diag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SymplecticForm {
    /// `diag(ε, ε)` with `ε = [[0, 1], [-1, 0]]`.
    BlockDiagonal,
    /// `[[0, I₂], [-I₂, 0]]`.
    Standard,
}

impl SymplecticForm {
    pub fn integer_matrix(self) -> [[i8; 4]; 4] {
        match self {
            SymplecticForm::BlockDiagonal => {
                [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]
            }
            SymplecticForm::Standard => [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]],
        }
    }

    pub fn matrix(self) -> Mat4 {
        let m = self.integer_matrix();
        Mat4::from_fn(|i, j| C64::new(m[i][j] as f64, 0.0))
    }
}

/// Identity-component parameters of a group element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Params {
    /// `(A, B) ∈ SU(2) × SU(2)`.
    Pair(Quat, Quat),
    /// `(diag(e^{iψ}, e^{-iψ}), B) ∈ U(1) × SU(2)`.
    CircleSu2 { psi: f64, q: Quat },
    /// `A ∈ SU(2)` embedded diagonally.
    Single(Quat),
}

/// An element of a Sato–Tate group: a component representative times an
/// identity-component element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub component: usize,
    pub params: Params,
}

/// Conjugacy-class coordinates: trace `a` and second elementary symmetric
/// function `b` of the eigenvalues, plus the component label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassPoint {
    pub a: f64,
    pub b: f64,
    pub component: usize,
}

impl ClassPoint {
    /// The pair `(2cos θ₁, 2cos θ₂)`, ordered decreasingly, for eigenvalues
    /// `e^{±iθ₁}, e^{±iθ₂}`.
    pub fn cos_pair(&self) -> (f64, f64) {
        cos_pair(self.a, self.b)
    }

    /// Eigenangles `(θ₁, θ₂)` in `[0, π]`.
    pub fn angles(&self) -> (f64, f64) {
        let (c1, c2) = self.cos_pair();
        ((c1 / 2.0).clamp(-1.0, 1.0).acos(), (c2 / 2.0).clamp(-1.0, 1.0).acos())
    }

    /// Whether `(a, b)` is the class point of some USp(4) element, within `tol`.
    pub fn is_feasible(a: f64, b: f64, tol: f64) -> bool {
        let disc = a * a - 4.0 * (b - 2.0);
        if disc < -tol {
            return false;
        }
        let r = disc.max(0.0).sqrt();
        let (c1, c2) = ((a + r) / 2.0, (a - r) / 2.0);
        c1 <= 2.0 + tol && c2 >= -2.0 - tol
    }
}

fn cos_pair(a: f64, b: f64) -> (f64, f64) {
    let disc = (a * a - 4.0 * (b - 2.0)).max(0.0);
    let r = disc.sqrt();
    (((a + r) / 2.0).clamp(-2.0, 2.0), ((a - r) / 2.0).clamp(-2.0, 2.0))
}

/// `cos(pπ/q)`, exact at the angles where that is representable.
pub fn cos_pi_ratio(p: i64, q: i64) -> f64 {
    let m = p.rem_euclid(2 * q);
    if m == 0 {
        1.0
    } else if m == q {
        -1.0
    } else if 2 * m == q || 2 * m == 3 * q {
        0.0
    } else if 3 * m == q || 3 * m == 5 * q {
        0.5
    } else if 3 * m == 2 * q || 3 * m == 4 * q {
        -0.5
    } else {
        (PI * p as f64 / q as f64).cos()
    }
}

/// A Sato–Tate group with its component group and generators.
#[derive(Debug, Clone)]
pub struct SatoTateGroup {
    pub tag: GroupTag,
    pub family: Family,
    pub identity_component: IdentityComponent,
    pub components: FiniteGroupTable,
    pub form: SymplecticForm,
    /// `(component label, matrix)` for each generator.
    pub generators: Vec<(String, Mat4)>,
    /// For the `E` family, the finite group `⟨Δ_n, J⟩` ⊂ USp(4) (μ_{2n} or the
    /// dihedral group of order 4n) whose irreducibles pair with `Sym^k`.
    pub cover: Option<FiniteGroupTable>,
}

fn j0() -> Mat2 {
    Quat::J0.to_matrix()
}

/// `J = [[0, J₀], [-J₀, 0]]`.
pub fn j_matrix() -> Mat4 {
    let z = Mat2::zeros();
    blocks(&z, &j0(), &(-j0()), &z)
}

/// `Δ_n^k = diag(e^{ikπ/n} I, e^{-ikπ/n} I)`.
pub fn delta_power(n: usize, k: i64) -> Mat4 {
    let zeta = root_of_pi_ratio(k, n as i64);
    Mat4::from_diagonal(&nalgebra::Vector4::new(zeta, zeta, zeta.conj(), zeta.conj()))
}

/// `e^{ipπ/q}` with exact real and imaginary parts where possible.
pub fn root_of_pi_ratio(p: i64, q: i64) -> C64 {
    // sin(x) = cos(x - π/2) = cos((2p - q)π / 2q)
    C64::new(cos_pi_ratio(p, q), cos_pi_ratio(2 * p - q, 2 * q))
}

/// `A ↦ diag(A, Ā)`.
fn e_embed(a: &Quat) -> Mat4 {
    let m = a.to_matrix();
    block_diag(&m, &m.map(|c| c.conj()))
}

impl SatoTateGroup {
    pub fn new(tag: GroupTag) -> Self {
        let family = tag.family();
        let (identity_component, components, form, generators, cover) = match family {
            Family::B { extended } => {
                let comps = if extended {
                    FiniteGroupTable::cyclic(2, "J")
                } else {
                    FiniteGroupTable::trivial()
                };
                let gens = if extended { vec![("J".to_string(), j_matrix())] } else { vec![] };
                (IdentityComponent::SU2xSU2, comps, SymplecticForm::BlockDiagonal, gens, None)
            }
            Family::C => (
                IdentityComponent::NU1factorSU2,
                FiniteGroupTable::cyclic(2, "J0"),
                SymplecticForm::BlockDiagonal,
                vec![("J0".to_string(), block_diag(&j0(), &Mat2::identity()))],
                None,
            ),
            Family::E { n, with_j } => {
                let (comps, cover) = if with_j {
                    (
                        FiniteGroupTable::dihedral(n, "D", "J"),
                        FiniteGroupTable::dihedral(2 * n, "D", "J"),
                    )
                } else {
                    (FiniteGroupTable::cyclic(n, "D"), FiniteGroupTable::cyclic(2 * n, "D"))
                };
                let mut gens = Vec::new();
                if n >= 2 {
                    gens.push(("D".to_string(), delta_power(n, 1)));
                }
                if with_j {
                    gens.push(("J".to_string(), j_matrix()));
                }
                (IdentityComponent::SU2diag, comps, SymplecticForm::Standard, gens, Some(cover))
            }
        };
        Self { tag, family, identity_component, components, form, generators, cover }
    }

    pub fn num_components(&self) -> usize {
        self.components.order()
    }

    pub fn component_label(&self, c: usize) -> &str {
        &self.components.labels[c]
    }

    pub fn identity(&self) -> GroupElement {
        let params = match self.family {
            Family::B { .. } => Params::Pair(Quat::IDENTITY, Quat::IDENTITY),
            Family::C => Params::CircleSu2 { psi: 0.0, q: Quat::IDENTITY },
            Family::E { .. } => Params::Single(Quat::IDENTITY),
        };
        GroupElement { component: 0, params }
    }

    fn check_element(&self, g: &GroupElement) -> Result<()> {
        if g.component >= self.num_components() {
            return invalid(format!(
                "component {} not in {} (order {})",
                g.component,
                self.tag,
                self.num_components()
            ));
        }
        let ok = matches!(
            (self.family, &g.params),
            (Family::B { .. }, Params::Pair(..))
                | (Family::C, Params::CircleSu2 { .. })
                | (Family::E { .. }, Params::Single(_))
        );
        if !ok {
            return invalid(format!("parameters do not belong to {}", self.tag));
        }
        Ok(())
    }

    /// For the `E` family: `(j, k)` with the component equal to `J^j Δ^k`.
    pub fn e_component(&self, c: usize) -> (usize, usize) {
        match self.family {
            Family::E { n, .. } => (c / n, c % n),
            _ => (0, 0),
        }
    }

    /// For the `E` family: index of the element `J^j Δ^k` in the cover group.
    pub fn cover_index(&self, g: &GroupElement) -> usize {
        match self.family {
            Family::E { n, .. } => {
                let (j, k) = self.e_component(g.component);
                j * 2 * n + k
            }
            _ => 0,
        }
    }

    /// Realizes an element as a 4×4 unitary symplectic matrix.
    pub fn realize_matrix(&self, g: &GroupElement) -> Result<Mat4> {
        self.check_element(g)?;
        Ok(match (self.family, g.params) {
            (Family::B { .. }, Params::Pair(a, b)) => {
                let base = block_diag(&a.to_matrix(), &b.to_matrix());
                if g.component == 1 {
                    j_matrix() * base
                } else {
                    base
                }
            }
            (Family::C, Params::CircleSu2 { psi, q }) => {
                let u = Quat::torus(psi);
                let x = if g.component == 1 { Quat::J0 * u } else { u };
                block_diag(&x.to_matrix(), &q.to_matrix())
            }
            (Family::E { n, .. }, Params::Single(a)) => {
                let (j, k) = self.e_component(g.component);
                let mut m = delta_power(n, k as i64) * e_embed(&a);
                if j == 1 {
                    m = j_matrix() * m;
                }
                m
            }
            _ => unreachable!("checked above"),
        })
    }

    /// Group law on parametrized elements.
    pub fn compose(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check_element(g)?;
        self.check_element(h)?;
        let component = self.components.mul(g.component, h.component);
        let params = match (self.family, g.params, h.params) {
            (Family::B { .. }, Params::Pair(a1, b1), Params::Pair(a2, b2)) => {
                // J⁻¹(A, B)J = (J₀BJ₀⁻¹, J₀AJ₀⁻¹)
                let (a1, b1) = if h.component == 1 {
                    (Quat::J0.conjugate(b1), Quat::J0.conjugate(a1))
                } else {
                    (a1, b1)
                };
                Params::Pair(a1 * a2, b1 * b2)
            }
            (Family::C, Params::CircleSu2 { psi: p1, q: q1 }, Params::CircleSu2 { psi: p2, q: q2 }) => {
                let p1 = if h.component == 1 { -p1 } else { p1 };
                let mut psi = p1 + p2;
                if g.component == 1 && h.component == 1 {
                    psi += PI; // J₀² = -I
                }
                Params::CircleSu2 { psi: psi.rem_euclid(2.0 * PI), q: q1 * q2 }
            }
            (Family::E { n, .. }, Params::Single(a1), Params::Single(a2)) => {
                let cover = self.cover.as_ref().expect("E family has a cover group");
                let h_idx = cover.mul(self.cover_index(g), self.cover_index(h));
                let (j, kk) = (h_idx / (2 * n), h_idx % (2 * n));
                let mut a = a1 * a2;
                let k = if kk >= n {
                    a = a.neg(); // Δ^n = -I
                    kk - n
                } else {
                    kk
                };
                debug_assert_eq!(j * n + k, component);
                Params::Single(a)
            }
            _ => unreachable!("checked above"),
        };
        Ok(GroupElement { component, params })
    }

    /// Class point computed from the parametrization (no matrix work).
    pub fn class_point(&self, g: &GroupElement) -> ClassPoint {
        let (a, b) = match (self.family, g.params) {
            (Family::B { .. }, Params::Pair(x, y)) => {
                if g.component == 0 {
                    let (c1, c2) = (2.0 * x.cos_angle(), 2.0 * y.cos_angle());
                    (c1 + c2, 2.0 + c1 * c2)
                } else {
                    // eigenvalues ±e^{±iφ/2} where φ is the angle of J₀BJ₀⁻¹A
                    let w = (Quat::J0.conjugate(y) * x).cos_angle();
                    (0.0, -2.0 * w)
                }
            }
            (Family::C, Params::CircleSu2 { psi, q }) => {
                let c2 = 2.0 * q.cos_angle();
                if g.component == 0 {
                    let c1 = 2.0 * psi.cos();
                    (c1 + c2, 2.0 + c1 * c2)
                } else {
                    (c2, 2.0)
                }
            }
            (Family::E { n, .. }, Params::Single(q)) => {
                let (j, k) = self.e_component(g.component);
                let w = q.cos_angle();
                if j == 1 {
                    (0.0, 2.0 - 4.0 * w * w)
                } else {
                    let (n, k) = (n as i64, k as i64);
                    (4.0 * w * cos_pi_ratio(k, n), 4.0 * w * w + 2.0 * cos_pi_ratio(2 * k, n))
                }
            }
            _ => panic!("element does not belong to {}", self.tag),
        };
        ClassPoint { a, b, component: g.component }
    }

    /// Draws `count` Haar-random elements. Element `i` depends only on
    /// `(seed, i)`.
    pub fn sample_haar(&self, count: usize, seed: u64) -> Vec<GroupElement> {
        (0..count).into_par_iter().map(|i| self.sample_one(seed, i as u64)).collect()
    }

    pub fn sample_one(&self, seed: u64, index: u64) -> GroupElement {
        let mut comp_rng = ChaCha8Rng::seed_from_u64(seed);
        comp_rng.set_stream(2 * index);
        let mut param_rng = ChaCha8Rng::seed_from_u64(seed);
        param_rng.set_stream(2 * index + 1);
        let component = comp_rng.random_range(0..self.num_components());
        let params = match self.family {
            Family::B { .. } => {
                Params::Pair(random_su2(&mut param_rng), random_su2(&mut param_rng))
            }
            Family::C => {
                let psi = param_rng.random_range(0.0..2.0 * PI);
                Params::CircleSu2 { psi, q: random_su2(&mut param_rng) }
            }
            Family::E { .. } => Params::Single(random_su2(&mut param_rng)),
        };
        GroupElement { component, params }
    }

    /// Haar-random element of the identity component.
    pub fn sample_identity_component<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        let params = match self.family {
            Family::B { .. } => Params::Pair(random_su2(rng), random_su2(rng)),
            Family::C => Params::CircleSu2 { psi: rng.random_range(0.0..2.0 * PI), q: random_su2(rng) },
            Family::E { .. } => Params::Single(random_su2(rng)),
        };
        GroupElement { component: 0, params }
    }

    /// Number of class parameters on component `c`.
    pub fn chart_dim(&self, c: usize) -> usize {
        match self.family {
            Family::B { .. } | Family::C if c == 0 => 2,
            _ => 1,
        }
    }

    /// Representative element of the class with parameters `t ∈ [0, π]^dim`.
    pub fn chart_element(&self, c: usize, t: &[f64]) -> GroupElement {
        let params = match self.family {
            Family::B { .. } => {
                if c == 0 {
                    Params::Pair(Quat::torus(t[0]), Quat::torus(t[1]))
                } else {
                    Params::Pair(Quat::torus(t[0]), Quat::IDENTITY)
                }
            }
            Family::C => {
                if c == 0 {
                    Params::CircleSu2 { psi: t[0], q: Quat::torus(t[1]) }
                } else {
                    Params::CircleSu2 { psi: 0.0, q: Quat::torus(t[0]) }
                }
            }
            Family::E { .. } => Params::Single(Quat::torus(t[0])),
        };
        GroupElement { component: c, params }
    }

    /// Density of the pushforward of Haar measure (restricted to component
    /// `c`) in the chart coordinates; integrates to one over `[0, π]^dim`.
    pub fn weyl_density(&self, c: usize, angles: &[f64]) -> Result<f64> {
        if c >= self.num_components() {
            return invalid(format!("component {c} not in {}", self.tag));
        }
        let dim = self.chart_dim(c);
        if angles.len() != dim {
            return invalid(format!("component {c} of {} needs {dim} angle(s)", self.tag));
        }
        if angles.iter().any(|t| !(0.0..=PI).contains(t)) {
            return invalid("angles must lie in [0, π]");
        }
        Ok(self.density_unchecked(c, angles))
    }

    fn density_unchecked(&self, c: usize, t: &[f64]) -> f64 {
        let su2 = |x: f64| 2.0 / PI * x.sin().powi(2);
        match (self.family, c) {
            (Family::B { .. }, 0) => su2(t[0]) * su2(t[1]),
            (Family::C, 0) => su2(t[1]) / PI,
            _ => su2(t[0]),
        }
    }

    /// Every chart element whose class point matches `p` (within 1e-6).
    pub fn class_candidates(&self, p: &ClassPoint) -> Vec<GroupElement> {
        let (t1, t2) = p.angles();
        let mut raw: Vec<Vec<f64>> = match (self.family, p.component) {
            (Family::B { .. }, 0) | (Family::C, 0) => vec![vec![t1, t2], vec![t2, t1]],
            (Family::B { .. }, _) => vec![vec![(-p.b / 2.0).clamp(-1.0, 1.0).acos()]],
            (Family::C, _) => vec![vec![t1], vec![t2]],
            (Family::E { n, .. }, c) => {
                let (j, k) = self.e_component(c);
                if j == 1 {
                    vec![vec![t1], vec![t2], vec![PI - t1], vec![PI - t2]]
                } else {
                    let shift = PI * k as f64 / n as f64;
                    let mut v = Vec::new();
                    for ti in [t1, t2] {
                        for s in [1.0, -1.0] {
                            for sh in [shift, -shift] {
                                v.push(vec![wrap_abs(s * ti + sh)]);
                            }
                        }
                    }
                    v
                }
            }
        };
        raw.dedup();
        let mut scored: Vec<(f64, GroupElement, Vec<f64>)> = raw
            .into_iter()
            .map(|t| {
                let g = self.chart_element(p.component, &t);
                let q = self.class_point(&g);
                ((q.a - p.a).abs().max((q.b - p.b).abs()), g, t)
            })
            .collect();
        scored.sort_by(|x, y| x.0.total_cmp(&y.0));
        let best = scored[0].0;
        let mut out: Vec<(GroupElement, Vec<f64>)> = Vec::new();
        for (err, g, t) in scored {
            if err > 1e-6 && err > best {
                continue;
            }
            if !out.iter().any(|(_, u)| u.iter().zip(&t).all(|(x, y)| (x - y).abs() < 1e-9)) {
                out.push((g, t));
            }
        }
        out.into_iter().map(|(g, _)| g).collect()
    }

    /// `E[a^j b^k]` under Haar measure, optionally conditioned on a component,
    /// by tensor Gauss–Legendre quadrature over the class charts.
    pub fn haar_moment(&self, j: u32, k: u32, restrict: Option<usize>) -> Result<f64> {
        if j + 2 * k > 64 {
            return invalid("haar_moment requires j + 2k <= 64");
        }
        let comps: Vec<usize> = match restrict {
            Some(c) if c >= self.num_components() => {
                return invalid(format!("component {c} not in {}", self.tag))
            }
            Some(c) => vec![c],
            None => (0..self.num_components()).collect(),
        };
        if j == 0 && k == 0 {
            return Ok(1.0);
        }
        let gl = gauss_legendre();
        let total: f64 = comps
            .iter()
            .map(|&c| {
                let f = |t: &[f64]| {
                    let p = self.class_point(&self.chart_element(c, t));
                    self.density_unchecked(c, t) * p.a.powi(j as i32) * p.b.powi(k as i32)
                };
                if self.chart_dim(c) == 2 {
                    gl.integrate_2d(0.0, PI, |x, y| f(&[x, y]))
                } else {
                    gl.integrate(0.0, PI, |x| f(&[x]))
                }
            })
            .sum();
        Ok(total / comps.len() as f64)
    }

    /// Integral of the chart density over component `c`.
    pub fn density_mass(&self, c: usize) -> f64 {
        let gl = gauss_legendre();
        if self.chart_dim(c) == 2 {
            gl.integrate_2d(0.0, PI, |x, y| self.density_unchecked(c, &[x, y]))
        } else {
            gl.integrate(0.0, PI, |x| self.density_unchecked(c, &[x]))
        }
    }
}

fn wrap_abs(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    y.abs()
}

fn gauss_legendre() -> &'static GaussLegendre {
    static GL: OnceLock<GaussLegendre> = OnceLock::new();
    GL.get_or_init(|| GaussLegendre::new(QUADRATURE_NODES))
}

/// Haar-random SU(2) element: a normalized vector of four Gaussians.
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> Quat {
    loop {
        let q = Quat::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        );
        if q.norm() > 1e-12 {
            return q.normalized();
        }
    }
}

/// Max deviations `(‖MᵀΩM − Ω‖, ‖M†M − I‖)`.
pub fn usp4_defects(m: &Mat4, form: SymplecticForm) -> (f64, f64) {
    let omega = form.matrix();
    let sym = m.transpose() * omega * m - omega;
    let uni = m.adjoint() * m - Mat4::identity();
    let max = |x: &Mat4| x.iter().map(|c| c.norm()).fold(0.0, f64::max);
    (max(&sym), max(&uni))
}

pub fn check_usp4(m: &Mat4, form: SymplecticForm, tol: f64) -> Result<()> {
    let (s, u) = usp4_defects(m, form);
    if s > tol {
        return Err(Error::NotSymplectic { what: "symplectic", norm: s });
    }
    if u > tol {
        return Err(Error::NotSymplectic { what: "unitary", norm: u });
    }
    Ok(())
}

/// Class point of a USp(4) matrix: `a = tr M`, `b = (a² − tr M²) / 2`.
pub fn class_point_of(m: &Mat4, form: SymplecticForm, component: usize) -> Result<ClassPoint> {
    check_usp4(m, form, MEMBERSHIP_TOL)?;
    let a = m.trace();
    let b = (a * a - (m * m).trace()) / 2.0;
    if a.im.abs() > 1e-9 || b.im.abs() > 1e-9 {
        return invalid(format!("class invariants not real: a = {a}, b = {b}"));
    }
    Ok(ClassPoint { a: a.re, b: b.re, component })
}
