//! Irreducible representations of the Sato–Tate groups: catalogs, explicit
//! matrices, characters and eigenangles.

use crate::error::{invalid, Error, Result};
use crate::linalg::{eigenvalues, swap_matrix, sym_char, sym_power, MatN, Quat, C64, ONE, ZERO};
use crate::stgroups::{Family, GroupElement, GroupTag, Params, SatoTateGroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IrrepFamily {
    /// `Sym^m ⊗ Sym^n` of `SU(2) × SU(2)`.
    ProductSym { m: u32, n: u32 },
    /// `Ind ρ_{m,n}` from `SU(2) × SU(2)` to its normalizer, `n > m`.
    InducedProductSym { m: u32, n: u32 },
    /// Extension of `ρ_{n,n}` with `ρ(J) = ±(v ⊗ w ↦ Sym^n(J₀)w ⊗ Sym^n(J₀⁻¹)v)`;
    /// `sign = 1` is `+`, `sign = 2` is `−`.
    ExtensionSym { n: u32, sign: u8 },
    /// `Ind φ_m ⊗ Sym^n` of `N(U(1)) × SU(2)`, `m ≥ 1`.
    InducedPhiSym { m: u32, n: u32 },
    /// `ρ₀^ε ⊗ Sym^n` of `N(U(1)) × SU(2)`.
    Phi0Sym { eps: u8, n: u32 },
    /// `Sym^k ⊗ η` with `η` an irreducible of the cover group `⟨Δ_n, J⟩`.
    SymEta { k: u32, eta: usize },
}

/// An irreducible representation of a specific Sato–Tate group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Irrep {
    pub group: GroupTag,
    pub family: IrrepFamily,
    pub dimension: usize,
}

impl fmt::Display for Irrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            IrrepFamily::ProductSym { m, n } => write!(f, "rho_{m},{n}"),
            IrrepFamily::InducedProductSym { m, n } => write!(f, "Ind(rho_{m},{n})"),
            IrrepFamily::ExtensionSym { n, sign } => write!(f, "rho_{n}^{sign}"),
            IrrepFamily::InducedPhiSym { m, n } => write!(f, "Ind(phi_{m})xSym^{n}"),
            IrrepFamily::Phi0Sym { eps, n } => write!(f, "rho_0^{eps}xSym^{n}"),
            IrrepFamily::SymEta { k, eta } => write!(f, "Sym^{k}xeta_{eta}"),
        }
    }
}

impl Irrep {
    /// Validates that `family` is one of the group's irreducibles.
    pub fn new(group: &SatoTateGroup, family: IrrepFamily) -> Result<Self> {
        let (ok, dimension) = match (group.family, family) {
            (Family::B { extended: false }, IrrepFamily::ProductSym { m, n }) => {
                (true, ((m + 1) * (n + 1)) as usize)
            }
            (Family::B { extended: true }, IrrepFamily::InducedProductSym { m, n }) => {
                (n > m, (2 * (m + 1) * (n + 1)) as usize)
            }
            (Family::B { extended: true }, IrrepFamily::ExtensionSym { n, sign }) => {
                (sign == 1 || sign == 2, ((n + 1) * (n + 1)) as usize)
            }
            (Family::C, IrrepFamily::InducedPhiSym { m, n }) => (m >= 1, (2 * (n + 1)) as usize),
            (Family::C, IrrepFamily::Phi0Sym { eps, n }) => (eps <= 1, (n + 1) as usize),
            (Family::E { .. }, IrrepFamily::SymEta { k, eta }) => {
                let cover = group.cover.as_ref().expect("E family cover");
                if eta >= cover.num_characters() {
                    (false, 0)
                } else {
                    let d = cover.dims()[eta];
                    (eta_parity(group, eta) == parity(k), (k as usize + 1) * d)
                }
            }
            _ => (false, 0),
        };
        if !ok {
            return invalid(format!("{family:?} is not an irreducible of {}", group.tag));
        }
        Ok(Self { group: group.tag, family, dimension })
    }

    pub fn is_trivial(&self) -> bool {
        match self.family {
            IrrepFamily::ProductSym { m: 0, n: 0 } => true,
            IrrepFamily::ExtensionSym { n: 0, sign: 1 } => true,
            IrrepFamily::Phi0Sym { eps: 0, n: 0 } => true,
            IrrepFamily::SymEta { k: 0, eta } => {
                // the trivial character is listed first by every cover table
                eta == 0
            }
            _ => false,
        }
    }

    /// Whether the character is supported on the identity component only.
    pub fn is_induced(&self) -> bool {
        matches!(
            self.family,
            IrrepFamily::InducedProductSym { .. } | IrrepFamily::InducedPhiSym { .. }
        )
    }
}

fn parity(k: u32) -> i32 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `η(−I)` as a sign, with `−I = Δ_n^n` in the cover group.
fn eta_parity(group: &SatoTateGroup, eta: usize) -> i32 {
    let Family::E { n, .. } = group.family else { return 1 };
    let cover = group.cover.as_ref().expect("E family cover");
    let v = cover.character(eta, n) / cover.dims()[eta] as f64;
    if v.re > 0.0 {
        1
    } else {
        -1
    }
}

fn check_group(group: &SatoTateGroup, irrep: &Irrep) -> Result<()> {
    if group.tag != irrep.group {
        return invalid(format!("{irrep} belongs to {}, not {}", irrep.group, group.tag));
    }
    Ok(())
}

/// Complete catalog of irreducibles with every symmetric-power level (and
/// `m` for `φ_m`) at most `cutoff`. The trivial representation comes first.
pub fn list_irreps(group: &SatoTateGroup, cutoff: u32) -> Vec<Irrep> {
    let mut fams = Vec::new();
    match group.family {
        Family::B { extended: false } => {
            for m in 0..=cutoff {
                for n in 0..=cutoff {
                    fams.push(IrrepFamily::ProductSym { m, n });
                }
            }
        }
        Family::B { extended: true } => {
            for n in 0..=cutoff {
                for sign in [1, 2] {
                    fams.push(IrrepFamily::ExtensionSym { n, sign });
                }
            }
            for n in 0..=cutoff {
                for m in 0..n {
                    fams.push(IrrepFamily::InducedProductSym { m, n });
                }
            }
        }
        Family::C => {
            for n in 0..=cutoff {
                for eps in [0, 1] {
                    fams.push(IrrepFamily::Phi0Sym { eps, n });
                }
            }
            for m in 1..=cutoff {
                for n in 0..=cutoff {
                    fams.push(IrrepFamily::InducedPhiSym { m, n });
                }
            }
        }
        Family::E { .. } => {
            let cover = group.cover.as_ref().expect("E family cover");
            for k in 0..=cutoff {
                for eta in 0..cover.num_characters() {
                    if eta_parity(group, eta) == parity(k) {
                        fams.push(IrrepFamily::SymEta { k, eta });
                    }
                }
            }
        }
    }
    let mut out: Vec<Irrep> =
        fams.into_iter().map(|f| Irrep::new(group, f).expect("catalog entries are valid")).collect();
    out.sort_by_key(|r| !r.is_trivial());
    out
}

fn quats(g: &GroupElement) -> (Quat, Quat) {
    match g.params {
        Params::Pair(a, b) => (a, b),
        Params::CircleSu2 { q, .. } => (Quat::IDENTITY, q),
        Params::Single(a) => (a, Quat::IDENTITY),
    }
}

/// Character value on a group element (closed forms).
pub fn char_value(group: &SatoTateGroup, irrep: &Irrep, g: &GroupElement) -> Result<C64> {
    check_group(group, irrep)?;
    let c = g.component;
    let real = |x: f64| Ok(C64::new(x, 0.0));
    match (irrep.family, g.params) {
        (IrrepFamily::ProductSym { m, n }, Params::Pair(a, b)) => {
            real(sym_char(m, a.w) * sym_char(n, b.w))
        }
        (IrrepFamily::InducedProductSym { m, n }, Params::Pair(a, b)) => {
            if c == 0 {
                real(sym_char(m, a.w) * sym_char(n, b.w) + sym_char(n, a.w) * sym_char(m, b.w))
            } else {
                real(0.0)
            }
        }
        (IrrepFamily::ExtensionSym { n, sign }, Params::Pair(a, b)) => {
            if c == 0 {
                real(sym_char(n, a.w) * sym_char(n, b.w))
            } else {
                let x = Quat::J0.conjugate(b) * a;
                let s = if sign == 1 { 1.0 } else { -1.0 };
                real(s * sym_char(n, x.w))
            }
        }
        (IrrepFamily::InducedPhiSym { m, n }, Params::CircleSu2 { psi, q }) => {
            if c == 0 {
                real(2.0 * (m as f64 * psi).cos() * sym_char(n, q.w))
            } else {
                real(0.0)
            }
        }
        (IrrepFamily::Phi0Sym { eps, n }, Params::CircleSu2 { q, .. }) => {
            let s = if c == 1 && eps == 1 { -1.0 } else { 1.0 };
            real(s * sym_char(n, q.w))
        }
        (IrrepFamily::SymEta { k, eta }, Params::Single(a)) => {
            let cover = group.cover.as_ref().expect("E family cover");
            Ok(cover.character(eta, group.cover_index(g)) * sym_char(k, a.w))
        }
        _ => invalid(format!("element does not belong to {}", group.tag)),
    }
}

fn sym_q(q: Quat, m: u32) -> MatN {
    sym_power(&q.to_matrix(), m as usize)
}

/// Explicit representation matrix.
pub fn rep_matrix(group: &SatoTateGroup, irrep: &Irrep, g: &GroupElement) -> Result<MatN> {
    check_group(group, irrep)?;
    let c = g.component;
    match (irrep.family, g.params) {
        (IrrepFamily::ProductSym { m, n }, Params::Pair(a, b)) => Ok(sym_q(a, m).kronecker(&sym_q(b, n))),
        (IrrepFamily::InducedProductSym { m, n }, Params::Pair(a, b)) => {
            let rho = |x: Quat, y: Quat| sym_q(x, m).kronecker(&sym_q(y, n));
            // coset representative J: J⁻¹(A, B)J = (J₀BJ₀⁻¹, J₀AJ₀⁻¹), J² = 1
            let (ca, cb) = (Quat::J0.conjugate(b), Quat::J0.conjugate(a));
            let d = irrep.dimension / 2;
            let mut out = MatN::zeros(2 * d, 2 * d);
            if c == 0 {
                out.view_mut((0, 0), (d, d)).copy_from(&rho(a, b));
                out.view_mut((d, d), (d, d)).copy_from(&rho(ca, cb));
            } else {
                out.view_mut((0, d), (d, d)).copy_from(&rho(ca, cb));
                out.view_mut((d, 0), (d, d)).copy_from(&rho(a, b));
            }
            Ok(out)
        }
        (IrrepFamily::ExtensionSym { n, sign }, Params::Pair(a, b)) => {
            let base = sym_q(a, n).kronecker(&sym_q(b, n));
            if c == 0 {
                Ok(base)
            } else {
                let s = if sign == 1 { ONE } else { -ONE };
                let rj = sym_q(Quat::J0, n).kronecker(&sym_q(Quat::J0.conj(), n))
                    * swap_matrix(n as usize + 1)
                    * s;
                Ok(rj * base)
            }
        }
        (IrrepFamily::InducedPhiSym { m, n }, Params::CircleSu2 { psi, q }) => {
            let rho = |p: f64, y: Quat| sym_q(y, n) * C64::from_polar(1.0, m as f64 * p);
            // coset representative r = diag(J₀, I): r⁻¹(U(ψ), B)r = (U(−ψ), B), r² = (U(π), I)
            let d = irrep.dimension / 2;
            let mut out = MatN::zeros(2 * d, 2 * d);
            if c == 0 {
                out.view_mut((0, 0), (d, d)).copy_from(&rho(psi, q));
                out.view_mut((d, d), (d, d)).copy_from(&rho(-psi, q));
            } else {
                out.view_mut((0, d), (d, d)).copy_from(&rho(PI - psi, q));
                out.view_mut((d, 0), (d, d)).copy_from(&rho(psi, q));
            }
            Ok(out)
        }
        (IrrepFamily::Phi0Sym { eps, n }, Params::CircleSu2 { q, .. }) => {
            let s = if c == 1 && eps == 1 { -ONE } else { ONE };
            Ok(sym_q(q, n) * s)
        }
        (IrrepFamily::SymEta { k, eta }, Params::Single(a)) => {
            Ok(sym_q(a, k).kronecker(&cover_irrep_matrix(group, eta, group.cover_index(g))))
        }
        _ => invalid(format!("element does not belong to {}", group.tag)),
    }
}

/// Matrix of the cover-group irreducible `eta` at cover element `h`.
fn cover_irrep_matrix(group: &SatoTateGroup, eta: usize, h: usize) -> MatN {
    let cover = group.cover.as_ref().expect("E family cover");
    let dim = cover.dims()[eta];
    if dim == 1 {
        return MatN::from_element(1, 1, cover.character(eta, h));
    }
    let Family::E { n, .. } = group.family else { unreachable!() };
    // dihedral of order 4n: four linear characters, then 2-dim reps indexed by
    // r = 1..n-1 with Δ ↦ diag(ω^r, ω^{-r}), J ↦ swap, ω = e^{iπ/n}
    let r = (eta - 3) as i64;
    let (s, k) = (h / (2 * n), (h % (2 * n)) as i64);
    let w = C64::from_polar(1.0, PI * (r * k) as f64 / n as f64);
    let rot = MatN::from_row_slice(2, 2, &[w, ZERO, ZERO, w.conj()]);
    if s == 0 {
        rot
    } else {
        MatN::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]) * rot
    }
}

/// Eigenangles of `ρ(g)` in `(−π, π]`, one per dimension.
pub fn euler_angles(group: &SatoTateGroup, irrep: &Irrep, g: &GroupElement) -> Result<Vec<f64>> {
    check_group(group, irrep)?;
    let (a, b) = quats(g);
    let sym_angles = |k: u32, t: f64| (0..=k).map(move |i| (k as f64 - 2.0 * i as f64) * t);
    let angles: Vec<f64> = match (irrep.family, g.component) {
        (IrrepFamily::ProductSym { m, n }, _) => {
            let (ta, tb) = (a.angle(), b.angle());
            sym_angles(m, ta).flat_map(|x| sym_angles(n, tb).map(move |y| x + y)).collect()
        }
        (IrrepFamily::Phi0Sym { eps, n }, c) => {
            let shift = if c == 1 && eps == 1 { PI } else { 0.0 };
            sym_angles(n, b.angle()).map(|x| x + shift).collect()
        }
        (IrrepFamily::SymEta { k, eta }, _)
            if group.cover.as_ref().map(|cv| cv.dims()[eta]) == Some(1) =>
        {
            let cover = group.cover.as_ref().expect("E family cover");
            let shift = cover.character(eta, group.cover_index(g)).arg();
            sym_angles(k, a.angle()).map(|x| x + shift).collect()
        }
        _ => {
            let m = rep_matrix(group, irrep, g)?;
            eigenvalues(&m).into_iter().map(|z| z.arg()).collect()
        }
    };
    Ok(angles.into_iter().map(wrap_angle).collect())
}

fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y <= -PI + 1e-15 {
        PI
    } else {
        y
    }
}

/// `g^k` by repeated composition.
pub fn power(group: &SatoTateGroup, g: &GroupElement, k: u32) -> GroupElement {
    let mut acc = group.identity();
    for _ in 0..k {
        acc = group.compose(&acc, g).expect("same group");
    }
    acc
}

/// Whether `χ(g^p)`, `p = 1..=powers`, depends on `g` only through its class
/// point on component `component`. Decided by probing generic classes.
pub fn class_determined(group: &SatoTateGroup, irrep: &Irrep, component: usize, powers: u32) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0c1a55);
    let dim = group.chart_dim(component);
    for _ in 0..12 {
        let t: Vec<f64> = (0..dim).map(|_| rng.random_range(0.05..PI - 0.05)).collect();
        let g = group.chart_element(component, &t);
        let point = group.class_point(&g);
        let cands = group.class_candidates(&point);
        for p in 1..=powers {
            let base = char_value(group, irrep, &power(group, &g, p)).expect("same group");
            for cand in &cands {
                let v = char_value(group, irrep, &power(group, cand, p)).expect("same group");
                if (v - base).norm() > 1e-7 {
                    return false;
                }
            }
        }
    }
    true
}

/// Character value at a class point, when the character is a function of the
/// class point on that component.
pub fn char_value_at(
    group: &SatoTateGroup,
    irrep: &Irrep,
    point: &crate::stgroups::ClassPoint,
) -> Result<C64> {
    check_group(group, irrep)?;
    if point.component >= group.num_components() {
        return invalid(format!("component {} not in {}", point.component, group.tag));
    }
    if !class_determined(group, irrep, point.component, 1) {
        return Err(Error::NotClassDetermined {
            irrep: irrep.to_string(),
            component: group.component_label(point.component).to_string(),
            reason: "distinct classes share this (a, b); a group element is required".into(),
        });
    }
    let g = group.class_candidates(point)[0];
    char_value(group, irrep, &g)
}
