//! Finite groups as explicit multiplication tables with character tables.

use crate::error::{invalid, Result};
use crate::linalg::C64;
use std::f64::consts::PI;

/// A finite group given by its Cayley table. Element `0` is the identity.
#[derive(Debug, Clone)]
pub struct FiniteGroupTable {
    pub labels: Vec<String>,
    mul: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    /// `characters[i][c]`: value of irreducible character `i` on class `c`.
    pub characters: Vec<Vec<C64>>,
}

impl FiniteGroupTable {
    /// Builds a table from labels, a multiplication closure and per-element
    /// character values (one row per irreducible character).
    pub fn from_parts(
        labels: Vec<String>,
        mul: impl Fn(usize, usize) -> usize,
        element_characters: Vec<Vec<C64>>,
    ) -> Self {
        let n = labels.len();
        let mul: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| mul(a, b)).collect()).collect();
        let inverse: Vec<usize> = (0..n)
            .map(|a| (0..n).find(|&b| mul[a][b] == 0).expect("every element has an inverse"))
            .collect();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for a in 0..n {
            if class_of[a] != usize::MAX {
                continue;
            }
            let mut class: Vec<usize> = (0..n).map(|g| mul[mul[g][a]][inverse[g]]).collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                class_of[c] = classes.len();
            }
            classes.push(class);
        }
        let characters = element_characters
            .into_iter()
            .map(|row| classes.iter().map(|cl| row[cl[0]]).collect())
            .collect();
        Self { labels, mul, inverse, classes, class_of, characters }
    }

    pub fn trivial() -> Self {
        Self::from_parts(vec!["e".into()], |_, _| 0, vec![vec![C64::new(1.0, 0.0)]])
    }

    /// Cyclic group of order `n` generated by `gen`; element `k` is `gen^k`.
    pub fn cyclic(n: usize, gen: &str) -> Self {
        assert!(n >= 1);
        let labels = (0..n).map(|k| power_label(gen, k)).collect();
        let chars = (0..n)
            .map(|r| (0..n).map(|k| root_of_unity(r * k, n)).collect())
            .collect();
        Self::from_parts(labels, |a, b| (a + b) % n, chars)
    }

    /// Dihedral group of order `2n`: elements `r^k` (index `k`) and `s·r^k`
    /// (index `n + k`), with `s r s⁻¹ = r⁻¹`.
    pub fn dihedral(n: usize, rot: &str, refl: &str) -> Self {
        assert!(n >= 1);
        let labels = (0..2 * n)
            .map(|i| {
                if i < n {
                    power_label(rot, i)
                } else if i == n {
                    refl.to_string()
                } else {
                    format!("{refl}{}", power_label(rot, i - n))
                }
            })
            .collect();
        let mul = move |a: usize, b: usize| {
            let (sa, ka) = (a / n, a % n);
            let (sb, kb) = (b / n, b % n);
            let k = if sb == 1 { (n - ka + kb) % n } else { (ka + kb) % n };
            ((sa + sb) % 2) * n + k
        };
        let one = C64::new(1.0, 0.0);
        let mut chars: Vec<Vec<C64>> = Vec::new();
        // one-dimensional: r ↦ ±1 (−1 only for even n), s ↦ ±1
        let rot_signs: &[f64] = if n.is_multiple_of(2) { &[1.0, -1.0] } else { &[1.0] };
        for &rs in rot_signs {
            for &ss in &[1.0f64, -1.0] {
                chars.push(
                    (0..2 * n)
                        .map(|i| {
                            let (s, k) = (i / n, i % n);
                            one * rs.powi(k as i32) * ss.powi(s as i32)
                        })
                        .collect(),
                );
            }
        }
        for h in 1..=((n - 1) / 2) {
            chars.push(
                (0..2 * n)
                    .map(|i| {
                        let (s, k) = (i / n, i % n);
                        if s == 1 {
                            C64::new(0.0, 0.0)
                        } else {
                            one * (2.0 * (2.0 * PI * (h * k) as f64 / n as f64).cos())
                        }
                    })
                    .collect(),
            );
        }
        Self::from_parts(labels, mul, chars)
    }

    /// Direct product; element `(i, j)` has index `i * |b| + j`.
    pub fn direct_product(a: &Self, b: &Self) -> Self {
        let (na, nb) = (a.order(), b.order());
        let labels = (0..na * nb)
            .map(|i| format!("({},{})", a.labels[i / nb], b.labels[i % nb]))
            .collect();
        let ea = a.element_characters();
        let eb = b.element_characters();
        let mut chars = Vec::new();
        for ca in &ea {
            for cb in &eb {
                chars.push((0..na * nb).map(|i| ca[i / nb] * cb[i % nb]).collect());
            }
        }
        let (am, bm) = (a.mul.clone(), b.mul.clone());
        Self::from_parts(
            labels,
            move |x, y| am[x / nb][y / nb] * nb + bm[x % nb][y % nb],
            chars,
        )
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    pub fn num_characters(&self) -> usize {
        self.characters.len()
    }

    /// Degree of each irreducible character.
    pub fn dims(&self) -> Vec<usize> {
        self.characters.iter().map(|row| row[self.class_of[0]].re.round() as usize).collect()
    }

    /// Value of character `chi` on element `a`.
    pub fn character(&self, chi: usize, a: usize) -> C64 {
        self.characters[chi][self.class_of[a]]
    }

    /// Index of the trivial character.
    pub fn trivial_character(&self) -> usize {
        self.characters
            .iter()
            .position(|row| row.iter().all(|v| (v - C64::new(1.0, 0.0)).norm() < 1e-12))
            .expect("trivial character present")
    }

    pub fn element_characters(&self) -> Vec<Vec<C64>> {
        self.characters
            .iter()
            .map(|row| (0..self.order()).map(|a| row[self.class_of[a]]).collect())
            .collect()
    }

    pub fn label_index(&self, label: &str) -> Result<usize> {
        match self.labels.iter().position(|l| l == label) {
            Some(i) => Ok(i),
            None => invalid(format!("unknown group element label '{label}'")),
        }
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    /// Checks group axioms and character orthogonality; returns a description
    /// of the first violation found.
    pub fn verify(&self, tol: f64) -> std::result::Result<(), String> {
        let n = self.order();
        for a in 0..n {
            if self.mul[0][a] != a || self.mul[a][0] != a {
                return Err(format!("element 0 is not an identity for {a}"));
            }
            if self.mul[a][self.inverse[a]] != 0 || self.mul[self.inverse[a]][a] != 0 {
                return Err(format!("bad inverse for {a}"));
            }
            for b in 0..n {
                for c in 0..n {
                    if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]] {
                        return Err(format!("associativity fails at ({a},{b},{c})"));
                    }
                }
            }
        }
        let k = self.classes.len();
        if self.characters.len() != k {
            return Err(format!("{} characters for {k} classes", self.characters.len()));
        }
        let dim_sq: usize = self.dims().iter().map(|d| d * d).sum();
        if dim_sq != n {
            return Err(format!("sum of squared degrees {dim_sq} != {n}"));
        }
        for i in 0..k {
            for j in 0..k {
                let ip: C64 = self
                    .classes
                    .iter()
                    .enumerate()
                    .map(|(c, cl)| self.characters[i][c] * self.characters[j][c].conj() * cl.len() as f64)
                    .sum::<C64>()
                    / n as f64;
                let expect = if i == j { 1.0 } else { 0.0 };
                if (ip - C64::new(expect, 0.0)).norm() > tol {
                    return Err(format!("row orthogonality fails for ({i},{j}): {ip}"));
                }
                let col: C64 = (0..k)
                    .map(|chi| self.characters[chi][i] * self.characters[chi][j].conj())
                    .sum();
                let expect = if i == j { n as f64 / self.classes[i].len() as f64 } else { 0.0 };
                if (col - C64::new(expect, 0.0)).norm() > tol {
                    return Err(format!("column orthogonality fails for ({i},{j}): {col}"));
                }
            }
        }
        Ok(())
    }
}

fn power_label(gen: &str, k: usize) -> String {
    match k {
        0 => "e".into(),
        1 => gen.into(),
        _ => format!("{gen}^{k}"),
    }
}

/// `exp(2πi k / n)` with exact values at quarter turns.
pub fn root_of_unity(k: usize, n: usize) -> C64 {
    let k = k % n;
    if (4 * k).is_multiple_of(n) {
        return match 4 * k / n {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}
