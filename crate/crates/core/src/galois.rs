//! Abelian extensions of Q: Galois groups, Artin symbols and characters.

use crate::arith::modular::{
    factor, fundamental_discriminant, is_squarefree, kronecker, mul_mod, pow_mod, primitive_root,
};
use crate::arith::sieve::sieve_primes;
use crate::error::{invalid, Error, Result};
use crate::finite_group::{root_of_unity, FiniteGroupTable};
use crate::linalg::C64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Description of an abelian extension `K/Q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExtensionSpec {
    /// `Q(ζ_N)`, or its subfield fixed by the subgroup generated by `subgroup`.
    Cyclotomic {
        modulus: u64,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        subgroup: Vec<u64>,
    },
    /// `Q(√d)`, `d` squarefree.
    Quadratic { d: i64 },
    /// Compositum with Galois group the product of the factors' groups. The
    /// first `abelian_factors` factors form `G₁` (all of them if omitted).
    Product {
        factors: Vec<ExtensionSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        abelian_factors: Option<usize>,
    },
}

impl Default for ExtensionSpec {
    fn default() -> Self {
        ExtensionSpec::Cyclotomic { modulus: 5, subgroup: Vec::new() }
    }
}

impl fmt::Display for ExtensionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtensionSpec::Cyclotomic { modulus, subgroup } if subgroup.is_empty() => {
                write!(f, "Q(zeta_{modulus})")
            }
            ExtensionSpec::Cyclotomic { modulus, subgroup } => {
                write!(f, "Q(zeta_{modulus})^<{subgroup:?}>")
            }
            ExtensionSpec::Quadratic { d } => write!(f, "Q(sqrt({d}))"),
            ExtensionSpec::Product { factors, .. } => {
                let parts: Vec<String> = factors.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join(" * "))
            }
        }
    }
}

type ClassFn = dyn Fn(u64) -> Option<usize> + Send + Sync;

#[derive(Clone)]
enum Classifier {
    /// `residue mod N ↦ element`, `usize::MAX` for non-units.
    Residues { modulus: u64, table: Vec<usize> },
    Kronecker { disc: i64 },
    Product(Vec<GaloisExt>),
    Custom(Arc<ClassFn>),
}

/// A realized abelian extension with its group, characters and ramified set.
#[derive(Clone)]
pub struct GaloisExt {
    pub name: String,
    pub group: FiniteGroupTable,
    pub ramified: BTreeSet<u64>,
    classifier: Classifier,
}

impl fmt::Debug for GaloisExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaloisExt")
            .field("name", &self.name)
            .field("order", &self.group.order())
            .field("ramified", &self.ramified)
            .finish()
    }
}

impl GaloisExt {
    pub fn new(spec: &ExtensionSpec) -> Result<Self> {
        let name = spec.to_string();
        match spec {
            ExtensionSpec::Cyclotomic { modulus, subgroup } => cyclotomic(*modulus, subgroup, name),
            ExtensionSpec::Quadratic { d } => quadratic(*d, name),
            ExtensionSpec::Product { factors, abelian_factors } => {
                if factors.is_empty() {
                    return invalid("product extension needs at least one factor");
                }
                if abelian_factors.is_some_and(|k| k > factors.len()) {
                    return invalid("abelian_factors exceeds the number of factors");
                }
                let parts = factors.iter().map(GaloisExt::new).collect::<Result<Vec<_>>>()?;
                let mut group = parts[0].group.clone();
                for p in &parts[1..] {
                    group = FiniteGroupTable::direct_product(&group, &p.group);
                }
                let ramified = parts.iter().flat_map(|p| p.ramified.iter().copied()).collect();
                Ok(Self { name, group, ramified, classifier: Classifier::Product(parts) })
            }
        }
    }

    /// The trivial extension `Q/Q`.
    pub fn trivial() -> Self {
        Self {
            name: "Q".into(),
            group: FiniteGroupTable::trivial(),
            ramified: BTreeSet::new(),
            classifier: Classifier::Custom(Arc::new(|_| Some(0))),
        }
    }

    /// Experimental: an extension described only by a class-assignment
    /// function and a character table, e.g. factorization patterns of a
    /// defining polynomial. Nothing about it is verified.
    pub fn custom(
        name: impl Into<String>,
        group: FiniteGroupTable,
        ramified: BTreeSet<u64>,
        classify: impl Fn(u64) -> Option<usize> + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), group, ramified, classifier: Classifier::Custom(Arc::new(classify)) }
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// Artin symbol of an unramified prime, as an element index of `group`.
    pub fn artin_class(&self, p: u64) -> Result<usize> {
        if self.ramified.contains(&p) {
            return Err(Error::Ramified(p));
        }
        match &self.classifier {
            Classifier::Residues { modulus, table } => {
                let c = table[(p % modulus) as usize];
                if c == usize::MAX {
                    Err(Error::Ramified(p))
                } else {
                    Ok(c)
                }
            }
            Classifier::Kronecker { disc } => match kronecker(*disc, p) {
                1 => Ok(0),
                -1 => Ok(1),
                _ => Err(Error::Ramified(p)),
            },
            Classifier::Product(parts) => {
                let mut idx = 0;
                for part in parts {
                    idx = idx * part.order() + part.artin_class(p)?;
                }
                Ok(idx)
            }
            Classifier::Custom(f) => f(p).ok_or(Error::Ramified(p)),
        }
    }

    pub fn num_characters(&self) -> usize {
        self.group.num_characters()
    }

    /// `ξ(class)` for character index `xi`.
    pub fn char_eval(&self, xi: usize, class: usize) -> Result<C64> {
        if xi >= self.num_characters() || class >= self.order() {
            return invalid(format!("character {xi} or class {class} not in {}", self.name));
        }
        Ok(self.group.character(xi, class))
    }

    pub fn class_label(&self, class: usize) -> &str {
        &self.group.labels[class]
    }

    /// Character indices whose values are all real.
    pub fn real_characters(&self) -> Vec<usize> {
        (0..self.num_characters())
            .filter(|&x| (0..self.order()).all(|c| self.group.character(x, c).im.abs() < 1e-12))
            .collect()
    }
}

fn quadratic(d: i64, name: String) -> Result<GaloisExt> {
    if d == 1 || !is_squarefree(d) {
        return invalid(format!("Q(sqrt({d})) needs squarefree d != 0, 1"));
    }
    let disc = fundamental_discriminant(d);
    let ramified = factor(disc.unsigned_abs()).into_iter().map(|(p, _)| p).collect();
    let group = FiniteGroupTable::cyclic(2, "s");
    Ok(GaloisExt { name, group, ramified, classifier: Classifier::Kronecker { disc } })
}

/// Generators and orders of a cyclic decomposition of `(Z/N)^×`, lifted to
/// residues mod `N` by CRT.
fn unit_group_generators(n: u64) -> Vec<(u64, u64)> {
    let mut gens = Vec::new();
    for (p, e) in factor(n) {
        let q = p.pow(e);
        let local: Vec<(u64, u64)> = if p == 2 {
            match e {
                1 => vec![],
                2 => vec![(q - 1, 2)],
                _ => vec![(q - 1, 2), (5, q / 4)],
            }
        } else {
            vec![(primitive_root(p, e), q / p * (p - 1))]
        };
        for (g, ord) in local {
            gens.push((crt_lift(g, q, n), ord));
        }
    }
    gens
}

/// The residue mod `n` congruent to `g` mod `q` and to 1 mod `n / q`.
fn crt_lift(g: u64, q: u64, n: u64) -> u64 {
    let r = n / q;
    (0..q).map(|t| 1 + t * r).find(|x| x % q == g % q).expect("CRT") % n
}

fn cyclotomic(n: u64, subgroup: &[u64], name: String) -> Result<GaloisExt> {
    if n <= 2 {
        return invalid(format!("cyclotomic modulus must be at least 3, got {n}"));
    }
    if n > 1_000_000 {
        return invalid("cyclotomic modulus too large");
    }
    let gens = unit_group_generators(n);
    let radices: Vec<u64> = gens.iter().map(|&(_, o)| o).collect();
    let order: u64 = radices.iter().product();
    // exponent vector of every unit
    let mut exps: Vec<Option<Vec<u64>>> = vec![None; n as usize];
    for idx in 0..order {
        let mut rem = idx;
        let mut e = vec![0; gens.len()];
        let mut x = 1 % n;
        for i in (0..gens.len()).rev() {
            e[i] = rem % radices[i];
            rem /= radices[i];
        }
        for (i, &(g, _)) in gens.iter().enumerate() {
            x = mul_mod(x, pow_mod(g, e[i], n), n);
        }
        exps[x as usize] = Some(e);
    }
    let char_value = |c: &[u64], e: &[u64]| -> C64 {
        c.iter()
            .zip(e)
            .zip(&radices)
            .map(|((&ci, &ei), &r)| root_of_unity(((ci * ei) % r) as usize, r as usize))
            .product()
    };
    let all_chars: Vec<Vec<u64>> = (0..order)
        .map(|idx| {
            let mut rem = idx;
            let mut c = vec![0; gens.len()];
            for i in (0..gens.len()).rev() {
                c[i] = rem % radices[i];
                rem /= radices[i];
            }
            c
        })
        .collect();

    // subgroup closure
    let mut h: BTreeSet<u64> = BTreeSet::from([1 % n]);
    for &s in subgroup {
        let s = s % n;
        if exps[s as usize].is_none() {
            return invalid(format!("subgroup generator {s} is not a unit mod {n}"));
        }
        loop {
            let next: BTreeSet<u64> = h.iter().map(|&x| mul_mod(x, s, n)).collect();
            if next.is_subset(&h) {
                break;
            }
            h.extend(next);
        }
    }
    // cosets ordered by smallest representative
    let mut table = vec![usize::MAX; n as usize];
    let mut reps = Vec::new();
    for r in 0..n {
        if exps[r as usize].is_none() || table[r as usize] != usize::MAX {
            continue;
        }
        let idx = reps.len();
        for &x in &h {
            table[mul_mod(r, x, n) as usize] = idx;
        }
        reps.push(r);
    }
    let chars: Vec<Vec<C64>> = all_chars
        .iter()
        .filter(|c| {
            h.iter().all(|&x| (char_value(c, exps[x as usize].as_ref().unwrap()) - 1.0).norm() < 1e-9)
        })
        .map(|c| reps.iter().map(|&r| char_value(c, exps[r as usize].as_ref().unwrap())).collect())
        .collect();
    debug_assert_eq!(chars.len(), reps.len());
    let labels = reps.iter().map(|r| r.to_string()).collect();
    let (t, rp) = (table.clone(), reps.clone());
    let group = FiniteGroupTable::from_parts(labels, move |a, b| t[mul_mod(rp[a], rp[b], n) as usize], chars);
    let ramified = factor(n).into_iter().map(|(p, _)| p).collect();
    Ok(GaloisExt { name, group, ramified, classifier: Classifier::Residues { modulus: n, table } })
}

/// The field `L` whose Galois group is identified with the component group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LFieldSpec {
    // a struct variant so that stray keys next to `kind = "trivial"` are rejected
    Trivial {},
    /// `Q(√d)`; a prime is in the non-identity component iff `(D/p) = −1`.
    Quadratic { d: i64 },
    /// A cyclic subfield of `Q(ζ_N)` (fixed field of `subgroup`), with the
    /// class of `generator` mapped to the generator of the component group.
    Cyclic {
        modulus: u64,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        subgroup: Vec<u64>,
        generator: u64,
    },
}

impl Default for LFieldSpec {
    fn default() -> Self {
        LFieldSpec::Trivial {}
    }
}

/// Realized `L` with the map from Frobenius to component index.
#[derive(Debug, Clone)]
pub struct LField {
    pub spec: LFieldSpec,
    pub ext: GaloisExt,
    /// `power[class]` = `k` with `class = generator^k`.
    power: Vec<usize>,
}

impl LField {
    pub fn new(spec: &LFieldSpec) -> Result<Self> {
        let (ext, gen) = match spec {
            LFieldSpec::Trivial {} => (GaloisExt::trivial(), 0),
            LFieldSpec::Quadratic { d } => (GaloisExt::new(&ExtensionSpec::Quadratic { d: *d })?, 1),
            LFieldSpec::Cyclic { modulus, subgroup, generator } => {
                let ext = GaloisExt::new(&ExtensionSpec::Cyclotomic {
                    modulus: *modulus,
                    subgroup: subgroup.clone(),
                })?;
                let g = match ext.artin_class(*generator % modulus) {
                    Ok(g) => g,
                    Err(_) => return invalid(format!("generator {generator} is not a unit mod {modulus}")),
                };
                (ext, g)
            }
        };
        let n = ext.order();
        let mut power = vec![usize::MAX; n];
        let mut x = 0;
        for k in 0..n {
            if power[x] != usize::MAX {
                break;
            }
            power[x] = k;
            x = ext.group.mul(x, gen);
        }
        if power.contains(&usize::MAX) {
            return invalid(format!("{} is not cyclic with the given generator", ext.name));
        }
        Ok(Self { spec: spec.clone(), ext, power })
    }

    pub fn degree(&self) -> usize {
        self.ext.order()
    }

    /// Component index (power of the component-group generator) of `Frob_p`.
    pub fn component_class(&self, p: u64) -> Result<usize> {
        Ok(self.power[self.ext.artin_class(p)?])
    }
}

/// Outcome of the linear-disjointness check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Disjointness {
    Pass,
    Warning(String),
}

const DISJOINT_PRIME_BOUND: u64 = 5000;

/// Abelian `K` and `L` are linearly disjoint iff no nontrivial character of
/// `Gal(L/Q)` agrees with a character of `Gal(K/Q)` on every Frobenius.
pub fn check_disjoint(k: &GaloisExt, l: &LField) -> Disjointness {
    if l.degree() == 1 {
        return Disjointness::Pass;
    }
    let primes: Vec<u64> = sieve_primes(DISJOINT_PRIME_BOUND)
        .into_iter()
        .filter(|p| !k.ramified.contains(p) && !l.ext.ramified.contains(p))
        .collect();
    let frob: Vec<(usize, usize)> = primes
        .iter()
        .filter_map(|&p| Some((k.artin_class(p).ok()?, l.ext.artin_class(p).ok()?)))
        .collect();
    let trivial_l = l.ext.group.trivial_character();
    for psi in 0..l.ext.num_characters() {
        if psi == trivial_l {
            continue;
        }
        for xi in 0..k.num_characters() {
            let same = frob
                .iter()
                .all(|&(ck, cl)| (k.group.character(xi, ck) - l.ext.group.character(psi, cl)).norm() < 1e-9);
            if same {
                return Disjointness::Warning(format!(
                    "{} and {} are not linearly disjoint: they share a nontrivial character",
                    k.name, l.ext.name
                ));
            }
        }
    }
    Disjointness::Pass
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: u64) -> GaloisExt {
        GaloisExt::new(&ExtensionSpec::Cyclotomic { modulus: n, subgroup: vec![] }).unwrap()
    }

    #[test]
    fn cyclotomic_five() {
        let k = cyc(5);
        assert_eq!(k.order(), 4);
        assert_eq!(k.ramified, BTreeSet::from([5]));
        assert_eq!(k.class_label(k.artin_class(7).unwrap()), "2");
        assert!(matches!(k.artin_class(5), Err(Error::Ramified(5))));
        // generator 2 has order 4
        let two = k.artin_class(2).unwrap();
        assert_eq!(k.group.pow(two, 2), k.artin_class(19).unwrap()); // 4 ≡ 19 mod 5
        let v = k.char_eval(1, two).unwrap();
        assert!((v - C64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn cyclotomic_eight_is_klein() {
        let k = cyc(8);
        assert_eq!(k.order(), 4);
        assert!((0..4).all(|a| k.group.mul(a, a) == 0));
        k.group.verify(1e-12).unwrap();
    }

    #[test]
    fn subgroup_quotient() {
        // Q(ζ_7)^{<−1>} is the real cubic subfield
        let k = GaloisExt::new(&ExtensionSpec::Cyclotomic { modulus: 7, subgroup: vec![6] }).unwrap();
        assert_eq!(k.order(), 3);
        k.group.verify(1e-12).unwrap();
        assert_eq!(k.artin_class(13).unwrap(), 0); // 13 ≡ −1
    }

    #[test]
    fn quadratic_fields() {
        let k = GaloisExt::new(&ExtensionSpec::Quadratic { d: -3 }).unwrap();
        assert_eq!(k.order(), 2);
        assert_eq!(k.ramified, BTreeSet::from([3]));
        assert_eq!(k.artin_class(7).unwrap(), 0);
        assert_eq!(k.artin_class(5).unwrap(), 1);
        assert!(GaloisExt::new(&ExtensionSpec::Quadratic { d: 12 }).is_err());
        assert!(GaloisExt::new(&ExtensionSpec::Quadratic { d: 1 }).is_err());
        assert!(GaloisExt::new(&ExtensionSpec::Cyclotomic { modulus: 2, subgroup: vec![] }).is_err());
    }

    #[test]
    fn product_is_componentwise() {
        let spec = ExtensionSpec::Product {
            factors: vec![
                ExtensionSpec::Cyclotomic { modulus: 5, subgroup: vec![] },
                ExtensionSpec::Quadratic { d: -3 },
            ],
            abelian_factors: None,
        };
        let k = GaloisExt::new(&spec).unwrap();
        let (a, b) = (cyc(5), GaloisExt::new(&ExtensionSpec::Quadratic { d: -3 }).unwrap());
        assert_eq!(k.order(), 8);
        for p in [7u64, 11, 13, 17, 19, 23, 29, 31] {
            assert_eq!(k.artin_class(p).unwrap(), a.artin_class(p).unwrap() * 2 + b.artin_class(p).unwrap());
        }
        assert_eq!(k.ramified, BTreeSet::from([3, 5]));
    }

    #[test]
    fn disjointness() {
        let q3 = LField::new(&LFieldSpec::Quadratic { d: -3 }).unwrap();
        assert_eq!(check_disjoint(&cyc(5), &q3), Disjointness::Pass);
        assert!(matches!(check_disjoint(&cyc(12), &q3), Disjointness::Warning(_)));
        assert_eq!(check_disjoint(&cyc(12), &LField::new(&LFieldSpec::Trivial {}).unwrap()), Disjointness::Pass);
        // Q(√5) ⊂ Q(ζ₅)
        let q5 = LField::new(&LFieldSpec::Quadratic { d: 5 }).unwrap();
        assert!(matches!(check_disjoint(&cyc(5), &q5), Disjointness::Warning(_)));
    }

    #[test]
    fn cyclic_lfield_powers() {
        let l = LField::new(&LFieldSpec::Cyclic { modulus: 7, subgroup: vec![6], generator: 3 }).unwrap();
        assert_eq!(l.degree(), 3);
        assert_eq!(l.component_class(3).unwrap(), 1);
        assert_eq!(l.component_class(2).unwrap(), 2); // 2 ≡ 3²
        assert_eq!(l.component_class(13).unwrap(), 0);
        let cm = LField::new(&LFieldSpec::Quadratic { d: -1 }).unwrap();
        assert_eq!(cm.component_class(7).unwrap(), 1);
        assert_eq!(cm.component_class(13).unwrap(), 0);
    }
}
