//! Point counts of elliptic and genus-2 curves over F_p and F_{p²}.

use super::modular::{legendre_table, reduce};
use crate::error::{invalid, Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Integer Weierstrass coefficients `[a1, a2, a3, a4, a6]`.
pub type Weierstrass = [i64; 5];

/// `(b2, b4, b6, b8)` of a Weierstrass model.
fn b_invariants(e: &Weierstrass) -> [BigInt; 4] {
    let [a1, a2, a3, a4, a6] = e.map(BigInt::from);
    let b2 = &a1 * &a1 + 4 * &a2;
    let b4 = 2 * &a4 + &a1 * &a3;
    let b6 = &a3 * &a3 + 4 * &a6;
    let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
    [b2, b4, b6, b8]
}

pub fn elliptic_discriminant(e: &Weierstrass) -> BigInt {
    let [b2, b4, b6, b8] = b_invariants(e);
    -&b2 * &b2 * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
}

/// `(c4, c6)` of a Weierstrass model.
pub fn c_invariants(e: &Weierstrass) -> (BigInt, BigInt) {
    let [b2, b4, b6, _] = b_invariants(e);
    let c4 = &b2 * &b2 - 24 * &b4;
    let c6 = -&b2 * &b2 * &b2 + 36 * &b2 * &b4 - 216 * &b6;
    (c4, c6)
}

fn big_mod(x: &BigInt, p: u64) -> u64 {
    let r = x % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    u64::try_from(r).expect("residue fits")
}

pub fn divides(p: u64, x: &BigInt) -> bool {
    big_mod(x, p) == 0
}

/// Precomputed data for counting one elliptic curve at many primes.
#[derive(Debug, Clone)]
pub struct EllipticCurve {
    pub coeffs: Weierstrass,
    pub discriminant: BigInt,
    c4: BigInt,
    c6: BigInt,
}

impl EllipticCurve {
    pub fn new(coeffs: Weierstrass) -> Result<Self> {
        let discriminant = elliptic_discriminant(&coeffs);
        if discriminant.is_zero() {
            return invalid(format!("singular Weierstrass model {coeffs:?}"));
        }
        let (c4, c6) = c_invariants(&coeffs);
        Ok(Self { coeffs, discriminant, c4, c6 })
    }

    pub fn has_good_reduction(&self, p: u64) -> bool {
        !divides(p, &self.discriminant)
    }

    /// `a_p = p + 1 − #E(F_p)` for `p > 3` of good reduction, using the short
    /// model `y² = x³ − 27c4·x − 54c6`.
    pub fn trace(&self, p: u64) -> Result<i64> {
        if p <= 3 {
            return invalid(format!("p = {p}: counting requires p > 3"));
        }
        if !self.has_good_reduction(p) {
            return Err(Error::BadReduction(p));
        }
        let a = reduce(-27 * big_mod(&self.c4, p) as i64 % p as i64, p);
        let b = reduce(-54 * big_mod(&self.c6, p) as i64 % p as i64, p);
        let chi = legendre_table(p);
        Ok(-cubic_character_sum(a, b, p, &chi))
    }
}

/// `Σ_x χ(x³ + a x + b)` by forward differences (no multiplications).
fn cubic_character_sum(a: u64, b: u64, p: u64, chi: &[i8]) -> i64 {
    // f(0) = b, Δf(0) = 1 + a, Δ²f(0) = 6, Δ³f = 6
    let add = |x: u64, y: u64| {
        let s = x + y;
        if s >= p {
            s - p
        } else {
            s
        }
    };
    let mut f = b % p;
    let mut d1 = (1 + a) % p;
    let mut d2 = 6 % p;
    let d3 = 6 % p;
    let mut sum = 0i64;
    for _ in 0..p {
        sum += chi[f as usize] as i64;
        f = add(f, d1);
        d1 = add(d1, d2);
        d2 = add(d2, d3);
    }
    sum
}

/// Genus-2 curve `y² = f(x)`, coefficients ascending (`f[i]` multiplies `x^i`).
#[derive(Debug, Clone)]
pub struct Genus2Curve {
    pub f: Vec<i64>,
    pub discriminant: BigInt,
}

impl Genus2Curve {
    pub fn new(f: Vec<i64>) -> Result<Self> {
        let deg = f.len().saturating_sub(1);
        if !(deg == 5 || deg == 6) || f[deg] == 0 {
            return invalid(format!("genus-2 polynomial must have degree 5 or 6, got {f:?}"));
        }
        let discriminant = poly_discriminant(&f);
        if discriminant.is_zero() {
            return invalid(format!("polynomial {f:?} is not squarefree"));
        }
        Ok(Self { f, discriminant })
    }

    pub fn degree(&self) -> usize {
        self.f.len() - 1
    }

    pub fn has_good_reduction(&self, p: u64) -> bool {
        p != 2 && !divides(p, &self.discriminant) && self.f[self.degree()] % p as i64 != 0
    }

    fn reduced(&self, p: u64) -> Vec<u64> {
        self.f.iter().map(|&c| reduce(c, p)).collect()
    }

    /// Points at infinity over F_p (`sq` tells whether the leading coefficient is a square).
    fn infinity(&self, lc_is_square: bool) -> i64 {
        match (self.degree(), lc_is_square) {
            (5, _) => 1,
            (_, true) => 2,
            (_, false) => 0,
        }
    }

    /// `#C(F_p)`.
    pub fn count_fp(&self, p: u64) -> Result<i64> {
        self.check_prime(p)?;
        let f = self.reduced(p);
        let chi = legendre_table(p);
        let mut total = 0i64;
        for x in 0..p {
            total += 1 + chi[horner(&f, x, p) as usize] as i64;
        }
        let lc = f[self.degree()];
        Ok(total + self.infinity(chi[lc as usize] == 1))
    }

    /// `#C(F_{p²})`, with `F_{p²} = F_p[t]/(t² − s)` and the quadratic
    /// character `χ(z) = χ_p(N(z))`.
    pub fn count_fp2(&self, p: u64) -> Result<i64> {
        self.check_prime(p)?;
        let f = self.reduced(p);
        let chi = legendre_table(p);
        let s = (2..p).find(|&x| chi[x as usize] == -1).expect("nonresidue exists");
        // z ∈ F_p: χ(f(z)) = χ_p(f(z)²) = 1 unless f(z) = 0
        let mut sum = (0..p).filter(|&x| horner(&f, x, p) != 0).count() as i64;
        // z = u + v t with v ≠ 0: z and its conjugate contribute equally
        let d = self.degree();
        let mut half = 0i64;
        for v in 1..=(p - 1) / 2 {
            // forward-difference table of u ↦ f(u + v t) in F_{p²}
            let mut diffs: Vec<(u64, u64)> = (0..=d as u64).map(|u| eval_fp2(&f, (u % p, v), s, p)).collect();
            for k in 1..=d {
                for i in (k..=d).rev() {
                    diffs[i] = (sub_mod(diffs[i].0, diffs[i - 1].0, p), sub_mod(diffs[i].1, diffs[i - 1].1, p));
                }
            }
            for _ in 0..p {
                let (a, b) = diffs[0];
                let norm = sub_mod(a * a % p, s * (b * b % p) % p, p);
                half += chi[norm as usize] as i64;
                for i in 0..d {
                    diffs[i] = (add_mod(diffs[i].0, diffs[i + 1].0, p), add_mod(diffs[i].1, diffs[i + 1].1, p));
                }
            }
        }
        sum += 2 * half;
        // the leading coefficient lies in F_p, hence is a square in F_{p²}
        let inf = if d == 5 { 1 } else { 2 };
        Ok((p * p) as i64 + sum + inf)
    }

    /// `(a1, a2)` of the L-polynomial.
    pub fn frobenius(&self, p: u64) -> Result<(i64, i64)> {
        let n1 = self.count_fp(p)?;
        let n2 = self.count_fp2(p)?;
        let p = p as i64;
        let a1 = p + 1 - n1;
        let s2 = p * p + 1 - n2;
        Ok((a1, (a1 * a1 - s2) / 2))
    }

    fn check_prime(&self, p: u64) -> Result<()> {
        if p <= 3 {
            return invalid(format!("p = {p}: counting requires p > 3"));
        }
        if !self.has_good_reduction(p) {
            return Err(Error::BadReduction(p));
        }
        Ok(())
    }
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn horner(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
}

/// `f(z)` for `z = (u, v) = u + v t`, `t² = s`.
fn eval_fp2(f: &[u64], z: (u64, u64), s: u64, p: u64) -> (u64, u64) {
    let (u, v) = z;
    f.iter().rev().fold((0, 0), |(a, b), &c| {
        // (a + b t)(u + v t) + c
        let re = (a * u % p + s * (b * v % p) % p + c) % p;
        let im = (a * v % p + b * u % p) % p;
        (re, im)
    })
}

/// Discriminant of a polynomial (ascending coefficients), exactly:
/// `(−1)^{n(n−1)/2} Res(f, f') / lc(f)`.
pub fn poly_discriminant(f: &[i64]) -> BigInt {
    let n = f.len() - 1;
    let fp: Vec<i64> = (1..=n).map(|i| i as i64 * f[i]).collect();
    let res = resultant(f, &fp);
    let sign = if (n * (n - 1) / 2).is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    sign * res / BigInt::from(f[n])
}

/// Resultant via the Sylvester matrix and fraction-free (Bareiss) elimination.
fn resultant(f: &[i64], g: &[i64]) -> BigInt {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut a = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, &c) in f.iter().rev().enumerate() {
            a[i][i + j] = BigInt::from(c);
        }
    }
    for i in 0..m {
        for (j, &c) in g.iter().rev().enumerate() {
            a[n + i][i + j] = BigInt::from(c);
        }
    }
    determinant(a)
}

fn determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * prev
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminants_of_known_curves() {
        assert_eq!(elliptic_discriminant(&[0, 0, 1, -1, 0]), BigInt::from(37));
        assert_eq!(elliptic_discriminant(&[0, -1, 1, -10, -20]), BigInt::from(-161051));
        assert_eq!(elliptic_discriminant(&[0, 0, 0, -1, 0]), BigInt::from(64));
    }

    #[test]
    fn polynomial_discriminants() {
        // x² + bx + c → b² − 4c
        assert_eq!(poly_discriminant(&[3, 5, 1]), BigInt::from(13));
        // x³ + ax + b → −4a³ − 27b²
        assert_eq!(poly_discriminant(&[2, -1, 0, 1]), BigInt::from(4 - 108));
        assert_eq!(poly_discriminant(&[1, 0, 0, 0, 0, 1]), BigInt::from(3125));
        assert!(poly_discriminant(&[0, 0, 1, 0, 0, 1]).is_zero());
    }

    #[test]
    fn cm_curve_small_primes() {
        let e = EllipticCurve::new([0, 0, 0, -1, 0]).unwrap();
        assert_eq!(e.trace(7).unwrap(), 0);
        assert_eq!(e.trace(5).unwrap(), -2);
        assert!(matches!(e.trace(2), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn bad_reduction_is_flagged() {
        let e = EllipticCurve::new([0, 0, 1, -1, 0]).unwrap();
        assert!(matches!(e.trace(37), Err(Error::BadReduction(37))));
        assert!(EllipticCurve::new([0, 0, 0, 0, 0]).is_err());
    }

    #[test]
    fn x5_plus_1_at_seven() {
        let c = Genus2Curve::new(vec![1, 0, 0, 0, 0, 1]).unwrap();
        assert_eq!(c.frobenius(7).unwrap().0, 0);
        assert_ne!(c.frobenius(11).unwrap().0, 0);
        assert!(Genus2Curve::new(vec![1, 0, 1]).is_err());
        assert!(matches!(c.frobenius(5), Err(Error::BadReduction(5))));
    }
}
