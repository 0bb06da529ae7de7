//! Naive point-counting oracles shared by integration tests.

#![allow(dead_code)]

use cstlab_core::arith::count::Weierstrass;

/// `#E(F_p)` by enumerating the general Weierstrass equation.
pub fn naive_elliptic_count(e: &Weierstrass, p: u64) -> i64 {
    let p = p as i64;
    let [a1, a2, a3, a4, a6] = e.map(|c| c.rem_euclid(p));
    let mut n = 1;
    for x in 0..p {
        for y in 0..p {
            let lhs = (y * y + a1 * x * y + a3 * y) % p;
            let rhs = (x * x % p * x + a2 * x % p * x + a4 * x + a6) % p;
            if lhs == rhs {
                n += 1;
            }
        }
    }
    n
}

/// Affine points of `y² = f(x)` over F_p by enumerating pairs, plus the
/// points at infinity.
pub fn naive_genus2_fp(f: &[i64], p: u64) -> i64 {
    let p = p as i64;
    let fr: Vec<i64> = f.iter().map(|c| c.rem_euclid(p)).collect();
    let eval = |x: i64| fr.iter().rev().fold(0, |acc, &c| (acc * x + c) % p);
    let mut n = 0;
    for x in 0..p {
        let v = eval(x);
        n += (0..p).filter(|y| y * y % p == v).count() as i64;
    }
    let lc = fr[fr.len() - 1];
    let inf = if f.len() == 6 {
        1
    } else if (0..p).any(|y| y * y % p == lc) {
        2
    } else {
        0
    };
    n + inf
}

/// Over F_{p²} with an independent model `F_p[t]/(t² − t − c)` (irreducible),
/// counting square roots with a lookup table.
pub fn naive_genus2_fp2(f: &[i64], p: u64) -> i64 {
    let p = p as i64;
    let c = (1..p)
        .find(|&c| (0..p).all(|x| (x * x - x - c).rem_euclid(p) != 0))
        .expect("irreducible quadratic");
    // (a + b t)(u + v t) with t² = t + c
    let mul = |(a, b): (i64, i64), (u, v): (i64, i64)| {
        let bv = b * v % p;
        ((a * u + bv * c) % p, (a * v + b * u + bv) % p)
    };
    let idx = |(a, b): (i64, i64)| (a * p + b) as usize;
    let mut roots = vec![0i64; (p * p) as usize];
    for a in 0..p {
        for b in 0..p {
            roots[idx(mul((a, b), (a, b)))] += 1;
        }
    }
    let fr: Vec<i64> = f.iter().map(|c| c.rem_euclid(p)).collect();
    let mut n = 0;
    for a in 0..p {
        for b in 0..p {
            let v = fr.iter().rev().fold((0, 0), |acc, &k| {
                let m = mul(acc, (a, b));
                ((m.0 + k) % p, m.1)
            });
            n += roots[idx(v)];
        }
    }
    n + if f.len() == 6 { 1 } else { 2 }
}
