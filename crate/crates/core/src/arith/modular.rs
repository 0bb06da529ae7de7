//! Modular arithmetic on machine integers.

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// `a mod m` in `0..m` for signed `a`.
pub fn reduce(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factor(n) == [(n, 1)]
}

pub fn is_squarefree(d: i64) -> bool {
    d != 0 && factor(d.unsigned_abs()).iter().all(|&(_, e)| e == 1)
}

/// Kronecker symbol `(a / n)`.
pub fn kronecker(a: i64, n: u64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let mut t: i8 = 1;
    while n % 2 == 0 {
        n /= 2;
        match a.rem_euclid(8) {
            0 | 2 | 4 | 6 => return 0,
            3 | 5 => t = -t,
            _ => {}
        }
    }
    // Jacobi symbol (a / n) for odd n
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                t = -t;
            }
        }
        (a, n) = (n, a);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Discriminant of `Q(√d)` for squarefree `d`.
pub fn fundamental_discriminant(d: i64) -> i64 {
    if d.rem_euclid(4) == 1 {
        d
    } else {
        4 * d
    }
}

/// Quadratic character table `χ_p(x)` for `x = 0..p`, `p` an odd prime.
pub fn legendre_table(p: u64) -> Vec<i8> {
    let mut t = vec![-1i8; p as usize];
    t[0] = 0;
    for x in 1..=(p - 1) / 2 {
        t[mul_mod(x, x, p) as usize] = 1;
    }
    t
}

/// Multiplicative order of `a` modulo `m` (assumes `gcd(a, m) = 1`).
pub fn order_mod(a: u64, m: u64) -> u64 {
    let mut x = a % m;
    let mut k = 1;
    while x != 1 % m {
        x = mul_mod(x, a, m);
        k += 1;
    }
    k
}

/// Smallest generator of `(Z/p^e)^×` for an odd prime `p`.
pub fn primitive_root(p: u64, e: u32) -> u64 {
    let q = p.pow(e);
    let phi = q / p * (p - 1);
    let primes: Vec<u64> = factor(phi).into_iter().map(|(r, _)| r).collect();
    (2..q)
        .find(|&g| g % p != 0 && primes.iter().all(|&r| pow_mod(g, phi / r, q) != 1))
        .expect("odd prime powers have primitive roots")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Euler's criterion for odd primes.
    #[test]
    fn kronecker_matches_euler_criterion() {
        for p in [5u64, 7, 11, 13, 97, 101] {
            for a in -30i64..30 {
                let e = pow_mod(reduce(a, p), (p - 1) / 2, p);
                let expect = if a.rem_euclid(p as i64) == 0 { 0 } else if e == 1 { 1 } else { -1 };
                assert_eq!(kronecker(a, p), expect, "({a}/{p})");
            }
        }
    }

    #[test]
    fn kronecker_at_two() {
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(8, 2), 0);
        assert_eq!(kronecker(-3, 7), 1);
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(5, 1), 2);
        assert_eq!(primitive_root(7, 1), 3);
        assert_eq!(order_mod(primitive_root(9, 1), 9), 6);
        assert_eq!(order_mod(primitive_root(5, 2), 25), 20);
    }

    #[test]
    fn factorization_and_squarefree() {
        assert_eq!(factor(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert!(is_squarefree(-15));
        assert!(!is_squarefree(12));
        assert!(is_prime(37) && !is_prime(1) && !is_prime(91));
        assert_eq!(fundamental_discriminant(-1), -4);
        assert_eq!(fundamental_discriminant(-3), -3);
    }

    #[test]
    fn legendre_table_counts() {
        let t = legendre_table(11);
        assert_eq!(t.iter().filter(|&&x| x == 1).count(), 5);
        assert_eq!(t[3], 1); // 5² = 3 mod 11
    }
}
