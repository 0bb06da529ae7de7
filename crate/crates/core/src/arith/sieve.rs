//! Segmented sieve of Eratosthenes.

const SEGMENT: u64 = 1 << 16;

/// All primes `≤ x`, increasing.
pub fn sieve_primes(x: u64) -> Vec<u64> {
    if x < 2 {
        return Vec::new();
    }
    let root = (x as f64).sqrt() as u64 + 1;
    let base = simple_sieve(root.min(x));
    let mut out = base.clone();
    let mut lo = root.min(x) + 1;
    let mut seg = vec![true; SEGMENT as usize];
    while lo <= x {
        let hi = (lo + SEGMENT - 1).min(x);
        let len = (hi - lo + 1) as usize;
        seg[..len].fill(true);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut m = (lo.div_ceil(p) * p).max(p * p);
            while m <= hi {
                seg[(m - lo) as usize] = false;
                m += p;
            }
        }
        out.extend((0..len).filter(|&i| seg[i]).map(|i| lo + i as u64));
        lo = hi + 1;
    }
    out
}

fn simple_sieve(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut is = vec![true; n + 1];
    is[0] = false;
    if n >= 1 {
        is[1] = false;
    }
    let mut i = 2;
    while i * i <= n {
        if is[i] {
            for j in (i * i..=n).step_by(i) {
                is[j] = false;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&i| is[i]).map(|i| i as u64).collect()
}
