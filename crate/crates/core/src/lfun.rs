//! Truncated Euler products `L_X(s, ρ ⊗ ξ)` on real `s > 1`.

use crate::arith::sieve_primes;
use crate::equidist::CstSetup;
use crate::error::{invalid, Result};
use crate::linalg::C64;
use crate::strep::{euler_angles, Irrep};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Smallest allowed `s − 1`.
pub const MIN_S_OFFSET: f64 = 0.05;
/// Partial products below this modulus raise an alarm.
pub const MIN_MODULUS: f64 = 1e-3;

/// Upper bound for `Σ_{p > x} p^{−s}` from `π(t) < 1.25506 t / ln t` and
/// partial summation.
pub fn prime_tail_bound(s: f64, x: f64) -> f64 {
    let x = x.max(3.0);
    1.25506 * s * x.powf(1.0 - s) / ((s - 1.0) * x.ln())
}

/// `−Σ_j log(1 − ξ e^{iα_j} p^{−s})`, principal branch.
pub fn log_local_factor(xi: C64, angles: &[f64], p: u64, s: f64) -> C64 {
    let t = (p as f64).powf(-s);
    angles
        .iter()
        .map(|&a| -(C64::new(1.0, 0.0) - xi * C64::from_polar(t, a)).ln())
        .sum()
}

/// Bound on `|log L − log L_X|` for a degree-`dim` product.
fn tail_bound(dim: usize, s: f64, x: u64) -> f64 {
    let t = (x as f64).powf(-s);
    dim as f64 * prime_tail_bound(s, x as f64) / (1.0 - t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LValue {
    pub s: f64,
    pub x: u64,
    pub re_log_l: f64,
    pub im_log_l: f64,
    pub tail_bound: f64,
    pub primes_used: usize,
    /// Primes `≤ X` without data (bad reduction, ramified, or excluded).
    pub skipped_primes: Vec<u64>,
}

impl LValue {
    pub fn log_l(&self) -> C64 {
        C64::new(self.re_log_l, self.im_log_l)
    }

    pub fn modulus(&self) -> f64 {
        self.re_log_l.exp()
    }
}

fn check_s(s: f64, dim: usize, x: u64) -> Result<()> {
    if !(s >= 1.0 + MIN_S_OFFSET) {
        let tail = if s > 1.0 { format!("{:.3e}", tail_bound(dim, s, x)) } else { "infinite".into() };
        return invalid(format!(
            "s = {s} is too close to 1: truncation tail bound at X = {x} is {tail}; use s >= {}",
            1.0 + MIN_S_OFFSET
        ));
    }
    Ok(())
}

/// Per-sample `(p, log local factor)` at `s`, ordered by `p`.
fn local_logs(setup: &CstSetup, irrep: &Irrep, xi: usize, s: f64) -> Result<Vec<(u64, C64)>> {
    if xi >= setup.extension.num_characters() {
        return invalid(format!("character {xi} not in {}", setup.extension.name));
    }
    let trivial = irrep.is_trivial();
    if !trivial {
        setup.evaluable(irrep, irrep.dimension as u32)?;
    }
    let mut out = Vec::with_capacity(setup.len());
    for smp in &setup.samples {
        let Some(p) = smp.p else {
            return invalid("Euler products need samples attached to primes");
        };
        let angles = if trivial { vec![0.0] } else { euler_angles(&setup.group, irrep, &smp.element)? };
        let xv = setup.extension.group.character(xi, smp.artin);
        out.push((p, log_local_factor(xv, &angles, p, s)));
    }
    out.sort_by_key(|e| e.0);
    Ok(out)
}

fn skipped_up_to(setup: &CstSetup, x: u64) -> Vec<u64> {
    let have: BTreeSet<u64> = setup.samples.iter().filter_map(|s| s.p).collect();
    sieve_primes(x).into_iter().filter(|p| !have.contains(p)).collect()
}

/// `Σ_{p ≤ X} −log det(1 − ρ(x_p) ξ(σ_p) p^{−s})` over the primes with data.
pub fn log_l_truncated(setup: &CstSetup, irrep: &Irrep, xi: usize, s: f64, x: u64) -> Result<LValue> {
    check_s(s, irrep.dimension, x)?;
    if x > setup.pmax {
        return invalid(format!("X = {x} exceeds the data bound pmax = {}", setup.pmax));
    }
    let logs = local_logs(setup, irrep, xi, s)?;
    let used: Vec<C64> = logs.iter().take_while(|e| e.0 <= x).map(|e| e.1).collect();
    let total = crate::equidist::tree_sum(&used);
    Ok(LValue {
        s,
        x,
        re_log_l: total.re,
        im_log_l: total.im,
        tail_bound: tail_bound(irrep.dimension, s, x),
        primes_used: used.len(),
        skipped_primes: skipped_up_to(setup, x),
    })
}

/// `Σ_p −log(1 − ξ(σ_p) p^{−s})` over `primes`: the factors of `L(s, ξ)` that
/// a dataset omits. Ramified primes contribute for trivial `ξ` only.
pub fn bad_prime_correction(setup: &CstSetup, xi: usize, primes: &[u64], s: f64) -> Result<C64> {
    let ext = &setup.extension;
    if xi >= ext.num_characters() {
        return invalid(format!("character {xi} not in {}", ext.name));
    }
    let trivial = xi == ext.group.trivial_character();
    let mut total = C64::new(0.0, 0.0);
    for &p in primes {
        let v = match ext.artin_class(p) {
            Ok(c) => ext.group.character(xi, c),
            Err(_) if trivial => C64::new(1.0, 0.0),
            Err(_) => continue,
        };
        total += log_local_factor(v, &[0.0], p, s);
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LRow {
    pub s: f64,
    pub x: u64,
    pub re_log_l: f64,
    pub im_log_l: f64,
    pub modulus: f64,
    pub tail_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LScanReport {
    pub irrep: String,
    pub xi: usize,
    pub rows: Vec<LRow>,
    pub min_modulus: Option<f64>,
    pub alarms: Vec<String>,
    pub skipped_primes: Vec<u64>,
}

/// Tabulates the truncated products over `s_grid × x_grid` and raises alarms
/// for tiny moduli or a decay in `X` larger than the truncation tail allows.
pub fn invertibility_scan(
    setup: &CstSetup,
    irrep: &Irrep,
    xi: usize,
    s_grid: &[f64],
    x_grid: &[u64],
) -> Result<LScanReport> {
    let mut xs = x_grid.to_vec();
    xs.sort_unstable();
    xs.dedup();
    if let Some(&xm) = xs.last() {
        if xm > setup.pmax {
            return invalid(format!("X = {xm} exceeds the data bound pmax = {}", setup.pmax));
        }
    }
    let mut rows = Vec::new();
    let mut alarms = Vec::new();
    for &s in s_grid {
        if let Some(&x0) = xs.first() {
            check_s(s, irrep.dimension, x0)?;
        }
        let logs = local_logs(setup, irrep, xi, s)?;
        let mut moduli = Vec::new();
        for &x in &xs {
            let used: Vec<C64> = logs.iter().take_while(|e| e.0 <= x).map(|e| e.1).collect();
            let v = crate::equidist::tree_sum(&used);
            let modulus = v.re.exp();
            if modulus < MIN_MODULUS {
                alarms.push(format!("|L_X| = {modulus:.3e} < {MIN_MODULUS} at s = {s}, X = {x}"));
            }
            moduli.push(modulus);
            rows.push(LRow { s, x, re_log_l: v.re, im_log_l: v.im, modulus, tail_bound: tail_bound(irrep.dimension, s, x) });
        }
        if moduli.len() >= 2 && moduli.windows(2).all(|w| w[1] < w[0]) {
            let drop = (moduli[0] / moduli[moduli.len() - 1]).ln();
            let allowed = tail_bound(irrep.dimension, s, xs[0]);
            if drop > allowed {
                alarms.push(format!(
                    "|L_X| decreases monotonically at s = {s}: log drop {drop:.3e} exceeds tail bound {allowed:.3e}"
                ));
            }
        }
    }
    let min_modulus = rows.iter().map(|r| r.modulus).reduce(f64::min);
    let skipped_primes = xs.last().map(|&x| skipped_up_to(setup, x)).unwrap_or_default();
    Ok(LScanReport { irrep: irrep.to_string(), xi, rows, min_modulus, alarms, skipped_primes })
}
