//! Equidistribution statistics: twisted character sums, moments, histograms
//! and χ² fits of Frobenius data against a Chebotarev–Sato–Tate group.

use crate::arith::{sieve_primes, FrobeniusDatum, MIN_PRIME};
use crate::error::{invalid, Error, Result};
use crate::galois::GaloisExt;
use crate::linalg::C64;
use crate::stgroups::{ClassPoint, GroupElement, GroupTag, SatoTateGroup};
use crate::strep::{char_value, class_determined, list_irreps, Irrep};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const DEFAULT_THRESHOLD_C: f64 = 4.0;
pub const DEFAULT_CHI2_LIMIT: f64 = 1.5;
/// Moment rows pass when within this many standard errors of the prediction.
pub const MOMENT_SIGMA: f64 = 4.0;
/// Minimum expected count per χ² cell after merging.
pub const MIN_EXPECTED: f64 = 5.0;
pub const A_RANGE: (f64, f64) = (-4.0, 4.0);
pub const B_RANGE: (f64, f64) = (-2.0, 6.0);
/// Stream reserved for synthetic Artin classes; Haar sampling uses streams
/// `2i` and `2i + 1` for element `i`.
const ARTIN_STREAM: u64 = 1 << 62;

/// One point of `ST_A × Gal(K/Q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub p: Option<u64>,
    pub point: ClassPoint,
    pub artin: usize,
    /// The group element itself, or a representative of its class point.
    pub element: GroupElement,
    /// Whether `element` is the actual element (synthetic data) rather than
    /// a representative chosen from `(a, b, component)`.
    pub element_known: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArtinAssignment {
    /// Independent uniform classes.
    Uniform,
    /// The actual Frobenius class of the assigned prime.
    Frobenius,
}

/// A group, an extension and a sequence of samples in their product.
#[derive(Debug, Clone)]
pub struct CstSetup {
    pub group: SatoTateGroup,
    pub extension: GaloisExt,
    pub samples: Vec<Sample>,
    /// Every prime `≤ pmax` is either a sample or deliberately excluded.
    pub pmax: u64,
}

impl CstSetup {
    /// Wraps arithmetic data counted up to `pmax`; labels must lie in the
    /// group and extension.
    pub fn from_data(group: SatoTateGroup, extension: GaloisExt, data: &[FrobeniusDatum], pmax: u64) -> Result<Self> {
        let mut samples = Vec::with_capacity(data.len());
        for d in data {
            if d.component >= group.num_components() {
                return invalid(format!("component {} at p = {} not in {}", d.component, d.p, group.tag));
            }
            if d.artin >= extension.order() {
                return invalid(format!("Artin class {} at p = {} not in {}", d.artin, d.p, extension.name));
            }
            let point = d.class_point();
            let element = group.class_candidates(&point)[0];
            samples.push(Sample { p: Some(d.p), point, artin: d.artin, element, element_known: false });
        }
        Ok(Self { group, extension, samples, pmax })
    }

    /// `n` Haar samples attached to the first `n` primes `≥ 5` unramified in
    /// `K`.
    pub fn synthetic(
        group: SatoTateGroup,
        extension: GaloisExt,
        n: usize,
        seed: u64,
        artin: ArtinAssignment,
    ) -> Self {
        let primes = first_primes(n, &extension);
        Self::on_primes(group, extension, primes, seed, artin)
    }

    /// Haar samples attached to every prime `5 ≤ p ≤ pmax` unramified in `K`.
    pub fn synthetic_to(group: SatoTateGroup, extension: GaloisExt, pmax: u64, seed: u64, artin: ArtinAssignment) -> Self {
        let primes: Vec<u64> = sieve_primes(pmax)
            .into_iter()
            .filter(|p| *p >= MIN_PRIME && !extension.ramified.contains(p))
            .collect();
        let mut s = Self::on_primes(group, extension, primes, seed, artin);
        s.pmax = pmax;
        s
    }

    fn on_primes(group: SatoTateGroup, extension: GaloisExt, primes: Vec<u64>, seed: u64, artin: ArtinAssignment) -> Self {
        let n = primes.len();
        let pmax = primes.last().copied().unwrap_or(0);
        let elements = group.sample_haar(n, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(ARTIN_STREAM);
        let samples = elements
            .into_iter()
            .zip(primes)
            .map(|(element, p)| {
                let a = match artin {
                    ArtinAssignment::Uniform => rng.random_range(0..extension.order()),
                    ArtinAssignment::Frobenius => extension.artin_class(p).expect("unramified by construction"),
                };
                Sample { p: Some(p), point: group.class_point(&element), artin: a, element, element_known: true }
            })
            .collect();
        Self { group, extension, samples, pmax }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn max_prime(&self) -> Option<u64> {
        self.samples.iter().filter_map(|s| s.p).max()
    }

    /// Checks that `χ(g^k)`, `k = 1..=powers`, is a function of the data on
    /// every component that carries class-only samples.
    pub fn evaluable(&self, irrep: &Irrep, powers: u32) -> Result<()> {
        let mut needed = vec![false; self.group.num_components()];
        for s in self.samples.iter().filter(|s| !s.element_known) {
            needed[s.point.component] = true;
        }
        for (c, _) in needed.iter().enumerate().filter(|(_, &n)| n) {
            if !class_determined(&self.group, irrep, c, powers) {
                return Err(Error::NotClassDetermined {
                    irrep: irrep.to_string(),
                    component: self.group.component_label(c).to_string(),
                    reason: "Frobenius data gives only (a, b, component)".into(),
                });
            }
        }
        Ok(())
    }

    /// `χ_ρ` at every sample.
    pub fn char_values(&self, irrep: &Irrep) -> Result<Vec<C64>> {
        self.evaluable(irrep, 1)?;
        self.samples.par_iter().map(|s| char_value(&self.group, irrep, &s.element)).collect()
    }

    fn xi_values(&self, xi: usize) -> Result<Vec<C64>> {
        if xi >= self.extension.num_characters() {
            return invalid(format!("character {xi} not in {}", self.extension.name));
        }
        Ok(self.samples.iter().map(|s| self.extension.group.character(xi, s.artin)).collect())
    }

    /// Indices of the samples forming the first half: primes up to half the
    /// largest prime, or the first half by position.
    fn first_half(&self) -> usize {
        match self.max_prime() {
            Some(pm) if self.samples.iter().all(|s| s.p.is_some()) => {
                self.samples.iter().take_while(|s| s.p.unwrap() <= pm / 2).count()
            }
            _ => self.samples.len() / 2,
        }
    }
}

fn first_primes(n: usize, ext: &GaloisExt) -> Vec<u64> {
    let mut bound = 64u64.max((n as f64 * ((n as f64).ln() + (n as f64).ln().ln().max(1.0)) * 1.2) as u64);
    loop {
        let ps: Vec<u64> = sieve_primes(bound)
            .into_iter()
            .filter(|p| *p >= MIN_PRIME && !ext.ramified.contains(p))
            .take(n)
            .collect();
        if ps.len() == n {
            return ps;
        }
        bound *= 2;
    }
}

/// Pairwise summation in a fixed order.
pub fn tree_sum(v: &[C64]) -> C64 {
    if v.len() <= 64 {
        v.iter().sum()
    } else {
        let (l, r) = v.split_at(v.len() / 2);
        tree_sum(l) + tree_sum(r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharSumRow {
    pub irrep: String,
    pub dim: usize,
    pub xi: usize,
    /// Trivial `ρ` with trivial `ξ`: `S` must be exactly 1.
    #[serde(default)]
    pub trivial: bool,
    pub n: usize,
    /// `None` on skipped rows.
    pub re_s: Option<f64>,
    pub im_s: Option<f64>,
    pub abs_s: Option<f64>,
    pub threshold: f64,
    /// `|S|` over the first half of the data.
    pub abs_s_half: Option<f64>,
    /// `|S|` did not grow from the first half to the full data beyond twice
    /// the threshold.
    pub halves_ok: bool,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

fn sum_row(setup: &CstSetup, irrep: &Irrep, xi: usize, chi: &[C64], c: f64) -> Result<CharSumRow> {
    let n = setup.len();
    if n == 0 {
        return Err(Error::InsufficientData("no samples".into()));
    }
    let vals: Vec<C64> = chi.iter().zip(setup.xi_values(xi)?).map(|(a, b)| a * b).collect();
    let s = tree_sum(&vals) / n as f64;
    let h = setup.first_half().max(1);
    let s_half = tree_sum(&vals[..h]) / h as f64;
    let xi_dim = 1; // abelian K
    let threshold = c * (irrep.dimension * xi_dim) as f64 / (n as f64).sqrt();
    let trivial = irrep.is_trivial() && xi == setup.extension.group.trivial_character();
    let pass = if trivial { s == C64::new(1.0, 0.0) } else { s.norm() <= threshold };
    let halves_ok = trivial || s.norm() <= s_half.norm() || s.norm() <= 2.0 * threshold;
    Ok(CharSumRow {
        irrep: irrep.to_string(),
        dim: irrep.dimension,
        xi,
        trivial,
        n,
        re_s: Some(s.re),
        im_s: Some(s.im),
        abs_s: Some(s.norm()),
        threshold,
        abs_s_half: Some(s_half.norm()),
        halves_ok,
        verdict: Verdict::from_bool(pass),
        reason: None,
    })
}

/// `S = (1/n) Σ χ_ρ(x_p) ξ(σ_p)` with threshold `c · dim ρ · dim ξ / √n`.
pub fn character_sum(setup: &CstSetup, irrep: &Irrep, xi: usize, c: f64) -> Result<CharSumRow> {
    let chi = setup.char_values(irrep)?;
    sum_row(setup, irrep, xi, &chi, c)
}

/// Character sums for every pair, with non-evaluable irreducibles reported
/// as skipped rows.
pub fn character_sums(setup: &CstSetup, irreps: &[Irrep], c: f64) -> Result<Vec<CharSumRow>> {
    let mut rows = Vec::new();
    for irrep in irreps {
        match setup.char_values(irrep) {
            Ok(chi) => {
                for xi in 0..setup.extension.num_characters() {
                    rows.push(sum_row(setup, irrep, xi, &chi, c)?);
                }
            }
            Err(e @ Error::NotClassDetermined { .. }) => {
                for xi in 0..setup.extension.num_characters() {
                    rows.push(CharSumRow {
                        irrep: irrep.to_string(),
                        dim: irrep.dimension,
                        xi,
                        trivial: false,
                        n: setup.len(),
                        re_s: None,
                        im_s: None,
                        abs_s: None,
                        threshold: c * irrep.dimension as f64 / (setup.len() as f64).sqrt(),
                        abs_s_half: None,
                        halves_ok: true,
                        verdict: Verdict::Skipped,
                        reason: Some(format!("not class-determined: {e}")),
                    });
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub j: u32,
    pub k: u32,
    pub xi: usize,
    pub empirical: f64,
    pub empirical_im: f64,
    pub predicted: f64,
    pub sigma_dev: f64,
    pub verdict: Verdict,
}

/// Empirical `E[a^j b^k ξ(σ)]` against the Haar prediction (zero for
/// nontrivial `ξ`), for `j ≤ jmax`, `k ≤ kmax`.
pub fn moment_table(setup: &CstSetup, jmax: u32, kmax: u32, xi: usize) -> Result<Vec<MomentRow>> {
    if jmax + 2 * kmax > 16 {
        return invalid("moment table requires jmax + 2 kmax <= 16");
    }
    let n = setup.len();
    if n == 0 {
        return Err(Error::InsufficientData("no samples".into()));
    }
    let xis = setup.xi_values(xi)?;
    let trivial = xi == setup.extension.group.trivial_character();
    let mut rows = Vec::new();
    for k in 0..=kmax {
        for j in 0..=jmax {
            let vals: Vec<C64> = setup
                .samples
                .iter()
                .zip(&xis)
                .map(|(s, x)| x * (s.point.a.powi(j as i32) * s.point.b.powi(k as i32)))
                .collect();
            let mean = tree_sum(&vals) / n as f64;
            let var = if n > 1 {
                vals.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / (n - 1) as f64
            } else {
                0.0
            };
            let se = (var / n as f64).sqrt();
            let predicted = if trivial { setup.group.haar_moment(j, k, None)? } else { 0.0 };
            let diff = (mean - C64::new(predicted, 0.0)).norm();
            let sigma_dev = if se > 0.0 {
                diff / se
            } else if diff < 1e-9 {
                0.0
            } else {
                f64::INFINITY
            };
            rows.push(MomentRow {
                j,
                k,
                xi,
                empirical: mean.re,
                empirical_im: mean.im,
                predicted,
                sigma_dev,
                verdict: Verdict::from_bool(sigma_dev <= MOMENT_SIGMA),
            });
        }
    }
    Ok(rows)
}

/// Bin of `x` in `nb` equal bins over `range`; values within 1e-9 below an
/// edge count as above it so exactly representable edges bin consistently.
pub fn bin_index(x: f64, range: (f64, f64), nb: usize) -> usize {
    let t = (x - range.0) / (range.1 - range.0) * nb as f64 + 1e-9;
    (t.floor().max(0.0) as usize).min(nb - 1)
}

/// Counts over `[−4, 4] × [−2, 6]`, `grid[i][j]` for `a`-bin `i` and
/// `b`-bin `j`, optionally restricted to one `(component, artin)` cell.
pub fn histogram2d(setup: &CstSetup, bins: (usize, usize), filter: Option<(usize, usize)>) -> Result<Vec<Vec<u64>>> {
    let (nb1, nb2) = bins;
    if nb1 == 0 || nb2 == 0 {
        return invalid("histogram needs at least one bin per axis");
    }
    if let Some((c, x)) = filter {
        if c >= setup.group.num_components() || x >= setup.extension.order() {
            return invalid(format!("filter ({c}, {x}) names an unknown component or Artin class"));
        }
    }
    let mut grid = vec![vec![0u64; nb2]; nb1];
    for s in &setup.samples {
        if filter.is_some_and(|(c, x)| s.point.component != c || s.artin != x) {
            continue;
        }
        grid[bin_index(s.point.a, A_RANGE, nb1)][bin_index(s.point.b, B_RANGE, nb2)] += 1;
    }
    Ok(grid)
}

/// Monte Carlo estimate of `P(bin | component)` under Haar measure.
#[derive(Debug, Clone)]
pub struct ReferenceDistribution {
    pub group: GroupTag,
    pub bins: (usize, usize),
    pub samples: usize,
    /// `probs[c][i * nb2 + j]`.
    pub probs: Vec<Vec<f64>>,
}

impl ReferenceDistribution {
    pub fn new(group: &SatoTateGroup, bins: (usize, usize), samples: usize, seed: u64) -> Result<Self> {
        let (nb1, nb2) = bins;
        if nb1 == 0 || nb2 == 0 {
            return invalid("reference needs at least one bin per axis");
        }
        let comps = group.num_components();
        let chunk = 1 << 16;
        let counts = (0..samples.div_ceil(chunk))
            .into_par_iter()
            .map(|ci| {
                let mut local = vec![vec![0u64; nb1 * nb2]; comps];
                for i in ci * chunk..((ci + 1) * chunk).min(samples) {
                    let p = group.class_point(&group.sample_one(seed, i as u64));
                    local[p.component][bin_index(p.a, A_RANGE, nb1) * nb2 + bin_index(p.b, B_RANGE, nb2)] += 1;
                }
                local
            })
            .reduce(
                || vec![vec![0u64; nb1 * nb2]; comps],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        for (u, v) in x.iter_mut().zip(y) {
                            *u += v;
                        }
                    }
                    a
                },
            );
        let mut probs = Vec::with_capacity(comps);
        for (c, row) in counts.into_iter().enumerate() {
            let total: u64 = row.iter().sum();
            if total == 0 {
                return Err(Error::InsufficientData(format!(
                    "reference has no samples on component {}",
                    group.component_label(c)
                )));
            }
            probs.push(row.into_iter().map(|x| x as f64 / total as f64).collect());
        }
        Ok(Self { group: group.tag, bins, samples, probs })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiGroup {
    pub component: String,
    pub artin: String,
    pub observed: u64,
    pub expected: f64,
    pub cells: usize,
    pub statistic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub reduced: f64,
    pub limit: f64,
    pub reference_samples: usize,
    pub groups: Vec<ChiGroup>,
    pub verdict: Verdict,
}

/// Serpentine order of the bins so consecutive bins are adjacent.
fn serpentine(nb1: usize, nb2: usize) -> Vec<usize> {
    let mut order = Vec::with_capacity(nb1 * nb2);
    for i in 0..nb1 {
        if i % 2 == 0 {
            order.extend((0..nb2).map(|j| i * nb2 + j));
        } else {
            order.extend((0..nb2).rev().map(|j| i * nb2 + j));
        }
    }
    order
}

/// Merges consecutive `(observed, expected)` pairs until each cell expects at
/// least [`MIN_EXPECTED`]; a short tail joins the previous cell.
fn merge_cells(pairs: impl Iterator<Item = (u64, f64)>) -> Vec<(u64, f64)> {
    let mut out: Vec<(u64, f64)> = Vec::new();
    let mut cur = (0u64, 0.0f64);
    for (o, e) in pairs {
        cur.0 += o;
        cur.1 += e;
        if cur.1 >= MIN_EXPECTED {
            out.push(cur);
            cur = (0, 0.0);
        }
    }
    if cur.0 > 0 || cur.1 > 0.0 {
        match out.last_mut() {
            Some(last) => {
                last.0 += cur.0;
                last.1 += cur.1;
            }
            None => out.push(cur),
        }
    }
    out
}

/// χ² of the data against Haar × Chebotarev measure, cross-classified by
/// `(component, Artin class)` and binned in `(a, b)`.
pub fn chi_square_fit(setup: &CstSetup, reference: &ReferenceDistribution, limit: f64) -> Result<ChiSquareResult> {
    let n = setup.len();
    if n == 0 {
        return Err(Error::InsufficientData("no samples to fit".into()));
    }
    if reference.group != setup.group.tag {
        return invalid(format!("reference is for {}, setup is {}", reference.group, setup.group.tag));
    }
    let (nb1, nb2) = reference.bins;
    let comps = setup.group.num_components();
    let classes = setup.extension.order();
    let mut observed = vec![vec![0u64; nb1 * nb2]; comps * classes];
    for s in &setup.samples {
        let b = bin_index(s.point.a, A_RANGE, nb1) * nb2 + bin_index(s.point.b, B_RANGE, nb2);
        observed[s.point.component * classes + s.artin][b] += 1;
    }
    let weight = n as f64 / (comps * classes) as f64;
    let order = serpentine(nb1, nb2);
    let mut groups = Vec::new();
    let mut statistic = 0.0;
    let mut cells = 0;
    for c in 0..comps {
        for x in 0..classes {
            let obs = &observed[c * classes + x];
            let merged = merge_cells(order.iter().map(|&b| (obs[b], weight * reference.probs[c][b])));
            let stat: f64 = merged.iter().map(|&(o, e)| if e > 0.0 { (o as f64 - e).powi(2) / e } else { f64::INFINITY }).sum();
            statistic += stat;
            cells += merged.len();
            groups.push(ChiGroup {
                component: setup.group.component_label(c).to_string(),
                artin: setup.extension.class_label(x).to_string(),
                observed: merged.iter().map(|m| m.0).sum(),
                expected: merged.iter().map(|m| m.1).sum(),
                cells: merged.len(),
                statistic: stat,
            });
        }
    }
    if cells < 2 {
        return Err(Error::InsufficientData(format!(
            "{n} samples fill fewer than two χ² cells; increase pmax"
        )));
    }
    let dof = cells - 1;
    let reduced = statistic / dof as f64;
    Ok(ChiSquareResult {
        statistic,
        dof,
        reduced,
        limit,
        reference_samples: reference.samples,
        groups,
        verdict: Verdict::from_bool(reduced <= limit),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentFrequency {
    pub component: String,
    pub count: usize,
    pub expected: f64,
    pub sigma_dev: f64,
}

/// Component counts against the uniform law.
pub fn component_frequencies(setup: &CstSetup) -> Vec<ComponentFrequency> {
    let comps = setup.group.num_components();
    let n = setup.len() as f64;
    let mut counts = vec![0usize; comps];
    for s in &setup.samples {
        counts[s.point.component] += 1;
    }
    let q = 1.0 / comps as f64;
    let sd = (n * q * (1.0 - q)).sqrt();
    counts
        .into_iter()
        .enumerate()
        .map(|(c, count)| ComponentFrequency {
            component: setup.group.component_label(c).to_string(),
            count,
            expected: n * q,
            sigma_dev: if sd > 0.0 { (count as f64 - n * q) / sd } else { 0.0 },
        })
        .collect()
}

/// Knobs shared by real-data analysis and self-tests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisOptions {
    pub irrep_cutoff: u32,
    pub jmax: u32,
    pub kmax: u32,
    pub threshold_c: f64,
    pub chi2_limit: f64,
    pub bins: (usize, usize),
    pub mc_oversample: usize,
    pub reference_seed: u64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            irrep_cutoff: 3,
            jmax: 4,
            kmax: 2,
            threshold_c: DEFAULT_THRESHOLD_C,
            chi2_limit: DEFAULT_CHI2_LIMIT,
            bins: (20, 20),
            mc_oversample: 100,
            reference_seed: 0x00C0_FFEE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdicts {
    pub character_sums: bool,
    pub moments: bool,
    pub chisq: bool,
    pub components: bool,
    /// Monitored only; not part of `all`.
    pub halves: bool,
    pub all: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquidistReport {
    pub group: GroupTag,
    pub extension: String,
    pub n: usize,
    pub character_sums: Vec<CharSumRow>,
    pub moments: Vec<MomentRow>,
    pub chisq: Option<ChiSquareResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chisq_error: Option<String>,
    pub components: Vec<ComponentFrequency>,
    pub verdicts: Verdicts,
}

/// Runs every statistic. `reference` is built on demand when absent.
pub fn analyze(setup: &CstSetup, opts: &AnalysisOptions, reference: Option<&ReferenceDistribution>) -> Result<EquidistReport> {
    if setup.is_empty() {
        return Err(Error::InsufficientData("no samples".into()));
    }
    let irreps = list_irreps(&setup.group, opts.irrep_cutoff);
    let character_sums = character_sums(setup, &irreps, opts.threshold_c)?;
    let mut moments = Vec::new();
    for xi in 0..setup.extension.num_characters() {
        moments.extend(moment_table(setup, opts.jmax, opts.kmax, xi)?);
    }
    let owned;
    let reference = match reference {
        Some(r) => r,
        None => {
            let m = (opts.mc_oversample.max(1) * setup.len()).max(100_000);
            owned = ReferenceDistribution::new(&setup.group, opts.bins, m, opts.reference_seed)?;
            &owned
        }
    };
    let (chisq, chisq_error) = match chi_square_fit(setup, reference, opts.chi2_limit) {
        Ok(r) => (Some(r), None),
        Err(Error::InsufficientData(msg)) => (None, Some(msg)),
        Err(e) => return Err(e),
    };
    let components = component_frequencies(setup);
    let cs_ok = character_sums.iter().all(|r| r.verdict != Verdict::Fail);
    let mo_ok = moments.iter().all(|r| r.verdict == Verdict::Pass);
    let chi_ok = chisq.as_ref().is_some_and(|c| c.verdict == Verdict::Pass);
    let comp_ok = components.iter().all(|c| c.sigma_dev.abs() <= MOMENT_SIGMA);
    let halves = character_sums.iter().all(|r| r.halves_ok);
    Ok(EquidistReport {
        group: setup.group.tag,
        extension: setup.extension.name.clone(),
        n: setup.len(),
        character_sums,
        moments,
        chisq,
        chisq_error,
        components,
        verdicts: Verdicts {
            character_sums: cs_ok,
            moments: mo_ok,
            chisq: chi_ok,
            components: comp_ok,
            halves,
            all: cs_ok && mo_ok && chi_ok && comp_ok,
        },
    })
}

/// Haar data of `tag` with uniform Artin classes in `extension`, analyzed
/// against its own group.
pub fn self_test(
    tag: GroupTag,
    extension: &GaloisExt,
    n: usize,
    seed: u64,
    opts: &AnalysisOptions,
    reference: Option<&ReferenceDistribution>,
) -> Result<EquidistReport> {
    let setup = CstSetup::synthetic(SatoTateGroup::new(tag), extension.clone(), n, seed, ArtinAssignment::Uniform);
    analyze(&setup, opts, reference)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::ExtensionSpec;

    fn c4() -> GaloisExt {
        GaloisExt::new(&ExtensionSpec::default()).unwrap()
    }

    #[test]
    fn bins_are_clamped_and_edge_stable() {
        assert_eq!(bin_index(-4.0, A_RANGE, 20), 0);
        assert_eq!(bin_index(4.0, A_RANGE, 20), 19);
        assert_eq!(bin_index(0.0, A_RANGE, 20), 10);
        assert_eq!(bin_index(-1e-12, A_RANGE, 20), 10);
        assert_eq!(bin_index(2.0, B_RANGE, 20), 10);
    }

    #[test]
    fn merging_reaches_minimum_expected() {
        let cells = merge_cells([(1, 1.0), (0, 2.0), (3, 3.0), (2, 0.5)].into_iter());
        // (1 + 0 + 3, 6.0) closes a cell; the short tail (2, 0.5) joins it
        assert_eq!(cells, vec![(6, 6.5)]);
        assert_eq!(merge_cells([(2, 1.0)].into_iter()), vec![(2, 1.0)]);
    }

    #[test]
    fn trivial_pair_is_exactly_one() {
        let setup = CstSetup::synthetic(SatoTateGroup::new(GroupTag::JE3), c4(), 1234, 3, ArtinAssignment::Uniform);
        let irreps = list_irreps(&setup.group, 0);
        let row = character_sum(&setup, &irreps[0], 0, DEFAULT_THRESHOLD_C).unwrap();
        assert_eq!((row.re_s, row.im_s), (Some(1.0), Some(0.0)));
        assert_eq!(row.verdict, Verdict::Pass);
    }

    #[test]
    fn synthetic_primes_skip_ramified() {
        let setup = CstSetup::synthetic(SatoTateGroup::new(GroupTag::BC1), c4(), 5, 1, ArtinAssignment::Frobenius);
        let ps: Vec<u64> = setup.samples.iter().map(|s| s.p.unwrap()).collect();
        assert_eq!(ps, vec![7, 11, 13, 17, 19]);
        assert_eq!(setup.samples[0].artin, setup.extension.artin_class(7).unwrap());
    }

    #[test]
    fn empty_data_is_an_error() {
        let setup = CstSetup { group: SatoTateGroup::new(GroupTag::BC1), extension: c4(), samples: vec![], pmax: 0 };
        let r = ReferenceDistribution::new(&setup.group, (4, 4), 1000, 1).unwrap();
        assert!(matches!(chi_square_fit(&setup, &r, 1.5), Err(Error::InsufficientData(_))));
        assert!(moment_table(&setup, 1, 1, 0).is_err());
        assert!(moment_table(&setup, 10, 4, 0).is_err());
    }
}
