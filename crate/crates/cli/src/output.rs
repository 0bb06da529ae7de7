use anyhow::{Context, Result};
use cstlab_core::equidist::{CharSumRow, EquidistReport, MomentRow, Verdicts};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Tables {
    pub character_sums: Vec<CharSumRow>,
    pub moments: Vec<MomentRow>,
    pub chisq: Option<cstlab_core::equidist::ChiSquareResult>,
    pub components: Vec<cstlab_core::equidist::ComponentFrequency>,
}

/// The JSON document written by `analyze` and read by `report`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ReportFile {
    pub config_hash: String,
    pub n: usize,
    pub group: String,
    pub extension: String,
    #[serde(default)]
    pub bad_primes: Vec<u64>,
    #[serde(default)]
    pub ramified: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chisq_error: Option<String>,
    pub tables: Tables,
    pub verdicts: Verdicts,
}

impl ReportFile {
    pub fn new(config_hash: String, r: EquidistReport, bad_primes: Vec<u64>, ramified: Vec<u64>) -> Self {
        Self {
            config_hash,
            n: r.n,
            group: r.group.to_string(),
            extension: r.extension,
            bad_primes,
            ramified,
            chisq_error: r.chisq_error,
            tables: Tables {
                character_sums: r.character_sums,
                moments: r.moments,
                chisq: r.chisq,
                components: r.components,
            },
            verdicts: r.verdicts,
        }
    }
}

pub fn character_sums_csv(rows: &[CharSumRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["irrep", "xi", "re_S", "im_S", "threshold", "verdict"])?;
    for r in rows {
        w.write_record([
            r.irrep.clone(),
            r.xi.to_string(),
            r.re_s.map(|v| v.to_string()).unwrap_or_default(),
            r.im_s.map(|v| v.to_string()).unwrap_or_default(),
            r.threshold.to_string(),
            r.verdict.as_str().to_string(),
        ])?;
    }
    Ok(w.into_inner()?)
}

pub fn moments_csv(rows: &[MomentRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["j", "k", "xi", "empirical", "predicted", "sigma_dev"])?;
    for r in rows {
        w.write_record([
            r.j.to_string(),
            r.k.to_string(),
            r.xi.to_string(),
            r.empirical.to_string(),
            r.predicted.to_string(),
            r.sigma_dev.to_string(),
        ])?;
    }
    Ok(w.into_inner()?)
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Human-readable summary ending in one verdict line per statistic.
pub fn render_text(r: &ReportFile) -> String {
    let mut s = String::new();
    let t = &r.tables;
    let _ = writeln!(s, "group {}  extension {}  n = {}", r.group, r.extension, r.n);
    let _ = writeln!(s, "config {}", r.config_hash);
    if !r.bad_primes.is_empty() {
        let _ = writeln!(s, "omitted primes (bad reduction): {:?}", r.bad_primes);
    }
    if !r.ramified.is_empty() {
        let _ = writeln!(s, "omitted primes (ramified): {:?}", r.ramified);
    }
    let failing: Vec<&CharSumRow> = t.character_sums.iter().filter(|c| c.verdict.as_str() == "fail").collect();
    let skipped = t.character_sums.iter().filter(|c| c.verdict.as_str() == "skipped").count();
    let _ = writeln!(
        s,
        "character sums: {} pairs, {} failing, {} skipped",
        t.character_sums.len(),
        failing.len(),
        skipped
    );
    for c in failing {
        let _ = writeln!(s, "  {} x xi{}: |S| = {:.4} > {:.4}", c.irrep, c.xi, c.abs_s.unwrap_or(f64::NAN), c.threshold);
    }
    let bad_moments: Vec<&MomentRow> = t.moments.iter().filter(|m| m.verdict.as_str() == "fail").collect();
    let _ = writeln!(s, "moments: {} rows, {} beyond tolerance", t.moments.len(), bad_moments.len());
    for m in bad_moments {
        let _ = writeln!(
            s,
            "  E[a^{} b^{} xi{}] = {:.4}, Haar {:.4} ({:+.1} sigma)",
            m.j, m.k, m.xi, m.empirical, m.predicted, m.sigma_dev
        );
    }
    match &t.chisq {
        Some(c) => {
            let _ = writeln!(
                s,
                "chi-square: {:.1} on {} dof, reduced {:.3} (limit {})",
                c.statistic, c.dof, c.reduced, c.limit
            );
            if !r.verdicts.chisq {
                let _ = writeln!(s, "  {:<14} {:<10} {:>9} {:>11} {:>6} {:>10}", "component", "artin", "observed", "expected", "cells", "chi2");
                for g in &c.groups {
                    let _ = writeln!(
                        s,
                        "  {:<14} {:<10} {:>9} {:>11.1} {:>6} {:>10.1}",
                        g.component, g.artin, g.observed, g.expected, g.cells, g.statistic
                    );
                }
            }
        }
        None => {
            let _ = writeln!(s, "chi-square: not computed ({})", r.chisq_error.as_deref().unwrap_or("no data"));
        }
    }
    for c in &t.components {
        let _ = writeln!(s, "component {}: {} (expected {:.1}, {:+.2} sigma)", c.component, c.count, c.expected, c.sigma_dev);
    }
    let v = &r.verdicts;
    let _ = writeln!(s, "verdict character_sums {}", mark(v.character_sums));
    let _ = writeln!(s, "verdict moments {}", mark(v.moments));
    let _ = writeln!(s, "verdict chisq {}", mark(v.chisq));
    let _ = writeln!(s, "verdict components {}", mark(v.components));
    let _ = writeln!(s, "monitor halves {}", if v.halves { "ok" } else { "growth" });
    let _ = writeln!(s, "verdict all {}", mark(v.all));
    s
}
