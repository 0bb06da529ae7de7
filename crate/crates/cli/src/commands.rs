use crate::output::{self, write_atomic, ReportFile};
use crate::{AnalyzeArgs, DataArgs, HaarArgs, LfunArgs, ReportArgs, SelftestArgs};
use anyhow::{anyhow, bail, Context, Result};
use cstlab_core::arith::{build_dataset, Dataset, Surface};
use cstlab_core::config::ExperimentConfig;
use cstlab_core::equidist::{self, CstSetup};
use cstlab_core::galois::{check_disjoint, Disjointness, ExtensionSpec, GaloisExt, LField};
use cstlab_core::lfun::invertibility_scan;
use cstlab_core::registry::{lookup, registry};
use cstlab_core::stgroups::{GroupTag, SatoTateGroup};
use cstlab_core::strep::list_irreps;
use log::{info, warn};
use serde::Serialize;
use std::fmt::Display;
use std::fmt::Write as _;
use std::path::Path;

/// Replaces a config value by a command-line value, noting the conflict.
fn override_with<T: PartialEq + Display + Clone>(slot: &mut T, cli: Option<&T>, key: &str) {
    if let Some(v) = cli {
        if *slot != *v {
            info!("note: command line {key} = {v} overrides config value {slot}");
        }
        *slot = v.clone();
    }
}

fn load_config(a: &DataArgs) -> Result<ExperimentConfig> {
    let mut cfg = match (&a.config, &a.registry) {
        (Some(path), _) => {
            ExperimentConfig::load(path).with_context(|| format!("loading config {}", path.display()))?
        }
        (None, Some(_)) => ExperimentConfig {
            surface: lookup(a.registry.as_deref().unwrap_or_default())?.surface,
            extension: ExtensionSpec::default(),
            lfield: Default::default(),
            run: Default::default(),
        },
        (None, None) => bail!("pass --config <file.toml> or --registry <name>"),
    };
    if let Some(name) = &a.registry {
        let entry = lookup(name)?;
        if a.config.is_some() && (cfg.surface != entry.surface || cfg.lfield != entry.lfield) {
            info!("note: --registry {} overrides [surface] and [lfield] of the config", entry.name);
        }
        cfg.surface = entry.surface;
        cfg.lfield = entry.lfield;
    }
    override_with(&mut cfg.run.pmax, a.pmax.as_ref(), "pmax");
    if let Some(c) = &a.cache {
        if cfg.run.cache.as_ref().is_some_and(|old| old != c) {
            info!("note: command line cache = {} overrides config value", c.display());
        }
        cfg.run.cache = Some(c.clone());
    }
    if let Some(o) = &a.out {
        if cfg.run.output_dir != *o {
            info!("note: command line output dir = {} overrides config value {}", o.display(), cfg.run.output_dir.display());
        }
        cfg.run.output_dir = o.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn count(a: &DataArgs) -> Result<bool> {
    let cfg = load_config(a)?;
    let surface = Surface::new(&cfg.surface)?;
    let path = cfg.run.cache_path();
    let (rows, cached) = cstlab_core::arith::load_or_count(&surface, cfg.run.pmax, &path)?;
    let sum = output::sha256_file(&path)?;
    info!(
        "{} {} rows for p <= {} in {}",
        if cached { "read" } else { "counted" },
        rows.len(),
        cfg.run.pmax,
        path.display()
    );
    println!("{sum}  {}", path.display());
    Ok(true)
}

struct Loaded {
    cfg: ExperimentConfig,
    setup: CstSetup,
    dataset: Dataset,
}

fn load_data(a: &DataArgs, group: Option<GroupTag>, count: bool) -> Result<Loaded> {
    let cfg = load_config(a)?;
    let tag = match (group, cfg.surface.claimed_group) {
        (Some(g), Some(c)) if g != c => {
            info!("note: command line group = {g} overrides claimed_group = {c}");
            g
        }
        (Some(g), _) => g,
        (None, Some(c)) => c,
        (None, None) => bail!("no claimed_group in [surface]; pass --group <TAG>"),
    };
    let surface = Surface::new(&cfg.surface)?;
    let k = GaloisExt::new(&cfg.extension)?;
    let l = LField::new(&cfg.lfield)?;
    if let Disjointness::Warning(w) = check_disjoint(&k, &l) {
        warn!("{w}");
    }
    let group = SatoTateGroup::new(tag);
    if l.degree() != group.num_components() {
        warn!("[lfield] has degree {} but {tag} has {} components", l.degree(), group.num_components());
    }
    let cache = cfg.run.cache_path();
    if !cache.exists() && !count {
        let how = match (&a.config, &a.registry) {
            (Some(c), _) => format!("--config {}", c.display()),
            (None, Some(r)) => format!("--registry {r}"),
            (None, None) => String::new(),
        };
        bail!(
            "no Frobenius cache at {}; run `cstlab count {how}` first, or pass --count to count now",
            cache.display()
        );
    }
    let dataset = build_dataset(&surface, &k, &l, cfg.run.pmax, Some(&cache))?;
    info!(
        "{} primes ({}), {} bad, {} ramified",
        dataset.data.len(),
        if dataset.from_cache { "cached" } else { "counted" },
        dataset.bad_primes.len(),
        dataset.ramified.len()
    );
    let setup = CstSetup::from_data(group, k, &dataset.data, cfg.run.pmax)?;
    Ok(Loaded { cfg, setup, dataset })
}

pub fn analyze(a: &AnalyzeArgs) -> Result<bool> {
    let mut loaded = load_data(&a.data, a.group, a.count)?;
    let run = &mut loaded.cfg.run;
    override_with(&mut run.irrep_cutoff, a.cutoff.as_ref(), "cutoff");
    override_with(&mut run.threshold_c, a.threshold_c.as_ref(), "threshold_c");
    override_with(&mut run.chi2_limit, a.chi2_limit.as_ref(), "chi2_limit");
    loaded.cfg.validate()?;
    let report = equidist::analyze(&loaded.setup, &loaded.cfg.run.analysis(), None)?;
    let file = ReportFile::new(
        loaded.cfg.hash()?,
        report,
        loaded.dataset.bad_primes.clone(),
        loaded.dataset.ramified.clone(),
    );
    let dir = &loaded.cfg.run.output_dir;
    write_atomic(&dir.join("report.json"), &serde_json::to_vec_pretty(&file)?)?;
    write_atomic(&dir.join("character_sums.csv"), &output::character_sums_csv(&file.tables.character_sums)?)?;
    write_atomic(&dir.join("moments.csv"), &output::moments_csv(&file.tables.moments)?)?;
    info!("wrote report.json, character_sums.csv and moments.csv to {}", dir.display());
    print!("{}", output::render_text(&file));
    Ok(file.verdicts.all)
}

#[derive(Serialize)]
struct LfunFile {
    config_hash: String,
    group: String,
    extension: String,
    bad_primes: Vec<u64>,
    ramified: Vec<u64>,
    scans: Vec<cstlab_core::lfun::LScanReport>,
    skipped: Vec<String>,
}

pub fn lfun(a: &LfunArgs) -> Result<bool> {
    let mut loaded = load_data(&a.data, a.group, a.count)?;
    let run = &mut loaded.cfg.run;
    override_with(&mut run.irrep_cutoff, a.cutoff.as_ref(), "cutoff");
    if !a.s.is_empty() {
        info!("note: command line s grid {:?} overrides config value {:?}", a.s, run.s_grid);
        run.s_grid = a.s.clone();
    }
    if !a.x.is_empty() {
        info!("note: command line X grid {:?} overrides config value {:?}", a.x, run.x_grid);
        run.x_grid = a.x.clone();
    }
    loaded.cfg.validate()?;
    let setup = &loaded.setup;
    let run = &loaded.cfg.run;
    let xs = run.x_values();
    let triv_xi = setup.extension.group.trivial_character();
    let mut scans = Vec::new();
    let mut skipped = Vec::new();
    for irrep in list_irreps(&setup.group, run.irrep_cutoff) {
        for xi in 0..setup.extension.num_characters() {
            if irrep.is_trivial() && xi == triv_xi {
                continue;
            }
            if let Err(e) = setup.evaluable(&irrep, irrep.dimension as u32) {
                skipped.push(format!("{irrep} x xi{xi}: {e}"));
                continue;
            }
            scans.push(invertibility_scan(setup, &irrep, xi, &run.s_grid, &xs)?);
        }
    }
    let mut ok = true;
    let mut text = String::new();
    for s in &scans {
        let min = s.min_modulus.unwrap_or(f64::NAN);
        let _ = writeln!(text, "{} x xi{}: min |L_X| = {min:.4}", s.irrep, s.xi);
        for alarm in &s.alarms {
            ok = false;
            let _ = writeln!(text, "  ALARM {alarm}");
        }
    }
    for s in &skipped {
        let _ = writeln!(text, "skipped {s}");
    }
    let _ = writeln!(text, "verdict lfun {}", if ok { "PASS" } else { "FAIL" });
    let file = LfunFile {
        config_hash: loaded.cfg.hash()?,
        group: setup.group.tag.to_string(),
        extension: setup.extension.name.clone(),
        bad_primes: loaded.dataset.bad_primes.clone(),
        ramified: loaded.dataset.ramified.clone(),
        scans,
        skipped,
    };
    let path = run.output_dir.join("lfun.json");
    write_atomic(&path, &serde_json::to_vec_pretty(&file)?)?;
    info!("wrote {}", path.display());
    print!("{text}");
    Ok(ok)
}

pub fn selftest(a: &SelftestArgs) -> Result<bool> {
    let tags: Vec<GroupTag> = if a.group.eq_ignore_ascii_case("all") {
        GroupTag::ALL.to_vec()
    } else {
        vec![a.group.parse()?]
    };
    let ext = GaloisExt::new(&ExtensionSpec::Cyclotomic { modulus: a.modulus, subgroup: vec![] })?;
    let mut opts = equidist::AnalysisOptions::default();
    if let Some(c) = a.cutoff {
        opts.irrep_cutoff = c;
    }
    let mut all = true;
    let mut reports = Vec::new();
    for tag in tags {
        let r = equidist::self_test(tag, &ext, a.n, a.seed, &opts, None)?;
        let worst = r
            .character_sums
            .iter()
            .filter(|c| !c.trivial)
            .filter_map(|c| c.abs_s.map(|s| s / c.threshold))
            .fold(0.0, f64::max);
        let reduced = r.chisq.as_ref().map_or(f64::NAN, |c| c.reduced);
        println!(
            "{tag:<8} n={} seed={} {} (max |S|/threshold {worst:.3}, reduced chi2 {reduced:.3})",
            a.n,
            a.seed,
            if r.verdicts.all { "PASS" } else { "FAIL" }
        );
        all &= r.verdicts.all;
        reports.push(r);
    }
    if let Some(path) = &a.out {
        write_atomic(path, &serde_json::to_vec_pretty(&reports)?)?;
    }
    Ok(all)
}

pub fn haar(a: &HaarArgs) -> Result<bool> {
    let g = SatoTateGroup::new(a.group);
    let samples = g.sample_haar(a.n, a.seed);
    let points: Vec<_> = samples.iter().map(|e| g.class_point(e)).collect();
    if let Some(path) = &a.out {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["component", "a", "b"])?;
        for p in &points {
            w.write_record([g.component_label(p.component).to_string(), p.a.to_string(), p.b.to_string()])?;
        }
        write_atomic(path, &w.into_inner()?)?;
        info!("wrote {} samples to {}", points.len(), path.display());
    }
    let mut ok = true;
    println!("j,k,quadrature,monte_carlo,sigma_dev");
    for j in 0..=a.jmax {
        for k in 0..=a.kmax {
            let exact = g.haar_moment(j, k, None)?;
            let vals: Vec<f64> = points.iter().map(|p| p.a.powi(j as i32) * p.b.powi(k as i32)).collect();
            let n = vals.len() as f64;
            let mean = vals.iter().sum::<f64>() / n;
            let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
            let se = (var / n).sqrt();
            let dev = if se > 0.0 { (mean - exact) / se } else { 0.0 };
            ok &= dev.abs() <= equidist::MOMENT_SIGMA;
            println!("{j},{k},{exact},{mean},{dev:.3}");
        }
    }
    Ok(ok)
}

pub fn report(a: &ReportArgs) -> Result<bool> {
    let path = match (&a.input, &a.config) {
        (Some(p), _) => p.clone(),
        (None, Some(c)) => ExperimentConfig::load(c)?.run.output_dir.join("report.json"),
        (None, None) => bail!("pass --input <report.json> or --config <file.toml>"),
    };
    let file = read_report(&path)?;
    print!("{}", output::render_text(&file));
    Ok(file.verdicts.all)
}

fn read_report(path: &Path) -> Result<ReportFile> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_slice(&bytes).map_err(|e| anyhow!("{} is not an analysis report: {e}", path.display()))
}

pub fn registry_list() -> Result<bool> {
    for e in registry() {
        println!(
            "{:<16} {:<8} lfield={:<28} {}{}",
            e.name,
            e.claimed_group().to_string(),
            format!("{:?}", e.lfield),
            e.description,
            if e.experimental { " [experimental]" } else { "" }
        );
    }
    Ok(true)
}

pub fn registry_show(name: &str) -> Result<bool> {
    let e = lookup(name)?;
    let cfg = ExperimentConfig {
        surface: e.surface.clone(),
        extension: ExtensionSpec::default(),
        lfield: e.lfield.clone(),
        run: Default::default(),
    };
    println!("# {}: {}", e.name, e.description);
    println!("# claimed group {} ({})", e.claimed_group(), e.claimed_group().group_name());
    println!("# component rule: {}", e.component_rule);
    if e.experimental {
        println!("# experimental: the claimed group is not established; check it with `cstlab analyze`");
    }
    print!("{}", cfg.to_toml()?);
    Ok(true)
}
