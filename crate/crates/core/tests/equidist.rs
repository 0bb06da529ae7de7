use cstlab_core::equidist::{
    analyze, character_sum, chi_square_fit, histogram2d, moment_table, self_test, AnalysisOptions,
    ArtinAssignment, CstSetup, ReferenceDistribution, Verdict, A_RANGE, B_RANGE,
};
use cstlab_core::galois::{ExtensionSpec, GaloisExt};
use cstlab_core::stgroups::{ClassPoint, GroupTag, SatoTateGroup};
use cstlab_core::strep::{list_irreps, IrrepFamily};
use std::time::Instant;

fn c4() -> GaloisExt {
    GaloisExt::new(&ExtensionSpec::default()).unwrap()
}

fn quick_opts() -> AnalysisOptions {
    AnalysisOptions { irrep_cutoff: 2, ..AnalysisOptions::default() }
}

#[test]
fn moment_oracle_agreement() {
    let setup = CstSetup::synthetic(SatoTateGroup::new(GroupTag::BC1), c4(), 50_000, 9, ArtinAssignment::Uniform);
    let rows = moment_table(&setup, 4, 2, 0).unwrap();
    for r in &rows {
        let exact = setup.group.haar_moment(r.j, r.k, None).unwrap();
        assert!((r.predicted - exact).abs() < 1e-8);
        assert!(r.sigma_dev <= 4.0, "{r:?}");
    }
    let r00 = rows.iter().find(|r| r.j == 0 && r.k == 0).unwrap();
    assert_eq!((r00.empirical, r00.predicted), (1.0, 1.0));
    let r20 = rows.iter().find(|r| r.j == 2 && r.k == 0).unwrap();
    assert!((r20.predicted - 2.0).abs() < 1e-10);
    for r in moment_table(&setup, 1, 0, 1).unwrap() {
        assert_eq!(r.predicted, 0.0);
    }
}

#[test]
fn character_sum_envelope_calibration() {
    // ProductSym(1, 0) on B_C1 paired with a nontrivial ξ of C4
    let g = SatoTateGroup::new(GroupTag::BC1);
    let irrep = *list_irreps(&g, 1).iter().find(|r| r.family == IrrepFamily::ProductSym { m: 1, n: 0 }).unwrap();
    let mut passes = 0;
    for seed in 0..40 {
        let setup = CstSetup::synthetic(g.clone(), c4(), 20_000, seed, ArtinAssignment::Uniform);
        let row = character_sum(&setup, &irrep, 1, 4.0).unwrap();
        assert!((row.threshold - 4.0 * 2.0 / (20_000f64).sqrt()).abs() < 1e-12);
        passes += (row.verdict == Verdict::Pass) as usize;
    }
    assert!(passes >= 39, "{passes}/40");
}

#[test]
fn histogram_partitions_and_respects_feasibility() {
    let g = SatoTateGroup::new(GroupTag::BC1);
    let setup = CstSetup::synthetic(g, c4(), 20_000, 2, ArtinAssignment::Uniform);
    let total: u64 = histogram2d(&setup, (20, 20), None).unwrap().iter().flatten().sum();
    assert_eq!(total, 20_000);
    assert_eq!(histogram2d(&setup, (1, 1), None).unwrap(), vec![vec![20_000]]);
    let filtered: u64 = histogram2d(&setup, (7, 5), Some((0, 2))).unwrap().iter().flatten().sum();
    assert_eq!(filtered as usize, setup.samples.iter().filter(|s| s.artin == 2).count());
    assert!(histogram2d(&setup, (4, 4), Some((1, 0))).is_err());

    // a cell is feasible iff some (θ1, θ2) lands in it
    let (nb1, nb2) = (20, 20);
    let mut feasible = vec![vec![false; nb2]; nb1];
    let m = 800;
    for i in 0..=m {
        for j in 0..=m {
            let (c1, c2) = (2.0 * (std::f64::consts::PI * i as f64 / m as f64).cos(), 2.0 * (std::f64::consts::PI * j as f64 / m as f64).cos());
            let p = ClassPoint { a: c1 + c2, b: 2.0 + c1 * c2, component: 0 };
            let bi = cstlab_core::equidist::bin_index(p.a, A_RANGE, nb1);
            let bj = cstlab_core::equidist::bin_index(p.b, B_RANGE, nb2);
            feasible[bi][bj] = true;
        }
    }
    let grid = histogram2d(&setup, (nb1, nb2), None).unwrap();
    for i in 0..nb1 {
        for j in 0..nb2 {
            if !feasible[i][j] {
                assert_eq!(grid[i][j], 0, "infeasible cell ({i}, {j}) has data");
            }
        }
    }
}

#[test]
fn mismatch_is_detected() {
    let data = CstSetup::synthetic(SatoTateGroup::new(GroupTag::BC1), c4(), 20_000, 4, ArtinAssignment::Uniform);
    let model = CstSetup { group: SatoTateGroup::new(GroupTag::EC1), extension: data.extension.clone(), samples: data.samples.clone(), pmax: data.pmax };
    let r = ReferenceDistribution::new(&model.group, (20, 20), 2_000_000, 5).unwrap();
    let fit = chi_square_fit(&model, &r, 1.5).unwrap();
    assert!(fit.reduced > 3.0, "{}", fit.reduced);
    assert_eq!(fit.verdict, Verdict::Fail);
}

#[test]
fn chi_square_is_order_invariant() {
    let g = SatoTateGroup::new(GroupTag::CC2);
    let mut setup = CstSetup::synthetic(g, c4(), 10_000, 6, ArtinAssignment::Uniform);
    let r = ReferenceDistribution::new(&setup.group, (20, 20), 1_000_000, 8).unwrap();
    let a = chi_square_fit(&setup, &r, 1.5).unwrap();
    setup.samples.reverse();
    setup.samples.swap(3, 9000);
    let b = chi_square_fit(&setup, &r, 1.5).unwrap();
    assert_eq!(a, b);
}

#[test]
fn self_tests_pass_on_own_groups() {
    let ext = c4();
    for tag in GroupTag::ALL {
        let t = Instant::now();
        let rep = self_test(tag, &ext, 20_000, 7, &quick_opts(), None).unwrap();
        assert!(rep.verdicts.all, "{tag}: {:?}", rep.verdicts);
        eprintln!("{tag}: {:?}", t.elapsed());
    }
}

#[test]
fn self_test_report_is_reproducible() {
    let ext = c4();
    let a = serde_json::to_string(&self_test(GroupTag::EC1, &ext, 1000, 7, &quick_opts(), None).unwrap()).unwrap();
    let b = serde_json::to_string(&self_test(GroupTag::EC1, &ext, 1000, 7, &quick_opts(), None).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn b_c2_extension_characters_on_synthetic_data() {
    let ext = c4();
    let rep = self_test(GroupTag::BC2, &ext, 20_000, 7, &quick_opts(), None).unwrap();
    let ext_rows: Vec<_> = rep.character_sums.iter().filter(|r| r.irrep.starts_with("rho_2^")).collect();
    assert!(!ext_rows.is_empty());
    assert!(ext_rows.iter().all(|r| r.verdict == Verdict::Pass));
    assert!(rep.character_sums.iter().all(|r| r.verdict != Verdict::Skipped));
}

#[test]
fn j_e6_component_frequencies() {
    let rep = self_test(GroupTag::JE6, &c4(), 100_000, 7, &AnalysisOptions { irrep_cutoff: 1, ..Default::default() }, None).unwrap();
    assert_eq!(rep.components.len(), 12);
    assert!(rep.components.iter().all(|c| c.sigma_dev.abs() <= 4.0));
}

#[test]
fn analysis_of_class_only_data_skips_undetermined_pairs() {
    // drop the elements: only (a, b, component) survive
    let mut setup = CstSetup::synthetic(SatoTateGroup::new(GroupTag::BC1), c4(), 5000, 1, ArtinAssignment::Uniform);
    for s in &mut setup.samples {
        s.element = setup.group.class_candidates(&s.point)[0];
        s.element_known = false;
    }
    let rep = analyze(&setup, &quick_opts(), None).unwrap();
    let skipped: Vec<_> = rep.character_sums.iter().filter(|r| r.verdict == Verdict::Skipped).collect();
    assert!(skipped.iter().all(|r| r.reason.as_deref().unwrap().contains("not class-determined")));
    assert!(skipped.iter().any(|r| r.irrep == "rho_1,0"));
    assert!(!rep.character_sums.iter().any(|r| r.irrep == "rho_1,1" && r.verdict == Verdict::Skipped));
}
