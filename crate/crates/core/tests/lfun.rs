use cstlab_core::arith::sieve_primes;
use cstlab_core::equidist::{ArtinAssignment, CstSetup};
use cstlab_core::galois::{ExtensionSpec, GaloisExt};
use cstlab_core::lfun::{bad_prime_correction, invertibility_scan, log_l_truncated, log_local_factor};
use cstlab_core::linalg::{MatN, C64};
use cstlab_core::stgroups::{GroupTag, SatoTateGroup};
use cstlab_core::strep::{euler_angles, list_irreps, rep_matrix};
use std::f64::consts::PI;

fn c4() -> GaloisExt {
    GaloisExt::new(&ExtensionSpec::Cyclotomic { modulus: 5, subgroup: vec![] }).unwrap()
}

#[test]
fn zeta_two_from_trivial_product() {
    let g = SatoTateGroup::new(GroupTag::BC1);
    let setup = CstSetup::synthetic_to(g, GaloisExt::trivial(), 1_000_000, 1, ArtinAssignment::Uniform);
    let triv = list_irreps(&setup.group, 1)[0];
    let v = log_l_truncated(&setup, &triv, 0, 2.0, 1_000_000).unwrap();
    assert_eq!(v.skipped_primes, vec![2, 3]);
    let corr = bad_prime_correction(&setup, 0, &v.skipped_primes, 2.0).unwrap();
    let zeta = (v.log_l() + corr).exp();
    assert!((zeta.re - PI * PI / 6.0).abs() < 1e-3, "{zeta}");
    assert!(zeta.im.abs() < 1e-12);
    assert!(v.tail_bound < 1e-6);
}

/// Primitive characters of conductor dividing 5, indexed by `χ(2) = i^k`.
/// The trivial one is `1` everywhere, so its series is `ζ`.
fn chi_mod5(k: usize, n: u64) -> C64 {
    if k == 0 {
        return C64::new(1.0, 0.0);
    }
    // discrete log base 2: 2^0=1, 2^1=2, 2^2=4, 2^3=3
    let log = match n % 5 {
        0 => return C64::new(0.0, 0.0),
        1 => 0,
        2 => 1,
        4 => 2,
        _ => 3,
    };
    C64::new(0.0, 1.0).powu((k * log) as u32)
}

#[test]
fn dirichlet_values_match_series() {
    let g = SatoTateGroup::new(GroupTag::BC1);
    let ext = c4();
    let setup = CstSetup::synthetic_to(g, ext.clone(), 200_000, 2, ArtinAssignment::Frobenius);
    let triv = list_irreps(&setup.group, 1)[0];
    let i = C64::new(0.0, 1.0);
    for xi in 0..ext.num_characters() {
        let at2 = ext.char_eval(xi, ext.artin_class(2).unwrap()).unwrap();
        let k = (0..4).find(|&k| (i.powu(k as u32) - at2).norm() < 1e-12).unwrap();
        let series: C64 = (1..=2_000_000u64).rev().map(|n| chi_mod5(k, n) / (n as f64 * n as f64)).sum();
        let v = log_l_truncated(&setup, &triv, xi, 2.0, 200_000).unwrap();
        assert_eq!(v.skipped_primes, vec![2, 3, 5]);
        let corr = bad_prime_correction(&setup, xi, &v.skipped_primes, 2.0).unwrap();
        let l = (v.log_l() + corr).exp();
        assert!((l - series).norm() < 1e-3, "xi = {xi}: {l} vs {series}");
    }
}

#[test]
fn angles_reproduce_determinant() {
    let p = 11u64;
    let s = 1.3;
    let xi = C64::from_polar(1.0, 0.4);
    for tag in [GroupTag::BC2, GroupTag::CC2, GroupTag::JE3] {
        let g = SatoTateGroup::new(tag);
        for irrep in list_irreps(&g, 2) {
            for el in g.sample_haar(5, 9) {
                let m = rep_matrix(&g, &irrep, &el).unwrap();
                let d = m.nrows();
                let t = (p as f64).powf(-s);
                let a = MatN::identity(d, d) - m * (xi * t);
                let via_det = -a.determinant().ln();
                let angles = euler_angles(&g, &irrep, &el).unwrap();
                let via_angles = log_local_factor(xi, &angles, p, s);
                // logs agree modulo 2πi; compare exponentials
                assert!((via_det.exp() - via_angles.exp()).norm() < 1e-10, "{tag} {irrep}");
            }
        }
    }
}

#[test]
fn real_characters_give_real_logs() {
    let g = SatoTateGroup::new(GroupTag::BC1);
    let setup = CstSetup::synthetic_to(g, c4(), 20_000, 3, ArtinAssignment::Frobenius);
    let ext = &setup.extension;
    for irrep in list_irreps(&setup.group, 2) {
        for xi in ext.real_characters() {
            let v = log_l_truncated(&setup, &irrep, xi, 1.5, 20_000).unwrap();
            assert!(v.im_log_l.abs() < 1e-9, "{irrep} x {xi}: {}", v.im_log_l);
        }
    }
}

#[test]
fn scan_is_consistent_with_single_values() {
    let g = SatoTateGroup::new(GroupTag::EC1);
    let setup = CstSetup::synthetic_to(g, c4(), 100_000, 4, ArtinAssignment::Frobenius);
    let irrep = list_irreps(&setup.group, 2)[2];
    let scan = invertibility_scan(&setup, &irrep, 1, &[1.1, 2.0], &[1000, 10_000, 100_000]).unwrap();
    assert_eq!(scan.rows.len(), 6);
    for r in &scan.rows {
        let v = log_l_truncated(&setup, &irrep, 1, r.s, r.x).unwrap();
        assert!((v.re_log_l - r.re_log_l).abs() < 1e-12);
        assert!((v.im_log_l - r.im_log_l).abs() < 1e-12);
    }
    assert!(scan.min_modulus.unwrap() > 1e-3);
    assert!(scan.alarms.is_empty(), "{:?}", scan.alarms);
}

#[test]
fn rejects_s_near_one_and_x_beyond_data() {
    let g = SatoTateGroup::new(GroupTag::BC1);
    let setup = CstSetup::synthetic_to(g, c4(), 1000, 5, ArtinAssignment::Frobenius);
    let triv = list_irreps(&setup.group, 1)[0];
    let err = log_l_truncated(&setup, &triv, 0, 1.01, 1000).unwrap_err().to_string();
    assert!(err.contains("tail bound"), "{err}");
    assert!(log_l_truncated(&setup, &triv, 0, 2.0, 2000).is_err());
    assert!(log_l_truncated(&setup, &triv, 9, 2.0, 1000).is_err());
    // primes below the sieve start are skipped, not silently dropped
    let v = log_l_truncated(&setup, &triv, 0, 2.0, 1000).unwrap();
    assert_eq!(v.primes_used + v.skipped_primes.len(), sieve_primes(1000).len());
}
