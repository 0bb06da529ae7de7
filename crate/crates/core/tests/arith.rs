use cstlab_core::arith::count::{EllipticCurve, Genus2Curve};
use cstlab_core::arith::modular::gcd;
use cstlab_core::arith::{build_dataset, load_or_count, sieve_primes, Surface, SurfaceKind, SurfaceSpec};
use cstlab_core::galois::{ExtensionSpec, GaloisExt, LField, LFieldSpec};
use cstlab_core::registry::{registry, E11A1, E32A2, E37A1, E389A1, G2_EVEN_SEXTIC};
use cstlab_core::Error;
use proptest::prelude::*;

mod common;
use common::{naive_elliptic_count, naive_genus2_fp, naive_genus2_fp2};

#[test]
fn elliptic_counts_match_enumeration() {
    for e in [E37A1, E11A1, E32A2, E389A1, [1, 0, 0, -1, 0]] {
        let c = EllipticCurve::new(e).unwrap();
        for p in sieve_primes(200).into_iter().filter(|&p| p > 3 && c.has_good_reduction(p)) {
            let expect = p as i64 + 1 - naive_elliptic_count(&e, p);
            assert_eq!(c.trace(p).unwrap(), expect, "{e:?} at {p}");
        }
    }
}

#[test]
fn genus2_counts_match_enumeration() {
    let curves: [&[i64]; 3] = [&G2_EVEN_SEXTIC, &[1, 0, 0, 0, 0, 1], &[-1, 2, 0, 1, -3, 0, 2]];
    for f in curves {
        let c = Genus2Curve::new(f.to_vec()).unwrap();
        for p in sieve_primes(200).into_iter().filter(|&p| p > 3 && c.has_good_reduction(p)) {
            assert_eq!(c.count_fp(p).unwrap(), naive_genus2_fp(f, p), "{f:?} over F_{p}");
            if p <= 61 {
                assert_eq!(c.count_fp2(p).unwrap(), naive_genus2_fp2(f, p), "{f:?} over F_{p}^2");
            }
        }
    }
}

#[test]
fn cm_curve_vanishes_at_inert_primes() {
    let c = EllipticCurve::new(E32A2).unwrap();
    for p in sieve_primes(10_000).into_iter().filter(|&p| p > 3 && p % 4 == 3) {
        assert_eq!(c.trace(p).unwrap(), 0, "p = {p}");
    }
}

#[test]
fn x5_plus_1_trace_vanishes_when_fifth_powers_biject() {
    let c = Genus2Curve::new(vec![1, 0, 0, 0, 0, 1]).unwrap();
    for p in sieve_primes(2000).into_iter().filter(|&p| p > 5 && gcd(5, p - 1) == 1) {
        assert_eq!(c.count_fp(p).unwrap(), p as i64 + 1, "p = {p}");
    }
}

#[test]
fn registry_surfaces_satisfy_weil_bounds() {
    for entry in registry() {
        let s = Surface::new(&entry.surface).unwrap();
        let pmax = if matches!(entry.surface.kind, SurfaceKind::Genus2(_)) { 300 } else { 5000 };
        let k = GaloisExt::new(&ExtensionSpec::default()).unwrap();
        let l = LField::new(&entry.lfield).unwrap();
        let ds = build_dataset(&s, &k, &l, pmax, None).unwrap();
        assert!(!ds.data.is_empty());
        for d in ds.data {
            assert!((d.a1 as f64).abs() <= 4.0 * (d.p as f64).sqrt());
            assert!(d.na2 >= -2.0 - 1e-9 && d.na2 <= 6.0 + 1e-9);
        }
    }
}

#[test]
fn cache_round_trip_and_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b_c1.csv");
    let spec = SurfaceSpec { kind: SurfaceKind::Product(E37A1, E11A1), claimed_group: None };
    let s = Surface::new(&spec).unwrap();
    let (rows, cached) = load_or_count(&s, 3000, &path).unwrap();
    assert!(!cached);
    let first = std::fs::read(&path).unwrap();
    let (again, cached) = load_or_count(&s, 3000, &path).unwrap();
    assert!(cached);
    assert_eq!(rows, again);
    assert_eq!(first, std::fs::read(&path).unwrap());

    let other = Surface::new(&SurfaceSpec { kind: SurfaceKind::Square(E37A1), claimed_group: None }).unwrap();
    assert!(matches!(load_or_count(&other, 3000, &path), Err(Error::CacheMismatch(_))));
    assert!(matches!(load_or_count(&s, 2000, &path), Err(Error::CacheMismatch(_))));

    // a fresh count writes byte-identical files
    let path2 = dir.path().join("again.csv");
    load_or_count(&s, 3000, &path2).unwrap();
    assert_eq!(first, std::fs::read(&path2).unwrap());
}

#[test]
fn cyclotomic_five_chebotarev() {
    let k = GaloisExt::new(&ExtensionSpec::Cyclotomic { modulus: 5, subgroup: vec![] }).unwrap();
    let primes: Vec<u64> = sieve_primes(100_000).into_iter().filter(|p| !k.ramified.contains(p)).collect();
    let mut freq = [0usize; 4];
    for &p in &primes {
        freq[k.artin_class(p).unwrap()] += 1;
    }
    let tol = 5.0 / (9592f64).sqrt();
    for f in freq {
        assert!((f as f64 / primes.len() as f64 - 0.25).abs() < tol);
    }
}

#[test]
fn lfield_components_follow_kronecker() {
    let l = LField::new(&LFieldSpec::Quadratic { d: -1 }).unwrap();
    for p in sieve_primes(1000).into_iter().filter(|&p| p > 3) {
        assert_eq!(l.component_class(p).unwrap(), if p % 4 == 3 { 1 } else { 0 });
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hasse_bound(a4 in -50i64..50, a6 in -50i64..50, idx in 2usize..160) {
        let e = [0, 0, 0, a4, a6];
        prop_assume!(4 * a4.pow(3) + 27 * a6.pow(2) != 0);
        let c = EllipticCurve::new(e).unwrap();
        let p = sieve_primes(1000)[idx];
        prop_assume!(c.has_good_reduction(p));
        let t = c.trace(p).unwrap();
        prop_assert!((t * t) as u64 <= 4 * p);
    }

    #[test]
    fn genus2_weil_bounds(coeffs in proptest::collection::vec(-9i64..9, 6), lead in 1i64..4, idx in 2usize..20) {
        let mut f = coeffs;
        f.push(lead);
        let c = match Genus2Curve::new(f) { Ok(c) => c, Err(_) => return Ok(()) };
        let p = sieve_primes(100)[idx];
        prop_assume!(c.has_good_reduction(p));
        let (a1, a2) = c.frobenius(p).unwrap();
        let pf = p as f64;
        prop_assert!((a1 as f64).abs() <= 4.0 * pf.sqrt() + 1e-9);
        prop_assert!((a2 as f64) <= 6.0 * pf + 1e-9 && (a2 as f64) >= -2.0 * pf - 1e-9);
    }
}
