//! Frobenius data of abelian surfaces: point counts, L-polynomial
//! coefficients, normalization and the on-disk cache.

pub mod count;
pub mod modular;
pub mod sieve;

use crate::error::{invalid, Error, Result};
use crate::galois::{GaloisExt, LField};
use crate::stgroups::{ClassPoint, GroupTag};
use count::{EllipticCurve, Genus2Curve, Weierstrass};
use modular::{fundamental_discriminant, is_squarefree, kronecker};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;

pub use sieve::sieve_primes;

/// Smallest prime ever counted; 2 and 3 are always excluded.
pub const MIN_PRIME: u64 = 5;
pub const CACHE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurfaceKind {
    Product(Weierstrass, Weierstrass),
    Square(Weierstrass),
    /// `E × E^d` with `E^d` the quadratic twist by `Q(√d)`.
    TwistPair(Weierstrass, i64),
    /// Jacobian of `y² = f(x)`, coefficients ascending.
    Genus2(Vec<i64>),
}

/// An abelian surface recipe plus the group it is claimed to have. The claim
/// is only ever tested, never used to produce data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SurfaceToml", into = "SurfaceToml")]
pub struct SurfaceSpec {
    pub kind: SurfaceKind,
    pub claimed_group: Option<GroupTag>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceToml {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    e1: Option<Weierstrass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    e2: Option<Weierstrass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    e: Option<Weierstrass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    f: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    claimed_group: Option<GroupTag>,
}

impl TryFrom<SurfaceToml> for SurfaceSpec {
    type Error = Error;

    fn try_from(t: SurfaceToml) -> Result<Self> {
        let fields = [t.e1.is_some(), t.e2.is_some(), t.e.is_some(), t.d.is_some(), t.f.is_some()];
        let (kind, expect) = match t.kind.as_str() {
            "product" => (t.e1.zip(t.e2).map(|(a, b)| SurfaceKind::Product(a, b)), [true, true, false, false, false]),
            "square" => (t.e.map(SurfaceKind::Square), [false, false, true, false, false]),
            "twist_pair" => (t.e.zip(t.d).map(|(e, d)| SurfaceKind::TwistPair(e, d)), [false, false, true, true, false]),
            "genus2" => (t.f.map(SurfaceKind::Genus2), [false, false, false, false, true]),
            other => return invalid(format!("unknown surface kind {other:?}")),
        };
        if fields != expect {
            return invalid(format!(
                "surface kind {:?} takes exactly the keys {}",
                t.kind,
                match t.kind.as_str() {
                    "product" => "e1, e2",
                    "square" => "e",
                    "twist_pair" => "e, d",
                    _ => "f",
                }
            ));
        }
        let spec = SurfaceSpec { kind: kind.expect("keys checked"), claimed_group: t.claimed_group };
        Surface::new(&spec)?;
        Ok(spec)
    }
}

impl From<SurfaceSpec> for SurfaceToml {
    fn from(s: SurfaceSpec) -> Self {
        let mut t = SurfaceToml {
            kind: String::new(),
            e1: None,
            e2: None,
            e: None,
            d: None,
            f: None,
            claimed_group: s.claimed_group,
        };
        match s.kind {
            SurfaceKind::Product(a, b) => (t.kind, t.e1, t.e2) = ("product".into(), Some(a), Some(b)),
            SurfaceKind::Square(e) => (t.kind, t.e) = ("square".into(), Some(e)),
            SurfaceKind::TwistPair(e, d) => (t.kind, t.e, t.d) = ("twist_pair".into(), Some(e), Some(d)),
            SurfaceKind::Genus2(f) => (t.kind, t.f) = ("genus2".into(), Some(f)),
        }
        t
    }
}

impl SurfaceSpec {
    /// Canonical serialization of the curve data (claims excluded).
    pub fn canonical(&self) -> String {
        let w = |e: &Weierstrass| e.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        match &self.kind {
            SurfaceKind::Product(a, b) => format!("product;e1={};e2={}", w(a), w(b)),
            SurfaceKind::Square(e) => format!("square;e={}", w(e)),
            SurfaceKind::TwistPair(e, d) => format!("twist_pair;e={};d={d}", w(e)),
            SurfaceKind::Genus2(f) => {
                format!("genus2;f={}", f.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
            }
        }
    }

    /// SHA-256 of [`SurfaceSpec::canonical`], hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }
}

#[derive(Debug, Clone)]
enum Realized {
    Product(EllipticCurve, EllipticCurve),
    Square(EllipticCurve),
    Twist(EllipticCurve, i64),
    Genus2(Genus2Curve),
}

/// A validated surface ready for counting.
#[derive(Debug, Clone)]
pub struct Surface {
    pub spec: SurfaceSpec,
    curves: Realized,
}

impl Surface {
    pub fn new(spec: &SurfaceSpec) -> Result<Self> {
        let curves = match &spec.kind {
            SurfaceKind::Product(a, b) => Realized::Product(EllipticCurve::new(*a)?, EllipticCurve::new(*b)?),
            SurfaceKind::Square(e) => Realized::Square(EllipticCurve::new(*e)?),
            SurfaceKind::TwistPair(e, d) => {
                if *d == 0 || *d == 1 || !is_squarefree(*d) {
                    return invalid(format!("twist parameter must be squarefree and not 0 or 1, got {d}"));
                }
                Realized::Twist(EllipticCurve::new(*e)?, fundamental_discriminant(*d))
            }
            SurfaceKind::Genus2(f) => Realized::Genus2(Genus2Curve::new(f.clone())?),
        };
        Ok(Self { spec: spec.clone(), curves })
    }

    pub fn has_good_reduction(&self, p: u64) -> bool {
        match &self.curves {
            Realized::Product(a, b) => a.has_good_reduction(p) && b.has_good_reduction(p),
            Realized::Square(e) => e.has_good_reduction(p),
            Realized::Twist(e, disc) => e.has_good_reduction(p) && disc % p as i64 != 0,
            Realized::Genus2(c) => c.has_good_reduction(p),
        }
    }

    /// `(a1, a2)` at a prime `p > 3` of good reduction.
    pub fn frobenius(&self, p: u64) -> Result<(i64, i64)> {
        if p < MIN_PRIME {
            return invalid(format!("p = {p}: primes 2 and 3 are excluded"));
        }
        if !self.has_good_reduction(p) {
            return Err(Error::BadReduction(p));
        }
        let pi = p as i64;
        let pair = |x: i64, y: i64| (x + y, x * y + 2 * pi);
        Ok(match &self.curves {
            Realized::Product(a, b) => pair(a.trace(p)?, b.trace(p)?),
            Realized::Square(e) => {
                let t = e.trace(p)?;
                pair(t, t)
            }
            Realized::Twist(e, disc) => {
                let t = e.trace(p)?;
                pair(t, kronecker(*disc, p) as i64 * t)
            }
            Realized::Genus2(c) => c.frobenius(p)?,
        })
    }

    /// Primes `≤ pmax` excluded for the surface itself: 2, 3 and bad reduction.
    pub fn bad_primes(&self, pmax: u64) -> Vec<u64> {
        sieve_primes(pmax)
            .into_iter()
            .filter(|&p| p < MIN_PRIME || !self.has_good_reduction(p))
            .collect()
    }
}

/// Normalized Frobenius data at one good prime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrobeniusDatum {
    pub p: u64,
    pub a1: i64,
    pub a2: i64,
    pub na1: f64,
    pub na2: f64,
    /// Index in the component group (`Gal(L/Q)`).
    pub component: usize,
    /// Artin class in `Gal(K/Q)`.
    pub artin: usize,
}

impl FrobeniusDatum {
    pub fn new(p: u64, a1: i64, a2: i64, component: usize, artin: usize) -> Result<Self> {
        let na1 = a1 as f64 / (p as f64).sqrt();
        let na2 = a2 as f64 / p as f64;
        if na1.abs() > 4.0 + 1e-9 || !(-2.0 - 1e-9..=6.0 + 1e-9).contains(&na2) || !ClassPoint::is_feasible(na1, na2, 1e-9) {
            return invalid(format!("Frobenius data (a1, a2) = ({a1}, {a2}) at p = {p} violates the Weil bounds"));
        }
        Ok(Self { p, a1, a2, na1, na2, component, artin })
    }

    pub fn class_point(&self) -> ClassPoint {
        ClassPoint { a: self.na1, b: self.na2, component: self.component }
    }
}

/// Raw `(p, a1, a2)` rows for every good prime `5 ≤ p ≤ pmax`.
pub fn count_surface(surface: &Surface, pmax: u64) -> Vec<(u64, i64, i64)> {
    let primes: Vec<u64> = sieve_primes(pmax).into_iter().filter(|&p| p >= MIN_PRIME).collect();
    primes
        .par_iter()
        .filter_map(|&p| surface.frobenius(p).ok().map(|(a1, a2)| (p, a1, a2)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheHeader {
    pub surface_hash: String,
    pub pmax: u64,
    pub version: u32,
}

impl CacheHeader {
    pub fn line(&self) -> String {
        format!("# surface={} pmax={} version={}", self.surface_hash, self.pmax, self.version)
    }
}

/// Serializes rows in the cache format.
pub fn render_cache(header: &CacheHeader, rows: &[(u64, i64, i64)]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    writeln!(out, "{}", header.line())?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut out);
    w.write_record(["p", "a1", "a2"]).map_err(csv_err)?;
    for &(p, a1, a2) in rows {
        w.serialize((p, a1, a2)).map_err(csv_err)?;
    }
    w.flush()?;
    drop(w);
    Ok(out)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(format!("cache csv: {e}"))
}

/// Parses a cache file. Rows must be strictly increasing in `p`.
pub fn parse_cache(bytes: &[u8]) -> Result<(CacheHeader, Vec<(u64, i64, i64)>)> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse(format!("cache is not UTF-8: {e}")))?;
    let (first, rest) = text.split_once('\n').ok_or_else(|| Error::Parse("cache has no header line".into()))?;
    let header = parse_header(first)?;
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(rest.as_bytes());
    let cols = rdr.headers().map_err(csv_err)?;
    if cols != vec!["p", "a1", "a2"] {
        return Err(Error::Parse(format!("cache columns must be p,a1,a2, got {cols:?}")));
    }
    let mut rows: Vec<(u64, i64, i64)> = Vec::new();
    for rec in rdr.deserialize() {
        let row: (u64, i64, i64) = rec.map_err(csv_err)?;
        if rows.last().is_some_and(|l| l.0 >= row.0) {
            return Err(Error::Parse(format!("cache rows not increasing at p = {}", row.0)));
        }
        if row.0 > header.pmax {
            return Err(Error::Parse(format!("cache row p = {} exceeds pmax", row.0)));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

fn parse_header(line: &str) -> Result<CacheHeader> {
    let bad = || Error::Parse(format!("malformed cache header {line:?}"));
    let body = line.strip_prefix("# ").ok_or_else(bad)?;
    let mut parts = body.split(' ');
    let mut field = |key: &str| -> Result<String> {
        let tok = parts.next().ok_or_else(bad)?;
        tok.strip_prefix(key).and_then(|v| v.strip_prefix('=')).map(str::to_string).ok_or_else(bad)
    };
    let surface_hash = field("surface")?;
    let pmax = field("pmax")?.parse().map_err(|_| bad())?;
    let version = field("version")?.parse().map_err(|_| bad())?;
    if parts.next().is_some() || surface_hash.is_empty() {
        return Err(bad());
    }
    Ok(CacheHeader { surface_hash, pmax, version })
}

/// Loads the cache at `path` if present (it must match the surface and
/// `pmax` exactly), otherwise counts and writes it atomically. Returns the
/// rows and whether they came from the cache.
pub fn load_or_count(surface: &Surface, pmax: u64, path: &Path) -> Result<(Vec<(u64, i64, i64)>, bool)> {
    let header = CacheHeader { surface_hash: surface.spec.hash(), pmax, version: CACHE_VERSION };
    if path.exists() {
        let (found, rows) = parse_cache(&std::fs::read(path)?)?;
        if found != header {
            return Err(Error::CacheMismatch(format!(
                "{} holds `{}`, expected `{}`",
                path.display(),
                found.line(),
                header.line()
            )));
        }
        return Ok((rows, true));
    }
    let rows = count_surface(surface, pmax);
    let bytes = render_cache(&header, &rows)?;
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(&bytes)?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok((rows, false))
}

/// Frobenius data of a surface, ready for the statistics.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub data: Vec<FrobeniusDatum>,
    /// 2, 3 and the primes of bad reduction up to `pmax`.
    pub bad_primes: Vec<u64>,
    /// Good primes dropped because `K` or `L` ramifies there.
    pub ramified: Vec<u64>,
    pub pmax: u64,
    pub from_cache: bool,
}

/// Frobenius data at every good prime `5 ≤ p ≤ pmax` unramified in `K` and
/// `L`, ordered by `p`.
pub fn build_dataset(
    surface: &Surface,
    k: &GaloisExt,
    l: &LField,
    pmax: u64,
    cache: Option<&Path>,
) -> Result<Dataset> {
    let (rows, from_cache) = match cache {
        Some(path) => load_or_count(surface, pmax, path)?,
        None => (count_surface(surface, pmax), false),
    };
    let mut data = Vec::with_capacity(rows.len());
    let mut ramified = Vec::new();
    for (p, a1, a2) in rows {
        if k.ramified.contains(&p) || l.ext.ramified.contains(&p) {
            ramified.push(p);
            continue;
        }
        data.push(FrobeniusDatum::new(p, a1, a2, l.component_class(p)?, k.artin_class(p)?)?);
    }
    Ok(Dataset { data, bad_primes: surface.bad_primes(pmax), ramified, pmax, from_cache })
}

#[cfg(test)]
mod tests {
    use super::*;

    const E37: Weierstrass = [0, 0, 1, -1, 0];
    const E11: Weierstrass = [0, -1, 1, -10, -20];

    #[test]
    fn surface_toml_round_trip() {
        let s = SurfaceSpec { kind: SurfaceKind::TwistPair(E37, 2), claimed_group: Some(GroupTag::EC2RR) };
        let text = toml::to_string(&s).unwrap();
        let back: SurfaceSpec = toml::from_str(&text).unwrap();
        assert_eq!(s, back);
        assert!(toml::from_str::<SurfaceSpec>("kind = \"square\"\ne = [0,0,1,-1,0]\nd = 3\n").is_err());
        assert!(toml::from_str::<SurfaceSpec>("kind = \"square\"\ne = [0,0,0,0,0]\n").is_err());
        assert!(toml::from_str::<SurfaceSpec>("kind = \"cube\"\n").is_err());
    }

    #[test]
    fn twist_pair_vanishes_at_inert_primes() {
        let s = Surface::new(&SurfaceSpec { kind: SurfaceKind::TwistPair(E37, 2), claimed_group: None }).unwrap();
        for p in sieve_primes(500).into_iter().filter(|&p| p >= MIN_PRIME && p != 37) {
            let (a1, a2) = s.frobenius(p).unwrap();
            if kronecker(8, p) == -1 {
                assert_eq!(a1, 0, "p = {p}");
                let t = EllipticCurve::new(E37).unwrap().trace(p).unwrap();
                assert_eq!(a2, 2 * p as i64 - t * t);
            }
        }
    }

    #[test]
    fn bad_set_assembly() {
        let surface = Surface::new(&SurfaceSpec { kind: SurfaceKind::Product(E37, E11), claimed_group: None }).unwrap();
        let k = GaloisExt::new(&crate::galois::ExtensionSpec::default()).unwrap();
        let l = LField::new(&crate::galois::LFieldSpec::Trivial {}).unwrap();
        let ds = build_dataset(&surface, &k, &l, 100, None).unwrap();
        let ps: Vec<u64> = ds.data.iter().map(|d| d.p).collect();
        for bad in [2, 3, 5, 11, 37] {
            assert!(!ps.contains(&bad));
        }
        assert_eq!(ps.len(), 25 - 5);
        assert_eq!(ds.bad_primes, vec![2, 3, 11, 37]);
        assert_eq!(ds.ramified, vec![5]);
    }

    #[test]
    fn cache_header_parsing() {
        let h = CacheHeader { surface_hash: "ab".into(), pmax: 10, version: 1 };
        let bytes = render_cache(&h, &[(5, 1, 2), (7, -3, 4)]).unwrap();
        assert_eq!(std::str::from_utf8(&bytes).unwrap(), "# surface=ab pmax=10 version=1\np,a1,a2\n5,1,2\n7,-3,4\n");
        let (h2, rows) = parse_cache(&bytes).unwrap();
        assert_eq!(h2, h);
        assert_eq!(rows, vec![(5, 1, 2), (7, -3, 4)]);
        assert!(parse_cache(b"# surface=ab pmax=10 version=1\np,a1,a2\n7,1,2\n5,1,2\n").is_err());
        assert!(parse_cache(b"# surface=ab pmax=x version=1\np,a1,a2\n").is_err());
        assert!(parse_cache(b"surface=ab\n").is_err());
    }
}
