//! Process-wide cache of level data and q-expansion bases, with an optional
//! on-disk copy of the level data.
//!
//! Disk format: one file per `(M, nterms)` named `level-M-nNTERMS.json`. The
//! first line is `eisenstark-cache <version> <sha256 of the rest, hex>`; the
//! rest is the JSON encoding of [`LevelData`]. A file that fails the checksum,
//! fails to parse, or fails the transport check after loading is rebuilt.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use log::{debug, warn};
use sha2::{Digest, Sha256};

use super::qexp::{hecke_on_series, LevelData, QExpBasis};
use crate::error::{Error, Result};
use crate::ffarith::{gcd, is_prime};

pub const CACHE_FORMAT_VERSION: u32 = 1;

type Slot<T> = Arc<OnceLock<Result<Arc<T>>>>;

#[derive(Default)]
struct Caches {
    levels: HashMap<(u64, usize), Slot<LevelData>>,
    bases: HashMap<(u64, u64, usize), Slot<QExpBasis>>,
    dir: Option<PathBuf>,
}

fn caches() -> &'static Mutex<Caches> {
    static CACHES: OnceLock<Mutex<Caches>> = OnceLock::new();
    CACHES.get_or_init(Default::default)
}

/// Directory for the on-disk cache; `None` keeps everything in memory.
pub fn set_cache_dir(dir: Option<PathBuf>) {
    caches().lock().unwrap().dir = dir;
}

pub fn cache_dir() -> Option<PathBuf> {
    caches().lock().unwrap().dir.clone()
}

/// Level data for `(M, nterms)`, built at most once per process.
pub fn level_data(level: u64, nterms: usize) -> Result<Arc<LevelData>> {
    let (slot, dir) = {
        let mut c = caches().lock().unwrap();
        let slot = Arc::clone(c.levels.entry((level, nterms)).or_default());
        (slot, c.dir.clone())
    };
    slot.get_or_init(|| build_level_data(level, nterms, dir.as_deref()).map(Arc::new))
        .clone()
}

/// The q-expansion basis of S_2(Gamma_0(M)) mod p to `nterms` coefficients.
pub fn qexp_basis(level: u64, p: u64, nterms: usize) -> Result<Arc<QExpBasis>> {
    let slot = {
        let mut c = caches().lock().unwrap();
        Arc::clone(c.bases.entry((level, p, nterms)).or_default())
    };
    slot.get_or_init(|| {
        let data = level_data(level, nterms)?;
        QExpBasis::new(data, p).map(Arc::new)
    })
    .clone()
}

fn cache_path(dir: &Path, level: u64, nterms: usize) -> PathBuf {
    dir.join(format!("level-{level}-n{nterms}.json"))
}

fn build_level_data(level: u64, nterms: usize, dir: Option<&Path>) -> Result<LevelData> {
    if let Some(dir) = dir {
        let path = cache_path(dir, level, nterms);
        match load(&path) {
            Ok(Some(data)) if data.level == level && data.nterms == nterms => match verify_loaded(&data) {
                Ok(()) => {
                    debug!("loaded level {level} from {}", path.display());
                    return Ok(data);
                }
                Err(e) => warn!("cached level {level} failed verification ({e}); rebuilding"),
            },
            Ok(Some(_)) => warn!("cache file {} describes another level; rebuilding", path.display()),
            Ok(None) => {}
            Err(e) => warn!("{e}; rebuilding"),
        }
        let data = LevelData::new(level, nterms)?;
        if let Err(e) = store(&path, &data) {
            warn!("{e}");
        }
        return Ok(data);
    }
    LevelData::new(level, nterms)
}

pub fn encode(data: &LevelData) -> Result<String> {
    let body = serde_json::to_string(data).map_err(|e| Error::Cache(e.to_string()))?;
    let digest = hex(&Sha256::digest(body.as_bytes()));
    Ok(format!("eisenstark-cache {CACHE_FORMAT_VERSION} {digest}\n{body}"))
}

pub fn decode(text: &str) -> Result<LevelData> {
    let (header, body) = text
        .split_once('\n')
        .ok_or_else(|| Error::Cache("missing header line".into()))?;
    let fields: Vec<&str> = header.split(' ').collect();
    match fields.as_slice() {
        ["eisenstark-cache", version, digest] => {
            if *version != CACHE_FORMAT_VERSION.to_string() {
                return Err(Error::Cache(format!("unsupported cache version {version}")));
            }
            if hex(&Sha256::digest(body.as_bytes())) != *digest {
                return Err(Error::Cache("checksum mismatch".into()));
            }
        }
        _ => return Err(Error::Cache("malformed header line".into())),
    }
    serde_json::from_str(body).map_err(|e| Error::Cache(e.to_string()))
}

fn load(path: &Path) -> Result<Option<LevelData>> {
    match fs::read_to_string(path) {
        Ok(text) => decode(&text)
            .map(Some)
            .map_err(|e| Error::Cache(format!("{}: {e}", path.display()))),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(Error::Cache(format!("{}: {e}", path.display()))),
    }
}

fn store(path: &Path, data: &LevelData) -> Result<()> {
    let text = encode(data)?;
    let io = |e: std::io::Error| Error::Cache(format!("{}: {e}", path.display()));
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io)?;
    }
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, text).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

/// Transported `T_l` against the coefficient formula, on every coefficient the
/// formula determines, for the smallest prime `l` prime to the level.
pub fn verify_transport(basis: &QExpBasis) -> Result<()> {
    let m = basis.level();
    let l = (2u64..).find(|&l| is_prime(l) && gcd(l, m) == 1 && l != basis.p()).unwrap();
    let t = basis.transport_hecke(l)?;
    for (i, row) in basis.rows().iter().enumerate() {
        let expected = hecke_on_series(row, l, m, basis.p());
        let got = basis.combination(&t[i]);
        for (k, &e) in expected.iter().enumerate() {
            if got.coeff(k) as u64 != e {
                return Err(Error::Cache(format!(
                    "transported T_{l} disagrees with q-expansions at level {m}, row {i}, q^{k}"
                )));
            }
        }
    }
    Ok(())
}

fn verify_loaded(data: &LevelData) -> Result<()> {
    let p = (5u64..).find(|&p| is_prime(p) && data.level % p != 0).unwrap();
    let basis = QExpBasis::new(Arc::new(data.clone()), p)?;
    if basis.dim() != data.space.genus() {
        return Err(Error::Cache("basis dimension differs from the genus".into()));
    }
    verify_transport(&basis)
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
