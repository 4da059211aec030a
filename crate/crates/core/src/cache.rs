//! On-disk cache of Cayley graphs.
//!
//! One file per `(spec, modulus, generators)`, named by the SHA-256 digest of
//! that triple. Layout, all integers little-endian:
//!
//! ```text
//! magic    8 bytes  "BOXDIMCG"
//! version  u32
//! digest   32 bytes
//! modulus  u64
//! order    u64      |V|
//! degree   u32
//! adjacency  order * degree x u32
//! distances  order x u32, BFS from the identity
//! ```
//!
//! Loading refreshes the file's modification time so that [`cache_gc`] evicts
//! least recently used entries first.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::SystemTime;

use sha2::{Digest, Sha256};

use crate::cayley::CayleyGraph;
use crate::error::{Error, Result};
use crate::group::{CongruenceQuotient, Coord};

const MAGIC: &[u8; 8] = b"BOXDIMCG";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 8 + 4 + 32 + 8 + 8 + 4;
const EXTENSION: &str = "cg";

/// Content digest of a quotient: spec kind, generators and modulus.
pub fn quotient_digest<T: Coord>(quotient: &CongruenceQuotient<T>) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(quotient.spec().canonical_string().as_bytes());
    h.update(b"|mod=");
    h.update(quotient.modulus().to_le_bytes());
    h.finalize().into()
}

#[derive(Debug, Clone)]
pub struct GraphCache {
    dir: PathBuf,
}

impl GraphCache {
    /// Use `dir`, creating it if needed.
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path<T: Coord>(&self, quotient: &CongruenceQuotient<T>) -> PathBuf {
        self.dir
            .join(format!("{}.{EXTENSION}", hex::encode(quotient_digest(quotient))))
    }

    /// The cached graph, `None` if there is no entry.
    pub fn load<T: Coord>(&self, quotient: &CongruenceQuotient<T>) -> Result<Option<CayleyGraph<T>>> {
        let path = self.path(quotient);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let graph = decode(quotient, &bytes)?;
        // best effort: a read-only cache still serves hits
        if let Ok(f) = fs::File::options().write(true).open(&path) {
            let _ = f.set_modified(SystemTime::now());
        }
        Ok(Some(graph))
    }

    /// Write `graph` atomically: a temporary file in the same directory,
    /// then a rename.
    pub fn store<T: Coord>(&self, graph: &CayleyGraph<T>) -> Result<PathBuf> {
        let path = self.path(graph.quotient());
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        {
            let mut w = BufWriter::new(fs::File::create(&tmp)?);
            w.write_all(MAGIC)?;
            w.write_all(&VERSION.to_le_bytes())?;
            w.write_all(&quotient_digest(graph.quotient()))?;
            w.write_all(&graph.modulus().to_le_bytes())?;
            w.write_all(&(graph.order() as u64).to_le_bytes())?;
            w.write_all(&(graph.degree() as u32).to_le_bytes())?;
            for &a in graph.adjacency() {
                w.write_all(&a.to_le_bytes())?;
            }
            for &d in graph.identity_distances() {
                w.write_all(&d.to_le_bytes())?;
            }
            w.into_inner().map_err(|e| e.into_error())?.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// Load, or build with `vertex_cap` and store. A corrupt entry is
    /// rebuilt and overwritten.
    pub fn get_or_build<T: Coord>(&self, quotient: CongruenceQuotient<T>, vertex_cap: usize) -> Result<CayleyGraph<T>> {
        match self.load(&quotient) {
            Ok(Some(g)) => return Ok(g),
            Ok(None) | Err(Error::CacheFormat(_)) => {}
            Err(e) => return Err(e),
        }
        let graph = CayleyGraph::build(quotient, vertex_cap)?;
        self.store(&graph)?;
        Ok(graph)
    }
}

struct Reader<'a>(&'a [u8]);

impl Reader<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8]> {
        if self.0.len() < n {
            return Err(Error::CacheFormat("truncated file".into()));
        }
        let (head, tail) = self.0.split_at(n);
        self.0 = tail;
        Ok(head)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn u32s(&mut self, n: usize) -> Result<Vec<u32>> {
        let len = n
            .checked_mul(4)
            .ok_or_else(|| Error::CacheFormat("table size".into()))?;
        Ok(self
            .take(len)?
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }
}

fn decode<T: Coord>(quotient: &CongruenceQuotient<T>, bytes: &[u8]) -> Result<CayleyGraph<T>> {
    let bad = |what: &str| Error::CacheFormat(what.to_string());
    if bytes.len() < HEADER_LEN {
        return Err(bad("truncated header"));
    }
    let mut r = Reader(bytes);
    if r.take(8)? != MAGIC {
        return Err(bad("bad magic"));
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(Error::CacheFormat(format!("unsupported version {version}")));
    }
    if r.take(32)? != quotient_digest(quotient) {
        return Err(bad("digest mismatch"));
    }
    if r.u64()? != quotient.modulus() {
        return Err(bad("modulus mismatch"));
    }
    let order = usize::try_from(r.u64()?).map_err(|_| bad("order"))?;
    let degree = r.u32()? as usize;
    if Some(order) != quotient.order() {
        return Err(bad("order mismatch"));
    }
    let cells = order.checked_mul(degree).ok_or_else(|| bad("adjacency size"))?;
    let adjacency = r.u32s(cells)?;
    let dist = r.u32s(order)?;
    if !r.0.is_empty() {
        return Err(bad("trailing bytes"));
    }
    CayleyGraph::from_parts(quotient.clone(), adjacency, Some(dist))
}

/// Evict least recently used cache files until the directory holds at most
/// `budget` bytes of them. Returns the number of bytes freed.
pub fn cache_gc(dir: &Path, budget: u64) -> Result<u64> {
    let mut entries = Vec::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        let path = entry.path();
        if path.extension().and_then(|e| e.to_str()) != Some(EXTENSION) {
            continue;
        }
        let meta = entry.metadata()?;
        if meta.is_file() {
            entries.push((meta.modified()?, path, meta.len()));
        }
    }
    entries.sort();
    let mut total: u64 = entries.iter().map(|e| e.2).sum();
    let mut freed = 0;
    for (_, path, len) in entries {
        if total <= budget {
            break;
        }
        fs::remove_file(&path)?;
        total -= len;
        freed += len;
    }
    Ok(freed)
}
