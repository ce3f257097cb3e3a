//! On-disk layer store: one binary file per DAG level plus a manifest.
//!
//! Level file (`level_<l>.dkp`, little-endian):
//!
//! ```text
//! "DKP1" | version u16 | d u16 |
//!   per node: code u8 | fd u32 | bd u32 | d x u32 coords | out-degree u32 | out-degree x u32
//! ```
//!
//! Successor indices refer to the canonical order of the next level.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::dag::{KeyNode, KeyPointDag, Level};
use crate::error::PersistError;
use crate::sequence::Alphabet;

pub const LEVEL_MAGIC: &[u8; 4] = b"DKP1";
pub const MANIFEST_MAGIC: &[u8; 4] = b"DKPM";
pub const FORMAT_VERSION: u16 = 1;
pub const MANIFEST_FILE: &str = "manifest.bin";

/// Location and checksum of one sealed level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelEntry {
    pub level: u32,
    /// Byte offset of this level in the concatenation of all level files.
    pub offset: u64,
    pub byte_len: u64,
    pub nodes: u32,
    pub crc32: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub job_id: String,
    pub d: u16,
    pub mlcs_len: u32,
    pub alphabet: Vec<u8>,
    pub levels: Vec<LevelEntry>,
}

/// Handle to a level sealed on disk.
pub type LevelHandle = LevelEntry;

#[derive(Debug)]
pub struct LayerStore {
    dir: PathBuf,
    manifest: Manifest,
}

pub fn level_file_name(level: u32) -> String {
    format!("level_{level}.dkp")
}

impl LayerStore {
    /// Creates (or truncates) a store in `dir`.
    pub fn create(
        dir: impl Into<PathBuf>,
        job_id: &str,
        alphabet: &Alphabet,
        d: usize,
        mlcs_len: u32,
    ) -> Result<Self, PersistError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| PersistError::io(&dir, e))?;
        let store = Self {
            manifest: Manifest {
                job_id: job_id.to_string(),
                d: u16::try_from(d).map_err(|_| PersistError::Corrupt("d exceeds u16".into()))?,
                mlcs_len,
                alphabet: alphabet.symbols().map(|c| c as u8).collect(),
                levels: Vec::new(),
            },
            dir,
        };
        store.write_manifest()?;
        Ok(store)
    }

    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, PersistError> {
        let dir = dir.into();
        let path = dir.join(MANIFEST_FILE);
        let bytes = fs::read(&path).map_err(|e| PersistError::io(&path, e))?;
        let manifest = decode_manifest(&bytes)?;
        Ok(Self { dir, manifest })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn manifest(&self) -> &Manifest {
        &self.manifest
    }

    pub fn level_count(&self) -> u32 {
        self.manifest.levels.len() as u32
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.manifest.alphabet.iter().map(|&b| b as char))
            .unwrap_or_else(|| Alphabet::new(['?']).expect("single symbol"))
    }

    /// Appends the next level and atomically rewrites the manifest.
    pub fn write_level(&mut self, level: u32, data: &Level) -> Result<LevelHandle, PersistError> {
        let expected = self.level_count() + 1;
        if level != expected {
            return Err(PersistError::OutOfOrder {
                expected,
                got: level,
            });
        }
        if data.nodes.is_empty() {
            return Err(PersistError::EmptyLevel(level));
        }
        let bytes = encode_level(self.manifest.d, data);
        let path = self.dir.join(level_file_name(level));
        write_file(&path, &bytes)?;
        let offset = self
            .manifest
            .levels
            .last()
            .map_or(0, |e| e.offset + e.byte_len);
        let entry = LevelEntry {
            level,
            offset,
            byte_len: bytes.len() as u64,
            nodes: data.nodes.len() as u32,
            crc32: crc32fast::hash(&bytes),
        };
        self.manifest.levels.push(entry);
        self.write_manifest()?;
        Ok(entry)
    }

    /// Reads levels `from..=to` (1-based), verifying sizes and checksums.
    pub fn read_levels(&self, from: u32, to: u32) -> Result<Vec<Level>, PersistError> {
        let levels = self.level_count();
        if from < 1 || from > to || to > levels {
            return Err(PersistError::OutOfRange { from, to, levels });
        }
        (from..=to).map(|l| self.read_level(l)).collect()
    }

    fn read_level(&self, level: u32) -> Result<Level, PersistError> {
        let entry = self.manifest.levels[level as usize - 1];
        let path = self.dir.join(level_file_name(level));
        let bytes = fs::read(&path).map_err(|e| PersistError::io(&path, e))?;
        if bytes.len() as u64 != entry.byte_len {
            return Err(PersistError::Corrupt(format!(
                "level {level}: {} bytes on disk, manifest says {}",
                bytes.len(),
                entry.byte_len
            )));
        }
        let computed = crc32fast::hash(&bytes);
        if computed != entry.crc32 {
            return Err(PersistError::Checksum {
                level,
                stored: entry.crc32,
                computed,
            });
        }
        decode_level(&bytes, self.manifest.d, entry.nodes)
            .ok_or_else(|| PersistError::Corrupt(format!("level {level}: malformed records")))
    }

    /// Reloads the complete DAG layer by layer.
    pub fn load_dag(&self) -> Result<KeyPointDag, PersistError> {
        let count = self.level_count();
        if count != self.manifest.mlcs_len {
            return Err(PersistError::Corrupt(format!(
                "{count} of {} levels stored",
                self.manifest.mlcs_len
            )));
        }
        let mut levels = Vec::with_capacity(count as usize);
        for l in 1..=count {
            levels.extend(self.read_levels(l, l)?);
        }
        Ok(KeyPointDag::from_levels(
            self.alphabet(),
            self.manifest.d as usize,
            levels,
        ))
    }

    fn write_manifest(&self) -> Result<(), PersistError> {
        let path = self.dir.join(MANIFEST_FILE);
        let tmp = self.dir.join(format!("{MANIFEST_FILE}.tmp"));
        write_file(&tmp, &encode_manifest(&self.manifest))?;
        fs::rename(&tmp, &path).map_err(|e| PersistError::io(&path, e))
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), PersistError> {
    let mut f = fs::File::create(path).map_err(|e| PersistError::io(path, e))?;
    f.write_all(bytes).map_err(|e| PersistError::io(path, e))?;
    f.sync_all().map_err(|e| PersistError::io(path, e))
}

pub fn encode_level(d: u16, level: &Level) -> Vec<u8> {
    let per_node = 13 + 4 * d as usize;
    let mut out = Vec::with_capacity(8 + level.nodes.len() * per_node + 4 * level.edge_count());
    out.extend_from_slice(LEVEL_MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&d.to_le_bytes());
    for (node, succ) in level.nodes.iter().zip(&level.succ) {
        out.push(node.code);
        out.extend_from_slice(&node.fd.to_le_bytes());
        out.extend_from_slice(&node.bd.to_le_bytes());
        for c in node.coords.iter() {
            out.extend_from_slice(&c.to_le_bytes());
        }
        out.extend_from_slice(&(succ.len() as u32).to_le_bytes());
        for s in succ {
            out.extend_from_slice(&s.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        if self.buf.len() < n {
            return None;
        }
        let (head, tail) = self.buf.split_at(n);
        self.buf = tail;
        Some(head)
    }

    fn u8(&mut self) -> Option<u8> {
        self.take(1).map(|b| b[0])
    }

    fn u16(&mut self) -> Option<u16> {
        self.take(2).map(|b| u16::from_le_bytes([b[0], b[1]]))
    }

    fn u32(&mut self) -> Option<u32> {
        self.take(4).map(|b| u32::from_le_bytes(b.try_into().unwrap()))
    }

    fn u64(&mut self) -> Option<u64> {
        self.take(8).map(|b| u64::from_le_bytes(b.try_into().unwrap()))
    }
}

pub fn decode_level(bytes: &[u8], d: u16, nodes: u32) -> Option<Level> {
    let mut r = Reader { buf: bytes };
    if r.take(4)? != LEVEL_MAGIC || r.u16()? != FORMAT_VERSION || r.u16()? != d {
        return None;
    }
    let mut level = Level::default();
    for _ in 0..nodes {
        let code = r.u8()?;
        let fd = r.u32()?;
        let bd = r.u32()?;
        let coords = (0..d).map(|_| r.u32()).collect::<Option<Box<[u32]>>>()?;
        let deg = r.u32()?;
        let succ = (0..deg).map(|_| r.u32()).collect::<Option<Vec<u32>>>()?;
        level.nodes.push(KeyNode {
            coords,
            code,
            fd,
            bd,
        });
        level.succ.push(succ);
    }
    r.buf.is_empty().then_some(level)
}

fn encode_manifest(m: &Manifest) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MANIFEST_MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(m.job_id.len() as u16).to_le_bytes());
    out.extend_from_slice(m.job_id.as_bytes());
    out.extend_from_slice(&m.d.to_le_bytes());
    out.extend_from_slice(&m.mlcs_len.to_le_bytes());
    out.extend_from_slice(&(m.alphabet.len() as u16).to_le_bytes());
    out.extend_from_slice(&m.alphabet);
    out.extend_from_slice(&(m.levels.len() as u32).to_le_bytes());
    for e in &m.levels {
        out.extend_from_slice(&e.level.to_le_bytes());
        out.extend_from_slice(&e.offset.to_le_bytes());
        out.extend_from_slice(&e.byte_len.to_le_bytes());
        out.extend_from_slice(&e.nodes.to_le_bytes());
        out.extend_from_slice(&e.crc32.to_le_bytes());
    }
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

fn decode_manifest(bytes: &[u8]) -> Result<Manifest, PersistError> {
    let corrupt = || PersistError::Corrupt("malformed manifest".into());
    if bytes.len() < 4 {
        return Err(corrupt());
    }
    let (body, tail) = bytes.split_at(bytes.len() - 4);
    if crc32fast::hash(body) != u32::from_le_bytes(tail.try_into().unwrap()) {
        return Err(PersistError::Corrupt("manifest checksum mismatch".into()));
    }
    let mut r = Reader { buf: body };
    let parse = |r: &mut Reader<'_>| -> Option<Manifest> {
        if r.take(4)? != MANIFEST_MAGIC || r.u16()? != FORMAT_VERSION {
            return None;
        }
        let id_len = r.u16()? as usize;
        let job_id = String::from_utf8(r.take(id_len)?.to_vec()).ok()?;
        let d = r.u16()?;
        let mlcs_len = r.u32()?;
        let alpha_len = r.u16()? as usize;
        let alphabet = r.take(alpha_len)?.to_vec();
        let count = r.u32()?;
        let mut levels = Vec::with_capacity(count as usize);
        for _ in 0..count {
            levels.push(LevelEntry {
                level: r.u32()?,
                offset: r.u64()?,
                byte_len: r.u64()?,
                nodes: r.u32()?,
                crc32: r.u32()?,
            });
        }
        r.buf.is_empty().then_some(Manifest {
            job_id,
            d,
            mlcs_len,
            alphabet,
            levels,
        })
    };
    parse(&mut r).ok_or_else(corrupt)
}
