//! Memo of exact pattern values and its on-disk cache format.
//!
//! File layout (all integers unsigned LEB128 varints unless noted):
//!
//! ```text
//! magic           5 bytes  "MAJID"
//! version         1 byte   FORMAT_VERSION
//! p               varint
//! mode            1 byte   0 = exactly p, 1 = at most p
//! semantics       1 byte   COUNTING_SEMANTICS (ordered-side counting)
//! entry count     varint
//! entry*          varint shape count k, then k x (varint small, varint big),
//!                 then varint value
//! ```
//!
//! Entries are written in ascending pattern order, so equal stores produce
//! identical files. Keys are reduced patterns (see `solver::reduce_pattern`).

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;
use std::sync::Mutex;

use dashmap::DashMap;
use thiserror::Error;

use crate::pattern::{BoxShape, Mode, Pattern};

pub const MAGIC: &[u8; 5] = b"MAJID";
pub const FORMAT_VERSION: u8 = 1;
/// Tag for ball-level (ordered-side) coloring counts.
pub const COUNTING_SEMANTICS: u8 = 1;

#[derive(Debug, Error)]
pub enum MemoError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("not a memo cache file (bad magic)")]
    BadMagic,
    #[error("unsupported cache format version {0}")]
    Version(u8),
    #[error("unsupported counting semantics tag {0}")]
    Semantics(u8),
    #[error("corrupt cache file: {0}")]
    Corrupt(&'static str),
    #[error("cache holds p={found_p} mode={found_mode}, expected p={p} mode={mode}")]
    Metadata {
        p: u32,
        mode: Mode,
        found_p: u32,
        found_mode: Mode,
    },
    #[error("conflicting values {old} and {new} for pattern {pattern}")]
    Conflict { pattern: Pattern, old: u32, new: u32 },
}

/// Concurrent map from reduced pattern to exact remaining-comparison value.
///
/// Lower bounds found by failed searches are kept alongside but never
/// persisted.
#[derive(Debug)]
pub struct MemoStore {
    meta: Mutex<(u32, Mode)>,
    exact: DashMap<Pattern, u32>,
    lower: DashMap<Pattern, u32>,
}

impl MemoStore {
    pub fn new(p: u32, mode: Mode) -> Self {
        MemoStore {
            meta: Mutex::new((p, mode)),
            exact: DashMap::new(),
            lower: DashMap::new(),
        }
    }

    pub fn p(&self) -> u32 {
        self.meta.lock().unwrap().0
    }

    pub fn mode(&self) -> Mode {
        self.meta.lock().unwrap().1
    }

    /// Accepts a store tagged with `(p, mode)`; an empty store is re-tagged.
    pub(crate) fn bind(&self, p: u32, mode: Mode) -> Result<(), MemoError> {
        let mut meta = self.meta.lock().unwrap();
        if *meta == (p, mode) {
            return Ok(());
        }
        if self.exact.is_empty() && self.lower.is_empty() {
            *meta = (p, mode);
            return Ok(());
        }
        Err(MemoError::Metadata {
            p,
            mode,
            found_p: meta.0,
            found_mode: meta.1,
        })
    }

    pub fn len(&self) -> usize {
        self.exact.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exact.is_empty()
    }

    pub fn get(&self, pattern: &Pattern) -> Option<u32> {
        self.exact.get(pattern).map(|v| *v)
    }

    /// Write-once insert; a rewrite must repeat the stored value.
    pub fn insert(&self, pattern: Pattern, value: u32) -> Result<(), MemoError> {
        match self.exact.entry(pattern) {
            dashmap::Entry::Occupied(e) => {
                if *e.get() != value {
                    return Err(MemoError::Conflict {
                        pattern: e.key().clone(),
                        old: *e.get(),
                        new: value,
                    });
                }
            }
            dashmap::Entry::Vacant(e) => {
                e.insert(value);
            }
        }
        Ok(())
    }

    pub(crate) fn lower_bound(&self, pattern: &Pattern) -> u32 {
        self.lower.get(pattern).map(|v| *v).unwrap_or(0)
    }

    pub(crate) fn raise_lower_bound(&self, pattern: &Pattern, bound: u32) {
        let mut e = self.lower.entry(pattern.clone()).or_insert(0);
        if *e < bound {
            *e = bound;
        }
    }

    /// Exact entries in ascending pattern order.
    pub fn entries(&self) -> Vec<(Pattern, u32)> {
        let mut out: Vec<(Pattern, u32)> = self
            .exact
            .iter()
            .map(|e| (e.key().clone(), *e.value()))
            .collect();
        out.sort();
        out
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let (p, mode) = *self.meta.lock().unwrap();
        let entries = self.entries();
        let mut buf = Vec::with_capacity(16 + entries.len() * 16);
        buf.extend_from_slice(MAGIC);
        buf.push(FORMAT_VERSION);
        put_varint(&mut buf, p as u64);
        buf.push(mode_byte(mode));
        buf.push(COUNTING_SEMANTICS);
        put_varint(&mut buf, entries.len() as u64);
        for (pattern, value) in &entries {
            put_varint(&mut buf, pattern.len() as u64);
            for s in pattern.shapes() {
                put_varint(&mut buf, s.small() as u64);
                put_varint(&mut buf, s.big() as u64);
            }
            put_varint(&mut buf, *value as u64);
        }
        buf
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, MemoError> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(5)? != MAGIC {
            return Err(MemoError::BadMagic);
        }
        let version = r.byte()?;
        if version != FORMAT_VERSION {
            return Err(MemoError::Version(version));
        }
        let p = r.varint_u32()?;
        let mode = match r.byte()? {
            0 => Mode::ExactlyP,
            1 => Mode::AtMostP,
            _ => return Err(MemoError::Corrupt("mode byte")),
        };
        let semantics = r.byte()?;
        if semantics != COUNTING_SEMANTICS {
            return Err(MemoError::Semantics(semantics));
        }
        let count = r.varint()?;
        let store = MemoStore::new(p, mode);
        for _ in 0..count {
            let k = r.varint()? as usize;
            if k == 0 || k > r.remaining() {
                return Err(MemoError::Corrupt("shape count"));
            }
            let mut shapes = Vec::with_capacity(k);
            for _ in 0..k {
                let small = r.varint_u16()?;
                let big = r.varint_u16()?;
                shapes.push(BoxShape::new(small, big).map_err(|_| MemoError::Corrupt("shape"))?);
            }
            let pattern = Pattern::canonicalize(shapes).map_err(|_| MemoError::Corrupt("pattern"))?;
            store.insert(pattern, r.varint_u32()?)?;
        }
        if r.remaining() != 0 {
            return Err(MemoError::Corrupt("trailing bytes"));
        }
        Ok(store)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), MemoError> {
        let mut f = fs::File::create(path)?;
        f.write_all(&self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, MemoError> {
        let mut bytes = Vec::new();
        fs::File::open(path)?.read_to_end(&mut bytes)?;
        MemoStore::from_bytes(&bytes)
    }

    /// Loads a cache and checks that it was written for `(p, mode)`.
    pub fn load_for(path: impl AsRef<Path>, p: u32, mode: Mode) -> Result<Self, MemoError> {
        let store = MemoStore::load(path)?;
        let found = (store.p(), store.mode());
        if found != (p, mode) {
            return Err(MemoError::Metadata {
                p,
                mode,
                found_p: found.0,
                found_mode: found.1,
            });
        }
        Ok(store)
    }
}

impl PartialEq for MemoStore {
    fn eq(&self, other: &Self) -> bool {
        (self.p(), self.mode()) == (other.p(), other.mode()) && self.entries() == other.entries()
    }
}

fn mode_byte(mode: Mode) -> u8 {
    match mode {
        Mode::ExactlyP => 0,
        Mode::AtMostP => 1,
    }
}

fn put_varint(buf: &mut Vec<u8>, mut v: u64) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            buf.push(byte);
            return;
        }
        buf.push(byte | 0x80);
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], MemoError> {
        if self.remaining() < n {
            return Err(MemoError::Corrupt("truncated"));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn byte(&mut self) -> Result<u8, MemoError> {
        Ok(self.take(1)?[0])
    }

    fn varint(&mut self) -> Result<u64, MemoError> {
        let mut v = 0u64;
        for shift in (0..64).step_by(7) {
            let b = self.byte()?;
            v |= ((b & 0x7f) as u64) << shift;
            if b & 0x80 == 0 {
                return Ok(v);
            }
        }
        Err(MemoError::Corrupt("varint too long"))
    }

    fn varint_u32(&mut self) -> Result<u32, MemoError> {
        u32::try_from(self.varint()?).map_err(|_| MemoError::Corrupt("value out of range"))
    }

    fn varint_u16(&mut self) -> Result<u16, MemoError> {
        u16::try_from(self.varint()?).map_err(|_| MemoError::Corrupt("side out of range"))
    }
}
