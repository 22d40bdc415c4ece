//! The NPLC prime-cache file: little-endian, no padding, bit-exact across
//! platforms.
//!
//! Layout: magic `"NPLC"` (4 bytes), format version u32 = 1, limit u64,
//! count u64, then count × u64 primes ascending.

use std::fmt;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use nplab_core::primes::PrimeCache;

pub const MAGIC: [u8; 4] = *b"NPLC";
pub const FORMAT_VERSION: u32 = 1;

/// Errors distinguishing every way a cache file can be unusable.
#[derive(Debug)]
pub enum CacheFileError {
    Io(io::Error),
    BadMagic {
        found: [u8; 4],
    },
    UnsupportedVersion {
        found: u32,
    },
    /// Payload ended before `count` primes were read.
    Truncated {
        expected_primes: u64,
        read_primes: u64,
    },
    /// Payload continues past `count` primes.
    TrailingData {
        expected_primes: u64,
    },
    /// Structurally invalid content (ordering, range, first prime).
    Malformed(nplab_core::Error),
}

impl fmt::Display for CacheFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CacheFileError::Io(e) => write!(f, "cache file i/o error: {e}"),
            CacheFileError::BadMagic { found } => {
                write!(
                    f,
                    "not a prime cache file (magic {found:?}, expected {MAGIC:?})"
                )
            }
            CacheFileError::UnsupportedVersion { found } => {
                write!(
                    f,
                    "unsupported cache format version {found} (expected {FORMAT_VERSION})"
                )
            }
            CacheFileError::Truncated {
                expected_primes,
                read_primes,
            } => {
                write!(f, "cache file truncated: header promises {expected_primes} primes, payload holds {read_primes}")
            }
            CacheFileError::TrailingData { expected_primes } => {
                write!(
                    f,
                    "cache file has data past the {expected_primes} primes its header promises"
                )
            }
            CacheFileError::Malformed(e) => write!(f, "cache file content invalid: {e}"),
        }
    }
}

impl std::error::Error for CacheFileError {}

impl From<io::Error> for CacheFileError {
    fn from(e: io::Error) -> Self {
        CacheFileError::Io(e)
    }
}

/// Header fields, readable without loading the payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CacheHeader {
    pub version: u32,
    pub limit: u64,
    pub count: u64,
}

/// Write `cache` to `path` in the NPLC format.
pub fn save_cache(cache: &PrimeCache, path: &Path) -> Result<(), CacheFileError> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&MAGIC)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    w.write_all(&cache.limit().to_le_bytes())?;
    w.write_all(&cache.count().to_le_bytes())?;
    for &p in cache.primes() {
        w.write_all(&p.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn read_header(r: &mut impl Read) -> Result<CacheHeader, CacheFileError> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if magic != MAGIC {
        return Err(CacheFileError::BadMagic { found: magic });
    }
    let mut buf4 = [0u8; 4];
    r.read_exact(&mut buf4)?;
    let version = u32::from_le_bytes(buf4);
    if version != FORMAT_VERSION {
        return Err(CacheFileError::UnsupportedVersion { found: version });
    }
    let mut buf8 = [0u8; 8];
    r.read_exact(&mut buf8)?;
    let limit = u64::from_le_bytes(buf8);
    r.read_exact(&mut buf8)?;
    let count = u64::from_le_bytes(buf8);
    Ok(CacheHeader {
        version,
        limit,
        count,
    })
}

/// Read only the header of an NPLC file.
pub fn load_header(path: &Path) -> Result<CacheHeader, CacheFileError> {
    let mut r = BufReader::new(File::open(path)?);
    read_header(&mut r)
}

/// Load a full cache, round-tripping [`save_cache`] exactly.
pub fn load_cache(path: &Path) -> Result<PrimeCache, CacheFileError> {
    let mut r = BufReader::new(File::open(path)?);
    let header = read_header(&mut r)?;
    let mut primes = Vec::with_capacity(header.count.min(1 << 32) as usize);
    let mut buf8 = [0u8; 8];
    for read_primes in 0..header.count {
        if let Err(e) = r.read_exact(&mut buf8) {
            if e.kind() == io::ErrorKind::UnexpectedEof {
                return Err(CacheFileError::Truncated {
                    expected_primes: header.count,
                    read_primes,
                });
            }
            return Err(e.into());
        }
        primes.push(u64::from_le_bytes(buf8));
    }
    let mut one = [0u8; 1];
    match r.read(&mut one) {
        Ok(0) => {}
        Ok(_) => {
            return Err(CacheFileError::TrailingData {
                expected_primes: header.count,
            })
        }
        Err(e) => return Err(e.into()),
    }
    PrimeCache::from_parts(header.limit, primes).map_err(CacheFileError::Malformed)
}


#[cfg(test)]
mod proptests {
    use super::*;
    use nplab_core::primes::build_cache;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn round_trip_identity(limit in 2u64..5000) {
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("rt.nplc");
            let cache = build_cache(limit, 64).unwrap();
            save_cache(&cache, &path).unwrap();
            prop_assert_eq!(load_cache(&path).unwrap(), cache);
        }
    }
}
