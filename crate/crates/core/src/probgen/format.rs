//! Binary instance files.
//!
//! Layout, all little-endian:
//!
//! ```text
//! "LSUP" | u32 version | u64 m | u64 n | f64 kappa | f64 s | u64 seed
//! | A (m*n f64, row-major) | b (m) | c (n) | lower (n) | upper (n)
//! ```
//!
//! Version 1 implies the generator recorded in [`GENERATOR_NAME`].

use std::fs;
use std::io::Write;
use std::path::Path;

use super::instance::{InstanceMeta, LpInstance, FORMAT_VERSION};
use crate::densela::{DenseMatrix, Vector, GENERATOR_NAME};
use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"LSUP";
const HEADER_LEN: usize = 4 + 4 + 8 + 8 + 8 + 8 + 8;

pub fn encode_instance(inst: &LpInstance<f64>) -> Vec<u8> {
    let (m, n) = (inst.m(), inst.n());
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * (m * n + m + 3 * n));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(m as u64).to_le_bytes());
    out.extend_from_slice(&(n as u64).to_le_bytes());
    out.extend_from_slice(&inst.meta.kappa.to_le_bytes());
    out.extend_from_slice(&inst.meta.s.to_le_bytes());
    out.extend_from_slice(&inst.meta.seed.to_le_bytes());
    for block in [
        inst.a.as_slice(),
        inst.b.as_slice(),
        inst.c.as_slice(),
        inst.lower.as_slice(),
        inst.upper.as_slice(),
    ] {
        for v in block {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

pub fn write_instance(inst: &LpInstance<f64>, path: impl AsRef<Path>) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(&encode_instance(inst))?;
    f.flush()?;
    Ok(())
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<LpInstance<f64>> {
    decode_instance(&fs::read(path)?)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, len: usize, what: &str) -> Result<&'a [u8]> {
        let avail = self.bytes.len() - self.pos;
        if avail < len {
            return Err(Error::Format {
                offset: self.pos as u64,
                message: format!("truncated {what}: expected {len} bytes, found {avail}"),
            });
        }
        let s = &self.bytes[self.pos..self.pos + len];
        self.pos += len;
        Ok(s)
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn f64s(&mut self, count: usize, what: &str) -> Result<Vec<f64>> {
        let start = self.pos as u64;
        let len = count.checked_mul(8).ok_or_else(|| Error::Format {
            offset: start,
            message: format!("{what} length overflows"),
        })?;
        let raw = self.take(len, what)?;
        let vals: Vec<f64> = raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        if let Some(i) = vals.iter().position(|v| !v.is_finite()) {
            return Err(Error::Format {
                offset: start + 8 * i as u64,
                message: format!("non-finite value in {what}"),
            });
        }
        Ok(vals)
    }
}

pub fn decode_instance(bytes: &[u8]) -> Result<LpInstance<f64>> {
    let mut cur = Cursor { bytes, pos: 0 };
    let magic = cur.take(4, "magic")?;
    if magic != MAGIC {
        return Err(Error::Format { offset: 0, message: format!("bad magic {magic:?}, expected \"LSUP\"") });
    }
    let version = cur.u32("version")?;
    if version != FORMAT_VERSION {
        return Err(Error::Format { offset: 4, message: format!("unsupported version {version}") });
    }
    let m = cur.u64("m")? as usize;
    let n = cur.u64("n")? as usize;
    let kappa = cur.f64("kappa")?;
    let s = cur.f64("s")?;
    let seed = cur.u64("seed")?;
    let mn = m.checked_mul(n).ok_or_else(|| Error::Format {
        offset: 8,
        message: format!("dimensions {m}x{n} overflow"),
    })?;
    let a = cur.f64s(mn, "A")?;
    let b = cur.f64s(m, "b")?;
    let c = cur.f64s(n, "c")?;
    let lower = cur.f64s(n, "lower")?;
    let upper = cur.f64s(n, "upper")?;
    if cur.pos != bytes.len() {
        return Err(Error::Format {
            offset: cur.pos as u64,
            message: format!("{} trailing bytes", bytes.len() - cur.pos),
        });
    }
    let mut inst = LpInstance::from_parts(
        DenseMatrix::from_vec_unchecked(m, n, a),
        Vector::from_vec_unchecked(b),
        Vector::from_vec_unchecked(c),
        Vector::from_vec_unchecked(lower),
        Vector::from_vec_unchecked(upper),
    )
    .map_err(|e| Error::Format { offset: HEADER_LEN as u64, message: e.to_string() })?;
    inst.meta = InstanceMeta {
        m,
        n,
        kappa,
        seed,
        s,
        generator: GENERATOR_NAME.to_string(),
        format_version: version,
    };
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probgen::generate_instance;

    #[test]
    fn round_trip() {
        let inst = generate_instance::<f64>(6, 9, 1e3, 7).unwrap();
        let back = decode_instance(&encode_instance(&inst)).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn wrong_magic() {
        let mut bytes = encode_instance(&generate_instance::<f64>(3, 4, 10.0, 1).unwrap());
        bytes[0] = b'X';
        assert!(matches!(decode_instance(&bytes), Err(Error::Format { offset: 0, .. })));
    }

    #[test]
    fn wrong_version() {
        let mut bytes = encode_instance(&generate_instance::<f64>(3, 4, 10.0, 1).unwrap());
        bytes[4] = 2;
        assert!(matches!(decode_instance(&bytes), Err(Error::Format { offset: 4, .. })));
    }

    #[test]
    fn truncated_inside_a() {
        let bytes = encode_instance(&generate_instance::<f64>(3, 4, 10.0, 1).unwrap());
        let cut = HEADER_LEN + 8 * 5 + 3;
        match decode_instance(&bytes[..cut]) {
            Err(Error::Format { offset, message }) => {
                assert_eq!(offset, HEADER_LEN as u64);
                assert!(message.contains("expected 96 bytes, found 43"), "{message}");
                assert!(message.contains('A'));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn trailing_bytes() {
        let mut bytes = encode_instance(&generate_instance::<f64>(3, 4, 10.0, 1).unwrap());
        bytes.push(0);
        assert!(matches!(decode_instance(&bytes), Err(Error::Format { .. })));
    }
}
