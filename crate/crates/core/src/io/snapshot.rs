//! Binary coefficient snapshots.
//!
//! Layout (little endian): `b"GQGS"`, `u32` version, `u32` lmax, `f64` time,
//! then `(re, im)` pairs of `f64` for `m = 0..=lmax`, `l = m..=lmax`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::spectral::{triangle_len, SpectralField};
use crate::{Error, Result};

pub const MAGIC: [u8; 4] = *b"GQGS";
pub const VERSION: u32 = 1;
/// Size of the fixed header in bytes.
pub const HEADER_LEN: usize = 4 + 4 + 4 + 8;

/// Coefficients of one field at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub field: SpectralField,
}

impl Snapshot {
    pub fn new(time: f64, field: SpectralField) -> Self {
        Self { time, field }
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        let lmax = u32::try_from(self.field.lmax()).map_err(|_| Error::Format("lmax exceeds u32".into()))?;
        w.write_all(&MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&lmax.to_le_bytes())?;
        w.write_all(&self.time.to_le_bytes())?;
        for c in self.field.coeffs() {
            w.write_all(&c.re.to_le_bytes())?;
            w.write_all(&c.im.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic).map_err(truncated)?;
        if magic != MAGIC {
            return Err(Error::Format(format!("bad magic {magic:?}, expected \"GQGS\"")));
        }
        let version = read_u32(&mut r)?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported snapshot version {version}")));
        }
        let lmax = read_u32(&mut r)? as usize;
        let time = read_f64(&mut r)?;
        let mut coeffs = Vec::with_capacity(triangle_len(lmax));
        for _ in 0..triangle_len(lmax) {
            let re = read_f64(&mut r)?;
            let im = read_f64(&mut r)?;
            coeffs.push(Complex64::new(re, im));
        }
        let mut rest = [0u8; 1];
        if r.read(&mut rest)? != 0 {
            return Err(Error::Format("trailing bytes after snapshot payload".into()));
        }
        Ok(Self { time, field: SpectralField::from_coeffs(lmax, coeffs) })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.write_to(BufWriter::new(File::create(path)?))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::read_from(BufReader::new(File::open(path)?))
    }
}

fn truncated(e: std::io::Error) -> Error {
    if e.kind() == std::io::ErrorKind::UnexpectedEof {
        Error::Format("snapshot truncated".into())
    } else {
        Error::Io(e)
    }
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b).map_err(truncated)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b).map_err(truncated)?;
    Ok(f64::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Snapshot {
        let f = SpectralField::from_fn(5, |l, m| {
            let im = if m == 0 { 0.0 } else { -1.0 / (l + m) as f64 };
            Complex64::new((l as f64).sqrt() * 1e-7 + m as f64, im)
        });
        Snapshot::new(0.1 + 0.2, f)
    }

    #[test]
    fn byte_layout() {
        let mut buf = Vec::new();
        sample().write_to(&mut buf).unwrap();
        assert_eq!(buf.len(), HEADER_LEN + triangle_len(5) * 16);
        assert_eq!(&buf[..4], b"GQGS");
        assert_eq!(u32::from_le_bytes(buf[4..8].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(buf[8..12].try_into().unwrap()), 5);
        assert_eq!(f64::from_le_bytes(buf[12..20].try_into().unwrap()), 0.1 + 0.2);
        // second payload entry is (l, m) = (1, 0)
        let re = f64::from_le_bytes(buf[36..44].try_into().unwrap());
        assert_eq!(re, 1e-7);
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let s = sample();
        let mut buf = Vec::new();
        s.write_to(&mut buf).unwrap();
        let back = Snapshot::read_from(buf.as_slice()).unwrap();
        assert_eq!(back.time.to_bits(), s.time.to_bits());
        for (a, b) in back.field.coeffs().iter().zip(s.field.coeffs()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn rejects_malformed_input() {
        let mut buf = Vec::new();
        sample().write_to(&mut buf).unwrap();
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(matches!(Snapshot::read_from(bad.as_slice()), Err(Error::Format(_))));
        let mut bad = buf.clone();
        bad[4] = 2;
        assert!(matches!(Snapshot::read_from(bad.as_slice()), Err(Error::Format(_))));
        assert!(matches!(Snapshot::read_from(&buf[..buf.len() - 3]), Err(Error::Format(_))));
        let mut long = buf.clone();
        long.push(0);
        assert!(matches!(Snapshot::read_from(long.as_slice()), Err(Error::Format(_))));
    }
}
