//! The `T3D1` binary tensor format: the ASCII magic `T3D1`, three
//! little-endian `u64` dimensions, then the entries as little-endian `f64`
//! in column-major order.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::tensor::Tensor3;

pub const MAGIC: &[u8; 4] = b"T3D1";
const HEADER_LEN: usize = 4 + 3 * 8;

pub fn write_to<W: Write>(mut w: W, x: &Tensor3) -> Result<()> {
    let (n1, n2, n3) = x.dims();
    let mut buf = Vec::with_capacity(HEADER_LEN + 8 * x.len());
    buf.extend_from_slice(MAGIC);
    for d in [n1, n2, n3] {
        buf.extend_from_slice(&(d as u64).to_le_bytes());
    }
    for v in x.data() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&buf)?;
    w.flush()?;
    Ok(())
}

pub fn read_from<R: Read>(mut r: R) -> Result<Tensor3> {
    let mut header = [0u8; HEADER_LEN];
    r.read_exact(&mut header).map_err(|_| Error::Format("truncated header".into()))?;
    if &header[..4] != MAGIC {
        return Err(Error::Format(format!("bad magic {:?}", &header[..4])));
    }
    let mut dims = [0usize; 3];
    for (d, chunk) in dims.iter_mut().zip(header[4..].chunks_exact(8)) {
        let v = u64::from_le_bytes(chunk.try_into().expect("8-byte chunk"));
        *d = usize::try_from(v).map_err(|_| Error::Format(format!("dimension {v} too large")))?;
    }
    if dims.contains(&0) {
        return Err(Error::Format(format!("zero dimension in {dims:?}")));
    }
    let count = dims[0]
        .checked_mul(dims[1])
        .and_then(|n| n.checked_mul(dims[2]))
        .and_then(|n| n.checked_mul(8).map(|_| n))
        .ok_or_else(|| Error::Format(format!("dimensions {dims:?} overflow")))?;
    let mut payload = Vec::new();
    r.read_to_end(&mut payload)?;
    if payload.len() != count * 8 {
        return Err(Error::Format(format!("expected {} payload bytes, found {}", count * 8, payload.len())));
    }
    let data: Vec<f64> = payload.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk"))).collect();
    if let Some(i) = data.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    Tensor3::new((dims[0], dims[1], dims[2]), data)
}

pub fn write_tensor(path: impl AsRef<Path>, x: &Tensor3) -> Result<()> {
    write_to(BufWriter::new(File::create(path)?), x)
}

pub fn read_tensor(path: impl AsRef<Path>) -> Result<Tensor3> {
    read_from(BufReader::new(File::open(path)?))
}
