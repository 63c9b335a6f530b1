//! Binary files for mesh and annulus fields.
//!
//! Layout, little-endian: magic (`ANISOSPH` for mesh fields, `ANISOANN` for
//! annulus fields), `u32` version, `u32` k, `u32` level ν, `u32` samples per
//! cell edge, `u32` radial intervals (0 for mesh fields), then the values in
//! storage order. The sample count follows from ν and the samples per edge.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::mesh::MAX_NU;
use super::sampling::{AnnulusField, MeshField};
use crate::field::{read_f64, read_u32};
use crate::manifold::MAX_K;
use crate::{Error, Result};

const MESH_MAGIC: &[u8; 8] = b"ANISOSPH";
const ANNULUS_MAGIC: &[u8; 8] = b"ANISOANN";
const VERSION: u32 = 1;

/// Samples of the lattice at level `nu` with `s` samples per cell edge.
pub fn sample_count(nu: u32, s: usize) -> usize {
    let n = (1usize << nu) * s;
    6 * n * n + 2
}

fn write(path: &Path, magic: &[u8; 8], header: [u32; 4], values: &[f64]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(magic)?;
    w.write_all(&VERSION.to_le_bytes())?;
    for h in header {
        w.write_all(&h.to_le_bytes())?;
    }
    for v in values {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn read(path: &Path, magic: &[u8; 8]) -> Result<([u32; 4], Vec<f64>)> {
    let mut r = BufReader::new(File::open(path)?);
    let mut m = [0u8; 8];
    r.read_exact(&mut m)
        .map_err(|_| Error::Format("truncated header".into()))?;
    if &m != magic {
        return Err(Error::Format("bad magic".into()));
    }
    let version = read_u32(&mut r)?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let header = [read_u32(&mut r)?, read_u32(&mut r)?, read_u32(&mut r)?, read_u32(&mut r)?];
    let [k, nu, s, layers] = header.map(|x| x as usize);
    if !(1..=MAX_K).contains(&k) || !(1..=MAX_NU as usize).contains(&nu) || !(2..=4096).contains(&s) {
        return Err(Error::Format(format!("invalid header k = {k}, level = {nu}, samples = {s}")));
    }
    let count = sample_count(nu as u32, s)
        .checked_mul(k)
        .and_then(|c| c.checked_mul(layers + 1))
        .ok_or_else(|| Error::Format("value count overflows".into()))?;
    let mut values = Vec::with_capacity(count);
    for _ in 0..count {
        values.push(read_f64(&mut r).map_err(|_| Error::Format("truncated value block".into()))?);
    }
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(Error::Format("trailing bytes after value block".into()));
    }
    Ok((header, values))
}

pub fn write_mesh_field(field: &MeshField, path: &Path) -> Result<()> {
    let header = [field.k() as u32, field.nu(), field.samples_per_cell() as u32, 0];
    write(path, MESH_MAGIC, header, field.values())
}

pub fn read_mesh_field(path: &Path) -> Result<MeshField> {
    let ([k, nu, s, layers], values) = read(path, MESH_MAGIC)?;
    if layers != 0 {
        return Err(Error::Format("mesh field with radial layers".into()));
    }
    Ok(MeshField::raw(nu, s as usize, k as usize, values))
}

pub fn write_annulus(field: &AnnulusField, path: &Path) -> Result<()> {
    let header = [
        field.k() as u32,
        field.nu(),
        field.samples_per_cell() as u32,
        field.layers() as u32,
    ];
    write(path, ANNULUS_MAGIC, header, field.values())
}

pub fn read_annulus(path: &Path) -> Result<AnnulusField> {
    let ([k, nu, s, layers], values) = read(path, ANNULUS_MAGIC)?;
    if layers == 0 {
        return Err(Error::Format("annulus field without radial layers".into()));
    }
    Ok(AnnulusField::raw(nu, s as usize, layers as usize, k as usize, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::luckhaus::MeshSampling;
    use crate::manifold::TargetPoint;

    #[test]
    fn counts_match_the_sampling() {
        for (nu, s) in [(1, 2), (2, 3), (3, 7)] {
            assert_eq!(MeshSampling::new(nu, s).unwrap().len(), sample_count(nu, s));
        }
    }

    #[test]
    fn mesh_field_round_trip() {
        let samp = MeshSampling::new(1, 3).unwrap();
        let f = MeshField::from_fn(&samp, 3, |x| TargetPoint::new(&x)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("u.sph");
        write_mesh_field(&f, &p).unwrap();
        assert_eq!(read_mesh_field(&p).unwrap(), f);
        assert!(read_annulus(&p).is_err());
    }
}
