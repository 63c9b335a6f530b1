//! Binary field snapshots and a legacy VTK exporter.
//!
//! Snapshot layout, all little-endian: magic `ANISOFLD`, `u32` version,
//! `u32` k, three `u64` node counts, `f64` spacing, three `f64` origin
//! coordinates, then `n * k` `f64` values in node order.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::grid::{Domain, Grid};
use super::sampled::Field;
use crate::{Error, Result};

const MAGIC: &[u8; 8] = b"ANISOFLD";
const VERSION: u32 = 1;

pub fn write_snapshot(field: &Field, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let g = field.grid();
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(field.k() as u32).to_le_bytes())?;
    for n in g.dims() {
        w.write_all(&(n as u64).to_le_bytes())?;
    }
    w.write_all(&g.spacing().to_le_bytes())?;
    for o in g.origin() {
        w.write_all(&o.to_le_bytes())?;
    }
    for v in field.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a snapshot; the grid comes back with a box domain.
pub fn read_snapshot(path: &Path) -> Result<Field> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = read_u32(&mut r)?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let k = read_u32(&mut r)? as usize;
    let mut dims = [0usize; 3];
    for d in &mut dims {
        *d = usize::try_from(read_u64(&mut r)?)
            .map_err(|_| Error::Format("node count overflows".into()))?;
    }
    let spacing = read_f64(&mut r)?;
    let origin = [read_f64(&mut r)?, read_f64(&mut r)?, read_f64(&mut r)?];
    let grid = Grid::new(dims, spacing, origin, Domain::Box)
        .map_err(|e| Error::Format(e.to_string()))?;
    let count = grid
        .len()
        .checked_mul(k)
        .ok_or_else(|| Error::Format("value count overflows".into()))?;
    let mut bytes = vec![0u8; count * 8];
    r.read_exact(&mut bytes)
        .map_err(|_| Error::Format("truncated value block".into()))?;
    let values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(Error::Format("trailing bytes after value block".into()));
    }
    Field::from_values(grid, k, values)
}

pub(crate) fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)
        .map_err(|_| Error::Format("truncated header".into()))?;
    Ok(u32::from_le_bytes(b))
}

pub(crate) fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)
        .map_err(|_| Error::Format("truncated header".into()))?;
    Ok(u64::from_le_bytes(b))
}

pub(crate) fn read_f64(r: &mut impl Read) -> Result<f64> {
    Ok(f64::from_bits(read_u64(r)?))
}

/// Legacy ASCII `STRUCTURED_POINTS` file with the field stored as FIELD data
/// (x varies fastest, as the format requires).
pub fn write_vtk(field: &Field, path: &Path, name: &str) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let g = field.grid();
    let [nx, ny, nz] = g.dims();
    let o = g.origin();
    let h = g.spacing();
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "{name}")?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET STRUCTURED_POINTS")?;
    writeln!(w, "DIMENSIONS {nx} {ny} {nz}")?;
    writeln!(w, "ORIGIN {} {} {}", o[0], o[1], o[2])?;
    writeln!(w, "SPACING {h} {h} {h}")?;
    writeln!(w, "POINT_DATA {}", g.len())?;
    writeln!(w, "FIELD fields 1")?;
    writeln!(w, "{name} {} {} double", field.k(), g.len())?;
    for l in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let v = field.at(g.index(i, j, l));
                let line: Vec<String> = v.iter().map(|x| format!("{x:.17e}")).collect();
                writeln!(w, "{}", line.join(" "))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::TargetPoint;

    #[test]
    fn snapshot_roundtrip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid::new([3, 4, 5], 0.1, [-0.3, 0.0, 1.0], Domain::Box).unwrap();
        let f = Field::from_fn(g, 3, |x| TargetPoint::new(&[x[0].exp(), x[1] / 3.0, -x[2]])).unwrap();
        let path = dir.path().join("u.bin");
        write_snapshot(&f, &path).unwrap();
        let back = read_snapshot(&path).unwrap();
        assert_eq!(back.values(), f.values());
        assert_eq!(back.grid().dims(), [3, 4, 5]);
    }

    #[test]
    fn corrupt_snapshot_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.bin");
        std::fs::write(&path, b"NOTAFILE1234").unwrap();
        assert!(matches!(read_snapshot(&path), Err(Error::Format(_))));
    }

    #[test]
    fn vtk_header() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid::new([3, 3, 3], 1.0, [0.0; 3], Domain::Box).unwrap();
        let f = Field::zeros(g, 5).unwrap();
        let path = dir.path().join("u.vtk");
        write_vtk(&f, &path, "Q").unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("DIMENSIONS 3 3 3"));
        assert!(text.contains("Q 5 27 double"));
        assert_eq!(text.lines().count(), 10 + 27);
    }
}
