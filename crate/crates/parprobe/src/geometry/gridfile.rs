//! Raw grid files: indicator families (byte body) and scalar field
//! snapshots (f64 little-endian body), each with a one-line ASCII header.

use super::inclusion::RasterFamily;
use crate::{Error, Result};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

/// `parprobe-grid n=2 nx=.. ny=.. steps=.. spacing=.. ox=.. oy=.. T=..`
/// followed by nx·ny·steps indicator bytes, time-slice outer, row-major
/// within each slice. Slices are uniform on [0, T] including both ends.
pub fn write_raster(path: &Path, fam: &RasterFamily) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(
        f,
        "parprobe-grid n={} nx={} ny={} steps={} spacing={:.17e} ox={:.17e} oy={:.17e} T={:.17e}",
        fam.n, fam.nx, fam.ny, fam.steps, fam.spacing, fam.origin[0], fam.origin[1], fam.t_end
    )?;
    f.write_all(&fam.indicator)?;
    Ok(())
}

pub fn read_raster(path: &Path) -> Result<RasterFamily> {
    let mut r = BufReader::new(std::fs::File::open(path)?);
    let mut header = String::new();
    r.read_line(&mut header)?;
    let kv = parse_header(&header, "parprobe-grid")?;
    let n = get_usize(&kv, "n")?;
    let nx = get_usize(&kv, "nx")?;
    let ny = get_usize(&kv, "ny")?;
    let steps = get_usize(&kv, "steps")?;
    let spacing = get_f64(&kv, "spacing")?;
    let ox = get_f64(&kv, "ox")?;
    let oy = get_f64(&kv, "oy")?;
    let t_end = get_f64(&kv, "T")?;
    if n != 1 && n != 2 {
        return Err(Error::Config(format!("grid file dimension must be 1 or 2, got {n}")));
    }
    let mut indicator = vec![0u8; nx * ny * steps];
    r.read_exact(&mut indicator)
        .map_err(|e| Error::Config(format!("grid body truncated: {e}")))?;
    Ok(RasterFamily { n, origin: [ox, oy], nx, ny, spacing, t_end, steps, indicator })
}

/// `parprobe-field nx=.. ny=.. spacing=.. ox=.. oy=.. t=..` + f64 LE body.
pub fn write_field(
    path: &Path,
    values: &[f64],
    nx: usize,
    ny: usize,
    spacing: f64,
    origin: [f64; 2],
    t: f64,
) -> Result<()> {
    if values.len() != nx * ny {
        return Err(Error::Precondition(format!(
            "field body length {} does not match {nx}x{ny}",
            values.len()
        )));
    }
    let mut f = std::fs::File::create(path)?;
    writeln!(
        f,
        "parprobe-field nx={nx} ny={ny} spacing={spacing:.17e} ox={:.17e} oy={:.17e} t={t:.17e}",
        origin[0], origin[1]
    )?;
    let mut buf = Vec::with_capacity(values.len() * 8);
    for v in values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    f.write_all(&buf)?;
    Ok(())
}

pub struct FieldSnapshot {
    pub values: Vec<f64>,
    pub nx: usize,
    pub ny: usize,
    pub spacing: f64,
    pub origin: [f64; 2],
    pub t: f64,
}

pub fn read_field(path: &Path) -> Result<FieldSnapshot> {
    let mut r = BufReader::new(std::fs::File::open(path)?);
    let mut header = String::new();
    r.read_line(&mut header)?;
    let kv = parse_header(&header, "parprobe-field")?;
    let nx = get_usize(&kv, "nx")?;
    let ny = get_usize(&kv, "ny")?;
    let spacing = get_f64(&kv, "spacing")?;
    let origin = [get_f64(&kv, "ox")?, get_f64(&kv, "oy")?];
    let t = get_f64(&kv, "t")?;
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    if buf.len() != nx * ny * 8 {
        return Err(Error::Config(format!(
            "field body has {} bytes, expected {}",
            buf.len(),
            nx * ny * 8
        )));
    }
    let values = buf
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(FieldSnapshot { values, nx, ny, spacing, origin, t })
}

fn parse_header(line: &str, magic: &str) -> Result<std::collections::BTreeMap<String, String>> {
    let mut it = line.split_whitespace();
    if it.next() != Some(magic) {
        return Err(Error::Config(format!("expected '{magic}' header, got '{}'", line.trim())));
    }
    let mut kv = std::collections::BTreeMap::new();
    for tok in it {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("bad header token '{tok}'")))?;
        kv.insert(k.to_string(), v.to_string());
    }
    Ok(kv)
}

fn get_usize(kv: &std::collections::BTreeMap<String, String>, key: &str) -> Result<usize> {
    kv.get(key)
        .ok_or_else(|| Error::Config(format!("header missing '{key}'")))?
        .parse()
        .map_err(|_| Error::Config(format!("header field '{key}' is not an integer")))
}

fn get_f64(kv: &std::collections::BTreeMap<String, String>, key: &str) -> Result<f64> {
    kv.get(key)
        .ok_or_else(|| Error::Config(format!("header missing '{key}'")))?
        .parse()
        .map_err(|_| Error::Config(format!("header field '{key}' is not a number")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::inclusion::InclusionFamily;

    #[test]
    fn raster_roundtrip() {
        let dir = std::env::temp_dir().join("parprobe_gridfile_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("fam.grid");
        let (nx, ny, steps) = (16usize, 12usize, 3usize);
        let mut indicator = vec![0u8; nx * ny * steps];
        for s in 0..steps {
            for iy in 0..ny {
                for ix in 0..nx {
                    if (ix + s) % 3 == 0 && iy % 2 == 0 {
                        indicator[s * nx * ny + ix + nx * iy] = 1;
                    }
                }
            }
        }
        let fam = RasterFamily {
            n: 2,
            origin: [0.25, -0.5],
            nx,
            ny,
            spacing: 0.125,
            t_end: 2.0,
            steps,
            indicator,
        };
        write_raster(&path, &fam).unwrap();
        let back = read_raster(&path).unwrap();
        assert_eq!(back.nx, nx);
        assert_eq!(back.indicator, fam.indicator);
        assert_eq!(back.spacing, fam.spacing);

        // indicator lookup picks the right slice and cell
        let inc = InclusionFamily::from_raster(back);
        let x = [0.25 + 0.5 * 0.125, -0.5 + 0.5 * 0.125];
        assert_eq!(inc.indicator(x, 0.0), fam.indicator[0] != 0);
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn field_roundtrip() {
        let dir = std::env::temp_dir().join("parprobe_gridfile_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("field.bin");
        let values: Vec<f64> = (0..20).map(|i| (i as f64).sin()).collect();
        write_field(&path, &values, 5, 4, 0.1, [0.0, 0.0], 0.75).unwrap();
        let snap = read_field(&path).unwrap();
        assert_eq!(snap.values, values);
        assert_eq!(snap.t, 0.75);
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn truncated_body_is_a_config_error() {
        let dir = std::env::temp_dir().join("parprobe_gridfile_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("trunc.grid");
        std::fs::write(&path, b"parprobe-grid n=2 nx=4 ny=4 steps=2 spacing=0.1 ox=0 oy=0 T=1\nxx")
            .unwrap();
        assert!(matches!(read_raster(&path), Err(Error::Config(_))));
        std::fs::remove_file(&path).unwrap();
    }
}
