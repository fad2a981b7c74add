//! Binary PGM (P5, maxval 255) images and plain-text XYZ point clouds.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use nalgebra::Vector3;

use crate::{Error, GrayImage, Result};

/// Encodes an image as binary PGM with a single-line header `P5 W H 255\n`.
pub fn encode_pgm(image: &GrayImage) -> Vec<u8> {
    let header = format!("P5 {} {} 255\n", image.width(), image.height());
    let mut out = Vec::with_capacity(header.len() + image.data().len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(image.data());
    out
}

/// Decodes a binary PGM. Comments (`#` to end of line) may appear anywhere in
/// the header; bytes after the raster are ignored.
pub fn decode_pgm(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(Error::MalformedPgm("missing P5 magic".into()));
    }
    let mut pos = 2;
    let mut fields = [0u32; 3];
    for field in fields.iter_mut() {
        pos = skip_whitespace_and_comments(bytes, pos)?;
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if start == pos {
            return Err(Error::MalformedPgm(format!(
                "expected a decimal header field at byte {start}"
            )));
        }
        // Digits only, so from_utf8 cannot fail.
        let text = std::str::from_utf8(&bytes[start..pos]).unwrap_or_default();
        *field = text
            .parse()
            .map_err(|_| Error::MalformedPgm(format!("header field '{text}' out of range")))?;
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(Error::UnsupportedMaxval(maxval));
    }
    if width == 0 || height == 0 {
        return Err(Error::MalformedPgm(format!("zero dimension {width}x{height}")));
    }
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => {
            return Err(Error::MalformedPgm(
                "header must end with a single whitespace byte".into(),
            ))
        }
    }
    let len = width as usize * height as usize;
    let raster = bytes.get(pos..pos + len).ok_or_else(|| {
        Error::MalformedPgm(format!(
            "truncated raster: expected {len} bytes, found {}",
            bytes.len() - pos
        ))
    })?;
    GrayImage::from_vec(width as usize, height as usize, raster.to_vec())
}

fn skip_whitespace_and_comments(bytes: &[u8], mut pos: usize) -> Result<usize> {
    loop {
        match bytes.get(pos) {
            Some(b'#') => {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            }
            Some(b) if b.is_ascii_whitespace() => pos += 1,
            Some(_) => return Ok(pos),
            None => return Err(Error::MalformedPgm("header ends prematurely".into())),
        }
    }
}

pub fn load_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_pgm(&bytes)
}

pub fn save_pgm(image: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_pgm(image)).map_err(|e| Error::io(path, e))
}

/// Reads `x y z` triples, one per line. Blank lines and `#` comments are
/// skipped.
pub fn read_xyz(path: impl AsRef<Path>) -> Result<Vec<Vector3<f64>>> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_xyz(BufReader::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn parse_xyz(reader: impl BufRead) -> Result<Vec<Vector3<f64>>> {
    let mut points = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<reader>", e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let values: Vec<f64> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::MalformedPoints {
                line: idx + 1,
                message: format!("{e}"),
            })?;
        if values.len() != 3 {
            return Err(Error::MalformedPoints {
                line: idx + 1,
                message: format!("expected 3 values, found {}", values.len()),
            });
        }
        points.push(Vector3::new(values[0], values[1], values[2]));
    }
    Ok(points)
}

pub fn write_xyz(points: &[Vector3<f64>], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut file = std::io::BufWriter::new(fs::File::create(path).map_err(|e| Error::io(path, e))?);
    for p in points {
        // {:e} round-trips f64 exactly.
        writeln!(file, "{:e} {:e} {:e}", p.x, p.y, p.z).map_err(|e| Error::io(path, e))?;
    }
    file.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn one_pixel_file_is_byte_exact() {
        let img = GrayImage::filled(1, 1, 0x2a);
        assert_eq!(encode_pgm(&img), b"P5 1 1 255\n\x2a".to_vec());
    }

    #[test]
    fn header_comments_are_tolerated() {
        let bytes = b"P5\n# made by hand\n3 # width\n2\n# maxval next\n255\n\x01\x02\x03\x04\x05\x06";
        let img = decode_pgm(bytes).unwrap();
        assert_eq!((img.width(), img.height()), (3, 2));
        assert_eq!(img.data(), &[1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn sixteen_bit_maxval_is_rejected() {
        let bytes = b"P5 1 1 65535\n\x00\x00";
        assert!(matches!(decode_pgm(bytes), Err(Error::UnsupportedMaxval(65535))));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(decode_pgm(b"P2 1 1 255\n0"), Err(Error::MalformedPgm(_))));
        assert!(matches!(decode_pgm(b"P5 2 2 255\n\x00\x00\x00"), Err(Error::MalformedPgm(_))));
        assert!(matches!(decode_pgm(b"P5 2 x 255\n"), Err(Error::MalformedPgm(_))));
        assert!(matches!(decode_pgm(b"P5 2 2"), Err(Error::MalformedPgm(_))));
    }

    #[test]
    fn save_to_empty_path_is_io_error() {
        let img = GrayImage::filled(2, 2, 0);
        assert!(matches!(save_pgm(&img, ""), Err(Error::Io { .. })));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.pgm");
        let img = GrayImage::from_fn(7, 5, |x, y| (x * 31 + y * 7) as u8);
        save_pgm(&img, &path).unwrap();
        assert_eq!(load_pgm(&path).unwrap(), img);
    }

    #[test]
    fn xyz_round_trip_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.xyz");
        let pts = vec![Vector3::new(0.1, -2.0, 3.5e-9), Vector3::new(1.0 / 3.0, 0.0, -7.25)];
        write_xyz(&pts, &path).unwrap();
        assert_eq!(read_xyz(&path).unwrap(), pts);
        assert!(matches!(
            parse_xyz("1 2\n".as_bytes()),
            Err(Error::MalformedPoints { line: 1, .. })
        ));
        assert!(matches!(
            parse_xyz("# c\n\n1 2 q\n".as_bytes()),
            Err(Error::MalformedPoints { line: 3, .. })
        ));
    }

    proptest! {
        #[test]
        fn pgm_round_trip(w in 1usize..24, h in 1usize..24, seed in any::<u64>()) {
            let img = GrayImage::from_fn(w, h, |x, y| {
                (seed.wrapping_mul(6364136223846793005).wrapping_add((x * 131 + y * 17) as u64) >> 29) as u8
            });
            prop_assert_eq!(decode_pgm(&encode_pgm(&img)).unwrap(), img);
        }
    }
}
