//! Netpbm graymap (PGM) reading and writing, ASCII (P2) and binary (P5).

use mammotex_core::GrayImage;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmEncoding {
    Ascii,
    Binary,
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self
                    .bytes
                    .get(self.pos)
                    .is_some_and(|&c| c != b'\n' && c != b'\r')
                {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u64> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(if self.pos >= self.bytes.len() {
                CliError::Pgm(format!("truncated data: missing {what}"))
            } else {
                CliError::Pgm(format!("expected a number for {what}"))
            });
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| CliError::Pgm(format!("{what} is out of range")))
    }
}

/// Parses a P2 or P5 file. 16-bit P5 samples are big-endian.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let encoding = match bytes.get(..2) {
        Some(b"P2") => PgmEncoding::Ascii,
        Some(b"P5") => PgmEncoding::Binary,
        _ => {
            return Err(CliError::Pgm(
                "unknown magic number, expected P2 or P5".into(),
            ))
        }
    };
    let mut h = Header { bytes, pos: 2 };
    if !h
        .bytes
        .get(2)
        .is_some_and(|b| b.is_ascii_whitespace() || *b == b'#')
    {
        return Err(CliError::Pgm(
            "unknown magic number, expected P2 or P5".into(),
        ));
    }
    let width = h.number("width")?;
    let height = h.number("height")?;
    let max_val = h.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(CliError::Pgm(format!(
            "nonpositive dimensions {width}x{height}"
        )));
    }
    if max_val == 0 || max_val > 65535 {
        return Err(CliError::Pgm(format!("maxval {max_val} outside 1..=65535")));
    }
    let n = usize::try_from(width * height)
        .map_err(|_| CliError::Pgm("image dimensions too large".into()))?;

    let pixels = match encoding {
        PgmEncoding::Ascii => {
            let mut px = Vec::with_capacity(n);
            for i in 0..n {
                let v = h.number(&format!("pixel {i}"))?;
                px.push(
                    u16::try_from(v)
                        .map_err(|_| CliError::Pgm(format!("pixel {i} exceeds maxval")))?,
                );
            }
            px
        }
        PgmEncoding::Binary => {
            // exactly one whitespace byte separates the header from the raster
            if !h.bytes.get(h.pos).is_some_and(u8::is_ascii_whitespace) {
                return Err(CliError::Pgm("truncated data: missing raster".into()));
            }
            let raster = &h.bytes[h.pos + 1..];
            let wide = max_val > 255;
            let need = if wide { 2 * n } else { n };
            if raster.len() < need {
                return Err(CliError::Pgm(format!(
                    "truncated data: {} of {need} raster bytes",
                    raster.len()
                )));
            }
            if wide {
                raster[..need]
                    .chunks_exact(2)
                    .map(|c| u16::from_be_bytes([c[0], c[1]]))
                    .collect()
            } else {
                raster[..need].iter().map(|&b| u16::from(b)).collect()
            }
        }
    };
    if let Some(i) = pixels.iter().position(|&v| u64::from(v) > max_val) {
        return Err(CliError::Pgm(format!(
            "pixel {i} value {} exceeds maxval {max_val}",
            pixels[i]
        )));
    }
    Ok(GrayImage::new(
        width as usize,
        height as usize,
        max_val as u16,
        pixels,
    )?)
}

pub fn write_pgm(img: &GrayImage, encoding: PgmEncoding) -> Vec<u8> {
    let magic = match encoding {
        PgmEncoding::Ascii => "P2",
        PgmEncoding::Binary => "P5",
    };
    let mut out = format!(
        "{magic}\n{} {}\n{}\n",
        img.width(),
        img.height(),
        img.max_val()
    )
    .into_bytes();
    match encoding {
        PgmEncoding::Ascii => {
            for row in img.pixels().chunks(img.width()) {
                let line: Vec<String> = row.iter().map(u16::to_string).collect();
                out.extend_from_slice(line.join(" ").as_bytes());
                out.push(b'\n');
            }
        }
        PgmEncoding::Binary if img.max_val() > 255 => {
            for &v in img.pixels() {
                out.extend_from_slice(&v.to_be_bytes());
            }
        }
        PgmEncoding::Binary => out.extend(img.pixels().iter().map(|&v| v as u8)),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_ascii() {
        let img = read_pgm(b"P2\n1 1\n255\n7").unwrap();
        assert_eq!(
            (img.width(), img.height(), img.max_val(), img.pixels()),
            (1, 1, 255, &[7u16][..])
        );
    }

    #[test]
    fn ascii_and_binary_agree() {
        let img = GrayImage::new(2, 2, 200, vec![0, 17, 200, 99]).unwrap();
        let a = read_pgm(&write_pgm(&img, PgmEncoding::Ascii)).unwrap();
        let b = read_pgm(&write_pgm(&img, PgmEncoding::Binary)).unwrap();
        assert_eq!(a, img);
        assert_eq!(b, img);
    }

    #[test]
    fn sixteen_bit_round_trip() {
        let img = GrayImage::new(3, 1, 4095, vec![0, 4095, 258]).unwrap();
        assert_eq!(
            read_pgm(&write_pgm(&img, PgmEncoding::Binary)).unwrap(),
            img
        );
        assert_eq!(read_pgm(&write_pgm(&img, PgmEncoding::Ascii)).unwrap(), img);
    }

    #[test]
    fn comments_in_header() {
        let img = read_pgm(b"P5\n# made by hand\n2 # width\n1\n# max\n255\n\x01\x02").unwrap();
        assert_eq!(img.pixels(), &[1, 2]);
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            &b"P3\n1 1\n255\n7"[..],
            b"P2\n2 2\n255\n1 2 3",
            b"P5\n2 2\n255\n\x01\x02",
            b"P2\n1 1\n0\n0",
            b"P2\n1 1\n70000\n0",
            b"P2\n0 1\n255\n",
            b"P2\n1 1\n10\n11",
            b"P2",
        ] {
            assert!(read_pgm(bad).is_err(), "{:?}", String::from_utf8_lossy(bad));
        }
        assert!(read_pgm(b"P3\n1 1\n255\n7")
            .unwrap_err()
            .to_string()
            .contains("magic"));
        assert!(read_pgm(b"P2\n2 2\n255\n1 2 3")
            .unwrap_err()
            .to_string()
            .contains("truncated"));
    }
}
