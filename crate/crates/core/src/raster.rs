//! Grayscale image files and the box downsampler used to prepare references.
//!
//! Supported: binary (`P5`) and ASCII (`P2`) PGM with maxval exactly 255, and
//! 8-bit grayscale PNG without transparency. Anything else is rejected
//! rather than converted.

use std::fs;
use std::io::{BufReader, Cursor};
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Name of the reference downsampler, recorded in benchmark CSV headers.
pub const DOWNSAMPLER_NAME: &str = "box-mean-half-even";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RasterFormat {
    PgmBinary,
    PgmAscii,
    PngGray8,
}

impl RasterFormat {
    /// Guesses the format from a file extension; `.pgm` means binary PGM.
    pub fn from_extension(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "pgm" | "pnm" => Some(RasterFormat::PgmBinary),
            "png" => Some(RasterFormat::PngGray8),
            _ => None,
        }
    }
}

pub fn load(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes).map_err(|reason| Error::UnsupportedFormat {
        path: path.to_path_buf(),
        reason,
    })
}

pub fn save(img: &GrayImage, path: impl AsRef<Path>, format: RasterFormat) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode(img, format).map_err(|reason| Error::UnsupportedFormat {
        path: path.to_path_buf(),
        reason,
    })?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Decodes PGM or PNG bytes, dispatching on the magic number.
pub fn decode(bytes: &[u8]) -> Result<GrayImage, String> {
    match bytes {
        [b'P', b'5', ..] => decode_pgm(bytes, false),
        [b'P', b'2', ..] => decode_pgm(bytes, true),
        [b'P', d, ..] if d.is_ascii_digit() => Err(format!(
            "Netpbm variant P{} is not grayscale PGM",
            *d as char
        )),
        [0x89, b'P', b'N', b'G', ..] => decode_png(bytes),
        _ => Err("unrecognized file signature".into()),
    }
}

pub fn encode(img: &GrayImage, format: RasterFormat) -> Result<Vec<u8>, String> {
    match format {
        RasterFormat::PgmBinary => {
            let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
            out.extend_from_slice(img.pixels());
            Ok(out)
        }
        RasterFormat::PgmAscii => {
            let mut out = format!("P2\n{} {}\n255\n", img.width(), img.height());
            for r in 0..img.height() {
                let line: Vec<String> = img.row(r).iter().map(u8::to_string).collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
            Ok(out.into_bytes())
        }
        RasterFormat::PngGray8 => encode_png(img),
    }
}

/// Reads whitespace-separated header tokens, skipping `#` comments.
struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderReader<'a> {
    fn skip_space(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&b| b != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize, String> {
        self.skip_space();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| format!("malformed PGM {what}"))
    }
}

fn decode_pgm(bytes: &[u8], ascii: bool) -> Result<GrayImage, String> {
    let mut hdr = HeaderReader { bytes, pos: 2 };
    let width = hdr.number("width")?;
    let height = hdr.number("height")?;
    let maxval = hdr.number("maxval")?;
    if maxval != 255 {
        return Err(format!(
            "PGM maxval {maxval} is not 255 (only 8-bit images are supported)"
        ));
    }
    if width == 0 || height == 0 {
        return Err(format!("PGM has empty dimensions {width}x{height}"));
    }
    let count = width.checked_mul(height).ok_or("PGM dimensions overflow")?;
    let pixels = if ascii {
        let mut px = Vec::with_capacity(count);
        for _ in 0..count {
            let v = hdr.number("sample")?;
            px.push(u8::try_from(v).map_err(|_| format!("PGM sample {v} exceeds maxval"))?);
        }
        px
    } else {
        // Exactly one whitespace byte separates maxval from the raster.
        if !bytes.get(hdr.pos).is_some_and(u8::is_ascii_whitespace) {
            return Err("PGM header must end with a single whitespace byte".into());
        }
        let start = hdr.pos + 1;
        let data = bytes
            .get(start..start + count)
            .ok_or_else(|| format!("PGM raster truncated: expected {count} bytes"))?;
        data.to_vec()
    };
    GrayImage::new(width, height, pixels).map_err(|e| e.to_string())
}

fn decode_png(bytes: &[u8]) -> Result<GrayImage, String> {
    let mut decoder = png::Decoder::new(BufReader::new(Cursor::new(bytes)));
    decoder.set_transformations(png::Transformations::IDENTITY);
    let mut reader = decoder.read_info().map_err(|e| e.to_string())?;
    let info = reader.info();
    if info.color_type != png::ColorType::Grayscale {
        return Err(format!(
            "PNG color type {:?} is not single-channel grayscale",
            info.color_type
        ));
    }
    if info.bit_depth != png::BitDepth::Eight {
        return Err(format!("PNG bit depth {:?} is not 8", info.bit_depth));
    }
    if info.trns.is_some() {
        return Err("PNG carries transparency".into());
    }
    let size = reader.output_buffer_size().ok_or("PNG too large")?;
    let mut buf = vec![0; size];
    let frame = reader.next_frame(&mut buf).map_err(|e| e.to_string())?;
    let (w, h) = (frame.width as usize, frame.height as usize);
    let mut pixels = Vec::with_capacity(w * h);
    for row in buf[..frame.buffer_size()].chunks(frame.line_size) {
        pixels.extend_from_slice(&row[..w]);
    }
    GrayImage::new(w, h, pixels).map_err(|e| e.to_string())
}

fn encode_png(img: &GrayImage) -> Result<Vec<u8>, String> {
    let too_big = |_| "image too large for PNG".to_string();
    let mut out = Vec::new();
    {
        let w = u32::try_from(img.width()).map_err(too_big)?;
        let h = u32::try_from(img.height()).map_err(too_big)?;
        let mut encoder = png::Encoder::new(&mut out, w, h);
        encoder.set_color(png::ColorType::Grayscale);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder.write_header().map_err(|e| e.to_string())?;
        writer
            .write_image_data(img.pixels())
            .map_err(|e| e.to_string())?;
    }
    Ok(out)
}

/// Box-filter downsampling by an integer factor.
///
/// Each output pixel is the mean of a `factor x factor` block, rounded half
/// to even. Images whose sides are not multiples of `factor` are first padded
/// by replicating the last row and column, so the output is
/// `ceil(w / factor) x ceil(h / factor)`.
pub fn downsample(img: &GrayImage, factor: usize) -> Result<GrayImage> {
    if factor == 0 {
        return Err(Error::Parameter(
            "downsample factor must be at least 1".into(),
        ));
    }
    let out_w = img.width().div_ceil(factor);
    let out_h = img.height().div_ceil(factor);
    let count = (factor * factor) as u64;
    GrayImage::from_fn(out_w, out_h, |r, c| {
        let mut sum = 0u64;
        for y in r * factor..(r + 1) * factor {
            for x in c * factor..(c + 1) * factor {
                sum += u64::from(img.get_clamped(y, x));
            }
        }
        mean_half_even(sum, count)
    })
}

fn mean_half_even(sum: u64, count: u64) -> u8 {
    let (q, rem) = (sum / count, sum % count);
    let up = match (2 * rem).cmp(&count) {
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Equal => q % 2 == 1,
    };
    (q + u64::from(up)) as u8
}

/// Whether `downsample(img, factor)` needs edge padding.
pub fn needs_padding(img: &GrayImage, factor: usize) -> bool {
    factor > 0 && !(img.width().is_multiple_of(factor) && img.height().is_multiple_of(factor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fixture() -> GrayImage {
        GrayImage::new(2, 2, vec![0, 127, 128, 255]).unwrap()
    }

    #[test]
    fn decode_binary_pgm() {
        let mut bytes = b"P5\n2 2\n255\n".to_vec();
        bytes.extend_from_slice(&[0x00, 0x7f, 0x80, 0xff]);
        assert_eq!(decode(&bytes).unwrap(), fixture());
    }

    #[test]
    fn decode_ascii_pgm_with_comments() {
        assert_eq!(decode(b"P2 1 1 255 42").unwrap().pixels(), &[42]);
        let img = decode(b"P2\n# made by hand\n2 1\n255\n 7  9\n").unwrap();
        assert_eq!(img.pixels(), &[7, 9]);
    }

    #[test]
    fn rejects_sixteen_bit_and_other_layouts() {
        assert!(decode(b"P5\n1 1\n65535\n\x00\x01")
            .unwrap_err()
            .contains("maxval"));
        assert!(decode(b"P2 1 1 15 3").is_err());
        assert!(decode(b"P6\n1 1\n255\nabc").is_err());
        assert!(decode(b"P5\n2 2\n255\n\x00")
            .unwrap_err()
            .contains("truncated"));
        assert!(decode(b"P2 1 1 255 300").is_err());
        assert!(decode(b"GIF89a").is_err());
        assert!(decode(b"P5\n0 2\n255\n").is_err());
    }

    #[test]
    fn rejects_color_png() {
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, 1, 1);
            enc.set_color(png::ColorType::Rgb);
            enc.set_depth(png::BitDepth::Eight);
            enc.write_header()
                .unwrap()
                .write_image_data(&[1, 2, 3])
                .unwrap();
        }
        assert!(decode(&out).unwrap_err().contains("grayscale"));
    }

    #[test]
    fn file_round_trip_and_missing_file() {
        let dir = tempfile::tempdir().unwrap();
        for (name, fmt) in [
            ("a.pgm", RasterFormat::PgmBinary),
            ("b.pgm", RasterFormat::PgmAscii),
            ("c.png", RasterFormat::PngGray8),
        ] {
            let p = dir.path().join(name);
            save(&fixture(), &p, fmt).unwrap();
            assert_eq!(load(&p).unwrap(), fixture());
            let one = GrayImage::filled(1, 1, 5).unwrap();
            save(&one, &p, fmt).unwrap();
            assert_eq!(load(&p).unwrap(), one);
        }
        assert!(matches!(
            load(dir.path().join("nope.pgm")),
            Err(Error::Io { .. })
        ));
        assert!(GrayImage::new(0, 1, vec![]).is_err());
    }

    #[test]
    fn downsample_examples() {
        let img = fixture();
        assert_eq!(downsample(&img, 1).unwrap(), img);
        let one = |px: [u8; 4]| {
            downsample(&GrayImage::new(2, 2, px.to_vec()).unwrap(), 2)
                .unwrap()
                .pixels()[0]
        };
        assert_eq!(one([0, 0, 0, 4]), 1);
        assert_eq!(one([1, 1, 1, 2]), 1);
        assert_eq!(one([1, 1, 2, 2]), 2); // 1.5 -> 2
        assert_eq!(one([2, 2, 3, 3]), 2); // 2.5 -> 2
        assert!(downsample(&img, 0).is_err());
    }

    #[test]
    fn downsample_pads_by_clamping() {
        let img = GrayImage::new(3, 1, vec![0, 10, 40]).unwrap();
        let d = downsample(&img, 2).unwrap();
        assert_eq!(d.dimensions(), (2, 1));
        assert_eq!(d.pixels(), &[5, 40]);
        assert!(needs_padding(&img, 2));
        assert!(!needs_padding(&img, 1));
    }

    fn any_image() -> impl Strategy<Value = GrayImage> {
        (1usize..12, 1usize..12).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<u8>(), w * h)
                .prop_map(move |px| GrayImage::new(w, h, px).unwrap())
        })
    }

    proptest! {
        #[test]
        fn encode_decode_identity(img in any_image()) {
            for fmt in [RasterFormat::PgmBinary, RasterFormat::PgmAscii, RasterFormat::PngGray8] {
                prop_assert_eq!(&decode(&encode(&img, fmt).unwrap()).unwrap(), &img);
            }
        }

        #[test]
        fn constant_images_survive_downsampling(w in 1usize..20, h in 1usize..20, v in any::<u8>(), f in 1usize..6) {
            let d = downsample(&GrayImage::filled(w, h, v).unwrap(), f).unwrap();
            prop_assert_eq!(d.dimensions(), (w.div_ceil(f), h.div_ceil(f)));
            prop_assert!(d.pixels().iter().all(|&p| p == v));
        }
    }
}
