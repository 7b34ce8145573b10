//! Binary netpbm I/O: P6 for RGB frames, P5 for gray images and masks.

use std::io::{BufRead, Cursor, Seek, Write};

use image::codecs::pnm::PnmDecoder;
use image::{DynamicImage, ImageDecoder};

use super::raster::{BinaryMask, ImageGray8, ImageRgb8};
use super::ImageError;

fn decode<R: BufRead + Seek>(reader: R) -> Result<DynamicImage, ImageError> {
    let decoder = PnmDecoder::new(reader).map_err(|e| ImageError::Pnm(e.to_string()))?;
    if decoder.color_type().bytes_per_pixel() != decoder.color_type().channel_count() {
        return Err(ImageError::Pnm("only 8-bit samples are supported".into()));
    }
    DynamicImage::from_decoder(decoder).map_err(|e| ImageError::Pnm(e.to_string()))
}

fn encode<W: Write>(
    mut out: W,
    magic: &str,
    width: usize,
    height: usize,
    data: &[u8],
) -> Result<(), ImageError> {
    write!(out, "{magic}\n{width} {height}\n255\n")?;
    out.write_all(data)?;
    Ok(())
}

/// Reads a P6 (or any 8-bit netpbm, converted to RGB) image.
pub fn read_ppm(bytes: &[u8]) -> Result<ImageRgb8, ImageError> {
    let img = decode(Cursor::new(bytes))?.into_rgb8();
    let (w, h) = img.dimensions();
    ImageRgb8::from_raw(w as usize, h as usize, img.into_raw())
}

/// Reads a P5 (or any 8-bit netpbm, converted to luminance) image.
pub fn read_pgm(bytes: &[u8]) -> Result<ImageGray8, ImageError> {
    let img = decode(Cursor::new(bytes))?.into_luma8();
    let (w, h) = img.dimensions();
    ImageGray8::from_raw(w as usize, h as usize, img.into_raw())
}

/// Reads a P5 mask; fails unless every byte is 0x00 or 0xFF.
pub fn read_mask(bytes: &[u8]) -> Result<BinaryMask, ImageError> {
    let gray = read_pgm(bytes)?;
    BinaryMask::from_raw(gray.width(), gray.height(), gray.into_raw())
}

pub fn write_ppm<W: Write>(out: W, img: &ImageRgb8) -> Result<(), ImageError> {
    encode(out, "P6", img.width(), img.height(), img.as_raw())
}

pub fn write_pgm<W: Write>(out: W, img: &ImageGray8) -> Result<(), ImageError> {
    encode(out, "P5", img.width(), img.height(), img.as_raw())
}

pub fn write_mask<W: Write>(out: W, mask: &BinaryMask) -> Result<(), ImageError> {
    encode(out, "P5", mask.width(), mask.height(), mask.as_raw())
}
