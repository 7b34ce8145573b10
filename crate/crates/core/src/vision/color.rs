//! Color space conversions.
//!
//! Hue is stored on a full 8-bit circle: 360° maps to 256 steps and values are
//! truncated, so pure green (120°) becomes 85.

use super::raster::{ImageGray8, ImageHsv8, ImageRgb8};

/// Converts one RGB triple to 8-bit HSV.
///
/// Integer-exact: the hue equals `floor(h_degrees * 256 / 360) mod 256`.
#[inline]
pub fn rgb_to_hsv_pixel([r, g, b]: [u8; 3]) -> [u8; 3] {
    let (r, g, b) = (r as i32, g as i32, b as i32);
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;
    if max == 0 {
        return [0, 0, 0];
    }
    let s = ((delta * 255 + max / 2) / max) as u8;
    if delta == 0 {
        return [0, s, max as u8];
    }
    // Position around the hue circle in units of delta / 6 of a full turn.
    let mut turn = if max == r {
        g - b
    } else if max == g {
        2 * delta + (b - r)
    } else {
        4 * delta + (r - g)
    };
    if turn < 0 {
        turn += 6 * delta;
    }
    let h = (turn * 256 / (6 * delta)) % 256;
    [h as u8, s, max as u8]
}

/// Inverse of [`rgb_to_hsv_pixel`] up to quantisation, used to paint synthetic scenes.
pub fn hsv_to_rgb_pixel([h, s, v]: [u8; 3]) -> [u8; 3] {
    let v_f = v as f64;
    if s == 0 {
        return [v, v, v];
    }
    let s_f = s as f64 / 255.0;
    let h_deg = h as f64 * 360.0 / 256.0;
    let sector = h_deg / 60.0;
    let i = sector.floor() as i32;
    let f = sector - i as f64;
    let p = v_f * (1.0 - s_f);
    let q = v_f * (1.0 - s_f * f);
    let t = v_f * (1.0 - s_f * (1.0 - f));
    let (r, g, b) = match i.rem_euclid(6) {
        0 => (v_f, t, p),
        1 => (q, v_f, p),
        2 => (p, v_f, t),
        3 => (p, q, v_f),
        4 => (t, p, v_f),
        _ => (v_f, p, q),
    };
    [r.round() as u8, g.round() as u8, b.round() as u8]
}

pub fn rgb_to_hsv(img: &ImageRgb8) -> ImageHsv8 {
    let mut out = ImageHsv8::new(img.width(), img.height());
    for (dst, src) in out
        .as_raw_mut()
        .chunks_exact_mut(3)
        .zip(img.as_raw().chunks_exact(3))
    {
        dst.copy_from_slice(&rgb_to_hsv_pixel([src[0], src[1], src[2]]));
    }
    out
}

/// Rec. 601 luma in fixed point.
pub fn rgb_to_gray(img: &ImageRgb8) -> ImageGray8 {
    let mut out = ImageGray8::new(img.width(), img.height());
    for (dst, src) in out
        .as_raw_mut()
        .iter_mut()
        .zip(img.as_raw().chunks_exact(3))
    {
        let y = 77 * src[0] as u32 + 150 * src[1] as u32 + 29 * src[2] as u32;
        *dst = ((y + 128) >> 8) as u8;
    }
    out
}

/// Smallest of the three channels.
///
/// Bright neutral surfaces stay bright while saturated colors drop to the
/// level of a dark background, so a colored marker leaves no edge against it.
pub fn achromatic_luma(img: &ImageRgb8) -> ImageGray8 {
    let mut out = ImageGray8::new(img.width(), img.height());
    for (dst, src) in out
        .as_raw_mut()
        .iter_mut()
        .zip(img.as_raw().chunks_exact(3))
    {
        *dst = src[0].min(src[1]).min(src[2]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Floating point reference conversion used as an oracle.
    fn reference_hsv(r: u8, g: u8, b: u8) -> (f64, f64, f64) {
        let (rf, gf, bf) = (r as f64 / 255.0, g as f64 / 255.0, b as f64 / 255.0);
        let max = rf.max(gf).max(bf);
        let min = rf.min(gf).min(bf);
        let d = max - min;
        let h = if d == 0.0 {
            0.0
        } else if max == rf {
            60.0 * (((gf - bf) / d).rem_euclid(6.0))
        } else if max == gf {
            60.0 * ((bf - rf) / d + 2.0)
        } else {
            60.0 * ((rf - gf) / d + 4.0)
        };
        let s = if max == 0.0 { 0.0 } else { d / max };
        (h, s, max)
    }

    #[test]
    fn documented_examples() {
        assert_eq!(rgb_to_hsv_pixel([0, 0, 0]), [0, 0, 0]);
        assert_eq!(rgb_to_hsv_pixel([128, 128, 128]), [0, 0, 128]);
        assert_eq!(rgb_to_hsv_pixel([0, 255, 0]), [85, 255, 255]);
        assert_eq!(rgb_to_hsv_pixel([255, 0, 0]), [0, 255, 255]);
        assert_eq!(rgb_to_hsv_pixel([0, 0, 255]), [170, 255, 255]);
    }

    #[test]
    fn image_conversion_preserves_dimensions() {
        let img = ImageRgb8::filled(5, 3, [0, 255, 0]);
        let hsv = rgb_to_hsv(&img);
        assert_eq!((hsv.width(), hsv.height()), (5, 3));
        assert!(hsv.as_raw().chunks_exact(3).all(|p| p == [85, 255, 255]));
    }

    #[test]
    fn achromatic_luma_suppresses_saturated_colors() {
        let mut img = ImageRgb8::filled(2, 1, [20, 20, 20]);
        img.put(1, 0, [0, 230, 40]);
        let g = achromatic_luma(&img);
        assert_eq!(g.as_raw(), &[20, 0]);
    }

    proptest! {
        #[test]
        fn matches_float_reference(r: u8, g: u8, b: u8) {
            let [h, s, v] = rgb_to_hsv_pixel([r, g, b]);
            let (hd, sf, vf) = reference_hsv(r, g, b);
            prop_assert_eq!(v as f64, (vf * 255.0).round());
            prop_assert!((s as f64 - sf * 255.0).abs() <= 0.5 + 1e-9);
            // Truncation may land one step either side when the reference sits on a boundary.
            let expected = (hd * 256.0 / 360.0).floor().rem_euclid(256.0);
            let diff = (h as f64 - expected).abs();
            prop_assert!(diff <= 1.0 || diff >= 255.0, "h={} expected={}", h, expected);
        }

        #[test]
        fn achromatic_pixels_have_zero_saturation(c: u8) {
            let [_, s, v] = rgb_to_hsv_pixel([c, c, c]);
            prop_assert_eq!(s, 0);
            prop_assert_eq!(v, c);
        }

        #[test]
        fn hsv_round_trip_is_close(r: u8, g: u8, b: u8) {
            let back = hsv_to_rgb_pixel(rgb_to_hsv_pixel([r, g, b]));
            for (a, b) in back.iter().zip([r, g, b]) {
                prop_assert!((*a as i32 - b as i32).abs() <= 6);
            }
        }
    }
}
