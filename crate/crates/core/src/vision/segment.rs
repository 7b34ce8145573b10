//! HSV threshold segmentation.

use serde::{Deserialize, Serialize};

use super::raster::{BinaryMask, ImageHsv8};
use super::ImageError;

/// Open intervals on hue, saturation and value.
///
/// A pixel matches when each channel lies strictly between its low and high
/// bound. When `hue_lo > hue_hi` the hue interval wraps through 0, which is how
/// red markers are expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawThresholds", into = "RawThresholds")]
pub struct HsvThresholds {
    hue_lo: u8,
    hue_hi: u8,
    sat_lo: u8,
    sat_hi: u8,
    val_lo: u8,
    val_hi: u8,
}

#[derive(Serialize, Deserialize)]
struct RawThresholds {
    hue_lo: u8,
    hue_hi: u8,
    sat_lo: u8,
    sat_hi: u8,
    val_lo: u8,
    val_hi: u8,
}

impl TryFrom<RawThresholds> for HsvThresholds {
    type Error = ImageError;

    fn try_from(r: RawThresholds) -> Result<Self, Self::Error> {
        HsvThresholds::new(r.hue_lo, r.hue_hi, r.sat_lo, r.sat_hi, r.val_lo, r.val_hi)
    }
}

impl From<HsvThresholds> for RawThresholds {
    fn from(t: HsvThresholds) -> Self {
        RawThresholds {
            hue_lo: t.hue_lo,
            hue_hi: t.hue_hi,
            sat_lo: t.sat_lo,
            sat_hi: t.sat_hi,
            val_lo: t.val_lo,
            val_hi: t.val_hi,
        }
    }
}

impl HsvThresholds {
    pub fn new(
        hue_lo: u8,
        hue_hi: u8,
        sat_lo: u8,
        sat_hi: u8,
        val_lo: u8,
        val_hi: u8,
    ) -> Result<Self, ImageError> {
        if sat_lo >= sat_hi {
            return Err(ImageError::InvalidThresholds("sat_lo must be below sat_hi"));
        }
        if val_lo >= val_hi {
            return Err(ImageError::InvalidThresholds("val_lo must be below val_hi"));
        }
        Ok(Self {
            hue_lo,
            hue_hi,
            sat_lo,
            sat_hi,
            val_lo,
            val_hi,
        })
    }

    pub fn hue(&self) -> (u8, u8) {
        (self.hue_lo, self.hue_hi)
    }

    pub fn sat(&self) -> (u8, u8) {
        (self.sat_lo, self.sat_hi)
    }

    pub fn val(&self) -> (u8, u8) {
        (self.val_lo, self.val_hi)
    }

    pub fn hue_wraps(&self) -> bool {
        self.hue_lo > self.hue_hi
    }

    #[inline]
    pub fn accepts(&self, [h, s, v]: [u8; 3]) -> bool {
        let hue_ok = if self.hue_wraps() {
            h > self.hue_lo || h < self.hue_hi
        } else {
            h > self.hue_lo && h < self.hue_hi
        };
        hue_ok && s > self.sat_lo && s < self.sat_hi && v > self.val_lo && v < self.val_hi
    }

    fn tables(&self) -> [[bool; 256]; 3] {
        let mut t = [[false; 256]; 3];
        for b in 0..=255u8 {
            let i = b as usize;
            t[0][i] = if self.hue_wraps() {
                b > self.hue_lo || b < self.hue_hi
            } else {
                b > self.hue_lo && b < self.hue_hi
            };
            t[1][i] = b > self.sat_lo && b < self.sat_hi;
            t[2][i] = b > self.val_lo && b < self.val_hi;
        }
        t
    }
}

/// Marks pixels whose HSV triple lies inside all three open intervals.
pub fn segment(img: &ImageHsv8, t: &HsvThresholds) -> BinaryMask {
    let [hue_ok, sat_ok, val_ok] = t.tables();
    let mut mask = BinaryMask::new(img.width(), img.height());
    for (dst, px) in mask
        .as_raw_mut()
        .iter_mut()
        .zip(img.as_raw().chunks_exact(3))
    {
        let hit = hue_ok[px[0] as usize] & sat_ok[px[1] as usize] & val_ok[px[2] as usize];
        *dst = if hit { BinaryMask::ON } else { 0 };
    }
    mask
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn thresholds(h: (u8, u8), s: (u8, u8), v: (u8, u8)) -> HsvThresholds {
        HsvThresholds::new(h.0, h.1, s.0, s.1, v.0, v.1).unwrap()
    }

    #[test]
    fn uniform_in_range_image_is_all_white() {
        let img = ImageHsv8::filled(8, 6, [100, 200, 200]);
        let t = thresholds((80, 120), (100, 255), (100, 255));
        assert_eq!(segment(&img, &t).count(), 48);
        let t = thresholds((120, 160), (100, 255), (100, 255));
        assert!(segment(&img, &t).is_empty());
    }

    #[test]
    fn boundary_values_are_rejected() {
        let t = thresholds((80, 120), (100, 255), (100, 255));
        assert!(!t.accepts([80, 200, 200]));
        assert!(!t.accepts([120, 200, 200]));
        assert!(!t.accepts([100, 100, 200]));
        assert!(!t.accepts([100, 200, 255]));
        assert!(t.accepts([81, 101, 254]));
    }

    #[test]
    fn wrapping_hue_interval_selects_reds() {
        let t = thresholds((240, 10), (100, 255), (50, 255));
        assert!(t.accepts([0, 200, 200]));
        assert!(t.accepts([250, 200, 200]));
        assert!(t.accepts([9, 200, 200]));
        assert!(!t.accepts([10, 200, 200]));
        assert!(!t.accepts([240, 200, 200]));
        assert!(!t.accepts([128, 200, 200]));
    }

    #[test]
    fn rejects_inverted_sat_and_val() {
        assert!(HsvThresholds::new(0, 10, 50, 50, 0, 10).is_err());
        assert!(HsvThresholds::new(0, 10, 0, 50, 90, 10).is_err());
        let bad = r#"{"hue_lo":0,"hue_hi":1,"sat_lo":9,"sat_hi":2,"val_lo":0,"val_hi":9}"#;
        assert!(serde_json::from_str::<HsvThresholds>(bad).is_err());
    }

    #[test]
    fn disk_on_black_frame_matches_per_pixel_oracle() {
        let (w, h) = (640, 480);
        let marker = [100u8, 200, 200];
        let mut img = ImageHsv8::new(w, h);
        let inside = |x: usize, y: usize| {
            let (dx, dy) = (x as f64 - 320.0, y as f64 - 240.0);
            dx * dx + dy * dy <= 20.0 * 20.0
        };
        for y in 0..h {
            for x in 0..w {
                if inside(x, y) {
                    img.put(x, y, marker);
                }
            }
        }
        let t = thresholds((80, 120), (100, 255), (100, 255));
        let mask = segment(&img, &t);
        for y in 0..h {
            for x in 0..w {
                assert_eq!(mask.is_set(x, y), inside(x, y), "pixel ({x},{y})");
            }
        }
    }

    fn arb_thresholds() -> impl Strategy<Value = HsvThresholds> {
        (any::<u8>(), any::<u8>(), 0u8..255, 0u8..255).prop_flat_map(|(hl, hh, sl, vl)| {
            (sl + 1..=255u8, vl + 1..=255u8)
                .prop_map(move |(sh, vh)| HsvThresholds::new(hl, hh, sl, sh, vl, vh).unwrap())
        })
    }

    fn arb_image() -> impl Strategy<Value = ImageHsv8> {
        (1usize..8, 1usize..8).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<u8>(), w * h * 3)
                .prop_map(move |data| ImageHsv8::from_raw(w, h, data).unwrap())
        })
    }

    proptest! {
        #[test]
        fn output_is_pointwise_and_binary(img in arb_image(), t in arb_thresholds()) {
            let mask = segment(&img, &t);
            for y in 0..img.height() {
                for x in 0..img.width() {
                    prop_assert_eq!(mask.is_set(x, y), t.accepts(img.get(x, y)));
                }
            }
            prop_assert!(mask.as_raw().iter().all(|&v| v == 0 || v == 255));
        }

        #[test]
        fn row_permutation_commutes(img in arb_image(), t in arb_thresholds(), seed: u64) {
            let h = img.height();
            let mut order: Vec<usize> = (0..h).collect();
            // Deterministic shuffle driven by the seed.
            let mut s = seed | 1;
            for i in (1..h).rev() {
                s ^= s << 13; s ^= s >> 7; s ^= s << 17;
                order.swap(i, (s % (i as u64 + 1)) as usize);
            }
            let permuted: Vec<u8> = order.iter().flat_map(|&y| img.row(y).to_vec()).collect();
            let permuted = ImageHsv8::from_raw(img.width(), h, permuted).unwrap();
            let a = segment(&img, &t);
            let b = segment(&permuted, &t);
            for (dst, &src) in order.iter().enumerate() {
                prop_assert_eq!(b.row(dst), a.row(src));
            }
        }

        #[test]
        fn widening_intervals_is_monotone(img in arb_image(), t in arb_thresholds(), grow in 0u8..20) {
            let (hl, hh) = t.hue();
            let (sl, sh) = t.sat();
            let (vl, vh) = t.val();
            // Keep the hue interval's orientation so widening stays widening.
            let (whl, whh) = if t.hue_wraps() || hl == hh {
                (hl, hh)
            } else {
                (hl.saturating_sub(grow), hh.saturating_add(grow))
            };
            let wide = HsvThresholds::new(
                whl, whh,
                sl.saturating_sub(grow), sh.saturating_add(grow),
                vl.saturating_sub(grow), vh.saturating_add(grow),
            ).unwrap();
            let narrow = segment(&img, &t);
            let widened = segment(&img, &wide);
            for (n, w) in narrow.as_raw().iter().zip(widened.as_raw()) {
                prop_assert!(*n == 0 || *w == 255);
            }
        }
    }
}
