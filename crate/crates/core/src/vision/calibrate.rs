//! Threshold suggestion from a sample frame showing the marker.

use super::color::rgb_to_hsv;
use super::raster::ImageRgb8;
use super::segment::HsvThresholds;

/// Pixels below this saturation or value are treated as scene, not marker.
const MIN_SAT: u8 = 80;
const MIN_VAL: u8 = 60;
/// Hue half-width of the dominant cluster, in 8-bit hue steps.
const CLUSTER_HALF_WIDTH: i32 = 24;
const HUE_MARGIN: i32 = 4;
const SV_MARGIN: i32 = 24;
const MIN_PIXELS: usize = 16;

fn hue_offset(h: u8, centre: u8) -> i32 {
    (h as i32 - centre as i32 + 128).rem_euclid(256) - 128
}

/// Suggests thresholds that isolate the dominant saturated color in `img`.
///
/// Returns `None` when fewer than 16 chromatic pixels are present. Because
/// the intervals are open, a channel that reaches 255 in the sample cannot be
/// fully covered.
pub fn suggest_thresholds(img: &ImageRgb8) -> Option<HsvThresholds> {
    let hsv = rgb_to_hsv(img);
    let chromatic: Vec<[u8; 3]> = hsv
        .as_raw()
        .chunks_exact(3)
        .filter(|p| p[1] >= MIN_SAT && p[2] >= MIN_VAL)
        .map(|p| [p[0], p[1], p[2]])
        .collect();
    if chromatic.len() < MIN_PIXELS {
        return None;
    }

    let mut hist = [0u32; 256];
    for p in &chromatic {
        hist[p[0] as usize] += 1;
    }
    // Circular box smoothing, then the mode.
    let smoothed: Vec<u32> = (0..256i32)
        .map(|h| {
            (-2..=2)
                .map(|d| hist[(h + d).rem_euclid(256) as usize])
                .sum()
        })
        .collect();
    let mode = (0..256).max_by_key(|&h| (smoothed[h], std::cmp::Reverse(h)))? as u8;

    let cluster: Vec<&[u8; 3]> = chromatic
        .iter()
        .filter(|p| hue_offset(p[0], mode).abs() <= CLUSTER_HALF_WIDTH)
        .collect();
    let lo_off = cluster.iter().map(|p| hue_offset(p[0], mode)).min()?;
    let hi_off = cluster.iter().map(|p| hue_offset(p[0], mode)).max()?;
    let hue_lo = (mode as i32 + lo_off - HUE_MARGIN).rem_euclid(256) as u8;
    let hue_hi = (mode as i32 + hi_off + HUE_MARGIN).rem_euclid(256) as u8;

    let bound = |vals: &mut dyn Iterator<Item = u8>| {
        let v: Vec<i32> = vals.map(i32::from).collect();
        let lo = (v.iter().min()? - SV_MARGIN).clamp(0, 254);
        let hi = (v.iter().max()? + SV_MARGIN).clamp(lo + 1, 255);
        Some((lo as u8, hi as u8))
    };
    let (sat_lo, sat_hi) = bound(&mut cluster.iter().map(|p| p[1]))?;
    let (val_lo, val_hi) = bound(&mut cluster.iter().map(|p| p[2]))?;
    HsvThresholds::new(hue_lo, hue_hi, sat_lo, sat_hi, val_lo, val_hi).ok()
}
