//! Pyramid down/up speckle removal for binary masks.
//!
//! One 2× downsample keeps a cell white only when at least three of its four
//! source pixels are white; a nearest-neighbour 2× upsample then restores the
//! original size. Lone pixels and one-pixel lines vanish, while blobs of side
//! four or more survive with at most a one-pixel ring trimmed per side.

use super::raster::BinaryMask;

/// Minimum number of white pixels (out of four) for a downsampled cell to stay white.
pub const MAJORITY: u8 = 3;

/// Removes isolated white speckles from `mask`.
///
/// Odd trailing rows and columns form partial cells whose missing pixels count
/// as black, so such a cell can never reach the majority.
pub fn pyramid_scrub(mask: &BinaryMask) -> BinaryMask {
    let (w, h) = (mask.width(), mask.height());
    let (cw, ch) = (w.div_ceil(2), h.div_ceil(2));
    let src = mask.as_raw();

    let mut cells = vec![false; cw * ch];
    for cy in 0..ch {
        let y0 = 2 * cy;
        if y0 + 1 >= h {
            continue;
        }
        let (r0, r1) = (&src[y0 * w..(y0 + 1) * w], &src[(y0 + 1) * w..(y0 + 2) * w]);
        for cx in 0..w / 2 {
            let x0 = 2 * cx;
            let count = (r0[x0] & 1) + (r0[x0 + 1] & 1) + (r1[x0] & 1) + (r1[x0 + 1] & 1);
            cells[cy * cw + cx] = count >= MAJORITY;
        }
    }

    let mut out = BinaryMask::new(w, h);
    let dst = out.as_raw_mut();
    for y in 0..h {
        let cell_row = &cells[(y / 2) * cw..(y / 2 + 1) * cw];
        for (x, px) in dst[y * w..(y + 1) * w].iter_mut().enumerate() {
            if cell_row[x / 2] {
                *px = BinaryMask::ON;
            }
        }
    }
    out
}
