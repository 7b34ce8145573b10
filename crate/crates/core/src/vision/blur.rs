//! Separable Gaussian smoothing with clamp-to-border edges.

use super::raster::Interleaved;

/// Normalised 1-D Gaussian taps for `sigma`, radius `ceil(3 * sigma)`.
///
/// Returns `[1.0]` for `sigma == 0`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f32> {
    if sigma <= 0.0 {
        return vec![1.0];
    }
    let radius = (3.0 * sigma).ceil() as i64;
    let denom = 2.0 * sigma * sigma;
    let taps: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / denom).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    taps.iter().map(|t| (t / sum) as f32).collect()
}

/// Blurs every channel of `img` with a Gaussian of standard deviation `sigma` pixels.
///
/// `sigma == 0` returns an exact copy. Intermediate results are kept in `f32`
/// and rounded once at the end.
pub fn gaussian_blur<I: Interleaved + Clone>(img: &I, sigma: f64) -> I {
    assert!(
        sigma >= 0.0 && sigma.is_finite(),
        "sigma must be finite and non-negative"
    );
    if sigma == 0.0 {
        return img.clone();
    }
    let kernel = gaussian_kernel(sigma);
    let radius = (kernel.len() / 2) as isize;
    let (w, h, c) = (img.width(), img.height(), I::CHANNELS);
    let src = img.samples();

    // Horizontal pass over a clamp-padded copy of each row, one tap at a time.
    let stride = w * c;
    let r = radius as usize;
    let mut padded = vec![0f32; (w + 2 * r) * c];
    let mut tmp = vec![0f32; w * h * c];
    for y in 0..h {
        let row = &src[y * stride..(y + 1) * stride];
        for (px, chunk) in padded.chunks_exact_mut(c).enumerate() {
            let sx = px.saturating_sub(r).min(w - 1);
            for (d, &s) in chunk.iter_mut().zip(&row[sx * c..(sx + 1) * c]) {
                *d = s as f32;
            }
        }
        let out_row = &mut tmp[y * stride..(y + 1) * stride];
        for (k, tap) in kernel.iter().enumerate() {
            for (a, s) in out_row.iter_mut().zip(&padded[k * c..]) {
                *a += tap * s;
            }
        }
    }

    // Vertical pass over whole rows so the inner loop stays contiguous.
    let mut acc_row = vec![0f32; stride];
    let mut out = vec![0u8; w * h * c];
    for y in 0..h {
        acc_row.iter_mut().for_each(|v| *v = 0.0);
        for (k, tap) in kernel.iter().enumerate() {
            let sy = (y as isize + k as isize - radius).clamp(0, h as isize - 1) as usize;
            let src_row = &tmp[sy * stride..(sy + 1) * stride];
            for (a, s) in acc_row.iter_mut().zip(src_row) {
                *a += tap * s;
            }
        }
        for (o, a) in out[y * stride..(y + 1) * stride].iter_mut().zip(&acc_row) {
            // Taps are positive, so a is never negative; the cast saturates at 255.
            *o = (a + 0.5) as u8;
        }
    }
    I::from_samples(w, h, out).expect("blur preserves dimensions")
}
