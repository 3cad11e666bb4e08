//! Binary PGM (P5) renders of weighted point clouds with log-density shading.

use corrlab_core::measures::WeightedPointCloud;

use crate::error::CliError;

pub const MAX_SIZE: usize = 8192;

pub struct Render {
    pub pgm: Vec<u8>,
    /// Cloud weight that fell inside the window.
    pub captured: f64,
}

/// Renders `cloud` into a `size × size` image of `[x_min, x_max] × [y_min, y_max]`.
///
/// Pixel mass `c` is shaded as `255 · ln(1 + N c) / ln(1 + N c_max)` for a cloud
/// of `N` points, so a single equal-weight point maps to `ln 2` on that
/// scale. Row 0 is the top edge (`y_max`).
pub fn render_pgm(cloud: &WeightedPointCloud, size: usize, window: [f64; 4]) -> Result<Render, CliError> {
    let [x0, x1, y0, y1] = window;
    if size == 0 || size > MAX_SIZE {
        return Err(CliError::config(format!("render: size must be in 1..={MAX_SIZE}, got {size}")));
    }
    if !(window.iter().all(|v| v.is_finite()) && x0 < x1 && y0 < y1) {
        return Err(CliError::config(format!(
            "render: window must be finite with x_min < x_max and y_min < y_max, got {window:?}"
        )));
    }
    let mut mass = vec![0.0f64; size * size];
    let mut captured = 0.0;
    let scale = size as f64;
    for (p, w) in cloud.iter() {
        let Some(z) = p.value() else { continue };
        if z.re < x0 || z.re > x1 || z.im < y0 || z.im > y1 {
            continue;
        }
        let col = (((z.re - x0) / (x1 - x0) * scale) as usize).min(size - 1);
        let row = (((y1 - z.im) / (y1 - y0) * scale) as usize).min(size - 1);
        mass[row * size + col] += w;
        captured += w;
    }
    let n = cloud.len() as f64;
    let peak = mass.iter().copied().fold(0.0, f64::max);
    let mut pgm = format!("P5\n{size} {size}\n255\n").into_bytes();
    if peak > 0.0 {
        let norm = (n * peak).ln_1p();
        pgm.extend(mass.iter().map(|&c| (255.0 * (n * c).ln_1p() / norm).round() as u8));
    } else {
        pgm.resize(pgm.len() + size * size, 0);
    }
    Ok(Render { pgm, captured })
}
