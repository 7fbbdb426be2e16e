//! Raster export helpers: binary PGM, RGB PNG, and the jet colormap.

use crate::error::Result;

/// Encode a grayscale raster as binary PGM (P5).
pub fn encode_pgm(width: usize, height: usize, maxval: u8, pixels: &[u8]) -> Vec<u8> {
    assert_eq!(pixels.len(), width * height, "pixel count mismatch");
    let mut out = format!("P5\n{width} {height}\n{maxval}\n").into_bytes();
    out.extend_from_slice(pixels);
    out
}

/// Encode an RGB raster as PNG.
pub fn encode_png_rgb(width: usize, height: usize, rgb: &[u8]) -> Result<Vec<u8>> {
    assert_eq!(rgb.len(), width * height * 3, "rgb buffer size mismatch");
    let img = image::RgbImage::from_raw(width as u32, height as u32, rgb.to_vec())
        .expect("buffer sized for dimensions");
    let mut out = std::io::Cursor::new(Vec::new());
    img.write_to(&mut out, image::ImageFormat::Png)?;
    Ok(out.into_inner())
}

/// Jet colormap over `x` in [0, 1]: dark blue through cyan and yellow to
/// dark red. Values around 0.3 land in the cyan range.
pub fn jet_color(x: f64) -> [u8; 3] {
    let x = x.clamp(0.0, 1.0);
    let channel = |v: f64| (v.clamp(0.0, 1.0) * 255.0).round() as u8;
    let r = channel(1.5 - (4.0 * x - 3.0).abs());
    let g = channel(1.5 - (4.0 * x - 2.0).abs());
    let b = channel(1.5 - (4.0 * x - 1.0).abs());
    [r, g, b]
}
