use std::io::{Cursor, Write};
use std::path::Path;

use image::{ImageEncoder, ImageError};

use super::{ImageF, MaskF};
use crate::error::{Error, Result};

/// Decodes an 8-bit PNG or JPEG into a 3-channel image with values `v / 255`.
/// Grayscale inputs are expanded to three identical planes; alpha is dropped.
pub fn decode_image(bytes: &[u8]) -> Result<ImageF> {
    decode_inner(bytes).map_err(|source| Error::Decode { path: None, source })
}

/// Reads and decodes an image file; errors name the file.
pub fn load_image(path: impl AsRef<Path>) -> Result<ImageF> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_inner(&bytes).map_err(|source| Error::Decode { path: Some(path.to_path_buf()), source })
}

fn decode_inner(bytes: &[u8]) -> Result<ImageF, ImageError> {
    let format = image::guess_format(bytes)?;
    if !matches!(format, image::ImageFormat::Png | image::ImageFormat::Jpeg) {
        return Err(ImageError::Unsupported(image::error::UnsupportedError::from_format_and_kind(
            format.into(),
            image::error::UnsupportedErrorKind::Format(format.into()),
        )));
    }
    let rgb = image::load_from_memory_with_format(bytes, format)?.to_rgb8();
    let (w, h) = (rgb.width() as usize, rgb.height() as usize);
    let mut img = ImageF::zeros(w, h, 3);
    let n = w * h;
    for (i, px) in rgb.pixels().enumerate() {
        for c in 0..3 {
            img.data_mut()[c * n + i] = f64::from(px.0[c]) / 255.0;
        }
    }
    Ok(img)
}

#[inline]
fn to_byte(v: f64) -> u8 {
    // f64::round rounds half away from zero.
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// Encodes a 1- or 3-channel image as 8-bit PNG: clamp to `[0, 1]`, then
/// `round(v * 255)` with ties away from zero.
pub fn encode_image(img: &ImageF) -> Result<Vec<u8>> {
    let (w, h, ch) = img.dims();
    let n = w * h;
    let (color, bytes) = match ch {
        1 => (image::ExtendedColorType::L8, img.data().iter().map(|&v| to_byte(v)).collect::<Vec<_>>()),
        3 => {
            let d = img.data();
            let mut buf = Vec::with_capacity(3 * n);
            for i in 0..n {
                buf.extend([to_byte(d[i]), to_byte(d[n + i]), to_byte(d[2 * n + i])]);
            }
            (image::ExtendedColorType::Rgb8, buf)
        }
        other => return Err(Error::UnsupportedLayout(other)),
    };
    let mut out = Cursor::new(Vec::new());
    image::codecs::png::PngEncoder::new(&mut out)
        .write_image(&bytes, w as u32, h as u32, color)
        .map_err(Error::Encode)?;
    Ok(out.into_inner())
}

/// Encodes a mask as 8-bit grayscale PNG (255 = artifact).
pub fn encode_mask(mask: &MaskF) -> Result<Vec<u8>> {
    encode_image(mask.as_image())
}

/// Writes `bytes` to a sibling temp file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let file_name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{file_name}.tmp"));
    let write = || -> std::io::Result<()> {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        Error::io(path, e)
    })
}
