//! CTEX1 texture container and its key/value metadata sidecar.
//!
//! ```text
//! "CTEX1"
//! u32 width, u32 height, u32 depth
//! u8 channels, u8 format, u8 layout, u8 rational base
//! u32 degree, u32 segment_count
//! channels × (f64 scale, f64 offset)
//! payload: unorm as raw u8/u16, float32 as IEEE-754 bits
//! ```
//!
//! All integers and floats are little-endian.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use crate::encoder::{EncodedCurve, Layout};
use crate::error::{Error, Result};
use crate::primitives::{Point, ValueTransform};
use crate::texture::{TexelFormat, TexelGrid};

pub const MAGIC: &[u8; 5] = b"CTEX1";

fn container_err(msg: impl Into<String>) -> Error {
    Error::Container(msg.into())
}

fn to_u32(v: usize, what: &str) -> Result<u32> {
    u32::try_from(v).map_err(|_| container_err(format!("{what} {v} does not fit in u32")))
}

pub fn write_container<W: Write>(curve: &EncodedCurve, mut out: W) -> Result<()> {
    let bytes = to_bytes(curve)?;
    out.write_all(&bytes)
        .map_err(|e| container_err(format!("write failed: {e}")))
}

pub fn to_bytes(curve: &EncodedCurve) -> Result<Vec<u8>> {
    curve.validate()?;
    let grid = &curve.grid;
    let (w, h, d) = grid.dims();
    let (layout, base) = curve.layout.codes();
    let mut buf = Vec::with_capacity(64 + grid.data().len() * 4);
    buf.extend_from_slice(MAGIC);
    for (v, what) in [(w, "width"), (h, "height"), (d, "depth")] {
        buf.extend_from_slice(&to_u32(v, what)?.to_le_bytes());
    }
    buf.extend_from_slice(&[grid.channels() as u8, grid.format().code(), layout, base]);
    buf.extend_from_slice(&to_u32(curve.degree, "degree")?.to_le_bytes());
    buf.extend_from_slice(&to_u32(curve.segment_count, "segment count")?.to_le_bytes());
    for c in 0..grid.channels() {
        buf.extend_from_slice(&curve.transform.scale()[c].to_le_bytes());
        buf.extend_from_slice(&curve.transform.offset()[c].to_le_bytes());
    }
    match grid.format() {
        TexelFormat::Unorm8 => {
            buf.extend(grid.unorm_values().expect("unorm grid").iter().map(|&v| v as u8));
        }
        TexelFormat::Unorm16 => {
            for v in grid.unorm_values().expect("unorm grid") {
                buf.extend_from_slice(&(v as u16).to_le_bytes());
            }
        }
        TexelFormat::Float32 => {
            for &v in grid.data() {
                buf.extend_from_slice(&(v as f32).to_le_bytes());
            }
        }
    }
    Ok(buf)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos + n;
        if end > self.bytes.len() {
            return Err(container_err(format!(
                "truncated: need {n} bytes at offset {}",
                self.pos
            )));
        }
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

pub fn from_bytes(bytes: &[u8]) -> Result<EncodedCurve> {
    let mut cur = Cursor { bytes, pos: 0 };
    if cur.take(MAGIC.len())? != MAGIC {
        return Err(container_err("bad magic, not a CTEX1 file"));
    }
    let w = cur.u32()? as usize;
    let h = cur.u32()? as usize;
    let d = cur.u32()? as usize;
    let channels = cur.u8()? as usize;
    let format_code = cur.u8()?;
    let format = TexelFormat::from_code(format_code)
        .ok_or_else(|| container_err(format!("unknown format code {format_code}")))?;
    let (layout_code, base_code) = (cur.u8()?, cur.u8()?);
    let layout = Layout::from_codes(layout_code, base_code)
        .ok_or_else(|| container_err(format!("unknown layout code {layout_code}/{base_code}")))?;
    let degree = cur.u32()? as usize;
    let segment_count = cur.u32()? as usize;
    if !(1..=crate::primitives::MAX_CHANNELS).contains(&channels) {
        return Err(Error::InvalidChannels(channels));
    }
    let mut scale = Vec::with_capacity(channels);
    let mut offset = Vec::with_capacity(channels);
    for _ in 0..channels {
        scale.push(cur.f64()?);
        offset.push(cur.f64()?);
    }
    let transform = ValueTransform::new(Point::new(&scale)?, Point::new(&offset)?)?;

    let count = w
        .checked_mul(h)
        .and_then(|n| n.checked_mul(d))
        .and_then(|n| n.checked_mul(channels))
        .ok_or_else(|| container_err("grid size overflows"))?;
    let payload = cur.take(count * format.bytes_per_value())?;
    let dims = (w, h, d);
    let grid = match format {
        TexelFormat::Unorm8 => {
            let raw: Vec<u32> = payload.iter().map(|&b| b as u32).collect();
            TexelGrid::from_unorm_values(dims, channels, format, &raw)?
        }
        TexelFormat::Unorm16 => {
            let raw: Vec<u32> = payload
                .chunks_exact(2)
                .map(|c| u16::from_le_bytes([c[0], c[1]]) as u32)
                .collect();
            TexelGrid::from_unorm_values(dims, channels, format, &raw)?
        }
        TexelFormat::Float32 => {
            let values: Vec<f64> = payload
                .chunks_exact(4)
                .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
                .collect();
            TexelGrid::new(dims, channels, format, &values)?
        }
    };
    if cur.pos != bytes.len() {
        return Err(container_err(format!(
            "{} trailing bytes after payload",
            bytes.len() - cur.pos
        )));
    }
    let curve = EncodedCurve {
        grid,
        layout,
        degree,
        segment_count,
        transform,
    };
    curve.validate()?;
    Ok(curve)
}

pub fn read_container<R: Read>(mut input: R) -> Result<EncodedCurve> {
    let mut bytes = Vec::new();
    input
        .read_to_end(&mut bytes)
        .map_err(|e| container_err(format!("read failed: {e}")))?;
    from_bytes(&bytes)
}

pub fn save(curve: &EncodedCurve, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_bytes(curve)?)
        .map_err(|e| container_err(format!("{}: {e}", path.display())))
}

pub fn load(path: impl AsRef<Path>) -> Result<EncodedCurve> {
    let path = path.as_ref();
    let bytes =
        std::fs::read(path).map_err(|e| container_err(format!("{}: {e}", path.display())))?;
    from_bytes(&bytes)
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(" ")
}

/// Human-readable `key: value` description of a container.
pub fn sidecar(curve: &EncodedCurve) -> String {
    let grid = &curve.grid;
    let (w, h, d) = grid.dims();
    let mut s = String::new();
    let _ = writeln!(s, "magic: CTEX1");
    let _ = writeln!(s, "layout: {}", curve.layout);
    let _ = writeln!(s, "width: {w}");
    let _ = writeln!(s, "height: {h}");
    let _ = writeln!(s, "depth: {d}");
    let _ = writeln!(s, "channels: {}", grid.channels());
    let _ = writeln!(s, "format: {}", grid.format());
    let _ = writeln!(s, "degree: {}", curve.degree);
    let _ = writeln!(s, "segments: {}", curve.segment_count);
    let _ = writeln!(s, "scale: {}", join(curve.transform.scale().as_slice()));
    let _ = writeln!(s, "offset: {}", join(curve.transform.offset().as_slice()));
    let _ = writeln!(s, "texels: {}", grid.texel_count());
    s
}

/// Parses `key: value` lines, skipping blanks and `#` comments.
pub fn parse_sidecar(text: &str) -> Result<Vec<(String, String)>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            l.split_once(':')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| Error::Parse {
                    line: i + 1,
                    message: format!("expected `key: value`, got `{l}`"),
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::*;
    use crate::primitives::ControlPolygon;
    use proptest::prelude::*;

    fn cubic() -> ControlPolygon {
        ControlPolygon::from_scalars(&[0.1, 0.9, -0.3, 0.4]).unwrap()
    }

    #[test]
    fn header_layout() {
        let c = encode_seiler(&cubic(), &EncodeOptions::new(TexelFormat::Float32)).unwrap();
        let b = to_bytes(&c).unwrap();
        assert_eq!(&b[..5], b"CTEX1");
        assert_eq!(u32::from_le_bytes(b[5..9].try_into().unwrap()), 2);
        assert_eq!(b[17], 1);
        assert_eq!(b[18], 2);
        assert_eq!(b[19], 3);
        // header 29 + one transform pair 16 + 4 texels × f32
        assert_eq!(b.len(), 29 + 16 + 16);
    }

    #[test]
    fn corrupt_inputs() {
        let c = encode_seiler(&cubic(), &EncodeOptions::rescaled(TexelFormat::Unorm8)).unwrap();
        let b = to_bytes(&c).unwrap();
        assert!(from_bytes(&b[..b.len() - 1]).is_err());
        let mut extra = b.clone();
        extra.push(0);
        assert!(from_bytes(&extra).is_err());
        let mut magic = b.clone();
        magic[0] = b'X';
        assert!(from_bytes(&magic).is_err());
        let mut layout = b;
        layout[19] = 1; // DC cubic needs a 2x2x2 grid
        assert!(matches!(from_bytes(&layout), Err(Error::LayoutMismatch(_))));
    }

    #[test]
    fn sidecar_lists_fields() {
        let c = encode_dc_cubic(&cubic(), &EncodeOptions::rescaled(TexelFormat::Unorm16)).unwrap();
        let kv = parse_sidecar(&sidecar(&c)).unwrap();
        let get = |k: &str| kv.iter().find(|(key, _)| key == k).unwrap().1.clone();
        assert_eq!(get("layout"), "DC_CUBIC_2x2x2");
        assert_eq!(get("format"), "unorm16");
        assert_eq!(get("depth"), "2");
        assert!(parse_sidecar("no separator").is_err());
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(
            vals in prop::collection::vec(-2.0f64..2.0, 4),
            fmt in 0u8..3,
            seiler in any::<bool>(),
        ) {
            let format = TexelFormat::from_code(fmt).unwrap();
            let opts = EncodeOptions::rescaled(format);
            let p = ControlPolygon::from_scalars(&vals).unwrap();
            let c = if seiler { encode_seiler(&p, &opts) } else { encode_dc_cubic(&p, &opts) }.unwrap();
            let bytes = to_bytes(&c).unwrap();
            let back = from_bytes(&bytes).unwrap();
            prop_assert_eq!(&back, &c);
            let a: Vec<u64> = c.grid.data().iter().map(|v| v.to_bits()).collect();
            let b: Vec<u64> = back.grid.data().iter().map(|v| v.to_bits()).collect();
            prop_assert_eq!(a, b);
            prop_assert_eq!(to_bytes(&back).unwrap(), bytes);
        }
    }
}
