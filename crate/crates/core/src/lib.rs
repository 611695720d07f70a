//! Polynomial curves and surfaces encoded in tiny texel grids and evaluated
//! through an emulation of fixed-function linear texture filtering.
//!
//! The pipeline is: control points ([`primitives`]) → texel layout
//! ([`encoder`]) → filtered reads ([`sampler`], [`texture_eval`]) →
//! comparison against full-precision evaluators ([`reference`],
//! [`analysis`]).

pub mod analysis;
pub mod container;
pub mod curve_file;
pub mod encoder;
pub mod error;
pub mod primitives;
pub mod reference;
pub mod sampler;
pub mod texture;
pub mod texture_eval;

pub use analysis::{
    error_bound_estimate, render_deviation_image, render_report, sweep, texel_allowance,
    ErrorReport, Pixmap, ReferenceEval, Source,
};
pub use curve_file::{Basis, CurveFile};
pub use encoder::{
    encode_bicubic_rgba, encode_bilinear_patch, encode_dc_cubic, encode_dc_quadratic,
    encode_dc_zigzag, encode_rational, encode_seiler, fit_range, EncodeOptions, EncodedCurve,
    Layout, RationalBase, ZigzagSeed,
};
pub use error::{Error, Result};
pub use primitives::{
    lerp, remap_unit_to_texel_span, ControlNet, ControlPolygon, Point, ValueTransform,
};
pub use sampler::{
    quantize_fraction, sample_bilinear, sample_trilinear, SampleTrace, SamplerConfig,
    SubtexelRounding,
};
pub use texture::{quantize_texel, TexelFormat, TexelGrid};
pub use texture_eval::{
    eval, eval_bicubic_rgba, eval_bilinear_patch, eval_dc, eval_dc_cubic_hybrid, eval_dc_zigzag,
    eval_rational_tex, eval_seiler_tex, eval_with, EvalMode, Param,
};
