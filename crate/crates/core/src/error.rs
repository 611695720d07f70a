use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("channel count mismatch: expected {expected}, found {found}")]
    ChannelMismatch { expected: usize, found: usize },

    #[error("invalid channel count {0} (points carry 1 to 4 channels)")]
    InvalidChannels(usize),

    #[error("invalid control polygon: {0}")]
    InvalidPolygon(String),

    #[error("unsupported degree {degree}: {limit}")]
    UnsupportedDegree { degree: usize, limit: &'static str },

    #[error("{what} = {value} is outside its domain {domain}")]
    OutOfDomain {
        what: &'static str,
        value: f64,
        domain: String,
    },

    #[error(
        "texel ({x}, {y}, {z}) channel {channel} = {value} does not fit the unit range of the \
         texel format (excursion {excursion}); enable rescaling"
    )]
    Range {
        x: usize,
        y: usize,
        z: usize,
        channel: usize,
        value: f64,
        excursion: f64,
    },

    #[error("segments {segment} and {next} do not share an endpoint")]
    Join { segment: usize, next: usize },

    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),

    #[error("homogeneous weight {0} is too close to zero to divide by")]
    Division(f64),

    #[error("invalid texel grid: {0}")]
    InvalidGrid(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid B-spline: {0}")]
    InvalidSpline(String),

    #[error("invalid sampler configuration: {0}")]
    InvalidConfig(String),

    #[error("container: {0}")]
    Container(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
