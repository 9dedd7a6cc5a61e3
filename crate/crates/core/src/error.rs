use thiserror::Error;

/// Errors raised anywhere in the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("field has zero total power and cannot be normalized")]
    ZeroPower,

    #[error("aperture radius {q_max:.4e} 1/m reaches the grid Nyquist radius {nyquist:.4e} 1/m")]
    ApertureBeyondNyquist { q_max: f64, nyquist: f64 },

    #[error("waist {width:.4e} is not representable on a grid with pitch {pitch:.4e} and extent {extent:.4e}")]
    UnresolvedWaist { width: f64, pitch: f64, extent: f64 },

    #[error("on-axis node in plane {index} (z = {z:.4e} m); Gouy phase is undefined there")]
    OnAxisNode { index: usize, z: f64 },

    #[error("loop of radius {radius:.4e} m is amplitude-starved (min |psi| / max |psi| = {ratio:.3e})")]
    StarvedLoop { radius: f64, ratio: f64 },

    #[error("loop of radius {radius:.4e} m: raw winding {turns:.3} is not close to an integer")]
    WindingRejected { radius: f64, turns: f64 },

    #[error("loop radius {radius:.4e} m is outside the usable range [{min:.4e}, {max:.4e}] m")]
    LoopRadius { radius: f64, min: f64, max: f64 },

    #[error("no orientation: intensity anisotropy {anisotropy:.3} is below {threshold}")]
    NoOrientation { anisotropy: f64, threshold: f64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("scenario `{name}`: {source}")]
    Scenario {
        name: String,
        #[source]
        source: Box<Error>,
    },

    #[error("malformed field dump: {0}")]
    Dump(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("png: {0}")]
    Png(#[from] png::EncodingError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn in_scenario(self, name: &str) -> Self {
        Error::Scenario {
            name: name.to_string(),
            source: Box::new(self),
        }
    }
}
