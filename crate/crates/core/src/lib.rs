//! Paraxial simulation of electron vortex beams through an astigmatic lens.

pub mod analysis;
pub mod constants;
pub mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod optics;
pub mod par;
pub mod physics;
pub mod render;
pub mod scenario;
pub mod sources;

pub use error::{Error, Result};
pub use field::SampledField;
pub use grid::{Grid, Plane};
pub use optics::LensParams;
pub use physics::BeamPhysics;
