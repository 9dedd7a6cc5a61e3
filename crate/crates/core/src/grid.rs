use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

/// Which space a grid samples: real space x (BFP/observation plane) or reciprocal space q (FFP).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Plane {
    RealSpace,
    Reciprocal,
}

impl Plane {
    pub fn tag(self) -> &'static str {
        match self {
            Plane::RealSpace => "real",
            Plane::Reciprocal => "reciprocal",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Plane> {
        match tag {
            "real" => Some(Plane::RealSpace),
            "reciprocal" => Some(Plane::Reciprocal),
            _ => None,
        }
    }
}

impl fmt::Display for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Square sampling grid. Sample `i` sits at `(i - n/2) * pitch`, so the origin is a sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    n: usize,
    pitch: f64,
    plane: Plane,
}

impl Grid {
    pub const MIN_SIZE: usize = 16;

    pub fn new(n: usize, pitch: f64, plane: Plane) -> Result<Self> {
        if n < Self::MIN_SIZE || !n.is_power_of_two() {
            return Err(Error::domain(format!(
                "grid size must be a power of two >= {}, got {n}",
                Self::MIN_SIZE
            )));
        }
        if !(pitch > 0.0) || !pitch.is_finite() {
            return Err(Error::domain(format!(
                "grid pitch must be positive and finite, got {pitch}"
            )));
        }
        Ok(Grid { n, pitch, plane })
    }

    /// Real-space grid covering a field of view `fov` (m) with `n` samples per side.
    pub fn real_space(n: usize, fov: f64) -> Result<Self> {
        Grid::new(n, fov / n as f64, Plane::RealSpace)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sample spacing: meters for real space, 1/m for reciprocal space.
    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    pub fn plane(&self) -> Plane {
        self.plane
    }

    pub fn extent(&self) -> f64 {
        self.n as f64 * self.pitch
    }

    pub fn center(&self) -> usize {
        self.n / 2
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coord(&self, i: usize) -> f64 {
        (i as f64 - (self.n / 2) as f64) * self.pitch
    }

    /// Index of the sample nearest to `coord`, if it lies on the grid.
    pub fn index_of(&self, coord: f64) -> Option<usize> {
        let i = (coord / self.pitch).round() + (self.n / 2) as f64;
        if i >= 0.0 && i < self.n as f64 {
            Some(i as usize)
        } else {
            None
        }
    }

    /// Largest radius around the origin fully covered by the grid.
    pub fn nyquist_radius(&self) -> f64 {
        (self.n / 2) as f64 * self.pitch
    }

    /// The Fourier-conjugate grid of the unitary centered DFT: pitch 2π / (n · pitch), other plane.
    pub fn conjugate(&self) -> Grid {
        Grid {
            n: self.n,
            pitch: 2.0 * PI / (self.n as f64 * self.pitch),
            plane: match self.plane {
                Plane::RealSpace => Plane::Reciprocal,
                Plane::Reciprocal => Plane::RealSpace,
            },
        }
    }

    /// Same size, same plane, and pitch equal to 1e-12 relative.
    pub fn matches(&self, other: &Grid) -> bool {
        self.n == other.n
            && self.plane == other.plane
            && (self.pitch - other.pitch).abs() <= 1e-12 * self.pitch.max(other.pitch)
    }

    pub(crate) fn ensure_matches(&self, other: &Grid) -> Result<()> {
        if self.matches(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self} vs {other}")))
        }
    }

    pub(crate) fn ensure_plane(&self, plane: Plane) -> Result<()> {
        if self.plane == plane {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "expected a {plane} grid, got a {} grid",
                self.plane
            )))
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} {} grid, pitch {:e}", self.n, self.n, self.plane, self.pitch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes_and_pitches() {
        assert!(Grid::new(8, 1.0, Plane::RealSpace).is_err());
        assert!(Grid::new(48, 1.0, Plane::RealSpace).is_err());
        assert!(Grid::new(64, 0.0, Plane::RealSpace).is_err());
        assert!(Grid::new(64, f64::INFINITY, Plane::RealSpace).is_err());
        assert!(Grid::new(16, 1.0, Plane::Reciprocal).is_ok());
    }

    #[test]
    fn origin_is_a_sample() {
        let g = Grid::new(64, 0.25, Plane::RealSpace).unwrap();
        assert_eq!(g.coord(g.center()), 0.0);
        assert_eq!(g.coord(0), -8.0);
        assert_eq!(g.coord(63), 7.75);
    }

    #[test]
    fn index_coordinate_round_trip() {
        for n in [16, 64, 512] {
            let g = Grid::new(n, 3.7e-11, Plane::RealSpace).unwrap();
            for i in 0..n {
                assert_eq!(g.index_of(g.coord(i)), Some(i));
            }
            assert_eq!(g.index_of(g.coord(n - 1) + g.pitch()), None);
        }
    }

    #[test]
    fn conjugate_is_an_involution() {
        let g = Grid::new(256, 1e-11, Plane::RealSpace).unwrap();
        let c = g.conjugate();
        assert_eq!(c.plane(), Plane::Reciprocal);
        assert!((c.pitch() * g.pitch() * 256.0 - 2.0 * PI).abs() < 1e-12);
        assert!(c.conjugate().matches(&g));
    }
}
