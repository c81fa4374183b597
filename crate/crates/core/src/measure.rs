//! Finite spatial measures: point atoms plus pieces spread uniformly over
//! regions.

use crate::error::{Error, Result};
use crate::network::{Network, Point, Region};
use crate::rational::{zero, Rational};

/// `mass` spread with constant density over `region`.
#[derive(Clone, Debug, PartialEq)]
pub struct UniformPart {
    pub region: Region,
    pub mass: Rational,
}

impl UniformPart {
    pub fn density(&self) -> Rational {
        self.mass / self.region.measure()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpatialMeasure {
    pub atoms: Vec<(Point, Rational)>,
    pub uniform: Vec<UniformPart>,
}

impl SpatialMeasure {
    pub fn total_mass(&self) -> Rational {
        self.atoms.iter().map(|a| a.1).sum::<Rational>()
            + self.uniform.iter().map(|u| u.mass).sum::<Rational>()
    }

    pub fn is_atomic(&self) -> bool {
        self.uniform.is_empty()
    }

    /// Mass carried by the closed set `region`.
    pub fn mass_of(&self, net: &Network, region: &Region) -> Rational {
        let atoms: Rational = self
            .atoms
            .iter()
            .filter(|(p, _)| region.contains(net, p))
            .map(|a| a.1)
            .sum();
        let spread: Rational = self
            .uniform
            .iter()
            .map(|u| u.density() * u.region.intersection_measure(region))
            .sum();
        atoms + spread
    }

    /// Mass of a single atom location (uniform parts carry none).
    pub fn atom_mass(&self, p: &Point) -> Rational {
        self.atoms.iter().filter(|(q, _)| q == p).map(|a| a.1).sum()
    }

    pub fn validate(&self, net: &Network) -> Result<()> {
        for (p, m) in &self.atoms {
            net.validate_point(p)?;
            if *m < zero() {
                return Err(Error::InvalidParameter(format!("negative atom mass {m}")));
            }
        }
        for u in &self.uniform {
            if u.region.measure() <= zero() {
                return Err(Error::ZeroMeasure);
            }
            if u.mass < zero() {
                return Err(Error::InvalidParameter(format!("negative uniform mass {}", u.mass)));
            }
            for s in u.region.segments() {
                if s.arc.0 >= net.arc_count() || s.hi > net.length(s.arc) {
                    return Err(Error::InvalidPoint("uniform part leaves the network".into()));
                }
            }
        }
        Ok(())
    }
}

/// `P(A) / λ(A)`.
pub fn density(measure: &SpatialMeasure, net: &Network, subset: &Region) -> Result<Rational> {
    let len = subset.measure();
    if len <= zero() {
        return Err(Error::ZeroMeasure);
    }
    Ok(measure.mass_of(net, subset) / len)
}
