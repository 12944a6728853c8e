//! Unit-tagged wrappers for laboratory-facing quantities.
//!
//! Internal physics is plain SI `f64`. These newtypes guard the scenario/rate
//! boundary, where watts, photon fluxes, areas and cross-sections would
//! otherwise be interchangeable floats: each wraps exactly one SI value,
//! constructed through a named unit and unwrapped explicitly via `si()`.
//! There is deliberately no arithmetic on them.

use crate::constants::{AVOGADRO, GM};
use serde::Serialize;

macro_rules! si_unit {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, Copy, PartialEq, Serialize)]
        #[serde(transparent)]
        pub struct $name(f64);

        impl $name {
            /// Wraps a value already expressed in this type's SI unit.
            pub const fn from_si(value: f64) -> Self {
                Self(value)
            }

            /// The wrapped value, in this type's SI unit.
            pub const fn si(self) -> f64 {
                self.0
            }
        }
    };
}

si_unit! {
    /// Optical power, W.
    Power
}

si_unit! {
    /// Vacuum wavelength, m.
    Wavelength
}

si_unit! {
    /// Photon flux, photons/s.
    PhotonFlux
}

si_unit! {
    /// Transverse beam / interaction area, m².
    Area
}

si_unit! {
    /// Time interval, s.
    TimeInterval
}

si_unit! {
    /// Path length through the sample, m.
    PathLength
}

si_unit! {
    /// Molecular number density, m⁻³.
    NumberDensity
}

si_unit! {
    /// Two-photon absorption cross-section, m⁴·s.
    TpaCrossSection
}

si_unit! {
    /// Entangled-pair (linear-regime) absorption cross-section, m².
    PairCrossSection
}

si_unit! {
    /// Group-delay dispersion, s².
    GroupDelayDispersion
}

impl Power {
    pub const fn from_watts(w: f64) -> Self {
        Self(w)
    }
    pub fn from_milliwatts(mw: f64) -> Self {
        Self(mw * 1e-3)
    }
    pub fn from_nanowatts(nw: f64) -> Self {
        Self(nw * 1e-9)
    }
    pub const fn watts(self) -> f64 {
        self.0
    }
}

impl Wavelength {
    pub const fn from_meters(m: f64) -> Self {
        Self(m)
    }
    pub fn from_nanometers(nm: f64) -> Self {
        Self(nm * 1e-9)
    }
    pub const fn meters(self) -> f64 {
        self.0
    }

    /// Angular frequency 2πc/λ, rad/s.
    pub fn angular_frequency(self) -> f64 {
        std::f64::consts::TAU * crate::constants::SPEED_OF_LIGHT / self.0
    }
}

impl Area {
    pub fn from_square_centimeters(cm2: f64) -> Self {
        Self(cm2 * 1e-4)
    }
    pub fn square_centimeters(self) -> f64 {
        self.0 * 1e4
    }
}

impl PathLength {
    pub fn from_centimeters(cm: f64) -> Self {
        Self(cm * 1e-2)
    }
}

impl NumberDensity {
    /// From molar concentration (mol/L): 1 M = N_A molecules per litre.
    pub fn from_molar(molar: f64) -> Self {
        Self(molar * AVOGADRO * 1e3)
    }
    pub fn from_millimolar(mm: f64) -> Self {
        Self::from_molar(mm * 1e-3)
    }
}

impl TpaCrossSection {
    /// From Goeppert-Mayer units (1 GM = 10⁻⁵⁸ m⁴·s).
    pub fn from_gm(gm: f64) -> Self {
        Self(gm * GM)
    }
    pub fn gm(self) -> f64 {
        self.0 / GM
    }
    pub fn from_cm4_s(v: f64) -> Self {
        Self(v * 1e-8)
    }
    pub fn cm4_s(self) -> f64 {
        self.0 * 1e8
    }
}

impl PairCrossSection {
    pub fn square_centimeters(self) -> f64 {
        self.0 * 1e4
    }
}

impl GroupDelayDispersion {
    /// From fs² (1 fs² = 10⁻³⁰ s²).
    pub fn from_fs2(fs2: f64) -> Self {
        Self(fs2 * 1e-30)
    }
    pub fn fs2(self) -> f64 {
        self.0 * 1e30
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-15 * b.abs()
    }

    #[test]
    fn unit_conversions_round_to_si() {
        assert!(close(Power::from_milliwatts(100.0).watts(), 0.1));
        assert!(close(Power::from_nanowatts(20.0).si(), 2.0e-8));
        assert!(close(Wavelength::from_nanometers(1064.0).meters(), 1.064e-6));
        assert!(close(Area::from_square_centimeters(1e-6).si(), 1e-10));
        assert!(close(PathLength::from_centimeters(1.0).si(), 0.01));
        assert!(close(TpaCrossSection::from_gm(9.0).si(), 9e-58));
        assert!(close(TpaCrossSection::from_gm(9.0).cm4_s(), 9e-50));
        assert!(close(GroupDelayDispersion::from_fs2(5e4).si(), 5e-26));
    }

    #[test]
    fn molar_density_counts_molecules() {
        // 2 mM in 1e-6 cm² x 1 cm illuminated volume ~ 1.2e12 molecules.
        let n = NumberDensity::from_millimolar(2.0);
        let count = n.si() * Area::from_square_centimeters(1e-6).si() * 0.01;
        assert!((count / 1.2044e12 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn wavelength_to_angular_frequency() {
        // 2πc / 1064 nm = 1.77035e15 rad/s.
        let w = Wavelength::from_nanometers(1064.0).angular_frequency();
        assert!((w / 1.77035e15 - 1.0).abs() < 1e-5);
    }
}
