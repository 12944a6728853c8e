//! Physical constants, SI units (2019 redefinition values).

/// Reduced Planck constant ħ, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Planck constant h, J·s (exact).
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Vacuum permittivity ε₀, F/m.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_8128e-12;

/// Avogadro constant, mol⁻¹ (exact).
pub const AVOGADRO: f64 = 6.022_140_76e23;

/// One Goeppert-Mayer unit of two-photon cross-section, m⁴·s.
///
/// 1 GM = 10⁻⁵⁰ cm⁴·s = 10⁻⁵⁸ m⁴·s.
pub const GM: f64 = 1e-58;

/// One debye, C·m (dipole-moment unit): 10⁻²¹/c in SI.
pub const DEBYE: f64 = 3.335_640_951_981_520_5e-30;

/// √π, used by the scaled complementary error function and the Gaussian
/// closed forms.
pub const SQRT_PI: f64 = 1.772_453_850_905_516_027_3;
