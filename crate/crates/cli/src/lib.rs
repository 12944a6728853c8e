//! Command-line front end for the two-photon absorption engine: scenario
//! files, worked-example presets, parameter sweeps, and sampled-amplitude
//! export. The binary (`etpa`) is a thin shell over these modules so every
//! behavior is exercisable as a library from the test suites.

pub mod presets;
pub mod scenario;
pub mod sweep;
pub mod units_parse;
