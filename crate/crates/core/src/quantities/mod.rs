//! Dimension-tagged scalars, decibel algebra and physical constants.
//!
//! Values are stored once in linear SI units. Decibel views are computed on
//! demand, so mixing a dB figure with a linear one requires an explicit
//! conversion at the call site.

mod bands;

pub use bands::{
    band_catalog, band_catalog_csv, band_lookup, BandAllocation, FrequencyInterval,
    LinkDirection, OrbitFilter, OrbitQualifier,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical and geodetic constants used by every calculation.
///
/// The speed of light defaults to `3.0e8` m/s rather than the exact SI value
/// so that wavelengths and path losses match the usual hand-worked figures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicalConstants {
    /// Speed of light, m/s.
    #[serde(alias = "c")]
    pub speed_of_light_m_s: f64,
    /// Boltzmann constant, J/K.
    #[serde(alias = "k_b", alias = "k_B")]
    pub boltzmann_j_per_k: f64,
    /// Mean Earth radius, km.
    #[serde(alias = "r_e", alias = "R_E")]
    pub earth_radius_km: f64,
    /// Earth perimeter, km.
    pub earth_perimeter_km: f64,
    /// Earth surface, km².
    pub earth_surface_km2: f64,
    /// Reference (ambient) temperature for noise figure conversion, K.
    pub reference_temperature_k: f64,
}

impl PhysicalConstants {
    pub const DEFAULT: PhysicalConstants = PhysicalConstants {
        speed_of_light_m_s: 3.0e8,
        boltzmann_j_per_k: 1.380649e-23,
        earth_radius_km: 6371.0,
        earth_perimeter_km: 40_075.0,
        earth_surface_km2: 510.1e6,
        reference_temperature_k: 290.0,
    };

    /// Boltzmann constant in dBW/K/Hz (about -228.6).
    pub fn boltzmann_dbw_per_k_hz(&self) -> f64 {
        10.0 * self.boltzmann_j_per_k.log10()
    }

    /// Checks that every constant is finite and strictly positive.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("speed_of_light_m_s", self.speed_of_light_m_s),
            ("boltzmann_j_per_k", self.boltzmann_j_per_k),
            ("earth_radius_km", self.earth_radius_km),
            ("earth_perimeter_km", self.earth_perimeter_km),
            ("earth_surface_km2", self.earth_surface_km2),
            ("reference_temperature_k", self.reference_temperature_k),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::validation(name, "must be finite and > 0"));
            }
        }
        Ok(())
    }

    /// Parses a JSON override document; absent keys keep their defaults.
    pub fn from_json(doc: &str) -> Result<Self> {
        let constants: PhysicalConstants = serde_json::from_str(doc)?;
        constants.validate()?;
        Ok(constants)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// `10·log10(x)` for a strictly positive ratio.
pub fn db_from_linear(x: f64) -> Result<f64> {
    if x > 0.0 && !x.is_nan() {
        Ok(10.0 * x.log10())
    } else {
        Err(Error::domain(format!("cannot take dB of {x}")))
    }
}

/// `10^(x/10)` for a finite decibel value.
pub fn linear_from_db(x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(10f64.powf(x / 10.0))
    } else {
        Err(Error::domain(format!("non-finite dB value {x}")))
    }
}

/// Noise temperature in kelvin equivalent to a noise figure in dB.
pub fn noise_temperature_from_nf(nf_db: f64, t_ref_k: f64) -> Result<f64> {
    if !(nf_db.is_finite() && nf_db >= 0.0) {
        return Err(Error::domain(format!("noise figure must be >= 0 dB, got {nf_db}")));
    }
    if !(t_ref_k.is_finite() && t_ref_k > 0.0) {
        return Err(Error::domain(format!("reference temperature must be > 0 K, got {t_ref_k}")));
    }
    Ok(t_ref_k * (10f64.powf(nf_db / 10.0) - 1.0))
}

/// Free-space wavelength in metres.
pub fn wavelength(freq_hz: f64, constants: &PhysicalConstants) -> Result<f64> {
    if freq_hz.is_finite() && freq_hz > 0.0 {
        Ok(constants.speed_of_light_m_s / freq_hz)
    } else {
        Err(Error::domain(format!("frequency must be > 0 Hz, got {freq_hz}")))
    }
}

/// Renders `x` with `digits` significant digits, trailing zeros trimmed.
/// Very large or small magnitudes switch to exponent notation.
pub fn format_significant(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_owned();
    }
    let digits = digits.max(1);
    // Round in exponent form first so large integers lose their excess digits.
    let rounded: f64 = format!("{:.*e}", digits - 1, x).parse().expect("exponent form parses");
    let exp = rounded.abs().log10().floor() as i32;
    if !(-4..15).contains(&exp) {
        let s = format!("{:.*e}", digits - 1, rounded);
        let (mantissa, e) = s.split_once('e').expect("exponent form");
        return format!("{}e{}", trim_zeros(mantissa), e);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, rounded)).to_owned()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Dimensionless power ratio (SNR, SIR, SINR, path gain).
///
/// Positive infinity is accepted and stands for "no impairment", e.g. an
/// interference-free SIR.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PowerRatio(f64);

impl PowerRatio {
    pub fn from_linear(x: f64) -> Result<Self> {
        if x > 0.0 && !x.is_nan() {
            Ok(PowerRatio(x))
        } else {
            Err(Error::domain(format!("power ratio must be > 0, got {x}")))
        }
    }

    pub fn from_db(db: f64) -> Result<Self> {
        linear_from_db(db).map(PowerRatio)
    }

    pub fn linear(self) -> f64 {
        self.0
    }

    pub fn db(self) -> f64 {
        10.0 * self.0.log10()
    }
}

/// Power in watts, with dBW and dBm views.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Power(f64);

impl Power {
    pub fn from_watts(w: f64) -> Result<Self> {
        if w.is_finite() && w >= 0.0 {
            Ok(Power(w))
        } else {
            Err(Error::domain(format!("power must be >= 0 W, got {w}")))
        }
    }

    pub fn from_dbw(dbw: f64) -> Result<Self> {
        linear_from_db(dbw).map(Power)
    }

    pub fn from_dbm(dbm: f64) -> Result<Self> {
        linear_from_db(dbm - 30.0).map(Power)
    }

    pub fn watts(self) -> f64 {
        self.0
    }

    /// `-inf` for zero power.
    pub fn dbw(self) -> f64 {
        10.0 * self.0.log10()
    }

    pub fn dbm(self) -> f64 {
        self.dbw() + 30.0
    }
}

/// Antenna gain relative to an isotropic radiator.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AntennaGain(f64);

impl AntennaGain {
    pub const ISOTROPIC: AntennaGain = AntennaGain(1.0);

    pub fn from_linear(g: f64) -> Result<Self> {
        if g.is_finite() && g > 0.0 {
            Ok(AntennaGain(g))
        } else {
            Err(Error::domain(format!("antenna gain must be > 0, got {g}")))
        }
    }

    pub fn from_dbi(dbi: f64) -> Result<Self> {
        linear_from_db(dbi).map(AntennaGain)
    }

    pub fn linear(self) -> f64 {
        self.0
    }

    pub fn dbi(self) -> f64 {
        10.0 * self.0.log10()
    }
}

/// Plane angle stored in radians.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Angle(f64);

impl Angle {
    pub fn from_radians(rad: f64) -> Self {
        Angle(rad)
    }

    pub fn from_degrees(deg: f64) -> Self {
        Angle(deg.to_radians())
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn db_conversions() {
        assert_eq!(db_from_linear(1.0).unwrap(), 0.0);
        assert!(close(db_from_linear(19.95).unwrap(), 13.0, 0.001));
        assert!(close(db_from_linear(26.6).unwrap(), 14.2488, 1e-4));
        assert_eq!(linear_from_db(0.0).unwrap(), 1.0);
        assert!(close(linear_from_db(1.5).unwrap(), 1.41, 0.005));
        assert!(close(linear_from_db(13.0).unwrap(), 19.95, 0.005));
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(13.5e6, 6), "13500000");
        assert_eq!(format_significant(46_285_714_286.0, 6), "46285700000");
        assert_eq!(format_significant(1_897_366_596.0, 2), "1900000000");
        assert_eq!(format_significant(2.185_339_2, 6), "2.18534");
        assert_eq!(format_significant(-228.599_167, 6), "-228.599");
        assert_eq!(format_significant(1.7145e-16, 6), "1.7145e-16");
        assert_eq!(format_significant(0.0, 6), "0");
        assert_eq!(format_significant(9.999_999_9, 6), "10");
        assert_eq!(format_significant(0.000_123_456_7, 3), "0.000123");
    }

    #[test]
    fn db_rejects_bad_input() {
        assert!(matches!(db_from_linear(0.0), Err(Error::Domain(_))));
        assert!(matches!(db_from_linear(-1.0), Err(Error::Domain(_))));
        assert!(matches!(db_from_linear(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(linear_from_db(f64::INFINITY), Err(Error::Domain(_))));
        assert!(matches!(linear_from_db(f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn noise_temperature() {
        assert!(close(noise_temperature_from_nf(7.0, 290.0).unwrap(), 1163.4, 0.05));
        assert!(close(noise_temperature_from_nf(5.0, 290.0).unwrap(), 627.0, 0.1));
        assert_eq!(noise_temperature_from_nf(0.0, 290.0).unwrap(), 0.0);
        assert!(noise_temperature_from_nf(-1.0, 290.0).is_err());
        assert!(noise_temperature_from_nf(3.0, 0.0).is_err());
    }

    #[test]
    fn wavelengths() {
        let c = PhysicalConstants::default();
        assert!(close(wavelength(2e9, &c).unwrap(), 0.15, 1e-12));
        assert_eq!(wavelength(c.speed_of_light_m_s, &c).unwrap(), 1.0);
        assert!(close(wavelength(11.7e9, &c).unwrap(), 0.025641, 1e-6));
        assert!(wavelength(0.0, &c).is_err());
        assert!(wavelength(-5.0, &c).is_err());
    }

    #[test]
    fn constants() {
        let c = PhysicalConstants::default();
        assert!(close(c.boltzmann_dbw_per_k_hz(), -228.6, 0.05));
        c.validate().unwrap();
        let o = PhysicalConstants::from_json(r#"{"c": 299792458.0, "R_E": 6378.0}"#).unwrap();
        assert_eq!(o.speed_of_light_m_s, 299_792_458.0);
        assert_eq!(o.earth_radius_km, 6378.0);
        assert_eq!(o.boltzmann_j_per_k, c.boltzmann_j_per_k);
        assert!(PhysicalConstants::from_json(r#"{"c": -1}"#).is_err());
        assert!(PhysicalConstants::from_json(r#"{"speed": 1}"#).is_err());
    }

    #[test]
    fn power_views() {
        let p = Power::from_watts(0.2).unwrap();
        assert!(close(p.dbm(), 23.01, 0.01));
        assert_eq!(p.dbm() - p.dbw(), 30.0);
        assert!(close(Power::from_dbm(23.0).unwrap().watts(), 0.1995, 1e-4));
        assert!(Power::from_watts(-1.0).is_err());
    }

    #[test]
    fn gain_and_ratio() {
        assert_eq!(AntennaGain::ISOTROPIC.dbi(), 0.0);
        assert!(AntennaGain::from_linear(0.0).is_err());
        assert!(close(AntennaGain::from_dbi(13.0).unwrap().linear(), 19.95, 0.005));
        assert!(PowerRatio::from_linear(0.0).is_err());
        assert_eq!(PowerRatio::from_linear(f64::INFINITY).unwrap().db(), f64::INFINITY);
        assert!(close(PowerRatio::from_db(6.0).unwrap().linear(), 3.981, 1e-3));
    }

    #[test]
    fn angle_views() {
        let a = Angle::from_degrees(90.0);
        assert!(close(a.radians(), std::f64::consts::FRAC_PI_2, 1e-15));
        assert!(close(a.degrees(), 90.0, 1e-12));
    }
}
