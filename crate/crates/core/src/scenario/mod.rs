//! Published NTN project figures and the pipeline that cross-checks them.
//!
//! A [`Scenario`] records what a project reports: orbit, band, bandwidths,
//! SINR, spectral efficiency and bitrate, any of which may be absent. The
//! pipeline in [`run_scenario`] derives whatever the present inputs allow and
//! records a finding for every derivable quantity. Absent inputs produce
//! not-computable findings that name the missing fields.

mod document;
mod fixtures;
mod report;

pub use document::load_scenario;
pub use fixtures::{builtin_fixtures, fixture, fixture_document, fixture_ids};
pub use report::{Check, Quantity, ReportRow, ScenarioReport, CaseReport, DirectionReport, run_scenario};

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linkbudget::NoiseSpec;
use crate::quantities::Power;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbitClass {
    #[serde(rename = "LEO")]
    Leo,
    #[serde(rename = "MEO")]
    Meo,
    #[serde(rename = "GEO")]
    Geo,
    #[serde(rename = "HAPS")]
    Haps,
    #[serde(rename = "LAPS")]
    Laps,
}

impl OrbitClass {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_uppercase().as_str() {
            "LEO" => Some(OrbitClass::Leo),
            "MEO" => Some(OrbitClass::Meo),
            "GEO" => Some(OrbitClass::Geo),
            "HAP" | "HAPS" => Some(OrbitClass::Haps),
            "LAP" | "LAPS" => Some(OrbitClass::Laps),
            _ => None,
        }
    }
}

impl fmt::Display for OrbitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrbitClass::Leo => "LEO",
            OrbitClass::Meo => "MEO",
            OrbitClass::Geo => "GEO",
            OrbitClass::Haps => "HAPS",
            OrbitClass::Laps => "LAPS",
        })
    }
}

/// A reported figure: a single value or a `[low, high]` range.
///
/// Arithmetic between two figures pairs low with low and high with high.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Figure {
    low: f64,
    high: f64,
}

impl Figure {
    pub fn single(x: f64) -> Self {
        Figure { low: x, high: x }
    }

    pub fn range(a: f64, b: f64) -> Self {
        Figure {
            low: a.min(b),
            high: a.max(b),
        }
    }

    pub fn low(&self) -> f64 {
        self.low
    }

    pub fn high(&self) -> f64 {
        self.high
    }

    pub fn is_single(&self) -> bool {
        self.low == self.high
    }

    pub fn endpoints(&self) -> [f64; 2] {
        [self.low, self.high]
    }

    pub fn map(self, f: impl Fn(f64) -> f64) -> Self {
        Figure::range(f(self.low), f(self.high))
    }

    pub fn try_map(self, f: impl Fn(f64) -> Result<f64>) -> Result<Self> {
        Ok(Figure::range(f(self.low)?, f(self.high)?))
    }

    pub fn zip(self, other: Figure, f: impl Fn(f64, f64) -> f64) -> Self {
        Figure::range(f(self.low, other.low), f(self.high, other.high))
    }

    pub fn scaled(self, k: f64) -> Self {
        self.map(|x| x * k)
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_single() {
            write!(f, "{}", self.low)
        } else {
            write!(f, "{}..{}", self.low, self.high)
        }
    }
}

impl Serialize for Figure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_single() {
            s.serialize_f64(self.low)
        } else {
            [self.low, self.high].serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for Figure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            One(f64),
            Two([f64; 2]),
        }
        Ok(match Raw::deserialize(d)? {
            Raw::One(x) => Figure::single(x),
            Raw::Two([a, b]) => Figure::range(a, b),
        })
    }
}

/// Ground terminal description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerminalProfile {
    pub name: String,
    pub gain_dbi: f64,
    pub noise: NoiseSpec,
    pub eirp_dbw: Option<f64>,
}

impl TerminalProfile {
    pub const BUILTIN_IDS: [&'static str; 3] = ["class3-ue", "vsat", "iot"];

    /// Handset: 0 dBi, NF 7 dB, 200 mW (23 dBm).
    pub fn class3_ue() -> Self {
        TerminalProfile {
            name: "3GPP Class 3 UE".into(),
            gain_dbi: 0.0,
            noise: NoiseSpec::FigureDb(7.0),
            eirp_dbw: Some(23.0 - 30.0),
        }
    }

    /// Very small aperture terminal: 12 dBi, NF 5 dB, 2 W.
    pub fn vsat() -> Self {
        let p = Power::from_watts(2.0).expect("positive").dbw();
        TerminalProfile {
            name: "VSAT".into(),
            gain_dbi: 12.0,
            noise: NoiseSpec::FigureDb(5.0),
            eirp_dbw: Some(p + 12.0),
        }
    }

    /// IoT device: 0 dBi, 290 K, 23 dBm EIRP.
    pub fn iot() -> Self {
        TerminalProfile {
            name: "IoT device".into(),
            gain_dbi: 0.0,
            noise: NoiseSpec::TemperatureK(290.0),
            eirp_dbw: Some(23.0 - 30.0),
        }
    }

    pub fn builtin(id: &str) -> Result<Self> {
        match id.to_ascii_lowercase().as_str() {
            "class3-ue" | "ue" => Ok(Self::class3_ue()),
            "vsat" => Ok(Self::vsat()),
            "iot" => Ok(Self::iot()),
            _ => Err(Error::NotFound {
                id: id.to_owned(),
                valid: Self::BUILTIN_IDS.iter().map(|s| s.to_string()).collect(),
            }),
        }
    }
}

/// Per-direction reported figures, SI units.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LinkFigures {
    pub bandwidth_hz: Option<Figure>,
    pub sinr_db: Option<Figure>,
    pub se_bps_hz: Option<Figure>,
    pub bitrate_bps: Option<Figure>,
}

/// One terminal class within a project.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkCase {
    pub label: String,
    pub terminal: Option<TerminalProfile>,
    pub downlink: LinkFigures,
    pub uplink: LinkFigures,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub orbit: OrbitClass,
    pub altitude_km: Option<f64>,
    pub elevation_deg: Option<f64>,
    pub bands: Vec<String>,
    pub freq_dl_hz: Option<f64>,
    pub freq_ul_hz: Option<f64>,
    pub reuse: Option<u32>,
    pub beams: Option<u32>,
    pub coverage_radius_km: Option<f64>,
    pub margin_db: Option<f64>,
    /// Satellite EIRP spectral density, dBW/MHz.
    pub eirp_density_dbw_per_mhz: Option<f64>,
    /// Satellite receive figure of merit, dB/K.
    pub sat_g_over_t_dbk: Option<f64>,
    /// Ground terminal figure of merit when quoted directly, dB/K.
    pub terminal_g_over_t_dbk: Option<Figure>,
    pub cases: Vec<LinkCase>,
    pub annotations: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_serde() {
        let one: Figure = serde_json::from_str("2.5").unwrap();
        assert!(one.is_single());
        let two: Figure = serde_json::from_str("[9, 3]").unwrap();
        assert_eq!(two.endpoints(), [3.0, 9.0]);
        assert_eq!(serde_json::to_string(&two).unwrap(), "[3.0,9.0]");
        assert_eq!(serde_json::to_string(&one).unwrap(), "2.5");
        assert!(serde_json::from_str::<Figure>("[1, 2, 3]").is_err());
    }

    #[test]
    fn figure_arithmetic() {
        let a = Figure::range(0.8, 1.4);
        let bw = Figure::single(13e6);
        let r = a.zip(bw, |x, y| x * y);
        assert!((r.low() - 10.4e6).abs() < 1e-6 && (r.high() - 18.2e6).abs() < 1e-6);
        assert_eq!(Figure::single(2.0).map(|x| -x).endpoints(), [-2.0, -2.0]);
        assert_eq!(a.map(|x| -x).endpoints(), [-1.4, -0.8]);
    }

    #[test]
    fn builtin_terminals() {
        let v = TerminalProfile::vsat();
        assert!((v.eirp_dbw.unwrap() - 15.0103).abs() < 1e-4);
        assert_eq!(TerminalProfile::builtin("UE").unwrap(), TerminalProfile::class3_ue());
        assert!(TerminalProfile::builtin("phone").is_err());
    }

    #[test]
    fn orbit_names() {
        assert_eq!(OrbitClass::parse("HAPs"), Some(OrbitClass::Haps));
        assert_eq!(OrbitClass::parse("geo"), Some(OrbitClass::Geo));
        assert_eq!(OrbitClass::parse("LAP"), Some(OrbitClass::Laps));
        assert_eq!(OrbitClass::parse("HEO"), None);
    }
}
