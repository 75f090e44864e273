//! ITU frequency allocations for satellite service links.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkDirection {
    Downlink,
    Uplink,
}

impl fmt::Display for LinkDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LinkDirection::Downlink => "downlink",
            LinkDirection::Uplink => "uplink",
        })
    }
}

/// Orbit qualifier attached to an allocation row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitQualifier {
    #[serde(rename = "GEO")]
    Geo,
    #[serde(rename = "non-GEO")]
    NonGeo,
    #[serde(rename = "any")]
    Any,
}

impl fmt::Display for OrbitQualifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrbitQualifier::Geo => "GEO",
            OrbitQualifier::NonGeo => "non-GEO",
            OrbitQualifier::Any => "any",
        })
    }
}

/// Orbit class used when querying the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrbitFilter {
    Geo,
    NonGeo,
    /// Accept rows of any qualifier.
    Any,
}

impl OrbitFilter {
    fn accepts(self, q: OrbitQualifier) -> bool {
        match (self, q) {
            (OrbitFilter::Any, _) | (_, OrbitQualifier::Any) => true,
            (OrbitFilter::Geo, OrbitQualifier::Geo) => true,
            (OrbitFilter::NonGeo, OrbitQualifier::NonGeo) => true,
            _ => false,
        }
    }
}

/// Closed frequency interval in MHz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyInterval {
    pub low_mhz: f64,
    pub high_mhz: f64,
}

impl FrequencyInterval {
    const fn new(low_mhz: f64, high_mhz: f64) -> Self {
        FrequencyInterval { low_mhz, high_mhz }
    }

    pub fn contains(&self, mhz: f64) -> bool {
        self.low_mhz <= mhz && mhz <= self.high_mhz
    }

    fn distance(&self, mhz: f64) -> f64 {
        if mhz < self.low_mhz {
            self.low_mhz - mhz
        } else if mhz > self.high_mhz {
            mhz - self.high_mhz
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandAllocation {
    pub band: &'static str,
    pub orbit: OrbitQualifier,
    pub direction: LinkDirection,
    pub intervals: &'static [FrequencyInterval],
}

impl BandAllocation {
    pub fn contains(&self, mhz: f64) -> bool {
        self.intervals.iter().any(|i| i.contains(mhz))
    }
}

impl fmt::Display for BandAllocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} band", self.band)?;
        if self.orbit != OrbitQualifier::Any {
            write!(f, " ({})", self.orbit)?;
        }
        write!(f, " {}", self.direction)?;
        for (n, i) in self.intervals.iter().enumerate() {
            let sep = if n == 0 { " " } else { ", " };
            write!(f, "{sep}{}-{} MHz", i.low_mhz, i.high_mhz)?;
        }
        Ok(())
    }
}

use LinkDirection::{Downlink, Uplink};
use OrbitQualifier::{Any, Geo, NonGeo};

const fn iv(low: f64, high: f64) -> FrequencyInterval {
    FrequencyInterval::new(low, high)
}

#[rustfmt::skip]
static CATALOG: [BandAllocation; 16] = [
    BandAllocation { band: "L", orbit: Geo, direction: Downlink, intervals: &[iv(1518.0, 1559.0)] },
    BandAllocation { band: "L", orbit: Geo, direction: Uplink, intervals: &[iv(1626.5, 1660.5), iv(1668.0, 1675.0)] },
    BandAllocation { band: "L", orbit: NonGeo, direction: Downlink, intervals: &[iv(1613.8, 1626.5)] },
    BandAllocation { band: "L", orbit: NonGeo, direction: Uplink, intervals: &[iv(1610.0, 1626.5)] },
    BandAllocation { band: "C", orbit: Any, direction: Downlink, intervals: &[iv(3400.0, 4200.0), iv(4500.0, 4800.0)] },
    BandAllocation { band: "C", orbit: Any, direction: Uplink, intervals: &[iv(5725.0, 7025.0)] },
    BandAllocation { band: "S", orbit: Any, direction: Downlink, intervals: &[iv(2160.0, 2200.0), iv(2483.5, 2500.0)] },
    BandAllocation { band: "S", orbit: Any, direction: Uplink, intervals: &[iv(1980.0, 2025.0)] },
    BandAllocation { band: "Ku", orbit: Any, direction: Downlink, intervals: &[iv(10_700.0, 12_750.0)] },
    BandAllocation { band: "Ku", orbit: Any, direction: Uplink, intervals: &[iv(12_750.0, 13_250.0), iv(13_750.0, 14_500.0)] },
    BandAllocation { band: "Ka", orbit: Geo, direction: Downlink, intervals: &[iv(17_300.0, 20_200.0)] },
    BandAllocation { band: "Ka", orbit: Geo, direction: Uplink, intervals: &[iv(27_000.0, 30_000.0)] },
    BandAllocation { band: "Ka", orbit: NonGeo, direction: Downlink, intervals: &[iv(17_700.0, 20_200.0)] },
    BandAllocation { band: "Ka", orbit: NonGeo, direction: Uplink, intervals: &[iv(27_000.0, 29_100.0), iv(29_500.0, 30_000.0)] },
    BandAllocation {
        band: "Q/V",
        orbit: Any,
        direction: Downlink,
        intervals: &[iv(37_500.0, 42_500.0), iv(47_500.0, 47_900.0), iv(48_200.0, 48_540.0), iv(49_440.0, 50_200.0)],
    },
    BandAllocation {
        band: "Q/V",
        orbit: Any,
        direction: Uplink,
        intervals: &[iv(42_500.0, 43_500.0), iv(47_200.0, 50_200.0), iv(50_400.0, 51_400.0)],
    },
];

/// All allocation rows, in table order.
pub fn band_catalog() -> &'static [BandAllocation] {
    &CATALOG
}

/// Finds the allocation containing `freq_hz` for the given direction and orbit.
///
/// Interval bounds are inclusive. Rows without an orbit qualifier match any
/// orbit filter.
pub fn band_lookup(
    freq_hz: f64,
    direction: LinkDirection,
    orbit: OrbitFilter,
) -> Result<&'static BandAllocation> {
    if !(freq_hz.is_finite() && freq_hz > 0.0) {
        return Err(Error::domain(format!("frequency must be > 0 Hz, got {freq_hz}")));
    }
    let mhz = freq_hz / 1e6;
    let candidates = || {
        CATALOG
            .iter()
            .filter(move |a| a.direction == direction && orbit.accepts(a.orbit))
    };
    if let Some(hit) = candidates().find(|a| a.contains(mhz)) {
        return Ok(hit);
    }
    let nearest = candidates()
        .flat_map(|a| a.intervals.iter().map(move |i| (i.distance(mhz), a)))
        .min_by(|x, y| x.0.total_cmp(&y.0))
        .map(|(_, a)| a.to_string())
        .unwrap_or_else(|| "none".to_owned());
    Err(Error::OutOfBand { freq_mhz: mhz, nearest })
}

/// CSV export, one row per interval.
pub fn band_catalog_csv() -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["band", "orbit", "direction", "low_MHz", "high_MHz"])
        .expect("in-memory write");
    for a in &CATALOG {
        for i in a.intervals {
            w.write_record([
                a.band.to_owned(),
                a.orbit.to_string(),
                a.direction.to_string(),
                i.low_mhz.to_string(),
                i.high_mhz.to_string(),
            ])
            .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookups_from_table() {
        let s = band_lookup(1990e6, Uplink, OrbitFilter::Any).unwrap();
        assert_eq!(s.band, "S");
        let ku = band_lookup(13.0e9, Uplink, OrbitFilter::Any).unwrap();
        assert_eq!(ku.band, "Ku");
        assert_eq!(band_lookup(11.7e9, Downlink, OrbitFilter::NonGeo).unwrap().band, "Ku");
        assert_eq!(band_lookup(14.5e9, Uplink, OrbitFilter::NonGeo).unwrap().band, "Ku");
    }

    #[test]
    fn out_of_band_names_nearest() {
        match band_lookup(100e9, Downlink, OrbitFilter::Any) {
            Err(Error::OutOfBand { freq_mhz, nearest }) => {
                assert_eq!(freq_mhz, 100_000.0);
                assert!(nearest.starts_with("Q/V"), "{nearest}");
            }
            other => panic!("expected OutOfBand, got {other:?}"),
        }
        // 2 GHz downlink is not an S-band downlink frequency.
        match band_lookup(2e9, Downlink, OrbitFilter::NonGeo) {
            Err(Error::OutOfBand { nearest, .. }) => assert!(nearest.starts_with("S band")),
            other => panic!("expected OutOfBand, got {other:?}"),
        }
        assert!(band_lookup(0.0, Downlink, OrbitFilter::Any).is_err());
    }

    #[test]
    fn orbit_qualifier_disambiguates() {
        // 17.5 GHz downlink is only in the GEO Ka row.
        assert_eq!(band_lookup(17.5e9, Downlink, OrbitFilter::Geo).unwrap().orbit, Geo);
        assert!(band_lookup(17.5e9, Downlink, OrbitFilter::NonGeo).is_err());
        assert_eq!(band_lookup(1620e6, Downlink, OrbitFilter::NonGeo).unwrap().band, "L");
        assert!(band_lookup(1620e6, Downlink, OrbitFilter::Geo).is_err());
    }

    #[test]
    fn catalog_is_well_formed() {
        for a in band_catalog() {
            for (n, i) in a.intervals.iter().enumerate() {
                assert!(i.low_mhz < i.high_mhz, "{a}");
                for j in &a.intervals[n + 1..] {
                    assert!(i.high_mhz < j.low_mhz || j.high_mhz < i.low_mhz, "{a}");
                }
            }
        }
    }

    #[test]
    fn csv_export() {
        let csv = band_catalog_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("band,orbit,direction,low_MHz,high_MHz"));
        assert_eq!(lines.next(), Some("L,GEO,downlink,1518,1559"));
        let rows = band_catalog().iter().map(|a| a.intervals.len()).sum::<usize>();
        assert_eq!(csv.lines().count(), rows + 1);
    }

    #[test]
    fn interior_frequency_resolves_uniquely() {
        for orbit in [OrbitFilter::Geo, OrbitFilter::NonGeo] {
            for a in band_catalog().iter().filter(|a| orbit.accepts(a.orbit)) {
                for i in a.intervals {
                    let mid = 0.5 * (i.low_mhz + i.high_mhz);
                    let hits = band_catalog()
                        .iter()
                        .filter(|b| b.direction == a.direction && orbit.accepts(b.orbit))
                        .filter(|b| b.contains(mid))
                        .count();
                    assert_eq!(hits, 1, "{a} at {mid} MHz for {orbit:?}");
                }
            }
        }
    }
}
