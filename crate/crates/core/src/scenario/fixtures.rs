//! Built-in project fixtures, embedded at compile time.

use super::{load_scenario, Scenario};
use crate::error::{Error, Result};

static FIXTURES: [(&str, &str); 8] = [
    ("thales", include_str!("../../fixtures/thales.json")),
    ("intelsat-haps", include_str!("../../fixtures/intelsat-haps.json")),
    ("inmarsat-geo-iot", include_str!("../../fixtures/inmarsat-geo-iot.json")),
    ("echostar-geo", include_str!("../../fixtures/echostar-geo.json")),
    ("oneweb-leo", include_str!("../../fixtures/oneweb-leo.json")),
    ("intelsat-geo-hts", include_str!("../../fixtures/intelsat-geo-hts.json")),
    ("avanti-geo-hts", include_str!("../../fixtures/avanti-geo-hts.json")),
    ("hispasat-amazonas3", include_str!("../../fixtures/hispasat-amazonas3.json")),
];

pub fn fixture_ids() -> Vec<&'static str> {
    FIXTURES.iter().map(|(id, _)| *id).collect()
}

/// Raw JSON source of a fixture.
pub fn fixture_document(id: &str) -> Result<&'static str> {
    FIXTURES
        .iter()
        .find(|(k, _)| k.eq_ignore_ascii_case(id))
        .map(|(_, doc)| *doc)
        .ok_or_else(|| Error::NotFound {
            id: id.to_owned(),
            valid: fixture_ids().into_iter().map(str::to_owned).collect(),
        })
}

pub fn fixture(id: &str) -> Result<Scenario> {
    load_scenario(fixture_document(id)?)
}

/// All eight fixtures in presentation order.
pub fn builtin_fixtures() -> Vec<Scenario> {
    FIXTURES
        .iter()
        .map(|(id, doc)| load_scenario(doc).unwrap_or_else(|e| panic!("fixture {id} is invalid: {e}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{Figure, OrbitClass};

    #[test]
    fn all_load() {
        assert_eq!(builtin_fixtures().len(), 8);
        assert_eq!(fixture_ids().len(), 8);
    }

    #[test]
    fn thales_fields() {
        let s = fixture("thales").unwrap();
        assert_eq!(s.orbit, OrbitClass::Leo);
        assert_eq!((s.altitude_km, s.elevation_deg), (Some(600.0), Some(30.0)));
        assert_eq!(s.freq_dl_hz, Some(2e9));
        let c = &s.cases[0];
        assert_eq!(c.downlink.bandwidth_hz, Some(Figure::single(10e6)));
        assert_eq!(c.uplink.bandwidth_hz, Some(Figure::single(360e3)));
        assert_eq!(c.downlink.sinr_db, Some(Figure::single(5.5)));
        assert_eq!(c.uplink.sinr_db, Some(Figure::single(2.5)));
        assert_eq!(c.downlink.se_bps_hz, Some(Figure::single(1.35)));
        assert_eq!(c.uplink.se_bps_hz, Some(Figure::single(1.0)));
    }

    #[test]
    fn haps_and_oneweb() {
        let h = fixture("intelsat-haps").unwrap();
        assert_eq!((h.beams, h.margin_db, h.coverage_radius_km), (Some(16), Some(4.0), Some(50.0)));
        let o = fixture("oneweb-leo").unwrap();
        assert_eq!(o.cases[0].downlink.bitrate_bps, Some(Figure::range(140e6, 830e6)));
        assert_eq!(o.margin_db, Some(2.0));
    }

    #[test]
    fn geo_altitudes_mirror_the_source() {
        for id in ["inmarsat-geo-iot", "echostar-geo", "avanti-geo-hts", "intelsat-geo-hts"] {
            let s = fixture(id).unwrap();
            assert_eq!(s.altitude_km, Some(38_000.0));
            assert!(s.annotations.iter().any(|a| a.contains("35786")));
        }
        assert_eq!(fixture("hispasat-amazonas3").unwrap().altitude_km, Some(35_786.0));
    }

    #[test]
    fn unknown_fixture() {
        match fixture("starlink") {
            Err(Error::NotFound { valid, .. }) => assert_eq!(valid.len(), 8),
            other => panic!("{other:?}"),
        }
    }
}
