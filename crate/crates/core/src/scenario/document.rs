//! JSON scenario documents with unit-suffixed keys.
//!
//! ```json
//! { "name": "Example LEO", "orbit": "LEO", "altitude_km": 600,
//!   "elevation_deg": 30, "band": "S", "freq_dl_ghz": 2.0,
//!   "bw_dl_mhz": 10, "sinr_dl_db": 5.5, "se_dl_bps_hz": 1.35,
//!   "bitrate_dl_mbps": 13.5, "terminal": "class3-ue" }
//! ```
//!
//! Figures may be a number or a two-element `[low, high]` array. Per-link
//! keys may instead be grouped in a `cases` array, one object per terminal
//! class. Unknown keys are rejected.

use std::collections::BTreeSet;

use serde_json::{Map, Value};

use super::{Figure, LinkCase, LinkFigures, OrbitClass, Scenario, TerminalProfile};
use crate::error::{Error, Result};
use crate::linkbudget::NoiseSpec;

#[derive(Clone, Copy)]
enum Bound {
    Positive,
    NonNegative,
    Finite,
    Within(f64, f64),
}

impl Bound {
    fn check(self, x: f64) -> std::result::Result<(), String> {
        let ok = x.is_finite()
            && match self {
                Bound::Positive => x > 0.0,
                Bound::NonNegative => x >= 0.0,
                Bound::Finite => true,
                Bound::Within(lo, hi) => (lo..=hi).contains(&x),
            };
        if ok {
            return Ok(());
        }
        Err(match self {
            Bound::Positive => format!("must be > 0, got {x}"),
            Bound::NonNegative => format!("must be >= 0, got {x}"),
            Bound::Finite => format!("must be finite, got {x}"),
            Bound::Within(lo, hi) => format!("must lie in [{lo}, {hi}], got {x}"),
        })
    }
}

const BW_DL: &[(&str, f64)] = &[("bw_dl_hz", 1.0), ("bw_dl_khz", 1e3), ("bw_dl_mhz", 1e6), ("bw_dl_ghz", 1e9)];
const BW_UL: &[(&str, f64)] = &[("bw_ul_hz", 1.0), ("bw_ul_khz", 1e3), ("bw_ul_mhz", 1e6), ("bw_ul_ghz", 1e9)];
const RATE_DL: &[(&str, f64)] = &[
    ("bitrate_dl_bps", 1.0),
    ("bitrate_dl_kbps", 1e3),
    ("bitrate_dl_mbps", 1e6),
    ("bitrate_dl_gbps", 1e9),
];
const RATE_UL: &[(&str, f64)] = &[
    ("bitrate_ul_bps", 1.0),
    ("bitrate_ul_kbps", 1e3),
    ("bitrate_ul_mbps", 1e6),
    ("bitrate_ul_gbps", 1e9),
];

struct Fields<'a> {
    map: &'a Map<String, Value>,
    used: BTreeSet<&'a str>,
    prefix: String,
}

impl<'a> Fields<'a> {
    fn new(map: &'a Map<String, Value>, prefix: String) -> Self {
        Fields {
            map,
            used: BTreeSet::new(),
            prefix,
        }
    }

    fn err(&self, field: &str, reason: impl Into<String>) -> Error {
        Error::validation(format!("{}{field}", self.prefix), reason)
    }

    /// First present key among unit variants; null counts as absent.
    fn take(&mut self, field: &str, keys: &[(&'static str, f64)]) -> Result<Option<(&'a Value, f64)>> {
        let mut found = None;
        for &(key, scale) in keys {
            if let Some((k, v)) = self.map.get_key_value(key) {
                self.used.insert(k.as_str());
                if v.is_null() {
                    continue;
                }
                if found.is_some() {
                    return Err(self.err(field, "given more than once with different units"));
                }
                found = Some((v, scale));
            }
        }
        Ok(found)
    }

    fn number(&mut self, field: &str, keys: &[(&'static str, f64)], bound: Bound) -> Result<Option<f64>> {
        let Some((v, scale)) = self.take(field, keys)? else {
            return Ok(None);
        };
        let x = v.as_f64().ok_or_else(|| self.err(field, "expected a number"))?;
        bound.check(x).map_err(|r| self.err(field, r))?;
        Ok(Some(x * scale))
    }

    fn count(&mut self, field: &str, key: &'static str) -> Result<Option<u32>> {
        let Some((v, _)) = self.take(field, &[(key, 1.0)])? else {
            return Ok(None);
        };
        match v.as_u64() {
            Some(n) if n >= 1 && n <= u64::from(u32::MAX) => Ok(Some(n as u32)),
            _ => Err(self.err(field, "expected an integer >= 1")),
        }
    }

    fn figure(&mut self, field: &str, keys: &[(&'static str, f64)], bound: Bound) -> Result<Option<Figure>> {
        let Some((v, scale)) = self.take(field, keys)? else {
            return Ok(None);
        };
        let fig = match v {
            Value::Number(n) => Figure::single(n.as_f64().unwrap_or(f64::NAN)),
            Value::Array(items) if items.len() == 2 => {
                let a = items[0].as_f64();
                let b = items[1].as_f64();
                match (a, b) {
                    (Some(a), Some(b)) => Figure::range(a, b),
                    _ => return Err(self.err(field, "range bounds must be numbers")),
                }
            }
            _ => return Err(self.err(field, "expected a number or a [low, high] pair")),
        };
        for x in fig.endpoints() {
            bound.check(x).map_err(|r| self.err(field, r))?;
        }
        Ok(Some(fig.scaled(scale)))
    }

    fn string(&mut self, field: &str, key: &'static str) -> Result<Option<&'a str>> {
        let Some((v, _)) = self.take(field, &[(key, 1.0)])? else {
            return Ok(None);
        };
        v.as_str().map(Some).ok_or_else(|| self.err(field, "expected a string"))
    }

    fn strings(&mut self, field: &str, key: &'static str) -> Result<Vec<String>> {
        let Some((v, _)) = self.take(field, &[(key, 1.0)])? else {
            return Ok(Vec::new());
        };
        match v {
            Value::String(s) => Ok(vec![s.clone()]),
            Value::Array(items) => items
                .iter()
                .map(|i| {
                    i.as_str()
                        .map(str::to_owned)
                        .ok_or_else(|| self.err(field, "expected strings"))
                })
                .collect(),
            _ => Err(self.err(field, "expected a string or a list of strings")),
        }
    }

    fn has_any(&self, keys: &[&str]) -> bool {
        keys.iter().any(|k| self.map.contains_key(*k))
    }

    fn finish(self) -> Result<()> {
        match self.map.keys().find(|k| !self.used.contains(k.as_str())) {
            Some(k) => Err(Error::validation(format!("{}{k}", self.prefix), "unknown key")),
            None => Ok(()),
        }
    }
}

const CASE_KEYS: &[&str] = &[
    "label", "terminal", "bw_dl_hz", "bw_dl_khz", "bw_dl_mhz", "bw_dl_ghz", "bw_ul_hz", "bw_ul_khz",
    "bw_ul_mhz", "bw_ul_ghz", "sinr_dl_db", "sinr_ul_db", "se_dl_bps_hz", "se_ul_bps_hz",
    "bitrate_dl_bps", "bitrate_dl_kbps", "bitrate_dl_mbps", "bitrate_dl_gbps", "bitrate_ul_bps",
    "bitrate_ul_kbps", "bitrate_ul_mbps", "bitrate_ul_gbps",
];

fn parse_terminal(f: &mut Fields<'_>) -> Result<Option<TerminalProfile>> {
    let Some((v, _)) = f.take("terminal", &[("terminal", 1.0)])? else {
        return Ok(None);
    };
    match v {
        Value::String(id) => TerminalProfile::builtin(id)
            .map(Some)
            .map_err(|e| f.err("terminal", e.to_string())),
        Value::Object(obj) => {
            let mut t = Fields::new(obj, format!("{}terminal.", f.prefix));
            let name = t
                .string("name", "name")?
                .ok_or_else(|| t.err("name", "required"))?
                .to_owned();
            let gain_dbi = t
                .number("gain_dbi", &[("gain_dbi", 1.0)], Bound::Finite)?
                .ok_or_else(|| t.err("gain_dbi", "required"))?;
            let nf = t.number("nf_db", &[("nf_db", 1.0)], Bound::NonNegative)?;
            let temp = t.number("noise_temp_k", &[("noise_temp_k", 1.0)], Bound::Positive)?;
            let noise = match (nf, temp) {
                (Some(nf), None) => NoiseSpec::FigureDb(nf),
                (None, Some(tk)) => NoiseSpec::TemperatureK(tk),
                _ => return Err(t.err("noise", "give exactly one of nf_db and noise_temp_k")),
            };
            let eirp_dbw = t.number("eirp", &[("eirp_dbw", 1.0)], Bound::Finite)?;
            let eirp_dbm = t.number("eirp", &[("eirp_dbm", 1.0)], Bound::Finite)?;
            let eirp_dbw = match (eirp_dbw, eirp_dbm) {
                (Some(_), Some(_)) => return Err(t.err("eirp", "given more than once with different units")),
                (w, m) => w.or(m.map(|dbm| dbm - 30.0)),
            };
            t.finish()?;
            Ok(Some(TerminalProfile {
                name,
                gain_dbi,
                noise,
                eirp_dbw,
            }))
        }
        _ => Err(f.err("terminal", "expected a profile name or an object")),
    }
}

fn parse_case(f: &mut Fields<'_>) -> Result<LinkCase> {
    let label = f.string("label", "label")?.map(str::to_owned);
    let terminal = parse_terminal(f)?;
    let downlink = LinkFigures {
        bandwidth_hz: f.figure("bandwidth_dl", BW_DL, Bound::Positive)?,
        sinr_db: f.figure("sinr_dl", &[("sinr_dl_db", 1.0)], Bound::Finite)?,
        se_bps_hz: f.figure("se_dl", &[("se_dl_bps_hz", 1.0)], Bound::NonNegative)?,
        bitrate_bps: f.figure("bitrate_dl", RATE_DL, Bound::Positive)?,
    };
    let uplink = LinkFigures {
        bandwidth_hz: f.figure("bandwidth_ul", BW_UL, Bound::Positive)?,
        sinr_db: f.figure("sinr_ul", &[("sinr_ul_db", 1.0)], Bound::Finite)?,
        se_bps_hz: f.figure("se_ul", &[("se_ul_bps_hz", 1.0)], Bound::NonNegative)?,
        bitrate_bps: f.figure("bitrate_ul", RATE_UL, Bound::Positive)?,
    };
    let label = label
        .or_else(|| terminal.as_ref().map(|t| t.name.clone()))
        .unwrap_or_else(|| "default".to_owned());
    Ok(LinkCase {
        label,
        terminal,
        downlink,
        uplink,
    })
}

/// Parses and validates a scenario document.
pub fn load_scenario(source: &str) -> Result<Scenario> {
    let doc: Value = serde_json::from_str(source)?;
    let Value::Object(map) = &doc else {
        return Err(Error::validation("document", "expected a JSON object"));
    };
    let mut f = Fields::new(map, String::new());

    let name = f
        .string("name", "name")?
        .ok_or_else(|| f.err("name", "required"))?
        .to_owned();
    let orbit_text = f.string("orbit", "orbit")?.ok_or_else(|| f.err("orbit", "required"))?;
    let orbit = OrbitClass::parse(orbit_text)
        .ok_or_else(|| f.err("orbit", format!("unknown orbit class {orbit_text:?}")))?;

    let altitude_km = f.number("altitude", &[("altitude_km", 1.0)], Bound::Positive)?;
    let elevation_deg = f.number("elevation", &[("elevation_deg", 1.0)], Bound::Within(0.0, 90.0))?;
    let bands = f.strings("band", "band")?;
    let freq_dl_hz = f.number("freq_dl", &[("freq_dl_hz", 1.0), ("freq_dl_mhz", 1e6), ("freq_dl_ghz", 1e9)], Bound::Positive)?;
    let freq_ul_hz = f.number("freq_ul", &[("freq_ul_hz", 1.0), ("freq_ul_mhz", 1e6), ("freq_ul_ghz", 1e9)], Bound::Positive)?;
    let reuse = f.count("reuse", "reuse")?;
    let beams = f.count("beams", "beams")?;
    let coverage_radius_km = f.number("coverage_radius", &[("coverage_radius_km", 1.0)], Bound::Positive)?;
    let margin_db = f.number("margin", &[("margin_db", 1.0)], Bound::NonNegative)?;
    let eirp_density_dbw_per_mhz =
        f.number("eirp_density", &[("eirp_density_dbw_per_mhz", 1.0)], Bound::Finite)?;
    let sat_g_over_t_dbk = f.number("sat_g_over_t", &[("sat_g_over_t_dbk", 1.0)], Bound::Finite)?;
    let terminal_g_over_t_dbk =
        f.figure("terminal_g_over_t", &[("terminal_g_over_t_dbk", 1.0)], Bound::Finite)?;
    let annotations = f.strings("annotations", "annotations")?;

    let cases = match f.take("cases", &[("cases", 1.0)])? {
        Some((Value::Array(items), _)) => {
            if f.has_any(CASE_KEYS) {
                return Err(f.err("cases", "per-link keys must go inside the cases array"));
            }
            if items.is_empty() {
                return Err(f.err("cases", "must not be empty"));
            }
            items
                .iter()
                .enumerate()
                .map(|(i, item)| {
                    let obj = item
                        .as_object()
                        .ok_or_else(|| Error::validation(format!("cases[{i}]"), "expected an object"))?;
                    let mut cf = Fields::new(obj, format!("cases[{i}]."));
                    let case = parse_case(&mut cf)?;
                    cf.finish()?;
                    Ok(case)
                })
                .collect::<Result<Vec<_>>>()?
        }
        Some(_) => return Err(f.err("cases", "expected an array")),
        None => vec![parse_case(&mut f)?],
    };
    f.finish()?;

    Ok(Scenario {
        name,
        orbit,
        altitude_km,
        elevation_deg,
        bands,
        freq_dl_hz,
        freq_ul_hz,
        reuse,
        beams,
        coverage_radius_km,
        margin_db,
        eirp_density_dbw_per_mhz,
        sat_g_over_t_dbk,
        terminal_g_over_t_dbk,
        cases,
        annotations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field_of(r: Result<Scenario>) -> String {
        match r {
            Err(Error::Validation { field, .. }) => field,
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_document() {
        let s = load_scenario(r#"{"name": "x", "orbit": "LEO"}"#).unwrap();
        assert_eq!(s.orbit, OrbitClass::Leo);
        assert_eq!(s.cases.len(), 1);
        assert_eq!(s.cases[0].downlink, LinkFigures::default());
        assert!(s.altitude_km.is_none());
    }

    #[test]
    fn units_are_applied() {
        let s = load_scenario(
            r#"{"name": "x", "orbit": "GEO", "freq_dl_ghz": 1.5, "freq_ul_mhz": 1600,
                "bw_dl_khz": 200, "bw_ul_mhz": [36, 54], "bitrate_dl_kbps": 112}"#,
        )
        .unwrap();
        assert_eq!(s.freq_dl_hz, Some(1.5e9));
        assert_eq!(s.freq_ul_hz, Some(1.6e9));
        let c = &s.cases[0];
        assert_eq!(c.downlink.bandwidth_hz, Some(Figure::single(200e3)));
        assert_eq!(c.uplink.bandwidth_hz, Some(Figure::range(36e6, 54e6)));
        assert_eq!(c.downlink.bitrate_bps, Some(Figure::single(112e3)));
    }

    #[test]
    fn missing_required_fields() {
        assert_eq!(field_of(load_scenario(r#"{"name": "x"}"#)), "orbit");
        assert_eq!(field_of(load_scenario(r#"{"orbit": "LEO"}"#)), "name");
        assert_eq!(field_of(load_scenario(r#"{"name": "x", "orbit": "HEO"}"#)), "orbit");
    }

    #[test]
    fn sign_and_type_checks() {
        let base = |extra: &str| load_scenario(&format!(r#"{{"name": "x", "orbit": "LEO", {extra}}}"#));
        assert_eq!(field_of(base(r#""bw_dl_mhz": -10"#)), "bandwidth_dl");
        assert_eq!(field_of(base(r#""altitude_km": 0"#)), "altitude");
        assert_eq!(field_of(base(r#""elevation_deg": 91"#)), "elevation");
        assert_eq!(field_of(base(r#""se_ul_bps_hz": "fast""#)), "se_ul");
        assert_eq!(field_of(base(r#""beams": 0"#)), "beams");
        assert_eq!(field_of(base(r#""bw_dl_mhz": 1, "bw_dl_khz": 1000"#)), "bandwidth_dl");
        assert_eq!(field_of(base(r#""altitude": 600"#)), "altitude");
        assert_eq!(field_of(base(r#""sinr_dl_db": [1, 2, 3]"#)), "sinr_dl");
    }

    #[test]
    fn null_is_absent() {
        let s = load_scenario(r#"{"name": "x", "orbit": "LEO", "altitude_km": null}"#).unwrap();
        assert!(s.altitude_km.is_none());
    }

    #[test]
    fn parse_errors_carry_location() {
        match load_scenario("{\n  \"name\": \"x\",\n  \"orbit\": LEO\n}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert_eq!(field_of(load_scenario("[1, 2]")), "document");
    }

    #[test]
    fn terminals() {
        let s = load_scenario(r#"{"name": "x", "orbit": "LEO", "terminal": "vsat"}"#).unwrap();
        assert_eq!(s.cases[0].terminal, Some(TerminalProfile::vsat()));
        assert_eq!(s.cases[0].label, "VSAT");
        let s = load_scenario(
            r#"{"name": "x", "orbit": "HAPS",
                "terminal": {"name": "UE", "gain_dbi": 0, "nf_db": 9, "eirp_dbm": 23}}"#,
        )
        .unwrap();
        let t = s.cases[0].terminal.as_ref().unwrap();
        assert_eq!(t.noise, NoiseSpec::FigureDb(9.0));
        assert_eq!(t.eirp_dbw, Some(-7.0));
        let both = r#"{"name": "x", "orbit": "LEO",
            "terminal": {"name": "t", "gain_dbi": 0, "nf_db": 9, "noise_temp_k": 300}}"#;
        assert_eq!(field_of(load_scenario(both)), "terminal.noise");
        assert_eq!(
            field_of(load_scenario(r#"{"name": "x", "orbit": "LEO", "terminal": "phone"}"#)),
            "terminal"
        );
    }

    #[test]
    fn cases_array() {
        let s = load_scenario(
            r#"{"name": "x", "orbit": "GEO", "cases": [
                {"label": "VSAT", "terminal": "vsat", "sinr_dl_db": 15.4, "se_dl_bps_hz": 4},
                {"terminal": "class3-ue", "sinr_dl_db": 3, "se_dl_bps_hz": 1.2}]}"#,
        )
        .unwrap();
        assert_eq!(s.cases.len(), 2);
        assert_eq!(s.cases[1].label, "3GPP Class 3 UE");
        let mixed = r#"{"name": "x", "orbit": "GEO", "se_dl_bps_hz": 1, "cases": [{}]}"#;
        assert_eq!(field_of(load_scenario(mixed)), "cases");
        let bad = r#"{"name": "x", "orbit": "GEO", "cases": [{"se_dl_bps_hz": -1}]}"#;
        assert_eq!(field_of(load_scenario(bad)), "cases[0].se_dl");
        let unknown = r#"{"name": "x", "orbit": "GEO", "cases": [{"speed": 1}]}"#;
        assert_eq!(field_of(load_scenario(unknown)), "cases[0].speed");
    }
}
