//! Consistency pipeline over a [`Scenario`].

use serde::{Deserialize, Serialize};

use super::{Figure, LinkCase, LinkFigures, OrbitClass, Scenario};
use crate::capacity::max_spectral_efficiency;
use crate::error::{Error, Result};
use crate::geometry::{cell_radius_from_split, slant_range_exact};
use crate::linkbudget::{fspl, snr_db, LossLedger, Receiver, SnrInputs};
use crate::quantities::{
    band_lookup, db_from_linear, format_significant, linear_from_db, AntennaGain, LinkDirection, OrbitFilter,
    PhysicalConstants,
};

/// Relative bitrate tolerance; reported figures carry about two significant digits.
const BITRATE_TOLERANCE: f64 = 0.05;
const SE_SLACK: f64 = 1e-9;

/// A derived number, or the list of inputs that prevented it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Quantity {
    Computed { value: Figure },
    NotComputable { missing: Vec<String> },
}

impl Quantity {
    pub fn value(&self) -> Option<Figure> {
        match self {
            Quantity::Computed { value } => Some(*value),
            Quantity::NotComputable { .. } => None,
        }
    }

    pub fn missing(&self) -> &[String] {
        match self {
            Quantity::Computed { .. } => &[],
            Quantity::NotComputable { missing } => missing,
        }
    }

    fn from_result(r: Result<Figure>, inputs: &[&str]) -> Self {
        match r {
            Ok(value) if value.endpoints().iter().all(|x| x.is_finite()) => Quantity::Computed { value },
            _ => Quantity::NotComputable {
                missing: inputs.iter().map(|i| format!("{i} (invalid)")).collect(),
            },
        }
    }
}

/// Outcome of comparing a reported figure against a derived one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Check {
    Consistent { delta: Option<f64> },
    Inconsistent { delta: Option<f64>, note: String },
    NotComputable { missing: Vec<String> },
}

impl Check {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Check::Consistent { .. })
    }

    pub fn is_inconsistent(&self) -> bool {
        matches!(self, Check::Inconsistent { .. })
    }

    pub fn is_computable(&self) -> bool {
        !matches!(self, Check::NotComputable { .. })
    }

    pub fn delta(&self) -> Option<f64> {
        match self {
            Check::Consistent { delta } | Check::Inconsistent { delta, .. } => *delta,
            Check::NotComputable { .. } => None,
        }
    }

    pub fn missing(&self) -> &[String] {
        match self {
            Check::NotComputable { missing } => missing,
            _ => &[],
        }
    }
}

/// Findings for one direction of one terminal case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionReport {
    /// Reported SE times bandwidth.
    pub bitrate_bps: Quantity,
    /// `log2(1 + SINR)` at the reported SINR.
    pub shannon_se_bps_hz: Quantity,
    /// SNR from the dB ledger over the exact slant range.
    pub link_budget_snr_db: Quantity,
    /// Derived against reported bitrate; delta is the relative error.
    pub bitrate_check: Check,
    /// Reported SE against the Shannon bound; delta is the headroom in bps/Hz.
    pub shannon_check: Check,
    /// Reported SINR against the link-budget SNR; delta is the headroom in dB.
    pub sinr_check: Check,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub label: String,
    pub downlink: DirectionReport,
    pub uplink: DirectionReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: Scenario,
    pub slant_range_km: Quantity,
    pub cell_radius_km: Quantity,
    /// Downlink centre frequency against the allocation table.
    pub band_dl: Check,
    pub band_ul: Check,
    pub cases: Vec<CaseReport>,
}

/// One flattened finding, for tables and CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub case: String,
    pub direction: String,
    pub item: String,
    pub status: String,
    pub value: String,
    pub detail: String,
}

fn missing_of(names: &[(&str, bool)]) -> Vec<String> {
    names.iter().filter(|(_, present)| !present).map(|(n, _)| n.to_string()).collect()
}

fn not_computable(missing: Vec<String>) -> Quantity {
    Quantity::NotComputable { missing }
}

fn shannon_se(sinr_db: f64) -> Result<f64> {
    max_spectral_efficiency(linear_from_db(sinr_db)?)
}

struct Ctx<'a> {
    s: &'a Scenario,
    c: &'a PhysicalConstants,
    slant: &'a Quantity,
}

impl Ctx<'_> {
    fn geometry_missing(&self, freq: Option<f64>, freq_name: &str) -> Vec<String> {
        let mut m = self.slant.missing().to_vec();
        if freq.is_none() {
            m.push(freq_name.to_owned());
        }
        m
    }

    fn fspl_db(&self, freq_hz: f64) -> Result<f64> {
        let d_km = self.slant.value().map(|f| f.low()).ok_or_else(|| Error::domain("no slant range"))?;
        fspl(d_km * 1e3, freq_hz, self.c)
    }

    fn losses(&self) -> LossLedger {
        // An unreported margin enters the ledger as 0 dB.
        LossLedger {
            margin_db: self.s.margin_db.unwrap_or(0.0),
            ..LossLedger::default()
        }
    }

    fn terminal_g_over_t(&self, case: &LinkCase) -> Option<Result<Figure>> {
        if let Some(gt) = self.s.terminal_g_over_t_dbk {
            return Some(Ok(gt));
        }
        let t = case.terminal.as_ref()?;
        Some((|| {
            let rx = Receiver::with_noise(AntennaGain::from_dbi(t.gain_dbi)?, t.noise, self.c.reference_temperature_k)?;
            Ok(Figure::single(rx.g_over_t_dbk()?))
        })())
    }

    /// Downlink SNR with the satellite EIRP density referred to 1 MHz, so the
    /// result does not depend on the occupied bandwidth.
    fn downlink_snr(&self, case: &LinkCase) -> Quantity {
        let mut missing = self.geometry_missing(self.s.freq_dl_hz, "freq_dl");
        if self.s.eirp_density_dbw_per_mhz.is_none() {
            missing.push("eirp_density".into());
        }
        let gt = self.terminal_g_over_t(case);
        if gt.is_none() {
            missing.push("terminal".into());
            missing.push("terminal_g_over_t".into());
        }
        if !missing.is_empty() {
            return not_computable(missing);
        }
        let (freq, density) = (self.s.freq_dl_hz.unwrap(), self.s.eirp_density_dbw_per_mhz.unwrap());
        let r = (|| {
            let fspl_db = self.fspl_db(freq)?;
            let ref_bw_db = db_from_linear(1e6)?;
            gt.unwrap()?.try_map(|g| {
                let inputs = SnrInputs {
                    eirp_dbw: density,
                    g_over_t_dbk: g,
                    fspl_db,
                    losses: self.losses(),
                    bw_dbhz: ref_bw_db,
                };
                Ok(snr_db(&inputs, self.c)?.breakdown.snr_db)
            })
        })();
        Quantity::from_result(r, &["freq_dl", "eirp_density", "terminal"])
    }

    fn uplink_snr(&self, case: &LinkCase) -> Quantity {
        let mut missing = self.geometry_missing(self.s.freq_ul_hz, "freq_ul");
        if self.s.sat_g_over_t_dbk.is_none() {
            missing.push("sat_g_over_t".into());
        }
        let eirp = match &case.terminal {
            None => {
                missing.push("terminal".into());
                None
            }
            Some(t) if t.eirp_dbw.is_none() => {
                missing.push("terminal.eirp".into());
                None
            }
            Some(t) => t.eirp_dbw,
        };
        if case.uplink.bandwidth_hz.is_none() {
            missing.push("bandwidth_ul".into());
        }
        if !missing.is_empty() {
            return not_computable(missing);
        }
        let (freq, gt) = (self.s.freq_ul_hz.unwrap(), self.s.sat_g_over_t_dbk.unwrap());
        let r = (|| {
            let fspl_db = self.fspl_db(freq)?;
            case.uplink.bandwidth_hz.unwrap().try_map(|bw| {
                let inputs = SnrInputs {
                    eirp_dbw: eirp.unwrap(),
                    g_over_t_dbk: gt,
                    fspl_db,
                    losses: self.losses(),
                    bw_dbhz: db_from_linear(bw)?,
                };
                Ok(snr_db(&inputs, self.c)?.breakdown.snr_db)
            })
        })();
        Quantity::from_result(r, &["freq_ul", "sat_g_over_t", "bandwidth_ul"])
    }
}

fn direction_report(dir: &str, f: &LinkFigures, link_budget_snr_db: Quantity) -> DirectionReport {
    let se_name = format!("se_{dir}");
    let bw_name = format!("bandwidth_{dir}");
    let sinr_name = format!("sinr_{dir}");
    let rate_name = format!("bitrate_{dir}");

    let bitrate_bps = match (f.se_bps_hz, f.bandwidth_hz) {
        (Some(se), Some(bw)) => Quantity::Computed { value: se.zip(bw, |a, b| a * b) },
        _ => not_computable(missing_of(&[
            (&se_name, f.se_bps_hz.is_some()),
            (&bw_name, f.bandwidth_hz.is_some()),
        ])),
    };
    let shannon_se_bps_hz = match f.sinr_db {
        Some(sinr) => Quantity::from_result(sinr.try_map(shannon_se), &[&sinr_name]),
        None => not_computable(vec![sinr_name.clone()]),
    };

    let bitrate_check = match (bitrate_bps.value(), f.bitrate_bps) {
        (Some(derived), Some(reported)) => {
            let rel = |(d, r): (f64, f64)| (d - r) / r;
            let worst_pair = [(derived.low(), reported.low()), (derived.high(), reported.high())]
                .into_iter()
                .max_by(|a, b| rel(*a).abs().total_cmp(&rel(*b).abs()))
                .expect("two pairs");
            let worst = rel(worst_pair);
            if worst.abs() > BITRATE_TOLERANCE {
                Check::Inconsistent {
                    delta: Some(worst),
                    note: format!(
                        "SE x BW gives {} b/s but {} b/s is reported",
                        format_significant(worst_pair.0, 4),
                        format_significant(worst_pair.1, 4)
                    ),
                }
            } else {
                Check::Consistent { delta: Some(worst) }
            }
        }
        (_, reported) => {
            let mut m = bitrate_bps.missing().to_vec();
            if reported.is_none() {
                m.push(rate_name);
            }
            Check::NotComputable { missing: m }
        }
    };

    let shannon_check = match (f.se_bps_hz, shannon_se_bps_hz.value()) {
        (Some(se), Some(bound)) => {
            let headroom = bound.zip(se, |b, s| b - s);
            let delta = headroom.low().min(headroom.high());
            let low_ok = se.low() <= bound.low() + SE_SLACK;
            let high_ok = se.high() <= bound.high() + SE_SLACK;
            if low_ok && high_ok {
                Check::Consistent { delta: Some(delta) }
            } else {
                Check::Inconsistent {
                    delta: Some(delta),
                    note: format!("reported SE {se} bps/Hz exceeds the Shannon bound {}", bound.map(|x| round_to(x, 4))),
                }
            }
        }
        (se, _) => {
            let mut m = shannon_se_bps_hz.missing().to_vec();
            if se.is_none() {
                m.insert(0, se_name);
            }
            Check::NotComputable { missing: m }
        }
    };

    let sinr_check = match (f.sinr_db, link_budget_snr_db.value()) {
        (Some(sinr), Some(snr)) => {
            let headroom = snr.zip(sinr, |a, b| a - b);
            let delta = headroom.low().min(headroom.high());
            if delta >= -1e-9 {
                Check::Consistent { delta: Some(delta) }
            } else {
                Check::Inconsistent {
                    delta: Some(delta),
                    note: format!("reported SINR {sinr} dB exceeds the link-budget SNR {}", snr.map(|x| round_to(x, 2))),
                }
            }
        }
        (sinr, _) => {
            let mut m = link_budget_snr_db.missing().to_vec();
            if sinr.is_none() {
                m.insert(0, sinr_name);
            }
            Check::NotComputable { missing: m }
        }
    };

    DirectionReport {
        bitrate_bps,
        shannon_se_bps_hz,
        link_budget_snr_db,
        bitrate_check,
        shannon_check,
        sinr_check,
    }
}

fn round_to(x: f64, decimals: i32) -> f64 {
    let k = 10f64.powi(decimals);
    (x * k).round() / k
}

fn band_check(s: &Scenario, freq: Option<f64>, direction: LinkDirection, name: &str) -> Check {
    let Some(freq) = freq else {
        return Check::NotComputable { missing: vec![name.to_owned()] };
    };
    let filter = match s.orbit {
        OrbitClass::Geo => OrbitFilter::Geo,
        OrbitClass::Leo | OrbitClass::Meo => OrbitFilter::NonGeo,
        OrbitClass::Haps | OrbitClass::Laps => OrbitFilter::Any,
    };
    match band_lookup(freq, direction, filter) {
        Ok(a) if s.bands.is_empty() || s.bands.iter().any(|b| b.eq_ignore_ascii_case(a.band)) => {
            Check::Consistent { delta: None }
        }
        Ok(a) => Check::Inconsistent {
            delta: None,
            note: format!("{} MHz falls in {a}, not in the declared {}", freq / 1e6, s.bands.join("/")),
        },
        Err(e) => Check::Inconsistent {
            delta: None,
            note: e.to_string(),
        },
    }
}

/// Derives every quantity the present inputs allow and checks the reported
/// figures against them. Never fails; gaps become not-computable findings.
pub fn run_scenario(s: &Scenario, constants: &PhysicalConstants) -> ScenarioReport {
    let slant_range_km = match (s.altitude_km, s.elevation_deg) {
        (Some(h), Some(e)) => Quantity::from_result(
            slant_range_exact(h, e.to_radians(), constants).map(Figure::single),
            &["altitude", "elevation"],
        ),
        (h, e) => not_computable(missing_of(&[("altitude", h.is_some()), ("elevation", e.is_some())])),
    };
    let cell_radius_km = match (s.coverage_radius_km, s.beams) {
        (Some(r), Some(n)) => Quantity::from_result(
            cell_radius_from_split(r, n).map(Figure::single),
            &["coverage_radius", "beams"],
        ),
        (r, n) => not_computable(missing_of(&[("coverage_radius", r.is_some()), ("beams", n.is_some())])),
    };
    let ctx = Ctx {
        s,
        c: constants,
        slant: &slant_range_km,
    };
    let cases = s
        .cases
        .iter()
        .map(|case| CaseReport {
            label: case.label.clone(),
            downlink: direction_report("dl", &case.downlink, ctx.downlink_snr(case)),
            uplink: direction_report("ul", &case.uplink, ctx.uplink_snr(case)),
        })
        .collect();
    ScenarioReport {
        band_dl: band_check(s, s.freq_dl_hz, LinkDirection::Downlink, "freq_dl"),
        band_ul: band_check(s, s.freq_ul_hz, LinkDirection::Uplink, "freq_ul"),
        scenario: s.clone(),
        slant_range_km,
        cell_radius_km,
        cases,
    }
}

fn figure_text(f: Figure, digits: usize) -> String {
    if f.is_single() {
        format_significant(f.low(), digits)
    } else {
        format!("{}..{}", format_significant(f.low(), digits), format_significant(f.high(), digits))
    }
}

fn quantity_row(case: &str, dir: &str, item: &str, q: &Quantity, digits: usize) -> ReportRow {
    let (status, value, detail) = match q {
        Quantity::Computed { value } => ("computed", figure_text(*value, digits), String::new()),
        Quantity::NotComputable { missing } => ("not_computable", String::new(), format!("missing: {}", missing.join(", "))),
    };
    ReportRow {
        case: case.into(),
        direction: dir.into(),
        item: item.into(),
        status: status.into(),
        value,
        detail,
    }
}

fn check_row(case: &str, dir: &str, item: &str, c: &Check, digits: usize) -> ReportRow {
    let delta = |d: &Option<f64>| d.map(|x| format_significant(x, digits)).unwrap_or_default();
    let (status, value, detail) = match c {
        Check::Consistent { delta: d } => ("consistent", delta(d), String::new()),
        Check::Inconsistent { delta: d, note } => ("inconsistent", delta(d), note.clone()),
        Check::NotComputable { missing } => ("not_computable", String::new(), format!("missing: {}", missing.join(", "))),
    };
    ReportRow {
        case: case.into(),
        direction: dir.into(),
        item: item.into(),
        status: status.into(),
        value,
        detail,
    }
}

impl ScenarioReport {
    /// Every finding as a row, values at `digits` significant digits.
    pub fn rows(&self, digits: usize) -> Vec<ReportRow> {
        let mut rows = vec![
            quantity_row("-", "-", "slant_range_km", &self.slant_range_km, digits),
            quantity_row("-", "-", "cell_radius_km", &self.cell_radius_km, digits),
            check_row("-", "dl", "band_check", &self.band_dl, digits),
            check_row("-", "ul", "band_check", &self.band_ul, digits),
        ];
        for c in &self.cases {
            for (dir, d) in [("dl", &c.downlink), ("ul", &c.uplink)] {
                rows.push(quantity_row(&c.label, dir, "bitrate_bps", &d.bitrate_bps, digits));
                rows.push(quantity_row(&c.label, dir, "shannon_se_bps_hz", &d.shannon_se_bps_hz, digits));
                rows.push(quantity_row(&c.label, dir, "link_budget_snr_db", &d.link_budget_snr_db, digits));
                rows.push(check_row(&c.label, dir, "bitrate_check", &d.bitrate_check, digits));
                rows.push(check_row(&c.label, dir, "shannon_check", &d.shannon_check, digits));
                rows.push(check_row(&c.label, dir, "sinr_check", &d.sinr_check, digits));
            }
        }
        rows
    }

    pub fn to_text_table(&self, digits: usize) -> String {
        let rows = self.rows(digits);
        let header = ["case", "dir", "item", "status", "value", "detail"];
        let cells: Vec<[&str; 6]> = rows
            .iter()
            .map(|r| [&*r.case, &*r.direction, &*r.item, &*r.status, &*r.value, &*r.detail])
            .collect();
        let mut width = header.map(str::len);
        for row in &cells {
            for (w, cell) in width.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = format!("{} ({})\n", self.scenario.name, self.scenario.orbit);
        for a in &self.scenario.annotations {
            out.push_str(&format!("  note: {a}\n"));
        }
        for row in std::iter::once(header).chain(cells) {
            let line: Vec<String> = row[..5]
                .iter()
                .zip(&width)
                .map(|(cell, w)| format!("{cell:<w$}"))
                .collect();
            out.push_str(format!("{}  {}", line.join("  "), row[5]).trim_end());
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self, digits: usize) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in self.rows(digits) {
            w.serialize(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{builtin_fixtures, fixture, load_scenario};

    const C: PhysicalConstants = PhysicalConstants::DEFAULT;

    fn run(id: &str) -> ScenarioReport {
        run_scenario(&fixture(id).unwrap(), &C)
    }

    #[test]
    fn thales_bitrates_exact() {
        let r = run("thales");
        let dl = &r.cases[0].downlink;
        let ul = &r.cases[0].uplink;
        assert!((dl.bitrate_bps.value().unwrap().low() - 13.5e6).abs() < 1e-6);
        assert!((ul.bitrate_bps.value().unwrap().low() - 360e3).abs() < 1e-9);
        assert!(dl.bitrate_check.is_consistent() && ul.bitrate_check.is_consistent());
        assert!(dl.bitrate_check.delta().unwrap().abs() < 1e-12);
    }

    #[test]
    fn thales_shannon_and_geometry() {
        let r = run("thales");
        let bound = r.cases[0].downlink.shannon_se_bps_hz.value().unwrap().low();
        assert!((bound - 2.1853).abs() < 1e-4, "{bound}");
        assert!(r.cases[0].downlink.shannon_check.is_consistent());
        let d = r.slant_range_km.value().unwrap().low();
        assert!((d - 1075.088).abs() < 1e-3);
        assert!(r.cell_radius_km.missing().contains(&"coverage_radius".to_owned()));
    }

    #[test]
    fn thales_link_budget_supports_reported_sinr() {
        let r = run("thales");
        let dl = &r.cases[0].downlink;
        let snr = dl.link_budget_snr_db.value().unwrap().low();
        // 34 − 60 − 30.658 − 159.09 + 228.6
        assert!((snr - 12.86).abs() < 0.02, "{snr}");
        assert!(dl.sinr_check.is_consistent());
        let ul = r.cases[0].uplink.link_budget_snr_db.value().unwrap().low();
        assert!((ul - 8.05).abs() < 0.02, "{ul}");
    }

    #[test]
    fn thales_band_checks() {
        let r = run("thales");
        // 2 GHz sits between the S-band downlink allocations.
        assert!(r.band_dl.is_inconsistent());
        assert!(r.band_ul.is_consistent());
    }

    #[test]
    fn inmarsat_bitrate_flagged() {
        let r = run("inmarsat-geo-iot");
        match &r.cases[0].downlink.bitrate_check {
            Check::Inconsistent { delta, note } => {
                assert!((delta.unwrap() - (134e3 - 112e3) / 112e3).abs() < 1e-9);
                assert!(note.contains("134000") && note.contains("112000"), "{note}");
            }
            other => panic!("{other:?}"),
        }
        assert!(r.cases[0].uplink.bitrate_check.is_inconsistent());
        assert_eq!(r.cases[0].downlink.shannon_check.missing(), ["sinr_dl"]);
    }

    #[test]
    fn synthetic_shannon_violation() {
        let s = load_scenario(r#"{"name": "t", "orbit": "LEO", "sinr_dl_db": 0, "se_dl_bps_hz": 10}"#).unwrap();
        let r = run_scenario(&s, &C);
        let d = &r.cases[0].downlink;
        assert!((d.shannon_se_bps_hz.value().unwrap().low() - 1.0).abs() < 1e-12);
        assert!(d.shannon_check.is_inconsistent());
        assert!((d.shannon_check.delta().unwrap() + 9.0).abs() < 1e-12);
    }

    #[test]
    fn haps_cell_radius_and_ranges() {
        let r = run("intelsat-haps");
        assert_eq!(r.cell_radius_km.value(), Some(Figure::single(12.5)));
        let ul = &r.cases[0].uplink;
        assert!(ul.bitrate_check.is_consistent());
        assert!(ul.shannon_check.is_consistent());
        assert!(r.cases[0].downlink.bitrate_check.is_consistent());
        assert_eq!(r.slant_range_km.missing(), ["elevation"]);
    }

    #[test]
    fn echostar_cases() {
        let r = run("echostar-geo");
        assert_eq!(r.cases.len(), 2);
        for c in &r.cases {
            assert!(c.downlink.shannon_check.is_consistent() && c.uplink.shannon_check.is_consistent());
            assert!(!c.downlink.bitrate_check.is_computable());
        }
    }

    #[test]
    fn every_fixture_is_shannon_feasible() {
        for s in builtin_fixtures() {
            let r = run_scenario(&s, &C);
            for c in &r.cases {
                for d in [&c.downlink, &c.uplink] {
                    assert!(!d.shannon_check.is_inconsistent(), "{} {}", s.name, c.label);
                }
            }
        }
    }

    #[test]
    fn reports_round_trip() {
        for s in builtin_fixtures() {
            let r = run_scenario(&s, &C);
            let json = serde_json::to_string(&r).unwrap();
            let back: ScenarioReport = serde_json::from_str(&json).unwrap();
            assert_eq!(back, r);
        }
    }

    #[test]
    fn renderings() {
        let r = run("thales");
        let table = r.to_text_table(6);
        assert!(table.contains("bitrate_bps") && table.contains("13500000"));
        let csv = r.to_csv(6);
        assert!(csv.starts_with("case,direction,item,status,value,detail\n"));
        assert_eq!(csv.lines().count(), r.rows(6).len() + 1);
    }
}
