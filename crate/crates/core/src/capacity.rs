//! From SNR to bits per second.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantities::linear_from_db;

fn non_negative(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be >= 0, got {x}")))
    }
}

/// Shannon–Hartley limit `B·log2(1 + snr)` in bit/s.
pub fn shannon_capacity(bandwidth_hz: f64, snr_linear: f64) -> Result<f64> {
    if !(bandwidth_hz.is_finite() && bandwidth_hz > 0.0) {
        return Err(Error::domain(format!("bandwidth must be > 0 Hz, got {bandwidth_hz}")));
    }
    Ok(bandwidth_hz * max_spectral_efficiency(snr_linear)?)
}

/// `log2(1 + snr)` in bit/s/Hz.
pub fn max_spectral_efficiency(snr_linear: f64) -> Result<f64> {
    if !(snr_linear >= 0.0) {
        return Err(Error::domain(format!("snr must be >= 0, got {snr_linear}")));
    }
    Ok(snr_linear.ln_1p() / std::f64::consts::LN_2)
}

/// Minimum linear SNR supporting `se_bps_hz`, `2^se − 1`.
pub fn required_snr(se_bps_hz: f64) -> Result<f64> {
    non_negative("spectral efficiency", se_bps_hz)?;
    Ok((se_bps_hz * std::f64::consts::LN_2).exp_m1())
}

/// `se × bandwidth`.
pub fn effective_bitrate(se_bps_hz: f64, bandwidth_hz: f64) -> Result<f64> {
    non_negative("spectral efficiency", se_bps_hz)?;
    non_negative("bandwidth", bandwidth_hz)?;
    Ok(se_bps_hz * bandwidth_hz)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModCod {
    pub name: String,
    #[serde(rename = "se_bps_hz")]
    pub se_bps_hz: f64,
    /// SNR needed for quasi-error-free operation (BER 2e-4 after decoding).
    #[serde(rename = "snr_qef_db")]
    pub snr_qef_db: f64,
}

impl ModCod {
    pub fn new(name: impl Into<String>, se_bps_hz: f64, snr_qef_db: f64) -> Self {
        ModCod {
            name: name.into(),
            se_bps_hz,
            snr_qef_db,
        }
    }

    /// Shannon bound at this entry's required SNR.
    pub fn shannon_bound(&self) -> Result<f64> {
        max_spectral_efficiency(linear_from_db(self.snr_qef_db)?)
    }
}

/// A validated MODCOD table, sorted by spectral efficiency.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ModCodCatalog {
    entries: Vec<ModCod>,
}

/// Outcome of [`select_modcod`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModCodSelection {
    pub modcod: ModCod,
    pub margin_db: f64,
}

impl ModCodCatalog {
    /// Rejects empty tables, entries that beat the Shannon limit and tables
    /// whose required SNR decreases as efficiency increases.
    pub fn new(mut entries: Vec<ModCod>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::validation("catalog", "must contain at least one MODCOD"));
        }
        for m in &entries {
            if !(m.se_bps_hz.is_finite() && m.se_bps_hz > 0.0) {
                return Err(Error::validation(
                    "se_bps_hz",
                    format!("{}: spectral efficiency must be > 0", m.name),
                ));
            }
            let bound = m.shannon_bound().map_err(|_| {
                Error::validation("snr_qef_db", format!("{}: required SNR must be finite", m.name))
            })?;
            if m.se_bps_hz >= bound {
                return Err(Error::validation(
                    "se_bps_hz",
                    format!(
                        "{}: {} bps/Hz exceeds the Shannon limit {bound:.4} at {} dB",
                        m.name, m.se_bps_hz, m.snr_qef_db
                    ),
                ));
            }
        }
        entries.sort_by(|a, b| {
            a.se_bps_hz
                .total_cmp(&b.se_bps_hz)
                .then(a.snr_qef_db.total_cmp(&b.snr_qef_db))
        });
        for pair in entries.windows(2) {
            if pair[0].se_bps_hz < pair[1].se_bps_hz && pair[1].snr_qef_db < pair[0].snr_qef_db {
                return Err(Error::validation(
                    "snr_qef_db",
                    format!(
                        "{} is more efficient than {} yet needs less SNR",
                        pair[1].name, pair[0].name
                    ),
                ));
            }
        }
        Ok(ModCodCatalog { entries })
    }

    /// The nine-entry theoretical DVB modem table.
    pub fn dvb_default() -> Self {
        let rows = [
            ("APSK 1/2", 0.4, -2.0),
            ("CPSK 1/4", 0.5, 0.0),
            ("CPSK 1/2", 0.6, 1.0),
            ("CPSK 3/4", 0.65, 2.0),
            ("DPSK 1/4", 0.75, 3.0),
            ("DPSK 1/2", 0.9, 4.0),
            ("DPSK 3/4", 1.05, 6.0),
            ("DPSK 5/6", 1.25, 7.0),
            ("DPSK 7/8", 1.5, 9.0),
        ];
        Self::new(rows.iter().map(|&(n, se, snr)| ModCod::new(n, se, snr)).collect())
            .expect("built-in table is valid")
    }

    pub fn entries(&self) -> &[ModCod] {
        &self.entries
    }

    /// Entry with the lowest required SNR.
    pub fn floor(&self) -> &ModCod {
        self.entries
            .iter()
            .min_by(|a, b| a.snr_qef_db.total_cmp(&b.snr_qef_db))
            .expect("catalog is non-empty")
    }

    /// Reads `name,se_bps_hz,snr_qef_db` rows with a header line.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let entries = rdr.deserialize().collect::<std::result::Result<Vec<ModCod>, _>>()?;
        Self::new(entries)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for m in &self.entries {
            w.serialize(m).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    pub fn select(&self, snr_db: f64) -> Result<ModCodSelection> {
        select_modcod(snr_db, self)
    }
}

/// Highest-efficiency entry whose required SNR does not exceed `snr_db`.
///
/// Entries tied on efficiency resolve to the one needing less SNR.
pub fn select_modcod(snr_db: f64, catalog: &ModCodCatalog) -> Result<ModCodSelection> {
    let best = catalog
        .entries
        .iter()
        .filter(|m| m.snr_qef_db <= snr_db)
        .max_by(|a, b| {
            a.se_bps_hz
                .total_cmp(&b.se_bps_hz)
                .then(b.snr_qef_db.total_cmp(&a.snr_qef_db))
        });
    match best {
        Some(m) => Ok(ModCodSelection {
            modcod: m.clone(),
            margin_db: snr_db - m.snr_qef_db,
        }),
        None => {
            let floor = catalog.floor();
            Err(Error::NoFeasibleModcod {
                snr_db,
                floor_db: floor.snr_qef_db,
                floor_name: floor.name.clone(),
            })
        }
    }
}

/// Multi-beam frequency-reuse configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiBeamConfig {
    pub polarizations: u32,
    pub beams: u32,
    pub colors: u32,
    pub guard_fraction: f64,
    pub bandwidth_hz: f64,
    pub se_bps_hz: f64,
}

impl MultiBeamConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.polarizations) {
            return Err(Error::validation("polarizations", "must be 1 or 2"));
        }
        if self.beams == 0 {
            return Err(Error::validation("beams", "must be >= 1"));
        }
        if self.colors == 0 {
            return Err(Error::validation("colors", "must be >= 1"));
        }
        if !(0.0..=1.0).contains(&self.guard_fraction) {
            return Err(Error::validation("guard_fraction", "must lie in [0, 1]"));
        }
        if !(self.bandwidth_hz.is_finite() && self.bandwidth_hz >= 0.0) {
            return Err(Error::validation("bandwidth_hz", "must be >= 0"));
        }
        if !(self.se_bps_hz.is_finite() && self.se_bps_hz >= 0.0) {
            return Err(Error::validation("se_bps_hz", "must be >= 0"));
        }
        Ok(())
    }
}

/// Aggregate satellite throughput `β·B·(Np·Nb/Nc)·(1 − η)` in bit/s.
pub fn multibeam_capacity(cfg: &MultiBeamConfig) -> Result<f64> {
    cfg.validate()?;
    let reuse = f64::from(cfg.polarizations) * f64::from(cfg.beams) / f64::from(cfg.colors);
    Ok(cfg.se_bps_hz * cfg.bandwidth_hz * reuse * (1.0 - cfg.guard_fraction))
}

/// Empirical cost per Gb/s of a high-throughput satellite, `167.3·R^-0.886`.
pub fn satellite_cost_per_gbps(r_tot_gbps: f64) -> Result<f64> {
    if !(r_tot_gbps.is_finite() && r_tot_gbps > 0.0) {
        return Err(Error::domain(format!("throughput must be > 0 Gb/s, got {r_tot_gbps}")));
    }
    Ok(167.3 * r_tot_gbps.powf(-0.886))
}

/// Inputs of the steady-state TCP throughput bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TcpLinkModel {
    pub mss_bytes: f64,
    pub rtt_s: f64,
    pub p_loss: f64,
    pub c: f64,
}

impl TcpLinkModel {
    pub const DEFAULT_C: f64 = 1.0;

    pub fn new(mss_bytes: f64, rtt_s: f64, p_loss: f64, c: f64) -> Result<Self> {
        if !(mss_bytes.is_finite() && mss_bytes > 0.0) {
            return Err(Error::validation("mss", "must be > 0 bytes"));
        }
        if !(rtt_s.is_finite() && rtt_s > 0.0) {
            return Err(Error::validation("rtt", "must be > 0 s"));
        }
        if p_loss == 0.0 {
            return Err(Error::domain(
                "loss probability 0 makes the bound diverge; supply a floor such as 1e-12",
            ));
        }
        if !(p_loss > 0.0 && p_loss <= 1.0) {
            return Err(Error::validation("p_loss", "must lie in (0, 1]"));
        }
        if !(c > 0.0 && c <= 2.0) {
            return Err(Error::validation("c", "must lie in (0, 2]"));
        }
        if !(1.0..=1.5).contains(&c) {
            log::warn!("TCP constant C = {c} is outside the usual 1–1.5 range");
        }
        Ok(TcpLinkModel {
            mss_bytes,
            rtt_s,
            p_loss,
            c,
        })
    }
}

/// Upper bound on TCP throughput `(8·MSS/RTT)·C/sqrt(p)` in bit/s.
pub fn tcp_throughput_bound(m: &TcpLinkModel) -> f64 {
    m.mss_bytes * 8.0 / m.rtt_s * m.c / m.p_loss.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shannon() {
        assert!((shannon_capacity(1e3, 1.41).unwrap() - 1270.0).abs() < 12.7);
        assert_eq!(shannon_capacity(1e3, 0.0).unwrap(), 0.0);
        assert!((shannon_capacity(2e6, 1.0).unwrap() - 2e6).abs() < 1e-6);
        assert!(shannon_capacity(0.0, 1.0).is_err());
        assert!((max_spectral_efficiency(1.41).unwrap() - 1.27).abs() < 0.005);
        assert_eq!(max_spectral_efficiency(0.0).unwrap(), 0.0);
        assert!((max_spectral_efficiency(3.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(max_spectral_efficiency(-0.5).is_err());
    }

    #[test]
    fn inverse_shannon() {
        assert!((required_snr(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((required_snr(1.27).unwrap() - 1.41).abs() < 0.005);
        assert_eq!(required_snr(0.0).unwrap(), 0.0);
    }

    #[test]
    fn default_catalog() {
        let cat = ModCodCatalog::dvb_default();
        assert_eq!(cat.entries().len(), 9);
        assert_eq!(cat.floor().name, "APSK 1/2");
    }

    #[test]
    fn selection() {
        let cat = ModCodCatalog::dvb_default();
        let s = cat.select(1.41).unwrap();
        assert_eq!(s.modcod.name, "CPSK 1/2");
        assert!((s.margin_db - 0.41).abs() < 1e-12);
        let top = cat.select(9.0).unwrap();
        assert_eq!(top.modcod.name, "DPSK 7/8");
        assert_eq!(top.margin_db, 0.0);
        match cat.select(-3.0) {
            Err(Error::NoFeasibleModcod { floor_db, floor_name, .. }) => {
                assert_eq!(floor_db, -2.0);
                assert_eq!(floor_name, "APSK 1/2");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ties_prefer_lower_snr() {
        let cat = ModCodCatalog::new(vec![
            ModCod::new("a", 0.5, 2.0),
            ModCod::new("b", 0.5, 1.0),
            ModCod::new("c", 0.3, 0.0),
        ])
        .unwrap();
        let s = cat.select(5.0).unwrap();
        assert_eq!(s.modcod.name, "b");
        assert_eq!(s.margin_db, 4.0);
    }

    #[test]
    fn catalog_validation() {
        assert!(ModCodCatalog::new(vec![]).is_err());
        // 3 bps/Hz needs at least 7 (8.45 dB).
        assert!(ModCodCatalog::new(vec![ModCod::new("x", 3.0, 8.0)]).is_err());
        assert!(ModCodCatalog::new(vec![ModCod::new("x", 0.0, 8.0)]).is_err());
        assert!(ModCodCatalog::new(vec![ModCod::new("lo", 0.5, 3.0), ModCod::new("hi", 0.8, 2.0)]).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let cat = ModCodCatalog::dvb_default();
        let text = cat.to_csv();
        assert!(text.starts_with("name,se_bps_hz,snr_qef_db\n"));
        let back = ModCodCatalog::from_csv(text.as_bytes()).unwrap();
        assert_eq!(back, cat);
        let bad = "name,se_bps_hz,snr_qef_db\nX,not-a-number,1\n";
        assert!(matches!(ModCodCatalog::from_csv(bad.as_bytes()), Err(Error::Parse { .. })));
    }

    #[test]
    fn bitrate() {
        assert!((effective_bitrate(0.6, 1e3).unwrap() - 600.0).abs() < 1e-9);
        assert!((effective_bitrate(1.35, 10e6).unwrap() - 13.5e6).abs() < 1e-6);
        assert_eq!(effective_bitrate(2.0, 0.0).unwrap(), 0.0);
    }

    fn ku_config() -> MultiBeamConfig {
        MultiBeamConfig {
            polarizations: 2,
            beams: 60,
            colors: 7,
            guard_fraction: 0.1,
            bandwidth_hz: 1.5e9,
            se_bps_hz: 2.0,
        }
    }

    #[test]
    fn multibeam() {
        let r = multibeam_capacity(&ku_config()).unwrap();
        assert!((r - 46.285_714_285_714e9).abs() < 1.0, "{r}");
        let all_guard = MultiBeamConfig { guard_fraction: 1.0, ..ku_config() };
        assert_eq!(multibeam_capacity(&all_guard).unwrap(), 0.0);
        let single = MultiBeamConfig {
            polarizations: 1,
            beams: 7,
            colors: 7,
            guard_fraction: 0.0,
            ..ku_config()
        };
        assert!((multibeam_capacity(&single).unwrap() - 3e9).abs() < 1e-3);
        assert!(multibeam_capacity(&MultiBeamConfig { polarizations: 3, ..ku_config() }).is_err());
        assert!(multibeam_capacity(&MultiBeamConfig { colors: 0, ..ku_config() }).is_err());
        assert!(multibeam_capacity(&MultiBeamConfig { guard_fraction: 1.5, ..ku_config() }).is_err());
    }

    #[test]
    fn cost_power_law() {
        assert!((satellite_cost_per_gbps(1.0).unwrap() - 167.3).abs() < 1e-12);
        assert!((satellite_cost_per_gbps(46.0).unwrap() - 5.627).abs() < 1e-3);
        assert!(satellite_cost_per_gbps(20.0).unwrap() < satellite_cost_per_gbps(10.0).unwrap());
        assert!(satellite_cost_per_gbps(0.0).is_err());
    }

    #[test]
    fn tcp_bound() {
        let b = |rtt, p| tcp_throughput_bound(&TcpLinkModel::new(1500.0, rtt, p, 1.0).unwrap());
        assert!((b(0.2, 1e-9) / 1.9e9 - 1.0).abs() < 0.01);
        assert!((b(0.4, 1e-9) / 950e6 - 1.0).abs() < 0.01);
        assert!((b(0.4, 1e-6) / 30e6 - 1.0).abs() < 0.01);
        assert!(matches!(TcpLinkModel::new(1500.0, 0.2, 0.0, 1.0), Err(Error::Domain(_))));
        assert!(TcpLinkModel::new(1500.0, 0.2, 1.5, 1.0).is_err());
        assert!(TcpLinkModel::new(1500.0, 0.0, 1e-3, 1.0).is_err());
        assert!(TcpLinkModel::new(1500.0, 0.2, 1e-3, 2.5).is_err());
        assert!(TcpLinkModel::new(1500.0, 0.2, 1e-3, 1.8).is_ok());
    }
}
