//! LEO mega-constellation shells and per-shell footprint statistics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{earth_coverage_fraction, Footprint};
use crate::quantities::PhysicalConstants;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Shell {
    pub constellation: &'static str,
    pub id: &'static str,
    pub altitude_km: f64,
    pub orbits: u32,
    pub sats_per_orbit: u32,
    pub inclination_deg: f64,
}

impl Shell {
    pub fn total_satellites(&self) -> u64 {
        u64::from(self.orbits) * u64::from(self.sats_per_orbit)
    }
}

const fn shell(
    constellation: &'static str,
    id: &'static str,
    altitude_km: f64,
    orbits: u32,
    sats_per_orbit: u32,
    inclination_deg: f64,
) -> Shell {
    Shell {
        constellation,
        id,
        altitude_km,
        orbits,
        sats_per_orbit,
        inclination_deg,
    }
}

static SHELLS: [Shell; 10] = [
    shell("Starlink", "S1", 550.0, 72, 22, 53.0),
    shell("Starlink", "S2", 1110.0, 32, 50, 53.8),
    shell("Starlink", "S3", 1130.0, 8, 50, 74.0),
    shell("Starlink", "S4", 1275.0, 5, 75, 81.0),
    shell("Starlink", "S5", 1325.0, 6, 75, 70.0),
    shell("Kuiper", "K1", 630.0, 34, 34, 51.9),
    shell("Kuiper", "K2", 610.0, 36, 36, 42.0),
    shell("Kuiper", "K3", 590.0, 28, 28, 33.0),
    shell("Telesat", "T1", 1015.0, 27, 13, 98.98),
    shell("Telesat", "T2", 1325.0, 40, 33, 50.88),
];

pub fn list_shells() -> &'static [Shell] {
    &SHELLS
}

/// Looks a shell up by id, case-insensitively.
pub fn find_shell(id: &str) -> Result<&'static Shell> {
    SHELLS
        .iter()
        .find(|s| s.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::NotFound {
            id: id.to_owned(),
            valid: SHELLS.iter().map(|s| s.id.to_owned()).collect(),
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShellStats {
    pub id: &'static str,
    pub footprint_diameter_km: f64,
    pub footprint_area_km2: f64,
    /// Earth surface share covered by the satellites of a single orbit.
    pub orbit_coverage_fraction: f64,
    pub total_satellites: u64,
    /// Whole-shell extrapolation (all orbits, no overlap), capped at 1.
    /// Shells overlap heavily in practice, so this is an upper bound only.
    pub shell_coverage_fraction_extrapolated: f64,
}

pub fn shell_stats(id: &str, constants: &PhysicalConstants) -> Result<ShellStats> {
    let s = find_shell(id)?;
    let fp = Footprint::for_orbit(s.sats_per_orbit, constants)?;
    Ok(ShellStats {
        id: s.id,
        footprint_diameter_km: fp.diameter_km,
        footprint_area_km2: fp.area_km2,
        orbit_coverage_fraction: fp.coverage_fraction,
        total_satellites: s.total_satellites(),
        shell_coverage_fraction_extrapolated: earth_coverage_fraction(
            s.total_satellites(),
            fp.area_km2,
            constants,
        )?,
    })
}

/// CSV with columns `constellation,shell,altitude_km,orbits,sats_per_orbit,inclination_deg`.
pub fn shells_csv() -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "constellation",
        "shell",
        "altitude_km",
        "orbits",
        "sats_per_orbit",
        "inclination_deg",
    ])
    .expect("in-memory write");
    for s in &SHELLS {
        w.write_record([
            s.constellation.to_owned(),
            s.id.to_owned(),
            s.altitude_km.to_string(),
            s.orbits.to_string(),
            s.sats_per_orbit.to_string(),
            s.inclination_deg.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}
