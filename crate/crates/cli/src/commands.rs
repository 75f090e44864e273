//! Command handlers. Each one maps flags onto core calls and returns a
//! result record for rendering.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;
use thiserror::Error;

use satlink_core::antenna::{
    directivity, hpbw_from_directivity, pattern_csv, radiation_pattern, select_array, table_catalog, ArraySpec,
};
use satlink_core::capacity::{
    max_spectral_efficiency, multibeam_capacity, satellite_cost_per_gbps, shannon_capacity, tcp_throughput_bound,
    ModCodCatalog, MultiBeamConfig, TcpLinkModel,
};
use satlink_core::constellation::{list_shells, shell_stats};
use satlink_core::geometry::{
    cell_radius_from_split, required_hpbw, slant_range_approx, slant_range_exact, Footprint,
};
use satlink_core::linkbudget::{
    combine_snr_sir, fspl, snr_db, LinkBudget, LossLedger, Receiver, SnrInputs, Transmitter,
};
use satlink_core::quantities::{
    db_from_linear, linear_from_db, noise_temperature_from_nf, wavelength, AntennaGain, Power, PowerRatio,
};
use satlink_core::scenario::{builtin_fixtures, fixture, fixture_ids, load_scenario, run_scenario};
use satlink_core::{Error, PhysicalConstants};

use crate::output::{Output, MACHINE_DIGITS};
use crate::{
    AntennaCmd, CapacityArgs, Command, ConstellationArgs, ConvertArgs, GeometryCmd, LinkArgs, ModcodArgs,
    MultibeamArgs, ScenarioCmd, TcpArgs,
};

pub const CONSTANTS_ENV: &str = "SATLINK_CONSTANTS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("missing required parameter {0}")]
    Missing(String),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Input { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::NoFeasibleModcod { .. }) => 3,
            CliError::Core(Error::NotFound { .. } | Error::Parse { .. }) => 2,
            CliError::Core(_) => 1,
            CliError::Missing(_) | CliError::Usage(_) | CliError::Input { .. } => 2,
            CliError::Output { .. } => 4,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_input(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Input {
        path: path.to_owned(),
        source,
    })
}

/// Defaults, or the override document named by `SATLINK_CONSTANTS`.
pub fn load_constants() -> CliResult<PhysicalConstants> {
    match std::env::var_os(CONSTANTS_ENV) {
        Some(path) if !path.is_empty() => Ok(PhysicalConstants::from_json(&read_input(Path::new(&path))?)?),
        _ => Ok(PhysicalConstants::DEFAULT),
    }
}

/// At most one of several unit variants of one parameter, scaled to SI.
fn one_of(options: &[(&str, Option<f64>, f64)]) -> CliResult<Option<f64>> {
    let given: Vec<_> = options.iter().filter(|(_, v, _)| v.is_some()).collect();
    match given.as_slice() {
        [] => Ok(None),
        [(_, Some(v), k)] => Ok(Some(v * k)),
        _ => Err(CliError::Usage(format!(
            "give only one of {}",
            given.iter().map(|(n, _, _)| *n).collect::<Vec<_>>().join(", ")
        ))),
    }
}

fn required<T>(v: Option<T>, name: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Missing(name.to_owned()))
}

pub fn run(cmd: Command, c: &PhysicalConstants) -> CliResult<Output> {
    match cmd {
        Command::Convert(a) => convert(a, c),
        Command::Geometry(g) => geometry(g, c),
        Command::Linkbudget(a) => linkbudget(a, c),
        Command::Capacity(a) => capacity(a),
        Command::Modcod(a) => modcod(a),
        Command::Multibeam(a) => multibeam(a),
        Command::Cost(a) => Ok(Output::Record(json!({
            "capacity_gbps": a.capacity_gbps,
            "cost_per_gbps": satellite_cost_per_gbps(a.capacity_gbps)?,
        }))),
        Command::Tcp(a) => tcp(a),
        Command::Antenna(a) => antenna(a),
        Command::Constellation(a) => constellation(a, c),
        Command::Scenario(s) => scenario(s, c),
    }
}

fn convert(a: ConvertArgs, c: &PhysicalConstants) -> CliResult<Output> {
    let v = if let Some(db) = a.db {
        json!({ "db": db, "linear": linear_from_db(db)? })
    } else if let Some(x) = a.linear {
        json!({ "linear": x, "db": db_from_linear(x)? })
    } else if let Some(dbm) = a.dbm {
        let p = Power::from_dbm(dbm)?;
        json!({ "dbm": dbm, "dbw": p.dbw(), "watts": p.watts() })
    } else if let Some(dbw) = a.dbw {
        let p = Power::from_dbw(dbw)?;
        json!({ "dbw": dbw, "dbm": p.dbm(), "watts": p.watts() })
    } else if let Some(w) = a.watts {
        let p = Power::from_watts(w)?;
        json!({ "watts": w, "dbw": p.dbw(), "dbm": p.dbm() })
    } else if let Some(nf) = a.nf_db {
        let t_ref = c.reference_temperature_k;
        json!({ "nf_db": nf, "t_ref_k": t_ref, "noise_temperature_k": noise_temperature_from_nf(nf, t_ref)? })
    } else if let Some(f) = a.freq_ghz {
        json!({ "freq_hz": f * 1e9, "wavelength_m": wavelength(f * 1e9, c)? })
    } else {
        return Err(CliError::Usage("nothing to convert".into()));
    };
    Ok(Output::Record(v))
}

fn geometry(g: GeometryCmd, c: &PhysicalConstants) -> CliResult<Output> {
    let v = match g {
        GeometryCmd::Slant {
            altitude_km,
            elevation_deg,
            approx,
        } => {
            let rad = elevation_deg.to_radians();
            let (d, method) = if approx {
                (slant_range_approx(altitude_km, rad)?, "approx")
            } else {
                (slant_range_exact(altitude_km, rad, c)?, "exact")
            };
            json!({
                "altitude_km": altitude_km,
                "elevation_deg": elevation_deg,
                "method": method,
                "slant_range_km": d,
            })
        }
        GeometryCmd::Footprint { sats_per_orbit } => {
            serde_json::to_value(Footprint::for_orbit(sats_per_orbit, c)?).expect("serializable")
        }
        GeometryCmd::Hpbw {
            cell_radius_km,
            altitude_km,
        } => {
            let a = required_hpbw(cell_radius_km, altitude_km)?;
            json!({
                "cell_radius_km": cell_radius_km,
                "altitude_km": altitude_km,
                "required_hpbw_deg": a.degrees(),
                "required_hpbw_rad": a.radians(),
            })
        }
        GeometryCmd::Cell { radius_km, beams } => json!({
            "radius_km": radius_km,
            "beams": beams,
            "cell_radius_km": cell_radius_from_split(radius_km, beams)?,
        }),
    };
    Ok(Output::Record(v))
}

impl LinkArgs {
    fn merge(self, cfg: LinkArgs) -> LinkArgs {
        LinkArgs {
            config: self.config,
            distance_km: self.distance_km.or(cfg.distance_km),
            altitude_km: self.altitude_km.or(cfg.altitude_km),
            elevation_deg: self.elevation_deg.or(cfg.elevation_deg),
            approx_slant: self.approx_slant || cfg.approx_slant,
            freq_ghz: self.freq_ghz.or(cfg.freq_ghz),
            freq_mhz: self.freq_mhz.or(cfg.freq_mhz),
            eirp_dbw: self.eirp_dbw.or(cfg.eirp_dbw),
            tx_power_w: self.tx_power_w.or(cfg.tx_power_w),
            tx_power_dbw: self.tx_power_dbw.or(cfg.tx_power_dbw),
            tx_gain_dbi: self.tx_gain_dbi.or(cfg.tx_gain_dbi),
            rx_gain_dbi: self.rx_gain_dbi.or(cfg.rx_gain_dbi),
            nf_db: self.nf_db.or(cfg.nf_db),
            noise_temp_k: self.noise_temp_k.or(cfg.noise_temp_k),
            g_over_t_dbk: self.g_over_t_dbk.or(cfg.g_over_t_dbk),
            fspl_db: self.fspl_db.or(cfg.fspl_db),
            bw_hz: self.bw_hz.or(cfg.bw_hz),
            bw_khz: self.bw_khz.or(cfg.bw_khz),
            bw_mhz: self.bw_mhz.or(cfg.bw_mhz),
            atm_loss_db: self.atm_loss_db.or(cfg.atm_loss_db),
            ad_loss_db: self.ad_loss_db.or(cfg.ad_loss_db),
            margin_db: self.margin_db.or(cfg.margin_db),
        }
    }
}

fn linkbudget(a: LinkArgs, c: &PhysicalConstants) -> CliResult<Output> {
    let a = match &a.config {
        Some(path) => {
            let cfg: LinkArgs = serde_json::from_str(&read_input(path)?).map_err(Error::from)?;
            a.merge(cfg)
        }
        None => a,
    };

    let tx = match (a.eirp_dbw, one_of(&[("--tx-power-w", a.tx_power_w, 1.0), ("--tx-power-dbw", a.tx_power_dbw, 1.0)])?) {
        (Some(_), Some(_)) => return Err(CliError::Usage("give --eirp-dbw or a transmit power, not both".into())),
        (Some(eirp), None) => Transmitter::from_eirp(Power::from_dbw(eirp)?),
        (None, Some(_)) => {
            let p = match a.tx_power_w {
                Some(w) => Power::from_watts(w)?,
                None => Power::from_dbw(a.tx_power_dbw.expect("one of the two"))?,
            };
            let g = required(a.tx_gain_dbi, "--tx-gain-dbi")?;
            Transmitter::new(p, AntennaGain::from_dbi(g)?)
        }
        (None, None) => return Err(CliError::Missing("--eirp-dbw or --tx-power-w".into())),
    };

    let receiver = match a.g_over_t_dbk {
        Some(_) if a.rx_gain_dbi.is_some() || a.nf_db.is_some() || a.noise_temp_k.is_some() => {
            return Err(CliError::Usage(
                "give --g-over-t-dbk or receiver gain and noise, not both".into(),
            ))
        }
        Some(_) => None,
        None => {
            let gain = required(a.rx_gain_dbi, "--rx-gain-dbi or --g-over-t-dbk")?;
            if a.nf_db.is_none() && a.noise_temp_k.is_none() {
                return Err(CliError::Missing("--nf-db or --noise-temp-k".into()));
            }
            Some(Receiver::new(
                AntennaGain::from_dbi(gain)?,
                a.nf_db,
                a.noise_temp_k,
                c.reference_temperature_k,
            )?)
        }
    };

    let bandwidth_hz = required(
        one_of(&[("--bw-hz", a.bw_hz, 1.0), ("--bw-khz", a.bw_khz, 1e3), ("--bw-mhz", a.bw_mhz, 1e6)])?,
        "--bw-hz",
    )?;
    let losses = LossLedger {
        atmospheric_db: a.atm_loss_db.unwrap_or(0.0),
        additional_db: a.ad_loss_db.unwrap_or(0.0),
        margin_db: a.margin_db.unwrap_or(0.0),
    };

    let path = if let Some(f) = a.fspl_db {
        if a.distance_km.is_some() || a.altitude_km.is_some() {
            return Err(CliError::Usage("give --fspl-db or a distance, not both".into()));
        }
        Err(f)
    } else {
        let distance_km = match (a.distance_km, a.altitude_km) {
            (Some(_), Some(_)) => return Err(CliError::Usage("give --distance-km or --altitude-km, not both".into())),
            (Some(d), None) => d,
            (None, Some(h)) => {
                let e = required(a.elevation_deg, "--elevation-deg")?.to_radians();
                if a.approx_slant {
                    slant_range_approx(h, e)?
                } else {
                    slant_range_exact(h, e, c)?
                }
            }
            (None, None) => return Err(CliError::Missing("--distance-km or --altitude-km".into())),
        };
        let freq_hz = required(
            one_of(&[("--freq-ghz", a.freq_ghz, 1e9), ("--freq-mhz", a.freq_mhz, 1e6)])?,
            "--freq-ghz",
        )?;
        Ok((distance_km * 1e3, freq_hz))
    };

    let result = match (receiver, path) {
        (Some(receiver), Ok((distance_m, freq_hz))) => LinkBudget {
            transmitter: tx,
            receiver,
            distance_m,
            freq_hz,
            bandwidth_hz,
            losses,
        }
        .compute(c)?,
        (receiver, path) => {
            let g_over_t_dbk = match receiver {
                Some(r) => r.g_over_t_dbk()?,
                None => a.g_over_t_dbk.expect("checked above"),
            };
            let fspl_db = match path {
                Ok((d, f)) => fspl(d, f, c)?,
                Err(given) => given,
            };
            snr_db(
                &SnrInputs {
                    eirp_dbw: tx.eirp_dbw(),
                    g_over_t_dbk,
                    fspl_db,
                    losses,
                    bw_dbhz: db_from_linear(bandwidth_hz)?,
                },
                c,
            )?
        }
    };
    Ok(Output::record(&result))
}

fn snr_input(db: Option<f64>, linear: Option<f64>, name: &str) -> CliResult<Option<PowerRatio>> {
    match (db, linear) {
        (Some(_), Some(_)) => Err(CliError::Usage(format!("give --{name}-db or --{name}-linear, not both"))),
        (Some(d), None) => Ok(Some(PowerRatio::from_db(d)?)),
        (None, Some(x)) => Ok(Some(PowerRatio::from_linear(x)?)),
        (None, None) => Ok(None),
    }
}

fn capacity(a: CapacityArgs) -> CliResult<Output> {
    let bw = required(
        one_of(&[("--bw-hz", a.bw_hz, 1.0), ("--bw-khz", a.bw_khz, 1e3), ("--bw-mhz", a.bw_mhz, 1e6)])?,
        "--bw-hz",
    )?;
    let snr = required(snr_input(a.snr_db, a.snr_linear, "snr")?, "--snr-db or --snr-linear")?;
    let mut v = json!({
        "bandwidth_hz": bw,
        "snr_linear": snr.linear(),
        "snr_db": snr.db(),
    });
    let effective = match snr_input(a.sir_db, a.sir_linear, "sir")? {
        Some(sir) => {
            let sinr = combine_snr_sir(snr, sir);
            v["sir_linear"] = json!(sir.linear());
            v["sinr_linear"] = json!(sinr.linear());
            v["sinr_db"] = json!(sinr.db());
            sinr
        }
        None => snr,
    };
    v["max_se_bps_hz"] = json!(max_spectral_efficiency(effective.linear())?);
    v["capacity_bps"] = json!(shannon_capacity(bw, effective.linear())?);
    Ok(Output::Record(v))
}

fn modcod(a: ModcodArgs) -> CliResult<Output> {
    let catalog = match &a.catalog {
        Some(path) => ModCodCatalog::from_csv(read_input(path)?.as_bytes())?,
        None => ModCodCatalog::dvb_default(),
    };
    if a.list {
        return Ok(Output::rows(catalog.entries()));
    }
    let snr = required(a.snr_db, "--snr-db")?;
    let sel = catalog.select(snr)?;
    let mut v = json!({
        "snr_db": snr,
        "modcod": sel.modcod.name,
        "se_bps_hz": sel.modcod.se_bps_hz,
        "snr_qef_db": sel.modcod.snr_qef_db,
        "margin_db": sel.margin_db,
    });
    if let Some(bw) = one_of(&[("--bw-hz", a.bw_hz, 1.0), ("--bw-khz", a.bw_khz, 1e3), ("--bw-mhz", a.bw_mhz, 1e6)])? {
        v["bandwidth_hz"] = json!(bw);
        v["effective_bitrate_bps"] = json!(satlink_core::capacity::effective_bitrate(sel.modcod.se_bps_hz, bw)?);
    }
    Ok(Output::Record(v))
}

fn multibeam(a: MultibeamArgs) -> CliResult<Output> {
    let bw = required(one_of(&[("--bw-ghz", a.bw_ghz, 1e9), ("--bw-mhz", a.bw_mhz, 1e6)])?, "--bw-ghz")?;
    let cfg = MultiBeamConfig {
        polarizations: a.pol,
        beams: a.beams,
        colors: a.colors,
        guard_fraction: a.guard,
        bandwidth_hz: bw,
        se_bps_hz: a.se,
    };
    let cap = multibeam_capacity(&cfg)?;
    let mut v = serde_json::to_value(cfg).expect("serializable");
    v["capacity_bps"] = json!(cap);
    Ok(Output::Record(v))
}

fn tcp(a: TcpArgs) -> CliResult<Output> {
    let m = TcpLinkModel::new(a.mss, a.rtt_ms / 1e3, a.ploss, a.c)?;
    let mut v = serde_json::to_value(m).expect("serializable");
    v["throughput_bps"] = json!(tcp_throughput_bound(&m));
    Ok(Output::Record(v))
}

fn parse_planar(s: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Usage(format!("--planar expects ROWSxCOLS, got {s:?}"));
    let (r, c) = s.to_ascii_lowercase().split_once('x').map(|(r, c)| (r.to_owned(), c.to_owned())).ok_or_else(bad)?;
    Ok((r.trim().parse().map_err(|_| bad())?, c.trim().parse().map_err(|_| bad())?))
}

fn antenna(a: AntennaCmd) -> CliResult<Output> {
    match a {
        AntennaCmd::Pattern {
            elements,
            planar,
            spacing_wl,
            step_deg,
            out,
        } => {
            let spec = match (elements, planar) {
                (Some(n), _) => ArraySpec::linear(n)?,
                (None, Some(p)) => {
                    let (r, cols) = parse_planar(&p)?;
                    ArraySpec::planar(r, cols)?
                }
                (None, None) => return Err(CliError::Missing("--elements or --planar".into())),
            }
            .with_spacing(spacing_wl)?;
            let samples = radiation_pattern(&spec, step_deg)?;
            if let Some(path) = out {
                fs::write(&path, pattern_csv(&samples)).map_err(|source| CliError::Output {
                    path: path.clone(),
                    source,
                })?;
                let peak = samples
                    .iter()
                    .max_by(|x, y| x.amplitude.total_cmp(&y.amplitude))
                    .expect("at least one sample");
                return Ok(Output::Record(json!({
                    "array": spec.to_string(),
                    "file": path.display().to_string(),
                    "samples": samples.len(),
                    "peak_amplitude": peak.amplitude,
                    "peak_theta_deg": peak.theta_rad.to_degrees(),
                })));
            }
            let rows: Vec<_> = samples
                .iter()
                .map(|s| {
                    json!({
                        "theta_deg": s.theta_rad.to_degrees(),
                        "psi_rad": s.psi_rad,
                        "amplitude": s.amplitude,
                        "power_db": s.power_db,
                    })
                })
                .collect();
            Ok(Output::Rows(rows))
        }
        AntennaCmd::Select {
            cell_radius_km,
            altitude_km,
            hpbw_deg,
        } => {
            let required_deg = match (hpbw_deg, cell_radius_km) {
                (Some(h), _) => h,
                (None, Some(r)) => required_hpbw(r, required(altitude_km, "--altitude-km")?)?.degrees(),
                (None, None) => return Err(CliError::Missing("--cell-radius-km or --hpbw-deg".into())),
            };
            let sel = select_array(required_deg, &table_catalog())?;
            Ok(Output::Record(json!({
                "required_hpbw_deg": required_deg,
                "array": sel.spec.to_string(),
                "elements": sel.spec.elements(),
                "hpbw_deg": sel.hpbw_deg,
                "peak_gain_dbi": sel.peak_gain_dbi,
                "edge_gain_dbi": sel.edge_gain_dbi,
            })))
        }
        AntennaCmd::Table => {
            let rows = table_catalog()
                .iter()
                .map(|spec| {
                    let d = directivity(spec);
                    let hpbw = if spec.elements() > 1 {
                        json!(hpbw_from_directivity(d.linear())?)
                    } else {
                        serde_json::Value::Null
                    };
                    Ok(json!({
                        "array": spec.to_string(),
                        "elements": spec.elements(),
                        "directivity_linear": d.linear(),
                        "directivity_dbi": d.dbi(),
                        "hpbw_deg": hpbw,
                    }))
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok(Output::Rows(rows))
        }
    }
}

fn constellation(a: ConstellationArgs, c: &PhysicalConstants) -> CliResult<Output> {
    match a.shell {
        Some(id) => Ok(Output::record(&shell_stats(&id, c)?)),
        None => Ok(Output::rows(list_shells())),
    }
}

fn scenario(s: ScenarioCmd, c: &PhysicalConstants) -> CliResult<Output> {
    match s {
        ScenarioCmd::List => {
            let rows: Vec<_> = fixture_ids()
                .into_iter()
                .zip(builtin_fixtures())
                .map(|(id, s)| {
                    json!({
                        "id": id,
                        "name": s.name,
                        "orbit": s.orbit.to_string(),
                        "cases": s.cases.len(),
                    })
                })
                .collect();
            Ok(Output::Rows(rows))
        }
        ScenarioCmd::Run { target } => {
            let path = Path::new(&target);
            let scenario = if path.is_file() {
                load_scenario(&read_input(path)?)?
            } else {
                fixture(&target)?
            };
            let report = run_scenario(&scenario, c);
            Ok(Output::Custom {
                json: serde_json::to_value(&report).expect("serializable"),
                table: report.to_text_table(4),
                precise_table: report.to_text_table(MACHINE_DIGITS),
                csv: report.to_csv(MACHINE_DIGITS),
            })
        }
    }
}
