//! `satlink`: satellite link budget, capacity and antenna toolkit.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage or missing input,
//! 3 no feasible MODCOD, 4 output I/O failure.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use output::{render, Format};

#[derive(Parser)]
#[command(name = "satlink", version, about = "Satellite link engineering toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,

    /// Print tables at full machine precision (6 significant digits).
    #[arg(long, global = true)]
    precise: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert between dB and linear units, noise figure and temperature.
    Convert(ConvertArgs),
    /// Slant range, footprints and beam sizing.
    #[command(subcommand)]
    Geometry(GeometryCmd),
    /// Itemized link budget from flags or a JSON config.
    Linkbudget(LinkArgs),
    /// Shannon capacity, optionally after SNR/SIR combination.
    Capacity(CapacityArgs),
    /// Pick the most efficient feasible MODCOD.
    Modcod(ModcodArgs),
    /// Aggregate multi-beam satellite throughput.
    Multibeam(MultibeamArgs),
    /// Empirical satellite cost per Gb/s.
    Cost(CostArgs),
    /// TCP throughput upper bound.
    Tcp(TcpArgs),
    /// Phased-array patterns, selection and the reference catalog.
    #[command(subcommand)]
    Antenna(AntennaCmd),
    /// LEO shell catalog and footprint statistics.
    Constellation(ConstellationArgs),
    /// Cross-check published project figures.
    #[command(subcommand)]
    Scenario(ScenarioCmd),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct ConvertArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub db: Option<f64>,
    #[arg(long)]
    pub linear: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub dbm: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub dbw: Option<f64>,
    #[arg(long)]
    pub watts: Option<f64>,
    /// Noise figure to convert to a noise temperature.
    #[arg(long)]
    pub nf_db: Option<f64>,
    /// Frequency to convert to a wavelength.
    #[arg(long)]
    pub freq_ghz: Option<f64>,
}

#[derive(Subcommand)]
pub enum GeometryCmd {
    /// Ground-to-satellite distance.
    Slant {
        #[arg(long)]
        altitude_km: f64,
        #[arg(long)]
        elevation_deg: f64,
        /// Use the flat-Earth approximation h/cos(elevation).
        #[arg(long)]
        approx: bool,
    },
    /// Per-satellite footprint for an orbit.
    Footprint {
        #[arg(long)]
        sats_per_orbit: u32,
    },
    /// Beamwidth needed to cover a cell from overhead.
    Hpbw {
        #[arg(long)]
        cell_radius_km: f64,
        #[arg(long)]
        altitude_km: f64,
    },
    /// Radius of each equal-area cell when a circle is split into beams.
    Cell {
        #[arg(long)]
        radius_km: f64,
        #[arg(long)]
        beams: u32,
    },
}

/// Link budget parameters. A `--config` JSON document may supply any of
/// them under the same names with underscores; flags take precedence.
#[derive(Args, Deserialize, Default, Debug)]
#[serde(default, deny_unknown_fields)]
pub struct LinkArgs {
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    #[arg(long)]
    pub distance_km: Option<f64>,
    #[arg(long)]
    pub altitude_km: Option<f64>,
    #[arg(long)]
    pub elevation_deg: Option<f64>,
    /// Use the flat-Earth slant range approximation.
    #[arg(long)]
    pub approx_slant: bool,
    #[arg(long)]
    pub freq_ghz: Option<f64>,
    #[arg(long)]
    pub freq_mhz: Option<f64>,

    #[arg(long, allow_negative_numbers = true)]
    pub eirp_dbw: Option<f64>,
    #[arg(long)]
    pub tx_power_w: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tx_power_dbw: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tx_gain_dbi: Option<f64>,

    #[arg(long, allow_negative_numbers = true)]
    pub rx_gain_dbi: Option<f64>,
    #[arg(long)]
    pub nf_db: Option<f64>,
    #[arg(long)]
    pub noise_temp_k: Option<f64>,
    /// Receiver figure of merit, instead of gain and noise.
    #[arg(long, allow_negative_numbers = true)]
    pub g_over_t_dbk: Option<f64>,
    /// Path loss, instead of distance and frequency.
    #[arg(long)]
    pub fspl_db: Option<f64>,

    #[arg(long)]
    pub bw_hz: Option<f64>,
    #[arg(long)]
    pub bw_khz: Option<f64>,
    #[arg(long)]
    pub bw_mhz: Option<f64>,

    #[arg(long, allow_negative_numbers = true)]
    pub atm_loss_db: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub ad_loss_db: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub margin_db: Option<f64>,
}

#[derive(Args)]
pub struct CapacityArgs {
    #[arg(long)]
    pub bw_hz: Option<f64>,
    #[arg(long)]
    pub bw_khz: Option<f64>,
    #[arg(long)]
    pub bw_mhz: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub snr_db: Option<f64>,
    #[arg(long)]
    pub snr_linear: Option<f64>,
    /// Signal-to-interference ratio to combine with the SNR.
    #[arg(long, allow_negative_numbers = true)]
    pub sir_db: Option<f64>,
    #[arg(long)]
    pub sir_linear: Option<f64>,
}

#[derive(Args)]
pub struct ModcodArgs {
    #[arg(long, allow_negative_numbers = true, required_unless_present = "list")]
    pub snr_db: Option<f64>,
    /// Bandwidth for the effective bitrate.
    #[arg(long)]
    pub bw_hz: Option<f64>,
    #[arg(long)]
    pub bw_khz: Option<f64>,
    #[arg(long)]
    pub bw_mhz: Option<f64>,
    /// CSV catalog with columns name,se_bps_hz,snr_qef_db.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
    /// Print the catalog instead of selecting.
    #[arg(long)]
    pub list: bool,
}

#[derive(Args)]
pub struct MultibeamArgs {
    /// Spectral efficiency, bps/Hz.
    #[arg(long, visible_alias = "se-bps-hz")]
    pub se: f64,
    #[arg(long, required_unless_present = "bw_mhz")]
    pub bw_ghz: Option<f64>,
    #[arg(long)]
    pub bw_mhz: Option<f64>,
    /// Polarizations, 1 or 2.
    #[arg(long, default_value_t = 1)]
    pub pol: u32,
    #[arg(long)]
    pub beams: u32,
    /// Frequency reuse colors.
    #[arg(long)]
    pub colors: u32,
    /// Guard-band fraction of the bandwidth.
    #[arg(long, default_value_t = 0.0)]
    pub guard: f64,
}

#[derive(Args)]
pub struct CostArgs {
    /// Total satellite throughput.
    #[arg(long)]
    pub capacity_gbps: f64,
}

#[derive(Args)]
pub struct TcpArgs {
    #[arg(long, visible_alias = "mss-bytes")]
    pub mss: f64,
    #[arg(long)]
    pub rtt_ms: f64,
    #[arg(long)]
    pub ploss: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
}

#[derive(Subcommand)]
pub enum AntennaCmd {
    /// Radiation pattern cut from 0 to 180 degrees.
    Pattern {
        #[arg(long, required_unless_present = "planar")]
        elements: Option<usize>,
        /// Planar array as ROWSxCOLS; the cut runs along the columns.
        #[arg(long, conflicts_with = "elements")]
        planar: Option<String>,
        #[arg(long, default_value_t = 0.5)]
        spacing_wl: f64,
        #[arg(long, default_value_t = 1.0)]
        step_deg: f64,
        /// Write the pattern CSV to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Choose the catalog array closest to a required beamwidth.
    Select {
        #[arg(long, requires = "altitude_km", required_unless_present = "hpbw_deg")]
        cell_radius_km: Option<f64>,
        #[arg(long)]
        altitude_km: Option<f64>,
        #[arg(long, conflicts_with = "cell_radius_km")]
        hpbw_deg: Option<f64>,
    },
    /// Reference array catalog.
    Table,
}

#[derive(Args)]
pub struct ConstellationArgs {
    /// Shell id (e.g. S1, K2, T1) for footprint statistics.
    #[arg(long)]
    pub shell: Option<String>,
}

#[derive(Subcommand)]
pub enum ScenarioCmd {
    /// Run a built-in fixture or a JSON scenario file.
    Run { target: String },
    /// List the built-in fixtures.
    List,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let constants = match commands::load_constants() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    match commands::run(cli.command, &constants) {
        Ok(out) => {
            print!("{}", render(&out, cli.format, cli.precise));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
