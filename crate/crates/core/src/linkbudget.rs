//! Power accounting from transmitter to receiver.
//!
//! Two routes are available. [`snr_db`] sums a dB ledger (EIRP, G/T, losses,
//! bandwidth, Boltzmann). [`LinkBudget::compute`] starts from physical
//! parameters, evaluates the same ledger and also carries the received and
//! noise powers in watts so callers can cross-check the two.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantities::{
    db_from_linear, noise_temperature_from_nf, wavelength, AntennaGain, PhysicalConstants, Power,
    PowerRatio,
};

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be > 0, got {x}")))
    }
}

/// Friis received power `Pt·Gt·Gr·λ² / ((4π)²·d²)` in watts.
pub fn friis_received_power(
    p_t_w: f64,
    g_t: f64,
    g_r: f64,
    wavelength_m: f64,
    distance_m: f64,
) -> Result<f64> {
    positive("transmit power", p_t_w)?;
    positive("transmit gain", g_t)?;
    positive("receive gain", g_r)?;
    positive("wavelength", wavelength_m)?;
    positive("distance", distance_m)?;
    let spread = 4.0 * PI * distance_m;
    Ok(p_t_w * g_t * g_r * wavelength_m * wavelength_m / (spread * spread))
}

/// Thermal noise power `k·T·B` in watts.
pub fn noise_power(temperature_k: f64, bandwidth_hz: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(temperature_k.is_finite() && temperature_k >= 0.0) {
        return Err(Error::domain(format!("noise temperature must be >= 0 K, got {temperature_k}")));
    }
    positive("bandwidth", bandwidth_hz)?;
    Ok(constants.boltzmann_j_per_k * temperature_k * bandwidth_hz)
}

/// Free-space path loss `20·log10(4π·d·f/c)` in dB.
pub fn fspl(distance_m: f64, freq_hz: f64, constants: &PhysicalConstants) -> Result<f64> {
    positive("distance", distance_m)?;
    positive("frequency", freq_hz)?;
    Ok(20.0 * (4.0 * PI * distance_m * freq_hz / constants.speed_of_light_m_s).log10())
}

/// Receiver figure of merit `Gr(dBi) − 10·log10(T)` in dB/K.
pub fn g_over_t(g_r_dbi: f64, temperature_k: f64) -> Result<f64> {
    if !(temperature_k.is_finite() && temperature_k > 0.0) {
        return Err(Error::domain(format!("noise temperature must be > 0 K, got {temperature_k}")));
    }
    Ok(g_r_dbi - 10.0 * temperature_k.log10())
}

/// SINR from SNR and SIR, `1 / (1/snr + 1/sir)`. An infinite SIR returns `snr`.
pub fn combine_snr_sir(snr: PowerRatio, sir: PowerRatio) -> PowerRatio {
    let combined = 1.0 / (1.0 / snr.linear() + 1.0 / sir.linear());
    PowerRatio::from_linear(combined).expect("harmonic combination of positive ratios is positive")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transmitter {
    pub power: Power,
    pub gain: AntennaGain,
}

impl Transmitter {
    pub fn new(power: Power, gain: AntennaGain) -> Self {
        Transmitter { power, gain }
    }

    /// An isotropic transmitter radiating the given EIRP.
    pub fn from_eirp(eirp: Power) -> Self {
        Transmitter {
            power: eirp,
            gain: AntennaGain::ISOTROPIC,
        }
    }

    pub fn eirp_dbw(&self) -> f64 {
        self.power.dbw() + self.gain.dbi()
    }
}

/// How a receiver's noise is specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseSpec {
    FigureDb(f64),
    TemperatureK(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Receiver {
    pub gain: AntennaGain,
    pub noise: NoiseSpec,
    temperature_k: f64,
}

impl Receiver {
    /// Exactly one of `noise_figure_db` and `noise_temperature_k` must be set.
    pub fn new(
        gain: AntennaGain,
        noise_figure_db: Option<f64>,
        noise_temperature_k: Option<f64>,
        t_ref_k: f64,
    ) -> Result<Self> {
        let noise = match (noise_figure_db, noise_temperature_k) {
            (Some(nf), None) => NoiseSpec::FigureDb(nf),
            (None, Some(t)) => NoiseSpec::TemperatureK(t),
            (Some(_), Some(_)) => {
                return Err(Error::validation(
                    "noise",
                    "give either a noise figure or a noise temperature, not both",
                ))
            }
            (None, None) => {
                return Err(Error::validation(
                    "noise",
                    "a noise figure or a noise temperature is required",
                ))
            }
        };
        Self::with_noise(gain, noise, t_ref_k)
    }

    pub fn with_noise(gain: AntennaGain, noise: NoiseSpec, t_ref_k: f64) -> Result<Self> {
        let temperature_k = match noise {
            NoiseSpec::FigureDb(nf) => noise_temperature_from_nf(nf, t_ref_k)?,
            NoiseSpec::TemperatureK(t) => {
                if !(t.is_finite() && t >= 0.0) {
                    return Err(Error::domain(format!("noise temperature must be >= 0 K, got {t}")));
                }
                t
            }
        };
        Ok(Receiver {
            gain,
            noise,
            temperature_k,
        })
    }

    pub fn noise_temperature_k(&self) -> f64 {
        self.temperature_k
    }

    pub fn g_over_t_dbk(&self) -> Result<f64> {
        g_over_t(self.gain.dbi(), self.temperature_k)
    }
}

/// Losses applied on top of free-space spreading, all in dB and all >= 0.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LossLedger {
    pub atmospheric_db: f64,
    pub additional_db: f64,
    /// Rain-fade / contingency margin; 2–10 dB is the usual design range.
    pub margin_db: f64,
}

impl LossLedger {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("atm_loss_db", self.atmospheric_db),
            ("ad_loss_db", self.additional_db),
            ("margin_db", self.margin_db),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::validation(name, format!("loss must be >= 0 dB, got {v}")));
            }
        }
        Ok(())
    }

    pub fn total_db(&self) -> f64 {
        self.atmospheric_db + self.additional_db + self.margin_db
    }
}

/// Itemized dB ledger. Loss terms are stored as positive magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudgetBreakdown {
    pub eirp_dbw: f64,
    pub g_over_t_dbk: f64,
    pub fspl_db: f64,
    pub atm_loss_db: f64,
    pub ad_loss_db: f64,
    pub margin_db: f64,
    pub bw_dbhz: f64,
    pub boltzmann_dbw_per_k_hz: f64,
    pub snr_db: f64,
}

impl LinkBudgetBreakdown {
    /// Signed contributions that sum to the SNR.
    pub fn contributions(&self) -> [(&'static str, f64); 8] {
        [
            ("eirp_dbw", self.eirp_dbw),
            ("g_over_t_dbk", self.g_over_t_dbk),
            ("fspl_db", -self.fspl_db),
            ("atm_loss_db", -self.atm_loss_db),
            ("ad_loss_db", -self.ad_loss_db),
            ("margin_db", -self.margin_db),
            ("bw_dbhz", -self.bw_dbhz),
            ("boltzmann_dbw_per_k_hz", -self.boltzmann_dbw_per_k_hz),
        ]
    }

    /// Key/value view in document order.
    pub fn key_values(&self) -> [(&'static str, f64); 9] {
        [
            ("eirp_dbw", self.eirp_dbw),
            ("g_over_t_dbk", self.g_over_t_dbk),
            ("fspl_db", self.fspl_db),
            ("atm_loss_db", self.atm_loss_db),
            ("ad_loss_db", self.ad_loss_db),
            ("margin_db", self.margin_db),
            ("bw_dbhz", self.bw_dbhz),
            ("boltzmann_dbw_per_k_hz", self.boltzmann_dbw_per_k_hz),
            ("snr_db", self.snr_db),
        ]
    }

    /// Two-column text table.
    pub fn to_text_table(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.key_values() {
            out.push_str(&format!("{k:<24}{v:>14.4}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudgetResult {
    /// Present when the budget was computed from physical parameters.
    pub received_power_w: Option<f64>,
    pub noise_power_w: Option<f64>,
    pub snr: PowerRatio,
    pub breakdown: LinkBudgetBreakdown,
}

/// Inputs of the dB-sum route.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrInputs {
    pub eirp_dbw: f64,
    pub g_over_t_dbk: f64,
    pub fspl_db: f64,
    pub losses: LossLedger,
    pub bw_dbhz: f64,
}

/// SNR as the sum of the dB ledger:
/// `EIRP + G/T − FSPL − AtmLoss − AdLoss − margin − B − k`.
pub fn snr_db(inputs: &SnrInputs, constants: &PhysicalConstants) -> Result<LinkBudgetResult> {
    inputs.losses.validate()?;
    if !(inputs.fspl_db.is_finite() && inputs.fspl_db >= 0.0) {
        return Err(Error::validation("fspl_db", format!("must be >= 0 dB, got {}", inputs.fspl_db)));
    }
    for (name, v) in [
        ("eirp_dbw", inputs.eirp_dbw),
        ("g_over_t_dbk", inputs.g_over_t_dbk),
        ("bw_dbhz", inputs.bw_dbhz),
    ] {
        if !v.is_finite() {
            return Err(Error::validation(name, format!("must be finite, got {v}")));
        }
    }
    let k_db = constants.boltzmann_dbw_per_k_hz();
    let mut breakdown = LinkBudgetBreakdown {
        eirp_dbw: inputs.eirp_dbw,
        g_over_t_dbk: inputs.g_over_t_dbk,
        fspl_db: inputs.fspl_db,
        atm_loss_db: inputs.losses.atmospheric_db,
        ad_loss_db: inputs.losses.additional_db,
        margin_db: inputs.losses.margin_db,
        bw_dbhz: inputs.bw_dbhz,
        boltzmann_dbw_per_k_hz: k_db,
        snr_db: 0.0,
    };
    breakdown.snr_db = breakdown.contributions().iter().map(|(_, v)| v).sum();
    Ok(LinkBudgetResult {
        received_power_w: None,
        noise_power_w: None,
        snr: PowerRatio::from_db(breakdown.snr_db)?,
        breakdown,
    })
}

/// A complete physical link description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub transmitter: Transmitter,
    pub receiver: Receiver,
    pub distance_m: f64,
    pub freq_hz: f64,
    pub bandwidth_hz: f64,
    pub losses: LossLedger,
}

impl LinkBudget {
    pub fn compute(&self, constants: &PhysicalConstants) -> Result<LinkBudgetResult> {
        self.losses.validate()?;
        let lambda = wavelength(self.freq_hz, constants)?;
        let received = friis_received_power(
            self.transmitter.power.watts(),
            self.transmitter.gain.linear(),
            self.receiver.gain.linear(),
            lambda,
            self.distance_m,
        )? * 10f64.powf(-self.losses.total_db() / 10.0);
        let noise = noise_power(self.receiver.noise_temperature_k(), self.bandwidth_hz, constants)?;
        let inputs = SnrInputs {
            eirp_dbw: self.transmitter.eirp_dbw(),
            g_over_t_dbk: self.receiver.g_over_t_dbk()?,
            fspl_db: fspl(self.distance_m, self.freq_hz, constants)?,
            losses: self.losses,
            bw_dbhz: db_from_linear(self.bandwidth_hz)?,
        };
        let mut result = snr_db(&inputs, constants)?;
        result.received_power_w = Some(received);
        result.noise_power_w = Some(noise);
        Ok(result)
    }
}
