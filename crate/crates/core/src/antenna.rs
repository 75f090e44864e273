//! Uniform phased-array radiation math.
//!
//! Linear arrays are characterized through their array factor. Planar
//! rectangular arrays are characterized by `D = N·π` and the symmetric
//! beamwidth approximation; where a pattern is needed for a planar array the
//! principal-plane cut is used, which for uniform weighting is the array
//! factor of one row.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantities::AntennaGain;

/// Beamwidth/directivity constant, deg².
const HPBW_DIRECTIVITY_DEG2: f64 = 32_400.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Linear { elements: usize },
    Planar { rows: usize, cols: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArraySpec {
    pub topology: Topology,
    /// Element spacing in wavelengths.
    pub spacing_wavelengths: f64,
    /// Radiation efficiency `P_rad / P_in`.
    pub efficiency: f64,
}

impl ArraySpec {
    pub const DEFAULT_SPACING: f64 = 0.5;

    pub fn linear(elements: usize) -> Result<Self> {
        Self::new(Topology::Linear { elements }, Self::DEFAULT_SPACING, 1.0)
    }

    pub fn planar(rows: usize, cols: usize) -> Result<Self> {
        Self::new(Topology::Planar { rows, cols }, Self::DEFAULT_SPACING, 1.0)
    }

    pub fn new(topology: Topology, spacing_wavelengths: f64, efficiency: f64) -> Result<Self> {
        let n = match topology {
            Topology::Linear { elements } => elements,
            Topology::Planar { rows, cols } => rows * cols,
        };
        if n == 0 {
            return Err(Error::validation("elements", "array needs at least one element"));
        }
        if !(spacing_wavelengths.is_finite() && spacing_wavelengths > 0.0) {
            return Err(Error::validation("spacing", "must be > 0 wavelengths"));
        }
        if !(efficiency > 0.0 && efficiency <= 1.0) {
            return Err(Error::validation("efficiency", "must lie in (0, 1]"));
        }
        Ok(ArraySpec {
            topology,
            spacing_wavelengths,
            efficiency,
        })
    }

    pub fn with_spacing(self, spacing_wavelengths: f64) -> Result<Self> {
        Self::new(self.topology, spacing_wavelengths, self.efficiency)
    }

    pub fn with_efficiency(self, efficiency: f64) -> Result<Self> {
        Self::new(self.topology, self.spacing_wavelengths, efficiency)
    }

    pub fn elements(&self) -> usize {
        match self.topology {
            Topology::Linear { elements } => elements,
            Topology::Planar { rows, cols } => rows * cols,
        }
    }

    /// Element count along the pattern cut.
    pub fn cut_elements(&self) -> usize {
        match self.topology {
            Topology::Linear { elements } => elements,
            Topology::Planar { cols, .. } => cols,
        }
    }
}

impl fmt::Display for ArraySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.topology {
            Topology::Linear { elements: 1 } => f.write_str("Isotropic"),
            Topology::Linear { elements } => write!(f, "Linear N={elements}"),
            Topology::Planar { rows, cols } => write!(f, "Planar {rows}x{cols}"),
        }
    }
}

/// `|sin(Nψ/2) / (N·sin(ψ/2))|`, equal to 1 at multiples of 2π.
pub fn normalized_array_factor(n: usize, psi: f64) -> f64 {
    if n <= 1 {
        return 1.0;
    }
    let half = 0.5 * psi.rem_euclid(TAU);
    let den = n as f64 * half.sin();
    if den.abs() < 1e-12 {
        return 1.0;
    }
    ((n as f64 * half).sin() / den).abs().min(1.0)
}

/// Unnormalized array factor magnitude, `N` at the main-lobe peak.
pub fn array_factor_magnitude(n: usize, psi: f64) -> f64 {
    n.max(1) as f64 * normalized_array_factor(n, psi)
}

/// Inter-element phase `k·d·cos θ` for spacing given in wavelengths.
pub fn psi_from_incidence(spacing_wavelengths: f64, theta_rad: f64) -> f64 {
    TAU * spacing_wavelengths * theta_rad.cos()
}

/// Peak directivity as a linear ratio.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Directivity(f64);

impl Directivity {
    pub fn linear(self) -> f64 {
        self.0
    }

    pub fn dbi(self) -> f64 {
        10.0 * self.0.log10()
    }
}

/// `N` for a linear array, `N·π` for a planar one (uniform weighting).
pub fn directivity(spec: &ArraySpec) -> Directivity {
    let n = spec.elements() as f64;
    Directivity(match spec.topology {
        Topology::Linear { .. } => n,
        Topology::Planar { .. } => n * PI,
    })
}

/// Gain `k_ef·D`.
pub fn gain_from_directivity(directivity: f64, efficiency: f64) -> Result<AntennaGain> {
    if !(efficiency > 0.0 && efficiency <= 1.0) {
        return Err(Error::domain(format!("efficiency must lie in (0, 1], got {efficiency}")));
    }
    AntennaGain::from_linear(efficiency * directivity)
}

/// Effective aperture `λ²·G/(4π)` in m².
pub fn effective_aperture(wavelength_m: f64, gain: f64) -> Result<f64> {
    if !(wavelength_m.is_finite() && wavelength_m > 0.0) {
        return Err(Error::domain(format!("wavelength must be > 0 m, got {wavelength_m}")));
    }
    if !(gain.is_finite() && gain > 0.0) {
        return Err(Error::domain(format!("gain must be > 0, got {gain}")));
    }
    Ok(wavelength_m * wavelength_m * gain / (4.0 * PI))
}

/// Symmetric-beam estimate `sqrt(32400 / D)` in degrees.
pub fn hpbw_from_directivity(directivity: f64) -> Result<f64> {
    if !(directivity.is_finite() && directivity > 0.0) {
        return Err(Error::domain(format!("directivity must be > 0, got {directivity}")));
    }
    Ok((HPBW_DIRECTIVITY_DEG2 / directivity).sqrt())
}

fn bisect(mut lo: f64, mut hi: f64, tol: f64, f: impl Fn(f64) -> f64) -> f64 {
    // f(lo) and f(hi) have opposite signs.
    let f_lo_negative = f(lo) < 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == f_lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Half-power beamwidth of the broadside main lobe in degrees, found by
/// bisection on `|f(ψ(θ))|² = 1/2` on either side of θ = 90°.
pub fn hpbw_numeric(spec: &ArraySpec) -> Result<f64> {
    let n = spec.cut_elements();
    if n < 2 {
        return Err(Error::domain("a single element has no main beam"));
    }
    let d = spec.spacing_wavelengths;
    let excess = |theta: f64| normalized_array_factor(n, psi_from_incidence(d, theta)).powi(2) - 0.5;
    // First null at |ψ| = 2π/N; inside it the main-lobe power is monotone.
    let theta_null = (1.0 / (n as f64 * d)).min(1.0).acos();
    if excess(theta_null) > 0.0 {
        return Err(Error::domain(format!(
            "main lobe of {spec} stays above half power across visible space"
        )));
    }
    let tol = 1e-9;
    let lower = bisect(theta_null, FRAC_PI_2, tol, excess);
    let upper = bisect(FRAC_PI_2, PI - theta_null, tol, excess);
    Ok((upper - lower).to_degrees())
}

/// Largest normalized sidelobe amplitude, with both dB conventions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SidelobeLevel {
    pub amplitude: f64,
    pub psi_rad: f64,
}

impl SidelobeLevel {
    /// Field convention, `20·log10`.
    pub fn field_db(&self) -> f64 {
        20.0 * self.amplitude.log10()
    }

    /// `10·log10` of the amplitude ratio.
    pub fn power_db(&self) -> f64 {
        10.0 * self.amplitude.log10()
    }
}

/// Peak of `|f(ψ)|` between the first nulls of adjacent main/grating lobes,
/// i.e. over `ψ ∈ [2π/N, 2π − 2π/N]`.
pub fn sidelobe_level(spec: &ArraySpec) -> Result<SidelobeLevel> {
    let n = spec.cut_elements();
    if n < 3 {
        return Err(Error::NoSidelobe { elements: n });
    }
    let af = |psi: f64| normalized_array_factor(n, psi);
    let lo = TAU / n as f64;
    let hi = TAU - lo;
    let samples = 20_000usize.max(40 * n);
    let step = (hi - lo) / samples as f64;
    let (best_i, _) = (0..=samples)
        .map(|i| (i, af(lo + i as f64 * step)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty scan");

    // Golden-section refinement around the best sample.
    let mut a = (lo + (best_i as f64 - 1.0) * step).max(lo);
    let mut b = (lo + (best_i as f64 + 1.0) * step).min(hi);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    for _ in 0..100 {
        if af(x1) < af(x2) {
            a = x1;
            x1 = x2;
            x2 = a + g * (b - a);
        } else {
            b = x2;
            x2 = x1;
            x1 = b - g * (b - a);
        }
    }
    let psi = 0.5 * (a + b);
    Ok(SidelobeLevel {
        amplitude: af(psi),
        psi_rad: psi,
    })
}

/// One row of the built-in array catalog.
pub fn table_catalog() -> Vec<ArraySpec> {
    let mut out: Vec<ArraySpec> = [1, 3, 7, 11]
        .into_iter()
        .map(|n| ArraySpec::linear(n).expect("valid"))
        .collect();
    out.extend([4, 8, 16, 32].into_iter().map(|n| ArraySpec::planar(n, n).expect("valid")));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArraySelection {
    pub spec: ArraySpec,
    pub hpbw_deg: f64,
    pub peak_gain_dbi: f64,
    /// Gain at the half-power contour, 3.01 dB below peak.
    pub edge_gain_dbi: f64,
}

/// Picks the non-isotropic entry whose estimated beamwidth is nearest to
/// `required_hpbw_deg`.
pub fn select_array(required_hpbw_deg: f64, catalog: &[ArraySpec]) -> Result<ArraySelection> {
    if !(required_hpbw_deg.is_finite() && required_hpbw_deg > 0.0) {
        return Err(Error::domain(format!("required HPBW must be > 0 deg, got {required_hpbw_deg}")));
    }
    let mut best: Option<(f64, ArraySpec, f64)> = None;
    for spec in catalog.iter().filter(|s| s.elements() > 1) {
        let hpbw = hpbw_from_directivity(directivity(spec).linear())?;
        let miss = (hpbw - required_hpbw_deg).abs();
        if best.is_none_or(|(m, _, _)| miss < m) {
            best = Some((miss, *spec, hpbw));
        }
    }
    let (_, spec, hpbw_deg) =
        best.ok_or_else(|| Error::domain("array catalog has no multi-element entry"))?;
    let peak = gain_from_directivity(directivity(&spec).linear(), spec.efficiency)?.dbi();
    Ok(ArraySelection {
        spec,
        hpbw_deg,
        peak_gain_dbi: peak,
        edge_gain_dbi: peak - 10.0 * 2f64.log10(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiationSample {
    pub theta_rad: f64,
    pub psi_rad: f64,
    pub amplitude: f64,
    /// `20·log10(amplitude)` relative to the peak.
    pub power_db: f64,
}

/// Pattern cut from θ = 0° to 180° at `step_deg` resolution.
pub fn radiation_pattern(spec: &ArraySpec, step_deg: f64) -> Result<Vec<RadiationSample>> {
    if !(step_deg.is_finite() && step_deg > 0.0 && step_deg <= 180.0) {
        return Err(Error::domain(format!("step must lie in (0, 180] deg, got {step_deg}")));
    }
    let n = spec.cut_elements();
    let steps = (180.0 / step_deg).round() as usize;
    Ok((0..=steps)
        .map(|i| {
            let theta = (i as f64 * step_deg).min(180.0).to_radians();
            let psi = psi_from_incidence(spec.spacing_wavelengths, theta);
            let amplitude = normalized_array_factor(n, psi);
            RadiationSample {
                theta_rad: theta,
                psi_rad: psi,
                amplitude,
                power_db: 20.0 * amplitude.log10(),
            }
        })
        .collect())
}

/// CSV with columns `theta_deg,psi_rad,amplitude,power_db`.
pub fn pattern_csv(samples: &[RadiationSample]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["theta_deg", "psi_rad", "amplitude", "power_db"])
        .expect("in-memory write");
    for s in samples {
        w.write_record([
            format!("{:.4}", s.theta_rad.to_degrees()),
            format!("{:.9}", s.psi_rad),
            format!("{:.9}", s.amplitude),
            format!("{:.6}", s.power_db),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}
