//! Ground-to-satellite geometry: slant range, footprints and beam sizing.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantities::{Angle, PhysicalConstants};

fn check_altitude(altitude_km: f64) -> Result<()> {
    if altitude_km.is_finite() && altitude_km > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("altitude must be > 0 km, got {altitude_km}")))
    }
}

/// Line-of-sight distance from a ground terminal to a satellite at
/// `altitude_km` seen at elevation `elevation_rad`, on a spherical Earth.
///
/// `d = -R·sin α + sqrt(R²·sin²α + h² + 2·R·h)`; equals `h` at zenith.
pub fn slant_range_exact(
    altitude_km: f64,
    elevation_rad: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    check_altitude(altitude_km)?;
    if !(0.0..=FRAC_PI_2).contains(&elevation_rad) {
        return Err(Error::domain(format!(
            "elevation must lie in [0, pi/2] rad, got {elevation_rad}"
        )));
    }
    let r = constants.earth_radius_km;
    let h = altitude_km;
    let s = elevation_rad.sin();
    Ok(-r * s + (r * r * s * s + h * h + 2.0 * r * h).sqrt())
}

/// Flat-Earth approximation `h·sqrt(1 + tan²α)`, i.e. `h / cos α`.
///
/// Note this grows with elevation, the opposite of the spherical result. It is
/// kept because hand-worked MEO/GEO budgets use it with small angles, where it
/// stays within a few km of `h`.
pub fn slant_range_approx(altitude_km: f64, elevation_rad: f64) -> Result<f64> {
    check_altitude(altitude_km)?;
    if !(0.0..FRAC_PI_2).contains(&elevation_rad) {
        return Err(Error::domain(format!(
            "approximation needs elevation in [0, pi/2) rad, got {elevation_rad}"
        )));
    }
    let t = elevation_rad.tan();
    Ok(altitude_km * (1.0 + t * t).sqrt())
}

/// Validated altitude/elevation pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGeometry {
    altitude_km: f64,
    elevation: Angle,
    slant_range_km: f64,
}

impl LinkGeometry {
    pub fn new(altitude_km: f64, elevation: Angle, constants: &PhysicalConstants) -> Result<Self> {
        let slant_range_km = slant_range_exact(altitude_km, elevation.radians(), constants)?;
        Ok(LinkGeometry {
            altitude_km,
            elevation,
            slant_range_km,
        })
    }

    pub fn altitude_km(&self) -> f64 {
        self.altitude_km
    }

    pub fn elevation(&self) -> Angle {
        self.elevation
    }

    pub fn slant_range_km(&self) -> f64 {
        self.slant_range_km
    }
}

/// Diameter of the ground strip served by each satellite when
/// `sats_per_orbit` satellites share one orbit's circumference.
pub fn footprint_diameter(sats_per_orbit: u32, constants: &PhysicalConstants) -> Result<f64> {
    if sats_per_orbit == 0 {
        return Err(Error::domain("satellites per orbit must be >= 1"));
    }
    Ok(constants.earth_perimeter_km / f64::from(sats_per_orbit))
}

/// Area of a circular footprint.
pub fn footprint_area(diameter_km: f64) -> Result<f64> {
    if !(diameter_km.is_finite() && diameter_km > 0.0) {
        return Err(Error::domain(format!("diameter must be > 0 km, got {diameter_km}")));
    }
    let r = diameter_km / 2.0;
    Ok(std::f64::consts::PI * r * r)
}

/// Fraction of the Earth's surface covered by `sats` non-overlapping
/// footprints, capped at 1.
pub fn earth_coverage_fraction(
    sats: u64,
    area_per_sat_km2: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    if sats == 0 {
        return Err(Error::domain("satellite count must be >= 1"));
    }
    if !(area_per_sat_km2.is_finite() && area_per_sat_km2 > 0.0) {
        return Err(Error::domain(format!("area must be > 0 km², got {area_per_sat_km2}")));
    }
    Ok((sats as f64 * area_per_sat_km2 / constants.earth_surface_km2).min(1.0))
}

/// Per-satellite footprint for one orbit of `sats_per_orbit` satellites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Footprint {
    pub diameter_km: f64,
    pub area_km2: f64,
    /// Share of the Earth's surface covered by the satellites of one orbit.
    pub coverage_fraction: f64,
}

impl Footprint {
    pub fn for_orbit(sats_per_orbit: u32, constants: &PhysicalConstants) -> Result<Self> {
        let diameter_km = footprint_diameter(sats_per_orbit, constants)?;
        let area_km2 = footprint_area(diameter_km)?;
        let coverage_fraction =
            earth_coverage_fraction(u64::from(sats_per_orbit), area_km2, constants)?;
        Ok(Footprint {
            diameter_km,
            area_km2,
            coverage_fraction,
        })
    }
}

/// Radius of each of `n_beams` equal-area cells splitting a circle.
pub fn cell_radius_from_split(parent_radius_km: f64, n_beams: u32) -> Result<f64> {
    if !(parent_radius_km.is_finite() && parent_radius_km > 0.0) {
        return Err(Error::domain(format!("radius must be > 0 km, got {parent_radius_km}")));
    }
    if n_beams == 0 {
        return Err(Error::domain("beam count must be >= 1"));
    }
    Ok(parent_radius_km / f64::from(n_beams).sqrt())
}

/// Full beamwidth needed to illuminate a cell of `cell_radius_km` from
/// directly overhead at `altitude_km`.
pub fn required_hpbw(cell_radius_km: f64, altitude_km: f64) -> Result<Angle> {
    if !(cell_radius_km.is_finite() && cell_radius_km >= 0.0) {
        return Err(Error::domain(format!("cell radius must be >= 0 km, got {cell_radius_km}")));
    }
    check_altitude(altitude_km)?;
    Ok(Angle::from_radians(2.0 * (cell_radius_km / altitude_km).atan()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const C: PhysicalConstants = PhysicalConstants::DEFAULT;

    #[test]
    fn exact_slant_range() {
        assert!((slant_range_exact(21_000.0, FRAC_PI_2, &C).unwrap() - 21_000.0).abs() < 1e-9);
        let d = slant_range_exact(600.0, 30f64.to_radians(), &C).unwrap();
        assert!((d - 1075.088).abs() < 1e-3, "{d}");
        let horizon = slant_range_exact(550.0, 0.0, &C).unwrap();
        assert!((horizon - 2703.8121).abs() < 1e-3, "{horizon}");
        assert!(slant_range_exact(600.0, -0.1, &C).is_err());
        assert!(slant_range_exact(600.0, 1.6, &C).is_err());
        assert!(slant_range_exact(0.0, 0.5, &C).is_err());
    }

    #[test]
    fn approximate_slant_range() {
        let d = slant_range_approx(21_000.0, 0.021).unwrap();
        assert!((d - 21_003.0).abs() < 2.0, "{d}");
        assert_eq!(slant_range_approx(700.0, 0.0).unwrap(), 700.0);
        assert!((slant_range_approx(600.0, 0.021).unwrap() - 600.13).abs() < 0.01);
        assert!(slant_range_approx(600.0, FRAC_PI_2).is_err());
    }

    #[test]
    fn footprints() {
        assert!((footprint_diameter(22, &C).unwrap() - 1821.6).abs() < 0.05);
        assert_eq!(footprint_diameter(1, &C).unwrap(), 40_075.0);
        assert!((footprint_diameter(34, &C).unwrap() - 1178.7).abs() < 0.05);
        assert!(footprint_diameter(0, &C).is_err());

        assert!((footprint_area(1821.6).unwrap() / 2.606e6 - 1.0).abs() < 1e-3);
        assert!((footprint_area(2.0).unwrap() - std::f64::consts::PI).abs() < 1e-15);
        assert!((footprint_area(1178.7).unwrap() / 1.091e6 - 1.0).abs() < 1e-3);

        let f = earth_coverage_fraction(22, 2.606e6, &C).unwrap();
        assert!((f - 0.112).abs() < 5e-4);
        assert_eq!(earth_coverage_fraction(1, C.earth_surface_km2, &C).unwrap(), 1.0);
        assert_eq!(earth_coverage_fraction(10, C.earth_surface_km2, &C).unwrap(), 1.0);
        assert!((earth_coverage_fraction(34, 1.091e6, &C).unwrap() - 0.0727).abs() < 1e-4);
    }

    #[test]
    fn footprint_record() {
        let f = Footprint::for_orbit(22, &C).unwrap();
        assert!((f.area_km2 - std::f64::consts::PI * (f.diameter_km / 2.0).powi(2)).abs() < 1e-6);
        assert!(f.coverage_fraction > 0.0 && f.coverage_fraction <= 1.0);
    }

    #[test]
    fn cell_split_and_hpbw() {
        assert_eq!(cell_radius_from_split(50.0, 16).unwrap(), 12.5);
        assert_eq!(cell_radius_from_split(7.0, 1).unwrap(), 7.0);
        assert_eq!(cell_radius_from_split(50.0, 4).unwrap(), 25.0);
        assert!(cell_radius_from_split(50.0, 0).is_err());

        let h = required_hpbw(50.0, 500.0).unwrap();
        assert!((h.radians() - 0.199_337).abs() < 1e-5);
        assert!((h.degrees() - 11.4).abs() < 0.05);
        assert_eq!(required_hpbw(0.0, 500.0).unwrap().radians(), 0.0);
        assert!((required_hpbw(500.0, 500.0).unwrap().degrees() - 90.0).abs() < 1e-12);
    }

    #[test]
    fn geometry_record() {
        let g = LinkGeometry::new(600.0, Angle::from_degrees(30.0), &C).unwrap();
        assert!(g.slant_range_km() >= g.altitude_km());
        assert!(LinkGeometry::new(600.0, Angle::from_degrees(95.0), &C).is_err());
    }
}
