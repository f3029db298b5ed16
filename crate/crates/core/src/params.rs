//! Physical constants and Gaussian sources.
//!
//! Units are a convention: the default is natural units with `hbar = mass = 1`,
//! which gives a diffusivity of one half.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Reduced Planck constant and particle mass. The diffusivity is always
/// derived from these through the Einstein relation `D = hbar / (2 m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    hbar: f64,
    mass: f64,
}

impl PhysicalParams {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "hbar must be positive and finite, got {hbar}"
            )));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mass must be positive and finite, got {mass}"
            )));
        }
        Ok(Self { hbar, mass })
    }

    /// `hbar = m = 1`.
    pub fn natural() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
        }
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn diffusivity(&self) -> f64 {
        self.hbar / (2.0 * self.mass)
    }
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self::natural()
    }
}

pub fn make_params(hbar: f64, mass: f64) -> Result<PhysicalParams> {
    PhysicalParams::new(hbar, mass)
}

/// A single Gaussian source (one slit): initial center, initial width and
/// drift velocity. `u0 = D / sigma0` is fixed at construction, so a source
/// belongs to the parameter set it was built with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitSource {
    center: f64,
    sigma0: f64,
    drift: f64,
    u0: f64,
}

impl SlitSource {
    pub fn new(params: &PhysicalParams, center: f64, sigma0: f64, drift: f64) -> Result<Self> {
        if !(sigma0.is_finite() && sigma0 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma0 must be positive and finite, got {sigma0}"
            )));
        }
        if !center.is_finite() || !drift.is_finite() {
            return Err(Error::InvalidParameter(
                "source center and drift must be finite".into(),
            ));
        }
        Ok(Self {
            center,
            sigma0,
            drift,
            u0: params.diffusivity() / sigma0,
        })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    pub fn drift(&self) -> f64 {
        self.drift
    }

    /// Initial osmotic velocity at one standard deviation from the center.
    pub fn u0(&self) -> f64 {
        self.u0
    }
}

/// Normalization of the phase-space distribution, `1 / (2 pi sigma0 m u0)`.
/// Equal to `2 / h` for every width.
pub fn uncertainty_norm(params: &PhysicalParams, source: &SlitSource) -> f64 {
    1.0 / (2.0 * PI * source.sigma0() * params.mass() * source.u0())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_units() {
        assert_eq!(make_params(1.0, 1.0).unwrap().diffusivity(), 0.5);
        assert_eq!(make_params(1.0, 0.5).unwrap().diffusivity(), 1.0);
        assert_eq!(PhysicalParams::default().diffusivity(), 0.5);
    }

    #[test]
    fn electron_si() {
        // hbar / (2 m) with h = 6.626e-34, m = 9.109e-31, evaluated with
        // mpmath at 50 digits: 5.7885643480453315e-05 m^2/s
        let hbar = 6.626e-34 / (2.0 * PI);
        let p = make_params(hbar, 9.109e-31).unwrap();
        approx::assert_relative_eq!(
            p.diffusivity(),
            5.788_564_348_045_331_5e-5,
            max_relative = 1e-14
        );
    }

    #[test]
    fn rejects_non_positive() {
        assert!(make_params(0.0, 1.0).is_err());
        assert!(make_params(1.0, -1.0).is_err());
        assert!(make_params(f64::NAN, 1.0).is_err());
        let p = PhysicalParams::natural();
        assert!(SlitSource::new(&p, 0.0, 0.0, 0.0).is_err());
        assert!(SlitSource::new(&p, 0.0, -1.0, 0.0).is_err());
    }

    #[test]
    fn uncertainty_norm_values() {
        let p = PhysicalParams::natural();
        let s = SlitSource::new(&p, 0.0, 1.0, 0.0).unwrap();
        approx::assert_relative_eq!(uncertainty_norm(&p, &s), 1.0 / PI, max_relative = 1e-15);
        let s = SlitSource::new(&p, 0.0, 0.37, 0.0).unwrap();
        approx::assert_relative_eq!(uncertainty_norm(&p, &s), 1.0 / PI, max_relative = 1e-15);

        let p = make_params(2.0, 1.0).unwrap();
        let s = SlitSource::new(&p, 0.0, 1.0, 0.0).unwrap();
        approx::assert_relative_eq!(
            uncertainty_norm(&p, &s),
            1.0 / (2.0 * PI),
            max_relative = 1e-15
        );
    }

    proptest::proptest! {
        #[test]
        fn einstein_relation(hbar in 1e-6f64..1e6, mass in 1e-6f64..1e6) {
            let p = make_params(hbar, mass).unwrap();
            let back = p.diffusivity() * 2.0 * p.mass();
            proptest::prop_assert!((back - hbar).abs() <= 2.0 * f64::EPSILON * hbar);
        }

        #[test]
        fn norm_independent_of_width(sigma0 in 1e-3f64..1e3, hbar in 0.1f64..10.0) {
            let p = make_params(hbar, 1.0).unwrap();
            let s = SlitSource::new(&p, 0.0, sigma0, 0.0).unwrap();
            let expected = 1.0 / (2.0 * PI * p.mass() * p.diffusivity());
            proptest::prop_assert!((uncertainty_norm(&p, &s) - expected).abs() <= 4.0 * f64::EPSILON * expected);
        }
    }
}
