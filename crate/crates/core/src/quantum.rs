//! Quantum predictions for the delayed-choice interferometer with a quantum
//! control: photon `A` and ancilla `B` in `cosα|p⟩|0⟩ + sinα|w⟩|1⟩`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::dist::{joint_index, BinaryDist, GeneralParams, JointDist};
use crate::error::{Error, Result};
use crate::scalar::REAL_TOLERANCE;

/// An angle in radians.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    pub fn radians(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::Parse {
                what: "angle",
                input: value.to_string(),
                reason: "angle must be finite".into(),
            });
        }
        Ok(Self(value))
    }

    /// `numer·π/denom`.
    pub fn pi_fraction(numer: f64, denom: f64) -> Self {
        Self(numer * PI / denom)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Accepts `pi`, `pi/N`, `N*pi`, `N*pi/M`, `-pi/N`, or a plain decimal.
impl FromStr for Angle {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            what: "angle",
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let text: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if !text.contains("pi") {
            let value: f64 = text
                .parse()
                .map_err(|_| err("expected radians or a multiple of pi"))?;
            return Self::radians(value);
        }
        let (head, tail) = text.split_once("pi").expect("contains pi");
        let numer = match head {
            "" => 1.0,
            "-" => -1.0,
            h => h
                .strip_suffix('*')
                .ok_or_else(|| err("expected N*pi"))?
                .parse::<f64>()
                .map_err(|_| err("bad multiplier before pi"))?,
        };
        let denom = match tail {
            "" => 1.0,
            t => t
                .strip_prefix('/')
                .ok_or_else(|| err("expected pi/M"))?
                .parse::<f64>()
                .map_err(|_| err("bad divisor after pi"))?,
        };
        if denom == 0.0 {
            return Err(err("division by zero"));
        }
        Self::radians(numer * PI / denom)
    }
}

/// Photon⊗ancilla amplitudes indexed by `(a, b)` in the order 00, 01, 10, 11.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector4 {
    amplitudes: [Complex64; 4],
}

impl StateVector4 {
    pub fn new(amplitudes: [Complex64; 4]) -> Result<Self> {
        let state = Self { amplitudes };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > REAL_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "state norm² is {norm}, not 1"
            )));
        }
        Ok(state)
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amplitudes
    }

    pub fn amplitude(&self, a: usize, b: usize) -> Complex64 {
        self.amplitudes[joint_index(a, b)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Multiplies every amplitude by `e^{iθ}`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        let phase = Complex64::from_polar(1.0, theta);
        Self {
            amplitudes: self.amplitudes.map(|z| z * phase),
        }
    }

    /// Born rule in the computational basis.
    pub fn probabilities(&self) -> JointDist<f64> {
        JointDist::new_unchecked(self.amplitudes.map(|z| z.norm_sqr()))
    }
}

/// `(cos²(φ/2), sin²(φ/2))`, the closed interferometer.
pub fn wave_statistics(phi: Angle) -> BinaryDist<f64> {
    let half = phi.value() / 2.0;
    BinaryDist::new(half.cos().powi(2), half.sin().powi(2)).expect("cos² + sin² = 1")
}

/// `(1/2, 1/2)`, the open interferometer.
pub fn particle_statistics() -> BinaryDist<f64> {
    BinaryDist::new(0.5, 0.5).expect("uniform")
}

/// `|p⟩ = (|0⟩ + e^{iφ}|1⟩)/√2`.
pub fn particle_state(phi: Angle) -> [Complex64; 2] {
    [
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::from_polar(FRAC_1_SQRT_2, phi.value()),
    ]
}

/// `|w⟩ = e^{iφ/2}(cos(φ/2)|0⟩ − i sin(φ/2)|1⟩)`.
pub fn wave_state(phi: Angle) -> [Complex64; 2] {
    let half = phi.value() / 2.0;
    let global = Complex64::from_polar(1.0, half);
    [
        global * half.cos(),
        global * Complex64::new(0.0, -half.sin()),
    ]
}

/// `cosα|p⟩|0⟩ + sinα|w⟩|1⟩`.
pub fn joint_state(alpha: Angle, phi: Angle) -> StateVector4 {
    let p = particle_state(phi);
    let w = wave_state(phi);
    let (c, s) = (alpha.value().cos(), alpha.value().sin());
    let mut amplitudes = [Complex64::new(0.0, 0.0); 4];
    for a in 0..2 {
        amplitudes[joint_index(a, 0)] = p[a] * c;
        amplitudes[joint_index(a, 1)] = w[a] * s;
    }
    StateVector4 { amplitudes }
}

/// Closed-form joint statistics
/// `(½cos²α, sin²α cos²(φ/2), ½cos²α, sin²α sin²(φ/2))`.
pub fn quantum_joint(alpha: Angle, phi: Angle) -> JointDist<f64> {
    let c2 = alpha.value().cos().powi(2);
    let s2 = alpha.value().sin().powi(2);
    let wave = wave_statistics(phi);
    JointDist::new_unchecked([0.5 * c2, s2 * wave.p0(), 0.5 * c2, s2 * wave.p1()])
}

/// `(x, e_p, e_w) = (cos²α, 1/2, cos²(φ/2))`.
pub fn quantum_params(alpha: Angle, phi: Angle) -> GeneralParams<f64> {
    let x = alpha.value().cos().powi(2);
    GeneralParams::new(x, *particle_statistics().p0(), *wave_statistics(phi).p0())
        .expect("trigonometric squares lie in [0, 1]")
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= TOL
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn zclose(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= TOL
    }

    fn rad(v: f64) -> Angle {
        Angle::radians(v).unwrap()
    }

    #[test]
    fn wave_statistics_examples() {
        let w = wave_statistics(rad(0.0));
        assert!(close(*w.p0(), 1.0) && close(*w.p1(), 0.0));
        let w = wave_statistics(Angle::pi_fraction(1.0, 1.0));
        assert!(close(*w.p0(), 0.0) && close(*w.p1(), 1.0));
        let w = wave_statistics(Angle::pi_fraction(1.0, 2.0));
        assert!(close(*w.p0(), 0.5) && close(*w.p1(), 0.5));
    }

    #[test]
    fn particle_statistics_is_uniform() {
        let p = particle_statistics();
        assert_eq!((*p.p0(), *p.p1()), (0.5, 0.5));
        let half_fringe = wave_statistics(Angle::pi_fraction(1.0, 2.0));
        let as_joint =
            |d: &BinaryDist<f64>| JointDist::new([*d.p0(), 0.0, *d.p1(), 0.0]).unwrap();
        assert!(as_joint(&p).tv_distance(&as_joint(&half_fringe)) <= TOL);
    }

    #[test]
    fn joint_state_examples() {
        let s = joint_state(rad(0.0), rad(1.1));
        let r = FRAC_1_SQRT_2;
        assert!(zclose(s.amplitude(0, 0), c(r, 0.0)));
        assert!(zclose(s.amplitude(0, 1), c(0.0, 0.0)));
        assert!(zclose(s.amplitude(1, 0), Complex64::from_polar(r, 1.1)));
        assert!(zclose(s.amplitude(1, 1), c(0.0, 0.0)));

        let s = joint_state(Angle::pi_fraction(1.0, 2.0), rad(0.0));
        let expected = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        for (z, e) in s.amplitudes().iter().zip(expected) {
            assert!(zclose(*z, e));
        }
    }

    #[test]
    fn joint_state_is_normalized_on_grid() {
        for i in 0..9 {
            for j in 0..9 {
                let alpha = Angle::pi_fraction(i as f64, 8.0);
                let phi = Angle::pi_fraction(j as f64, 8.0);
                let state = joint_state(alpha, phi);
                assert!(close(state.norm_sqr(), 1.0));
                assert!(StateVector4::new(*state.amplitudes()).is_ok());
            }
        }
    }

    #[test]
    fn quantum_joint_examples() {
        let j = quantum_joint(rad(0.0), rad(0.3));
        assert!(j.approx_eq(&JointDist::new([0.5, 0.0, 0.5, 0.0]).unwrap()));
        let j = quantum_joint(Angle::pi_fraction(1.0, 2.0), Angle::pi_fraction(1.0, 2.0));
        assert!(j.approx_eq(&JointDist::new([0.0, 0.5, 0.0, 0.5]).unwrap()));
        let j = quantum_joint(Angle::pi_fraction(1.0, 4.0), rad(0.0));
        assert!(j.approx_eq(&JointDist::new([0.25, 0.5, 0.25, 0.0]).unwrap()));
    }

    #[test]
    fn quantum_params_examples() {
        let p = quantum_params(Angle::pi_fraction(1.0, 3.0), Angle::pi_fraction(1.0, 4.0));
        assert!(close(*p.x(), 0.25));
        assert!(close(*p.e_p(), 0.5));
        assert!((p.e_w() - 0.853553).abs() < 1e-6);
        assert!(close(*p.e_w(), (PI / 8.0).cos().powi(2)));

        assert!(close(*quantum_params(rad(0.0), rad(0.0)).x(), 1.0));
        assert!(close(*quantum_params(Angle::pi_fraction(1.0, 2.0), rad(0.0)).x(), 0.0));
    }

    #[test]
    fn parses_angle_tokens() {
        let parse = |s: &str| s.parse::<Angle>().unwrap().value();
        assert!(close(parse("pi"), PI));
        assert!(close(parse("pi/2"), PI / 2.0));
        assert!(close(parse("3*pi/4"), 3.0 * PI / 4.0));
        assert!(close(parse("2*pi"), 2.0 * PI));
        assert!(close(parse("-pi/3"), -PI / 3.0));
        assert!(close(parse("0.25"), 0.25));
        assert!("pi/0".parse::<Angle>().is_err());
        assert!("tau".parse::<Angle>().is_err());
        assert!("3pi".parse::<Angle>().is_err());
        assert!("inf".parse::<Angle>().is_err());
    }
}
