//! Binary and binary×binary distributions, and the `(x, e_p, e_w)` view of a joint.
//!
//! Joint entries are always ordered alphanumerically by `(a, b)`: 00, 01, 10, 11.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Position of `(a, b)` in the alphanumeric order.
pub fn joint_index(a: usize, b: usize) -> usize {
    assert!(a < 2 && b < 2, "outcomes are bits");
    2 * a + b
}

/// Names one of the three joint parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    X,
    Ep,
    Ew,
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Param::X => "x",
            Param::Ep => "e_p",
            Param::Ew => "e_w",
        })
    }
}

fn check_normalized<S: Scalar>(values: &[S]) -> Result<()> {
    if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_nonnegative()) {
        return Err(Error::InvalidDistribution(format!(
            "entry {i} is negative ({v:?})"
        )));
    }
    let sum = values.iter().fold(S::zero(), |acc, v| acc + v.clone());
    if !sum.approx_eq(&S::one()) {
        return Err(Error::InvalidDistribution(format!(
            "entries sum to {sum:?}, not 1"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinaryDist<S> {
    p0: S,
    p1: S,
}

impl<S: Scalar> BinaryDist<S> {
    pub fn new(p0: S, p1: S) -> Result<Self> {
        check_normalized(&[p0.clone(), p1.clone()])?;
        Ok(Self { p0, p1 })
    }

    /// `(p0, 1 - p0)`.
    pub fn from_p0(p0: S) -> Result<Self> {
        let p1 = S::one() - p0.clone();
        Self::new(p0, p1)
    }

    pub fn p0(&self) -> &S {
        &self.p0
    }

    pub fn p1(&self) -> &S {
        &self.p1
    }

    pub fn get(&self, outcome: usize) -> &S {
        match outcome {
            0 => &self.p0,
            1 => &self.p1,
            _ => panic!("outcome {outcome} is not a bit"),
        }
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.p0.approx_eq(&other.p0) && self.p1.approx_eq(&other.p1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointDist<S> {
    entries: [S; 4],
}

impl<S: Scalar> JointDist<S> {
    pub fn new(entries: [S; 4]) -> Result<Self> {
        check_normalized(&entries)?;
        Ok(Self { entries })
    }

    pub(crate) fn new_unchecked(entries: [S; 4]) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[S; 4] {
        &self.entries
    }

    pub fn get(&self, a: usize, b: usize) -> &S {
        &self.entries[joint_index(a, b)]
    }

    pub fn marginal_b(&self) -> BinaryDist<S> {
        BinaryDist {
            p0: self.get(0, 0).clone() + self.get(1, 0).clone(),
            p1: self.get(0, 1).clone() + self.get(1, 1).clone(),
        }
    }

    pub fn marginal_a(&self) -> BinaryDist<S> {
        BinaryDist {
            p0: self.get(0, 0).clone() + self.get(0, 1).clone(),
            p1: self.get(1, 0).clone() + self.get(1, 1).clone(),
        }
    }

    /// Bayes' rule: `e(a|b) = e(a,b) / e(b)`.
    pub fn conditional_a_given_b(&self, b: usize) -> Result<BinaryDist<S>> {
        let mass = self.marginal_b().get(b).clone();
        if mass.is_negligible() {
            return Err(Error::ConditionOnNull { b });
        }
        Ok(BinaryDist {
            p0: self.get(0, b).clone() / mass.clone(),
            p1: self.get(1, b).clone() / mass,
        })
    }

    /// Inverse of [`GeneralParams::to_joint`].
    pub fn to_params(&self) -> Result<GeneralParams<S>> {
        let x = self.marginal_b().p0;
        if x.is_negligible() {
            return Err(Error::DegenerateMarginal(Param::Ep));
        }
        let rest = S::one() - x.clone();
        if rest.is_negligible() {
            return Err(Error::DegenerateMarginal(Param::Ew));
        }
        let e_p = self.get(0, 0).clone() / x.clone();
        let e_w = self.get(0, 1).clone() / rest;
        Ok(GeneralParams { x, e_p, e_w })
    }

    /// Half the L1 distance.
    pub fn tv_distance(&self, other: &Self) -> S {
        let l1 = self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(S::zero(), |acc, (p, q)| acc + (p.clone() - q.clone()).abs());
        l1 / (S::one() + S::one())
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.entries
            .iter()
            .zip(&other.entries)
            .all(|(p, q)| p.approx_eq(q))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(p, q)| (p.to_f64() - q.to_f64()).abs())
            .fold(0.0, f64::max)
    }
}

impl JointDist<Rational> {
    pub fn to_real(&self) -> JointDist<f64> {
        JointDist {
            entries: self.entries.clone().map(|q| Scalar::to_f64(&q)),
        }
    }
}

/// `x` is the probability of `b = 0`; `e_p` and `e_w` are the probabilities of
/// `a = 0` under the p-statistics (`b = 0`) and w-statistics (`b = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralParams<S> {
    x: S,
    e_p: S,
    e_w: S,
}

impl<S: Scalar> GeneralParams<S> {
    pub fn new(x: S, e_p: S, e_w: S) -> Result<Self> {
        for (param, value) in [(Param::X, &x), (Param::Ep, &e_p), (Param::Ew, &e_w)] {
            if !value.is_probability() {
                return Err(Error::InvalidParam {
                    param,
                    reason: format!("{value:?} is outside [0, 1]"),
                });
            }
        }
        Ok(Self { x, e_p, e_w })
    }

    pub fn x(&self) -> &S {
        &self.x
    }

    pub fn e_p(&self) -> &S {
        &self.e_p
    }

    pub fn e_w(&self) -> &S {
        &self.e_w
    }

    pub fn get(&self, param: Param) -> &S {
        match param {
            Param::X => &self.x,
            Param::Ep => &self.e_p,
            Param::Ew => &self.e_w,
        }
    }

    /// The p-statistics `(e_p, 1 - e_p)`.
    pub fn p_statistics(&self) -> BinaryDist<S> {
        BinaryDist {
            p0: self.e_p.clone(),
            p1: S::one() - self.e_p.clone(),
        }
    }

    /// The w-statistics `(e_w, 1 - e_w)`.
    pub fn w_statistics(&self) -> BinaryDist<S> {
        BinaryDist {
            p0: self.e_w.clone(),
            p1: S::one() - self.e_w.clone(),
        }
    }

    /// `(x e_p, (1-x) e_w, x (1-e_p), (1-x)(1-e_w))`.
    pub fn to_joint(&self) -> JointDist<S> {
        let one = S::one();
        let x = self.x.clone();
        let y = one.clone() - x.clone();
        JointDist::new_unchecked([
            x.clone() * self.e_p.clone(),
            y.clone() * self.e_w.clone(),
            x * (one.clone() - self.e_p.clone()),
            y * (one - self.e_w.clone()),
        ])
    }

    /// True when no parameter sits at 0 or 1.
    pub fn is_interior(&self) -> bool {
        self.boundary_param().is_none()
    }

    pub fn boundary_param(&self) -> Option<Param> {
        [Param::X, Param::Ep, Param::Ew].into_iter().find(|&p| {
            let v = self.get(p);
            v.is_negligible() || (S::one() - v.clone()).is_negligible()
        })
    }
}

impl GeneralParams<Rational> {
    pub fn to_real(&self) -> GeneralParams<f64> {
        GeneralParams {
            x: Scalar::to_f64(&self.x),
            e_p: Scalar::to_f64(&self.e_p),
            e_w: Scalar::to_f64(&self.e_w),
        }
    }
}
