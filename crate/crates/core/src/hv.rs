//! The hidden-variable constraint system on `p(a, b, λ)`.
//!
//! Adequacy fixes the four sums `p(a,b,p) + p(a,b,w) = e(a,b)`; objectivity adds
//! `p(0,0,p)(1−e_p) = p(1,0,p)·e_p` and `p(0,1,w)(1−e_w) = p(1,1,w)·e_w`.
//! For interior parameters the solutions form a rectangle parameterized by the
//! cross-branch masses `s = p(0,0,w)` and `t = p(0,1,p)`; its corner `(0,0)` is
//! the special solution with perfect `b`–`λ` correlation.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::dist::{joint_index, BinaryDist, GeneralParams};
use crate::error::{Error, Result};
use crate::linsys::LinearSystem;
use crate::scalar::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LambdaLabel {
    #[serde(rename = "p")]
    P,
    #[serde(rename = "w")]
    W,
}

impl LambdaLabel {
    pub const ALL: [LambdaLabel; 2] = [LambdaLabel::P, LambdaLabel::W];

    pub fn index(self) -> usize {
        self as usize
    }

    /// The `b` setting in which this label is revealed.
    pub fn revealing_setting(self) -> usize {
        match self {
            LambdaLabel::P => 0,
            LambdaLabel::W => 1,
        }
    }

    pub fn other(self) -> Self {
        match self {
            LambdaLabel::P => LambdaLabel::W,
            LambdaLabel::W => LambdaLabel::P,
        }
    }
}

impl fmt::Display for LambdaLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LambdaLabel::P => "p",
            LambdaLabel::W => "w",
        })
    }
}

/// Position of `(a, b, λ)`: λ-major, then alphanumeric `ab`.
pub fn cell_index(a: usize, b: usize, lambda: LambdaLabel) -> usize {
    4 * lambda.index() + joint_index(a, b)
}

pub fn cell_name(index: usize) -> String {
    let lambda = LambdaLabel::ALL[index / 4];
    let ab = index % 4;
    format!("{}{}{}", ab / 2, ab % 2, lambda)
}

/// `p(a, b, λ)` ordered `(00p, 01p, 10p, 11p, 00w, 01w, 10w, 11w)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnticTable {
    entries: [Rational; 8],
}

impl OnticTable {
    pub fn new(entries: [Rational; 8]) -> Result<Self> {
        if let Some(i) = entries.iter().position(Signed::is_negative) {
            return Err(Error::InvalidDistribution(format!(
                "cell {} is negative",
                cell_name(i)
            )));
        }
        let total: Rational = entries.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "cells sum to {total}, not 1"
            )));
        }
        Ok(Self { entries })
    }

    pub fn from_slice(values: &[Rational]) -> Result<Self> {
        let entries: [Rational; 8] =
            values
                .to_vec()
                .try_into()
                .map_err(|v: Vec<Rational>| Error::DimensionMismatch {
                    expected: 8,
                    got: v.len(),
                })?;
        Self::new(entries)
    }

    pub fn entries(&self) -> &[Rational; 8] {
        &self.entries
    }

    pub fn get(&self, a: usize, b: usize, lambda: LambdaLabel) -> &Rational {
        &self.entries[cell_index(a, b, lambda)]
    }

    /// `p(b, λ)`.
    pub fn mass(&self, b: usize, lambda: LambdaLabel) -> Rational {
        self.get(0, b, lambda) + self.get(1, b, lambda)
    }

    /// `p(a | b, λ)`, or `None` on a null branch.
    pub fn conditional_a(&self, b: usize, lambda: LambdaLabel) -> Option<BinaryDist<Rational>> {
        let mass = self.mass(b, lambda);
        if mass.is_zero() {
            return None;
        }
        Some(
            BinaryDist::new(self.get(0, b, lambda) / &mass, self.get(1, b, lambda) / &mass)
                .expect("conditional of a valid table"),
        )
    }

    /// `(Σ_ab p(a,b,p), Σ_ab p(a,b,w))`.
    pub fn lambda_marginal(&self) -> BinaryDist<Rational> {
        let p: Rational = self.entries[..4].iter().sum();
        let w: Rational = self.entries[4..].iter().sum();
        BinaryDist::new(p, w).expect("table sums to one")
    }

    /// `Σ_λ p(a, b, λ)` as a joint over `(a, b)`.
    pub fn joint(&self) -> [Rational; 4] {
        std::array::from_fn(|i| &self.entries[i] + &self.entries[4 + i])
    }

    /// Exchanges the `p` and `w` halves.
    pub fn swap_labels(&self) -> Self {
        let mut entries = self.entries.clone();
        entries.rotate_left(4);
        Self { entries }
    }
}

impl Serialize for OnticTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(8))?;
        for (i, v) in self.entries.iter().enumerate() {
            map.serialize_entry(&cell_name(i), &format_rational(v))?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for OnticTable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(deserializer)?;
        let mut values = Vec::with_capacity(8);
        for i in 0..8 {
            let key = cell_name(i);
            let text = raw
                .get(&key)
                .ok_or_else(|| de::Error::custom(format!("missing cell `{key}`")))?;
            values.push(parse_rational(text).map_err(de::Error::custom)?);
        }
        if let Some(extra) = raw.keys().find(|k| !(0..8).any(|i| &cell_name(i) == *k)) {
            return Err(de::Error::custom(format!("unknown cell `{extra}`")));
        }
        OnticTable::from_slice(&values).map_err(de::Error::custom)
    }
}

/// Row labels of [`constraint_system`], in row order.
pub fn constraint_labels() -> Vec<String> {
    let mut labels: Vec<String> = (0..4)
        .map(|i| format!("adequacy p({a},{b},p)+p({a},{b},w)=e({a},{b})", a = i / 2, b = i % 2))
        .collect();
    labels.push("objectivity p(0,0,p)(1-e_p)=p(1,0,p)e_p".into());
    labels.push("objectivity p(0,1,w)(1-e_w)=p(1,1,w)e_w".into());
    labels
}

/// Adequacy rows only, against an arbitrary target joint.
pub fn adequacy_rows(joint: &[Rational; 4], tag: &str) -> LinearSystem {
    let mut matrix = Vec::with_capacity(4);
    let mut labels = Vec::with_capacity(4);
    for (i, target) in joint.iter().enumerate() {
        let mut row = vec![Rational::zero(); 8];
        row[i] = Rational::one();
        row[4 + i] = Rational::one();
        matrix.push(row);
        labels.push(format!(
            "adequacy{tag} p({a},{b},p)+p({a},{b},w)={target}",
            a = i / 2,
            b = i % 2,
            target = format_rational(target)
        ));
    }
    LinearSystem::new(matrix, joint.to_vec(), 8)
        .and_then(|s| s.with_row_labels(labels))
        .expect("4x8 adequacy block")
}

/// The two objectivity rows, multiplied out so `e_p, e_w ∈ {0, 1}` need no division.
pub fn objectivity_rows(e_p: &Rational, e_w: &Rational) -> LinearSystem {
    let one = Rational::one();
    let mut p_row = vec![Rational::zero(); 8];
    p_row[cell_index(0, 0, LambdaLabel::P)] = &one - e_p;
    p_row[cell_index(1, 0, LambdaLabel::P)] = -e_p.clone();
    let mut w_row = vec![Rational::zero(); 8];
    w_row[cell_index(0, 1, LambdaLabel::W)] = &one - e_w;
    w_row[cell_index(1, 1, LambdaLabel::W)] = -e_w.clone();
    LinearSystem::new(vec![p_row, w_row], vec![Rational::zero(), Rational::zero()], 8)
        .and_then(|s| s.with_row_labels(constraint_labels()[4..].to_vec()))
        .expect("2x8 objectivity block")
}

/// The 6×8 system: four adequacy rows then two objectivity rows.
/// Nonnegativity is implicit; normalization follows from adequacy.
pub fn constraint_system(params: &GeneralParams<Rational>) -> LinearSystem {
    let joint = params.to_joint();
    let mut system = adequacy_rows(joint.entries(), "")
        .stack(objectivity_rows(params.e_p(), params.e_w()))
        .expect("both blocks have 8 columns");
    system = system
        .with_row_labels(constraint_labels())
        .expect("six labels");
    system
}

/// Closed rational interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Interval {
    #[serde(with = "crate::scalar::serde_rational")]
    pub lo: Rational,
    #[serde(with = "crate::scalar::serde_rational")]
    pub hi: Rational,
}

impl Interval {
    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }
}

/// Two-parameter solution set for interior parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionFamily {
    params: GeneralParams<Rational>,
    s_range: Interval,
    t_range: Interval,
}

/// Rejects parameters at 0 or 1, where the rank of the system drops.
pub fn solve_family(params: &GeneralParams<Rational>) -> Result<SolutionFamily> {
    if let Some(param) = params.boundary_param() {
        return Err(Error::BoundaryParams(param));
    }
    let x = params.x();
    let y = Rational::one() - x;
    Ok(SolutionFamily {
        params: params.clone(),
        s_range: Interval {
            lo: Rational::zero(),
            hi: x * params.e_p(),
        },
        t_range: Interval {
            lo: Rational::zero(),
            hi: y * params.e_w(),
        },
    })
}

impl SolutionFamily {
    pub fn params(&self) -> &GeneralParams<Rational> {
        &self.params
    }

    pub fn s_range(&self) -> &Interval {
        &self.s_range
    }

    pub fn t_range(&self) -> &Interval {
        &self.t_range
    }

    /// The member with `p(0,0,w) = s` and `p(0,1,p) = t`.
    pub fn instantiate(&self, s: &Rational, t: &Rational) -> Result<OnticTable> {
        if !self.s_range.contains(s) || !self.t_range.contains(t) {
            return Err(Error::OutOfRange {
                s: format_rational(s),
                t: format_rational(t),
            });
        }
        let one = Rational::one();
        let (x, e_p, e_w) = (self.params.x(), self.params.e_p(), self.params.e_w());
        let y = &one - x;
        let ratio_p = (&one - e_p) / e_p;
        let ratio_w = (&one - e_w) / e_w;
        let p_at_b0 = x * e_p - s;
        let w_at_b1 = &y * e_w - t;

        let mut entries: [Rational; 8] = std::array::from_fn(|_| Rational::zero());
        entries[cell_index(0, 0, LambdaLabel::P)] = p_at_b0.clone();
        entries[cell_index(1, 0, LambdaLabel::P)] = &p_at_b0 * &ratio_p;
        entries[cell_index(0, 0, LambdaLabel::W)] = s.clone();
        entries[cell_index(1, 0, LambdaLabel::W)] = s * &ratio_p;
        entries[cell_index(0, 1, LambdaLabel::P)] = t.clone();
        entries[cell_index(1, 1, LambdaLabel::P)] = t * &ratio_w;
        entries[cell_index(0, 1, LambdaLabel::W)] = w_at_b1.clone();
        entries[cell_index(1, 1, LambdaLabel::W)] = &w_at_b1 * &ratio_w;
        OnticTable::new(entries)
    }

    /// The four `(s, t)` corners.
    pub fn corners(&self) -> [(Rational, Rational); 4] {
        let (s, t) = (&self.s_range, &self.t_range);
        [
            (s.lo.clone(), t.lo.clone()),
            (s.hi.clone(), t.lo.clone()),
            (s.lo.clone(), t.hi.clone()),
            (s.hi.clone(), t.hi.clone()),
        ]
    }

    /// Recovers `(s, t)` from a member table.
    pub fn coordinates(table: &OnticTable) -> (Rational, Rational) {
        (
            table.get(0, 0, LambdaLabel::W).clone(),
            table.get(0, 1, LambdaLabel::P).clone(),
        )
    }
}

/// Perfect `b`–`λ` correlation: `p(a,0,p) = x·ē_p(a)`, `p(a,1,w) = (1−x)·ē_w(a)`,
/// cross cells zero. Boundary parameters are allowed.
pub fn special_solution(params: &GeneralParams<Rational>) -> OnticTable {
    let x = params.x();
    let y = Rational::one() - x;
    let ep = params.p_statistics();
    let ew = params.w_statistics();
    let mut entries: [Rational; 8] = std::array::from_fn(|_| Rational::zero());
    for a in 0..2 {
        entries[cell_index(a, 0, LambdaLabel::P)] = x * ep.get(a);
        entries[cell_index(a, 1, LambdaLabel::W)] = &y * ew.get(a);
    }
    OnticTable::new(entries).expect("special solution is normalized")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassificationKind {
    /// No cross-branch mass: `b` and `λ` perfectly correlated.
    Special,
    /// Only `p(b=0, λ=w) > 0`.
    CollapseWAtB0,
    /// Only `p(b=1, λ=p) > 0`.
    CollapsePAtB1,
    CollapseBoth,
}

impl fmt::Display for ClassificationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassificationKind::Special => "Special",
            ClassificationKind::CollapseWAtB0 => "CollapseWAtB0",
            ClassificationKind::CollapsePAtB1 => "CollapsePAtB1",
            ClassificationKind::CollapseBoth => "CollapseBoth",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub kind: ClassificationKind,
    /// Set when `e_p = e_w`, i.e. the two statistics cannot be told apart.
    pub indistinguishable: bool,
}

pub fn classify(table: &OnticTable, params: &GeneralParams<Rational>) -> Result<Classification> {
    let system = constraint_system(params);
    let residual = system.residual(table.entries())?;
    if let Some(i) = residual.iter().position(|r| !r.is_zero()) {
        return Err(Error::NotASolution(format!(
            "{} is off by {}",
            system.row_labels()[i],
            format_rational(&residual[i])
        )));
    }
    let w_at_b0 = !table.mass(0, LambdaLabel::W).is_zero();
    let p_at_b1 = !table.mass(1, LambdaLabel::P).is_zero();
    let kind = match (w_at_b0, p_at_b1) {
        (false, false) => ClassificationKind::Special,
        (true, false) => ClassificationKind::CollapseWAtB0,
        (false, true) => ClassificationKind::CollapsePAtB1,
        (true, true) => ClassificationKind::CollapseBoth,
    };
    Ok(Classification {
        kind,
        indistinguishable: params.e_p() == params.e_w(),
    })
}
