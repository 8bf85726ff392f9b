//! Exact feasibility of hidden-variable models across several settings.
//!
//! [`check_triple`] asks for one table `p(a,b,λ)` shared by every setting
//! (independence), supported on deterministic atoms (determinism) and obeying
//! the two objectivity rows, that reproduces each setting's joint. When two
//! settings have different `x` no such table exists and the report carries a
//! Farkas certificate. The `model_drop_*` constructors build explicit models
//! that keep any two of the three assumptions.

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dist::{joint_index, GeneralParams, JointDist};
use crate::error::{Error, Result};
use crate::hv::{adequacy_rows, objectivity_rows, special_solution, LambdaLabel, OnticTable};
use crate::linsys::{self, LinearSystem, LpOutcome};
use crate::scalar::{format_rational, Rational, Scalar};

/// Default cap on the number of atoms in a [`WitnessModel::DropObjectivity`] model.
pub const DEFAULT_ATOM_BUDGET: u128 = 1 << 16;

/// One value of the freely chosen setting; only its `x` matters downstream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Setting {
    pub label: String,
    #[serde(with = "crate::scalar::serde_rational")]
    pub x: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingsFamily {
    #[serde(with = "crate::scalar::serde_rational")]
    pub e_p: Rational,
    #[serde(with = "crate::scalar::serde_rational")]
    pub e_w: Rational,
    pub settings: Vec<Setting>,
}

impl SettingsFamily {
    pub fn new(e_p: Rational, e_w: Rational, settings: Vec<Setting>) -> Result<Self> {
        let family = Self { e_p, e_w, settings };
        family.validate()?;
        Ok(family)
    }

    /// Settings labelled `alpha1`, `alpha2`, ... in order.
    pub fn from_xs(e_p: Rational, e_w: Rational, xs: &[Rational]) -> Result<Self> {
        let settings = xs
            .iter()
            .enumerate()
            .map(|(i, x)| Setting {
                label: format!("alpha{}", i + 1),
                x: x.clone(),
            })
            .collect();
        Self::new(e_p, e_w, settings)
    }

    /// Parses the JSON form; errors name the offending field.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let family: SettingsFamily = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::InvalidFamily(format!("{path}: {}", e.inner()))
        })?;
        family.validate()?;
        Ok(family)
    }

    pub fn validate(&self) -> Result<()> {
        let check = |field: String, v: &Rational| {
            if v.is_probability() {
                Ok(())
            } else {
                Err(Error::InvalidFamily(format!(
                    "{field}: {} is outside [0, 1]",
                    format_rational(v)
                )))
            }
        };
        check("e_p".into(), &self.e_p)?;
        check("e_w".into(), &self.e_w)?;
        if self.settings.is_empty() {
            return Err(Error::InvalidFamily("settings: list is empty".into()));
        }
        let mut seen = HashSet::new();
        for (i, s) in self.settings.iter().enumerate() {
            check(format!("settings[{i}].x"), &s.x)?;
            if !seen.insert(s.label.as_str()) {
                return Err(Error::InvalidFamily(format!(
                    "settings[{i}].label: duplicate label {:?}",
                    s.label
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.settings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.settings.is_empty()
    }

    pub fn params(&self, index: usize) -> GeneralParams<Rational> {
        GeneralParams::new(
            self.settings[index].x.clone(),
            self.e_p.clone(),
            self.e_w.clone(),
        )
        .expect("validated family")
    }

    pub fn joint(&self, index: usize) -> JointDist<Rational> {
        self.params(index).to_joint()
    }

    /// A copy with one more setting appended.
    pub fn with_setting(&self, setting: Setting) -> Result<Self> {
        let mut settings = self.settings.clone();
        settings.push(setting);
        Self::new(self.e_p.clone(), self.e_w.clone(), settings)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    Point(#[serde(with = "crate::scalar::serde_rational::vec")] Vec<Rational>),
    Table(OnticTable),
}

impl Witness {
    pub fn values(&self) -> &[Rational] {
        match self {
            Witness::Point(v) => v,
            Witness::Table(t) => t.entries(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub witness: Option<Witness>,
    #[serde(serialize_with = "serialize_opt_vec")]
    pub certificate: Option<Vec<Rational>>,
    /// Row labels, aligned with `certificate`.
    pub constraints: Vec<String>,
    pub narrative: String,
}

fn serialize_opt_vec<S: serde::Serializer>(
    value: &Option<Vec<Rational>>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(v) => crate::scalar::serde_rational::vec::serialize(v, serializer),
        None => serializer.serialize_none(),
    }
}

fn active_rows(system: &LinearSystem, y: &[Rational]) -> Vec<String> {
    system
        .row_labels()
        .iter()
        .zip(y)
        .filter(|(_, v)| !v.is_zero())
        .map(|(label, v)| format!("{} × [{}]", format_rational(v), label))
        .collect()
}

/// Runs the exact simplex and packages the result.
pub fn lp_feasible(system: &LinearSystem) -> FeasibilityReport {
    let constraints = system.row_labels().to_vec();
    match linsys::solve_feasibility(system) {
        LpOutcome::Feasible(point) => {
            debug_assert!(system.is_solution(&point));
            FeasibilityReport {
                feasible: true,
                witness: Some(Witness::Point(point)),
                certificate: None,
                constraints,
                narrative: format!(
                    "feasible: a nonnegative point satisfies all {} rows exactly",
                    system.rows()
                ),
            }
        }
        LpOutcome::Infeasible(y) => {
            debug_assert_eq!(linsys::verify_certificate(system, &y), Ok(true));
            let narrative = format!(
                "infeasible: the certificate combines {}",
                active_rows(system, &y).join(", ")
            );
            FeasibilityReport {
                feasible: false,
                witness: None,
                certificate: Some(y),
                constraints,
                narrative,
            }
        }
    }
}

pub fn verify_certificate(system: &LinearSystem, y: &[Rational]) -> Result<bool> {
    linsys::verify_certificate(system, y)
}

/// One shared table for all settings: two objectivity rows, then four
/// adequacy rows per setting.
pub fn triple_system(family: &SettingsFamily) -> LinearSystem {
    let mut system = objectivity_rows(&family.e_p, &family.e_w);
    for (i, setting) in family.settings.iter().enumerate() {
        let rows = adequacy_rows(family.joint(i).entries(), &format!("[{}]", setting.label));
        system = system.stack(rows).expect("8 columns throughout");
    }
    system
}

/// Determinism, independence and objectivity together.
pub fn check_triple(family: &SettingsFamily) -> FeasibilityReport {
    let system = triple_system(family);
    let mut report = lp_feasible(&system);

    if report.feasible {
        // The special solution is the objectivity-preserving witness; fall back to
        // the simplex vertex only if it somehow fails the shared system.
        let special = special_solution(&family.params(0));
        let witness = if system.is_solution(special.entries()) {
            special
        } else {
            let point = report.witness.as_ref().expect("feasible").values();
            OnticTable::from_slice(point).expect("adequacy rows force normalization")
        };
        report.narrative = format!(
            "feasible: every setting has x = {}; one shared table reproduces all {} settings \
             with the lambda-marginal ({}, {})",
            format_rational(&family.settings[0].x),
            family.len(),
            format_rational(witness.lambda_marginal().p0()),
            format_rational(witness.lambda_marginal().p1()),
        );
        report.witness = Some(Witness::Table(witness));
        return report;
    }

    let y = report.certificate.as_ref().expect("infeasible");
    let first = &family.settings[0];
    let clash = family
        .settings
        .iter()
        .find(|s| s.x != first.x)
        .map(|s| {
            format!(
                "the b-marginal (and with it the shared lambda-marginal) must equal both \
                 x = {} ({}) and x = {} ({})",
                format_rational(&first.x),
                first.label,
                format_rational(&s.x),
                s.label
            )
        })
        .unwrap_or_else(|| "the settings' joints conflict".into());
    let objectivity_used = y[..2].iter().any(|v| !v.is_zero());
    report.narrative = format!(
        "infeasible: {clash}. Certificate rows: {}. Objectivity rows {}.",
        active_rows(&system, y).join(", "),
        if objectivity_used {
            "carry nonzero weight"
        } else {
            "carry zero weight; the clash is between adequacy rows of different settings"
        }
    );
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DropMode {
    DropIndependence,
    DropObjectivity,
    DropDeterminism,
}

impl fmt::Display for DropMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DropMode::DropIndependence => "DropIndependence",
            DropMode::DropObjectivity => "DropObjectivity",
            DropMode::DropDeterminism => "DropDeterminism",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabeledTable {
    pub label: String,
    pub table: OnticTable,
}

/// A hidden state whose outcome pair `(a, b)` is fixed for each setting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeterministicAtom {
    #[serde(with = "crate::scalar::serde_rational")]
    pub weight: Rational,
    /// `(a, b)` for each setting, in family order.
    pub outcomes: Vec<[u8; 2]>,
}

/// A labelled hidden state with stochastic responses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StochasticAtom {
    pub lambda: LambdaLabel,
    #[serde(with = "crate::scalar::serde_rational")]
    pub weight: Rational,
    /// `p(a, b | atom)` per setting, entries in `ab` order.
    #[serde(serialize_with = "serialize_responses")]
    pub responses: Vec<[Rational; 4]>,
}

fn serialize_responses<S: serde::Serializer>(
    value: &[[Rational; 4]],
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = serializer.serialize_seq(Some(value.len()))?;
    for r in value {
        let text: Vec<String> = r.iter().map(format_rational).collect();
        seq.serialize_element(&text)?;
    }
    seq.end()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "mode", content = "payload")]
pub enum WitnessModel {
    /// Per-setting special solutions; the λ-distribution follows the setting.
    DropIndependence { tables: Vec<LabeledTable> },
    /// Product-measure atoms with setting-indexed deterministic outcomes; no labels.
    DropObjectivity { atoms: Vec<DeterministicAtom> },
    /// Two labelled atoms with fixed weights and stochastic responses.
    DropDeterminism { atoms: Vec<StochasticAtom> },
}

impl WitnessModel {
    pub fn mode(&self) -> DropMode {
        match self {
            WitnessModel::DropIndependence { .. } => DropMode::DropIndependence,
            WitnessModel::DropObjectivity { .. } => DropMode::DropObjectivity,
            WitnessModel::DropDeterminism { .. } => DropMode::DropDeterminism,
        }
    }
}

pub fn model_drop_independence(family: &SettingsFamily) -> WitnessModel {
    let tables = family
        .settings
        .iter()
        .enumerate()
        .map(|(i, s)| LabeledTable {
            label: s.label.clone(),
            table: special_solution(&family.params(i)),
        })
        .collect();
    WitnessModel::DropIndependence { tables }
}

pub fn atom_count(settings: usize) -> u128 {
    u32::try_from(settings)
        .ok()
        .and_then(|k| 4u128.checked_pow(k))
        .unwrap_or(u128::MAX)
}

/// All `4^k` outcome tuples weighted by the product of the settings' joints.
pub fn model_drop_objectivity(family: &SettingsFamily, atom_budget: u128) -> Result<WitnessModel> {
    let k = family.len();
    let atoms_needed = atom_count(k);
    if atoms_needed > atom_budget {
        return Err(Error::TooManySettings {
            settings: k,
            atoms: atoms_needed,
            budget: atom_budget,
        });
    }
    let joints: Vec<JointDist<Rational>> = (0..k).map(|i| family.joint(i)).collect();
    let atoms = (0..atoms_needed as usize)
        .map(|code| {
            // Setting 0 is the most significant base-4 digit.
            let outcomes: Vec<[u8; 2]> = (0..k)
                .map(|i| {
                    let digit = (code >> (2 * (k - 1 - i))) & 3;
                    [(digit / 2) as u8, (digit % 2) as u8]
                })
                .collect();
            let weight = outcomes
                .iter()
                .zip(&joints)
                .fold(Rational::one(), |acc, (ab, joint)| {
                    acc * joint.get(ab[0] as usize, ab[1] as usize)
                });
            DeterministicAtom { weight, outcomes }
        })
        .collect();
    Ok(WitnessModel::DropObjectivity { atoms })
}

/// Atoms `Λ_p`, `Λ_w` with weights `(1/2, 1/2)`, both responding with the
/// setting's observed joint.
pub fn model_drop_determinism(family: &SettingsFamily) -> WitnessModel {
    let responses: Vec<[Rational; 4]> = (0..family.len())
        .map(|i| family.joint(i).entries().clone())
        .collect();
    let half = Rational::new(1.into(), 2.into());
    let atoms = LambdaLabel::ALL
        .iter()
        .map(|&lambda| StochasticAtom {
            lambda,
            weight: half.clone(),
            responses: responses.clone(),
        })
        .collect();
    WitnessModel::DropDeterminism { atoms }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Assumption {
    Adequacy,
    Determinism,
    Independence,
    Objectivity,
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Assumption::Adequacy => "adequacy",
            Assumption::Determinism => "determinism",
            Assumption::Independence => "independence",
            Assumption::Objectivity => "objectivity",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionCheck {
    pub assumption: Assumption,
    /// Whether the model's mode keeps this assumption.
    pub retained: bool,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub mode: DropMode,
    pub checks: Vec<AssumptionCheck>,
}

impl ValidationReport {
    /// Adequacy and every retained assumption hold.
    pub fn retained_pass(&self) -> bool {
        self.checks.iter().filter(|c| c.retained).all(|c| c.passed)
    }

    pub fn check(&self, assumption: Assumption) -> &AssumptionCheck {
        self.checks
            .iter()
            .find(|c| c.assumption == assumption)
            .expect("every assumption is reported")
    }
}

fn check(assumption: Assumption, retained: bool, outcome: std::result::Result<String, String>) -> AssumptionCheck {
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    AssumptionCheck {
        assumption,
        retained,
        passed,
        detail,
    }
}

/// Objectivity on one table: both product rows hold, and whenever setting `b`
/// occurs the label it reveals carries mass there (otherwise the row holds
/// only vacuously).
pub fn objectivity_violation(table: &OnticTable, e_p: &Rational, e_w: &Rational) -> Option<String> {
    let rows = objectivity_rows(e_p, e_w);
    let residual = rows.residual(table.entries()).expect("8 columns");
    for ((label, r), lambda) in rows.row_labels().iter().zip(&residual).zip(LambdaLabel::ALL) {
        if !r.is_zero() {
            return Some(format!("{label} violated (residual {})", format_rational(r)));
        }
        let b = lambda.revealing_setting();
        let occurs = table.mass(b, LambdaLabel::P) + table.mass(b, LambdaLabel::W);
        if !occurs.is_zero() && table.mass(b, lambda).is_zero() {
            return Some(format!(
                "{label} holds only vacuously: p(b={b}) = {} but p(b={b}, lambda={lambda}) = 0",
                format_rational(&occurs)
            ));
        }
    }
    None
}

fn first_joint_mismatch(got: &[Rational; 4], want: &JointDist<Rational>, label: &str) -> Option<String> {
    (0..4).find(|&i| got[i] != want.entries()[i]).map(|i| {
        format!(
            "setting {label}: e({},{}) is {} but the model gives {}",
            i / 2,
            i % 2,
            format_rational(&want.entries()[i]),
            format_rational(&got[i])
        )
    })
}

fn adequacy_outcome(mismatch: Option<String>, k: usize) -> std::result::Result<String, String> {
    match mismatch {
        None => Ok(format!("all {k} settings reproduced exactly")),
        Some(m) => Err(m),
    }
}

fn is_distribution(values: &[Rational]) -> bool {
    values.iter().all(|v| !v.is_negative()) && values.iter().sum::<Rational>().is_one()
}

/// Audits a witness in exact arithmetic: adequacy per setting, then the two
/// assumptions the mode keeps. The dropped assumption is also reported.
pub fn validate_witness(model: &WitnessModel, family: &SettingsFamily) -> Result<ValidationReport> {
    let k = family.len();
    let mode = model.mode();
    let checks = match model {
        WitnessModel::DropIndependence { tables } => {
            if tables.len() != k {
                return Err(Error::MalformedModel(format!(
                    "{} tables for {k} settings",
                    tables.len()
                )));
            }
            for (t, s) in tables.iter().zip(&family.settings) {
                if t.label != s.label {
                    return Err(Error::MalformedModel(format!(
                        "table labelled {:?} where setting {:?} was expected",
                        t.label, s.label
                    )));
                }
            }
            let mismatch = tables
                .iter()
                .enumerate()
                .find_map(|(i, t)| first_joint_mismatch(&t.table.joint(), &family.joint(i), &t.label));
            let objectivity = tables.iter().find_map(|t| {
                objectivity_violation(&t.table, &family.e_p, &family.e_w)
                    .map(|v| format!("setting {}: {v}", t.label))
            });
            let first = &tables[0].table;
            let independence = match tables.iter().find(|t| t.table != *first) {
                None => Ok("one table serves every setting".to_string()),
                Some(t) => {
                    let (m0, m1) = (first.lambda_marginal(), t.table.lambda_marginal());
                    Err(format!(
                        "the hidden-variable distribution follows the setting: lambda-marginal \
                         ({}, {}) at {} vs ({}, {}) at {}",
                        format_rational(m0.p0()),
                        format_rational(m0.p1()),
                        tables[0].label,
                        format_rational(m1.p0()),
                        format_rational(m1.p1()),
                        t.label
                    ))
                }
            };
            vec![
                check(Assumption::Adequacy, true, adequacy_outcome(mismatch, k)),
                check(
                    Assumption::Determinism,
                    true,
                    Ok("each table weights deterministic (a, b, lambda) atoms".into()),
                ),
                check(Assumption::Independence, false, independence),
                check(
                    Assumption::Objectivity,
                    true,
                    objectivity.map_or(Ok("both objectivity rows hold with nonvacuous support".into()), Err),
                ),
            ]
        }
        WitnessModel::DropObjectivity { atoms } => {
            for (n, atom) in atoms.iter().enumerate() {
                if atom.outcomes.len() != k {
                    return Err(Error::MalformedModel(format!(
                        "atom {n} fixes {} outcomes for {k} settings",
                        atom.outcomes.len()
                    )));
                }
                if atom.outcomes.iter().flatten().any(|&bit| bit > 1) {
                    return Err(Error::MalformedModel(format!("atom {n} has a non-binary outcome")));
                }
                if atom.weight.is_negative() {
                    return Err(Error::MalformedModel(format!("atom {n} has negative weight")));
                }
            }
            let mismatch = family.settings.iter().enumerate().find_map(|(i, s)| {
                let mut got: [Rational; 4] = std::array::from_fn(|_| Rational::zero());
                for atom in atoms {
                    let [a, b] = atom.outcomes[i];
                    got[joint_index(a as usize, b as usize)] += &atom.weight;
                }
                first_joint_mismatch(&got, &family.joint(i), &s.label)
            });
            let weights: Vec<Rational> = atoms.iter().map(|a| a.weight.clone()).collect();
            let independence = if is_distribution(&weights) {
                Ok(format!("one weight vector over {} atoms for every setting", atoms.len()))
            } else {
                Err("atom weights do not form a distribution".into())
            };
            vec![
                check(Assumption::Adequacy, true, adequacy_outcome(mismatch, k)),
                check(
                    Assumption::Determinism,
                    true,
                    Ok("every atom fixes (a, b) for each setting".into()),
                ),
                check(Assumption::Independence, true, independence),
                check(
                    Assumption::Objectivity,
                    false,
                    Err("atoms carry no lambda label".into()),
                ),
            ]
        }
        WitnessModel::DropDeterminism { atoms } => {
            for (n, atom) in atoms.iter().enumerate() {
                if atom.responses.len() != k {
                    return Err(Error::MalformedModel(format!(
                        "atom {n} has {} responses for {k} settings",
                        atom.responses.len()
                    )));
                }
                if let Some(i) = atom.responses.iter().position(|r| !is_distribution(r)) {
                    return Err(Error::MalformedModel(format!(
                        "atom {n} response for setting {i} is not a distribution"
                    )));
                }
                if atom.weight.is_negative() {
                    return Err(Error::MalformedModel(format!("atom {n} has negative weight")));
                }
            }
            // Aggregate to p_i(a, b, λ) per setting.
            let tables: Vec<[Rational; 8]> = (0..k)
                .map(|i| {
                    let mut cells: [Rational; 8] = std::array::from_fn(|_| Rational::zero());
                    for atom in atoms {
                        for (ab, r) in atom.responses[i].iter().enumerate() {
                            cells[4 * atom.lambda.index() + ab] += &atom.weight * r;
                        }
                    }
                    cells
                })
                .collect();
            let mismatch = family.settings.iter().enumerate().find_map(|(i, s)| {
                let got: [Rational; 4] = std::array::from_fn(|ab| &tables[i][ab] + &tables[i][4 + ab]);
                first_joint_mismatch(&got, &family.joint(i), &s.label)
            });
            let weights: Vec<Rational> = atoms.iter().map(|a| a.weight.clone()).collect();
            let independence = if is_distribution(&weights) {
                Ok(format!("fixed weights over {} atoms for every setting", atoms.len()))
            } else {
                Err("atom weights do not form a distribution".into())
            };
            let objectivity = family.settings.iter().zip(&tables).find_map(|(s, cells)| {
                match OnticTable::new(cells.clone()) {
                    Ok(t) => objectivity_violation(&t, &family.e_p, &family.e_w),
                    Err(e) => Some(e.to_string()),
                }
                .map(|v| format!("setting {}: {v}", s.label))
            });
            let random = atoms.iter().find_map(|atom| {
                atom.responses.iter().enumerate().find_map(|(i, r)| {
                    r.iter()
                        .position(|v| !v.is_zero() && !v.is_one())
                        .map(|ab| (atom.lambda, i, ab, r[ab].clone()))
                })
            });
            let determinism = match random {
                None => Ok("all responses are 0 or 1".to_string()),
                Some((lambda, i, ab, v)) => Err(format!(
                    "atom lambda={lambda} answers ({},{}) with probability {} in setting {}",
                    ab / 2,
                    ab % 2,
                    format_rational(&v),
                    family.settings[i].label
                )),
            };
            vec![
                check(Assumption::Adequacy, true, adequacy_outcome(mismatch, k)),
                check(Assumption::Determinism, false, determinism),
                check(Assumption::Independence, true, independence),
                check(
                    Assumption::Objectivity,
                    true,
                    objectivity.map_or(Ok("both objectivity rows hold with nonvacuous support".into()), Err),
                ),
            ]
        }
    };
    Ok(ValidationReport { mode, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{one, rational as q, zero};

    fn family(xs: &[Rational]) -> SettingsFamily {
        SettingsFamily::from_xs(q(1, 2), q(1, 4), xs).unwrap()
    }

    #[test]
    fn lp_examples() {
        let s = LinearSystem::new(vec![vec![one(), one()]], vec![one()], 2).unwrap();
        let r = lp_feasible(&s);
        assert!(r.feasible);
        assert!(s.is_solution(r.witness.unwrap().values()));

        let s = LinearSystem::new(vec![vec![one()], vec![one()]], vec![q(1, 3), q(2, 3)], 1).unwrap();
        let r = lp_feasible(&s);
        assert!(!r.feasible);
        assert!(verify_certificate(&s, r.certificate.as_ref().unwrap()).unwrap());

        let params = GeneralParams::new(q(1, 3), q(1, 2), q(1, 4)).unwrap();
        assert!(lp_feasible(&crate::hv::constraint_system(&params)).feasible);
    }

    #[test]
    fn triple_two_settings_is_infeasible() {
        let f = family(&[q(1, 3), q(2, 3)]);
        let r = check_triple(&f);
        assert!(!r.feasible);
        let y = r.certificate.as_ref().unwrap();
        assert!(verify_certificate(&triple_system(&f), y).unwrap());
        assert!(r.narrative.contains("x = 1/3 (alpha1) and x = 2/3 (alpha2)"));
    }

    #[test]
    fn triple_single_setting_gives_special_solution() {
        let f = family(&[q(1, 3)]);
        let r = check_triple(&f);
        assert!(r.feasible);
        assert_eq!(
            r.witness,
            Some(Witness::Table(special_solution(&f.params(0))))
        );
    }

    #[test]
    fn triple_equal_settings_are_feasible() {
        let f = family(&[q(1, 2), q(1, 2)]);
        assert!(check_triple(&f).feasible);
    }

    #[test]
    fn drop_independence_example() {
        let f = family(&[q(1, 3), q(2, 3)]);
        let m = model_drop_independence(&f);
        let WitnessModel::DropIndependence { tables } = &m else { unreachable!() };
        assert_eq!(tables[0].table.lambda_marginal().p0(), &q(1, 3));
        assert_eq!(tables[1].table.lambda_marginal().p0(), &q(2, 3));
        let report = validate_witness(&m, &f).unwrap();
        assert!(report.retained_pass());
        assert!(!report.check(Assumption::Independence).passed);

        let single = family(&[q(1, 3)]);
        let WitnessModel::DropIndependence { tables } = model_drop_independence(&single) else {
            unreachable!()
        };
        assert_eq!(tables[0].table, special_solution(&single.params(0)));
    }

    #[test]
    fn drop_objectivity_example() {
        let single = family(&[q(1, 3)]);
        let WitnessModel::DropObjectivity { atoms } =
            model_drop_objectivity(&single, DEFAULT_ATOM_BUDGET).unwrap()
        else {
            unreachable!()
        };
        let weights: Vec<_> = atoms.iter().map(|a| a.weight.clone()).collect();
        assert_eq!(weights, vec![q(1, 6), q(1, 6), q(1, 6), q(1, 2)]);

        let f = family(&[q(1, 3), q(2, 3)]);
        let m = model_drop_objectivity(&f, DEFAULT_ATOM_BUDGET).unwrap();
        let WitnessModel::DropObjectivity { atoms } = &m else { unreachable!() };
        assert_eq!(atoms.len(), 16);
        let atom = atoms.iter().find(|a| a.outcomes == vec![[0, 0], [0, 1]]).unwrap();
        // e_{1/3}(0,0) · e_{2/3}(0,1) = 1/6 · 1/12
        assert_eq!(atom.weight, q(1, 72));
        let report = validate_witness(&m, &f).unwrap();
        assert!(report.retained_pass());
        assert!(!report.check(Assumption::Objectivity).passed);
    }

    #[test]
    fn drop_objectivity_respects_budget() {
        let f = family(&[q(1, 3), q(2, 3), q(1, 2)]);
        assert!(matches!(
            model_drop_objectivity(&f, 16),
            Err(Error::TooManySettings { settings: 3, atoms: 64, budget: 16 })
        ));
        assert!(model_drop_objectivity(&f, 64).is_ok());
    }

    #[test]
    fn drop_determinism_example() {
        let f = family(&[q(1, 3), q(2, 3)]);
        let m = model_drop_determinism(&f);
        let report = validate_witness(&m, &f).unwrap();
        assert!(report.check(Assumption::Adequacy).passed);
        assert!(report.check(Assumption::Objectivity).passed);
        assert!(report.check(Assumption::Independence).passed);
        assert!(!report.check(Assumption::Determinism).passed);
        assert!(report.retained_pass());
    }

    #[test]
    fn swapped_labels_fail_objectivity() {
        let f = family(&[q(1, 3), q(2, 3)]);
        let WitnessModel::DropIndependence { tables } = model_drop_independence(&f) else {
            unreachable!()
        };
        let swapped = WitnessModel::DropIndependence {
            tables: tables
                .into_iter()
                .map(|t| LabeledTable {
                    label: t.label,
                    table: t.table.swap_labels(),
                })
                .collect(),
        };
        let report = validate_witness(&swapped, &f).unwrap();
        let obj = report.check(Assumption::Objectivity);
        assert!(!obj.passed);
        assert!(obj.detail.contains("p(0,0,p)(1-e_p)=p(1,0,p)e_p"), "{}", obj.detail);
        assert!(report.check(Assumption::Adequacy).passed);
    }

    #[test]
    fn skewed_table_fails_objectivity_row() {
        let f = family(&[q(1, 3)]);
        // Adequate but p(a|b=0,p) = (1, 0) instead of (1/2, 1/2).
        let t = OnticTable::new([
            q(1, 6), zero(), zero(), zero(),
            zero(), q(1, 6), q(1, 6), q(1, 2),
        ])
        .unwrap();
        let m = WitnessModel::DropIndependence {
            tables: vec![LabeledTable { label: "alpha1".into(), table: t }],
        };
        let report = validate_witness(&m, &f).unwrap();
        assert!(report.check(Assumption::Adequacy).passed);
        assert!(report.check(Assumption::Objectivity).detail.contains("violated"));
    }

    #[test]
    fn zeroed_weights_fail_adequacy() {
        let f = family(&[q(1, 3), q(2, 3)]);
        let WitnessModel::DropDeterminism { mut atoms } = model_drop_determinism(&f) else {
            unreachable!()
        };
        for a in &mut atoms {
            a.weight = zero();
        }
        let report = validate_witness(&WitnessModel::DropDeterminism { atoms }, &f).unwrap();
        assert!(!report.check(Assumption::Adequacy).passed);
        assert!(!report.retained_pass());

        let WitnessModel::DropObjectivity { mut atoms } =
            model_drop_objectivity(&f, DEFAULT_ATOM_BUDGET).unwrap()
        else {
            unreachable!()
        };
        for a in &mut atoms {
            a.weight = zero();
        }
        let report = validate_witness(&WitnessModel::DropObjectivity { atoms }, &f).unwrap();
        assert!(!report.check(Assumption::Adequacy).passed);
    }

    #[test]
    fn malformed_models_are_rejected() {
        let f = family(&[q(1, 3), q(2, 3)]);
        let m = model_drop_independence(&family(&[q(1, 3)]));
        assert!(matches!(validate_witness(&m, &f), Err(Error::MalformedModel(_))));
        let m = WitnessModel::DropObjectivity {
            atoms: vec![DeterministicAtom { weight: one(), outcomes: vec![[0, 2], [0, 0]] }],
        };
        assert!(matches!(validate_witness(&m, &f), Err(Error::MalformedModel(_))));
    }

    #[test]
    fn family_json_round_trip_and_errors() {
        let text = r#"{"e_p": "1/2", "e_w": "1/4", "settings": [{"label": "alpha1", "x": "1/3"}, {"label": "alpha2", "x": "2/3"}]}"#;
        let f = SettingsFamily::from_json(text).unwrap();
        assert_eq!(f, family(&[q(1, 3), q(2, 3)]));
        let again = SettingsFamily::from_json(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(again, f);

        let bad_x = text.replace("\"2/3\"", "\"4/3\"");
        let err = SettingsFamily::from_json(&bad_x).unwrap_err().to_string();
        assert!(err.contains("settings[1].x"), "{err}");
        let bad_literal = text.replace("\"1/4\"", "\"0.25\"");
        let err = SettingsFamily::from_json(&bad_literal).unwrap_err().to_string();
        assert!(err.contains("e_w"), "{err}");
        let dup = text.replace("alpha2", "alpha1");
        assert!(SettingsFamily::from_json(&dup).unwrap_err().to_string().contains("duplicate"));
        let missing = r#"{"e_p": "1/2", "settings": []}"#;
        assert!(SettingsFamily::from_json(missing).unwrap_err().to_string().contains("e_w"));
    }
}
