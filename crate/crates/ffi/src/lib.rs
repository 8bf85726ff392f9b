//! C ABI over `hvnogo`.
//!
//! Every fallible function returns an [`HvStatus`]; on failure the message is
//! kept per thread and can be fetched with [`hv_last_error_message`]. Strings
//! handed out by this library must be released with [`hv_string_free`], and
//! each handle with its own `*_free` function. Rationals cross the boundary as
//! `"p/q"` strings, reals as `double`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hvnogo::feasibility::{
    check_triple, model_drop_determinism, model_drop_independence, model_drop_objectivity,
    validate_witness, FeasibilityReport, Setting, SettingsFamily, DEFAULT_ATOM_BUDGET,
};
use hvnogo::montecarlo::sample_events;
use hvnogo::quantum::{quantum_joint, quantum_params, Angle};
use hvnogo::scalar::{parse_rational, Rational};
use hvnogo::{Error, JointDist};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    MalformedInput = 4,
    BudgetExceeded = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HvDropMode {
    Independence = 0,
    Objectivity = 1,
    Determinism = 2,
}

/// A settings family under construction: `e_p`, `e_w` and zero or more settings.
pub struct HvFamily {
    e_p: Rational,
    e_w: Rational,
    settings: Vec<Setting>,
}

/// Result of a triple check.
pub struct HvReport {
    report: FeasibilityReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

struct Fail(HvStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidFamily(_) | Error::Parse { .. } => HvStatus::MalformedInput,
            Error::TooManySettings { .. } => HvStatus::BudgetExceeded,
            _ => HvStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

/// Runs `body`, translating failures and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Fail>) -> HvStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => HvStatus::Ok,
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            HvStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(HvStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(HvStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn rational_arg(p: *const c_char, what: &str) -> Result<Rational, Fail> {
    parse_rational(text(p, what)?).map_err(|e| Fail(HvStatus::InvalidArgument, format!("{what}: {e}")))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON contains no NUL").into_raw()
}

unsafe fn family_ref<'a>(family: *const HvFamily) -> Result<&'a HvFamily, Fail> {
    family.as_ref().ok_or_else(|| null("family"))
}

impl HvFamily {
    fn build(&self) -> Result<SettingsFamily, Fail> {
        Ok(SettingsFamily::new(
            self.e_p.clone(),
            self.e_w.clone(),
            self.settings.clone(),
        )?)
    }
}

fn angle(value: f64, what: &str) -> Result<Angle, Fail> {
    Angle::radians(value).map_err(|e| Fail(HvStatus::InvalidArgument, format!("{what}: {e}")))
}

/// The most recent error on this thread, or NULL. Free with [`hv_string_free`].
#[no_mangle]
pub extern "C" fn hv_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |s| s.clone().into_raw()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn hv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates an empty family; add settings with [`hv_family_add_setting`].
///
/// # Safety
/// `e_p` and `e_w` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hv_family_new(
    e_p: *const c_char,
    e_w: *const c_char,
    out: *mut *mut HvFamily,
) -> HvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let family = HvFamily {
            e_p: rational_arg(e_p, "e_p")?,
            e_w: rational_arg(e_w, "e_w")?,
            settings: Vec::new(),
        };
        // Validates the ranges of e_p and e_w.
        let probe = Setting {
            label: String::new(),
            x: Rational::default(),
        };
        SettingsFamily::new(family.e_p.clone(), family.e_w.clone(), vec![probe])?;
        *out = Box::into_raw(Box::new(family));
        Ok(())
    })
}

/// Parses the JSON form `{"e_p": .., "e_w": .., "settings": [{"label": .., "x": ..}]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hv_family_from_json(json: *const c_char, out: *mut *mut HvFamily) -> HvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let family = SettingsFamily::from_json(text(json, "json")?)?;
        *out = Box::into_raw(Box::new(HvFamily {
            e_p: family.e_p,
            e_w: family.e_w,
            settings: family.settings,
        }));
        Ok(())
    })
}

/// Appends a setting. Labels must be unique and `x` must lie in `[0, 1]`.
///
/// # Safety
/// `family` must be a live handle; `label` and `x` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn hv_family_add_setting(
    family: *mut HvFamily,
    label: *const c_char,
    x: *const c_char,
) -> HvStatus {
    guard(|| {
        let family = family.as_mut().ok_or_else(|| null("family"))?;
        let setting = Setting {
            label: text(label, "label")?.to_string(),
            x: rational_arg(x, "x")?,
        };
        let mut settings = family.settings.clone();
        settings.push(setting);
        SettingsFamily::new(family.e_p.clone(), family.e_w.clone(), settings.clone())?;
        family.settings = settings;
        Ok(())
    })
}

/// Number of settings, or 0 for NULL.
///
/// # Safety
/// `family` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hv_family_len(family: *const HvFamily) -> usize {
    family.as_ref().map_or(0, |f| f.settings.len())
}

/// # Safety
/// `family` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hv_family_free(family: *mut HvFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Decides whether one deterministic, setting-independent, objective table
/// reproduces every setting. Infeasibility is a result, not an error.
///
/// # Safety
/// `family` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hv_check_triple(family: *const HvFamily, out: *mut *mut HvReport) -> HvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let family = family_ref(family)?.build()?;
        *out = Box::into_raw(Box::new(HvReport {
            report: check_triple(&family),
        }));
        Ok(())
    })
}

/// 1 if feasible, 0 if infeasible, -1 for NULL.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hv_report_is_feasible(report: *const HvReport) -> i32 {
    report.as_ref().map_or(-1, |r| i32::from(r.report.feasible))
}

/// The report as JSON. Free the string with [`hv_string_free`].
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hv_report_to_json(report: *const HvReport, out: *mut *mut c_char) -> HvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let report = report.as_ref().ok_or_else(|| null("report"))?;
        *out = to_c_string(serde_json::to_string(&report.report).expect("report serializes"));
        Ok(())
    })
}

/// # Safety
/// `report` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hv_report_free(report: *mut HvReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Builds the model that drops one assumption and validates it, as JSON
/// `{"model": .., "validation": ..}`. `atom_budget` caps the objectivity-free
/// model; 0 selects the default.
///
/// # Safety
/// `family` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hv_witness_json(
    family: *const HvFamily,
    mode: HvDropMode,
    atom_budget: u64,
    out: *mut *mut c_char,
) -> HvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let family = family_ref(family)?.build()?;
        let budget = if atom_budget == 0 {
            DEFAULT_ATOM_BUDGET
        } else {
            u128::from(atom_budget)
        };
        let model = match mode {
            HvDropMode::Independence => model_drop_independence(&family),
            HvDropMode::Objectivity => model_drop_objectivity(&family, budget)?,
            HvDropMode::Determinism => model_drop_determinism(&family),
        };
        let validation = validate_witness(&model, &family)?;
        let value = serde_json::json!({ "model": model, "validation": validation });
        *out = to_c_string(value.to_string());
        Ok(())
    })
}

/// Quantum joint `p(a, b)` in the order 00, 01, 10, 11. Angles in radians.
///
/// # Safety
/// `out` must point to 4 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn hv_quantum_joint(alpha: f64, phi: f64, out: *mut f64) -> HvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let joint = quantum_joint(angle(alpha, "alpha")?, angle(phi, "phi")?);
        ptr::copy_nonoverlapping(joint.entries().as_ptr(), out, 4);
        Ok(())
    })
}

/// Reduced parameters `x, e_p, e_w`.
///
/// # Safety
/// `out` must point to 3 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn hv_quantum_params(alpha: f64, phi: f64, out: *mut f64) -> HvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let params = quantum_params(angle(alpha, "alpha")?, angle(phi, "phi")?);
        let values = [*params.x(), *params.e_p(), *params.e_w()];
        ptr::copy_nonoverlapping(values.as_ptr(), out, 3);
        Ok(())
    })
}

/// Draws `n` events from `joint` (4 doubles, order 00, 01, 10, 11) and
/// writes the counts. Identical `(joint, n, seed)` give identical counts.
///
/// # Safety
/// `joint` must point to 4 readable doubles and `out` to 4 writable `uint64_t`.
#[no_mangle]
pub unsafe extern "C" fn hv_sample_events(joint: *const f64, n: u64, seed: u64, out: *mut u64) -> HvStatus {
    guard(|| {
        if joint.is_null() {
            return Err(null("joint"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let mut entries = [0.0; 4];
        ptr::copy_nonoverlapping(joint, entries.as_mut_ptr(), 4);
        let dist = JointDist::new(entries).map_err(|e| Fail(HvStatus::InvalidArgument, e.to_string()))?;
        let counts = sample_events(&dist, n, seed).as_array();
        ptr::copy_nonoverlapping(counts.as_ptr(), out, 4);
        Ok(())
    })
}
