//! C ABI for the rank2 library: opaque handles, integer status codes,
//! JSON strings for structured results, and a thread-local last-error
//! message. All strings returned through out-parameters are owned by the
//! caller and must be released with `rank2_string_free`.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rank2::family::{Family, FamilyTag};
use rank2::rational::{rat_parse, rint, Rat};
use rank2::sim::{SimConfig, Simulator};
use rank2::verify;
use rank2::Error;

/// Status codes of every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Rank2Status {
    Ok = 0,
    InvalidArgument = 1,
    IdentityFailure = 2,
    NumericAbort = 3,
    Internal = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Message for the most recent failure on this thread. Borrowed pointer,
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rank2_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned through an out-parameter.
///
/// # Safety
/// `s` must be a pointer previously returned by this library, or null.
#[no_mangle]
pub unsafe extern "C" fn rank2_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn out_string(out: *mut *mut c_char, s: String) -> Rank2Status {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            Rank2Status::Ok
        }
        Err(_) => {
            set_error("interior NUL in output");
            Rank2Status::Internal
        }
    }
}

fn status_of(e: &Error) -> Rank2Status {
    match e {
        Error::NumericAbort { .. } => Rank2Status::NumericAbort,
        Error::Io(_) | Error::Json(_) => Rank2Status::Internal,
        _ => Rank2Status::InvalidArgument,
    }
}

unsafe fn cstr<'a>(p: *const c_char) -> Result<&'a str, Rank2Status> {
    if p.is_null() {
        set_error("null string argument");
        return Err(Rank2Status::InvalidArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        Rank2Status::InvalidArgument
    })
}

fn parse_family(family: &str, genus: usize, params_json: &str) -> Result<Family, Rank2Status> {
    let tag = match family {
        "trig" => FamilyTag::Trig,
        "cos" => FamilyTag::Cos,
        "elliptic" => FamilyTag::Elliptic,
        "rapid-decay" => FamilyTag::RapidDecay,
        "lame" => FamilyTag::Lame,
        "dixmier" => FamilyTag::Dixmier,
        other => {
            set_error(&format!("unknown family `{other}`"));
            return Err(Rank2Status::InvalidArgument);
        }
    };
    let value: serde_json::Value = serde_json::from_str(params_json).map_err(|e| {
        set_error(&format!("params: {e}"));
        Rank2Status::InvalidArgument
    })?;
    let obj = value.as_object().ok_or_else(|| {
        set_error("params must be a JSON object");
        Rank2Status::InvalidArgument
    })?;
    let mut params = BTreeMap::new();
    for (k, v) in obj {
        let r: Rat = match v {
            serde_json::Value::String(s) => rat_parse(s).map_err(|e| {
                set_error(&format!("param {k}: {e}"));
                Rank2Status::InvalidArgument
            })?,
            serde_json::Value::Number(n) if n.is_i64() => rint(n.as_i64().unwrap()),
            _ => {
                set_error(&format!("param {k} must be an integer or a \"p/q\" string"));
                return Err(Rank2Status::InvalidArgument);
            }
        };
        params.insert(k.clone(), r);
    }
    Ok(Family::new(tag, genus, params))
}

fn guarded<F: FnOnce() -> Rank2Status>(f: F) -> Rank2Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            Rank2Status::Internal
        }
    }
}

/// Constructs the spectral curve of a family instance; writes curve +
/// verification JSON to `out_json`.
///
/// # Safety
/// `family` and `params_json` are NUL-terminated C strings; `out_json`
/// is a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rank2_curve_json(
    family: *const c_char,
    genus: u32,
    params_json: *const c_char,
    out_json: *mut *mut c_char,
) -> Rank2Status {
    guarded(|| {
        let (Ok(fam), Ok(params)) = (cstr(family), cstr(params_json)) else {
            return Rank2Status::InvalidArgument;
        };
        let family = match parse_family(fam, genus as usize, params) {
            Ok(f) => f,
            Err(s) => return s,
        };
        match verify::verify_family(&family) {
            Ok((rep, pair)) => {
                let mut v = pair.curve.to_json(&family);
                v["report"] = serde_json::to_value(&rep).unwrap_or(serde_json::Value::Null);
                let status = if rep.all_hard_pass() {
                    Rank2Status::Ok
                } else {
                    set_error("hard identity failure; see report");
                    Rank2Status::IdentityFailure
                };
                let code = out_string(out_json, v.to_string());
                if code != Rank2Status::Ok {
                    code
                } else {
                    status
                }
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Runs the full pair verification for a family instance.
///
/// # Safety
/// See `rank2_curve_json`.
#[no_mangle]
pub unsafe extern "C" fn rank2_pair_verify_json(
    family: *const c_char,
    genus: u32,
    params_json: *const c_char,
    out_json: *mut *mut c_char,
) -> Rank2Status {
    rank2_curve_json(family, genus, params_json, out_json)
}

/// Jet-ring certification of the Lax form of the evolution system.
///
/// # Safety
/// `out_json` is a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rank2_lax_check_json(out_json: *mut *mut c_char) -> Rank2Status {
    guarded(|| {
        let rep = verify::lax_check();
        let ok = rep.all_hard_pass();
        let code = out_string(
            out_json,
            serde_json::to_value(&rep).map(|v| v.to_string()).unwrap_or_default(),
        );
        if code != Rank2Status::Ok {
            code
        } else if ok {
            Rank2Status::Ok
        } else {
            set_error("lax check failed");
            Rank2Status::IdentityFailure
        }
    })
}

/// Traveling-wave solver; all numeric arguments are "p/q" strings.
///
/// # Safety
/// All pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn rank2_traveling_wave_json(
    b: *const c_char,
    g2: *const c_char,
    g1: *const c_char,
    g0: *const c_char,
    out_json: *mut *mut c_char,
) -> Rank2Status {
    guarded(|| {
        let vals: Result<Vec<Rat>, Rank2Status> = [b, g2, g1, g0]
            .iter()
            .map(|&p| {
                cstr(p).and_then(|s| {
                    rat_parse(s).map_err(|e| {
                        set_error(&e.to_string());
                        Rank2Status::InvalidArgument
                    })
                })
            })
            .collect();
        let vals = match vals {
            Ok(v) => v,
            Err(s) => return s,
        };
        match verify::traveling_wave_solve(&vals[0], &vals[1], &vals[2], &vals[3]) {
            Ok(rep) => {
                let ok = rep.report.all_hard_pass();
                let code = out_string(
                    out_json,
                    serde_json::to_value(&rep).map(|v| v.to_string()).unwrap_or_default(),
                );
                if code != Rank2Status::Ok {
                    code
                } else if ok {
                    Rank2Status::Ok
                } else {
                    set_error("traveling-wave identities failed");
                    Rank2Status::IdentityFailure
                }
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Opaque simulator handle.
pub struct Rank2Sim {
    sim: Simulator,
}

/// Creates a simulator from the JSON config used by the CLI.
///
/// # Safety
/// `config_json` is a NUL-terminated C string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rank2_sim_new(
    config_json: *const c_char,
    out: *mut *mut Rank2Sim,
) -> Rank2Status {
    guarded(|| {
        let Ok(cfg_text) = cstr(config_json) else {
            return Rank2Status::InvalidArgument;
        };
        let value: serde_json::Value = match serde_json::from_str(cfg_text) {
            Ok(v) => v,
            Err(e) => {
                set_error(&format!("config: {e}"));
                return Rank2Status::InvalidArgument;
            }
        };
        let cfg = match SimConfig::from_json(&value).and_then(|c| {
            c.validate()?;
            Ok(c)
        }) {
            Ok(c) => c,
            Err(e) => {
                set_error(&e.to_string());
                return Rank2Status::InvalidArgument;
            }
        };
        match Simulator::new(cfg) {
            Ok((sim, _warnings)) => {
                *out = Box::into_raw(Box::new(Rank2Sim { sim }));
                Rank2Status::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Advances the simulation by `steps` steps of size `dt`.
///
/// # Safety
/// `sim` must be a live handle from `rank2_sim_new`.
#[no_mangle]
pub unsafe extern "C" fn rank2_sim_step(
    sim: *mut Rank2Sim,
    dt: f64,
    steps: u32,
) -> Rank2Status {
    if sim.is_null() {
        set_error("null simulator handle");
        return Rank2Status::InvalidArgument;
    }
    let sim = &mut (*sim).sim;
    guarded(AssertUnwindSafe(|| {
        for _ in 0..steps {
            if let Err(e) = sim.step(dt) {
                set_error(&e.to_string());
                return status_of(&e);
            }
        }
        Rank2Status::Ok
    }))
}

/// Current simulation time; NaN for a null handle.
///
/// # Safety
/// `sim` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn rank2_sim_time(sim: *const Rank2Sim) -> f64 {
    if sim.is_null() {
        return f64::NAN;
    }
    (*sim).sim.t()
}

/// Number of grid points.
///
/// # Safety
/// `sim` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn rank2_sim_grid_len(sim: *const Rank2Sim) -> u32 {
    if sim.is_null() {
        return 0;
    }
    (*sim).sim.x.len() as u32
}

/// Copies a field into `out` (length `len` must equal the grid length):
/// field 0 = x, 1 = V, 2 = W, 3+j = q_j.
///
/// # Safety
/// `sim` live handle; `out` points to at least `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn rank2_sim_get_field(
    sim: *const Rank2Sim,
    field: u32,
    out: *mut f64,
    len: u32,
) -> Rank2Status {
    if sim.is_null() || out.is_null() {
        set_error("null pointer");
        return Rank2Status::InvalidArgument;
    }
    let s = &(*sim).sim;
    if len as usize != s.x.len() {
        set_error("buffer length does not match the grid");
        return Rank2Status::InvalidArgument;
    }
    let st = s.state();
    let data: Option<&[f64]> = match field {
        0 => Some(&s.x),
        1 => Some(&st.v),
        2 => Some(&st.w),
        j => st.q.get(j as usize - 3).map(|v| v.as_slice()),
    };
    match data {
        Some(d) => {
            ptr::copy_nonoverlapping(d.as_ptr(), out, d.len());
            Rank2Status::Ok
        }
        None => {
            set_error("unknown field index");
            Rank2Status::InvalidArgument
        }
    }
}

/// Destroys a simulator handle.
///
/// # Safety
/// `sim` must come from `rank2_sim_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rank2_sim_free(sim: *mut Rank2Sim) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    #[test]
    fn curve_roundtrip_through_c_surface() {
        let fam = c("lame");
        let params = c(r#"{"g1": "4", "g0": 8}"#);
        let mut out: *mut c_char = std::ptr::null_mut();
        let status = unsafe { rank2_curve_json(fam.as_ptr(), 1, params.as_ptr(), &mut out) };
        assert!(matches!(status, Rank2Status::Ok));
        let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_string();
        unsafe { rank2_string_free(out) };
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        // F = z^3 + z - 2 at g1 = 4, g0 = 8
        let coeffs: Vec<&str> = v["F_coefficients"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c.as_str().unwrap())
            .collect();
        assert_eq!(coeffs, vec!["-2", "1", "0", "1"]);
    }

    #[test]
    fn bad_family_reports_error() {
        let fam = c("nope");
        let params = c("{}");
        let mut out: *mut c_char = std::ptr::null_mut();
        let status = unsafe { rank2_curve_json(fam.as_ptr(), 1, params.as_ptr(), &mut out) };
        assert!(matches!(status, Rank2Status::InvalidArgument));
        let msg = unsafe { CStr::from_ptr(rank2_last_error()) }.to_str().unwrap();
        assert!(msg.contains("nope"), "{msg}");
    }

    #[test]
    fn sim_handle_lifecycle() {
        let cfg = c(r#"{"g": 1, "a": "1/2", "N": 256, "T": 0.1}"#);
        let mut h: *mut Rank2Sim = std::ptr::null_mut();
        let status = unsafe { rank2_sim_new(cfg.as_ptr(), &mut h) };
        assert!(matches!(status, Rank2Status::Ok));
        let n = unsafe { rank2_sim_grid_len(h) };
        assert_eq!(n, 256);
        let status = unsafe { rank2_sim_step(h, 1e-3, 10) };
        assert!(matches!(status, Rank2Status::Ok));
        assert!((unsafe { rank2_sim_time(h) } - 0.01).abs() < 1e-12);
        let mut buf = vec![0.0f64; n as usize];
        let status = unsafe { rank2_sim_get_field(h, 1, buf.as_mut_ptr(), n) };
        assert!(matches!(status, Rank2Status::Ok));
        assert!(buf.iter().all(|x| x.is_finite()));
        unsafe { rank2_sim_free(h) };
    }
}
