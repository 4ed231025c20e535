//! C ABI for the giving-game library.
//!
//! Conventions:
//! - Matrices travel as opaque `GgMatrix` handles created and freed here.
//! - Every fallible call returns a [`GgStatus`]; results go to out-pointers,
//!   which are written only on `GG_STATUS_OK`.
//! - Returned strings are NUL-terminated UTF-8 owned by the caller; release
//!   them with [`gg_string_free`]. JSON and DOT shapes match the `gg` CLI.
//! - Every entry point catches panics and reports `GG_STATUS_PANIC` instead
//!   of unwinding across the boundary.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;

use giving_game::engine::{play, ChoicePolicy, SearchLimits};
use giving_game::error::GameError;
use giving_game::frame::frame_of;
use giving_game::generate::{generate, GeneratorSpec};
use giving_game::io::{matrix_from_json, matrix_to_json, trace_to_json};
use giving_game::matrix::{Pair, PreferenceMatrix};
use giving_game::stability::{decide_pair, stability_pairs_of_matrix, Answer};

/// Result code of every API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GgStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Bad input: unparsable JSON or spec, unknown label, size out of range.
    InvalidArgument = 3,
    /// A requested step is not legal in the current state.
    IllegalStep = 4,
    /// The run ended without reaching its stability phase.
    NotStabilized = 5,
    /// A search cap aborted the operation.
    CapExceeded = 6,
    /// Internal invariant violation; indicates a library bug.
    Internal = 7,
    /// A panic was caught at the boundary; indicates a library bug.
    Panic = 8,
}

/// Verdict of [`gg_decide`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GgAnswer {
    Yes = 0,
    No = 1,
    /// The branch cap aborted the search before it was exhaustive.
    Unknown = 2,
}

/// Opaque preference-matrix handle.
pub struct GgMatrix(PreferenceMatrix);

fn status_of(e: &GameError) -> GgStatus {
    match e {
        GameError::TooFewAgents(_)
        | GameError::InvalidMatrix(_)
        | GameError::UnknownAgent(_)
        | GameError::DiagonalCell(_)
        | GameError::NotFrameEdge(_, _)
        | GameError::InvalidArgument(_) => GgStatus::InvalidArgument,
        GameError::SelfPass(_)
        | GameError::IllegalStep { .. }
        | GameError::ScriptExhausted { .. }
        | GameError::ScriptIllegalChoice { .. } => GgStatus::IllegalStep,
        GameError::NotStabilized { .. } => GgStatus::NotStabilized,
        GameError::BranchExplosion { .. } | GameError::CycleExplosion { .. } => {
            GgStatus::CapExceeded
        }
        GameError::ValueOverflow(_, _)
        | GameError::DecompositionFailure(_)
        | GameError::ReductionFailure(_) => GgStatus::Internal,
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, GgStatus> {
    if p.is_null() {
        return Err(GgStatus::NullPointer);
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| GgStatus::InvalidUtf8)
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> GgStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            GgStatus::Ok
        }
        Err(_) => GgStatus::Internal,
    }
}

fn guarded(f: impl FnOnce() -> GgStatus) -> GgStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(GgStatus::Panic)
}

fn parse_policy(spec: &str) -> Result<ChoicePolicy, GgStatus> {
    if spec == "first" {
        return Ok(ChoicePolicy::FirstByIndex);
    }
    if let Some(seed) = spec.strip_prefix("random:") {
        return seed
            .parse()
            .map(ChoicePolicy::SeededRandom)
            .map_err(|_| GgStatus::InvalidArgument);
    }
    Err(GgStatus::InvalidArgument)
}

/// Parses a matrix from its JSON wire form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer. On
/// `GG_STATUS_OK`, `*out` owns a handle to release with [`gg_matrix_free`].
#[no_mangle]
pub unsafe extern "C" fn gg_matrix_from_json(
    json: *const c_char,
    out: *mut *mut GgMatrix,
) -> GgStatus {
    guarded(|| {
        if out.is_null() {
            return GgStatus::NullPointer;
        }
        let json = match read_str(json) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match matrix_from_json(json) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(GgMatrix(m)));
                GgStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Builds a matrix from a generator spec: `trivial:N`, `random:N,MAX,SEED`,
/// `turquoise:K`, or `fixture:NAME`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer. On
/// `GG_STATUS_OK`, `*out` owns a handle to release with [`gg_matrix_free`].
#[no_mangle]
pub unsafe extern "C" fn gg_matrix_generate(
    spec: *const c_char,
    out: *mut *mut GgMatrix,
) -> GgStatus {
    guarded(|| {
        if out.is_null() {
            return GgStatus::NullPointer;
        }
        let spec = match read_str(spec) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match GeneratorSpec::from_str(spec).and_then(|s| generate(&s)) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(GgMatrix(m)));
                GgStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Serializes the matrix to its JSON wire form.
///
/// # Safety
/// `m` must be a live handle from this library and `out` a valid pointer.
/// On `GG_STATUS_OK`, release `*out` with [`gg_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gg_matrix_to_json(m: *const GgMatrix, out: *mut *mut c_char) -> GgStatus {
    guarded(|| {
        if m.is_null() || out.is_null() {
            return GgStatus::NullPointer;
        }
        write_string(out, matrix_to_json(&(*m).0))
    })
}

/// Number of agents, or 0 if the handle is NULL.
///
/// # Safety
/// `m` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn gg_matrix_agent_count(m: *const GgMatrix) -> usize {
    if m.is_null() {
        return 0;
    }
    (*m).0.n()
}

/// Releases a matrix handle. NULL is a no-op.
///
/// # Safety
/// `m` must be NULL or an unreleased handle from this library.
#[no_mangle]
pub unsafe extern "C" fn gg_matrix_free(m: *mut GgMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Releases a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must be NULL or an unreleased string from this library.
#[no_mangle]
pub unsafe extern "C" fn gg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Plays one game and returns the trace JSON (same shape as the CLI).
/// `policy` is `first` or `random:SEED`.
///
/// # Safety
/// `m` must be a live handle; `start` and `policy` NUL-terminated strings;
/// `out` a valid pointer. On `GG_STATUS_OK`, release `*out` with
/// [`gg_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gg_simulate_json(
    m: *const GgMatrix,
    start: *const c_char,
    policy: *const c_char,
    max_steps: usize,
    out: *mut *mut c_char,
) -> GgStatus {
    guarded(|| {
        if m.is_null() || out.is_null() {
            return GgStatus::NullPointer;
        }
        let matrix = &(*m).0;
        let (start, policy) = match (read_str(start), read_str(policy)) {
            (Ok(s), Ok(p)) => (s, p),
            (Err(st), _) | (_, Err(st)) => return st,
        };
        let start = match matrix.agent_by_label(start) {
            Ok(a) => a,
            Err(e) => return status_of(&e),
        };
        let policy = match parse_policy(policy) {
            Ok(p) => p,
            Err(st) => return st,
        };
        match play(matrix, start, &policy, max_steps) {
            Ok(t) => write_string(out, trace_to_json(&t)),
            Err(e) => status_of(&e),
        }
    })
}

/// Decides whether {a, b} is a stability pair of the game from `start`.
/// Writes the verdict to `out_answer`; if `out_witness` is non-NULL it
/// receives the witness trace JSON on a yes from the exhaustive search and
/// NULL otherwise.
///
/// # Safety
/// `m` must be a live handle; `start`, `a`, `b` NUL-terminated strings;
/// `out_answer` a valid pointer; `out_witness` NULL or a valid pointer.
/// A non-NULL `*out_witness` must be released with [`gg_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gg_decide(
    m: *const GgMatrix,
    start: *const c_char,
    a: *const c_char,
    b: *const c_char,
    branch_cap: u64,
    out_answer: *mut GgAnswer,
    out_witness: *mut *mut c_char,
) -> GgStatus {
    guarded(|| {
        if m.is_null() || out_answer.is_null() {
            return GgStatus::NullPointer;
        }
        let matrix = &(*m).0;
        let (start, a, b) = match (read_str(start), read_str(a), read_str(b)) {
            (Ok(s), Ok(a), Ok(b)) => (s, a, b),
            (Err(st), _, _) | (_, Err(st), _) | (_, _, Err(st)) => return st,
        };
        let lookup = |l: &str| matrix.agent_by_label(l);
        let (start, a, b) = match (lookup(start), lookup(a), lookup(b)) {
            (Ok(s), Ok(a), Ok(b)) => (s, a, b),
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return status_of(&e),
        };
        if a == b {
            return GgStatus::InvalidArgument;
        }
        let limits = SearchLimits {
            branch_cap,
            ..SearchLimits::default()
        };
        match decide_pair(matrix, start, Pair::new(a, b), &limits) {
            Ok(v) => {
                *out_answer = match v.answer {
                    Answer::Yes => GgAnswer::Yes,
                    Answer::No => GgAnswer::No,
                    Answer::Unknown => GgAnswer::Unknown,
                };
                if !out_witness.is_null() {
                    match v.witness {
                        Some(t) => return write_string(out_witness, trace_to_json(&t)),
                        None => *out_witness = std::ptr::null_mut(),
                    }
                }
                GgStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Graphviz DOT rendering of the blue-cell digraph.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer. On `GG_STATUS_OK`,
/// release `*out` with [`gg_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gg_frame_dot(m: *const GgMatrix, out: *mut *mut c_char) -> GgStatus {
    guarded(|| {
        if m.is_null() || out.is_null() {
            return GgStatus::NullPointer;
        }
        write_string(out, frame_of(&(*m).0).dot())
    })
}

/// All stability pairs of the matrix (union over starts) as a JSON array
/// of label pairs, e.g. `[["A","B"],["C","D"]]`.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer. On `GG_STATUS_OK`,
/// release `*out` with [`gg_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gg_stability_pairs_json(
    m: *const GgMatrix,
    branch_cap: u64,
    out: *mut *mut c_char,
) -> GgStatus {
    guarded(|| {
        if m.is_null() || out.is_null() {
            return GgStatus::NullPointer;
        }
        let matrix = &(*m).0;
        let limits = SearchLimits {
            branch_cap,
            ..SearchLimits::default()
        };
        match stability_pairs_of_matrix(matrix, &limits) {
            Ok(pairs) => {
                let labeled: Vec<[&str; 2]> = pairs
                    .iter()
                    .map(|p| [matrix.label(p.lo()), matrix.label(p.hi())])
                    .collect();
                let json = serde_json::to_string(&labeled).expect("plain data serializes");
                write_string(out, json)
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Static name of a status code, e.g. `"ok"` or `"invalid argument"`.
#[no_mangle]
pub extern "C" fn gg_status_name(status: GgStatus) -> *const c_char {
    let name: &'static CStr = match status {
        GgStatus::Ok => c"ok",
        GgStatus::NullPointer => c"null pointer",
        GgStatus::InvalidUtf8 => c"invalid utf-8",
        GgStatus::InvalidArgument => c"invalid argument",
        GgStatus::IllegalStep => c"illegal step",
        GgStatus::NotStabilized => c"not stabilized",
        GgStatus::CapExceeded => c"cap exceeded",
        GgStatus::Internal => c"internal error",
        GgStatus::Panic => c"panic",
    };
    name.as_ptr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn fixture(name: &str) -> *mut GgMatrix {
        let mut m: *mut GgMatrix = ptr::null_mut();
        let spec = cstr(name);
        assert_eq!(gg_matrix_generate(spec.as_ptr(), &mut m), GgStatus::Ok);
        assert!(!m.is_null());
        m
    }

    unsafe fn take_string(p: *mut c_char) -> String {
        assert!(!p.is_null());
        let s = CStr::from_ptr(p).to_str().unwrap().to_string();
        gg_string_free(p);
        s
    }

    #[test]
    fn matrix_json_round_trip() {
        unsafe {
            let m = fixture("fixture:figure2");
            assert_eq!(gg_matrix_agent_count(m), 4);
            let mut json: *mut c_char = ptr::null_mut();
            assert_eq!(gg_matrix_to_json(m, &mut json), GgStatus::Ok);
            let json = take_string(json);
            let mut back: *mut GgMatrix = ptr::null_mut();
            let cjson = cstr(&json);
            assert_eq!(gg_matrix_from_json(cjson.as_ptr(), &mut back), GgStatus::Ok);
            let mut again: *mut c_char = ptr::null_mut();
            assert_eq!(gg_matrix_to_json(back, &mut again), GgStatus::Ok);
            assert_eq!(take_string(again), json);
            gg_matrix_free(m);
            gg_matrix_free(back);
        }
    }

    #[test]
    fn simulate_produces_trace_json() {
        unsafe {
            let m = fixture("fixture:figure2");
            let (start, policy) = (cstr("C"), cstr("first"));
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(
                gg_simulate_json(m, start.as_ptr(), policy.as_ptr(), 10_000, &mut out),
                GgStatus::Ok
            );
            let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
            assert_eq!(v["start"], "C");
            assert_eq!(v["stability_pair"][1], "D");
            let bad = cstr("Q");
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(
                gg_simulate_json(m, bad.as_ptr(), policy.as_ptr(), 10_000, &mut out),
                GgStatus::InvalidArgument
            );
            gg_matrix_free(m);
        }
    }

    #[test]
    fn decide_answers_and_witnesses() {
        unsafe {
            let m = fixture("fixture:figure2");
            let (a, b) = (cstr("A"), cstr("B"));
            let mut answer = GgAnswer::Unknown;
            let mut witness: *mut c_char = ptr::null_mut();
            let start = cstr("A");
            assert_eq!(
                gg_decide(
                    m,
                    start.as_ptr(),
                    a.as_ptr(),
                    b.as_ptr(),
                    1_000_000,
                    &mut answer,
                    &mut witness
                ),
                GgStatus::Ok
            );
            assert_eq!(answer, GgAnswer::Yes);
            let trace = take_string(witness);
            assert!(trace.contains("\"steps\""));

            let start = cstr("D");
            let mut witness: *mut c_char = ptr::null_mut();
            assert_eq!(
                gg_decide(
                    m,
                    start.as_ptr(),
                    a.as_ptr(),
                    b.as_ptr(),
                    1_000_000,
                    &mut answer,
                    &mut witness
                ),
                GgStatus::Ok
            );
            assert_eq!(answer, GgAnswer::No);
            assert!(witness.is_null());

            // Self pair is rejected before any search.
            let start = cstr("A");
            assert_eq!(
                gg_decide(
                    m,
                    start.as_ptr(),
                    a.as_ptr(),
                    a.as_ptr(),
                    1_000_000,
                    &mut answer,
                    ptr::null_mut()
                ),
                GgStatus::InvalidArgument
            );
            gg_matrix_free(m);
        }
    }

    #[test]
    fn frame_and_stability_pair_exports() {
        unsafe {
            let m = fixture("fixture:figure2");
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(gg_frame_dot(m, &mut out), GgStatus::Ok);
            assert!(take_string(out).starts_with("digraph frame {"));
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(
                gg_stability_pairs_json(m, 1_000_000, &mut out),
                GgStatus::Ok
            );
            assert_eq!(
                take_string(out),
                "[[\"A\",\"B\"],[\"A\",\"D\"],[\"C\",\"D\"]]"
            );
            gg_matrix_free(m);
        }
    }

    #[test]
    fn null_and_garbage_inputs_are_rejected() {
        unsafe {
            let mut m: *mut GgMatrix = ptr::null_mut();
            assert_eq!(
                gg_matrix_from_json(ptr::null(), &mut m),
                GgStatus::NullPointer
            );
            let garbage = cstr("not json");
            assert_eq!(
                gg_matrix_from_json(garbage.as_ptr(), &mut m),
                GgStatus::InvalidArgument
            );
            let spec = cstr("random:1,2");
            assert_eq!(
                gg_matrix_generate(spec.as_ptr(), &mut m),
                GgStatus::InvalidArgument
            );
            assert_eq!(gg_matrix_agent_count(ptr::null()), 0);
            gg_matrix_free(ptr::null_mut());
            gg_string_free(ptr::null_mut());
            let name = CStr::from_ptr(gg_status_name(GgStatus::CapExceeded));
            assert_eq!(name.to_str().unwrap(), "cap exceeded");
        }
    }
}
