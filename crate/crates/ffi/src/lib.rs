//! C ABI over [`apasp::Session`].
//!
//! Every function returns an [`ApaspStatus`] or a plain value. Sessions are
//! opaque handles created by `apasp_session_new` and released with
//! `apasp_session_free`. Strings handed out by the library are owned by the
//! caller and must be released with `apasp_string_free`. When a call fails,
//! `apasp_last_error` describes the failure until the next failing call on
//! the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{self, AssertUnwindSafe};
use std::ptr;

use apasp::graph::{parse_graph, parse_update_line, serialize_graph, GraphError};
use apasp::{Session, UpdateError, UpdateStats};

/// Result of a fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApaspStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Graph or update text was malformed.
    Parse = 3,
    /// A vertex label did not name a vertex of the graph.
    UnknownVertex = 4,
    /// The update was well formed but not applicable to the current graph.
    /// The session is unchanged.
    InvalidUpdate = 5,
    /// The engine detected a broken internal invariant. The session should
    /// be discarded.
    Engine = 6,
    /// The maintained state disagrees with a fresh rebuild.
    Diverged = 7,
    /// The library panicked. The session should be discarded.
    Panic = 8,
}

/// Per-update counters.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ApaspUpdateStats {
    pub triples_touched_cleanup: u64,
    pub triples_touched_fixup: u64,
    pub new_triples_created: u64,
    pub heap_ops: u64,
}

impl From<UpdateStats> for ApaspUpdateStats {
    fn from(s: UpdateStats) -> Self {
        ApaspUpdateStats {
            triples_touched_cleanup: s.triples_touched_cleanup,
            triples_touched_fixup: s.triples_touched_fixup,
            new_triples_created: s.new_triples_created,
            heap_ops: s.heap_ops,
        }
    }
}

/// Opaque handle to a graph and its maintained tuple system.
pub struct ApaspSession {
    inner: Session,
}

struct Failure {
    status: ApaspStatus,
    message: String,
}

impl Failure {
    fn new(status: ApaspStatus, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }
}

fn graph_failure(e: GraphError) -> Failure {
    let status = match e {
        GraphError::UnknownVertex(_) => ApaspStatus::UnknownVertex,
        _ => ApaspStatus::Parse,
    };
    Failure::new(status, e.to_string())
}

fn update_failure(e: UpdateError) -> Failure {
    let status = match e {
        UpdateError::Invalid(_) => ApaspStatus::InvalidUpdate,
        UpdateError::Engine(_) => ApaspStatus::Engine,
    };
    Failure::new(status, e.to_string())
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let text = CString::new(message.replace('\0', "\\0")).expect("interior nul removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> ApaspStatus {
    match panic::catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => ApaspStatus::Ok,
        Ok(Err(f)) => {
            set_last_error(f.message);
            f.status
        }
        Err(payload) => {
            let detail = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {detail}"));
            ApaspStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(ApaspStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure::new(ApaspStatus::InvalidUtf8, format!("{name}: {e}")))
}

unsafe fn session_ref<'a>(p: *const ApaspSession) -> Result<&'a Session, Failure> {
    p.as_ref()
        .map(|s| &s.inner)
        .ok_or_else(|| Failure::new(ApaspStatus::NullPointer, "session is null"))
}

unsafe fn session_mut<'a>(p: *mut ApaspSession) -> Result<&'a mut Session, Failure> {
    p.as_mut()
        .map(|s| &mut s.inner)
        .ok_or_else(|| Failure::new(ApaspStatus::NullPointer, "session is null"))
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s)
        .expect("library output never contains nul bytes")
        .into_raw()
}

/// Message describing the most recent failure on this thread, or null if no
/// call has failed yet. The pointer stays valid until the next failing call
/// on this thread and must not be freed.
#[no_mangle]
pub extern "C" fn apasp_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses `graph_text` and builds its tuple system. On success `*out`
/// receives a new session.
///
/// # Safety
/// `graph_text` must be null or a nul-terminated string. `out` must be null
/// or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn apasp_session_new(
    graph_text: *const c_char,
    out: *mut *mut ApaspSession,
) -> ApaspStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::new(ApaspStatus::NullPointer, "out is null"));
        }
        let g = parse_graph(text(graph_text, "graph_text")?).map_err(graph_failure)?;
        let session = Box::new(ApaspSession {
            inner: Session::new(g),
        });
        out.write(Box::into_raw(session));
        Ok(())
    })
}

/// Releases a session. Null is ignored.
///
/// # Safety
/// `session` must be null or a pointer returned by `apasp_session_new` that
/// has not been freed.
#[no_mangle]
pub unsafe extern "C" fn apasp_session_free(session: *mut ApaspSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// Number of vertices, or 0 for a null session.
///
/// # Safety
/// `session` must be null or a live session.
#[no_mangle]
pub unsafe extern "C" fn apasp_session_vertex_count(session: *const ApaspSession) -> usize {
    session_ref(session).map_or(0, |s| s.graph().vertex_count())
}

/// Number of triples with a positive count, or 0 for a null session.
///
/// # Safety
/// `session` must be null or a live session.
#[no_mangle]
pub unsafe extern "C" fn apasp_session_triple_count(session: *const ApaspSession) -> usize {
    session_ref(session).map_or(0, |s| s.tuples().triple_count())
}

/// Applies one `update <vertex> [<src> <dst> <weight|del>]...` line. When
/// `stats` is not null it receives the update's counters. On
/// `APASP_STATUS_PARSE`, `APASP_STATUS_UNKNOWN_VERTEX` and
/// `APASP_STATUS_INVALID_UPDATE` the session is unchanged.
///
/// # Safety
/// `session` must be null or a live session, `update_line` null or a
/// nul-terminated string, `stats` null or valid for writing.
#[no_mangle]
pub unsafe extern "C" fn apasp_session_apply(
    session: *mut ApaspSession,
    update_line: *const c_char,
    stats: *mut ApaspUpdateStats,
) -> ApaspStatus {
    guard(|| {
        let s = session_mut(session)?;
        let op = parse_update_line(s.graph(), text(update_line, "update_line")?).map_err(graph_failure)?;
        let counters = s.apply(&op).map_err(update_failure)?;
        if !stats.is_null() {
            stats.write(counters.into());
        }
        Ok(())
    })
}

/// Distance and number of shortest paths from vertex `x` to vertex `y`,
/// both given by label. Unreachable pairs report infinity and 0.
///
/// # Safety
/// `session` must be null or a live session, `x` and `y` null or
/// nul-terminated strings, `distance` and `sigma` null or valid for writing.
#[no_mangle]
pub unsafe extern "C" fn apasp_session_query(
    session: *const ApaspSession,
    x: *const c_char,
    y: *const c_char,
    distance: *mut f64,
    sigma: *mut u64,
) -> ApaspStatus {
    guard(|| {
        let s = session_ref(session)?;
        let g = s.graph();
        let lookup = |p, name| {
            let label = text(p, name)?;
            g.vertex(label)
                .ok_or_else(|| Failure::new(ApaspStatus::UnknownVertex, format!("unknown vertex {label}")))
        };
        let (x, y) = (lookup(x, "x")?, lookup(y, "y")?);
        if distance.is_null() || sigma.is_null() {
            return Err(Failure::new(ApaspStatus::NullPointer, "distance or sigma is null"));
        }
        distance.write(s.tuples().distance(x, y));
        sigma.write(s.tuples().sigma(x, y));
        Ok(())
    })
}

unsafe fn emit_text(
    session: *const ApaspSession,
    out: *mut *mut c_char,
    render: impl FnOnce(&Session) -> String,
) -> ApaspStatus {
    guard(|| {
        let s = session_ref(session)?;
        if out.is_null() {
            return Err(Failure::new(ApaspStatus::NullPointer, "out is null"));
        }
        out.write(owned_string(render(s)));
        Ok(())
    })
}

/// Canonical text dump of the tuple system. `*out` receives a string to be
/// released with `apasp_string_free`.
///
/// # Safety
/// `session` must be null or a live session, `out` null or valid for writing.
#[no_mangle]
pub unsafe extern "C" fn apasp_session_dump(
    session: *const ApaspSession,
    out: *mut *mut c_char,
) -> ApaspStatus {
    emit_text(session, out, Session::dump)
}

/// Current graph in the graph file format. `*out` receives a string to be
/// released with `apasp_string_free`.
///
/// # Safety
/// `session` must be null or a live session, `out` null or valid for writing.
#[no_mangle]
pub unsafe extern "C" fn apasp_session_graph(
    session: *const ApaspSession,
    out: *mut *mut c_char,
) -> ApaspStatus {
    emit_text(session, out, |s| serialize_graph(s.graph()))
}

/// Betweenness centrality as `<label> <score>` lines sorted by label.
/// `*out` receives a string to be released with `apasp_string_free`.
///
/// # Safety
/// `session` must be null or a live session, `out` null or valid for writing.
#[no_mangle]
pub unsafe extern "C" fn apasp_session_betweenness(
    session: *const ApaspSession,
    out: *mut *mut c_char,
) -> ApaspStatus {
    emit_text(session, out, |s| {
        s.betweenness()
            .lines(s.graph())
            .into_iter()
            .map(|l| l + "\n")
            .collect()
    })
}

/// Rebuilds the tuple system from scratch and compares it with the
/// maintained one. Returns `APASP_STATUS_DIVERGED` with the differences in
/// `apasp_last_error` if they disagree.
///
/// # Safety
/// `session` must be null or a live session.
#[no_mangle]
pub unsafe extern "C" fn apasp_session_verify(session: *const ApaspSession) -> ApaspStatus {
    guard(|| {
        session_ref(session)?
            .verify()
            .map_err(|report| Failure::new(ApaspStatus::Diverged, report.to_string()))
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library that has not been
/// freed.
#[no_mangle]
pub unsafe extern "C" fn apasp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
