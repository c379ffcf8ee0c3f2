//! C ABI over the `banzhaf` crate.
//!
//! Every fallible function returns a [`BzStatus`]. On failure a description
//! is available from [`bz_last_error_message`] on the same thread. Games are
//! opaque handles created by the `bz_game_*` constructors and released with
//! [`bz_game_free`]. Association matrices are passed as row-major `m * m`
//! arrays of doubles; a null pointer selects the classical index.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use banzhaf::data::{eu_game, load_game};
use banzhaf::sampling::halfwidth;
use banzhaf::{
    estimate_indices, exact_indices, required_samples, AssociationMatrix, BanzhafError,
    IntervalMethod, VotingGame,
};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BzStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidGame = 3,
    InvalidAssociation = 4,
    TooManyPlayers = 5,
    BufferTooSmall = 6,
    ParseError = 7,
    Unsupported = 8,
    Panic = 99,
}

/// Confidence interval construction.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BzMethod {
    Hoeffding = 0,
    Student = 1,
    SelfBounding = 2,
}

impl From<BzMethod> for IntervalMethod {
    fn from(m: BzMethod) -> Self {
        match m {
            BzMethod::Hoeffding => IntervalMethod::Hoeffding,
            BzMethod::Student => IntervalMethod::Student,
            BzMethod::SelfBounding => IntervalMethod::SelfBounding,
        }
    }
}

/// Opaque weighted voting game.
pub struct BzGame {
    inner: VotingGame,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &BanzhafError) -> BzStatus {
    match err {
        BanzhafError::InvalidGame(_) | BanzhafError::DimensionMismatch { .. } => {
            BzStatus::InvalidGame
        }
        BanzhafError::InvalidAssociation(_) | BanzhafError::SymmetricFlows => {
            BzStatus::InvalidAssociation
        }
        BanzhafError::TooManyPlayers { .. } => BzStatus::TooManyPlayers,
        BanzhafError::Parse(_) => BzStatus::ParseError,
        BanzhafError::MultiQuota(_) => BzStatus::Unsupported,
        _ => BzStatus::InvalidArgument,
    }
}

struct Failure(BzStatus, String);

impl From<BanzhafError> for Failure {
    fn from(e: BanzhafError) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BzStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BzStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            BzStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(BzStatus::NullPointer, format!("`{what}` is null"))
}

unsafe fn game_ref<'a>(game: *const BzGame) -> Result<&'a VotingGame, Failure> {
    game.as_ref().map(|g| &g.inner).ok_or_else(|| null("game"))
}

unsafe fn out_slice<'a>(
    ptr: *mut f64,
    len: usize,
    what: &str,
    need: usize,
) -> Result<&'a mut [f64], Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    if len < need {
        return Err(Failure(
            BzStatus::BufferTooSmall,
            format!("`{what}` holds {len} values, {need} needed"),
        ));
    }
    Ok(slice::from_raw_parts_mut(ptr, len))
}

unsafe fn association(
    phi: *const f64,
    phi_len: usize,
    m: usize,
) -> Result<Option<AssociationMatrix>, Failure> {
    if phi.is_null() {
        return Ok(None);
    }
    if phi_len != m * m {
        return Err(Failure(
            BzStatus::InvalidAssociation,
            format!("association has {phi_len} entries, expected {}", m * m),
        ));
    }
    Ok(Some(AssociationMatrix::from_flat(
        m,
        slice::from_raw_parts(phi, phi_len).to_vec(),
    )?))
}

fn optional(v: f64) -> Option<f64> {
    (!v.is_nan()).then_some(v)
}

unsafe fn emit(game: VotingGame, out: *mut *mut BzGame) -> Result<(), Failure> {
    *out = Box::into_raw(Box::new(BzGame { inner: game }));
    Ok(())
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn bz_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a JSON game description.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bz_game_from_json(json: *const c_char, out: *mut *mut BzGame) -> BzStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Failure(BzStatus::ParseError, format!("json is not UTF-8: {e}")))?;
        emit(load_game(text)?, out)
    })
}

/// Builds a single-quota game with players `p1..pn`.
///
/// # Safety
/// `weights` must point to `n` doubles and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bz_game_single_quota(
    weights: *const f64,
    n: usize,
    quota: f64,
    out: *mut *mut BzGame,
) -> BzStatus {
    guard(|| {
        if weights.is_null() {
            return Err(null("weights"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        emit(
            VotingGame::single_quota(slice::from_raw_parts(weights, n), quota)?,
            out,
        )
    })
}

/// The embedded 18-member EU council game.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bz_eu_game(out: *mut *mut BzGame) -> BzStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        emit(eu_game(), out)
    })
}

/// Releases a game. Null is ignored.
///
/// # Safety
/// `game` must come from a `bz_game_*` constructor and not be used again.
#[no_mangle]
pub unsafe extern "C" fn bz_game_free(game: *mut BzGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// # Safety
/// `game` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bz_game_player_count(game: *const BzGame, out: *mut usize) -> BzStatus {
    guard(|| {
        let g = game_ref(game)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = g.players();
        Ok(())
    })
}

/// Exact absolute and normalized indices. `normalized` may be null; both
/// buffers need at least as many entries as the game has players.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn bz_exact_indices(
    game: *const BzGame,
    phi: *const f64,
    phi_len: usize,
    absolute: *mut f64,
    normalized: *mut f64,
    len: usize,
) -> BzStatus {
    guard(|| {
        let g = game_ref(game)?;
        let m = g.players();
        let phi = association(phi, phi_len, m)?;
        let abs = out_slice(absolute, len, "absolute", m)?;
        let report = exact_indices(g, phi.as_ref())?;
        abs[..m].copy_from_slice(&report.absolute());
        if !normalized.is_null() {
            out_slice(normalized, len, "normalized", m)?[..m].copy_from_slice(&report.normalized());
        }
        Ok(())
    })
}

/// Monte Carlo estimates with `samples` coalitions per player. `variance`
/// receives the sample variances (NaN when `samples < 2`) and may be null.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn bz_estimate_indices(
    game: *const BzGame,
    phi: *const f64,
    phi_len: usize,
    samples: u64,
    seed: u64,
    estimates: *mut f64,
    variance: *mut f64,
    len: usize,
) -> BzStatus {
    guard(|| {
        let g = game_ref(game)?;
        let m = g.players();
        let phi = association(phi, phi_len, m)?;
        let est = out_slice(estimates, len, "estimates", m)?;
        let report = estimate_indices(g, phi.as_ref(), samples, seed)?;
        for (slot, p) in est.iter_mut().zip(&report.players) {
            *slot = p.estimate;
        }
        if !variance.is_null() {
            let var = out_slice(variance, len, "variance", m)?;
            for (slot, p) in var.iter_mut().zip(&report.players) {
                *slot = p.sample_variance.unwrap_or(f64::NAN);
            }
        }
        Ok(())
    })
}

/// Sample size for half-width `epsilon` at confidence `1 - delta`. Pass NaN
/// for `s2` or `b` when the method does not use it.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bz_required_samples(
    epsilon: f64,
    delta: f64,
    method: BzMethod,
    s2: f64,
    b: f64,
    out: *mut u64,
) -> BzStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = required_samples(epsilon, delta, method.into(), optional(s2), optional(b))?;
        Ok(())
    })
}

/// Interval half-width after `n` samples. Pass NaN for unused `s2` or `b`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bz_confidence_halfwidth(
    method: BzMethod,
    n: u64,
    delta: f64,
    s2: f64,
    b: f64,
    out: *mut f64,
) -> BzStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = halfwidth(method.into(), n, delta, optional(s2), optional(b))?;
        Ok(())
    })
}
