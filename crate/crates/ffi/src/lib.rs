//! C bindings for structure parsing, interface extraction and the interface
//! embedding. Handles are opaque pointers owned by the caller and released
//! with the matching `_free` function; every fallible call returns a status
//! code and leaves a message for `ppk_last_error` on failure.
//!
//! The generated header lives in `include/ppikit.h` and is refreshed by the
//! build script.

use ppikit::idist::{idist, idist_embed, is_near_duplicate, preset_by_name, IDistConfig};
use ppikit::interface::{extract_interfaces, Interface};
use ppikit::structure::{parse_structure, Format, Structure};
use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};

/// Embedding length; `ppk_embed` writes exactly this many doubles.
pub const PPK_EMBED_DIM: usize = 20;

/// Outcome of a fallible call. Anything but `Ok` leaves a message for
/// `ppk_last_error`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpkStatus {
    Ok = 0,
    /// A pointer was null, an index out of range or a number out of domain.
    InvalidArgument = 1,
    /// The input text is not a readable structure file.
    ParseError = 2,
    /// An interface chain has no residues, so it cannot be embedded.
    EmptyChain = 3,
    /// The requested name does not exist.
    NotFound = 4,
}

/// Structure file dialect for `ppk_structure_parse`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpkFormat {
    /// Decide from the content.
    Auto = 0,
    Pdb = 1,
    Mmcif = 2,
}

/// A parsed structure. Opaque; release with `ppk_structure_free`.
pub struct PpkStructure {
    inner: Structure,
}

/// Interfaces extracted from one structure. Opaque; release with
/// `ppk_interface_set_free`.
pub struct PpkInterfaceSet {
    interfaces: Vec<Interface>,
    ids: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: PpkStatus, message: impl Into<String>) -> PpkStatus {
    let message = message.into();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() =
            CString::new(message).unwrap_or_else(|_| CString::new("invalid message").unwrap());
    });
    status
}

/// Message of the most recent failure on this thread, as a NUL-terminated
/// UTF-8 string. Empty before any failure. The pointer stays valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ppk_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

unsafe fn utf8_arg<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, PpkStatus> {
    if ptr.is_null() {
        return Err(fail(PpkStatus::InvalidArgument, format!("{name} is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(PpkStatus::InvalidArgument, format!("{name} is not UTF-8")))
}

/// Parse a PDB or mmCIF file from memory.
///
/// `fallback_id` names the entry when the file does not; it is also the only
/// accepted source of an id for header-less files. On success `*out` owns the
/// structure.
///
/// # Safety
/// `text` and `fallback_id` must be NUL-terminated; `out` must be a valid
/// destination for one pointer.
#[no_mangle]
pub unsafe extern "C" fn ppk_structure_parse(
    text: *const c_char,
    format: PpkFormat,
    fallback_id: *const c_char,
    out: *mut *mut PpkStructure,
) -> PpkStatus {
    if out.is_null() {
        return fail(PpkStatus::InvalidArgument, "out is null");
    }
    *out = std::ptr::null_mut();
    let text = match utf8_arg(text, "text") {
        Ok(t) => t,
        Err(status) => return status,
    };
    let fallback = match utf8_arg(fallback_id, "fallback_id") {
        Ok(f) => f,
        Err(status) => return status,
    };
    let format = match format {
        PpkFormat::Auto => Format::Auto,
        PpkFormat::Pdb => Format::Pdb,
        PpkFormat::Mmcif => Format::Mmcif,
    };
    match parse_structure(text, format, fallback) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(PpkStructure { inner }));
            PpkStatus::Ok
        }
        Err(e) => fail(PpkStatus::ParseError, e.to_string()),
    }
}

/// Release a structure. Null is a no-op.
///
/// # Safety
/// `structure` must come from `ppk_structure_parse` and not be used again.
#[no_mangle]
pub unsafe extern "C" fn ppk_structure_free(structure: *mut PpkStructure) {
    if !structure.is_null() {
        drop(Box::from_raw(structure));
    }
}

/// Number of chains, or 0 for null.
///
/// # Safety
/// `structure` must be live or null.
#[no_mangle]
pub unsafe extern "C" fn ppk_structure_chain_count(structure: *const PpkStructure) -> usize {
    structure.as_ref().map_or(0, |s| s.inner.chains.len())
}

/// Extract every pairwise interface at the given heavy-atom cutoff.
///
/// An empty set is a valid result. On success `*out` owns the set.
///
/// # Safety
/// `structure` must be live; `out` must be a valid destination for one
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn ppk_extract(
    structure: *const PpkStructure,
    cutoff: f64,
    out: *mut *mut PpkInterfaceSet,
) -> PpkStatus {
    if out.is_null() {
        return fail(PpkStatus::InvalidArgument, "out is null");
    }
    *out = std::ptr::null_mut();
    let structure = match structure.as_ref() {
        Some(s) => s,
        None => return fail(PpkStatus::InvalidArgument, "structure is null"),
    };
    if cutoff.is_nan() || cutoff <= 0.0 {
        return fail(PpkStatus::InvalidArgument, "cutoff must be positive");
    }
    let interfaces = extract_interfaces(&structure.inner, cutoff);
    let ids = interfaces
        .iter()
        .map(|i| CString::new(i.id.clone()).expect("interface ids have no NUL"))
        .collect();
    *out = Box::into_raw(Box::new(PpkInterfaceSet { interfaces, ids }));
    PpkStatus::Ok
}

/// Release an interface set. Null is a no-op.
///
/// # Safety
/// `set` must come from `ppk_extract` and not be used again.
#[no_mangle]
pub unsafe extern "C" fn ppk_interface_set_free(set: *mut PpkInterfaceSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Number of interfaces, or 0 for null.
///
/// # Safety
/// `set` must be live or null.
#[no_mangle]
pub unsafe extern "C" fn ppk_interface_count(set: *const PpkInterfaceSet) -> usize {
    set.as_ref().map_or(0, |s| s.interfaces.len())
}

/// Id of one interface, or null when the index is out of range. The pointer
/// stays valid as long as the set lives.
///
/// # Safety
/// `set` must be live or null.
#[no_mangle]
pub unsafe extern "C" fn ppk_interface_id(
    set: *const PpkInterfaceSet,
    index: usize,
) -> *const c_char {
    set.as_ref()
        .and_then(|s| s.ids.get(index))
        .map_or(std::ptr::null(), |id| id.as_ptr())
}

/// Embed one interface into `out[0..20]` with the given length scale.
///
/// # Safety
/// `set` must be live; `out` must point at 20 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ppk_embed(
    set: *const PpkInterfaceSet,
    index: usize,
    alpha: f64,
    out: *mut f64,
) -> PpkStatus {
    if out.is_null() {
        return fail(PpkStatus::InvalidArgument, "out is null");
    }
    let set = match set.as_ref() {
        Some(s) => s,
        None => return fail(PpkStatus::InvalidArgument, "set is null"),
    };
    let interface = match set.interfaces.get(index) {
        Some(i) => i,
        None => {
            return fail(
                PpkStatus::InvalidArgument,
                format!("index {index} out of range for {} interfaces", set.interfaces.len()),
            )
        }
    };
    if alpha.is_nan() || alpha <= 0.0 {
        return fail(PpkStatus::InvalidArgument, "alpha must be positive");
    }
    let config = IDistConfig { alpha, ..IDistConfig::default() };
    match idist_embed(interface, &config) {
        Ok(z) => {
            std::ptr::copy_nonoverlapping(z.as_ptr(), out, PPK_EMBED_DIM);
            PpkStatus::Ok
        }
        Err(e) => fail(PpkStatus::EmptyChain, e.to_string()),
    }
}

/// Euclidean distance between two embeddings, or NaN for null input.
///
/// # Safety
/// Non-null arguments must point at 20 readable doubles.
#[no_mangle]
pub unsafe extern "C" fn ppk_idist(a: *const f64, b: *const f64) -> f64 {
    if a.is_null() || b.is_null() {
        fail(PpkStatus::InvalidArgument, "embedding is null");
        return f64::NAN;
    }
    let a: &[f64; PPK_EMBED_DIM] = &*(a as *const [f64; PPK_EMBED_DIM]);
    let b: &[f64; PPK_EMBED_DIM] = &*(b as *const [f64; PPK_EMBED_DIM]);
    idist(a, b)
}

/// 1 when the embeddings are near-duplicates at threshold `tau`, 0 when not,
/// -1 on error.
///
/// # Safety
/// Non-null arguments must point at 20 readable doubles.
#[no_mangle]
pub unsafe extern "C" fn ppk_is_near_duplicate(
    a: *const f64,
    b: *const f64,
    tau: f64,
) -> c_int {
    if a.is_null() || b.is_null() {
        fail(PpkStatus::InvalidArgument, "embedding is null");
        return -1;
    }
    if tau.is_nan() || tau <= 0.0 {
        fail(PpkStatus::InvalidArgument, "tau must be positive");
        return -1;
    }
    let a: &[f64; PPK_EMBED_DIM] = &*(a as *const [f64; PPK_EMBED_DIM]);
    let b: &[f64; PPK_EMBED_DIM] = &*(b as *const [f64; PPK_EMBED_DIM]);
    let config = IDistConfig { tau, ..IDistConfig::default() };
    c_int::from(is_near_duplicate(a, b, &config))
}

/// Look up a calibrated preset ("dips6" or "ppiref10") and write its cutoff,
/// duplicate threshold and length scale into any non-null destinations.
///
/// # Safety
/// `name` must be NUL-terminated; non-null destinations must be writable.
#[no_mangle]
pub unsafe extern "C" fn ppk_preset(
    name: *const c_char,
    cutoff: *mut f64,
    tau: *mut f64,
    alpha: *mut f64,
) -> PpkStatus {
    let name = match utf8_arg(name, "name") {
        Ok(n) => n,
        Err(status) => return status,
    };
    let preset = match preset_by_name(name) {
        Some(p) => p,
        None => return fail(PpkStatus::NotFound, format!("no preset named {name:?}")),
    };
    let config = preset.config();
    if !cutoff.is_null() {
        *cutoff = preset.cutoff;
    }
    if !tau.is_null() {
        *tau = config.tau;
    }
    if !alpha.is_null() {
        *alpha = config.alpha;
    }
    PpkStatus::Ok
}
