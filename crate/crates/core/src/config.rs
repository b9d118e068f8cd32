//! Size limits for constructions whose output can explode.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

pub const DEFAULT_SIZE_CAP: u64 = 5_000_000;
pub const SIZE_CAP_ENV: &str = "SPANCALC_SIZE_CAP";

static OVERRIDE: AtomicU64 = AtomicU64::new(0);

/// The active cap: an explicit [`set_size_cap`] wins, then the
/// `SPANCALC_SIZE_CAP` environment variable, then [`DEFAULT_SIZE_CAP`].
pub fn size_cap() -> u64 {
    match OVERRIDE.load(Ordering::Relaxed) {
        0 => std::env::var(SIZE_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|&v| v > 0)
            .unwrap_or(DEFAULT_SIZE_CAP),
        v => v,
    }
}

/// Pass 0 to clear the override.
pub fn set_size_cap(cap: u64) {
    OVERRIDE.store(cap, Ordering::Relaxed);
}

pub(crate) fn check_size(what: &'static str, size: u128) -> Result<()> {
    let cap = size_cap();
    if size > cap as u128 {
        return Err(Error::SizeCap { what, size, cap });
    }
    Ok(())
}
