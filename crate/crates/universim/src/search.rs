//! Shared guard for exhaustive searches. Checks that refuse to run past
//! the limit return an error carrying the estimate instead of silently
//! truncating, so a non-answer is always distinguishable from a negative.

/// Default ceiling on enumerated search states.
pub const DEFAULT_LIMIT: u128 = 1_000_000;

/// The active ceiling; override with UNIVERSIM_SEARCH_LIMIT.
pub fn limit() -> u128 {
    std::env::var("UNIVERSIM_SEARCH_LIMIT")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_LIMIT)
}
