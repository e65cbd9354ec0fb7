//! Verification suites (placeholder during bring-up).
