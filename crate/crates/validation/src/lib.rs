//! Acceptance checks for `nilform`; see `tests/acceptance.rs`.
