//! Acceptance checks of the whole pipeline live in `tests/acceptance.rs`;
//! this crate has no library code.
