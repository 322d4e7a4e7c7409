//! Support library for the `ctxlab` binary: the acceptance checks shared
//! between the `selftest` verb and the acceptance test target.

pub mod checks;
