//! Verification suites and report rendering behind the `chiralt` binary.

pub mod checks;
mod report;

pub use checks::{Check, Settings, Which};
pub use report::{render, Format};

/// Exit statuses.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const CAP: i32 = 3;
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
pub mod guide {}
