//! Job files, the command dispatcher and report rendering behind the
//! `semifree` binary.

pub mod job;
pub mod report;
pub mod run;
