#![no_std]
extern crate alloc;

pub mod error;
pub mod harness;
pub mod lz;
pub mod metrics;
pub mod nn;
pub mod qsam;
pub mod qsim;
mod special;

pub use error::{Error, Result};
