#![no_std]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
mod fourier;
pub mod groupring;
pub mod algaction;
pub mod groups;
mod linalg;
pub mod measures;
pub mod specification;
pub mod tiling;

pub use error::{Error, Result};
