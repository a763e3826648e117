#![no_std]

extern crate alloc;

mod error;

pub mod artin_schreier;
pub mod base_change;
pub mod cyclic_extension;
pub mod epp;
pub mod geometric_conductor;
pub mod kato_conductor;
pub mod laurent_series;
pub mod residue_fields;

pub use error::{Error, Result};
