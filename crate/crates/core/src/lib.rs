//! Exact computations around unimodular rows over commutative rings.

pub mod cli;
pub mod error;
pub mod euler;
pub mod matrix;
pub mod path;
pub mod ring;
pub mod rng;
pub mod umrow;
pub mod wms;

pub use error::{Error, Result};
pub use ring::{Elem, Height, Ideal, Ring, RingDescriptor};
