//! Exact arithmetic for orbits of rational maps over cyclotomic fields.
//!
//! The crate is organised bottom-up:
//!
//! * [`rational`] and [`interval`] provide exact rational helpers and
//!   certified multi-precision interval arithmetic.
//! * [`cyclo`] implements the cyclotomic numbers [`CycNum`], root-of-unity
//!   tests and the certified house.
//! * [`poly`] and [`ratmap`] implement sparse polynomials and rational maps
//!   with stepwise orbits, formal iterates and term counting.
//! * [`growth`], [`special`], [`search`] and [`pencil`] build the analysis
//!   tools on top of those.

pub mod cyclo;
pub mod error;
pub mod growth;
pub mod interval;
pub mod parse;
pub mod pencil;
pub mod poly;
pub mod rational;
pub mod ratmap;
pub mod search;
pub mod special;

pub use cyclo::CycNum;
pub use error::{Error, Result};
pub use poly::Poly;
pub use rational::Rational;
pub use ratmap::{OrbitRecord, OrbitVerdict, RatMap};
