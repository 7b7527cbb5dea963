//! Embedding the ring of integers of a relative extension `K/k` into orders of a
//! central simple algebra over `k`, with `k` the rationals or an imaginary
//! quadratic field.

pub mod arith;
pub mod base_field;
pub mod class_field;
pub mod class_group;
pub mod config;
pub mod csa;
pub mod driver;
pub mod error;
pub mod extension;
pub mod finite_field;
pub mod forms;
pub mod ideal;
pub mod okpoly;
pub mod report;
pub mod steinitz;
pub mod zpoly;

pub use base_field::{BaseField, OkElem, PrimeIdeal, PrimeKind};
pub use class_group::{class_group, ClassGroup, IdealClass, Subgroup};
pub use config::ScenarioConfig;
pub use driver::run;
pub use error::{Error, Result};
pub use report::{explain, ReportDocument};
