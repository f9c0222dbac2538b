//! Law suites: generated-instance checks of every axiom family.

pub mod cd;
pub mod gen;
pub mod lin;
pub mod linear;
pub mod report;
pub mod roundtrip;
pub mod runner;
pub mod structure;
pub mod system;

pub use gen::{Generate, Kind, Rng};
pub use report::{LawReport, Status};
pub use runner::{
    bind_all, build, check_all, check_eq, check_law, check_laws, replay, Builder, Check, Instance,
    Law, RunConfig, Verdict,
};
