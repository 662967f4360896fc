//! Orbit verification harness, counterexample search, the conjugated-ambient
//! demonstration, configuration documents and output formatting.

pub mod config;
pub mod cordiag;
pub mod counterexample;
pub mod format;
pub mod random;
pub mod verify;

pub use config::{Config, TargetKind};
pub use cordiag::{cordiag_demo, CordiagReport};
pub use counterexample::{search as counterexample_search, CounterexampleOptions, CounterexampleReport};
pub use format::{fmt_sig, round_json, round_sig, write_density_csv, DENSITY_HEADER};
pub use verify::{
    direct_orbit, verify_canonical, verify_orbit, verify_orbit_models, OrbitModels, Verdict, VerifyOptions,
    VerifyReport,
};
