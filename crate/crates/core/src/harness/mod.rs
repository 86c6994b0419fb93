//! Seeded experiments on ℍ¹ probing the Poincaré, Sobolev and Gagliardo–Nirenberg
//! inequalities, with a degree-one control and the pairing test.

pub mod config;
pub mod experiments;
pub mod output;
pub mod sample;

pub use config::ExperimentConfig;
pub use experiments::{run_degree_one_control, run_gn_experiment, run_pairing_test, run_poincare_experiment, ControlReport, ExperimentOutput, PairingReport, Summary, TrialRecord};
pub use sample::{sample_coclosed_form, sample_exact_form, trial_seed};
