//! Sample-size planning for tests of significance.
//!
//! The core idea: at a given significance level, every sample size N puts
//! the critical value of a test at a particular *minimum effect size*
//! (MES) — the smallest effect that N can return as significant. This
//! crate solves that correspondence in both directions, gives the
//! classical power baseline next to it, and ships a seeded Monte Carlo
//! harness that pits the two sampling strategies (plus an N=30
//! rule-of-thumb) against each other on nested synthetic populations.
//!
//! Modules:
//! - [`special`]: log-gamma, regularized incomplete beta/gamma
//! - [`central`]: t / chi-square / F CDFs and quantiles
//! - [`noncentral`]: their noncentral counterparts
//! - [`effect_size`]: r, d, w, V, f conversions and benchmark values
//! - [`sensitiveness`]: minimum-N solver, a-priori MES, post-hoc ratio
//! - [`power`]: power at N and minimum N for target power
//! - [`tables`]: regenerates the crate's reference tables
//! - [`simulation`]: the nested-population Monte Carlo study
//! - [`analysis`]: pairwise goodness-of-fit over capture counts

pub mod analysis;
pub mod central;
pub mod effect_size;
pub mod error;
pub mod noncentral;
pub mod power;
pub mod sensitiveness;
pub mod simulation;
pub mod special;
pub mod tables;

pub use central::DistributionParams;
pub use effect_size::{CohenBenchmarks, EffectSize, EsMetric, benchmarks};
pub use error::{Error, Result};
pub use noncentral::{Noncentrality, noncentral_cdf};
pub use power::{PowerSpec, min_n_for_power, power_at_n};
pub use sensitiveness::{
    MesAtN, SensitivenessResult, Tails, TestFamily, TestSpec, mes_at_n, min_sample_size,
    post_hoc_sensitiveness,
};
pub use simulation::{SimulationConfig, StudyOutcome, run_simulation};
pub use tables::{TableRow, generate_supp_table2, generate_table2};
