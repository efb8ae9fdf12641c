//! Experiment harness for the `risbt` simulation core: configuration files,
//! Monte Carlo runners, CSV output, and the decode walkthrough.

pub mod config;
pub mod demo;
pub mod experiment;
