//! Rate regions and multi-cell NOMA scheme evaluation.

pub mod channel;
pub mod cli;
pub mod config;
pub mod error;
pub mod rate;
pub mod ic;
pub mod linalg;
pub mod schemes;
pub mod sim;
pub mod single_cell;

pub use error::{Error, Result};
pub use rate::{
    capacity, pareto_frontier, region_dominates, shannon_rate, ParetoFrontier, Rate,
    RateConvention, RatePoint, Snr,
};
