//! Hard-core model statistics, greedy fractional colouring, correspondence
//! colouring and lower-bound constructions for triangle-free graphs.

pub mod cli;
pub mod constructions;
pub mod dpcolor;
pub mod fractional;
pub mod graph;
pub mod hardcore;
pub mod numerics;
pub mod scalar;

pub type Stats = hardcore::OccupancyStats<f64>;
pub type ExactStats = hardcore::OccupancyStats<scalar::Rational>;
pub type Colouring = fractional::FractionalColouring<f64>;
pub type Weights = fractional::LocalWeights<f64>;
