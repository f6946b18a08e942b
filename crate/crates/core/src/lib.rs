//! Mix-zone placement on road networks.
//!
//! Closed-form placement on line networks, link-length cost allocation,
//! weighted Weber-point solving, genetic + local search placement for general
//! networks, and a seeded vehicle/adversary simulator that scores placements
//! by tracking success and cumulative entropy.

pub mod chart;
pub mod cli;
pub mod cost_model;
pub mod error;
pub mod linear_placement;
pub mod placement_search;
pub mod privacy_sim;
pub mod road_graph;
pub mod weber_solver;

pub use error::{Error, Result};
