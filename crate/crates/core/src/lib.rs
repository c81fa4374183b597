//! Continuous patrolling games on metric networks.
//!
//! An Attacker picks a point of a network and a start time, and the attack
//! lasts `alpha`. A unit-speed Patroller wins by passing the attacked
//! point while the attack is under way. This crate provides the pieces
//! needed to solve and simulate the game:
//!
//! * [`network`]: metric multigraphs, points on arcs, walks and Eulerian tours;
//! * [`decomposition`]: extremity sets, cores and subtree decompositions of trees;
//! * [`ebd`]: equal-branch-density leaf distributions and densities;
//! * [`strategy`]: Attacker and Patroller strategies and game values;
//! * [`factorization`]: 1- and m-factorizations of regular networks;
//! * [`engine`]: exact, grid and Monte Carlo interception probabilities,
//!   best-response and patrol searches.

pub mod decomposition;
pub mod ebd;
pub mod engine;
pub mod error;
pub mod factorization;
pub mod measure;
pub mod network;
pub mod rational;
pub mod strategy;

pub use error::{Error, Result};
pub use network::{ArcId, Network, NodeId, Point, Region, Segment, Walk};
pub use rational::Rational;
