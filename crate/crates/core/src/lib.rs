//! Maximum-contrast greyscales of graphs.
//!
//! A greyscale assigns each vertex a tone in `[0, 1]` using both 0 and 1.
//! Its contrast vector lists the edge tones `|f(u) - f(v)|` in ascending
//! order; greyscales are compared lexicographically on that vector.

pub mod chromatic;
pub mod cli;
pub mod enchained;
pub mod graph;
pub mod greyscale;
pub mod rational;
pub mod rmacg;
mod search;
pub mod solver;

pub use graph::Graph;
pub use rational::Rational;
