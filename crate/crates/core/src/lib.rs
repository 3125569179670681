//! Exact analysis of quasi-homogeneous corank-1 map germs `(C^2,0) -> (C^3,0)`.

pub mod double_points;
pub mod germ;
pub mod normal_form;
pub mod poly;
pub mod invariants;
pub mod oracles;
pub mod pipeline;
pub mod corpus;
pub mod report;
pub mod cli;
