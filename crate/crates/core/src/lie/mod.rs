//! Homological equations, initial-condition constants and Lie-series transforms.

mod generator;
mod homological;
mod transform;

pub use generator::{GeneratingFunction, GeneratorKind, GeneratorRecord};
pub use homological::{
    fix_k_constant, fix_s_constant, homological_residual, solve_homological, solve_homological_angle, solve_homological_linear,
};
pub use transform::{lie_transform, transform_coordinates, transform_series, Coord, CoordinateFunction};
