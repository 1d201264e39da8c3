//! Points, domain configurations, boundary curves and evaluation grids.

pub mod boundary;
pub mod domain;
pub mod grid;
pub mod point;

pub use boundary::{
    boundary_curve, boundary_quadrature, closed_components, nearest_boundary_point, BoundaryId,
    BoundaryPoint, Curve, ProjectionResult,
};
pub use domain::{sector_angle, DomainSpec, EndShape, TrigPolynomial};
pub use grid::{
    grid_points, make_pair_grid, GridPair, GridPoint, GridPolicy, PairGrid, PointClass, Stratum,
};
pub use point::{Point, Vec2, Vec3};
