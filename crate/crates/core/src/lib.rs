//! Tours through low-dimensional projections of high-dimensional data.
//!
//! The centerpiece is [`givens`], which interpolates between two projection
//! frames so that the path ends exactly on the target frame, orientation
//! included. [`geodesic`] provides the classic plane-to-plane geodesic for
//! comparison. [`index`] holds projection pursuit indexes, among them an
//! oriented splines index that changes under in-plane rotation, and [`tour`]
//! runs grand, planned and guided tours with either interpolator.

pub mod data;
pub mod error;
pub mod export;
pub mod geodesic;
pub mod givens;
pub mod index;
pub mod linalg;
pub mod pca;
pub mod spline;
pub mod tour;

pub use error::{Result, TourError};
pub use geodesic::{geodesic_full_path, GeodesicPath, GeodesicPlan};
pub use givens::{
    calculate_angles, construct_moving_frame, construct_preframe, givens_full_path,
    interpolate_preframe, preprojection, row_rot, steps_for_speed, GivensPlan, GivensRotation,
    GivensSequence, InterpolationPath, PreFrame, PreprojectionBasis,
};
pub use linalg::{
    is_orthonormal, orthogonal_complement, orthonormalize, principal_angles, svd_small, Frame,
    Tolerances,
};
pub use data::Dataset;
pub use index::{HolesIndex, ProjectedData, ProjectionIndex, SplinesIndex};
pub use pca::{pca, PcaResult};
pub use tour::{
    grand_tour, guided_tour, planned_tour, random_frame, Interpolator, Scorer, SearchMethod,
    TourConfig, TourTrace, TraceEvent, TraceRecord,
};
