//! Sectional curvature of surfaces in Euclidean 3-space under the canonical
//! semi-symmetric non-metric connection `nabla_X Y = nabla0_X Y + <C, Y> X`
//! with `C` a unit constant field.
//!
//! For a surface with unit normal `N`, Gaussian curvature `G` and mean
//! curvature `H`, the sectional curvature of the tangent plane is
//! `K = K~ + G - <C, N> H`, where `K~ = (1 - <C, N>^2) / 2` is the ambient value.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x >= y)` is used on purpose so NaN falls through

pub mod cli;
pub mod cylindrical;
pub mod error;
pub mod fourier;
pub mod geom;
pub mod graph_pde;
pub mod ode;
pub mod profile;
pub mod quadrature;
pub mod rotational;
pub mod snm;
pub mod vec3;

pub use error::{Error, Result};
pub use snm::{CanonicalConnection, CurvatureReport};
pub use vec3::Vec3;
