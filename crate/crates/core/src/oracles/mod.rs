//! Independent brute-force verifiers: Cartesian finite differences,
//! spherical quadrature, radial Hankel transforms and momentum-space
//! convolution quadrature.

mod convolution;
mod fd;
mod hankel;
mod quadrature;

pub use convolution::momentum_convolution;
pub use fd::{central_weights, fd_apply_operator, fornberg_weights, FDScheme, FdResult};
pub use hankel::{
    hankel_radial_ft, inverse_hankel_radial, minus_i_pow, oscillatory_radial_integral,
    wynn_epsilon, HankelResult,
};
pub use quadrature::{
    gauss_legendre, integrate_panels, sphere_integrate, GridKind, QuadratureGrid, DATA_DIR_ENV,
};
