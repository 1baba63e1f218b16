//! The spherical tensor gradient operator 𝒴_l^m(∇): Hobson's theorem,
//! the γ radial functions, operator linearization and the Leibniz rule.

mod gamma;
mod ops;
mod radial;
mod tensor;

pub use gamma::{
    gamma_form, gamma_radial, Form1, Form2, Form3, Form4, Form5, Form6, GammaForm, GammaIndices,
    GammaRegistry,
};
pub use ops::{
    apply_to_expansion, apply_to_tensor, apply_to_tensor_with, apply_via_generator, hobson_general,
    hobson_harmonic, hobson_harmonic_radial, laplacian_power_solid, leibniz, leibniz_weight,
    leibniz_with, operator_polynomial, stgo_product_linearize, HobsonExpansion, LinearizedTerm,
};
pub use radial::{
    sampled_inv_r_ddr_pow, y00, KhatFactor, Radial, RadialExpr, RadialProfile, RadialTerm, Sampler,
    SAMPLED_MAX_ORDER,
};
pub use tensor::{TensorExpansion, TensorTerm, PRUNE_TOL};
