//! The renormalized product, sigma and its modified forms, the modified
//! sine, and the Tate extension group.

mod group;
mod sigma;
mod sine;
mod theta;

#[cfg(test)]
mod tests;

pub use group::{ExactSequenceReport, TateGroup, TatePoint};
pub use sigma::{
    flat, functional_equation_check, modified_identity_check, sigma, sigma_modified, sigma_ring, LaurentPoly,
    SigmaOrders,
};
pub use sine::{cos_over_t_series, sin_cos_pi, sine_series, t_ring, TrigField, TrigForm};
pub use theta::{theta, ThetaSeries};
#[allow(unused_imports)]
pub(crate) use theta::{narrow, series_bounds};
