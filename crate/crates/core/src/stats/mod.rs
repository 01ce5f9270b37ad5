//! Reference laws, spectral bounds and empirical tests.

pub mod empirical;
pub mod exact;
pub mod matrix;
pub mod spectral;

pub use empirical::{
    chi_square_gof, chi_square_two_sample, counts_l1, dense_counts, empirical_joint_l1, l1_threshold,
    sample_joint, summarize, ChiSquare, EmpiricalL1,
};
pub use exact::{
    exact_bridge, exact_bridge_rational, exact_joint, exact_marginal, exact_marginal_rational,
    l1_distance, Distribution, ExactDistribution, JointDistribution,
};
pub use spectral::{cayley_lambda, estimate_lambda, exact_lambda, lambda, LambdaEstimate};
