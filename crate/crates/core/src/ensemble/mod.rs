//! Random matrices: seeded streams, Gaussian and Bernoulli sampling, and
//! finitely supported ensembles with exact enumeration.

mod discrete;
mod gaussian;
mod moments;
pub mod random;
mod rng;
mod sparsify;

pub use discrete::{
    enumerate_tail, for_each_outcome, lambda_k_distribution, product_support, tail_from_atoms,
    DiscreteEnsemble, Side, MAX_SUPPORT,
};
pub use gaussian::{draw_gaussian, sample_covariance, GaussianSampler, FACTOR_TOL};
pub use moments::{
    dominance_constant, second_moment_margin, verify_moment_lemma, wishart_second_moment,
    MomentReport, MIN_MOMENT_SAMPLES,
};
pub use rng::{inverse_normal_cdf, Stream};
pub use sparsify::{
    apply_column_mask, column_mask, masked_gram, sparsify_columns, SparsifierConfig,
};
