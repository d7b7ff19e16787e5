//! Higher-order spacing ratios and the generalized ratio surmise.

mod fit;
mod histogram;
mod ks;
mod surmise;
mod transform;

pub use fit::{cdf_distance, cdf_distance_values, fit_beta_prime, fit_values, FitGrid, FitReport};
pub use histogram::{histogram, Histogram};
pub use ks::{kolmogorov_q, ks_p_value, ks_statistic, ks_test, ks_test_values};
pub use surmise::{
    predicted_beta_prime, surmise_cdf, surmise_mean, surmise_params, surmise_pdf, CdfTable,
    SurmiseParams,
};
pub use transform::{
    kth_spacing_ratios, kth_spacing_ratios_cyclic, IndexMode, RatioSequence, DEGENERACY_TOL,
};
