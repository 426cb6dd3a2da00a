//! Special-function kernel: error function, incomplete gamma, normal and
//! Poisson tails.

mod erf;
mod gamma;
mod normal;
mod poisson;

pub use erf::{erf, erf_inv, erfc, erfc_inv, erfcx};
pub use gamma::{chi2_quantile, ln_gamma, reg_gamma_p, reg_gamma_p_inv, reg_gamma_pq, reg_gamma_q, reg_gamma_q_inv};
pub use normal::{normal_cdf, normal_pdf, p_to_z, z_to_p};
pub use poisson::{ln_poisson_pmf, poisson_left_tail, poisson_pmf, poisson_right_tail};


