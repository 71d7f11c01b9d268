//! Macdonald polynomials and the interlacing-tuple checks built on them.

mod boxes;
mod halfspace;
mod nu;
mod partition;
mod sym;

pub use boxes::{b_box, b_el, b_el_factored, b_lambda, b_lambda_factored, phi_factored, phi_psi, psi_factored};
pub use halfspace::{
    halfspace_weight, interlacing_tuples, lhs_identify_check, tau_sign, HalfspaceReport, InterlacingTuple, SignData,
};
pub use nu::{fundamental_nu_check, nu_tuples, summed_roots, NuReport, NuTuple, NuVariant};
pub use partition::{dominated_by, e_closure, e_closure_candidates, partitions_bounded, partitions_of, Partition};
pub use sym::{
    branching_check, cauchy_check, fbinom_product_coeffs, fbinom_sum_product_check, gram_schmidt_p,
    gram_schmidt_p_bounded, inversion_check, m_product, mac_basis, macdonald_q, one_row_p, p_in_m, pieri_check,
    power_sum_norm, power_sum_norm_factored, rect_p, CauchyReport, GsOrder, InversionReport, MPoly, MacBasis, SymPoly, GS_BOUND,
};
