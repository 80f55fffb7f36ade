//! Numerical checks of the geometric identities and functional
//! inequalities behind the solver: the surface divergence theorem,
//! integration by parts, the Poincaré constant and coercivity, norm
//! equivalence between `U` and `Γ₀`, the flattening ellipticity bound, and
//! manufactured-solution convergence studies.

mod convergence;
mod ellipticity;
mod identities;
mod poincare;

pub use convergence::{convergence_study, solution_errors, ConvergenceRow, ConvergenceTable};
pub use ellipticity::{
    check_flattening_ellipticity, check_norm_equivalence, flattening_constant, flattening_form,
    flattening_min_eigenvalue, FlatteningReport, NormEquivalenceReport,
};
pub use identities::{check_divergence_theorem, check_integration_by_parts, write_identities_csv, IdentityReport};
pub use poincare::{
    check_coercivity, coercivity_ratio, estimate_poincare_constant, CoercivityReport, EigenOptions,
    PoincareEstimate,
};
