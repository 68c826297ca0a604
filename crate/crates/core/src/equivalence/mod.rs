//! Bounded deciders for isomorphism, logical automorphic equivalence and
//! informational equivalence of knowledge bases.

mod checks;
mod decide;
mod functor_iso;
mod phi;

pub use checks::{build_description_iso, verify_admissibility_transfer};
pub use decide::{
    check_automorphic_equivalence, check_informational_equivalence, check_isomorphic, EquivReport, Mode, Refutation,
    Verdict, Witness, PHI_LIMIT,
};
pub use functor_iso::{find_functor_iso, FunctorIso, IsoMethod};
pub use phi::{enumerate_phis, PhiAutomorphism};

#[cfg(test)]
mod tests;
