//! The categories of knowledge description and content, the functor `Ct`
//! between them and the functor `Cl` from formula algebras to filter lattices.

mod checks;
mod objects;

pub(crate) use checks::HOM_SET_NOTE;
pub use checks::{check_duality, describe_model, verify_cl_functoriality};
pub use objects::{
    cl_morphism, ct_element, ct_morphism, ct_object, is_admissible_cont, is_admissible_desc, AdmissibleContMorphism,
    AdmissibleDescMorphism, ContentObject, DescriptionObject, KnowledgeBase,
};

#[cfg(test)]
mod tests;
