//! Computations in the mod 2 Lambda algebra Λ, the quotient complex
//! Λ′ = Λ/θΛ, the Bockstein spectral sequence of the filtration by the
//! images of θ, and the dyadic colimit θ⁻¹Λ.
//!
//! ```
//! use lforge::{Element, Lambda};
//!
//! let lam = Lambda::new();
//! let x: Element = "(0,3)".parse().unwrap();
//! assert_eq!(lam.normalize(&x).unwrap().to_string(), "(2,1)");
//! ```

pub mod algebra;
pub mod basis;
pub mod bockstein;
pub mod cochain;
pub mod cocomplete;
pub mod differential;
pub mod element;
pub mod error;
pub mod linalg;
pub mod monomial;

pub use algebra::{binom_mod2, symmetric_differential, symmetric_relation, Lambda, NotInImage, DEFAULT_STEP_BUDGET};
pub use bockstein::{ConsistencyReport, DifferentialRecord, Family, FamilyOrigin, PageClass, PageEntry, SSReport, SlotReport};
pub use basis::{enumerate_basis, BasisSlice, ComplexKind, SliceId};
pub use cocomplete::{
    adem_rewrite_pair_dyadic, binom_mod2_dyadic, is_admissible_dyadic, n_of, orbit_rep, DyadicElement, DyadicMonomial,
    DyadicRational, LocalizedExtReport, LocalizedLevel,
};
pub use cochain::{lift_from_prime, project_to_prime, CohomologyClass, CohomologyPresentation, Sq0Kernel};
pub use differential::{DifferentialMatrixRequest, LinearMap};
pub use element::Element;
pub use error::{Error, Result};
pub use linalg::BitVec;
pub use monomial::{Bidegree, GeneratorIndex, Monomial};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/elements.md")]
    mod elements {}
    #[doc = include_str!("../../../book/src/differential.md")]
    mod differential {}
    #[doc = include_str!("../../../book/src/cohomology.md")]
    mod cohomology {}
    #[doc = include_str!("../../../book/src/bockstein.md")]
    mod bockstein {}
    #[doc = include_str!("../../../book/src/cocomplete.md")]
    mod cocomplete {}
}
