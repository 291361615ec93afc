//! Builders for concrete groups: finite presentations (parsed and
//! enumerated by Todd–Coxeter), the semidirect products `G(E) = E x| (M + M)`
//! together with their ambient conjugations, and central extensions of
//! elementary abelian groups by a bilinear cocycle.

pub mod bilinear;
pub mod coset;
pub mod field;
pub mod presentation;
pub mod sz;

pub use bilinear::{bilinear_ext, jm_group, jm_spec, BilinearExtSpec, JmPattern, JmReport};
pub use coset::{todd_coxeter, todd_coxeter_with_budget, DEFAULT_COSET_BUDGET};
pub use presentation::{parse_presentation, parse_presentation_with, Convention, Presentation, Word};
pub use sz::{conj_by_ambient, sz_group, tilde_e, AmbientElement, ESubgroup, SzGroup, SzGroupSpec};

