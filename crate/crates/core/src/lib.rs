//! Exact computational algebra over finite local rings: Galois rings
//! and dual numbers, special linear groups over them as explicit finite
//! groups, modules of matrices under conjugation, low-degree group
//! cohomology, twisted group extensions, and a verifier that conjugates
//! suitable subgroups into twisted products over the Teichmuller
//! subring.

pub mod cohomology;
pub mod error;
pub mod extensions;
pub mod finite_field;
pub mod fp;
pub mod galois_ring;
pub mod gmodule;
pub mod group;
pub mod matrix;
pub mod structure_theorem;

pub use error::{Error, Result};
