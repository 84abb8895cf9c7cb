//! Filling the gaps of an s-type model with an n-type model.

use crate::fsm::{compose, difference, project, union, Fst, Side};
use crate::hmm::Inventory;

use super::assemble::assemble_from_unions;
use super::extract::{extract_initial_union, extract_middle_union};
use super::STypeError;

/// `s` plus the part of `n` whose upper side `s` does not cover.
pub fn joint_union(s: &Fst, n: &Fst) -> Result<Fst, STypeError> {
    let missing = difference(&project(n, Side::Upper), &project(s, Side::Upper))?;
    Ok(crate::fsm::canonical(&union(s, &compose(&missing, n))))
}

/// Completes the s-type unions with the subsequences of the total n-type
/// model `n` that they lack, and assembles the result.
pub fn complete(s_initials: &Fst, s_middles: &Fst, n: &Fst, inv: &Inventory) -> Result<Fst, STypeError> {
    let n_initials = extract_initial_union(n, inv)?;
    let n_middles = extract_middle_union(n, inv)?;
    let initials = joint_union(s_initials, &n_initials)?;
    let middles = joint_union(s_middles, &n_middles)?;
    assemble_from_unions(&initials, &middles)
}
