//! Constructive witnesses: neighbourhood decompositions, conjugation checks
//! and stabilization indices of transporters.

mod checks;
mod instances;
mod witness;

pub use checks::{conjugation_check, stabilization_index, ConjugationFailure, ConjugationReport, STABILIZATION_LOOKAHEAD};
pub use instances::{maximality_instance, u1_instance, Branch, MaximalityInstance, U1Instance};
pub use witness::{
    maximality_witness, witness_u1, FactorTag, MaximalityCase, MaximalityWitness, U1Witness, WordFactor, WordWitness,
    VERIFICATION_SAMPLES,
};
