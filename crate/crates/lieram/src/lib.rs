//! Free nilpotent Lie algebras over Galois rings, their ramification filtration
//! ideals, admissible exponent sets, and explicit ideal generators.

pub mod admissible;
pub mod bch;
pub mod cli;
pub mod coeffring;
pub mod etaconst;
pub mod filtration;
pub mod freeassoc;
pub mod modlinalg;
pub mod nilpotentlie;
pub mod par;
pub mod params;
pub mod ramgen;
pub mod verify;
