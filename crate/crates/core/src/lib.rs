//! Hoare-logic verification of imperative programs against specifications
//! written in controlled English.

pub mod cli;
pub mod discharge;
pub mod hoare;
pub mod imp;
pub mod kb;
pub mod lambda;
pub mod paraphrase;
pub mod semparse;
