pub mod coset;
pub mod fsa;
pub mod group;
pub mod hyperbolic;
pub mod pair;
pub mod rational;
pub mod structure;
