//! Finite enveloping semigroups, ideal groups, group-like quotients and
//! orbital / weakly orbital equivalence relations.

pub mod algebra;
pub mod bitset;
pub mod caps;

pub use bitset::BitSet;
pub use caps::Caps;
pub mod ellis;
pub mod flows;
pub mod grouplike;
pub mod relations;
pub mod structured;
