//! Symbolic laboratory for countable linear orders, circular orders and
//! arc/knot descriptors.

pub mod arcknot;
pub mod circular;
pub mod cli;
pub mod condense;
pub mod corpus;
pub mod decision;
pub mod dsl;
pub mod embed;
pub mod error;
pub mod eval;
pub mod form;
pub mod normalize;
pub mod ordinal;
pub mod rational;
pub mod report;
pub mod setdesc;
pub mod term;
pub mod verify;
