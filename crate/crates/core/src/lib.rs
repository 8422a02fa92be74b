//! Linear-shift equivalence classes of point sets in Z_p^n, annotated with
//! every identifiable model basis.
//!
//! The building blocks are prime-field arithmetic ([`field`]), exact set
//! distances ([`radical`]), the shift group and its orbits ([`shifts`]),
//! vanishing ideals via Buchberger-Moller ([`ideals`]), and order-ideal
//! enumeration with term-order realizability ([`bases`]). [`catalog`] ties
//! them together into a persisted, queryable database.

pub mod bases;
pub mod catalog;
pub mod dataset;
pub mod error;
pub mod field;
pub mod fm;
pub mod ideals;
pub mod linalg;
pub mod monomial;
pub mod order;
pub mod polynomial;
pub mod radical;
pub mod shifts;
