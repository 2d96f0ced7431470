pub mod axioms;
pub mod closure;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod gb;
pub mod homological;
pub mod modification;
pub mod module;
pub mod monomial;
pub mod phantom;
pub mod poly;
pub mod random;
pub mod ring;
pub mod vector;
