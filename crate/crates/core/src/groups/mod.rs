//! Finite fields, explicit group engines and conjugacy classes.

pub mod classes;
pub mod element;
pub mod field;
pub mod spec;
pub mod table;

pub use classes::{conj_classes, ClassData};
pub use element::{Bytes, Element, Engine};
pub use field::{ff_make, FiniteFieldSpec, GaloisField};
pub use spec::{Family, GroupKind, GroupSpec};
pub use table::{group_build, GroupTable};
