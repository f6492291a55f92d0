pub mod amalgam;
pub mod checks;
pub mod corpus;
pub mod dsl;
pub mod error;
pub mod finite;
pub mod genset;
pub mod girth;
pub mod hnn;
pub mod oracles;
pub mod stallings;
pub mod subgroups;
pub mod words;

pub use error::{Error, Result};
pub use oracles::{DihedralNormal, Element, GroupKind, GroupOracle};
pub use words::{Alphabet, Letter, Word};
