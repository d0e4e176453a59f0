//! Tate cohomology of finite groups over the integers, group extensions with
//! abelian kernel, and the splitting modules that translate between them.

pub mod cohomology;
pub mod error;
pub mod exactla;
pub mod extensions;
pub mod format;
pub mod gmodules;
pub mod groups;
pub mod theorems;

pub use error::{Error, Result};
pub use exactla::{AbelianInvariants, IntMatrix};
