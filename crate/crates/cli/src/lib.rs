//! Certificate documents, independent verification, command pipelines, and
//! the acceptance matrix behind the `coxcert` binary.

pub mod accept;
pub mod build;
pub mod cert;
pub mod fuzz;
pub mod scalar;
pub mod verify;
