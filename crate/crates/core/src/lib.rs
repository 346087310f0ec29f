//! Exact point counting on Hermitian surfaces in PG(3, q²) and their
//! intersections with low-degree surfaces.

pub mod cli;
pub mod constructions;
pub mod cubicnf;
pub mod error;
pub mod field;
pub mod forms;
pub mod hermitian;
pub mod io;
pub mod linalg;
pub mod projspace;
pub mod sample;
pub mod verify;

pub use error::{Error, Result};
pub use field::{FieldCtx, FieldElement};
pub use projspace::{Pg3, ProjLine, ProjPlane, ProjPoint, Projectivity};
pub use forms::{BinaryForm, Form, HomogeneousForm, TernaryForm};
pub use hermitian::{HermitianMatrix, HermitianSurface, LineClass, PlaneClass};
