//! Construction, verification and analysis of k-nets of lines in the
//! complex projective plane.

pub mod construct;
pub mod cubic;
pub mod error;
pub mod field;
pub mod geom;
pub mod io;
pub mod linalg;
pub mod net;
pub mod poly;
pub mod quasigroup;
pub mod resonance;
pub mod selftest;

pub use error::{Error, Result};
pub use field::{ApproxComplex, Backend, CycloElem, CyclotomicField, Field};
pub use geom::{Line, Point};
pub use net::{Net, NetReport};
