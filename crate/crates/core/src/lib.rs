//! Polynomial-shape Bratteli diagrams: the vertex lattice, covered
//! vertices, the Vershik successor on finite towers, chains, a
//! finite-horizon probe for depth-`i` coding conflicts and geometric
//! invariant measures.
//!
//! ```
//! use polyshape_core::{parse_polynomial, Diagram};
//!
//! let spec = parse_polynomial("x1^4 + 2 x1^3 x2 + x1^2 x2^2 + 3 x1 x2^3 + x2^4").unwrap();
//! let diagram = Diagram::polynomial(spec.clone(), 2).unwrap();
//! let v = spec.vertex(vec![4, 4]).unwrap();
//! assert_eq!(diagram.dimension(&v).unwrap().to_string(), "15");
//! ```

pub mod chain;
pub mod coverage;
pub mod diagram;
pub mod error;
pub mod expansion;
pub mod export;
pub mod measure;
pub mod polynomial;
pub mod probe;
mod report;
pub mod verify;
pub mod vershik;
pub mod vertex;

pub use diagram::{Diagram, EdgeRef, Multiplicity};
pub use error::{Error, Result};
pub use polynomial::{parse_polynomial, PolynomialSpec};
pub use vertex::Vertex;
