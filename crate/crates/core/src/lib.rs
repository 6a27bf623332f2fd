//! Minimum-wirelength embeddings of complete multipartite graphs into
//! Cartesian products of paths and even cycles.
//!
//! The guest is `K` with `2^p` parts of size `2^(r-p)`; the host is a product
//! of paths `P_(2^k)` and cycles `C_(2^k)` with `2^r` vertices. A
//! [`labeling::HostLabeling`] places guest label `ℓ` on host label `ℓ`, and
//! [`wirelength::certify`] checks the resulting wirelength against the
//! cut-based lower bound.

pub mod cli;
pub mod error;
pub mod graphs;
pub mod labeling;
pub mod multipartite;
pub mod oracle;
pub mod product;
pub mod wirelength;

pub use error::{Error, Result};
pub use graphs::{Edge, Graph};
pub use labeling::{GuestLabeling, HostAlgo, HostLabeling, Labeling};
pub use multipartite::MultipartiteSpec;
pub use product::{CutFamily, FactorKind, FactorSpec, ProductShape, ProductSpec};
pub use wirelength::{Embedding, Router, WirelengthReport};
