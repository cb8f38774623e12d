//! Annotation backend: serves pairs blind to their automatic labels, logs
//! human labels append-only, and reports live agreement and ground truth.

pub mod error;
pub mod http;
pub mod session;

pub use error::ServiceError;
pub use http::{router, serve, AppState};
pub use session::{AnnotationSession, Export, NextPair, SessionConfig};
