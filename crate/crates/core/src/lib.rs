pub mod boxworld;
pub mod error;
pub mod gaussian;
pub mod linalg;
pub mod lp;
pub mod quantum;
pub mod sampling;
pub mod scalar;
pub mod steering;
pub mod witnesses;
pub mod commands;
pub mod report;
pub mod scenario;
