pub mod field;
pub mod linalg;
pub mod exterior;
pub mod liealg;
pub mod quadform;
pub mod classify;
pub mod cohomology;
pub mod checks;
