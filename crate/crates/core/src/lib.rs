pub mod curvature;
pub mod field;
pub mod moments;
pub mod par;
pub mod profile;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod suite;
