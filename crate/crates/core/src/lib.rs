pub mod basis;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod scalar;
pub mod series;
pub mod sixj;
pub mod sklyanin;
pub mod wilson;
