pub mod cli;
pub mod error;
pub mod fujita;
pub mod geometry;
pub mod ideals;
pub mod multigraded;
pub mod okounkov;
pub mod rational;
pub mod report;
pub mod series;
pub mod spec;
pub mod svg;
