pub mod algebra;
pub mod asymptotics;
pub mod catalog;
pub mod cohomology;
pub mod dsl;
pub mod elliptic;
pub mod fibration;
pub mod linalg;
pub mod rational;
pub mod report;
