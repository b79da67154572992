pub mod analytic;
pub mod coincidence;
pub mod cohomology;
pub mod degree;
pub mod fixtures;
pub mod linalg;
pub mod model;
pub mod numeric;
pub mod simplicial;
