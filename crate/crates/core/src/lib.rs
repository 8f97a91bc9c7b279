pub mod exactpoly;
pub mod liealg;
pub mod looppoisson;
pub mod matrix;
pub mod reduction;
pub mod report;
pub mod sampling;
pub mod cases;
pub mod isomono;
pub mod numerics;
pub mod suites;
