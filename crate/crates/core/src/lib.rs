//! Desk-scale verification toolkit for the computational primitives of the
//! delta-symbol approach to Rankin–Selberg subconvexity: special functions,
//! inert weights, oscillatory integrals, the DFI delta expansion, Hecke
//! eigenvalue arithmetic, Voronoi summation and exact-rational exponent
//! balancing.

pub mod bessel;
pub mod delta;
pub mod exponents;
pub mod hecke;
pub mod jet;
pub mod lfunction;
pub mod oscillatory;
pub mod quadrature;
pub mod report;
pub mod special;
pub mod voronoi;
pub mod weights;
