//! Noncommutative Painleve II hierarchy toolkit.
//!
//! * [`ncalg`]: exact free differential algebra over `Q(i)`.
//! * [`lenard`]: matrix Lenard polynomials and hierarchy equations.
//! * [`laxpair`]: coefficients of the isomonodromic Lax pair.
//! * [`airy`]: generalized Airy functions by contour quadrature.
//! * [`fredholm`]: Fredholm determinants of matrix Airy Hankel operators.
//! * [`flow`]: numerical integration of hierarchy members along the diagonal.

pub mod airy;
pub mod flow;
pub mod fredholm;
pub mod laxpair;
pub mod lenard;
pub mod ncalg;
