//! Quadrature and root finding shared by the statistical modules.

mod quad;
mod roots;

pub use quad::{integrate, integrate_with_breaks, QuadOptions, QuadResult};
pub use roots::{bisect, expand_upper, newton_bracketed};
