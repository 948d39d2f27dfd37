pub mod algebra;
pub mod bifunctor;
pub mod calculus;
pub mod error;
pub mod fp;
pub mod functor;
pub mod linalg;
pub mod module;
pub mod projective;
pub mod random;
pub mod rational;
pub mod resolution;
pub mod zmod;

pub use algebra::{Algebra, AlgebraData, Side};
pub use error::{Error, Result};
pub use linalg::{QMatrix, QSpace, ZMatrix};
pub use module::{Module, ModuleMap};
pub use projective::Mode;
pub use rational::Q;
