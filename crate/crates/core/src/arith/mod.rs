//! Exact arithmetic for distance values.

pub mod rational;
pub mod surd;
pub mod tower;

pub use rational::Rational;
pub use surd::Surd;
pub use tower::QuadTower;
