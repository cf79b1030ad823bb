pub mod audit;
pub mod error;
pub mod flow;
pub mod graph;
pub mod harness;
pub mod instance;
pub mod lp;
pub mod rational;
pub mod subtour_cover;
pub mod svensson;
pub mod vertebrate;

pub use audit::Audit;
pub use error::{Error, Result};
pub use rational::Rational;
