//! Oracles for small dense graphs and for tensor and Cartesian products.

pub mod cartesian;
pub mod dense;
pub mod power;
pub mod tensor;

pub use cartesian::{CartesianOracle, SplitTable};
pub use dense::DenseOracle;
pub use power::{leaf_tolerance, PowerKind, PowerOracle};
pub use tensor::TensorOracle;
