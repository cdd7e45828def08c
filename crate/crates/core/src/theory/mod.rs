//! Closed-form and implicitly defined quantities of the random-graph model.

mod location;
mod threshold;

pub use location::*;
pub use threshold::*;
