pub mod bits;
pub mod gf2;
pub mod pauli;
pub mod code;
pub mod search;
pub mod planner;
pub mod library;
pub mod sim;
pub mod metrics;
