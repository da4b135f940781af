pub mod circuit;
pub mod device;
pub mod experiments;
pub mod qcore;
pub mod reconstruct;
pub mod tomo;
