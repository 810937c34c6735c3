pub mod golden;
pub mod membership_lab;
pub mod trace_algebra;
pub mod variety_lab;
