pub mod benchmark;
pub mod ground_state;
pub mod optimize;
pub mod readout_study;
