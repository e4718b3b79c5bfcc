//! File formats, model configuration and the experiment harness behind the
//! `spatcond` command line tool.

pub mod harness;
pub mod io;
pub mod model;
