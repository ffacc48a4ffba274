#![no_std]

extern crate alloc;

pub mod chain;
pub mod gmod;
pub mod krtables;
pub mod realcx;
pub mod specseq;
pub mod znf;
