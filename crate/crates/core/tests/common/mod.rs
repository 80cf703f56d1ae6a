#![allow(dead_code)]

pub mod ground;
