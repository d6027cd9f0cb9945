#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod contraction;
pub mod harness;
pub mod metric;
pub mod picard;
pub mod report;
pub mod scenario;
pub mod sigma;
