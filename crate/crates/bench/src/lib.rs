//! Shared helpers for the benchmark targets.

use fqcalc::constants::CarlitzConstants;
use fqcalc::field::FqContext;

pub fn consts(q: u32) -> CarlitzConstants {
    CarlitzConstants::new(&FqContext::with_q(q).unwrap())
}
