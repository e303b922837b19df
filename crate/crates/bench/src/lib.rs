//! Benchmark fixtures. The benches themselves live in `benches/`.

use momentforge_core::fan::{parse_fan, Fan, ParseOptions};

pub const P2: &str = include_str!("../../../data/p2.fan.json");
pub const P1P1P1: &str = include_str!("../../../data/p1p1p1.fan.json");
pub const FP: &str = include_str!("../../../data/fp_ex2.fan.json");

pub fn fan(text: &str) -> Fan {
    parse_fan(text, ParseOptions::default()).expect("bundled fan parses")
}
