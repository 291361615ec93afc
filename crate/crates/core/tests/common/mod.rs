#![allow(dead_code)]

use std::path::Path;

use zg_core::spec;
use zg_core::GroupTable;

pub fn fixture(name: &str) -> GroupTable {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.json"));
    spec::load(&path).unwrap().realize(None).unwrap()
}

pub const ABELIAN: [&str; 7] = ["z2", "z3", "z4", "z6", "klein4", "z2xz4", "z3xz3"];
pub const NONABELIAN: [&str; 6] = ["s3", "s4", "d4", "q8", "heis3", "g64"];

pub fn perm_group(gens: &[Vec<usize>]) -> GroupTable {
    let id: Vec<usize> = (0..gens[0].len()).collect();
    GroupTable::from_generators(gens, id, |a: &Vec<usize>, b: &Vec<usize>| a.iter().map(|&i| b[i]).collect(), |p| format!("{p:?}"), zg_core::group::ORDER_CAP)
        .unwrap()
        .0
}
