//! Character tables against characters of explicitly constructed
//! representations.

mod common;
mod oracles;

#[test]
fn cyclic_groups() {
    for m in 1..=12 {
        oracles::cyclic_characters(m).unwrap();
    }
}

#[test]
fn symmetric_group_s3() {
    oracles::s3_characters().unwrap();
}

#[test]
fn quaternion_group() {
    oracles::q8_characters(&common::fixture("q8")).unwrap();
}
