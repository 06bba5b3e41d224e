//! Named reference instances.

use crate::problem::Problem;

/// Three messages: receiver 1 knows nothing and is barred from 2 and 3,
/// receivers 2 and 3 know each other's message.
pub fn toy() -> Problem {
    Problem::from_one_based(&[&[], &[3], &[2]], &[&[2, 3], &[], &[]]).expect("valid fixture")
}

/// Nine-message instance with `P_i = B_i` for every receiver; its symmetric
/// capacity is `1/4`.
pub fn example1() -> Problem {
    Problem::from_one_based(
        &[
            &[2, 3, 4, 5, 6, 7, 8, 9],
            &[1, 3, 4, 5, 6, 7, 8, 9],
            &[4, 5, 6, 8, 9],
            &[5, 6, 7, 8],
            &[3, 4, 7, 8, 9],
            &[2, 3, 4, 5, 7, 9],
            &[1, 2, 3, 4, 5, 6, 8, 9],
            &[1, 2, 3, 4, 5, 6, 7, 9],
            &[1, 2, 3, 4, 5, 6, 7, 8],
        ],
        &[&[], &[], &[1, 2, 7], &[1, 2, 3, 9], &[1, 2, 6], &[1, 8], &[], &[], &[]],
    )
    .expect("valid fixture")
}

/// Five-message infeasible instance.
pub fn example2() -> Problem {
    Problem::from_one_based(
        &[&[2, 4, 5], &[1, 5], &[], &[2], &[1, 2]],
        &[&[], &[4], &[1, 2, 5], &[1], &[]],
    )
    .expect("valid fixture")
}

pub fn single() -> Problem {
    Problem::from_one_based(&[&[]], &[&[]]).expect("valid fixture")
}

/// The nine-message instance with every prohibited list emptied.
pub fn example1_open() -> Problem {
    example1().without_security()
}

/// Looks up a fixture by name.
pub fn by_name(name: &str) -> Option<Problem> {
    Some(match name {
        "toy" => toy(),
        "example1" => example1(),
        "example2" => example2(),
        "single" => single(),
        "example1-open" => example1_open(),
        _ => return None,
    })
}

pub const NAMES: &[&str] = &["toy", "example1", "example2", "single", "example1-open"];
