//! Predator-prey task: animals of three size groups, each calling for a
//! different kind of response.
//!
//! Worlds `0..8` are small prey, `8..11` medium prey and `11..15` large
//! predators. Actions `0..8` are the specific hunts for the small animals,
//! `8..11` the specific hunts for the medium animals, then a generic hunt that
//! works on any medium animal, then flee.

use std::ops::Range;

use crate::matrix::Matrix;
use crate::scalar::Scalar;

use super::{uniform, Encoder, WorldModel};

pub const NUM_WORLDS: usize = 15;
pub const NUM_ACTIONS: usize = 13;
pub const SMALL: Range<usize> = 0..8;
pub const MEDIUM: Range<usize> = 8..11;
pub const LARGE: Range<usize> = 11..15;
pub const GENERIC_HUNT: usize = 11;
pub const FLEE: usize = 12;

/// Utility of the specific hunt on its small animal.
pub const SMALL_HUNT_UTILITY: f64 = 6.0;
/// Utility of either the specific or the generic hunt on a medium animal.
pub const MEDIUM_HUNT_UTILITY: f64 = 2.0;
pub const FLEE_UTILITY: f64 = 3.0;

/// Input width of the binary world encoding.
pub const INPUT_BITS: usize = 4;
pub const HIDDEN_UNITS: usize = 20;
pub const NUM_PERCEPTS: usize = 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Group {
    Small,
    Medium,
    Large,
}

pub fn group_of(world: usize) -> Group {
    if SMALL.contains(&world) {
        Group::Small
    } else if MEDIUM.contains(&world) {
        Group::Medium
    } else {
        assert!(LARGE.contains(&world), "world {world} out of range");
        Group::Large
    }
}

/// The built-in 15x13 utility table. Every entry not listed below is zero.
pub fn predator_prey_utility<T: Scalar>() -> Matrix<T> {
    let mut u = Matrix::zeros(NUM_WORLDS, NUM_ACTIONS);
    for w in SMALL {
        u[(w, w)] = T::of(SMALL_HUNT_UTILITY);
    }
    for w in MEDIUM {
        u[(w, w)] = T::of(MEDIUM_HUNT_UTILITY);
        u[(w, GENERIC_HUNT)] = T::of(MEDIUM_HUNT_UTILITY);
    }
    for w in LARGE {
        u[(w, FLEE)] = T::of(FLEE_UTILITY);
    }
    u
}

/// Uniform prior, built-in utility and a 4-bit binary encoder (code 15 unused).
pub fn predator_prey_task<T: Scalar>() -> WorldModel<T> {
    let world_names = (0..NUM_WORLDS)
        .map(|w| match group_of(w) {
            Group::Small => format!("small{}", w - SMALL.start),
            Group::Medium => format!("medium{}", w - MEDIUM.start),
            Group::Large => format!("large{}", w - LARGE.start),
        })
        .collect();
    let action_names = (0..NUM_ACTIONS)
        .map(|a| match a {
            a if SMALL.contains(&a) => format!("hunt_small{}", a - SMALL.start),
            a if MEDIUM.contains(&a) => format!("hunt_medium{}", a - MEDIUM.start),
            GENERIC_HUNT => "hunt_generic".to_string(),
            _ => "flee".to_string(),
        })
        .collect();
    WorldModel::with_names(
        uniform(NUM_WORLDS),
        predator_prey_utility(),
        Encoder::Binary { bits: INPUT_BITS },
        world_names,
        action_names,
    )
    .expect("built-in predator-prey task is valid")
}
