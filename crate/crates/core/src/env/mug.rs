//! Mug-lifting task with synthetic 16x12 camera images.

use crate::matrix::Matrix;
use crate::scalar::Scalar;

use super::{uniform, Encoder, WorldModel};

pub const MUG_WIDTH: usize = 16;
pub const MUG_HEIGHT: usize = 12;

/// Mug indices.
pub const M0: usize = 0;
pub const ML: usize = 1;
pub const MR: usize = 2;
pub const M2: usize = 3;

/// Action indices. `A0` (no lift) is the complement action of the multinomial channel.
pub const A0: usize = 0;
pub const AL: usize = 1;
pub const AR: usize = 2;
pub const A2: usize = 3;

pub const HIDDEN_UNITS: usize = 4;
pub const NUM_PERCEPTS: usize = 4;

/// Utility of the preferred action for each mug.
pub const PREFERRED_UTILITY: f64 = 5.0;
/// Utility of lifting a one-handled mug with both hands, relative to [`PREFERRED_UTILITY`].
pub const EFFORTFUL_RATIO: f64 = 0.6;

const BODY_ROWS: std::ops::Range<usize> = 2..10;
const BODY_COLS: std::ops::Range<usize> = 5..11;
const HANDLE_ROWS: std::ops::Range<usize> = 4..8;
const LEFT_HANDLE_COLS: std::ops::Range<usize> = 2..5;
const RIGHT_HANDLE_COLS: std::ops::Range<usize> = 11..14;

/// Preferred action per mug: m0 -> a0, mL -> aL, mR -> aR, m2 -> a2.
pub fn preferred_action(mug: usize) -> usize {
    [A0, AL, AR, A2][mug]
}

/// 4x4 utility: the preferred action pays [`PREFERRED_UTILITY`], both hands on a
/// one-handled mug pays `EFFORTFUL_RATIO` of that, everything else zero.
pub fn mug_utility<T: Scalar>() -> Matrix<T> {
    let mut u = Matrix::zeros(4, 4);
    for m in [M0, ML, MR, M2] {
        u[(m, preferred_action(m))] = T::of(PREFERRED_UTILITY);
    }
    u[(ML, A2)] = T::of(PREFERRED_UTILITY * EFFORTFUL_RATIO);
    u[(MR, A2)] = T::of(PREFERRED_UTILITY * EFFORTFUL_RATIO);
    u
}

/// Noise-free bitmap of `mug`, row-major, `MUG_HEIGHT` rows of `MUG_WIDTH` pixels.
pub fn mug_template<T: Scalar>(mug: usize) -> Vec<T> {
    let (left, right) = match mug {
        M0 => (false, false),
        ML => (true, false),
        MR => (false, true),
        M2 => (true, true),
        _ => panic!("mug index {mug} out of range"),
    };
    let mut px = vec![T::zero(); MUG_WIDTH * MUG_HEIGHT];
    for r in 0..MUG_HEIGHT {
        for c in 0..MUG_WIDTH {
            let on = (BODY_ROWS.contains(&r) && BODY_COLS.contains(&c))
                || (left && HANDLE_ROWS.contains(&r) && LEFT_HANDLE_COLS.contains(&c))
                || (right && HANDLE_ROWS.contains(&r) && RIGHT_HANDLE_COLS.contains(&c));
            if on {
                px[r * MUG_WIDTH + c] = T::one();
            }
        }
    }
    px
}

/// Uniform prior over the four mugs, bitmap encoder with the given flip probability.
pub fn mug_task<T: Scalar>(flip_prob: f64) -> crate::error::Result<WorldModel<T>> {
    mug_task_with_templates((0..4).map(mug_template).collect(), flip_prob)
}

pub fn mug_task_with_templates<T: Scalar>(
    templates: Vec<Vec<T>>,
    flip_prob: f64,
) -> crate::error::Result<WorldModel<T>> {
    WorldModel::with_names(
        uniform(4),
        mug_utility(),
        Encoder::Bitmap { templates, flip_prob },
        ["m0", "mL", "mR", "m2"].map(String::from).to_vec(),
        ["a0", "aL", "aR", "a2"].map(String::from).to_vec(),
    )
}
