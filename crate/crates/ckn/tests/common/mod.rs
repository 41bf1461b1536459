#![allow(dead_code)]

use ckn::exact::{Params, Rational, SpaceParams};
use proptest::prelude::*;
use rand::Rng;

/// Small rationals with denominators up to 4, so boundary coincidences are common.
pub fn small_rational(lo: i64, hi: i64) -> impl Strategy<Value = Rational> {
    (1i64..=4, lo * 4..=hi * 4).prop_map(|(d, n)| Rational::new(n, d))
}

/// Exponent at least `min` drawn from a small grid.
pub fn exponent(min_quarters: i64) -> impl Strategy<Value = Rational> {
    (min_quarters..=28i64).prop_map(|k| Rational::new(k, 4))
}

pub fn space_full() -> impl Strategy<Value = SpaceParams> {
    (1u32..=5, exponent(4), exponent(1), exponent(1), small_rational(-8, 8), small_rational(-8, 8)).prop_map(
        |(n, p, q, r, a, b)| {
            let one = Rational::one();
            let (q, r) = if n >= 2 { (q.greater(&one), r.greater(&one)) } else { (q, r) };
            SpaceParams { n, p, q, r, a, b }
        },
    )
}

/// Picks `c` among the special points or a random value.
pub fn params_full() -> impl Strategy<Value = Params> {
    (space_full(), 0usize..6, small_rational(-12, 8)).prop_map(|(s, which, free)| {
        let c = match which {
            0 => s.c0(),
            1 => s.c1(),
            2 => -s.dim(),
            3 => s.a.clone(),
            4 => (s.c0() + s.c1()) / Rational::from_int(2),
            _ => free,
        };
        s.with_c(c)
    })
}

pub fn rand_rational<R: Rng>(rng: &mut R, lo: i64, hi: i64, max_den: i64) -> Rational {
    let d = rng.random_range(1..=max_den);
    Rational::new(rng.random_range(lo * d..=hi * d), d)
}

pub fn rand_space<R: Rng>(rng: &mut R) -> SpaceParams {
    let n = rng.random_range(1..=5u32);
    let p = Rational::new(rng.random_range(4..=24), 4);
    let low = if n >= 2 { 4 } else { 1 };
    let q = Rational::new(rng.random_range(low..=32), 4);
    let r = Rational::new(rng.random_range(low..=32), 4);
    SpaceParams { n, p, q, r, a: rand_rational(rng, -8, 8, 6), b: rand_rational(rng, -8, 8, 6) }
}
