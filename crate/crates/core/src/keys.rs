//! Canonical line and direction keys for bulk enumeration.
//!
//! When every homogeneous coordinate of a point set fits in 62 bits, 2x2
//! minors fit in `i128` and keys are computed without allocation. Otherwise
//! the big-integer path is used. Both paths produce the same canonical
//! triples, so results do not depend on which one ran.

use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::projective::{cross, normalize, ProjLine, ProjPoint};

const SMALL_LIMIT: i64 = 1 << 62;

pub(crate) trait Coords: Sync {
    type Key: Hash + Eq + Ord + Clone + Send + Sync;

    fn len(&self) -> usize;
    /// Canonical line through points `i` and `j`; `None` if they coincide.
    fn join_key(&self, i: usize, j: usize) -> Option<Self::Key>;
    /// Canonical direction (point at infinity) of the line through two affine points.
    fn direction_key(&self, i: usize, j: usize) -> Option<Self::Key>;
    fn to_line(key: &Self::Key) -> ProjLine;
}

pub(crate) struct SmallCoords(Vec<[i64; 3]>);
pub(crate) struct BigCoords(Vec<[BigInt; 3]>);

pub(crate) enum AnyCoords {
    Small(SmallCoords),
    Big(BigCoords),
}

impl AnyCoords {
    pub(crate) fn new(points: &[ProjPoint]) -> Self {
        let small: Option<Vec<[i64; 3]>> = points
            .iter()
            .map(|p| {
                let c = p.coords();
                let mut out = [0i64; 3];
                for (o, v) in out.iter_mut().zip(c.iter()) {
                    let v = v.to_i64()?;
                    if v.abs() >= SMALL_LIMIT {
                        return None;
                    }
                    *o = v;
                }
                Some(out)
            })
            .collect();
        match small {
            Some(v) => AnyCoords::Small(SmallCoords(v)),
            None => AnyCoords::Big(BigCoords(points.iter().map(|p| p.coords().clone()).collect())),
        }
    }
}

/// Runs a generic routine on whichever coordinate representation applies.
macro_rules! dispatch {
    ($coords:expr, |$c:ident| $body:expr) => {
        match $coords {
            $crate::keys::AnyCoords::Small($c) => $body,
            $crate::keys::AnyCoords::Big($c) => $body,
        }
    };
}
pub(crate) use dispatch;

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn normalize_small(v: [i128; 3]) -> Option<[i128; 3]> {
    let g = gcd_u128(gcd_u128(v[0].unsigned_abs(), v[1].unsigned_abs()), v[2].unsigned_abs());
    if g == 0 {
        return None;
    }
    let g = g as i128;
    let first = *v.iter().find(|c| **c != 0)?;
    let s = if first < 0 { -g } else { g };
    Some([v[0] / s, v[1] / s, v[2] / s])
}

fn small_to_big(k: &[i128; 3]) -> [BigInt; 3] {
    [BigInt::from(k[0]), BigInt::from(k[1]), BigInt::from(k[2])]
}

impl Coords for SmallCoords {
    type Key = [i128; 3];

    fn len(&self) -> usize {
        self.0.len()
    }

    fn join_key(&self, i: usize, j: usize) -> Option<[i128; 3]> {
        let a = self.0[i].map(i128::from);
        let b = self.0[j].map(i128::from);
        normalize_small([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    fn direction_key(&self, i: usize, j: usize) -> Option<[i128; 3]> {
        let a = self.0[i].map(i128::from);
        let b = self.0[j].map(i128::from);
        normalize_small([b[0] * a[2] - a[0] * b[2], b[1] * a[2] - a[1] * b[2], 0])
    }

    fn to_line(key: &[i128; 3]) -> ProjLine {
        ProjLine::from_coeffs(small_to_big(key)).expect("canonical key is nonzero")
    }
}

impl Coords for BigCoords {
    type Key = [BigInt; 3];

    fn len(&self) -> usize {
        self.0.len()
    }

    fn join_key(&self, i: usize, j: usize) -> Option<[BigInt; 3]> {
        normalize(cross(&self.0[i], &self.0[j])).ok()
    }

    fn direction_key(&self, i: usize, j: usize) -> Option<[BigInt; 3]> {
        let (a, b) = (&self.0[i], &self.0[j]);
        let v = [&b[0] * &a[2] - &a[0] * &b[2], &b[1] * &a[2] - &a[1] * &b[2], BigInt::zero()];
        normalize(v).ok()
    }

    fn to_line(key: &[BigInt; 3]) -> ProjLine {
        ProjLine::from_coeffs(key.clone()).expect("canonical key is nonzero")
    }
}
