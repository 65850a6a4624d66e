//! Collinearity with the parabola `y = x²` through an external point, the
//! induced involutions of the parabola, and their 4-vector representatives.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::projective::{ProjLine, ProjPoint, Projectivity, Rational};

/// A point `(a, b)` off the parabola `y = x²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExternalPoint {
    a: Rational,
    b: Rational,
}

impl ExternalPoint {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        if &a * &a == b {
            return Err(Error::invalid(format!("({a}, {b}) lies on the parabola")));
        }
        Ok(ExternalPoint { a, b })
    }

    pub fn int(a: i64, b: i64) -> Result<Self> {
        Self::new(Rational::from_integer(a.into()), Rational::from_integer(b.into()))
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn point(&self) -> ProjPoint {
        ProjPoint::affine(&self.a, &self.b)
    }

    pub fn rep4(&self) -> Rep4 {
        Rep4([self.a.clone(), -&self.b, Rational::one(), -&self.a])
    }
}

/// The representative `(a, -b, 1, -a)` of an external point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rep4(pub [Rational; 4]);

impl Rep4 {
    pub fn coords(&self) -> &[Rational; 4] {
        &self.0
    }
}

/// Whether `(x, x²)`, `(y, y²)` and `E` are collinear, via
/// `xy - ax - ay + b = 0`.
pub fn parabola_collinear(x: &Rational, y: &Rational, e: &ExternalPoint) -> Result<bool> {
    if x == y {
        return Err(Error::invalid("parabola points must be distinct"));
    }
    Ok((x * y - &e.a * x - &e.a * y + &e.b).is_zero())
}

/// `(ax - b) / (x - a)`, the partner of `x` under the involution through `E`.
pub fn involution_value(e: &ExternalPoint, x: &Rational) -> Result<Rational> {
    if *x == e.a {
        return Err(Error::RatioPole);
    }
    Ok((&e.a * x - &e.b) / (x - &e.a))
}

/// Number of `x` in the sample whose partner is a different element of the
/// sample.
pub fn image_count(e: &ExternalPoint, xs: &[Rational]) -> usize {
    let set: HashSet<&Rational> = xs.iter().collect();
    let distinct: Vec<&Rational> = set.iter().copied().collect();
    distinct
        .par_iter()
        .filter(|x| match involution_value(e, x) {
            Ok(y) => y != ***x && set.contains(&y),
            Err(_) => false,
        })
        .count()
}

/// Keeps the external points whose image count on `xs` reaches `threshold`.
pub fn filter_by_image_count(points: &[ExternalPoint], xs: &[Rational], threshold: usize) -> Vec<ExternalPoint> {
    points.iter().filter(|e| image_count(e, xs) >= threshold).cloned().collect()
}

fn diffs(e1: &ExternalPoint, e2: &ExternalPoint, e3: &ExternalPoint) -> Result<([Rational; 4], [Rational; 4])> {
    if e1 == e2 || e1 == e3 || e2 == e3 {
        return Err(Error::invalid("external points must be distinct"));
    }
    let (r1, r2, r3) = (e1.rep4(), e2.rep4(), e3.rep4());
    let d = |r: &Rep4| std::array::from_fn(|i| &r.0[i] - &r1.0[i]);
    Ok((d(&r2), d(&r3)))
}

/// Whether the three representatives are affinely dependent, i.e. the
/// differences from the first span at most a line.
pub fn reps_collinear(e1: &ExternalPoint, e2: &ExternalPoint, e3: &ExternalPoint) -> Result<bool> {
    let (u, v) = diffs(e1, e2, e3)?;
    for i in 0..4 {
        for j in i + 1..4 {
            if &u[i] * &v[j] != &u[j] * &v[i] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `λ` with `rep(E3) = λ·rep(E1) + (1 - λ)·rep(E2)`, when it exists.
pub fn affine_coefficient(e1: &ExternalPoint, e2: &ExternalPoint, e3: &ExternalPoint) -> Result<Option<Rational>> {
    if !reps_collinear(e1, e2, e3)? {
        return Ok(None);
    }
    // rep3 - rep2 = λ (rep1 - rep2)
    let (r1, r2, r3) = (e1.rep4(), e2.rep4(), e3.rep4());
    let i = (0..4).find(|&i| r1.0[i] != r2.0[i]).expect("distinct points have distinct representatives");
    Ok(Some((&r3.0[i] - &r2.0[i]) / (&r1.0[i] - &r2.0[i])))
}

/// A projectivity sending `l` to the line at infinity.
pub fn send_line_to_infinity(l: &ProjLine) -> Projectivity {
    let lc = l.coeffs().clone();
    let unit = |i: usize| -> [BigInt; 3] { std::array::from_fn(|k| if k == i { BigInt::one() } else { BigInt::zero() }) };
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if let Ok(m) = Projectivity::from_int([unit(i), unit(j), lc.clone()]) {
            return m;
        }
    }
    unreachable!("a nonzero line completes to a basis with two unit rows")
}
