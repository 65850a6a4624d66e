//! Exact points and lines of the real projective plane.
//!
//! Points and lines are integer triples reduced to a canonical
//! representative: the gcd of the entries is 1 and the first nonzero entry is
//! positive. Two projectively equal objects therefore compare equal
//! component-wise, so they can key hash maps directly.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub(crate) fn normalize(mut v: [BigInt; 3]) -> Result<[BigInt; 3]> {
    let g = v[0].gcd(&v[1]).gcd(&v[2]);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    if !g.is_one() {
        for c in v.iter_mut() {
            *c /= &g;
        }
    }
    let first = v.iter().find(|c| !c.is_zero()).expect("nonzero vector");
    if first.is_negative() {
        for c in v.iter_mut() {
            *c = -&*c;
        }
    }
    Ok(v)
}

pub(crate) fn cross(a: &[BigInt; 3], b: &[BigInt; 3]) -> [BigInt; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub(crate) fn dot(a: &[BigInt; 3], b: &[BigInt; 3]) -> BigInt {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

pub(crate) fn det3(a: &[BigInt; 3], b: &[BigInt; 3], c: &[BigInt; 3]) -> BigInt {
    dot(a, &cross(b, c))
}

/// Clears denominators of a rational triple, returning an integer triple
/// proportional to it.
pub(crate) fn clear_denominators(v: [&Rational; 3]) -> [BigInt; 3] {
    let l = v
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let scale = |r: &Rational| r.numer() * (&l / r.denom());
    [scale(v[0]), scale(v[1]), scale(v[2])]
}

/// A point of the real projective plane in canonical homogeneous coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    h: [BigInt; 3],
}

impl ProjPoint {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, z: impl Into<BigInt>) -> Result<Self> {
        Self::from_coords([x.into(), y.into(), z.into()])
    }

    pub fn from_coords(h: [BigInt; 3]) -> Result<Self> {
        Ok(ProjPoint { h: normalize(h)? })
    }

    /// The affine point `(x, y)`, i.e. `(x : y : 1)` with denominators cleared.
    pub fn affine(x: &Rational, y: &Rational) -> Self {
        let one = Rational::one();
        let h = clear_denominators([x, y, &one]);
        ProjPoint { h: normalize(h).expect("z is nonzero") }
    }

    /// Integer affine point.
    pub fn int(x: i64, y: i64) -> Self {
        ProjPoint::affine(&Rational::from_integer(x.into()), &Rational::from_integer(y.into()))
    }

    pub fn coords(&self) -> &[BigInt; 3] {
        &self.h
    }

    pub fn x(&self) -> &BigInt {
        &self.h[0]
    }

    pub fn y(&self) -> &BigInt {
        &self.h[1]
    }

    pub fn z(&self) -> &BigInt {
        &self.h[2]
    }

    pub fn is_at_infinity(&self) -> bool {
        self.h[2].is_zero()
    }

    /// Affine coordinates, or `None` for a point at infinity.
    pub fn to_affine(&self) -> Option<(Rational, Rational)> {
        if self.is_at_infinity() {
            return None;
        }
        let z = &self.h[2];
        Some((
            Rational::new(self.h[0].clone(), z.clone()),
            Rational::new(self.h[1].clone(), z.clone()),
        ))
    }

    /// Floating approximation of the affine coordinates (display only).
    pub fn to_f64(&self) -> Option<(f64, f64)> {
        let (x, y) = self.to_affine()?;
        Some((x.to_f64()?, y.to_f64()?))
    }

    /// The same point with its y coordinate negated.
    pub fn reflect_y(&self) -> Self {
        ProjPoint::from_coords([self.h[0].clone(), -&self.h[1], self.h[2].clone()])
            .expect("reflection of a nonzero vector")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {} : {})", self.h[0], self.h[1], self.h[2])
    }
}

/// The line `aX + bY + cZ = 0` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjLine {
    l: [BigInt; 3],
}

impl ProjLine {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Result<Self> {
        Self::from_coeffs([a.into(), b.into(), c.into()])
    }

    pub fn from_coeffs(l: [BigInt; 3]) -> Result<Self> {
        Ok(ProjLine { l: normalize(l)? })
    }

    pub fn at_infinity() -> Self {
        ProjLine { l: [BigInt::zero(), BigInt::zero(), BigInt::one()] }
    }

    pub fn coeffs(&self) -> &[BigInt; 3] {
        &self.l
    }

    pub fn is_at_infinity(&self) -> bool {
        self.l[0].is_zero() && self.l[1].is_zero()
    }

    /// The point where this line meets the line at infinity.
    pub fn direction(&self) -> Result<ProjPoint> {
        meet(self, &ProjLine::at_infinity())
    }

    /// Affine point of the line: `(t, y(t))` for non-vertical lines, `(x0, t)`
    /// for vertical ones. Fails for the line at infinity.
    pub fn lift(&self, t: &Rational) -> Result<ProjPoint> {
        let [a, b, c] = &self.l;
        if b.is_zero() && a.is_zero() {
            return Err(Error::PointAtInfinity);
        }
        if b.is_zero() {
            let x = Rational::new(-c, a.clone());
            Ok(ProjPoint::affine(&x, t))
        } else {
            let y = -(Rational::from_integer(a.clone()) * t + Rational::from_integer(c.clone()))
                / Rational::from_integer(b.clone());
            Ok(ProjPoint::affine(t, &y))
        }
    }
}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {} : {}]", self.l[0], self.l[1], self.l[2])
    }
}

/// Exact collinearity: the 3x3 determinant of the homogeneous rows vanishes.
pub fn collinear(p: &ProjPoint, q: &ProjPoint, r: &ProjPoint) -> bool {
    det3(&p.h, &q.h, &r.h).is_zero()
}

/// The line through two distinct points.
pub fn join(p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine> {
    ProjLine::from_coeffs(cross(&p.h, &q.h)).map_err(|_| Error::DegenerateJoin)
}

/// The common point of two distinct lines (possibly at infinity).
pub fn meet(l: &ProjLine, m: &ProjLine) -> Result<ProjPoint> {
    ProjPoint::from_coords(cross(&l.l, &m.l)).map_err(|_| Error::DegenerateMeet)
}

pub fn incident(p: &ProjPoint, l: &ProjLine) -> bool {
    dot(&p.h, &l.l).is_zero()
}

/// A nonsingular projective transformation, stored as an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projectivity {
    m: [[BigInt; 3]; 3],
}

impl Projectivity {
    /// Builds a transform from rational rows. Scaling the matrix does not
    /// change the projective map, so denominators are cleared.
    pub fn new(rows: [[Rational; 3]; 3]) -> Result<Self> {
        let l = rows
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let m = rows.map(|row| row.map(|r| r.numer() * (&l / r.denom())));
        Self::from_int(m)
    }

    pub fn from_int(m: [[BigInt; 3]; 3]) -> Result<Self> {
        if det3(&m[0], &m[1], &m[2]).is_zero() {
            return Err(Error::SingularTransform);
        }
        Ok(Projectivity { m })
    }

    pub fn from_i64(m: [[i64; 3]; 3]) -> Result<Self> {
        Self::from_int(m.map(|row| row.map(BigInt::from)))
    }

    pub fn identity() -> Self {
        Self::from_i64([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).expect("identity")
    }

    pub fn matrix(&self) -> &[[BigInt; 3]; 3] {
        &self.m
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        let h = self.m.clone().map(|row| dot(&row, &p.h));
        ProjPoint::from_coords(h).expect("nonsingular image is nonzero")
    }

    /// Image of a line: lines transform by the adjugate transpose.
    pub fn apply_line(&self, l: &ProjLine) -> ProjLine {
        let adj_t = self.cofactors();
        let c = adj_t.map(|row| dot(&row, &l.l));
        ProjLine::from_coeffs(c).expect("nonsingular image is nonzero")
    }

    /// Cofactor matrix, i.e. the transpose of the adjugate.
    fn cofactors(&self) -> [[BigInt; 3]; 3] {
        let [r0, r1, r2] = &self.m;
        // Rows of the cofactor matrix are the pairwise cross products of rows.
        [cross(r1, r2), cross(r2, r0), cross(r0, r1)]
    }
}

/// Convenience wrapper mirroring the free-function style of the other
/// predicates.
pub fn apply_transform(m: &Projectivity, p: &ProjPoint) -> ProjPoint {
    m.apply(p)
}

/// Signed affine ratio `AX / XB` of a point `X` on the line `AB`.
///
/// A point at infinity of the line has ratio −1. `A` and `B` must be affine
/// and distinct; `X = B` has no finite ratio and is rejected.
pub fn signed_ratio(x: &ProjPoint, a: &ProjPoint, b: &ProjPoint) -> Result<Rational> {
    let line = join(a, b)?;
    if !incident(x, &line) {
        return Err(Error::NotOnLine);
    }
    let (ax, ay) = a.to_affine().ok_or(Error::PointAtInfinity)?;
    let (bx, by) = b.to_affine().ok_or(Error::PointAtInfinity)?;
    let Some((xx, xy)) = x.to_affine() else {
        return Ok(-Rational::one());
    };
    if x == b {
        return Err(Error::RatioPole);
    }
    if ax != bx {
        Ok((&xx - &ax) / (&bx - &xx))
    } else {
        Ok((&xy - &ay) / (&by - &xy))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn pt(x: i64, y: i64, z: i64) -> ProjPoint {
        ProjPoint::new(x, y, z).unwrap()
    }

    fn ln(a: i64, b: i64, c: i64) -> ProjLine {
        ProjLine::new(a, b, c).unwrap()
    }

    #[test]
    fn affine_points_are_canonical() {
        assert_eq!(ProjPoint::affine(&q(1, 2), &q(3, 1)), pt(1, 6, 2));
        assert_eq!(ProjPoint::affine(&q(0, 1), &q(0, 1)).coords(), pt(0, 0, 1).coords());
        let p = ProjPoint::affine(&q(-2, 1), &q(3, 1));
        let c: Vec<i64> = p.coords().iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(c, vec![2, -3, -1]);
        assert_eq!(pt(-4, 6, 2), pt(2, -3, -1));
        assert_eq!(ProjPoint::new(0, 0, 0), Err(Error::ZeroVector));
    }

    #[test]
    fn collinearity_examples() {
        assert!(collinear(&ProjPoint::int(0, 0), &ProjPoint::int(1, 1), &ProjPoint::int(2, 2)));
        assert!(!collinear(&ProjPoint::int(-2, -8), &ProjPoint::int(1, 1), &ProjPoint::int(2, 8)));
        assert!(collinear(&ProjPoint::int(-3, -27), &ProjPoint::int(1, 1), &ProjPoint::int(2, 8)));
        assert!(!collinear(&pt(1, 0, 0), &pt(0, 1, 0), &pt(0, 0, 1)));
    }

    #[test]
    fn join_examples() {
        assert_eq!(join(&ProjPoint::int(0, 0), &ProjPoint::int(1, 1)).unwrap(), ln(1, -1, 0));
        assert_eq!(join(&pt(0, 0, 1), &pt(1, 1, 0)).unwrap(), ln(1, -1, 0));
        assert_eq!(join(&ProjPoint::int(1, 2), &ProjPoint::int(1, 5)).unwrap(), ln(1, 0, -1));
        assert_eq!(join(&pt(1, 2, 3), &pt(2, 4, 6)), Err(Error::DegenerateJoin));
    }

    #[test]
    fn meet_examples() {
        assert_eq!(meet(&ln(1, 0, -1), &ln(0, 1, -2)).unwrap(), pt(1, 2, 1));
        assert_eq!(meet(&ln(0, 1, 0), &ln(0, 1, -1)).unwrap(), pt(1, 0, 0));
        assert_eq!(meet(&ln(1, -1, 0), &ln(1, 1, -2)).unwrap(), pt(1, 1, 1));
        assert_eq!(meet(&ln(1, 1, 1), &ln(2, 2, 2)), Err(Error::DegenerateMeet));
    }

    #[test]
    fn incidence_examples() {
        assert!(incident(&ProjPoint::int(1, 1), &ln(1, -1, 0)));
        assert!(!incident(&pt(0, 0, 1), &ln(0, 0, 1)));
        assert!(incident(&pt(1, 0, 0), &ProjLine::at_infinity()));
    }

    #[test]
    fn transform_examples() {
        let p = ProjPoint::int(1, 2);
        assert_eq!(Projectivity::identity().apply(&p), p);
        let swap = Projectivity::from_i64([[0, 1, 0], [1, 0, 0], [0, 0, 1]]).unwrap();
        assert_eq!(swap.apply(&p), ProjPoint::int(2, 1));
        let m = Projectivity::from_i64([[1, 0, 0], [0, 0, 1], [0, 1, 0]]).unwrap();
        // swapping Y and Z sends the x-axis to infinity and fixes the points with y = 1
        for x in -3..=3 {
            assert!(m.apply(&ProjPoint::int(x, 0)).is_at_infinity());
            assert_eq!(m.apply(&ProjPoint::int(x, 1)), ProjPoint::int(x, 1));
        }
        assert_eq!(
            Projectivity::from_i64([[1, 2, 3], [2, 4, 6], [0, 0, 1]]),
            Err(Error::SingularTransform)
        );
    }

    #[test]
    fn line_images_follow_point_images() {
        let m = Projectivity::from_i64([[2, 1, 0], [0, 1, 3], [1, 0, 1]]).unwrap();
        let (p, q) = (ProjPoint::int(1, 4), ProjPoint::int(-2, 3));
        let l = join(&p, &q).unwrap();
        assert_eq!(m.apply_line(&l), join(&m.apply(&p), &m.apply(&q)).unwrap());
    }

    #[test]
    fn signed_ratio_examples() {
        let a = ProjPoint::int(0, 0);
        let b = ProjPoint::int(3, 0);
        let mid = ProjPoint::affine(&q(3, 2), &q(0, 1));
        assert_eq!(signed_ratio(&mid, &a, &b).unwrap(), q(1, 1));
        assert_eq!(signed_ratio(&a, &a, &b).unwrap(), q(0, 1));
        assert_eq!(signed_ratio(&ProjPoint::int(1, 0), &a, &b).unwrap(), q(1, 2));
        assert_eq!(signed_ratio(&pt(1, 0, 0), &a, &b).unwrap(), q(-1, 1));
        assert_eq!(signed_ratio(&b, &a, &b), Err(Error::RatioPole));
        assert_eq!(signed_ratio(&ProjPoint::int(1, 1), &a, &b), Err(Error::NotOnLine));
        // vertical side uses the y coordinate
        let c = ProjPoint::int(0, 4);
        assert_eq!(signed_ratio(&ProjPoint::int(0, 1), &a, &c).unwrap(), q(1, 3));
    }

    #[test]
    fn lift_stays_on_line() {
        let t = q(5, 7);
        for l in [ln(1, 0, -3), ln(2, 3, 1), ln(0, 1, -2)] {
            assert!(incident(&l.lift(&t).unwrap(), &l));
        }
        assert_eq!(ProjLine::at_infinity().lift(&t), Err(Error::PointAtInfinity));
    }
}
