//! Group descriptions of collinearity on cubics and their degenerations.
//!
//! A description assigns to every regular point of the curve an element of
//! an Abelian group so that three points (no two on the same straight-line
//! piece) are collinear exactly when their values combine to the identity.

use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::cubic::CubicForm;
use crate::error::{Error, Result};
use crate::projective::{collinear, signed_ratio, ProjLine, ProjPoint, Rational};
use crate::rich_lines::PointSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operation {
    Additive,
    Multiplicative,
}

/// An element of `(Q, +)` or `(Q \ {0}, ·)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    value: Rational,
    op: Operation,
}

impl GroupElement {
    pub fn additive(value: Rational) -> Self {
        GroupElement { value, op: Operation::Additive }
    }

    pub fn multiplicative(value: Rational) -> Result<Self> {
        if value.is_zero() {
            return Err(Error::invalid("multiplicative group element must be nonzero"));
        }
        Ok(GroupElement { value, op: Operation::Multiplicative })
    }

    pub fn identity(op: Operation) -> Self {
        let value = match op {
            Operation::Additive => Rational::zero(),
            Operation::Multiplicative => Rational::one(),
        };
        GroupElement { value, op }
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn operation(&self) -> Operation {
        self.op
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.op)
    }

    pub fn combine(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.op != other.op {
            return Err(Error::invalid("cannot combine additive and multiplicative elements"));
        }
        let value = match self.op {
            Operation::Additive => &self.value + &other.value,
            Operation::Multiplicative => &self.value * &other.value,
        };
        Ok(GroupElement { value, op: self.op })
    }

    pub fn inverse(&self) -> GroupElement {
        let value = match self.op {
            Operation::Additive => -&self.value,
            Operation::Multiplicative => self.value.recip(),
        };
        GroupElement { value, op: self.op }
    }

    /// `k`-fold combination of the element with itself.
    pub fn times(&self, k: i64) -> GroupElement {
        let value = match self.op {
            Operation::Additive => &self.value * Rational::from_integer(k.into()),
            Operation::Multiplicative => num_traits::pow::Pow::pow(&self.value, k as i32),
        };
        GroupElement { value, op: self.op }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Whether the three elements combine to the identity.
pub fn sums_to_identity(e: [&GroupElement; 3]) -> Result<bool> {
    Ok(e[0].combine(e[1])?.combine(e[2])?.is_identity())
}

/// The point `(t, t³)` of the cuspidal cubic.
pub fn cuspidal_point(t: &Rational) -> ProjPoint {
    ProjPoint::affine(t, &(t * t * t))
}

/// Parameter of the third point on `y = x³` collinear with the points of
/// parameters `p` and `q`.
pub fn cuspidal_third(p: &Rational, q: &Rational) -> Result<Rational> {
    if p == q {
        return Err(Error::Degenerate("tangent chords are not used".into()));
    }
    Ok(-p - q)
}

/// The curve `y² = x³ + ax + b` with the chord-tangent group law and
/// identity `(0, 1, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassCurve {
    a: Rational,
    b: Rational,
}

impl WeierstrassCurve {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        let four = Rational::from_integer(4.into());
        let tw7 = Rational::from_integer(27.into());
        if (&four * &a * &a * &a + &tw7 * &b * &b).is_zero() {
            return Err(Error::Degenerate("singular Weierstrass curve".into()));
        }
        Ok(WeierstrassCurve { a, b })
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn identity() -> ProjPoint {
        ProjPoint::new(0, 1, 0).expect("nonzero")
    }

    pub fn cubic(&self) -> CubicForm {
        CubicForm::weierstrass(&self.a, &self.b)
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.cubic().contains(p)
    }

    fn check(&self, p: &ProjPoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::OffCurve(format!("{p} is not on y^2 = x^3 + ({})x + ({})", self.a, self.b)))
        }
    }

    /// Affine `x` for which `x³ + ax + b` is a rational square, lifted to
    /// the point with nonnegative `y`.
    pub fn lift(&self, x: &Rational) -> Option<ProjPoint> {
        let rhs = x * x * x + &self.a * x + &self.b;
        let y = rational_sqrt(&rhs)?;
        Some(ProjPoint::affine(x, &y))
    }

    /// Third intersection of the chord (or tangent) through `p` and `q`.
    pub fn third(&self, p: &ProjPoint, q: &ProjPoint) -> Result<ProjPoint> {
        self.check(p)?;
        self.check(q)?;
        let o = Self::identity();
        match (p == &o, q == &o) {
            (true, true) => return Ok(o),
            (true, false) => return Ok(q.reflect_y()),
            (false, true) => return Ok(p.reflect_y()),
            (false, false) => {}
        }
        let (x1, y1) = p.to_affine().expect("affine");
        let (x2, y2) = q.to_affine().expect("affine");
        let slope = if p == q {
            if y1.is_zero() {
                return Ok(o);
            }
            let three = Rational::from_integer(3.into());
            let two = Rational::from_integer(2.into());
            (three * &x1 * &x1 + &self.a) / (two * &y1)
        } else if x1 == x2 {
            return Ok(o);
        } else {
            (&y2 - &y1) / (&x2 - &x1)
        };
        let x3 = &slope * &slope - &x1 - &x2;
        let y3 = &y1 + &slope * (&x3 - &x1);
        Ok(ProjPoint::affine(&x3, &y3))
    }

    pub fn neg(&self, p: &ProjPoint) -> Result<ProjPoint> {
        self.check(p)?;
        Ok(p.reflect_y())
    }

    pub fn add(&self, p: &ProjPoint, q: &ProjPoint) -> Result<ProjPoint> {
        Ok(self.third(p, q)?.reflect_y())
    }

    /// `k`-fold sum by double-and-add.
    pub fn mul(&self, p: &ProjPoint, k: i64) -> Result<ProjPoint> {
        self.check(p)?;
        let mut base = if k < 0 { p.reflect_y() } else { p.clone() };
        let mut k = k.unsigned_abs();
        let mut acc = Self::identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            base = self.add(&base, &base)?;
            k >>= 1;
        }
        Ok(acc)
    }
}

pub fn weierstrass_third(a: &Rational, b: &Rational, p: &ProjPoint, q: &ProjPoint) -> Result<ProjPoint> {
    WeierstrassCurve::new(a.clone(), b.clone())?.third(p, q)
}

pub fn weierstrass_add(a: &Rational, b: &Rational, p: &ProjPoint, q: &ProjPoint) -> Result<ProjPoint> {
    WeierstrassCurve::new(a.clone(), b.clone())?.add(p, q)
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    use num_traits::Signed;
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Rational::new(sn, sd))
}

/// A nondegenerate affine triangle `P1 P2 P3`; side `i` is the line through
/// `P(i-1)` and `P(i+1)` (indices mod 3).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle {
    vertices: [ProjPoint; 3],
}

impl Triangle {
    pub fn new(p1: ProjPoint, p2: ProjPoint, p3: ProjPoint) -> Result<Self> {
        if [&p1, &p2, &p3].iter().any(|p| p.is_at_infinity()) {
            return Err(Error::PointAtInfinity);
        }
        if collinear(&p1, &p2, &p3) {
            return Err(Error::Degenerate("triangle vertices are collinear".into()));
        }
        Ok(Triangle { vertices: [p1, p2, p3] })
    }

    pub fn standard() -> Self {
        Self::new(ProjPoint::int(0, 0), ProjPoint::int(1, 0), ProjPoint::int(0, 1)).expect("nondegenerate")
    }

    pub fn vertices(&self) -> &[ProjPoint; 3] {
        &self.vertices
    }

    /// Endpoints `(P(i-1), P(i+1))` of side `i` (0-based).
    pub fn side_ends(&self, i: usize) -> (&ProjPoint, &ProjPoint) {
        (&self.vertices[(i + 2) % 3], &self.vertices[(i + 1) % 3])
    }

    pub fn side(&self, i: usize) -> ProjLine {
        let (a, b) = self.side_ends(i);
        crate::projective::join(a, b).expect("distinct vertices")
    }

    /// `u = X P(i-1) / X P(i+1)` for a point `X` on side `i`.
    pub fn menelaus_value(&self, i: usize, x: &ProjPoint) -> Result<GroupElement> {
        let (prev, next) = self.side_ends(i);
        if x == prev || x == next {
            return Err(Error::Degenerate(format!("point {x} is a vertex")));
        }
        GroupElement::multiplicative(-signed_ratio(x, prev, next)?)
    }
}

/// Menelaus values of points on the three sides, and whether their product
/// is the identity (equivalently, whether the points are collinear).
pub fn menelaus_params(tri: &Triangle, xs: [&ProjPoint; 3]) -> Result<([GroupElement; 3], bool)> {
    let u = [
        tri.menelaus_value(0, xs[0])?,
        tri.menelaus_value(1, xs[1])?,
        tri.menelaus_value(2, xs[2])?,
    ];
    let ok = sums_to_identity([&u[0], &u[1], &u[2]])?;
    Ok((u, ok))
}

/// Values for `(x1, 0)`, `(x2, 1)`, `(x3, 2)`: collinear iff they sum to 0.
pub fn parallel_lines_params(x1: &Rational, x2: &Rational, x3: &Rational) -> [GroupElement; 3] {
    let two = Rational::from_integer(2.into());
    [
        GroupElement::additive(x1.clone()),
        GroupElement::additive(-(two * x2)),
        GroupElement::additive(x3.clone()),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConicVariant {
    /// `y = x²`, parametrized by `x`, additive.
    Parabola,
    /// `xy = 1`, parametrized by `x`, multiplicative.
    Hyperbola,
}

fn direction_slope(d: &ProjPoint) -> Result<Rational> {
    if !d.is_at_infinity() {
        return Err(Error::invalid("direction must be a point at infinity"));
    }
    if d.x().is_zero() {
        return Err(Error::Degenerate("vertical direction has no group value".into()));
    }
    Ok(Rational::new(d.y().clone(), d.x().clone()))
}

/// Values of two conic points with parameters `p`, `q` and a direction `d`.
pub fn conic_line_params(
    variant: ConicVariant,
    p: &Rational,
    q: &Rational,
    d: &ProjPoint,
) -> Result<[GroupElement; 3]> {
    if p == q {
        return Err(Error::Degenerate("conic points coincide".into()));
    }
    let s = direction_slope(d)?;
    match variant {
        ConicVariant::Parabola => Ok([
            GroupElement::additive(p.clone()),
            GroupElement::additive(q.clone()),
            GroupElement::additive(-s),
        ]),
        ConicVariant::Hyperbola => Ok([
            GroupElement::multiplicative(p.clone())?,
            GroupElement::multiplicative(q.clone())?,
            GroupElement::multiplicative(-s)?,
        ]),
    }
}

/// Value attached to a point by a description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupValue {
    Scalar(GroupElement),
    Point(ProjPoint),
}

/// Which piece of the curve a point lies on. Two points on the same
/// straight-line piece never form part of a tested triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    pub index: u8,
    pub is_line: bool,
}

const CURVE: Piece = Piece { index: 0, is_line: false };

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DescriptionKind {
    CuspidalCubic,
    Weierstrass,
    ThreeParallelLines,
    TriangleMenelaus,
    ParabolaPlusInfinity,
    HyperbolaPlusInfinity,
    ConcurrentLines,
}

/// The concrete curve families with a shipped group description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupDescription {
    /// `y = x³`, value `x`, additive.
    CuspidalCubic,
    /// Chord-tangent law, value the point itself.
    Weierstrass(WeierstrassCurve),
    /// `y = 0, 1, 2` as pieces 1, 2, 3 with values `x, -2x, x`, additive.
    ThreeParallelLines,
    /// Sides of a triangle with Menelaus values, multiplicative.
    TriangleMenelaus(Triangle),
    /// `y = x²` plus the line at infinity, additive.
    ParabolaPlusInfinity,
    /// `xy = 1` plus the line at infinity, multiplicative.
    HyperbolaPlusInfinity,
    /// `y = 0`, `x = 0`, `y = x` through the origin as pieces 1, 2, 3 with
    /// values `1/x`, `1/y`, `-1/x`, additive.
    ConcurrentLines,
}

impl GroupDescription {
    pub fn kind(&self) -> DescriptionKind {
        match self {
            GroupDescription::CuspidalCubic => DescriptionKind::CuspidalCubic,
            GroupDescription::Weierstrass(_) => DescriptionKind::Weierstrass,
            GroupDescription::ThreeParallelLines => DescriptionKind::ThreeParallelLines,
            GroupDescription::TriangleMenelaus(_) => DescriptionKind::TriangleMenelaus,
            GroupDescription::ParabolaPlusInfinity => DescriptionKind::ParabolaPlusInfinity,
            GroupDescription::HyperbolaPlusInfinity => DescriptionKind::HyperbolaPlusInfinity,
            GroupDescription::ConcurrentLines => DescriptionKind::ConcurrentLines,
        }
    }

    pub fn operation(&self) -> Option<Operation> {
        match self {
            GroupDescription::Weierstrass(_) => None,
            GroupDescription::TriangleMenelaus(_) | GroupDescription::HyperbolaPlusInfinity => {
                Some(Operation::Multiplicative)
            }
            _ => Some(Operation::Additive),
        }
    }

    /// Piece and group value of a regular point of the curve.
    pub fn evaluate(&self, p: &ProjPoint) -> Result<(Piece, GroupValue)> {
        let off = || Error::OffCurve(format!("{p} is not a regular point of the {:?} curve", self.kind()));
        let add = |v: Rational| GroupValue::Scalar(GroupElement::additive(v));
        let line = |i: u8| Piece { index: i, is_line: true };
        let [x, y, z] = p.coords().clone();
        match self {
            GroupDescription::CuspidalCubic => {
                if p.is_at_infinity() || !CubicForm::cuspidal().contains(p) {
                    return Err(off());
                }
                Ok((CURVE, add(Rational::new(x, z))))
            }
            GroupDescription::Weierstrass(c) => {
                if !c.contains(p) {
                    return Err(off());
                }
                Ok((CURVE, GroupValue::Point(p.clone())))
            }
            GroupDescription::ThreeParallelLines => {
                let (ax, ay) = p.to_affine().ok_or_else(off)?;
                let two = Rational::from_integer(2.into());
                let k = (0..3).find(|&k| ay == Rational::from_integer(k.into())).ok_or_else(off)?;
                let v = if k == 1 { -(two * ax) } else { ax };
                Ok((line(k as u8 + 1), add(v)))
            }
            GroupDescription::TriangleMenelaus(t) => {
                let i = (0..3).find(|&i| crate::projective::incident(p, &t.side(i))).ok_or_else(off)?;
                let u = t.menelaus_value(i, p).map_err(|_| off())?;
                Ok((line(i as u8 + 1), GroupValue::Scalar(u)))
            }
            GroupDescription::ParabolaPlusInfinity => {
                if p.is_at_infinity() {
                    let s = direction_slope(p).map_err(|_| off())?;
                    return Ok((line(2), add(-s)));
                }
                let (ax, ay) = p.to_affine().expect("affine");
                if &ax * &ax != ay {
                    return Err(off());
                }
                Ok((Piece { index: 1, is_line: false }, add(ax)))
            }
            GroupDescription::HyperbolaPlusInfinity => {
                if p.is_at_infinity() {
                    let s = direction_slope(p).map_err(|_| off())?;
                    let v = GroupElement::multiplicative(-s).map_err(|_| off())?;
                    return Ok((line(2), GroupValue::Scalar(v)));
                }
                let (ax, ay) = p.to_affine().expect("affine");
                if &ax * &ay != Rational::one() {
                    return Err(off());
                }
                Ok((Piece { index: 1, is_line: false }, GroupValue::Scalar(GroupElement::multiplicative(ax)?)))
            }
            GroupDescription::ConcurrentLines => {
                // projective values: a point (X, 0, Z) of y = 0 gets Z/X, so
                // its point at infinity is the identity
                if x.is_zero() && y.is_zero() {
                    return Err(off());
                }
                if y.is_zero() {
                    Ok((line(1), add(Rational::new(z, x))))
                } else if x.is_zero() {
                    Ok((line(2), add(Rational::new(z, y))))
                } else if x == y {
                    Ok((line(3), add(-Rational::new(z, x))))
                } else {
                    Err(off())
                }
            }
        }
    }

    /// Whether a triple of pieces is one the description speaks about: no
    /// two points on the same straight line, and for a conic plus the line
    /// at infinity exactly two points on the conic.
    pub fn admissible(&self, pieces: [Piece; 3]) -> bool {
        let same_line = |a: Piece, b: Piece| a.is_line && a == b;
        if same_line(pieces[0], pieces[1]) || same_line(pieces[0], pieces[2]) || same_line(pieces[1], pieces[2]) {
            return false;
        }
        match self {
            GroupDescription::ParabolaPlusInfinity | GroupDescription::HyperbolaPlusInfinity => {
                pieces.iter().filter(|p| p.is_line).count() == 1
            }
            _ => true,
        }
    }

    fn identity_holds(&self, v: [&GroupValue; 3]) -> Result<bool> {
        match (self, v) {
            (GroupDescription::Weierstrass(c), [GroupValue::Point(p), GroupValue::Point(q), GroupValue::Point(r)]) => {
                Ok(c.add(&c.add(p, q)?, r)? == WeierstrassCurve::identity())
            }
            (_, [GroupValue::Scalar(a), GroupValue::Scalar(b), GroupValue::Scalar(c)]) => sums_to_identity([a, b, c]),
            _ => Err(Error::invalid("group values do not match the description")),
        }
    }
}

/// Outcome of an exhaustive description check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupCheckReport {
    /// Triples tested.
    pub checked: u64,
    /// Tested triples that are collinear.
    pub collinear: u64,
    /// Triples where collinearity and the group identity disagree.
    pub failures: u64,
}

impl GroupCheckReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn label_triples(config: &PointSet) -> Vec<(usize, usize, usize)> {
    let n = config.len();
    match config.labels() {
        Some(labels) => {
            let idx = |g: u8| (0..n).filter(|&i| labels[i] == g).collect::<Vec<_>>();
            let (g1, g2, g3) = (idx(1), idx(2), idx(3));
            let mut out = Vec::new();
            for &i in &g1 {
                for &j in &g2 {
                    for &k in &g3 {
                        out.push((i, j, k));
                    }
                }
            }
            out
        }
        None => {
            let mut out = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        out.push((i, j, k));
                    }
                }
            }
            out
        }
    }
}

/// Checks `collinear ⟺ identity` on every admissible triple using the
/// supplied pieces and values.
pub fn check_values(
    desc: &GroupDescription,
    config: &PointSet,
    pieces: &[Piece],
    values: &[GroupValue],
) -> Result<GroupCheckReport> {
    let pts = config.points();
    if pieces.len() != pts.len() || values.len() != pts.len() {
        return Err(Error::invalid("one piece and value per point required"));
    }
    let triples = label_triples(config);
    triples
        .par_iter()
        .filter(|&&(i, j, k)| desc.admissible([pieces[i], pieces[j], pieces[k]]))
        .map(|&(i, j, k)| -> Result<GroupCheckReport> {
            let col = collinear(&pts[i], &pts[j], &pts[k]);
            let id = desc.identity_holds([&values[i], &values[j], &values[k]])?;
            Ok(GroupCheckReport { checked: 1, collinear: col as u64, failures: (col != id) as u64 })
        })
        .try_reduce(GroupCheckReport::default, |a, b| {
            Ok(GroupCheckReport {
                checked: a.checked + b.checked,
                collinear: a.collinear + b.collinear,
                failures: a.failures + b.failures,
            })
        })
}

/// Evaluates the description on every point and checks all admissible
/// triples. With labels, triples take one point from each group and every
/// label must match the piece for descriptions made of three lines.
pub fn group_check(config: &PointSet, desc: &GroupDescription) -> Result<GroupCheckReport> {
    let evaluated = config.points().iter().map(|p| desc.evaluate(p)).collect::<Result<Vec<_>>>()?;
    let (pieces, values): (Vec<Piece>, Vec<GroupValue>) = evaluated.into_iter().unzip();
    let three_lines = matches!(
        desc.kind(),
        DescriptionKind::ThreeParallelLines | DescriptionKind::TriangleMenelaus | DescriptionKind::ConcurrentLines
    );
    if let (true, Some(labels)) = (three_lines, config.labels()) {
        for (i, (piece, label)) in pieces.iter().zip(labels).enumerate() {
            if piece.index != *label {
                return Err(Error::OffCurve(format!(
                    "point {} labeled {label} lies on piece {}",
                    config.points()[i],
                    piece.index
                )));
            }
        }
    }
    check_values(desc, config, &pieces, &values)
}

pub fn verify_group_description(config: &PointSet, desc: &GroupDescription) -> Result<bool> {
    Ok(group_check(config, desc)?.passed())
}

/// Membership in the unit sphere via the additive description
/// `f(t) = t² - 1/3`: returns whether `(x, y, z)` is on the sphere and the
/// value sum.
pub fn sphere_membership(x: &Rational, y: &Rational, z: &Rational) -> (bool, Rational) {
    let third = Rational::new(1.into(), 3.into());
    let sum: Rational = [x, y, z].iter().map(|t| *t * *t - &third).sum();
    let on = x * x + y * y + z * z == Rational::one();
    (on, sum)
}
