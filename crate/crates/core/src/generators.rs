//! The classical near-optimal configurations and a few auxiliary sets.

use std::collections::HashSet;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{One, Pow};

use crate::error::{Error, Result};
use crate::projective::{collinear, join, ProjPoint, Rational};
use crate::rich_lines::PointSet;

fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// Three equidistant rows `y = 0, 1, 2`, each holding `x = 0..n`, labeled by row.
pub fn gen_parallel_aps(n: usize) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let rows = (0..3)
        .map(|y| (0..n as i64).map(|x| ProjPoint::int(x, y)).collect())
        .collect();
    PointSet::from_groups(rows)
}

/// Variant of [`gen_parallel_aps`] whose middle row has double density:
/// `x = 0, 1/2, 1, ..., n - 1`.
pub fn gen_parallel_aps_dense_middle(n: usize) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let outer = |y: i64| (0..n as i64).map(|x| ProjPoint::int(x, y)).collect::<Vec<_>>();
    let middle = (0..(2 * n - 1) as i64)
        .map(|h| ProjPoint::affine(&Rational::new(h.into(), 2.into()), &int(1)))
        .collect();
    PointSet::from_groups(vec![outer(0), middle, outer(2)])
}

/// The ratio set `{±1, ±2^±1, ..., ±2^±(n-1)}` in increasing order of exponent.
pub fn triangle_ratio_set(n: usize) -> Vec<Rational> {
    let two = Rational::from_integer(2.into());
    let mut out = Vec::with_capacity(4 * n - 2);
    for e in -(n as i64 - 1)..=(n as i64 - 1) {
        let mag = if e >= 0 { two.clone().pow(e as u32) } else { two.clone().pow((-e) as u32).recip() };
        out.push(mag.clone());
        out.push(-mag);
    }
    out
}

/// The point `X` on line `AB` with `AX / XB = r` (`r = -1` gives the
/// direction of the line).
pub fn point_with_ratio(a: &ProjPoint, b: &ProjPoint, r: &Rational) -> Result<ProjPoint> {
    let (ax, ay) = a.to_affine().ok_or(Error::PointAtInfinity)?;
    let (bx, by) = b.to_affine().ok_or(Error::PointAtInfinity)?;
    // X ~ A + r B in homogeneous coordinates with both ends scaled to z = 1.
    let x = &ax + r * &bx;
    let y = &ay + r * &by;
    let z = Rational::one() + r;
    let h = crate::projective::clear_denominators([&x, &y, &z]);
    ProjPoint::from_coords(h)
}

/// Points on the three side lines of a triangle with signed ratios drawn from
/// [`triangle_ratio_set`]. Group `i` lies on the side through `P(i-1)` and
/// `P(i+1)` (indices mod 3) and holds `4n - 2` points.
pub fn gen_triangle_ratios(n: usize, p1: &ProjPoint, p2: &ProjPoint, p3: &ProjPoint) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if collinear(p1, p2, p3) {
        return Err(Error::Degenerate("triangle vertices are collinear".into()));
    }
    let verts = [p1, p2, p3];
    let ratios = triangle_ratio_set(n);
    let mut groups = Vec::with_capacity(3);
    for i in 0..3 {
        let prev = verts[(i + 2) % 3];
        let next = verts[(i + 1) % 3];
        let side = ratios
            .iter()
            .map(|r| point_with_ratio(prev, next, r))
            .collect::<Result<Vec<_>>>()?;
        groups.push(side);
    }
    PointSet::from_groups(groups)
}

/// Triangle ratio configuration on the vertices `(0,0)`, `(1,0)`, `(0,1)`.
pub fn gen_triangle_ratios_default(n: usize) -> Result<PointSet> {
    gen_triangle_ratios(n, &ProjPoint::int(0, 0), &ProjPoint::int(1, 0), &ProjPoint::int(0, 1))
}

/// Chord-direction structure of a regular `n`-gon.
///
/// The vertices are irrational, so parallelism is recorded combinatorially:
/// chord `{i, j}` has direction class `(i + j) mod n`.
#[derive(Clone, Debug, PartialEq)]
pub struct NgonConfig {
    pub n: usize,
    /// Approximate vertex coordinates on the unit circle, for plotting only.
    pub float_vertices: Vec<(f64, f64)>,
}

impl NgonConfig {
    pub fn direction_class(&self, i: usize, j: usize) -> usize {
        (i + j) % self.n
    }

    pub fn chords(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| (i, j)))
    }

    pub fn chord_count(&self) -> usize {
        self.chords().count()
    }

    /// Number of distinct direction classes among all chords.
    pub fn class_count(&self) -> usize {
        self.chords().map(|(i, j)| self.direction_class(i, j)).collect::<HashSet<_>>().len()
    }

    /// Lines with two vertices and one direction point: every chord line.
    pub fn two_vertex_one_direction_lines(&self) -> usize {
        self.chord_count()
    }
}

pub fn gen_ngon_directions(n: usize) -> Result<NgonConfig> {
    if n < 3 {
        return Err(Error::invalid("a polygon needs n >= 3"));
    }
    let float_vertices = (0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            (t.cos(), t.sin())
        })
        .collect();
    Ok(NgonConfig { n, float_vertices })
}

/// Vertices (group 1) together with the distinct directions of their chords
/// (group 2), placed on the line at infinity.
pub fn with_chord_directions(vertices: Vec<ProjPoint>) -> Result<PointSet> {
    let mut dirs: Vec<ProjPoint> = Vec::new();
    let mut seen = HashSet::new();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            let d = join(&vertices[i], &vertices[j])?.direction()?;
            if seen.insert(d.clone()) {
                dirs.push(d);
            }
        }
    }
    PointSet::from_groups(vec![vertices, dirs])
}

/// The only regular polygon with rational vertices: the unit square.
pub fn unit_square() -> Vec<ProjPoint> {
    vec![ProjPoint::int(0, 0), ProjPoint::int(1, 0), ProjPoint::int(1, 1), ProjPoint::int(0, 1)]
}

/// `{(i, i^3) : i = -n..=n}` on the cuspidal cubic `y = x^3`.
pub fn gen_cubic_power(n: usize) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let n = n as i64;
    PointSet::new((-n..=n).map(|i| ProjPoint::new(i, BigInt::from(i).pow(3u32), 1).unwrap()).collect())
}

/// `{(i, i^2) : i = 1..=n}` on the parabola.
pub fn gen_parabola_ap(n: usize) -> Result<PointSet> {
    if n < 2 {
        return Err(Error::invalid("n must be at least 2"));
    }
    PointSet::new((1..=n as i64).map(|i| ProjPoint::int(i, i * i)).collect())
}

/// Integer grid `[0, k)^2`.
pub fn gen_grid(k: usize) -> Result<PointSet> {
    if k < 2 {
        return Err(Error::invalid("k must be at least 2"));
    }
    let k = k as i64;
    PointSet::new((0..k).flat_map(|x| (0..k).map(move |y| ProjPoint::int(x, y))).collect())
}

/// `{(x, x²) : -n ≤ x ≤ n}` together with the directions of slope
/// `-2n..=2n`.
pub fn gen_parabola_with_directions(n: usize) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let n = n as i64;
    let mut pts: Vec<ProjPoint> = (-n..=n).map(|x| ProjPoint::int(x, x * x)).collect();
    pts.extend((-2 * n..=2 * n).map(|s| ProjPoint::new(1, s, 0).unwrap()));
    PointSet::new(pts)
}

/// Points `(p, 1/p)` for `p = ±k, ±1/k` with `1 ≤ k ≤ n`, together with
/// every chord direction.
pub fn gen_hyperbola_with_directions(n: usize) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let mut params: Vec<Rational> = Vec::new();
    for k in 1..=n as i64 {
        for p in [q(k, 1), q(-k, 1), q(1, k), q(-1, k)] {
            if !params.contains(&p) {
                params.push(p);
            }
        }
    }
    let mut pts: Vec<ProjPoint> = params.iter().map(|p| ProjPoint::affine(p, &p.recip())).collect();
    let mut slopes: Vec<Rational> = Vec::new();
    for (i, p) in params.iter().enumerate() {
        for r in &params[i + 1..] {
            let s = -(p * r).recip();
            if !slopes.contains(&s) {
                slopes.push(s);
            }
        }
    }
    slopes.sort();
    pts.extend(slopes.iter().map(|s| ProjPoint::new(s.denom().clone(), s.numer().clone(), 0).unwrap()));
    PointSet::new(pts)
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Named configurations reachable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Example {
    ParallelAps,
    TriangleRatios,
    Ngon,
    CubicPower,
    ParabolaAp,
    Grid,
}

impl std::str::FromStr for Example {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "parallel-aps" => Example::ParallelAps,
            "triangle-ratios" => Example::TriangleRatios,
            "ngon" => Example::Ngon,
            "cubic-power" => Example::CubicPower,
            "parabola-ap" => Example::ParabolaAp,
            "grid" => Example::Grid,
            other => return Err(Error::Parse(format!("unknown example {other:?}"))),
        })
    }
}

impl Example {
    /// Builds the exact point set. The regular polygon has no exact form and
    /// is rejected here; use [`gen_ngon_directions`].
    pub fn point_set(self, n: usize) -> Result<PointSet> {
        match self {
            Example::ParallelAps => gen_parallel_aps(n),
            Example::TriangleRatios => gen_triangle_ratios_default(n),
            Example::CubicPower => gen_cubic_power(n),
            Example::ParabolaAp => gen_parabola_ap(n),
            Example::Grid => gen_grid(n),
            Example::Ngon => Err(Error::invalid("the regular polygon is combinatorial only")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::signed_ratio;
    use crate::rich_lines::{direction_count, triple_line_count, tripartite_count, Pattern};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn parallel_aps_small() {
        let h = gen_parallel_aps(3).unwrap();
        assert_eq!(h.len(), 9);
        assert_eq!(tripartite_count(&h, Pattern::new([1, 2, 3]).unwrap()).unwrap(), 5);
        let h = gen_parallel_aps(1).unwrap();
        assert_eq!(triple_line_count(&h).unwrap(), 1);
        assert!(gen_parallel_aps(0).is_err());
    }

    #[test]
    fn dense_middle_row() {
        let h = gen_parallel_aps_dense_middle(4).unwrap();
        assert_eq!(h.group(2).len(), 7);
        // every pair (x1, x3) now has a middle partner
        assert_eq!(tripartite_count(&h, Pattern::new([1, 2, 3]).unwrap()).unwrap(), 16);
    }

    #[test]
    fn triangle_ratio_points() {
        assert_eq!(triangle_ratio_set(1), vec![q(1, 1), q(-1, 1)]);
        assert_eq!(triangle_ratio_set(3).len(), 10);
        let h = gen_triangle_ratios_default(1).unwrap();
        for g in 1..=3 {
            assert_eq!(h.group(g).len(), 2);
        }
        // group 3 lies on the side P2-P1, i.e. through (1,0) and (0,0)
        let a = ProjPoint::int(0, 0);
        let b = ProjPoint::int(1, 0);
        let mid = ProjPoint::affine(&q(1, 2), &q(0, 1));
        assert_eq!(point_with_ratio(&a, &b, &q(1, 1)).unwrap(), mid);
        assert!(point_with_ratio(&a, &b, &q(-1, 1)).unwrap().is_at_infinity());
        let h = gen_triangle_ratios_default(4).unwrap();
        assert_eq!(h.len(), 3 * 14);
        // ratios round-trip through signed_ratio
        let verts = [ProjPoint::int(0, 0), ProjPoint::int(1, 0), ProjPoint::int(0, 1)];
        let ratios = triangle_ratio_set(4);
        for g in 1..=3u8 {
            let i = g as usize - 1;
            let (prev, next) = (&verts[(i + 2) % 3], &verts[(i + 1) % 3]);
            for (p, r) in h.group(g).into_iter().zip(&ratios) {
                assert_eq!(&signed_ratio(p, prev, next).unwrap(), r);
            }
        }
        assert!(gen_triangle_ratios(2, &verts[0], &ProjPoint::int(1, 1), &ProjPoint::int(2, 2)).is_err());
    }

    #[test]
    fn ngon_classes() {
        let c = gen_ngon_directions(4).unwrap();
        assert_eq!(c.class_count(), 4);
        assert_ne!(c.direction_class(0, 1), c.direction_class(1, 2));
        assert_eq!(c.direction_class(0, 1), c.direction_class(2, 3));
        let c = gen_ngon_directions(3).unwrap();
        assert_eq!((c.class_count(), c.chord_count()), (3, 3));
        assert!(gen_ngon_directions(2).is_err());
    }

    #[test]
    fn ngon_classes_match_float_geometry() {
        for n in 3..=12 {
            let c = gen_ngon_directions(n).unwrap();
            let v = &c.float_vertices;
            let chords: Vec<_> = c.chords().collect();
            for &(i, j) in &chords {
                for &(k, l) in &chords {
                    let (dx1, dy1) = (v[j].0 - v[i].0, v[j].1 - v[i].1);
                    let (dx2, dy2) = (v[l].0 - v[k].0, v[l].1 - v[k].1);
                    let parallel = (dx1 * dy2 - dy1 * dx2).abs() < 1e-9;
                    assert_eq!(parallel, c.direction_class(i, j) == c.direction_class(k, l), "n={n}");
                }
            }
        }
    }

    #[test]
    fn cubic_power_counts() {
        assert_eq!(triple_line_count(&gen_cubic_power(2).unwrap()).unwrap(), 2);
        assert_eq!(triple_line_count(&gen_cubic_power(1).unwrap()).unwrap(), 1);
        let n = 8i64;
        let mut zero_sum = 0;
        for a in -n..=n {
            for b in a + 1..=n {
                for c in b + 1..=n {
                    if a + b + c == 0 {
                        zero_sum += 1;
                    }
                }
            }
        }
        assert_eq!(triple_line_count(&gen_cubic_power(8).unwrap()).unwrap(), zero_sum);
    }

    #[test]
    fn parabola_and_grid() {
        assert_eq!(gen_parabola_ap(2).unwrap().len(), 2);
        assert_eq!(direction_count(&gen_parabola_ap(5).unwrap()).unwrap(), 7);
        assert_eq!(triple_line_count(&gen_parabola_ap(3).unwrap()).unwrap(), 0);
        assert_eq!(triple_line_count(&gen_grid(3).unwrap()).unwrap(), 8);
        assert_eq!(triple_line_count(&gen_grid(2).unwrap()).unwrap(), 0);
        assert_eq!(triple_line_count(&gen_grid(4).unwrap()).unwrap(), 14);
    }

    #[test]
    fn square_with_directions() {
        let h = with_chord_directions(unit_square()).unwrap();
        assert_eq!(h.group(2).len(), 4);
        assert_eq!(tripartite_count(&h, Pattern::new([1, 1, 2]).unwrap()).unwrap(), 6);
    }
}
