//! Collinear triples across three algebraic curves, counted directly on
//! lifted sample points, and small experiments around the cubic dichotomy.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group_law::WeierstrassCurve;
use crate::projective::{incident, join, ProjLine, ProjPoint, Rational};
use crate::rich_lines::{direction_count, k_rich_count, spanned_lines, triple_line_count, PointSet};

type LiftFn = Arc<dyn Fn(&Rational) -> Vec<ProjPoint> + Send + Sync>;

/// A plane curve `F(x, y) = 0` given by integer terms `c·x^i·y^j`,
/// together with a rule producing its points over a sample `x`.
#[derive(Clone)]
pub struct CustomCurve {
    name: String,
    terms: Vec<((u32, u32), BigInt)>,
    lift: LiftFn,
}

impl CustomCurve {
    pub fn new(
        name: impl Into<String>,
        terms: Vec<((u32, u32), BigInt)>,
        lift: impl Fn(&Rational) -> Vec<ProjPoint> + Send + Sync + 'static,
    ) -> Result<Self> {
        if terms.iter().all(|(_, c)| c.is_zero()) {
            return Err(Error::ZeroVector);
        }
        Ok(CustomCurve { name: name.into(), terms, lift: Arc::new(lift) })
    }

    /// Product of the given non-vertical lines, lifted line by line.
    pub fn union_of_lines(lines: Vec<ProjLine>) -> Result<Self> {
        if lines.is_empty() || lines.iter().any(|l| l.coeffs()[1].is_zero()) {
            return Err(Error::invalid("union of lines needs non-vertical lines"));
        }
        let mut poly: HashMap<(u32, u32), BigInt> = HashMap::from([((0, 0), BigInt::one())]);
        for l in &lines {
            let [a, b, c] = l.coeffs();
            let mut next = HashMap::new();
            for ((i, j), v) in &poly {
                for ((di, dj), w) in [((1, 0), a), ((0, 1), b), ((0, 0), c)] {
                    *next.entry((i + di, j + dj)).or_insert_with(BigInt::zero) += v * w;
                }
            }
            poly = next;
        }
        let mut terms: Vec<_> = poly.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort();
        let name = format!("union of {} lines", lines.len());
        Self::new(name, terms, move |x| lines.iter().filter_map(|l| l.lift(x).ok()).collect())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().filter(|(_, c)| !c.is_zero()).map(|((i, j), _)| i + j).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|((i, j), c)| Rational::from_integer(c.clone()) * Pow::pow(x, *i) * Pow::pow(y, *j))
            .sum()
    }
}

impl fmt::Debug for CustomCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomCurve").field("name", &self.name).field("terms", &self.terms).finish()
    }
}

#[derive(Clone, Debug)]
pub enum CurveSpec {
    /// `y = x^d`
    GraphPower(u32),
    Weierstrass(WeierstrassCurve),
    Line(ProjLine),
    /// `y = x²`
    Parabola,
    Custom(CustomCurve),
}

impl CurveSpec {
    pub fn degree(&self) -> u32 {
        match self {
            CurveSpec::GraphPower(d) => (*d).max(1),
            CurveSpec::Weierstrass(_) => 3,
            CurveSpec::Line(_) => 1,
            CurveSpec::Parabola => 2,
            CurveSpec::Custom(c) => c.degree(),
        }
    }

    /// Known to be irreducible, so a line meets it in at most `degree`
    /// points unless contained in it.
    pub fn is_irreducible(&self) -> bool {
        !matches!(self, CurveSpec::Custom(_))
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        match self {
            CurveSpec::Weierstrass(c) => c.contains(p),
            CurveSpec::Line(l) => incident(p, l),
            _ => match p.to_affine() {
                None => false,
                Some((x, y)) => match self {
                    CurveSpec::GraphPower(d) => y == Pow::pow(&x, *d),
                    CurveSpec::Parabola => y == &x * &x,
                    CurveSpec::Custom(c) => c.eval(&x, &y).is_zero(),
                    _ => unreachable!(),
                },
            },
        }
    }

    /// Points of the curve over the sample `x`; empty when there is none.
    pub fn lift(&self, x: &Rational) -> Vec<ProjPoint> {
        match self {
            CurveSpec::GraphPower(d) => vec![ProjPoint::affine(x, &Pow::pow(x, *d))],
            CurveSpec::Parabola => vec![ProjPoint::affine(x, &(x * x))],
            CurveSpec::Line(l) => l.lift(x).into_iter().collect(),
            CurveSpec::Weierstrass(c) => match c.lift(x) {
                None => vec![],
                Some(p) => {
                    let q = p.reflect_y();
                    if q == p {
                        vec![p]
                    } else {
                        vec![p, q]
                    }
                }
            },
            CurveSpec::Custom(c) => (c.lift)(x),
        }
    }
}

/// Lifted points in sample order without repeats, plus the samples that
/// produced no point.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lifted {
    pub points: Vec<ProjPoint>,
    pub failures: Vec<Rational>,
}

pub fn lift_samples(curve: &CurveSpec, xs: &[Rational]) -> Result<Lifted> {
    let mut seen = HashSet::new();
    let mut out = Lifted::default();
    for x in xs {
        let pts = curve.lift(x);
        if pts.is_empty() {
            out.failures.push(x.clone());
        }
        for p in pts {
            if !curve.contains(&p) {
                return Err(Error::OffCurve(format!("lifting {x} gave {p}")));
            }
            if seen.insert(p.clone()) {
                out.points.push(p);
            }
        }
    }
    Ok(out)
}

/// Integer samples `lo..=hi`.
pub fn int_range(lo: i64, hi: i64) -> Vec<Rational> {
    (lo..=hi).map(|i| Rational::from_integer(i.into())).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TripartiteCounts {
    /// Ordered triples `(P1, P2, P3)` of distinct collinear points with
    /// `Pi` lifted from curve `i`.
    pub collinear_triples: usize,
    /// Lines carrying at least one such triple.
    pub distinct_lines: usize,
    /// Samples with no point, per curve.
    pub failures: [Vec<Rational>; 3],
}

fn count_lifted(h: [&[ProjPoint]; 3]) -> (usize, HashSet<ProjLine>) {
    let h3_set: HashSet<&ProjPoint> = h[2].iter().collect();
    h[0].par_iter()
        .map(|p1| {
            let mut bucket: HashMap<ProjLine, usize> = HashMap::new();
            for p3 in h[2] {
                if p3 != p1 {
                    *bucket.entry(join(p1, p3).expect("distinct points")).or_insert(0) += 1;
                }
            }
            let mut triples = 0;
            let mut lines = HashSet::new();
            for p2 in h[1] {
                if p2 == p1 {
                    continue;
                }
                let l = join(p1, p2).expect("distinct points");
                let Some(&m) = bucket.get(&l) else { continue };
                let m = m - usize::from(h3_set.contains(p2));
                if m > 0 {
                    triples += m;
                    lines.insert(l);
                }
            }
            (triples, lines)
        })
        .reduce(
            || (0, HashSet::new()),
            |(t1, mut l1), (t2, l2)| {
                l1.extend(l2);
                (t1 + t2, l1)
            },
        )
}

/// Counts collinear cross-curve triples and the lines carrying them.
pub fn tripartite_curve_count(curves: [&CurveSpec; 3], xs: [&[Rational]; 3]) -> Result<TripartiteCounts> {
    let lifted = [lift_samples(curves[0], xs[0])?, lift_samples(curves[1], xs[1])?, lift_samples(curves[2], xs[2])?];
    let (collinear_triples, lines) =
        count_lifted([&lifted[0].points, &lifted[1].points, &lifted[2].points]);
    let [l0, l1, l2] = lifted;
    Ok(TripartiteCounts {
        collinear_triples,
        distinct_lines: lines.len(),
        failures: [l0.failures, l1.failures, l2.failures],
    })
}

fn lifted_set(curve: &CurveSpec, xs: &[Rational]) -> Result<PointSet> {
    PointSet::new(lift_samples(curve, xs)?.points)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DichotomyRow {
    pub degree: u32,
    pub n: usize,
    /// Triple lines of `{(i, i^d) : -n ≤ i ≤ n}`.
    pub count: usize,
    /// `count / n²`
    pub ratio_n2: f64,
    /// `count / (N²/8)` with `N = 2n + 1`.
    pub ratio_cubic: f64,
}

/// Triple-line counts of integer samples on `y = x^d` for every degree and
/// size. Evidence at desk scale, not a verification of asymptotics.
pub fn dichotomy_experiment(degrees: &[u32], sizes: &[usize]) -> Result<Vec<DichotomyRow>> {
    let mut rows = Vec::new();
    for &d in degrees {
        for &n in sizes {
            let xs = int_range(-(n as i64), n as i64);
            let set = lifted_set(&CurveSpec::GraphPower(d), &xs)?;
            let count = if set.len() < 3 { 0 } else { triple_line_count(&set)? };
            let big_n = (2 * n + 1) as f64;
            rows.push(DichotomyRow {
                degree: d,
                n,
                count,
                ratio_n2: count as f64 / (n as f64 * n as f64),
                ratio_cubic: count as f64 / (big_n * big_n / 8.0),
            });
        }
    }
    Ok(rows)
}

/// Lines containing at least four lifted points.
pub fn quadruple_experiment(curve: &CurveSpec, xs: &[Rational]) -> Result<usize> {
    let set = lifted_set(curve, xs)?;
    if set.len() < 4 {
        return Ok(0);
    }
    k_rich_count(&spanned_lines(&set)?, 4, false)
}

/// Distinct directions spanned by the lifted points.
pub fn few_directions_experiment(curve: &CurveSpec, xs: &[Rational]) -> Result<usize> {
    let set = lifted_set(curve, xs)?;
    if set.len() < 2 {
        return Ok(0);
    }
    direction_count(&set)
}

/// For an irreducible curve, no line through lifted points carries more
/// than `degree` of them.
pub fn degree_bound_holds(curve: &CurveSpec, xs: &[Rational]) -> Result<bool> {
    let set = lifted_set(curve, xs)?;
    if !curve.is_irreducible() || set.len() < 2 {
        return Ok(true);
    }
    let d = curve.degree() as usize;
    Ok(spanned_lines(&set)?.entries().iter().all(|e| e.multiplicity <= d))
}
