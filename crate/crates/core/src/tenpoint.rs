//! Ten point configurations on cubics, their extension to cantilevers by
//! pure incidence, and the floating-point parameter-halving demo.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::cubic::{fit_cubics, CubicForm};
use crate::error::{Error, Result};
use crate::group_law::{cuspidal_point, GroupElement, GroupValue, Operation, WeierstrassCurve};
use crate::projective::{collinear, join, meet, ProjPoint};

/// A cubic carrying a group description used to build configurations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveModel {
    /// `y = x³` with additive parameter `x`.
    Cuspidal,
    /// `y² = x³ + ax + b`; parameters are the points themselves.
    Weierstrass(WeierstrassCurve),
}

impl CurveModel {
    pub fn cubic(&self) -> CubicForm {
        match self {
            CurveModel::Cuspidal => CubicForm::cuspidal(),
            CurveModel::Weierstrass(c) => c.cubic(),
        }
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.cubic().contains(p)
    }

    fn scalar<'a>(&self, v: &'a GroupValue) -> Result<&'a GroupElement> {
        match (self, v) {
            (CurveModel::Cuspidal, GroupValue::Scalar(e)) if e.operation() == Operation::Additive => Ok(e),
            _ => Err(Error::invalid("cuspidal parameters are additive rationals")),
        }
    }

    fn curve_point<'a>(&self, v: &'a GroupValue) -> Result<(&WeierstrassCurve, &'a ProjPoint)> {
        match (self, v) {
            (CurveModel::Weierstrass(c), GroupValue::Point(p)) => {
                if c.contains(p) {
                    Ok((c, p))
                } else {
                    Err(Error::OffCurve(p.to_string()))
                }
            }
            _ => Err(Error::invalid("Weierstrass parameters are curve points")),
        }
    }

    /// The curve point with the given parameter.
    pub fn point(&self, v: &GroupValue) -> Result<ProjPoint> {
        match self {
            CurveModel::Cuspidal => Ok(cuspidal_point(self.scalar(v)?.value())),
            CurveModel::Weierstrass(_) => Ok(self.curve_point(v)?.1.clone()),
        }
    }

    pub fn combine(&self, x: &GroupValue, y: &GroupValue) -> Result<GroupValue> {
        match self {
            CurveModel::Cuspidal => Ok(GroupValue::Scalar(self.scalar(x)?.combine(self.scalar(y)?)?)),
            CurveModel::Weierstrass(_) => {
                let (c, p) = self.curve_point(x)?;
                let (_, q) = self.curve_point(y)?;
                Ok(GroupValue::Point(c.add(p, q)?))
            }
        }
    }

    pub fn times(&self, x: &GroupValue, k: i64) -> Result<GroupValue> {
        match self {
            CurveModel::Cuspidal => Ok(GroupValue::Scalar(self.scalar(x)?.times(k))),
            CurveModel::Weierstrass(_) => {
                let (c, p) = self.curve_point(x)?;
                Ok(GroupValue::Point(c.mul(p, k)?))
            }
        }
    }

    pub fn is_identity(&self, x: &GroupValue) -> Result<bool> {
        match self {
            CurveModel::Cuspidal => Ok(self.scalar(x)?.is_identity()),
            CurveModel::Weierstrass(_) => Ok(*self.curve_point(x)?.1 == WeierstrassCurve::identity()),
        }
    }

    /// Parameter of the third intersection of the chord through two points.
    pub fn third(&self, x: &GroupValue, y: &GroupValue) -> Result<GroupValue> {
        match self {
            CurveModel::Cuspidal => {
                let (p, q) = (self.scalar(x)?.value(), self.scalar(y)?.value());
                Ok(GroupValue::Scalar(GroupElement::additive(crate::group_law::cuspidal_third(p, q)?)))
            }
            CurveModel::Weierstrass(_) => {
                let (c, p) = self.curve_point(x)?;
                let (_, q) = self.curve_point(y)?;
                Ok(GroupValue::Point(c.third(p, q)?))
            }
        }
    }
}

/// Base parameters and step of a curve-built configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TenPointParams {
    pub curve: CurveModel,
    pub a0: GroupValue,
    pub b0: GroupValue,
    pub c0: GroupValue,
    pub delta: GroupValue,
}

impl TenPointParams {
    /// `f(A_i) = f(A_0) - iΔ`
    pub fn a(&self, i: i64) -> Result<GroupValue> {
        self.curve.combine(&self.a0, &self.curve.times(&self.delta, -i)?)
    }

    /// `f(B_j) = f(B_0) + jΔ`
    pub fn b(&self, j: i64) -> Result<GroupValue> {
        self.curve.combine(&self.b0, &self.curve.times(&self.delta, j)?)
    }

    /// `f(C_k) = f(C_0) - kΔ`
    pub fn c(&self, k: i64) -> Result<GroupValue> {
        self.curve.combine(&self.c0, &self.curve.times(&self.delta, -k)?)
    }

    /// The cantilever of extension `m` predicted by the parametrization.
    pub fn expected_cantilever(&self, m: usize) -> Result<Cantilever> {
        let pts = |f: &dyn Fn(i64) -> Result<GroupValue>, range: std::ops::Range<i64>| {
            range.map(|i| self.curve.point(&f(i)?)).collect::<Result<Vec<_>>>()
        };
        let m = m as i64;
        Ok(Cantilever {
            a: pts(&|i| self.a(i), 0..m + 3)?,
            b: pts(&|j| self.b(j), 1..m + 5)?,
            c: pts(&|k| self.c(k), 0..m + 3)?,
            extension: m as usize,
        })
    }
}

/// Indexed points `A_i`, `B_j`, `C_k` (with `B` starting at index 1).
pub trait LatticePoints {
    fn a_points(&self) -> &[ProjPoint];
    /// `B_1, B_2, ...`
    fn b_points(&self) -> &[ProjPoint];
    fn c_points(&self) -> &[ProjPoint];
}

/// `⟨A0, A1, A2, B1, B2, B3, B4, C0, C1, C2⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TenPointConfig {
    a: Vec<ProjPoint>,
    b: Vec<ProjPoint>,
    c: Vec<ProjPoint>,
    b0: Option<ProjPoint>,
    params: Option<TenPointParams>,
}

pub const TEN_POINT_NAMES: [&str; 10] = ["A0", "A1", "A2", "B1", "B2", "B3", "B4", "C0", "C1", "C2"];

impl TenPointConfig {
    pub fn from_points(a: [ProjPoint; 3], b: [ProjPoint; 4], c: [ProjPoint; 3]) -> Self {
        TenPointConfig { a: a.to_vec(), b: b.to_vec(), c: c.to_vec(), b0: None, params: None }
    }

    pub fn a(&self, i: usize) -> &ProjPoint {
        &self.a[i]
    }

    /// `B_j` for `j` in `1..=4`.
    pub fn b(&self, j: usize) -> &ProjPoint {
        &self.b[j - 1]
    }

    pub fn c(&self, k: usize) -> &ProjPoint {
        &self.c[k]
    }

    /// The auxiliary point `B_0`, which is not part of the configuration.
    pub fn b0(&self) -> Option<&ProjPoint> {
        self.b0.as_ref()
    }

    pub fn params(&self) -> Option<&TenPointParams> {
        self.params.as_ref()
    }

    /// The ten points in the order of [`TEN_POINT_NAMES`].
    pub fn points(&self) -> Vec<ProjPoint> {
        self.a.iter().chain(&self.b).chain(&self.c).cloned().collect()
    }

    pub fn named_points(&self) -> Vec<(&'static str, ProjPoint)> {
        TEN_POINT_NAMES.iter().copied().zip(self.points()).collect()
    }

    pub fn without_b3(&self) -> Vec<ProjPoint> {
        self.points().into_iter().enumerate().filter(|(i, _)| *i != 5).map(|(_, p)| p).collect()
    }

    /// The seven collinearities used to define the points.
    pub fn defining_incidences(&self) -> [bool; 7] {
        let (a, b, c) = (&self.a, &self.b, &self.c);
        [
            collinear(&a[1], &b[0], &c[0]),
            collinear(&c[1], &b[0], &a[0]),
            collinear(&b[1], &a[1], &c[1]),
            collinear(&a[2], &b[1], &c[0]),
            collinear(&c[2], &b[1], &a[0]),
            collinear(&b[2], &a[1], &c[2]),
            collinear(&b[3], &a[2], &c[2]),
        ]
    }

    /// `A2, B3, C1` collinear, which is not used in the definition.
    pub fn derived_incidence(&self) -> bool {
        collinear(&self.a[2], &self.b[2], &self.c[1])
    }

    pub fn to_cantilever(&self) -> Cantilever {
        Cantilever { a: self.a.clone(), b: self.b.clone(), c: self.c.clone(), extension: 0 }
    }
}

impl LatticePoints for TenPointConfig {
    fn a_points(&self) -> &[ProjPoint] {
        &self.a
    }
    fn b_points(&self) -> &[ProjPoint] {
        &self.b
    }
    fn c_points(&self) -> &[ProjPoint] {
        &self.c
    }
}

impl fmt::Display for TenPointConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, p) in self.named_points() {
            writeln!(f, "{name} {p}")?;
        }
        Ok(())
    }
}

/// Builds the configuration on a cubic from a collinear base triple and a
/// step, using chord-third operations only.
pub fn build_tenpoint(
    curve: CurveModel,
    base: [GroupValue; 3],
    delta: GroupValue,
) -> Result<TenPointConfig> {
    let [a0, b0, c0] = base;
    let sum = curve.combine(&curve.combine(&a0, &b0)?, &c0)?;
    if !curve.is_identity(&sum)? {
        return Err(Error::Degenerate("base parameters do not sum to the identity".into()));
    }
    if curve.is_identity(&delta)? {
        return Err(Error::Degenerate("step is the identity".into()));
    }
    let params = TenPointParams { curve: curve.clone(), a0, b0, c0, delta };

    let expected: Vec<GroupValue> = [
        params.a(0)?,
        params.a(1)?,
        params.a(2)?,
        params.b(1)?,
        params.b(2)?,
        params.b(3)?,
        params.b(4)?,
        params.c(0)?,
        params.c(1)?,
        params.c(2)?,
    ]
    .into();
    for i in 0..10 {
        for j in i + 1..10 {
            if expected[i] == expected[j] {
                return Err(Error::Degenerate(format!(
                    "{} and {} have the same parameter",
                    TEN_POINT_NAMES[i], TEN_POINT_NAMES[j]
                )));
            }
        }
    }

    let b1 = params.b(1)?;
    let a0 = params.a0.clone();
    let c0 = params.c0.clone();
    let a1 = curve.third(&b1, &c0)?;
    let c1 = curve.third(&b1, &a0)?;
    let b2 = curve.third(&a1, &c1)?;
    let a2 = curve.third(&b2, &c0)?;
    let c2 = curve.third(&b2, &a0)?;
    let b3 = curve.third(&a1, &c2)?;
    let b4 = curve.third(&a2, &c2)?;
    let built = [a0, a1, a2, b1, b2, b3, b4, c0, c1, c2];
    for (i, (got, want)) in built.iter().zip(&expected).enumerate() {
        if got != want {
            return Err(Error::Invariant(format!("{} does not match its predicted parameter", TEN_POINT_NAMES[i])));
        }
    }
    let p = built.iter().map(|v| curve.point(v)).collect::<Result<Vec<_>>>()?;
    Ok(TenPointConfig {
        a: p[0..3].to_vec(),
        b: p[3..7].to_vec(),
        c: p[7..10].to_vec(),
        b0: Some(curve.point(&params.b0)?),
        params: Some(params),
    })
}

/// Convenience constructor on `y = x³` from rational base parameters.
pub fn build_cuspidal(base: [crate::Rational; 3], delta: crate::Rational) -> Result<TenPointConfig> {
    let v = |r: crate::Rational| GroupValue::Scalar(GroupElement::additive(r));
    let [a, b, c] = base;
    build_tenpoint(CurveModel::Cuspidal, [v(a), v(b), v(c)], v(delta))
}

/// Extension of a ten point configuration: `A_i`, `C_i` for `i ≤ M + 2`
/// and `B_j` for `1 ≤ j ≤ M + 4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cantilever {
    a: Vec<ProjPoint>,
    b: Vec<ProjPoint>,
    c: Vec<ProjPoint>,
    extension: usize,
}

impl Cantilever {
    pub fn extension(&self) -> usize {
        self.extension
    }

    pub fn a(&self, i: usize) -> Option<&ProjPoint> {
        self.a.get(i)
    }

    pub fn b(&self, j: usize) -> Option<&ProjPoint> {
        j.checked_sub(1).and_then(|j| self.b.get(j))
    }

    pub fn c(&self, k: usize) -> Option<&ProjPoint> {
        self.c.get(k)
    }

    pub fn all_points(&self) -> impl Iterator<Item = &ProjPoint> {
        self.a.iter().chain(&self.b).chain(&self.c)
    }
}

impl LatticePoints for Cantilever {
    fn a_points(&self) -> &[ProjPoint] {
        &self.a
    }
    fn b_points(&self) -> &[ProjPoint] {
        &self.b
    }
    fn c_points(&self) -> &[ProjPoint] {
        &self.c
    }
}

fn step(index: usize, what: &str, p1: &ProjPoint, q1: &ProjPoint, p2: &ProjPoint, q2: &ProjPoint) -> Result<ProjPoint> {
    let fail = |e: Error| Error::DegenerateStep { index, reason: format!("{what}: {e}") };
    let l1 = join(p1, q1).map_err(fail)?;
    let l2 = join(p2, q2).map_err(fail)?;
    meet(&l1, &l2).map_err(fail)
}

/// Extends the configuration by `m` steps using only joins and meets of
/// already constructed points.
pub fn extend_cantilever(cfg: &TenPointConfig, m: usize) -> Result<Cantilever> {
    let mut cant = cfg.to_cantilever();
    for i in 3..m + 3 {
        let (bi, bi1) = (cant.b[i - 1].clone(), cant.b[i].clone());
        let ci = step(i, "C", &cant.a[0], &bi, &cant.a[1], &bi1)?;
        let ai = step(i, "A", &cant.c[0], &bi, &cant.c[1], &bi1)?;
        let bi2 = step(i, "B", &cant.a[2], &ci, &cant.c[2], &ai)?;
        cant.c.push(ci);
        cant.a.push(ai);
        cant.b.push(bi2);
    }
    cant.extension = m;
    Ok(cant)
}

/// Collinearity statistics over all stored index triples.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LatticeReport {
    /// Triples with `i + k = j`.
    pub lattice_triples: u64,
    /// Triples with `i + k ≠ j`.
    pub off_lattice_triples: u64,
    /// Index triples where collinearity disagrees with `i + k = j`.
    pub mismatches: Vec<(usize, usize, usize)>,
}

impl LatticeReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn lattice_report(x: &(impl LatticePoints + Sync)) -> LatticeReport {
    let (a, b, c) = (x.a_points(), x.b_points(), x.c_points());
    let per_i: Vec<LatticeReport> = (0..a.len())
        .into_par_iter()
        .map(|i| {
            let mut r = LatticeReport::default();
            for (jj, bj) in b.iter().enumerate() {
                let j = jj + 1;
                for (k, ck) in c.iter().enumerate() {
                    let on = i + k == j;
                    if on {
                        r.lattice_triples += 1;
                    } else {
                        r.off_lattice_triples += 1;
                    }
                    if collinear(&a[i], bj, ck) != on {
                        r.mismatches.push((i, j, k));
                    }
                }
            }
            r
        })
        .collect();
    per_i.into_iter().fold(LatticeReport::default(), |mut acc, r| {
        acc.lattice_triples += r.lattice_triples;
        acc.off_lattice_triples += r.off_lattice_triples;
        acc.mismatches.extend(r.mismatches);
        acc
    })
}

/// `A_i, B_j, C_k` collinear exactly when `i + k = j`, for every stored index.
pub fn verify_lattice(x: &(impl LatticePoints + Sync)) -> bool {
    lattice_report(x).passed()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NinePointReport {
    /// Cubics through the nine points other than `B3`.
    pub basis: Vec<CubicForm>,
    pub basis_vanishes_at_b3: bool,
    /// Intersection of `C1A2` and `C2A1`.
    pub witness: Option<ProjPoint>,
    pub witness_matches: bool,
}

impl NinePointReport {
    pub fn passed(&self) -> bool {
        self.basis_vanishes_at_b3 && self.witness_matches
    }
}

pub fn nine_point_report(cfg: &TenPointConfig) -> Result<NinePointReport> {
    let basis = fit_cubics(&cfg.without_b3())?;
    let b3 = cfg.b(3);
    let basis_vanishes_at_b3 = basis.iter().all(|f| f.contains(b3));
    let witness = match (join(cfg.c(1), cfg.a(2)), join(cfg.c(2), cfg.a(1))) {
        (Ok(l1), Ok(l2)) => meet(&l1, &l2).ok(),
        _ => None,
    };
    let witness_matches = witness.as_ref() == Some(b3);
    Ok(NinePointReport { basis, basis_vanishes_at_b3, witness, witness_matches })
}

/// Every cubic through the nine points other than `B3` passes through `B3`,
/// and `B3` is the meet of `C1A2` and `C2A1`.
pub fn nine_point_check(cfg: &TenPointConfig) -> Result<bool> {
    Ok(nine_point_report(cfg)?.passed())
}

/// Cubics through all ten points.
pub fn ten_point_basis(cfg: &TenPointConfig) -> Result<Vec<CubicForm>> {
    fit_cubics(&cfg.points())
}

// Halving demo. Floating point from here on.

/// Graph of a continuous function, evaluated on demand.
#[derive(Clone)]
pub struct SampledArc {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl SampledArc {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        SampledArc { f: Arc::new(f) }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn point(&self, x: f64) -> (f64, f64) {
        (x, self.eval(x))
    }
}

impl fmt::Debug for SampledArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SampledArc")
    }
}

pub const HALVING_TOLERANCE: f64 = 1e-10;
pub const MAX_BISECTION_STEPS: usize = 200;

/// Three arcs `α < β < γ` on an interval around 0.
///
/// Ordering is checked on the domain `[lo, hi]`, where `P` is searched.
/// Intersections of construction lines with the arcs are searched on a
/// window containing the domain.
#[derive(Clone, Debug)]
pub struct StandardSystem {
    alpha: SampledArc,
    beta: SampledArc,
    gamma: SampledArc,
    lo: f64,
    hi: f64,
    window: (f64, f64),
    samples: usize,
}

/// Points produced by one run of the construction from `P`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalvingStep {
    pub p: (f64, f64),
    pub a: (f64, f64),
    pub c: (f64, f64),
    pub b: (f64, f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalvingResult {
    pub p: (f64, f64),
    /// Distance between the constructed `B(P)` and the target.
    pub residual: f64,
    pub iterations: usize,
}

impl StandardSystem {
    /// Checks ordering and finiteness on `samples` evenly spaced points of
    /// `[lo, hi]`, which must contain 0.
    pub fn new(
        alpha: SampledArc,
        beta: SampledArc,
        gamma: SampledArc,
        lo: f64,
        hi: f64,
        samples: usize,
    ) -> Result<Self> {
        if !(lo < 0.0 && 0.0 < hi) || samples < 2 {
            return Err(Error::invalid("interval must contain 0 and have at least two samples"));
        }
        let sys = StandardSystem { alpha, beta, gamma, lo, hi, window: (lo, hi), samples };
        for x in sys.grid(lo, hi) {
            let (a, b, c) = (sys.alpha.eval(x), sys.beta.eval(x), sys.gamma.eval(x));
            if !(a.is_finite() && b.is_finite() && c.is_finite()) {
                return Err(Error::invalid(format!("arc value not finite at {x}")));
            }
            if !(a < b && b < c) {
                return Err(Error::invalid(format!("arcs are not ordered at {x}")));
            }
        }
        Ok(sys)
    }

    /// Widens the interval searched for intersections.
    pub fn with_window(mut self, lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= self.lo && self.hi <= hi) {
            return Err(Error::invalid("window must contain the domain"));
        }
        self.window = (lo, hi);
        Ok(self)
    }

    /// `y = -1`, `y = x`, `y = 1`.
    pub fn three_lines() -> Self {
        Self::new(
            SampledArc::new(|_| -1.0),
            SampledArc::new(|x| x),
            SampledArc::new(|_| 1.0),
            -0.9,
            0.9,
            256,
        )
        .and_then(|s| s.with_window(-8.0, 8.0))
        .expect("valid system")
    }

    /// `y = -1`, `y = 0`, `y = 1`.
    pub fn parallel_lines() -> Self {
        Self::new(
            SampledArc::new(|_| -1.0),
            SampledArc::new(|_| 0.0),
            SampledArc::new(|_| 1.0),
            -1.0,
            1.0,
            256,
        )
        .and_then(|s| s.with_window(-4.0, 4.0))
        .expect("valid system")
    }

    pub fn beta(&self) -> &SampledArc {
        &self.beta
    }

    fn grid(&self, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
        let n = self.samples;
        (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
    }

    pub fn a0(&self) -> (f64, f64) {
        self.alpha.point(0.0)
    }

    pub fn b0(&self) -> (f64, f64) {
        self.beta.point(0.0)
    }

    pub fn c0(&self) -> (f64, f64) {
        self.gamma.point(0.0)
    }

    /// Unique intersection of the line through `p` and `q` with `arc`.
    fn intersect(&self, arc: &SampledArc, p: (f64, f64), q: (f64, f64)) -> Result<(f64, f64)> {
        let dx = q.0 - p.0;
        if dx.abs() <= f64::EPSILON * (p.0.abs() + q.0.abs()).max(1.0) {
            let x = 0.5 * (p.0 + q.0);
            if x < self.window.0 || x > self.window.1 {
                return Err(Error::invalid("intersection outside the window"));
            }
            return Ok(arc.point(x));
        }
        let m = (q.1 - p.1) / dx;
        let h = |x: f64| p.1 + m * (x - p.0) - arc.eval(x);
        let grid: Vec<f64> = self.grid(self.window.0, self.window.1).collect();
        let mut brackets = Vec::new();
        for w in grid.windows(2) {
            let (h0, h1) = (h(w[0]), h(w[1]));
            if h0 == 0.0 {
                brackets.push((w[0], w[0]));
            } else if h0 * h1 < 0.0 {
                brackets.push((w[0], w[1]));
            }
        }
        if let Some(&last) = grid.last() {
            if h(last) == 0.0 {
                brackets.push((last, last));
            }
        }
        match brackets.as_slice() {
            [] => Err(Error::invalid("line misses the arc on the window")),
            [(l, r)] => {
                let (mut l, mut r) = (*l, *r);
                let hl = h(l);
                for _ in 0..MAX_BISECTION_STEPS {
                    if r - l <= f64::EPSILON * l.abs().max(r.abs()).max(1e-300) {
                        break;
                    }
                    let mid = 0.5 * (l + r);
                    if (h(mid) < 0.0) == (hl < 0.0) {
                        l = mid;
                    } else {
                        r = mid;
                    }
                }
                Ok(arc.point(0.5 * (l + r)))
            }
            _ => Err(Error::invalid("line meets the arc more than once")),
        }
    }

    /// `A(P)`, `C(P)` and `B(P)` for `P = (x, β(x))`.
    pub fn construct(&self, x: f64) -> Result<HalvingStep> {
        let p = self.beta.point(x);
        let a = self.intersect(&self.alpha, self.c0(), p)?;
        let c = self.intersect(&self.gamma, self.a0(), p)?;
        let b = self.intersect(&self.beta, a, c)?;
        Ok(HalvingStep { p, a, c, b })
    }
}

/// Finds `P` on the middle arc whose constructed `B(P)` is the given point
/// of the middle arc, by bisection on the `x` coordinate of `P`.
pub fn halve_parameter_demo(sys: &StandardSystem, b: (f64, f64)) -> Result<HalvingResult> {
    if (sys.beta.eval(b.0) - b.1).abs() > HALVING_TOLERANCE {
        return Err(Error::OffCurve(format!("({}, {}) is not on the middle arc", b.0, b.1)));
    }
    let dist = |q: (f64, f64)| (q.0 - b.0).hypot(q.1 - b.1);
    let g = |x: f64| sys.construct(x).map(|s| s.b.0 - b.0);
    let g0 = g(0.0)?;
    if g0 == 0.0 {
        let p = sys.beta.point(0.0);
        return Ok(HalvingResult { p, residual: dist(sys.construct(0.0)?.b), iterations: 0 });
    }
    // walk away from 0 towards b until the sign of g changes
    let dir = if b.0 > 0.0 { 1.0 } else { -1.0 };
    let edge = if dir > 0.0 { sys.hi } else { sys.lo };
    let steps = sys.samples;
    let (mut l, mut r) = (0.0, f64::NAN);
    for i in 1..=steps {
        let x = edge * i as f64 / steps as f64;
        match g(x) {
            Ok(v) if (v < 0.0) != (g0 < 0.0) || v == 0.0 => {
                r = x;
                break;
            }
            Ok(_) => l = x,
            Err(_) => continue,
        }
    }
    if r.is_nan() {
        return Err(Error::NonConvergence("no sign change of B(P) - B on the interval".into()));
    }
    let mut iterations = 0;
    while iterations < MAX_BISECTION_STEPS {
        iterations += 1;
        let mid = 0.5 * (l + r);
        let v = g(mid)?;
        if v == 0.0 || (r - l).abs() <= f64::EPSILON * mid.abs().max(1e-300) {
            l = mid;
            r = mid;
            break;
        }
        if (v < 0.0) == (g0 < 0.0) {
            l = mid;
        } else {
            r = mid;
        }
    }
    let x = 0.5 * (l + r);
    let residual = dist(sys.construct(x)?.b);
    if residual > HALVING_TOLERANCE {
        return Err(Error::NonConvergence(format!("residual {residual:e} after {iterations} steps")));
    }
    Ok(HalvingResult { p: sys.beta.point(x), residual, iterations })
}

/// Multiplicative value of a point `(t, t)` of `y = x` relative to `B0`:
/// the ratio `X P / X Q` for the vertices `P = (-1, -1)`, `Q = (1, 1)`,
/// divided by its value `-1` at the origin.
pub fn three_lines_value(t: f64) -> f64 {
    (1.0 + t) / (1.0 - t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn cusp(d: Rational) -> Result<TenPointConfig> {
        build_cuspidal([q(-1, 1), q(0, 1), q(1, 1)], d)
    }

    fn e17_config() -> TenPointConfig {
        let c = WeierstrassCurve::new(q(0, 1), q(17, 1)).unwrap();
        let pt = |x, y| GroupValue::Point(ProjPoint::int(x, y));
        build_tenpoint(CurveModel::Weierstrass(c), [pt(-2, 3), pt(-1, 4), pt(4, 9)], pt(8, 23)).unwrap()
    }

    #[test]
    fn cuspidal_configuration() {
        let cfg = cusp(q(1, 10)).unwrap();
        assert_eq!(*cfg.b(3), ProjPoint::affine(&q(3, 10), &q(27, 1000)));
        assert!(cfg.defining_incidences().iter().all(|&x| x));
        assert!(cfg.derived_incidence());
        assert!(verify_lattice(&cfg));
        assert_eq!(cfg.b0(), Some(&ProjPoint::int(0, 0)));
    }

    #[test]
    fn unit_step_collides() {
        // C2 would land on A0
        assert!(matches!(cusp(q(1, 1)), Err(Error::Degenerate(_))));
        let v = |r| GroupValue::Scalar(GroupElement::additive(r));
        let params = TenPointParams { curve: CurveModel::Cuspidal, a0: v(q(-1, 1)), b0: v(q(0, 1)), c0: v(q(1, 1)), delta: v(q(1, 1)) };
        assert_eq!(params.curve.point(&params.a(2).unwrap()).unwrap(), ProjPoint::int(-3, -27));
    }

    #[test]
    fn rejects_bad_bases() {
        assert!(build_cuspidal([q(-1, 1), q(0, 1), q(2, 1)], q(1, 10)).is_err());
        assert!(build_cuspidal([q(-1, 1), q(0, 1), q(1, 1)], q(0, 1)).is_err());
        // B1 and C1 share the parameter 1/2
        assert!(build_cuspidal([q(-1, 1), q(0, 1), q(1, 1)], q(1, 2)).is_err());
    }

    #[test]
    fn broken_lattice() {
        let cfg = cusp(q(1, 10)).unwrap();
        let p = cfg.points();
        let broken = TenPointConfig::from_points(
            [p[0].clone(), p[1].clone(), p[2].clone()],
            [p[3].clone(), p[4].clone(), p[6].clone(), p[6].clone()],
            [p[7].clone(), p[8].clone(), p[9].clone()],
        );
        assert!(!broken.derived_incidence());
        assert!(!verify_lattice(&broken));
        assert_eq!(extend_cantilever(&cfg, 0).unwrap(), cfg.to_cantilever());
    }

    #[test]
    fn cantilever_follows_the_curve() {
        let cfg = cusp(q(1, 100)).unwrap();
        let cant = extend_cantilever(&cfg, 20).unwrap();
        assert_eq!(cant.b(24).map(|_| ()), Some(()));
        assert!(cant.b(25).is_none());
        assert!(verify_lattice(&cant));
        let expected = cfg.params().unwrap().expected_cantilever(20).unwrap();
        assert_eq!(cant, expected);
        assert!(cant.all_points().all(|p| CurveModel::Cuspidal.contains(p)));
    }

    #[test]
    fn large_step_hits_a_repeated_point() {
        // with Δ = 1/10, B9 lands on C1 and the join C1 B9 is undefined
        let cfg = cusp(q(1, 10)).unwrap();
        match extend_cantilever(&cfg, 20) {
            Err(Error::DegenerateStep { index, .. }) => assert_eq!(index, 8),
            other => panic!("expected a degenerate step, got {other:?}"),
        }
        assert!(verify_lattice(&extend_cantilever(&cfg, 1).unwrap()));
        // B6 = C4 already breaks the lattice at extension 2
        let cant = extend_cantilever(&cfg, 2).unwrap();
        assert_eq!(cant.b(6), cant.c(4));
        assert!(!verify_lattice(&cant));
    }

    #[test]
    fn weierstrass_configuration() {
        let cfg = e17_config();
        let curve = cfg.params().unwrap().curve.clone();
        assert!(cfg.points().iter().all(|p| curve.contains(p)));
        assert!(cfg.derived_incidence());
        assert!(verify_lattice(&cfg));
        let cant = extend_cantilever(&cfg, 6).unwrap();
        assert!(cant.all_points().all(|p| curve.contains(p)));
        assert!(verify_lattice(&cant));
    }

    #[test]
    fn nine_points() {
        let cfg = cusp(q(1, 10)).unwrap();
        let r = nine_point_report(&cfg).unwrap();
        assert!(r.passed());
        assert_eq!(r.basis, vec![CubicForm::cuspidal()]);
        assert_eq!(ten_point_basis(&cfg).unwrap().len(), 1);

        let cfg = e17_config();
        let r = nine_point_report(&cfg).unwrap();
        assert!(r.passed());
        assert_eq!(r.basis, vec![CubicForm::weierstrass(&q(0, 1), &q(17, 1))]);

        let mut p = cusp(q(1, 10)).unwrap().points();
        p[0] = ProjPoint::affine(&q(-1, 1), &q(-2, 1));
        let bad = TenPointConfig::from_points(
            [p[0].clone(), p[1].clone(), p[2].clone()],
            [p[3].clone(), p[4].clone(), p[5].clone(), p[6].clone()],
            [p[7].clone(), p[8].clone(), p[9].clone()],
        );
        assert!(!nine_point_check(&bad).unwrap());
    }

    #[test]
    fn halving_three_lines() {
        let sys = StandardSystem::three_lines();
        let b = sys.beta().point(0.6);
        assert!((three_lines_value(0.6) - 4.0).abs() < 1e-12);
        let r = halve_parameter_demo(&sys, b).unwrap();
        assert!(r.residual <= HALVING_TOLERANCE);
        assert!(r.iterations <= MAX_BISECTION_STEPS);
        assert!((r.p.0 - 1.0 / 3.0).abs() < 1e-10);
        assert!((three_lines_value(r.p.0) - 2.0).abs() < 1e-9);
        let r2 = halve_parameter_demo(&sys, r.p).unwrap();
        assert!((three_lines_value(r2.p.0) - 2f64.sqrt()).abs() < 2e-9);
    }

    #[test]
    fn halving_at_base_and_additive() {
        let sys = StandardSystem::three_lines();
        let r = halve_parameter_demo(&sys, sys.b0()).unwrap();
        assert_eq!(r.p, sys.b0());
        let sys = StandardSystem::parallel_lines();
        let r = halve_parameter_demo(&sys, (0.5, 0.0)).unwrap();
        assert!((r.p.0 - 0.25).abs() < 1e-10);
        let r = halve_parameter_demo(&sys, (-0.3, 0.0)).unwrap();
        assert!((r.p.0 + 0.15).abs() < 1e-10);
        assert!(halve_parameter_demo(&sys, (0.5, 0.1)).is_err());
    }

    #[test]
    fn unordered_arcs_rejected() {
        let r = StandardSystem::new(
            SampledArc::new(|_| 0.0),
            SampledArc::new(|x| x),
            SampledArc::new(|_| 1.0),
            -0.5,
            0.5,
            16,
        );
        assert!(r.is_err());
    }
}
