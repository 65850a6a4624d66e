//! Lines spanned by a point set, with exact incidence multiplicities.
//!
//! Every unordered pair of points is joined once; pairs are grouped by
//! canonical line key. A line carrying `m` points receives `C(m, 2)` pairs,
//! which recovers `m` without a cubic pass over the points. For labeled sets
//! each pair also adds its two labels to per-group counters: a point on a
//! line of multiplicity `m` takes part in `m - 1` of its pairs, so dividing
//! the counter by `m - 1` gives the exact per-group incidence.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::keys::{dispatch, AnyCoords, Coords};
use crate::projective::{ProjLine, ProjPoint, Projectivity};

/// Number of labeled groups a point set may carry.
pub const GROUPS: usize = 3;

/// Ordered set of distinct projective points with optional labels in `1..=3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    points: Vec<ProjPoint>,
    labels: Option<Vec<u8>>,
}

impl PointSet {
    pub fn new(points: Vec<ProjPoint>) -> Result<Self> {
        check_distinct(&points)?;
        Ok(PointSet { points, labels: None })
    }

    pub fn with_labels(points: Vec<ProjPoint>, labels: Vec<u8>) -> Result<Self> {
        if labels.len() != points.len() {
            return Err(Error::invalid(format!(
                "{} labels for {} points",
                labels.len(),
                points.len()
            )));
        }
        if let Some(bad) = labels.iter().find(|&&g| g == 0 || g as usize > GROUPS) {
            return Err(Error::invalid(format!("label {bad} is outside 1..=3")));
        }
        check_distinct(&points)?;
        Ok(PointSet { points, labels: Some(labels) })
    }

    /// Concatenates groups, labeling the `g`-th group with `g + 1`.
    pub fn from_groups(groups: Vec<Vec<ProjPoint>>) -> Result<Self> {
        if groups.len() > GROUPS {
            return Err(Error::invalid("at most three groups"));
        }
        let mut points = Vec::new();
        let mut labels = Vec::new();
        for (g, group) in groups.into_iter().enumerate() {
            labels.extend(std::iter::repeat_n(g as u8 + 1, group.len()));
            points.extend(group);
        }
        Self::with_labels(points, labels)
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn labels(&self) -> Option<&[u8]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points carrying label `g`.
    pub fn group(&self, g: u8) -> Vec<&ProjPoint> {
        match &self.labels {
            None => Vec::new(),
            Some(labels) => self
                .points
                .iter()
                .zip(labels)
                .filter(|(_, &l)| l == g)
                .map(|(p, _)| p)
                .collect(),
        }
    }

    pub fn without_labels(&self) -> PointSet {
        PointSet { points: self.points.clone(), labels: None }
    }

    /// Image under a projective transformation; labels are kept.
    pub fn transformed(&self, m: &Projectivity) -> PointSet {
        PointSet { points: self.points.iter().map(|p| m.apply(p)).collect(), labels: self.labels.clone() }
    }
}

fn check_distinct(points: &[ProjPoint]) -> Result<()> {
    let mut seen = HashSet::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if !seen.insert(p) {
            return Err(Error::DuplicatePoint(i));
        }
    }
    Ok(())
}

/// One spanned line with the number of set points on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RichLine {
    pub line: ProjLine,
    pub multiplicity: usize,
    /// Incidences per label group, present when the point set is labeled.
    pub group_counts: Option<[usize; GROUPS]>,
}

/// All lines spanned by a point set, sorted by canonical line coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RichLineTable {
    entries: Vec<RichLine>,
    points: usize,
}

impl RichLineTable {
    pub fn entries(&self) -> &[RichLine] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Size of the point set the table was built from.
    pub fn point_count(&self) -> usize {
        self.points
    }

    pub fn get(&self, line: &ProjLine) -> Option<&RichLine> {
        self.entries
            .binary_search_by(|e| e.line.cmp(line))
            .ok()
            .map(|i| &self.entries[i])
    }

    /// Lines with at least three points: the triple lines of the set.
    pub fn triple_lines(&self) -> impl Iterator<Item = &RichLine> {
        self.entries.iter().filter(|e| e.multiplicity >= 3)
    }

    pub fn k_rich_count(&self, k: usize, exactly: bool) -> Result<usize> {
        k_rich_count(self, k, exactly)
    }
}

#[derive(Default, Clone, Copy)]
struct Tally {
    pairs: u64,
    groups: [u64; GROUPS],
}

fn tally_pairs<C: Coords>(coords: &C, labels: Option<&[u8]>) -> Vec<(C::Key, Tally)> {
    let n = coords.len();
    let merged = (0..n)
        .into_par_iter()
        .fold(HashMap::<C::Key, Tally>::new, |mut map, i| {
            for j in i + 1..n {
                let key = coords.join_key(i, j).expect("point set has no duplicates");
                let t = map.entry(key).or_default();
                t.pairs += 1;
                if let Some(labels) = labels {
                    t.groups[labels[i] as usize - 1] += 1;
                    t.groups[labels[j] as usize - 1] += 1;
                }
            }
            map
        })
        .reduce(HashMap::new, |a, b| if a.len() >= b.len() { merge_into(a, b) } else { merge_into(b, a) });
    let mut out: Vec<_> = merged.into_iter().collect();
    out.par_sort_unstable_by(|a, b| a.0.cmp(&b.0));
    out
}

fn merge_into<K: std::hash::Hash + Eq>(mut a: HashMap<K, Tally>, b: HashMap<K, Tally>) -> HashMap<K, Tally> {
    for (k, t) in b {
        let e = a.entry(k).or_default();
        e.pairs += t.pairs;
        for g in 0..GROUPS {
            e.groups[g] += t.groups[g];
        }
    }
    a
}

/// Solves `m (m - 1) / 2 = pairs` exactly.
fn multiplicity_from_pairs(pairs: u64) -> Option<usize> {
    let disc = 1 + 8 * pairs;
    let mut r = (disc as f64).sqrt() as u64;
    while r * r > disc {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= disc {
        r += 1;
    }
    if r * r != disc {
        return None;
    }
    Some(((1 + r) / 2) as usize)
}

fn build_table<C: Coords>(coords: &C, labels: Option<&[u8]>) -> Result<RichLineTable> {
    let n = coords.len();
    let tallies = tally_pairs(coords, labels);
    let mut entries = Vec::with_capacity(tallies.len());
    let mut pair_total: u64 = 0;
    for (key, t) in &tallies {
        let m = multiplicity_from_pairs(t.pairs).ok_or_else(|| {
            Error::Invariant(format!("pair count {} on a line is not a binomial C(m,2)", t.pairs))
        })?;
        pair_total += t.pairs;
        let group_counts = match labels {
            None => None,
            Some(_) => {
                let mut c = [0usize; GROUPS];
                for g in 0..GROUPS {
                    if t.groups[g] % (m as u64 - 1) != 0 {
                        return Err(Error::Invariant("group incidence counter not divisible".into()));
                    }
                    c[g] = (t.groups[g] / (m as u64 - 1)) as usize;
                }
                if c.iter().sum::<usize>() != m {
                    return Err(Error::Invariant("group incidences do not sum to multiplicity".into()));
                }
                Some(c)
            }
        };
        entries.push(RichLine { line: C::to_line(key), multiplicity: m, group_counts });
    }
    let expected = (n as u64) * (n as u64).saturating_sub(1) / 2;
    if pair_total != expected {
        return Err(Error::Invariant(format!(
            "pair-count conservation: {pair_total} pairs on lines, expected {expected}"
        )));
    }
    Ok(RichLineTable { entries, points: n })
}

/// Every line spanned by the set, with exact multiplicities.
pub fn spanned_lines(h: &PointSet) -> Result<RichLineTable> {
    if h.len() < 2 {
        return Err(Error::invalid("at least two points are needed to span a line"));
    }
    let coords = AnyCoords::new(h.points());
    dispatch!(&coords, |c| build_table(c, h.labels()))
}

/// [`spanned_lines`] on a dedicated pool of `workers` threads.
pub fn spanned_lines_with_workers(h: &PointSet, workers: usize) -> Result<RichLineTable> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    pool.install(|| spanned_lines(h))
}

/// Lines with exactly `k` points (`exactly`) or at least `k` points.
pub fn k_rich_count(t: &RichLineTable, k: usize, exactly: bool) -> Result<usize> {
    if k < 2 {
        return Err(Error::invalid("k must be at least 2"));
    }
    Ok(t.entries
        .iter()
        .filter(|e| if exactly { e.multiplicity == k } else { e.multiplicity >= k })
        .count())
}

/// `|T(H)|`: number of lines through at least three points of the set.
pub fn triple_line_count(h: &PointSet) -> Result<usize> {
    if h.len() < 2 {
        return Ok(0);
    }
    spanned_lines(h)?.k_rich_count(3, false)
}

/// A multiset of three group labels, e.g. `{1,2,3}` or `{1,1,2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pattern([u8; 3]);

impl Pattern {
    pub fn new(labels: [u8; 3]) -> Result<Self> {
        if labels.iter().any(|&g| g == 0 || g as usize > GROUPS) {
            return Err(Error::invalid("pattern labels must be in 1..=3"));
        }
        let mut labels = labels;
        labels.sort_unstable();
        Ok(Pattern(labels))
    }

    pub fn labels(&self) -> [u8; 3] {
        self.0
    }

    /// Required number of distinct points per group.
    pub fn demand(&self) -> [usize; GROUPS] {
        let mut d = [0; GROUPS];
        for &g in &self.0 {
            d[g as usize - 1] += 1;
        }
        d
    }

    pub fn matches(&self, counts: &[usize; GROUPS]) -> bool {
        self.demand().iter().zip(counts).all(|(need, have)| have >= need)
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits: Vec<u8> = s
            .chars()
            .filter(|c| !matches!(c, ',' | ' ' | '{' | '}'))
            .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(|| Error::Parse(format!("bad pattern {s:?}"))))
            .collect::<Result<_>>()?;
        let arr: [u8; 3] = digits
            .try_into()
            .map_err(|_| Error::Parse(format!("pattern {s:?} must have three labels")))?;
        Pattern::new(arr)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{},{}}}", self.0[0], self.0[1], self.0[2])
    }
}

/// Lines that carry three distinct points of the labeled groups named by
/// `pattern`, e.g. one from each group for `{1,2,3}`.
pub fn tripartite_count(h: &PointSet, pattern: Pattern) -> Result<usize> {
    let labels = h.labels().ok_or(Error::MissingLabels)?;
    for g in pattern.labels() {
        if !labels.contains(&g) {
            return Err(Error::MissingGroup(g));
        }
    }
    let table = spanned_lines(h)?;
    tripartite_count_in(&table, pattern)
}

/// Same as [`tripartite_count`] on an already built table.
pub fn tripartite_count_in(table: &RichLineTable, pattern: Pattern) -> Result<usize> {
    let mut count = 0;
    for e in table.entries() {
        let counts = e.group_counts.as_ref().ok_or(Error::MissingLabels)?;
        if pattern.matches(counts) {
            count += 1;
        }
    }
    Ok(count)
}

fn collect_directions<C: Coords>(coords: &C) -> usize {
    let n = coords.len();
    let set = (0..n)
        .into_par_iter()
        .fold(HashSet::<C::Key>::new, |mut set, i| {
            for j in i + 1..n {
                set.insert(coords.direction_key(i, j).expect("distinct affine points"));
            }
            set
        })
        .reduce(HashSet::new, |mut a, b| {
            if a.len() < b.len() {
                let mut b = b;
                b.extend(a);
                return b;
            }
            a.extend(b);
            a
        });
    set.len()
}

/// Number of distinct directions (points at infinity) of the connecting lines.
pub fn direction_count(h: &PointSet) -> Result<usize> {
    if h.len() < 2 {
        return Err(Error::invalid("at least two points are needed for a direction"));
    }
    if h.points().iter().any(ProjPoint::is_at_infinity) {
        return Err(Error::PointAtInfinity);
    }
    let coords = AnyCoords::new(h.points());
    Ok(dispatch!(&coords, |c| collect_directions(c)))
}

/// Maximum number of exactly-3-rich lines for large `n`: `floor(n(n-3)/6) + 1`.
pub fn green_tao_bound(n: u64) -> Result<u64> {
    if n < 3 {
        return Err(Error::invalid("the bound is stated for n >= 3"));
    }
    Ok(n * (n - 3) / 6 + 1)
}

/// Whether `triple_lines <= C(n,2)/3`, checked as `3 * triple_lines <= C(n,2)`.
pub fn within_pair_bound(triple_lines: usize, n: usize) -> bool {
    let pairs = (n as u128) * (n as u128).saturating_sub(1) / 2;
    3 * triple_lines as u128 <= pairs
}

/// Outcome of comparing a configuration's exactly-3-rich count to the
/// Green–Tao maximum. The bound is asymptotic, so a violation at small sizes
/// is a report rather than an error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub n: usize,
    pub triple_lines: usize,
    pub three_rich: usize,
    pub green_tao: u64,
}

impl BoundReport {
    pub fn within_pair_bound(&self) -> bool {
        within_pair_bound(self.triple_lines, self.n)
    }

    pub fn within_green_tao(&self) -> bool {
        self.three_rich as u64 <= self.green_tao
    }
}

pub fn bound_report(h: &PointSet) -> Result<BoundReport> {
    let table = spanned_lines(h)?;
    Ok(BoundReport {
        n: h.len(),
        triple_lines: table.k_rich_count(3, false)?,
        three_rich: table.k_rich_count(3, true)?,
        green_tao: green_tao_bound(h.len().max(3) as u64)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::{collinear, join};

    fn grid(k: i64) -> PointSet {
        let mut pts = Vec::new();
        for x in 0..k {
            for y in 0..k {
                pts.push(ProjPoint::int(x, y));
            }
        }
        PointSet::new(pts).unwrap()
    }

    /// Brute-force oracle: distinct lines through >= 3 points, by checking every triple.
    fn brute_triple_lines(pts: &[ProjPoint]) -> usize {
        let mut lines = HashSet::new();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                for k in j + 1..pts.len() {
                    if collinear(&pts[i], &pts[j], &pts[k]) {
                        lines.insert(join(&pts[i], &pts[j]).unwrap());
                    }
                }
            }
        }
        lines.len()
    }

    #[test]
    fn grid_three_by_three() {
        let t = spanned_lines(&grid(3)).unwrap();
        assert_eq!(t.k_rich_count(3, true).unwrap(), 8);
        assert_eq!(t.k_rich_count(2, true).unwrap(), 12);
        assert_eq!(t.len(), 20);
        assert_eq!(brute_triple_lines(grid(3).points()), 8);
    }

    #[test]
    fn collinear_and_general_position() {
        let h = PointSet::new(vec![ProjPoint::int(0, 0), ProjPoint::int(1, 2), ProjPoint::int(2, 4)]).unwrap();
        let t = spanned_lines(&h).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.entries()[0].multiplicity, 3);

        let h = PointSet::new(vec![
            ProjPoint::int(0, 0),
            ProjPoint::int(1, 0),
            ProjPoint::int(0, 1),
            ProjPoint::int(2, 3),
        ])
        .unwrap();
        let t = spanned_lines(&h).unwrap();
        assert_eq!(t.len(), 6);
        assert!(t.entries().iter().all(|e| e.multiplicity == 2));
    }

    #[test]
    fn cubic_power_small_case() {
        let pts: Vec<_> = (-2..=2).map(|x| ProjPoint::int(x, x * x * x)).collect();
        let t = spanned_lines(&PointSet::new(pts.clone()).unwrap()).unwrap();
        assert_eq!(t.k_rich_count(3, false).unwrap(), 2);
        assert_eq!(brute_triple_lines(&pts), 2);
        assert_eq!(t.k_rich_count(2, false).unwrap(), t.len());
    }

    #[test]
    fn rejects_duplicates_and_bad_labels() {
        let p = ProjPoint::int(1, 1);
        assert_eq!(PointSet::new(vec![p.clone(), p.clone()]), Err(Error::DuplicatePoint(1)));
        assert!(PointSet::with_labels(vec![p.clone()], vec![4]).is_err());
        assert!(PointSet::with_labels(vec![p], vec![1, 2]).is_err());
        assert!(spanned_lines(&PointSet::new(vec![ProjPoint::int(0, 0)]).unwrap()).is_err());
        assert!(k_rich_count(&spanned_lines(&grid(2)).unwrap(), 1, false).is_err());
    }

    #[test]
    fn tripartite_on_parallel_rows() {
        let rows: Vec<Vec<ProjPoint>> =
            (0..3).map(|y| (0..3).map(|x| ProjPoint::int(x, y)).collect()).collect();
        let h = PointSet::from_groups(rows).unwrap();
        assert_eq!(tripartite_count(&h, "1,2,3".parse().unwrap()).unwrap(), 5);
        assert_eq!(tripartite_count(&h, "123".parse().unwrap()).unwrap(), 5);
    }

    #[test]
    fn tripartite_square_with_directions() {
        let square = vec![ProjPoint::int(0, 0), ProjPoint::int(1, 0), ProjPoint::int(1, 1), ProjPoint::int(0, 1)];
        let mut dirs = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                let d = join(&square[i], &square[j]).unwrap().direction().unwrap();
                if !dirs.contains(&d) {
                    dirs.push(d);
                }
            }
        }
        assert_eq!(dirs.len(), 4);
        let h = PointSet::from_groups(vec![square, dirs]).unwrap();
        assert_eq!(tripartite_count(&h, Pattern::new([1, 1, 2]).unwrap()).unwrap(), 6);
        assert_eq!(tripartite_count(&h, Pattern::new([1, 2, 3]).unwrap()), Err(Error::MissingGroup(3)));
    }

    #[test]
    fn single_group_pattern_matches_triple_lines() {
        let g = grid(4);
        let labeled = PointSet::with_labels(g.points().to_vec(), vec![1; g.len()]).unwrap();
        assert_eq!(
            tripartite_count(&labeled, Pattern::new([1, 1, 1]).unwrap()).unwrap(),
            triple_line_count(&g).unwrap()
        );
        assert_eq!(triple_line_count(&g).unwrap(), 14);
        assert_eq!(brute_triple_lines(g.points()), 14);
        assert_eq!(tripartite_count(&g, Pattern::new([1, 1, 1]).unwrap()), Err(Error::MissingLabels));
    }

    #[test]
    fn directions() {
        let parabola: Vec<_> = (1..=5).map(|x| ProjPoint::int(x, x * x)).collect();
        assert_eq!(direction_count(&PointSet::new(parabola).unwrap()).unwrap(), 7);
        let line = PointSet::new((0..3).map(|x| ProjPoint::int(x, 2 * x)).collect()).unwrap();
        assert_eq!(direction_count(&line).unwrap(), 1);
        let square = PointSet::new(vec![ProjPoint::int(0, 0), ProjPoint::int(1, 0), ProjPoint::int(1, 1), ProjPoint::int(0, 1)]).unwrap();
        assert_eq!(direction_count(&square).unwrap(), 4);
        let inf = PointSet::new(vec![ProjPoint::int(0, 0), ProjPoint::new(1, 0, 0).unwrap()]).unwrap();
        assert_eq!(direction_count(&inf), Err(Error::PointAtInfinity));
    }

    #[test]
    fn green_tao_values() {
        assert_eq!(green_tao_bound(12).unwrap(), 19);
        assert_eq!(green_tao_bound(3).unwrap(), 1);
        assert_eq!(green_tao_bound(9).unwrap(), 10);
        assert!(green_tao_bound(2).is_err());
    }

    #[test]
    fn multiplicity_inversion() {
        for m in 2..2000usize {
            assert_eq!(multiplicity_from_pairs((m * (m - 1) / 2) as u64), Some(m));
        }
        assert_eq!(multiplicity_from_pairs(2), None);
    }

    #[test]
    fn lookup_by_line() {
        let t = spanned_lines(&grid(3)).unwrap();
        let diag = join(&ProjPoint::int(0, 0), &ProjPoint::int(2, 2)).unwrap();
        assert_eq!(t.get(&diag).unwrap().multiplicity, 3);
        let missing = ProjLine::new(1, 1, 100).unwrap();
        assert!(t.get(&missing).is_none());
    }
}
