//! Ternary cubic forms: evaluation, exact fitting through points, and
//! division by linear forms.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::projective::{clear_denominators, ProjLine, ProjPoint, Rational};

/// Exponents of the ten cubic monomials in the fixed coefficient order
/// `X³, X²Y, X²Z, XY², XYZ, XZ², Y³, Y²Z, YZ², Z³`.
pub const MONOMIALS: [[u32; 3]; 10] = [
    [3, 0, 0],
    [2, 1, 0],
    [2, 0, 1],
    [1, 2, 0],
    [1, 1, 1],
    [1, 0, 2],
    [0, 3, 0],
    [0, 2, 1],
    [0, 1, 2],
    [0, 0, 3],
];

/// Largest point list accepted by [`fit_cubics`].
pub const FIT_LIMIT: usize = 12;

fn content_normalize(v: &mut [BigInt]) -> bool {
    let g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() {
        return false;
    }
    let first_negative = v.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
    let g = if first_negative { -g } else { g };
    if !g.is_one() {
        for c in v.iter_mut() {
            *c = &*c / &g;
        }
    }
    true
}

fn monomial_value(p: &[BigInt; 3], e: &[u32; 3]) -> BigInt {
    Pow::pow(&p[0], e[0]) * Pow::pow(&p[1], e[1]) * Pow::pow(&p[2], e[2])
}

/// A homogeneous ternary form of arbitrary degree with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    degree: u32,
    terms: BTreeMap<[u32; 3], BigInt>,
}

impl Form {
    pub fn new(degree: u32, terms: impl IntoIterator<Item = ([u32; 3], BigInt)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if e.iter().sum::<u32>() != degree {
                return Err(Error::invalid(format!("monomial {e:?} is not of degree {degree}")));
            }
            if !c.is_zero() {
                *map.entry(e).or_insert_with(BigInt::zero) += c;
            }
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Form { degree, terms: map })
    }

    pub fn linear(l: &ProjLine) -> Self {
        let [a, b, c] = l.coeffs().clone();
        Form::new(1, [([1, 0, 0], a), ([0, 1, 0], b), ([0, 0, 1], c)]).expect("degree 1")
    }

    pub fn constant(c: BigInt) -> Self {
        Form::new(0, [([0, 0, 0], c)]).expect("degree 0")
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<[u32; 3], BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, p: &ProjPoint) -> BigInt {
        self.terms.iter().map(|(e, c)| c * monomial_value(p.coords(), e)).sum()
    }

    pub fn mul(&self, other: &Form) -> Form {
        let mut terms = Vec::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                terms.push(([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]], c1 * c2));
            }
        }
        Form::new(self.degree + other.degree, terms).expect("degrees add")
    }

    /// Exact quotient by the linear form of `l`, or `None` if `l` does not
    /// divide this form. The quotient is returned up to a rational scale
    /// (content removed, canonical sign).
    pub fn divide_by_line(&self, l: &ProjLine) -> Option<Form> {
        if self.degree == 0 || self.is_zero() {
            return None;
        }
        let lc = l.coeffs();
        let lead = (0..3).find(|&i| !lc[i].is_zero()).expect("canonical line is nonzero");
        // lex order with the leading variable of l first
        let order: [usize; 3] = match lead {
            0 => [0, 1, 2],
            1 => [1, 0, 2],
            _ => [2, 0, 1],
        };
        let key = |e: &[u32; 3]| (e[order[0]], e[order[1]], e[order[2]]);
        let mut rem: BTreeMap<(u32, u32, u32), ([u32; 3], Rational)> = self
            .terms
            .iter()
            .map(|(e, c)| (key(e), (*e, Rational::from_integer(c.clone()))))
            .collect();
        let mut quot: Vec<([u32; 3], Rational)> = Vec::new();
        let lead_coeff = Rational::from_integer(lc[lead].clone());
        while let Some((_, (e, c))) = rem.iter().next_back().map(|(k, v)| (*k, v.clone())) {
            if e[lead] == 0 {
                return None;
            }
            let t = &c / &lead_coeff;
            let mut m = e;
            m[lead] -= 1;
            for (i, li) in lc.iter().enumerate() {
                if li.is_zero() {
                    continue;
                }
                let mut me = m;
                me[i] += 1;
                let entry = rem.entry(key(&me)).or_insert((me, Rational::zero()));
                entry.1 -= &t * Rational::from_integer(li.clone());
                if entry.1.is_zero() {
                    rem.remove(&key(&me));
                }
            }
            quot.push((m, t));
        }
        let denoms = quot.iter().fold(BigInt::one(), |acc, (_, r)| acc.lcm(r.denom()));
        let mut coeffs: Vec<BigInt> = quot.iter().map(|(_, r)| r.numer() * (&denoms / r.denom())).collect();
        content_normalize(&mut coeffs);
        Some(
            Form::new(self.degree - 1, quot.iter().map(|(e, _)| *e).zip(coeffs))
                .expect("quotient has degree one less"),
        )
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mono: String = ["X", "Y", "Z"]
                .iter()
                .zip(e)
                .filter(|(_, &p)| p > 0)
                .map(|(v, &p)| if p == 1 { v.to_string() } else { format!("{v}^{p}") })
                .collect();
            match (abs.is_one(), mono.is_empty()) {
                (true, false) => write!(f, "{mono}")?,
                (_, true) => write!(f, "{abs}")?,
                (false, false) => write!(f, "{abs}*{mono}")?,
            }
        }
        Ok(())
    }
}

/// A nonzero ternary cubic form, content-free with positive leading
/// coefficient, so proportional cubics compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CubicForm {
    c: [BigInt; 10],
}

impl CubicForm {
    pub fn new(coefficients: [BigInt; 10]) -> Result<Self> {
        let mut c = coefficients;
        if !content_normalize(&mut c) {
            return Err(Error::ZeroVector);
        }
        Ok(CubicForm { c })
    }

    pub fn from_i64(coefficients: [i64; 10]) -> Result<Self> {
        Self::new(coefficients.map(BigInt::from))
    }

    pub fn from_form(f: &Form) -> Result<Self> {
        if f.degree() != 3 {
            return Err(Error::invalid("not a cubic form"));
        }
        let c = MONOMIALS.map(|e| f.terms().get(&e).cloned().unwrap_or_default());
        Self::new(c)
    }

    /// `X³ - YZ²`, the homogenized `y = x³`.
    pub fn cuspidal() -> Self {
        Self::from_i64([1, 0, 0, 0, 0, 0, 0, 0, -1, 0]).expect("nonzero")
    }

    /// `Y²Z - X³ - aXZ² - bZ³`, the homogenized `y² = x³ + ax + b`.
    pub fn weierstrass(a: &Rational, b: &Rational) -> Self {
        let one = Rational::one();
        let [a, b, one] = clear_denominators([a, b, &one]);
        let mut c: [BigInt; 10] = Default::default();
        c[0] = -&one;
        c[5] = -a;
        c[7] = one;
        c[9] = -b;
        Self::new(c).expect("nonzero")
    }

    /// Product of three linear forms.
    pub fn from_lines(lines: [&ProjLine; 3]) -> Self {
        let f = Form::linear(lines[0]).mul(&Form::linear(lines[1])).mul(&Form::linear(lines[2]));
        Self::from_form(&f).expect("product of lines is a nonzero cubic")
    }

    pub fn coefficients(&self) -> &[BigInt; 10] {
        &self.c
    }

    pub fn to_form(&self) -> Form {
        Form::new(3, MONOMIALS.iter().copied().zip(self.c.iter().cloned())).expect("cubic monomials")
    }

    pub fn eval(&self, p: &ProjPoint) -> BigInt {
        MONOMIALS
            .iter()
            .zip(&self.c)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| c * monomial_value(p.coords(), e))
            .sum()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.eval(p).is_zero()
    }
}

impl fmt::Display for CubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_form().fmt(f)
    }
}

pub fn contains(f: &CubicForm, p: &ProjPoint) -> bool {
    f.contains(p)
}

/// Integer row echelon form maintained by fraction-free elimination.
///
/// Every stored row has a pivot column in which all other rows are zero;
/// rows are kept content-free.
#[derive(Clone, Debug, Default)]
pub(crate) struct Echelon {
    cols: usize,
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl Echelon {
    pub(crate) fn new(cols: usize) -> Self {
        Echelon { cols, rows: Vec::new() }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds a row; returns whether the rank grew.
    pub(crate) fn insert(&mut self, mut row: Vec<BigInt>) -> bool {
        assert_eq!(row.len(), self.cols);
        for (p, r) in &self.rows {
            if row[*p].is_zero() {
                continue;
            }
            let (a, b) = (r[*p].clone(), row[*p].clone());
            for (x, y) in row.iter_mut().zip(r) {
                *x = &a * &*x - &b * y;
            }
            content_normalize(&mut row);
        }
        let Some(pivot) = row.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        content_normalize(&mut row);
        for (_, r) in self.rows.iter_mut() {
            if r[pivot].is_zero() {
                continue;
            }
            let (a, b) = (row[pivot].clone(), r[pivot].clone());
            for (x, y) in r.iter_mut().zip(&row) {
                *x = &a * &*x - &b * y;
            }
            content_normalize(r);
        }
        self.rows.push((pivot, row));
        true
    }

    /// Basis of the right nullspace, one content-free vector per free column.
    pub(crate) fn nullspace(&self) -> Vec<Vec<BigInt>> {
        let pivots: Vec<usize> = self.rows.iter().map(|(p, _)| *p).collect();
        let l = self.rows.iter().fold(BigInt::one(), |acc, (p, r)| acc.lcm(&r[*p]));
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![BigInt::zero(); self.cols];
            v[free] = l.clone();
            for (p, r) in &self.rows {
                v[*p] = -(&r[free] * (&l / &r[*p]));
            }
            content_normalize(&mut v);
            basis.push(v);
        }
        basis
    }
}

fn evaluation_row(p: &ProjPoint) -> Vec<BigInt> {
    MONOMIALS.iter().map(|e| monomial_value(p.coords(), e)).collect()
}

fn cubic_echelon<'a>(points: impl IntoIterator<Item = &'a ProjPoint>) -> Echelon {
    let mut ech = Echelon::new(MONOMIALS.len());
    for p in points {
        if ech.rank() == MONOMIALS.len() {
            break;
        }
        ech.insert(evaluation_row(p));
    }
    ech
}

/// Basis of all cubics through the given points (exact nullspace of the
/// evaluation matrix). Empty iff no nonzero cubic vanishes on all of them.
pub fn fit_cubics(points: &[ProjPoint]) -> Result<Vec<CubicForm>> {
    if points.is_empty() || points.len() > FIT_LIMIT {
        return Err(Error::invalid(format!("fit_cubics takes 1..={FIT_LIMIT} points")));
    }
    Ok(cubic_nullspace(points))
}

fn cubic_nullspace(points: &[ProjPoint]) -> Vec<CubicForm> {
    cubic_echelon(points)
        .nullspace()
        .into_iter()
        .map(|v| CubicForm::new(v.try_into().expect("ten coefficients")).expect("nullspace vector is nonzero"))
        .collect()
}

/// A cubic through every point, if one exists. Works for point lists of any
/// length: the evaluation matrix has rank at most ten, so rows are folded in
/// incrementally.
pub fn on_common_cubic(points: &[ProjPoint]) -> Option<CubicForm> {
    cubic_nullspace(points).into_iter().next()
}

/// Whether the linear form of `l` divides `f`.
pub fn line_divides(f: &CubicForm, l: &ProjLine) -> bool {
    f.to_form().divide_by_line(l).is_some()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubicKind {
    ThreeLines,
    LinePlusConic,
    /// No candidate line divides the cubic. This is not a claim of irreducibility.
    NoCandidateFactor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub kind: CubicKind,
    /// Candidate lines that were divided out, with repetition.
    pub linear_factors: Vec<ProjLine>,
    /// What is left after dividing out the factors.
    pub residual: Form,
}

/// Factors candidate lines out of `f` and classifies it by what remains.
pub fn classify_with_candidates(f: &CubicForm, candidates: &[ProjLine]) -> Classification {
    let mut residual = f.to_form();
    let mut factors = Vec::new();
    for l in candidates {
        while residual.degree() > 0 {
            match residual.divide_by_line(l) {
                Some(q) => {
                    factors.push(l.clone());
                    residual = q;
                }
                None => break,
            }
        }
    }
    let kind = match factors.len() {
        0 => CubicKind::NoCandidateFactor,
        1 => CubicKind::LinePlusConic,
        // a linear residual is itself a line
        _ => CubicKind::ThreeLines,
    };
    Classification { kind, linear_factors: factors, residual }
}
