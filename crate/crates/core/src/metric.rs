//! Finite metric spaces: validation, shortest-path repair and generators.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::scalar::Scalar;

/// Default additive tolerance for the triangle check on float spaces.
pub const DEFAULT_TRIANGLE_TOL: f64 = 1e-9;

/// Default ceiling on raw grid assignments for [`enumerate_grid_spaces`].
pub const DEFAULT_GRID_CEILING: u128 = 50_000_000;

/// Largest point count accepted by [`enumerate_grid_spaces`].
pub const MAX_GRID_POINTS: usize = 5;

/// Largest grid accepted by [`enumerate_grid_spaces`].
pub const MAX_GRID_VALUES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("distance matrix is empty")]
    Empty,
    #[error("row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("entry ({0},{1}) is not finite")]
    NonFinite(usize, usize),
    #[error("{labels} labels given for {n} points")]
    LabelCount { labels: usize, n: usize },
    #[error("diagonal entry ({0},{0}) is not zero")]
    NonZeroDiagonal(usize),
    #[error("d({0},{1}) != d({1},{0})")]
    Asymmetric(usize, usize),
    #[error("off-diagonal entry ({0},{1}) is not strictly positive")]
    NegativeOrZeroOffDiagonal(usize, usize),
    #[error("triangle inequality fails: d({0},{1}) > d({0},{2}) + d({2},{1})")]
    TriangleViolation(usize, usize, usize),
    #[error("no finite path between {0} and {1}")]
    Disconnected(usize, usize),
    #[error("grid enumeration needs {raw} raw assignments, ceiling is {ceiling}")]
    Budget { raw: u128, ceiling: u128 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

impl MetricError {
    /// Stable name of the violated condition, for diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            MetricError::Empty => "EmptyMatrix",
            MetricError::NotSquare { .. } => "NotSquare",
            MetricError::NonFinite(..) => "NonFiniteEntry",
            MetricError::LabelCount { .. } => "LabelCount",
            MetricError::NonZeroDiagonal(_) => "NonZeroDiagonal",
            MetricError::Asymmetric(..) => "AsymmetricError",
            MetricError::NegativeOrZeroOffDiagonal(..) => "NegativeOrZeroOffDiagonal",
            MetricError::TriangleViolation(..) => "TriangleViolation",
            MetricError::Disconnected(..) => "DisconnectedError",
            MetricError::Budget { .. } => "BudgetError",
            MetricError::InvalidGrid(_) => "InvalidGrid",
        }
    }

    /// Point indices witnessing the violation, if any.
    pub fn indices(&self) -> Vec<usize> {
        match *self {
            MetricError::NonFinite(i, j)
            | MetricError::Asymmetric(i, j)
            | MetricError::NegativeOrZeroOffDiagonal(i, j)
            | MetricError::Disconnected(i, j) => vec![i, j],
            MetricError::NonZeroDiagonal(i) => vec![i],
            MetricError::TriangleViolation(i, j, k) => vec![i, j, k],
            _ => Vec::new(),
        }
    }
}

/// A square matrix of distances that has not been checked against the
/// metric axioms. Only the shape (and finiteness for floats) is enforced.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDistanceMatrix<S> {
    n: usize,
    labels: Option<Vec<String>>,
    d: Vec<S>,
}

impl<S: Scalar> RawDistanceMatrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self, MetricError> {
        let n = rows.len();
        if n == 0 {
            return Err(MetricError::Empty);
        }
        let mut d = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(MetricError::NotSquare { row: i, len: row.len(), n });
            }
            for (j, v) in row.into_iter().enumerate() {
                if !S::EXACT && !v.to_f64().is_finite() {
                    return Err(MetricError::NonFinite(i, j));
                }
                d.push(v);
            }
        }
        Ok(RawDistanceMatrix { n, labels: None, d })
    }

    pub fn with_labels(mut self, labels: Option<Vec<String>>) -> Result<Self, MetricError> {
        if let Some(l) = &labels {
            if l.len() != self.n {
                return Err(MetricError::LabelCount { labels: l.len(), n: self.n });
            }
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.d[i * self.n + j]
    }

    /// Checks zero diagonal, symmetry and strictly positive off-diagonal
    /// entries, in that order.
    fn check_premetric(&self) -> Result<(), MetricError> {
        let n = self.n;
        for i in 0..n {
            if !self.get(i, i).is_zero() {
                return Err(MetricError::NonZeroDiagonal(i));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.get(i, j) != self.get(j, i) {
                    return Err(MetricError::Asymmetric(i, j));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if *self.get(i, j) <= S::zero() {
                    return Err(MetricError::NegativeOrZeroOffDiagonal(i, j));
                }
            }
        }
        Ok(())
    }
}

/// A validated `n`-point metric space given by its distance matrix.
///
/// Immutable once built; every constructor checks the four metric axioms.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace<S> {
    n: usize,
    labels: Option<Vec<String>>,
    d: Vec<S>,
}

impl<S: Scalar> FiniteMetricSpace<S> {
    /// Builds a space from rows and validates it with `tol`.
    pub fn from_rows(rows: Vec<Vec<S>>, tol: f64) -> Result<Self, MetricError> {
        validate(RawDistanceMatrix::from_rows(rows)?, tol)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> &S {
        &self.d[i * self.n + j]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of point `i`: its label, or the index.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn with_labels(mut self, labels: Option<Vec<String>>) -> Result<Self, MetricError> {
        if let Some(l) = &labels {
            if l.len() != self.n {
                return Err(MetricError::LabelCount { labels: l.len(), n: self.n });
            }
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.d.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn to_raw(&self) -> RawDistanceMatrix<S> {
        RawDistanceMatrix { n: self.n, labels: self.labels.clone(), d: self.d.clone() }
    }

    /// Relabels points: point `i` of `self` becomes point `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length");
        let n = self.n;
        let mut d = vec![S::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                d[perm[i] * n + perm[j]] = self.dist(i, j).clone();
            }
        }
        let labels = self.labels.as_ref().map(|l| {
            let mut out = vec![String::new(); n];
            for i in 0..n {
                out[perm[i]] = l[i].clone();
            }
            out
        });
        FiniteMetricSpace { n, labels, d }
    }

    /// Off-diagonal distances `d(i,j)`, `i < j`, sorted ascending.
    pub fn distance_multiset(&self) -> Vec<S> {
        let mut out = Vec::with_capacity(self.n * (self.n.saturating_sub(1)) / 2);
        for i in 0..self.n {
            for j in i + 1..self.n {
                out.push(self.dist(i, j).clone());
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).expect("distances are comparable"));
        out
    }

    /// Same space with every distance divided by the smallest off-diagonal
    /// one. Spaces with fewer than two points are returned unchanged.
    pub fn normalized(&self) -> Self {
        let Some(min) = self.distance_multiset().into_iter().next() else {
            return self.clone();
        };
        FiniteMetricSpace {
            n: self.n,
            labels: self.labels.clone(),
            d: self.d.iter().map(|v| v.clone() / min.clone()).collect(),
        }
    }

    pub fn to_f64(&self) -> FiniteMetricSpace<f64> {
        FiniteMetricSpace {
            n: self.n,
            labels: self.labels.clone(),
            d: self.d.iter().map(Scalar::to_f64).collect(),
        }
    }
}

impl FiniteMetricSpace<f64> {
    /// Exact rational copy of a float space. Every binary64 value converts
    /// exactly, but rounding in the source may leave triangle slack that
    /// only the float tolerance absorbed; the result is re-validated with
    /// `tol`.
    pub fn to_exact(&self, tol: f64) -> Result<FiniteMetricSpace<BigRational>, MetricError> {
        let rows = self
            .rows()
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|v| BigRational::from_float(v).expect("finite by construction"))
                    .collect()
            })
            .collect();
        let raw = RawDistanceMatrix::from_rows(rows)?.with_labels(self.labels.clone())?;
        validate(raw, tol)
    }
}

impl<S: Scalar> fmt::Display for FiniteMetricSpace<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.dist(i, j).to_string()).collect();
            writeln!(f, "{:>6} [{}]", self.label(i), row.join(", "))?;
        }
        Ok(())
    }
}

/// Checks the metric axioms and returns the validated space.
///
/// The triangle inequality is checked as `d(i,j) <= d(i,k) + d(k,j) + tol`.
/// Errors report the first violated axiom in the order: shape, diagonal,
/// symmetry, positivity, triangle; indices are scanned lexicographically.
pub fn validate<S: Scalar>(
    m: RawDistanceMatrix<S>,
    tol: f64,
) -> Result<FiniteMetricSpace<S>, MetricError> {
    m.check_premetric()?;
    let tol = S::from_f64(tol).unwrap_or_else(S::zero);
    let n = m.n;
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                if *m.get(i, j) > m.get(i, k).clone() + m.get(k, j).clone() + tol.clone() {
                    return Err(MetricError::TriangleViolation(i, j, k));
                }
            }
        }
    }
    Ok(FiniteMetricSpace { n, labels: m.labels, d: m.d })
}

/// Replaces `m` by its all-pairs shortest-path closure: the largest metric
/// that is pointwise `<= m`.
///
/// Floyd-Warshall passes are repeated until nothing changes, so the closure
/// also holds under floating rounding and the output validates with `tol = 0`.
pub fn metric_repair<S: Scalar>(m: RawDistanceMatrix<S>) -> Result<FiniteMetricSpace<S>, MetricError> {
    m.check_premetric()?;
    let n = m.n;
    let mut d = m.d;
    loop {
        let mut changed = false;
        for k in 0..n {
            for i in 0..n {
                if i == k {
                    continue;
                }
                for j in 0..n {
                    if j == i || j == k {
                        continue;
                    }
                    let via = d[i * n + k].clone() + d[k * n + j].clone();
                    if via < d[i * n + j] {
                        d[i * n + j] = via;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !S::EXACT && !d[i * n + j].to_f64().is_finite() {
                return Err(MetricError::Disconnected(i, j));
            }
        }
    }
    Ok(FiniteMetricSpace { n, labels: m.labels, d })
}

/// Vector norm used by [`gen_euclidean`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Norm {
    L1,
    L2,
    LInf,
    /// Minkowski `p`-norm; `p` must be at least 1.
    P(f64),
}

impl Norm {
    fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
        match self {
            Norm::L1 => diffs.sum(),
            Norm::L2 => diffs.map(|v| v * v).sum::<f64>().sqrt(),
            Norm::LInf => diffs.fold(0.0, f64::max),
            Norm::P(p) => diffs.map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p),
        }
    }
}

impl std::str::FromStr for Norm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "1" | "l1" => Ok(Norm::L1),
            "2" | "l2" => Ok(Norm::L2),
            "inf" | "linf" => Ok(Norm::LInf),
            other => match other.parse::<f64>() {
                Ok(p) if p >= 1.0 && p.is_finite() => Ok(Norm::P(p)),
                _ => Err(format!("unknown norm {s:?}")),
            },
        }
    }
}

/// Samples `n` distinct points uniformly in the unit `k`-cube and returns
/// their pairwise distances under `norm`. Coincident samples are redrawn.
///
/// # Panics
///
/// If `k == 0`, `n == 0`, or `norm` is `P(p)` with `p < 1`.
pub fn gen_euclidean(k: usize, n: usize, seed: u64, norm: Norm) -> FiniteMetricSpace<f64> {
    assert!(k >= 1 && n >= 1, "dimension and point count must be positive");
    if let Norm::P(p) = norm {
        assert!(p >= 1.0, "p-norm needs p >= 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(n);
    while points.len() < n {
        let candidate: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
        if points.iter().all(|p| norm.distance(p, &candidate) > 0.0) {
            points.push(candidate);
        }
    }
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v = norm.distance(&points[i], &points[j]);
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    FiniteMetricSpace { n, labels: None, d }
}

/// Exact-arithmetic point cloud: `n` distinct points on the lattice
/// `{0, 1/res, ..., 1}^k` under the L1 norm (`linf = false`) or the
/// L-infinity norm (`linf = true`). Both norms keep distances rational.
pub fn gen_lattice_cloud(
    k: usize,
    n: usize,
    resolution: u32,
    linf: bool,
    seed: u64,
) -> FiniteMetricSpace<BigRational> {
    assert!(k >= 1 && n >= 1 && resolution >= 1);
    let cells = (resolution as u64 + 1).checked_pow(k as u32).unwrap_or(u64::MAX);
    assert!(cells >= n as u64, "lattice has fewer than n points");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Vec<i64>> = Vec::with_capacity(n);
    while points.len() < n {
        let candidate: Vec<i64> = (0..k).map(|_| rng.gen_range(0..=resolution as i64)).collect();
        if !points.contains(&candidate) {
            points.push(candidate);
        }
    }
    let den = BigInt::from(resolution);
    let mut d = vec![BigRational::from_integer(0.into()); n * n];
    for i in 0..n {
        for j in i + 1..n {
            let diffs = points[i].iter().zip(&points[j]).map(|(a, b)| (a - b).abs());
            let num = if linf { diffs.max().unwrap_or(0) } else { diffs.sum() };
            let v = BigRational::new(BigInt::from(num), den.clone());
            d[i * n + j] = v.clone();
            d[j * n + i] = v;
        }
    }
    FiniteMetricSpace { n, labels: None, d }
}

/// Symmetric matrix with zero diagonal and off-diagonal entries drawn
/// uniformly from `[lo, hi)`; not a metric in general.
pub fn random_raw_matrix(n: usize, lo: f64, hi: f64, seed: u64) -> RawDistanceMatrix<f64> {
    assert!(n >= 1 && 0.0 < lo && lo < hi);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(lo..hi);
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    RawDistanceMatrix { n, labels: None, d }
}

/// Integer-valued counterpart of [`random_raw_matrix`] with entries in
/// `1..=max`, for exact-arithmetic corpora.
pub fn random_integer_matrix(n: usize, max: u32, seed: u64) -> RawDistanceMatrix<BigRational> {
    assert!(n >= 1 && max >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = vec![BigRational::from_integer(0.into()); n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v = BigRational::from_integer(BigInt::from(rng.gen_range(1..=max)));
            d[i * n + j] = v.clone();
            d[j * n + i] = v;
        }
    }
    RawDistanceMatrix { n, labels: None, d }
}

/// Slot order used by grid enumeration: `(0,1), (0,2), ..., (1,2), ...`.
pub fn distance_slots(n: usize) -> Vec<(usize, usize)> {
    let mut slots = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            slots.push((i, j));
        }
    }
    slots
}

/// Iterator over every assignment of grid values to the distance slots
/// that satisfies the triangle inequality exactly (non-strict).
///
/// Assignments are visited in lexicographic order of grid positions, first
/// slot most significant; a reordered grid therefore reorders the stream.
#[derive(Debug, Clone)]
pub struct GridSpaces<S> {
    n: usize,
    grid: Vec<S>,
    slots: Vec<(usize, usize)>,
    odometer: Vec<usize>,
    done: bool,
}

impl<S: Scalar> GridSpaces<S> {
    /// `|grid|^(n(n-1)/2)`.
    pub fn raw_count(&self) -> u128 {
        raw_grid_count(self.n, self.grid.len())
    }

    fn advance(&mut self) {
        for pos in (0..self.odometer.len()).rev() {
            self.odometer[pos] += 1;
            if self.odometer[pos] < self.grid.len() {
                return;
            }
            self.odometer[pos] = 0;
        }
        self.done = true;
    }

    fn current(&self) -> Option<FiniteMetricSpace<S>> {
        let n = self.n;
        let mut d = vec![S::zero(); n * n];
        for (&(i, j), &g) in self.slots.iter().zip(&self.odometer) {
            d[i * n + j] = self.grid[g].clone();
            d[j * n + i] = self.grid[g].clone();
        }
        for (i, j) in self.slots.iter().copied() {
            for k in 0..n {
                if k != i && k != j && d[i * n + j] > d[i * n + k].clone() + d[k * n + j].clone() {
                    return None;
                }
            }
        }
        Some(FiniteMetricSpace { n, labels: None, d })
    }
}

impl<S: Scalar> Iterator for GridSpaces<S> {
    type Item = FiniteMetricSpace<S>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            let space = self.current();
            self.advance();
            if space.is_some() {
                return space;
            }
        }
        None
    }
}

/// Number of raw slot assignments for `n` points over `grid_len` values.
pub fn raw_grid_count(n: usize, grid_len: usize) -> u128 {
    let slots = (n * n.saturating_sub(1) / 2) as u32;
    (grid_len as u128).saturating_pow(slots)
}

/// Enumerates every metric on `n` points whose distances are drawn from
/// `grid`. See [`GridSpaces`] for ordering.
///
/// Requires `3 <= n <= 5`, between 1 and 12 distinct strictly positive
/// grid values, and at most `ceiling` raw assignments.
pub fn enumerate_grid_spaces<S: Scalar>(
    n: usize,
    grid: &[S],
    ceiling: u128,
) -> Result<GridSpaces<S>, MetricError> {
    if !(3..=MAX_GRID_POINTS).contains(&n) {
        return Err(MetricError::InvalidGrid(format!("point count {n} outside 3..=5")));
    }
    if grid.is_empty() || grid.len() > MAX_GRID_VALUES {
        return Err(MetricError::InvalidGrid(format!("{} grid values, need 1..=12", grid.len())));
    }
    if let Some(v) = grid.iter().find(|v| **v <= S::zero()) {
        return Err(MetricError::InvalidGrid(format!("value {v} is not strictly positive")));
    }
    for (a, v) in grid.iter().enumerate() {
        if grid[..a].contains(v) {
            return Err(MetricError::InvalidGrid(format!("value {v} repeated")));
        }
    }
    let raw = raw_grid_count(n, grid.len());
    if raw > ceiling {
        return Err(MetricError::Budget { raw, ceiling });
    }
    let slots = distance_slots(n);
    Ok(GridSpaces {
        n,
        grid: grid.to_vec(),
        odometer: vec![0; slots.len()],
        slots,
        done: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows_f(rows: &[&[f64]]) -> Vec<Vec<f64>> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn sides_one_four_four_is_metric() {
        let space =
            FiniteMetricSpace::from_rows(rows_f(&[&[0., 1., 4.], &[1., 0., 4.], &[4., 4., 0.]]), 0.0)
                .unwrap();
        assert_eq!(space.len(), 3);
        assert_eq!(*space.dist(0, 2), 4.0);
    }

    #[test]
    fn single_point_space() {
        let space = FiniteMetricSpace::from_rows(vec![vec![0.0]], DEFAULT_TRIANGLE_TOL).unwrap();
        assert_eq!(space.len(), 1);
        assert!(space.distance_multiset().is_empty());
    }

    #[test]
    fn triangle_violation_reports_first_witness() {
        let err = FiniteMetricSpace::from_rows(
            rows_f(&[&[0., 1., 3.], &[1., 0., 1.], &[3., 1., 0.]]),
            DEFAULT_TRIANGLE_TOL,
        )
        .unwrap_err();
        assert_eq!(err, MetricError::TriangleViolation(0, 2, 1));
    }

    #[test]
    fn axiom_errors() {
        let asym = FiniteMetricSpace::from_rows(rows_f(&[&[0., 1.], &[2., 0.]]), 0.0);
        assert_eq!(asym.unwrap_err(), MetricError::Asymmetric(0, 1));
        let zero = FiniteMetricSpace::from_rows(rows_f(&[&[0., 0.], &[0., 0.]]), 0.0);
        assert_eq!(zero.unwrap_err(), MetricError::NegativeOrZeroOffDiagonal(0, 1));
        let diag = FiniteMetricSpace::from_rows(rows_f(&[&[1., 1.], &[1., 0.]]), 0.0);
        assert_eq!(diag.unwrap_err(), MetricError::NonZeroDiagonal(0));
        let ragged = RawDistanceMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0]]);
        assert!(matches!(ragged, Err(MetricError::NotSquare { row: 1, .. })));
        let nan = RawDistanceMatrix::from_rows(vec![vec![0.0, f64::NAN], vec![1.0, 0.0]]);
        assert_eq!(nan.unwrap_err(), MetricError::NonFinite(0, 1));
    }

    #[test]
    fn triangle_tolerance_is_additive() {
        let rows = rows_f(&[&[0., 1., 2.0 + 1e-12], &[1., 0., 1.], &[2.0 + 1e-12, 1., 0.]]);
        assert!(FiniteMetricSpace::from_rows(rows.clone(), 1e-9).is_ok());
        assert!(FiniteMetricSpace::from_rows(rows, 0.0).is_err());
    }

    #[test]
    fn repair_examples() {
        let raw = RawDistanceMatrix::from_rows(rows_f(&[&[0., 1., 3.], &[1., 0., 1.], &[3., 1., 0.]]))
            .unwrap();
        let fixed = metric_repair(raw).unwrap();
        assert_eq!(fixed.rows(), rows_f(&[&[0., 1., 2.], &[1., 0., 1.], &[2., 1., 0.]]));

        let raw = RawDistanceMatrix::from_rows(rows_f(&[&[0., 5., 1.], &[5., 0., 1.], &[1., 1., 0.]]))
            .unwrap();
        let fixed = metric_repair(raw).unwrap();
        assert_eq!(fixed.rows(), rows_f(&[&[0., 2., 1.], &[2., 0., 1.], &[1., 1., 0.]]));

        let metric = rows_f(&[&[0., 1., 4.], &[1., 0., 4.], &[4., 4., 0.]]);
        let raw = RawDistanceMatrix::from_rows(metric.clone()).unwrap();
        assert_eq!(metric_repair(raw).unwrap().rows(), metric);
    }

    #[test]
    fn repair_rejects_non_premetric() {
        let raw = RawDistanceMatrix::from_rows(rows_f(&[&[0., 1.], &[3., 0.]])).unwrap();
        assert_eq!(metric_repair(raw).unwrap_err(), MetricError::Asymmetric(0, 1));
    }

    #[test]
    fn euclidean_generator() {
        for seed in 0..20 {
            let s = gen_euclidean(1, 3, seed, Norm::L2);
            assert!(validate(s.to_raw(), 0.0).is_ok());
        }
        let a = gen_euclidean(3, 6, 11, Norm::L1);
        let b = gen_euclidean(3, 6, 11, Norm::L1);
        assert_eq!(a, b);
        let c = gen_euclidean(2, 4, 7, Norm::L2);
        assert!(validate(c.to_raw(), 1e-12).is_ok());
        let p = gen_euclidean(2, 5, 3, Norm::P(3.0));
        assert!(validate(p.to_raw(), 1e-12).is_ok());
    }

    #[test]
    fn lattice_cloud_is_exact_metric() {
        for seed in 0..10 {
            let s = gen_lattice_cloud(2, 6, 8, seed % 2 == 0, seed);
            assert!(validate(s.to_raw(), 0.0).is_ok());
        }
    }

    #[test]
    fn grid_single_value() {
        let spaces: Vec<_> = enumerate_grid_spaces(3, &[q(1)], DEFAULT_GRID_CEILING).unwrap().collect();
        assert_eq!(spaces.len(), 1);
        assert_eq!(spaces[0].distance_multiset(), vec![q(1), q(1), q(1)]);
    }

    #[test]
    fn grid_one_four() {
        let spaces: Vec<_> =
            enumerate_grid_spaces(3, &[q(1), q(4)], DEFAULT_GRID_CEILING).unwrap().collect();
        let multisets: Vec<_> = spaces.iter().map(|s| s.distance_multiset()).collect();
        assert!(multisets.contains(&vec![q(1), q(4), q(4)]));
        assert!(!multisets.contains(&vec![q(1), q(1), q(4)]));
        // (1,1,1), (4,4,4) and three placements of (1,4,4)
        assert_eq!(spaces.len(), 5);
    }

    #[test]
    fn grid_one_two_counts_assignments_and_classes() {
        let spaces: Vec<_> =
            enumerate_grid_spaces(3, &[q(1), q(2)], DEFAULT_GRID_CEILING).unwrap().collect();
        // No triangle fails with values in {1, 2}, so all 2^3 assignments survive.
        assert_eq!(spaces.len(), 8);
        let mut multisets: Vec<_> = spaces.iter().map(|s| s.distance_multiset()).collect();
        multisets.sort();
        multisets.dedup();
        assert_eq!(multisets.len(), 4);
    }

    #[test]
    fn grid_preconditions() {
        assert!(matches!(enumerate_grid_spaces(2, &[q(1)], 10), Err(MetricError::InvalidGrid(_))));
        assert!(matches!(enumerate_grid_spaces(6, &[q(1)], 10), Err(MetricError::InvalidGrid(_))));
        assert!(matches!(enumerate_grid_spaces(3, &[q(0)], 10), Err(MetricError::InvalidGrid(_))));
        assert!(matches!(
            enumerate_grid_spaces(3, &[q(1), q(1)], 10),
            Err(MetricError::InvalidGrid(_))
        ));
        assert!(matches!(
            enumerate_grid_spaces(5, &[q(1), q(2), q(3), q(4)], 1000),
            Err(MetricError::Budget { raw: 1_048_576, ceiling: 1000 })
        ));
    }

    #[test]
    fn permutation_moves_rows_and_labels() {
        let s = FiniteMetricSpace::from_rows(rows_f(&[&[0., 1., 4.], &[1., 0., 4.], &[4., 4., 0.]]), 0.0)
            .unwrap()
            .with_labels(Some(vec!["x".into(), "y".into(), "z".into()]))
            .unwrap();
        let p = s.permuted(&[2, 0, 1]);
        assert_eq!(*p.dist(2, 0), 1.0);
        assert_eq!(*p.dist(1, 0), 4.0);
        assert_eq!(p.label(2), "x");
        assert_eq!(p.distance_multiset(), s.distance_multiset());
    }
}
