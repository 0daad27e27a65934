//! The 54-state edge-label transition system of the Stern–Brocot tree.
//!
//! Each tree edge is labeled (σ(parent), σ(child), sign). An edge label alone
//! determines the labels of its two child edges, the label set saturates to
//! |S| = 9 orientations and |E| = 54 labels, and picking children uniformly
//! gives a doubly stochastic 54×54 matrix whose stationary distribution is
//! uniform. Summing the stationary mass per endpoint vertex yields the
//! limiting vertex proportions; a parallel lattice-patch survey reproduces
//! them empirically.

use crate::cube::{endpoint_vertex, CubeOrientation};
use crate::rational::{Int, Rational};
use crate::stern_brocot::{orientation_at_u64, Sign};
use num::{One, Zero};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

/// An edge of the tree, identified by parent orientation, child orientation,
/// and the child's sign. The derived ordering (parent, child, minus-first)
/// is the canonical index order for the transition matrix.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeLabel {
    pub parent: CubeOrientation,
    pub child: CubeOrientation,
    pub sign: Sign,
}

impl EdgeLabel {
    pub fn new(parent: CubeOrientation, child: CubeOrientation, sign: Sign) -> Self {
        Self { parent, child, sign }
    }
}

impl std::fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.parent, self.child, self.sign)
    }
}

/// The two edges leaving the root: to its negative child r = 1230 and its
/// positive child u = 2310.
pub fn root_edges() -> (EdgeLabel, EdgeLabel) {
    (
        EdgeLabel::new(CubeOrientation::IDENTITY, CubeOrientation::R, Sign::Minus),
        EdgeLabel::new(CubeOrientation::IDENTITY, CubeOrientation::U, Sign::Plus),
    )
}

/// Child edges of an edge (σ(s), σ(t), sign), as (negative, positive).
///
/// Three consecutive nodes on a branch have orientations x, xy, xy², so the
/// same-sign child is always (σ(t), σ(t)·σ(s)⁻¹·σ(t)); the opposite-sign
/// child follows from the orientation recurrence: σ(t)·ru·σ(s) when the edge
/// is positive, σ(t)·ur·σ(s) when it is negative.
pub fn child_edges(e: &EdgeLabel) -> (EdgeLabel, EdgeLabel) {
    let same_sign_child = e.child.compose(e.parent.inverse()).compose(e.child);
    let ru = CubeOrientation::R.compose(CubeOrientation::U);
    let ur = CubeOrientation::U.compose(CubeOrientation::R);
    match e.sign {
        Sign::Plus => (
            EdgeLabel::new(e.child, e.child.compose(ru).compose(e.parent), Sign::Minus),
            EdgeLabel::new(e.child, same_sign_child, Sign::Plus),
        ),
        Sign::Minus => (
            EdgeLabel::new(e.child, same_sign_child, Sign::Minus),
            EdgeLabel::new(e.child, e.child.compose(ur).compose(e.parent), Sign::Plus),
        ),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MarkovError {
    #[error("edge-label closure exceeded the safety bound of {0} labels; convention bug")]
    ClosureExploded(usize),
    #[error("column sums of the transition matrix deviate from 1")]
    NotColumnStochastic,
}

/// The transitive closure of the edge-label system.
#[derive(Clone, Debug)]
pub struct Saturation {
    /// Orientations occurring in the labels, ascending (expected |S| = 9).
    pub orientations: Vec<CubeOrientation>,
    /// All labels in canonical order (expected |E| = 54).
    pub edges: Vec<EdgeLabel>,
    /// Deepest tree depth at which a new label first appeared (root edges
    /// are at depth 1; expected 7, i.e. depth 8 adds nothing).
    pub deepest_new_label: u64,
}

/// Breadth-first closure from the two root edges under `child_edges`.
pub fn saturate() -> Result<Saturation, MarkovError> {
    const SAFETY_BOUND: usize = 24 * 24 * 2;
    let (neg, pos) = root_edges();
    let mut seen: BTreeSet<EdgeLabel> = BTreeSet::new();
    seen.insert(neg);
    seen.insert(pos);
    let mut frontier = VecDeque::from([neg, pos]);
    let mut depth: u64 = 1;
    let mut deepest_new_label: u64 = 1;
    while !frontier.is_empty() {
        depth += 1;
        let mut next = VecDeque::new();
        for e in frontier {
            let (c_minus, c_plus) = child_edges(&e);
            for c in [c_minus, c_plus] {
                if seen.insert(c) {
                    deepest_new_label = depth;
                    next.push_back(c);
                }
            }
        }
        if seen.len() > SAFETY_BOUND {
            return Err(MarkovError::ClosureExploded(SAFETY_BOUND));
        }
        frontier = next;
    }
    let mut orientations = BTreeSet::new();
    for e in &seen {
        orientations.insert(e.parent);
        orientations.insert(e.child);
    }
    Ok(Saturation {
        orientations: orientations.into_iter().collect(),
        edges: seen.into_iter().collect(),
        deepest_new_label,
    })
}

/// The 54×54 row-stochastic matrix A with A[e][f] = 1/2 iff f is a child of
/// e, rows and columns in canonical label order. Stored sparsely as the two
/// child indices per row.
#[derive(Clone, Debug)]
pub struct TransitionMatrix {
    labels: Vec<EdgeLabel>,
    children: Vec<[usize; 2]>,
}

/// Exact stationary facts plus the float spectral-gap estimate.
#[derive(Clone, Debug)]
pub struct StationaryReport {
    pub stationary: Vec<Rational>,
    pub is_column_stochastic: bool,
    pub second_eigenvalue_modulus: f64,
}

pub fn transition_matrix() -> Result<TransitionMatrix, MarkovError> {
    let sat = saturate()?;
    Ok(TransitionMatrix::from_labels(sat.edges))
}

impl TransitionMatrix {
    fn from_labels(labels: Vec<EdgeLabel>) -> Self {
        let index: BTreeMap<EdgeLabel, usize> =
            labels.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let children = labels
            .iter()
            .map(|e| {
                let (m, p) = child_edges(e);
                [index[&m], index[&p]]
            })
            .collect();
        Self { labels, children }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[EdgeLabel] {
        &self.labels
    }

    pub fn children_of(&self, row: usize) -> [usize; 2] {
        self.children[row]
    }

    pub fn index_of(&self, e: &EdgeLabel) -> Option<usize> {
        self.labels.binary_search(e).ok()
    }

    pub fn entry(&self, row: usize, col: usize) -> Rational {
        if self.children[row].contains(&col) {
            Rational::new(Int::one(), Int::from(2))
        } else {
            Rational::zero()
        }
    }

    pub fn row_sums(&self) -> Vec<Rational> {
        let half = Rational::new(Int::one(), Int::from(2));
        self.children.iter().map(|c| {
            // The two children always differ (their signs differ).
            debug_assert_ne!(c[0], c[1]);
            &half + &half
        }).collect()
    }

    pub fn column_sums(&self) -> Vec<Rational> {
        let half = Rational::new(Int::one(), Int::from(2));
        let mut sums = vec![Rational::zero(); self.size()];
        for row in &self.children {
            for &c in row {
                sums[c] = &sums[c] + &half;
            }
        }
        sums
    }

    /// v ← v·A, exactly.
    pub fn step_exact(&self, v: &[Rational]) -> Vec<Rational> {
        let half = Rational::new(Int::one(), Int::from(2));
        let mut out = vec![Rational::zero(); self.size()];
        for (row, cs) in self.children.iter().enumerate() {
            if v[row].is_zero() {
                continue;
            }
            let share = &v[row] * &half;
            for &c in cs {
                out[c] = &out[c] + &share;
            }
        }
        out
    }

    /// v ← v·(2A): integer doubling step for path counts.
    pub fn step_counts(&self, v: &[Int]) -> Vec<Int> {
        let mut out = vec![Int::zero(); self.size()];
        for (row, cs) in self.children.iter().enumerate() {
            if v[row].is_zero() {
                continue;
            }
            for &c in cs {
                out[c] = &out[c] + &v[row];
            }
        }
        out
    }

    /// v ← v·A in floating point.
    pub fn step_f64(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.size()];
        for (row, cs) in self.children.iter().enumerate() {
            let share = v[row] * 0.5;
            for &c in cs {
                out[c] += share;
            }
        }
        out
    }

    /// The start vector b: mass 1/2 on each of the two root edges.
    pub fn root_distribution(&self) -> Vec<Rational> {
        let (neg, pos) = root_edges();
        let half = Rational::new(Int::one(), Int::from(2));
        let mut v = vec![Rational::zero(); self.size()];
        v[self.index_of(&neg).expect("root edge present")] = half.clone();
        v[self.index_of(&pos).expect("root edge present")] = half;
        v
    }

    /// Vertex of an edge: where its child orientation lands the cube.
    pub fn edge_vertex(&self, row: usize) -> u8 {
        endpoint_vertex(self.labels[row].child)
    }

    /// Exact per-vertex frequencies b·A^{k−1}·s_v and integer path counts
    /// (2b)(2A)^{k−1}·s_v at depth k ≥ 1.
    pub fn vertex_frequencies_at_depth(&self, k: u64) -> (BTreeMap<u8, Rational>, BTreeMap<u8, Int>) {
        assert!(k >= 1, "depth starts at 1");
        let mut v = self.root_distribution();
        let mut counts: Vec<Int> = v
            .iter()
            .map(|x| (x * Rational::from_integer(Int::from(2))).to_integer())
            .collect();
        for _ in 1..k {
            v = self.step_exact(&v);
            counts = self.step_counts(&counts);
        }
        let mut freq: BTreeMap<u8, Rational> = (1..=7).map(|x| (x, Rational::zero())).collect();
        let mut cnt: BTreeMap<u8, Int> = (1..=7).map(|x| (x, Int::zero())).collect();
        for row in 0..self.size() {
            let vertex = self.edge_vertex(row);
            freq.entry(vertex).and_modify(|f| *f = &*f + &v[row]);
            cnt.entry(vertex).and_modify(|c| *c = &*c + &counts[row]);
        }
        (freq, cnt)
    }

    /// Limiting frequencies π·s_v: the share of edges landing on each vertex.
    pub fn limit_frequencies(&self) -> BTreeMap<u8, Rational> {
        let n = Int::from(self.size() as u64);
        let mut freq: BTreeMap<u8, Rational> = (1..=7).map(|x| (x, Rational::zero())).collect();
        for row in 0..self.size() {
            let vertex = self.edge_vertex(row);
            freq.entry(vertex)
                .and_modify(|f| *f = &*f + Rational::new(Int::one(), n.clone()));
        }
        freq
    }

    /// Exact stochasticity and stationarity checks plus a power-iteration
    /// estimate of the second eigenvalue modulus.
    pub fn stationary_analysis(&self) -> Result<StationaryReport, MarkovError> {
        let one = Rational::one();
        if self.column_sums().iter().any(|s| *s != one) {
            return Err(MarkovError::NotColumnStochastic);
        }
        let n = self.size();
        let uniform = Rational::new(Int::one(), Int::from(n as u64));
        let pi = vec![uniform; n];
        assert_eq!(self.step_exact(&pi), pi, "uniform vector must be stationary");

        // Power iteration on the complement of the stationary direction.
        let mut v = vec![0.0; n];
        v[0] = 1.0 - 1.0 / n as f64;
        for x in v.iter_mut().skip(1) {
            *x = -1.0 / n as f64;
        }
        let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut mid = 0.0;
        for k in 0..300 {
            if k == 150 {
                mid = norm(&v);
            }
            v = self.step_f64(&v);
            // Re-project: numerical drift off the sum-zero subspace.
            let mean = v.iter().sum::<f64>() / n as f64;
            for x in v.iter_mut() {
                *x -= mean;
            }
        }
        let second_eigenvalue_modulus = (norm(&v) / mid).powf(1.0 / 150.0);
        Ok(StationaryReport {
            stationary: pi,
            is_column_stochastic: true,
            second_eigenvalue_modulus,
        })
    }

    /// Exact rank of A − I over the rationals (expected 53: the fixed space
    /// is one-dimensional).
    pub fn rank_of_a_minus_identity(&self) -> usize {
        let n = self.size();
        let half = Rational::new(Int::one(), Int::from(2));
        let mut m = vec![vec![Rational::zero(); n]; n];
        for (row, cs) in self.children.iter().enumerate() {
            for &c in cs {
                m[row][c] = &m[row][c] + &half;
            }
            m[row][row] = &m[row][row] - Rational::one();
        }
        // Fraction-exact Gaussian elimination.
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..n).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            let inv = Rational::one() / m[rank][col].clone();
            for r in (rank + 1)..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] * &inv;
                for c in col..n {
                    let delta = &factor * &m[rank][c];
                    m[r][c] = &m[r][c] - delta;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Dense exact-rational JSON export.
    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<Vec<String>> = (0..self.size())
            .map(|r| {
                (0..self.size())
                    .map(|c| {
                        if self.children[r].contains(&c) {
                            "1/2".to_string()
                        } else {
                            "0".to_string()
                        }
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({
            "size": self.size(),
            "labels": self.labels.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "entries": entries,
        })
    }

    /// The 54-row child table in the reference column layout:
    /// edge, negative child edge, positive child edge.
    pub fn child_table_csv(&self) -> String {
        let mut s = String::from(
            "parent,child,sign,neg_parent,neg_child,neg_sign,pos_parent,pos_child,pos_sign\n",
        );
        for e in &self.labels {
            let (m, p) = child_edges(e);
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                e.parent, e.child, e.sign, m.parent, m.child, m.sign, p.parent, p.child, p.sign
            ));
        }
        s
    }
}

/// Known-good child table used by the verification battery: 54 data rows of
/// `parent,child,sign,neg_parent,neg_child,neg_sign,pos_parent,pos_child,pos_sign`.
pub const GOLDEN_CHILD_TABLE: &str = include_str!("golden_child_table.csv");

/// Parse the golden table into (edge, negative child, positive child) rows.
pub fn golden_child_rows() -> Vec<(EdgeLabel, EdgeLabel, EdgeLabel)> {
    GOLDEN_CHILD_TABLE
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let f: Vec<&str> = line.trim().split(',').collect();
            assert_eq!(f.len(), 9, "golden table row must have 9 fields: {line}");
            let sign = |s: &str| if s == "-" { Sign::Minus } else { Sign::Plus };
            let edge = |p: &str, c: &str, s: &str| {
                EdgeLabel::new(p.parse().unwrap(), c.parse().unwrap(), sign(s))
            };
            (
                edge(f[0], f[1], f[2]),
                edge(f[3], f[4], f[5]),
                edge(f[6], f[7], f[8]),
            )
        })
        .collect()
}

/// Tally of endpoint vertices over a square lattice patch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyResult {
    pub n_max: u64,
    /// Counts per vertex 0..=7 (vertex 0 stays 0: no geodesic loops).
    pub counts: BTreeMap<u8, u64>,
    /// Number of visible points surveyed.
    pub total: u64,
}

impl SurveyResult {
    pub fn frequency(&self, vertex: u8) -> Rational {
        Rational::new(Int::from(self.counts[&vertex]), Int::from(self.total))
    }
}

/// Survey every coprime (a,b) in [1,n_max]²: tumble orientation via the
/// O(log) descent, endpoint vertex via the simulation table. Rows are
/// partitioned statically into `workers` contiguous chunks whose tallies are
/// merged in order, so the result is identical for any worker count.
pub fn patch_survey(n_max: u64, workers: usize) -> SurveyResult {
    assert!(n_max >= 1, "survey needs at least one row");
    let workers = workers.clamp(1, n_max as usize);
    let chunk = n_max.div_ceil(workers as u64);
    let ranges: Vec<(u64, u64)> = (0..workers as u64)
        .map(|w| (1 + w * chunk, ((w + 1) * chunk).min(n_max)))
        .filter(|(lo, hi)| lo <= hi)
        .collect();

    let tallies: Vec<[u64; 8]> = std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .iter()
            .map(|&(lo, hi)| {
                scope.spawn(move || {
                    let mut counts = [0u64; 8];
                    for a in lo..=hi {
                        for b in 1..=n_max {
                            if num::integer::gcd(a, b) == 1 {
                                let v = endpoint_vertex(orientation_at_u64(a, b));
                                counts[v as usize] += 1;
                            }
                        }
                    }
                    counts
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("survey worker")).collect()
    });

    let mut counts: BTreeMap<u8, u64> = (0..=7).map(|v| (v, 0)).collect();
    let mut total = 0;
    for t in tallies {
        for (v, c) in t.iter().enumerate() {
            *counts.get_mut(&(v as u8)).unwrap() += c;
            total += c;
        }
    }
    SurveyResult { n_max, counts, total }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> CubeOrientation {
        s.parse().unwrap()
    }

    fn edge(p: &str, c: &str, s: Sign) -> EdgeLabel {
        EdgeLabel::new(o(p), o(c), s)
    }

    #[test]
    fn child_edges_of_known_rows() {
        let (m, p) = child_edges(&edge("0123", "0213", Sign::Minus));
        assert_eq!(m, edge("0213", "0123", Sign::Minus));
        assert_eq!(p, edge("0213", "3201", Sign::Plus));

        let (m, p) = child_edges(&edge("3201", "3120", Sign::Minus));
        assert_eq!(m, edge("3120", "3012", Sign::Minus));
        assert_eq!(p, edge("3120", "2301", Sign::Plus));

        let (m, p) = child_edges(&edge("1032", "3012", Sign::Plus));
        assert_eq!(m, edge("3012", "3201", Sign::Minus));
        assert_eq!(p, edge("3012", "1032", Sign::Plus));
    }

    #[test]
    fn golden_table_reproduced_exactly() {
        let rows = golden_child_rows();
        assert_eq!(rows.len(), 54);
        for (e, want_minus, want_plus) in rows {
            let (m, p) = child_edges(&e);
            assert_eq!(m, want_minus, "negative child of {e}");
            assert_eq!(p, want_plus, "positive child of {e}");
        }
    }

    #[test]
    fn left_multiplication_convention_fails_the_golden_table() {
        // Negative control: with the composition order flipped, the computed
        // children disagree with the golden table somewhere.
        let flipped = |a: CubeOrientation, b: CubeOrientation| b.compose(a);
        let mut mismatches = 0;
        for (e, want_minus, want_plus) in golden_child_rows() {
            let same = flipped(flipped(e.child, e.parent.inverse()), e.child);
            let ru = flipped(CubeOrientation::R, CubeOrientation::U);
            let ur = flipped(CubeOrientation::U, CubeOrientation::R);
            let (m, p) = match e.sign {
                Sign::Plus => (
                    EdgeLabel::new(e.child, flipped(flipped(e.child, ru), e.parent), Sign::Minus),
                    EdgeLabel::new(e.child, same, Sign::Plus),
                ),
                Sign::Minus => (
                    EdgeLabel::new(e.child, same, Sign::Minus),
                    EdgeLabel::new(e.child, flipped(flipped(e.child, ur), e.parent), Sign::Plus),
                ),
            };
            if m != want_minus || p != want_plus {
                mismatches += 1;
            }
        }
        assert!(mismatches > 0, "flipped convention must not reproduce the table");
    }

    #[test]
    fn saturation_sizes_and_membership() {
        let sat = saturate().unwrap();
        assert_eq!(sat.edges.len(), 54);
        assert_eq!(sat.orientations.len(), 9);
        let expected: Vec<CubeOrientation> =
            ["0123", "0213", "1032", "1230", "2301", "2310", "3012", "3120", "3201"]
                .iter()
                .map(|s| o(s))
                .collect();
        assert_eq!(sat.orientations, expected);
        assert_eq!(sat.deepest_new_label, 7);
    }

    #[test]
    fn no_label_involves_a_loop_orientation() {
        let sat = saturate().unwrap();
        for bad in ["1320", "2130", "3210"] {
            let bad = o(bad);
            assert!(!sat.orientations.contains(&bad));
            for e in &sat.edges {
                assert_ne!(e.child, bad);
                assert_ne!(e.parent, bad);
            }
        }
    }

    #[test]
    fn matrix_is_doubly_stochastic_exactly() {
        let m = transition_matrix().unwrap();
        let one = Rational::one();
        assert!(m.row_sums().iter().all(|s| *s == one));
        assert!(m.column_sums().iter().all(|s| *s == one));
        let report = m.stationary_analysis().unwrap();
        assert!(report.is_column_stochastic);
        assert!(report.second_eigenvalue_modulus < 1.0);
        assert!(report.second_eigenvalue_modulus > 0.0);
    }

    #[test]
    fn depth_one_lands_on_vertex_seven() {
        let m = transition_matrix().unwrap();
        let (freq, counts) = m.vertex_frequencies_at_depth(1);
        assert_eq!(counts[&7], Int::from(2));
        for v in 1..=6u8 {
            assert_eq!(counts[&v], Int::zero());
        }
        assert_eq!(freq[&7], Rational::one());
    }

    #[test]
    fn depth_counts_sum_to_powers_of_two() {
        let m = transition_matrix().unwrap();
        for k in 1..=12u64 {
            let (_, counts) = m.vertex_frequencies_at_depth(k);
            let total: Int = counts.values().sum();
            assert_eq!(total, Int::from(2u64).pow(k as u32), "depth {k}");
        }
    }

    #[test]
    fn limit_frequencies_match_the_proportions_table() {
        let m = transition_matrix().unwrap();
        let freq = m.limit_frequencies();
        let expect = |n: i64| Rational::new(Int::from(n), Int::from(54));
        assert_eq!(freq[&1], expect(8));
        assert_eq!(freq[&2], expect(8));
        assert_eq!(freq[&3], expect(6));
        assert_eq!(freq[&4], expect(8));
        assert_eq!(freq[&5], expect(6));
        assert_eq!(freq[&6], expect(6));
        assert_eq!(freq[&7], expect(12));
    }

    #[test]
    fn tiny_survey_by_hand() {
        let s = patch_survey(2, 1);
        assert_eq!(s.total, 3); // (1,1), (1,2), (2,1)
        assert_eq!(s.counts[&3], 1);
        assert_eq!(s.counts[&7], 2);
        assert_eq!(s.frequency(3), Rational::new(Int::one(), Int::from(3)));
        assert_eq!(s.frequency(7), Rational::new(Int::from(2), Int::from(3)));
    }

    #[test]
    fn survey_is_worker_count_independent() {
        let a = patch_survey(37, 1);
        let b = patch_survey(37, 3);
        let c = patch_survey(37, 8);
        assert_eq!(a, b);
        assert_eq!(b, c);
    }

    #[test]
    fn rank_of_a_minus_identity_is_53() {
        let m = transition_matrix().unwrap();
        assert_eq!(m.rank_of_a_minus_identity(), 53);
    }
}
