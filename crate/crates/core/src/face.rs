//! Face-to-vertex machinery on the cube: the fan of lines through a target
//! lattice point decomposes the unit square into regions, each with one
//! tumble sequence.
//!
//! For a target q = (n,m), take the quadrilateral c(n,m) with corners (1,0),
//! (0,0), (0,1), (n,m) and the lattice set P(n,m) = c(n,m) ∩ ℤ² minus the two
//! endpoints. Each point of P spans a line with q; sorting the lines by slope
//! gives ℓ₀ (through (0,1)) up to ℓ_{t+1} (through (1,0)), cutting the open
//! unit square into regions z₀ … z_t. The word for z₀ comes from a closed
//! position formula; crossing ℓ_i swaps one ur to ru per lattice point on the
//! line, at the positions determined by that point.

use crate::rational::{Int, LatticePoint, Rational, RationalPoint};
use crate::tumble::{Letter, TumbleSequence};
use num::{Integer, One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FaceError {
    #[error("target coordinates must be ≥ 1, got ({0},{1})")]
    NonPositive(i64, i64),
    #[error("point lies on boundary line ℓ_{0}: the segment to the target passes through a lattice point")]
    OnBoundaryLine(usize),
    #[error("point must lie strictly inside the unit square, got ({0},{1})")]
    OutsideSquare(Rational, Rational),
}

/// One line of the fan: the lattice points of P(n,m) it carries (ascending
/// x+y) and its primitive direction toward the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetLine {
    pub points: Vec<LatticePoint>,
    pub direction: (Int, Int),
}

/// The full fan decomposition for one target.
#[derive(Clone, Debug)]
pub struct RegionDecomposition {
    pub target: LatticePoint,
    /// ℓ₀ … ℓ_{t+1}, slopes ascending.
    pub lines: Vec<TargetLine>,
    /// τ₀ … τ_t, one word per region.
    pub taus: Vec<TumbleSequence>,
}

/// The word for the region next to (0,1): length n+m−2 with u's exactly in
/// positions n+m−j−⌈nj/(m−1)⌉ for j = 1..m−1 (all r's when m = 1).
pub fn tau_zero(n: i64, m: i64) -> Result<TumbleSequence, FaceError> {
    if n < 1 || m < 1 {
        return Err(FaceError::NonPositive(n, m));
    }
    let len = (n + m - 2) as usize;
    if m == 1 {
        return Ok(TumbleSequence::new(vec![Letter::R; len]));
    }
    let mut word = vec![Letter::R; len];
    for j in 1..m {
        let ceil = Integer::div_ceil(&(n * j), &(m - 1));
        let pos = n + m - j - ceil;
        debug_assert!(pos >= 1 && pos <= len as i64, "u position {pos} out of range");
        word[(pos - 1) as usize] = Letter::U;
    }
    Ok(TumbleSequence::new(word))
}

/// Lattice points of the quadrilateral c(n,m) minus {(0,0),(n,m)}.
pub fn lattice_set(n: i64, m: i64) -> Result<Vec<LatticePoint>, FaceError> {
    if n < 1 || m < 1 {
        return Err(FaceError::NonPositive(n, m));
    }
    // c(n,m) is convex with CCW corners (0,0),(1,0),(n,m),(0,1).
    let corners = [(0i64, 0i64), (1, 0), (n, m), (0, 1)];
    let inside = |x: i64, y: i64| {
        corners.iter().zip(corners.iter().cycle().skip(1)).all(|(&(ax, ay), &(bx, by))| {
            (bx - ax) * (y - ay) - (by - ay) * (x - ax) >= 0
        })
    };
    let mut out = Vec::new();
    for x in 0..=n {
        for y in 0..=m {
            if (x, y) != (0, 0) && (x, y) != (n, m) && inside(x, y) {
                out.push(LatticePoint::new(x, y));
            }
        }
    }
    Ok(out)
}

fn primitive_direction(n: i64, m: i64, p: &LatticePoint) -> (Int, Int) {
    use num::Integer;
    let dx = Int::from(n) - &p.a;
    let dy = Int::from(m) - &p.b;
    let g = dx.gcd(&dy);
    (dx / &g, dy / &g)
}

/// Slope order for directions with dx ≥ 0, dy ≥ 0, not both zero; dx = 0
/// counts as +∞.
fn slope_cmp(a: &(Int, Int), b: &(Int, Int)) -> std::cmp::Ordering {
    // dy_a/dx_a vs dy_b/dx_b  ⇔  dy_a·dx_b vs dy_b·dx_a.
    (&a.1 * &b.0).cmp(&(&b.1 * &a.0))
}

/// Lines of the fan, slopes ascending, each line's points by ascending x+y.
pub fn fan_lines(n: i64, m: i64) -> Result<Vec<TargetLine>, FaceError> {
    let points = lattice_set(n, m)?;
    let mut groups: Vec<TargetLine> = Vec::new();
    for p in points {
        let dir = primitive_direction(n, m, &p);
        match groups.iter_mut().find(|g| g.direction == dir) {
            Some(g) => g.points.push(p),
            None => groups.push(TargetLine { points: vec![p], direction: dir }),
        }
    }
    groups.sort_by(|a, b| slope_cmp(&a.direction, &b.direction));
    for g in &mut groups {
        g.points.sort_by_key(|p| (&p.a + &p.b, p.a.clone()));
    }
    debug_assert!(groups.first().is_some_and(|g| g.points.contains(&LatticePoint::new(0, 1))));
    debug_assert!(groups.last().is_some_and(|g| g.points.contains(&LatticePoint::new(1, 0))));
    Ok(groups)
}

/// Build the full decomposition: the fan plus τ₀ … τ_t, where τ_i is τ_{i−1}
/// with the ur at positions (x+y−1, x+y) replaced by ru for each lattice
/// point (x,y) on ℓ_i.
pub fn decompose(n: i64, m: i64) -> Result<RegionDecomposition, FaceError> {
    let lines = fan_lines(n, m)?;
    let mut taus = Vec::with_capacity(lines.len() - 1);
    let mut current = tau_zero(n, m)?;
    taus.push(current.clone());
    for line in &lines[1..lines.len() - 1] {
        let mut letters: Vec<Letter> = current.letters().to_vec();
        for p in &line.points {
            let sum = usize::try_from(&(&p.a + &p.b)).expect("position fits");
            assert!(
                sum >= 2 && sum <= letters.len() && letters[sum - 2] == Letter::U
                    && letters[sum - 1] == Letter::R,
                "expected ur at positions {}..{} of {current} for point {p}",
                sum - 1,
                sum
            );
            letters[sum - 2] = Letter::R;
            letters[sum - 1] = Letter::U;
        }
        current = TumbleSequence::new(letters);
        taus.push(current.clone());
    }
    Ok(RegionDecomposition { target: LatticePoint::new(n, m), lines, taus })
}

impl RegionDecomposition {
    pub fn region_count(&self) -> usize {
        self.taus.len()
    }

    /// Index of the open region containing p, by exact sign tests against
    /// each line. A zero sign means p is on a boundary line, i.e. the
    /// segment p→target passes through a lattice point.
    pub fn region_of(&self, p: &RationalPoint) -> Result<usize, FaceError> {
        if !(p.x.is_positive() && p.y.is_positive() && p.x < Rational::one() && p.y < Rational::one())
        {
            return Err(FaceError::OutsideSquare(p.x.clone(), p.y.clone()));
        }
        let mut below = 0usize;
        for (i, line) in self.lines.iter().enumerate() {
            let w = &line.points[0];
            // cross((target − w), (p − w)): positive above the line, negative below.
            let dqx = Rational::from_integer(&self.target.a - &w.a);
            let dqy = Rational::from_integer(&self.target.b - &w.b);
            let px = &p.x - Rational::from_integer(w.a.clone());
            let py = &p.y - Rational::from_integer(w.b.clone());
            let cross = dqx * py - dqy * px;
            if cross.is_zero() {
                return Err(FaceError::OnBoundaryLine(i));
            }
            if cross.is_negative() {
                below += 1;
            }
        }
        debug_assert!(below >= 1 && below < self.lines.len(), "fan does not cover the square");
        Ok(below - 1)
    }

    /// τ for the region containing p.
    pub fn tau_for(&self, p: &RationalPoint) -> Result<&TumbleSequence, FaceError> {
        Ok(&self.taus[self.region_of(p)?])
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "target": [self.target.a.to_string(), self.target.b.to_string()],
            "lines": self
                .lines
                .iter()
                .map(|l| serde_json::json!({
                    "points": l
                        .points
                        .iter()
                        .map(|p| vec![p.a.to_string(), p.b.to_string()])
                        .collect::<Vec<_>>(),
                    "direction": [l.direction.0.to_string(), l.direction.1.to_string()],
                }))
                .collect::<Vec<_>>(),
            "regions": self
                .taus
                .iter()
                .enumerate()
                .map(|(i, t)| serde_json::json!({"index": i, "tau": t.to_string()}))
                .collect::<Vec<_>>(),
        })
    }

    /// SVG picture: the grid up to the target, the fan lines, the lattice
    /// points of P, and the unit square shaded by region.
    pub fn to_svg(&self) -> String {
        use num::ToPrimitive;
        let n = self.target.a.to_f64().unwrap();
        let m = self.target.b.to_f64().unwrap();
        let scale = 90.0;
        let pad = 40.0;
        let width = n * scale + 2.0 * pad;
        let height = m * scale + 2.0 * pad;
        let tx = |x: f64| pad + x * scale;
        let ty = |y: f64| height - pad - y * scale;
        let mut svg = String::new();
        svg.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">\n"
        ));
        // Grid.
        for x in 0..=(n as i64) {
            svg.push_str(&format!(
                "  <line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#ccc\"/>\n",
                tx(x as f64), ty(0.0), tx(x as f64), ty(m)
            ));
        }
        for y in 0..=(m as i64) {
            svg.push_str(&format!(
                "  <line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#ccc\"/>\n",
                tx(0.0), ty(y as f64), tx(n), ty(y as f64)
            ));
        }
        // Shaded regions (clipped to the unit square).
        let fills = ["#9be09b", "#9bb7e0", "#e09b9b", "#e0d49b", "#c39be0", "#9be0d6"];
        for i in 0..self.region_count() {
            let poly = self.region_polygon(i);
            if poly.len() >= 3 {
                let pts: Vec<String> = poly
                    .iter()
                    .map(|(x, y)| {
                        format!("{:.2},{:.2}", tx(x.to_f64().unwrap()), ty(y.to_f64().unwrap()))
                    })
                    .collect();
                svg.push_str(&format!(
                    "  <polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.5\"/>\n",
                    pts.join(" "),
                    fills[i % fills.len()]
                ));
            }
        }
        // Fan lines from the target through the square.
        for (i, line) in self.lines.iter().enumerate() {
            let w = &line.points[0];
            let (wx, wy) = (w.a.to_f64().unwrap(), w.b.to_f64().unwrap());
            let (dx, dy) = (wx - n, wy - m);
            // Extend from the target until leaving the plot area.
            let mut t_exit = f64::INFINITY;
            if dx < 0.0 {
                t_exit = t_exit.min((0.0 - n) / dx);
            }
            if dy < 0.0 {
                t_exit = t_exit.min((0.0 - m) / dy);
            }
            let (ex, ey) = (n + t_exit * dx, m + t_exit * dy);
            svg.push_str(&format!(
                "  <line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#333\"/>\n  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"13\">l{}</text>\n",
                tx(n), ty(m), tx(ex), ty(ey), tx((n + ex) / 2.0) + 3.0, ty((m + ey) / 2.0) - 3.0, i
            ));
        }
        // Lattice points of P and the target.
        for line in &self.lines {
            for p in &line.points {
                svg.push_str(&format!(
                    "  <circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"3\" fill=\"#000\"/>\n",
                    tx(p.a.to_f64().unwrap()),
                    ty(p.b.to_f64().unwrap())
                ));
            }
        }
        svg.push_str(&format!(
            "  <circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"4\" fill=\"#c22\"/>\n",
            tx(n),
            ty(m)
        ));
        svg.push_str("</svg>\n");
        svg
    }

    /// Vertices of region z_i: the unit square clipped by the two bounding
    /// half-planes, computed exactly and in order.
    fn region_polygon(&self, i: usize) -> Vec<(Rational, Rational)> {
        let square = vec![
            (Rational::zero(), Rational::zero()),
            (Rational::one(), Rational::zero()),
            (Rational::one(), Rational::one()),
            (Rational::zero(), Rational::one()),
        ];
        let signed = |line: &TargetLine, x: &Rational, y: &Rational| {
            let w = &line.points[0];
            let dqx = Rational::from_integer(&self.target.a - &w.a);
            let dqy = Rational::from_integer(&self.target.b - &w.b);
            dqx * (y - Rational::from_integer(w.b.clone()))
                - dqy * (x - Rational::from_integer(w.a.clone()))
        };
        // Below ℓ_i (sign ≤ 0) and above ℓ_{i+1} (sign ≥ 0).
        let upper = &self.lines[i];
        let lower = &self.lines[i + 1];
        let mut poly = clip(&square, |x, y| -signed(upper, x, y));
        poly = clip(&poly, |x, y| signed(lower, x, y));
        poly
    }
}

/// Sutherland–Hodgman clip of a convex polygon by the half-plane f ≥ 0,
/// with exact crossing points: the functional is affine along each edge, so
/// the zero sits at t = f₁/(f₁ − f₂).
fn clip(
    poly: &[(Rational, Rational)],
    f: impl Fn(&Rational, &Rational) -> Rational,
) -> Vec<(Rational, Rational)> {
    let mut out = Vec::new();
    for (idx, p1) in poly.iter().enumerate() {
        let p2 = &poly[(idx + 1) % poly.len()];
        let f1 = f(&p1.0, &p1.1);
        let f2 = f(&p2.0, &p2.1);
        if !f1.is_negative() {
            out.push(p1.clone());
        }
        if (f1.is_negative() && f2.is_positive()) || (f1.is_positive() && f2.is_negative()) {
            let t = &f1 / (&f1 - &f2);
            out.push((
                &p1.0 + &t * (&p2.0 - &p1.0),
                &p1.1 + &t * (&p2.1 - &p1.1),
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tumble::tumble_sequence_of_segment;

    fn word(s: &str) -> TumbleSequence {
        s.parse().unwrap()
    }

    fn rp(nx: i64, dx: i64, ny: i64, dy: i64) -> RationalPoint {
        RationalPoint::new(
            Rational::new(Int::from(nx), Int::from(dx)),
            Rational::new(Int::from(ny), Int::from(dy)),
        )
    }

    #[test]
    fn tau_zero_examples() {
        assert_eq!(tau_zero(5, 3).unwrap(), word("urrurr"));
        assert_eq!(tau_zero(4, 1).unwrap(), word("rrr"));
        assert_eq!(tau_zero(2, 2).unwrap(), word("ur"));
        assert_eq!(tau_zero(1, 1).unwrap(), TumbleSequence::empty());
        assert!(tau_zero(0, 3).is_err());
    }

    #[test]
    fn lattice_set_of_5_3() {
        let p = lattice_set(5, 3).unwrap();
        let expect: Vec<LatticePoint> = [(0, 1), (1, 0), (1, 1), (2, 1), (3, 2)]
            .iter()
            .map(|&(x, y)| LatticePoint::new(x, y))
            .collect();
        let mut got = p.clone();
        got.sort();
        assert_eq!(got, expect);
    }

    #[test]
    fn fan_of_5_3_groups_collinear_points() {
        let lines = fan_lines(5, 3).unwrap();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0].points, vec![LatticePoint::new(0, 1)]);
        assert_eq!(lines[1].points, vec![LatticePoint::new(1, 1), LatticePoint::new(3, 2)]);
        assert_eq!(lines[2].points, vec![LatticePoint::new(2, 1)]);
        assert_eq!(lines[3].points, vec![LatticePoint::new(1, 0)]);
    }

    #[test]
    fn decomposition_of_5_3() {
        let d = decompose(5, 3).unwrap();
        assert_eq!(d.region_count(), 3);
        assert_eq!(d.taus[0], word("urrurr"));
        assert_eq!(d.taus[1], word("rurrur"));
        assert_eq!(d.taus[2], word("rrurur"));
    }

    #[test]
    fn degenerate_target_1_1() {
        let d = decompose(1, 1).unwrap();
        assert_eq!(d.region_count(), 1);
        assert_eq!(d.taus[0], TumbleSequence::empty());
        assert_eq!(d.region_of(&rp(1, 3, 2, 3)).unwrap(), 0);
    }

    #[test]
    fn regions_of_5_3() {
        let d = decompose(5, 3).unwrap();
        assert_eq!(d.region_of(&rp(1, 10, 9, 10)).unwrap(), 0);
        assert_eq!(d.region_of(&rp(1, 2, 1, 2)).unwrap(), 1);
        assert_eq!(d.region_of(&rp(9, 10, 1, 10)).unwrap(), 2);
    }

    #[test]
    fn boundary_points_error_and_match_vertex_hits() {
        let d = decompose(5, 3).unwrap();
        // (1/2, 3/4) is on ℓ₁ (through (1,1) and (5,3)): (5−1)(y−1) = (3−1)(x−1).
        let p = rp(1, 2, 3, 4);
        assert_eq!(d.region_of(&p), Err(FaceError::OnBoundaryLine(1)));
        assert!(matches!(
            tumble_sequence_of_segment(&p, &LatticePoint::new(5, 3)),
            Err(crate::tumble::SegmentError::VertexHit(_))
        ));
        let outside = rp(3, 2, 1, 2);
        assert!(matches!(d.region_of(&outside), Err(FaceError::OutsideSquare(..))));
    }

    #[test]
    fn swaps_preserve_letter_counts() {
        for n in 1..=9i64 {
            for m in 1..=9i64 {
                let d = decompose(n, m).unwrap();
                for tau in &d.taus {
                    assert_eq!(tau.r_count() as i64, n - 1, "({n},{m})");
                    assert_eq!(tau.u_count() as i64, m - 1, "({n},{m})");
                }
            }
        }
    }

    #[test]
    fn consecutive_taus_differ_by_the_stated_swaps() {
        for (n, m) in [(5i64, 3i64), (3, 5), (7, 4), (4, 7), (6, 5)] {
            let d = decompose(n, m).unwrap();
            for i in 1..d.region_count() {
                let prev = d.taus[i - 1].letters();
                let next = d.taus[i].letters();
                let mut expected_positions: Vec<usize> = d.lines[i]
                    .points
                    .iter()
                    .map(|p| usize::try_from(&(&p.a + &p.b)).unwrap())
                    .collect();
                expected_positions.sort_unstable();
                let mut diffs: Vec<usize> = (0..prev.len()).filter(|&j| prev[j] != next[j]).collect();
                diffs.sort_unstable();
                // Each swap toggles positions sum−1 and sum (1-based).
                let mut expected_diffs = Vec::new();
                for s in &expected_positions {
                    expected_diffs.push(s - 2);
                    expected_diffs.push(s - 1);
                }
                assert_eq!(diffs, expected_diffs, "({n},{m}) line {i}");
            }
        }
    }

    #[test]
    fn region_words_match_the_segment_oracle() {
        // Dense rational sample of the open square.
        for (n, m) in [(5i64, 3i64), (3, 5), (2, 2), (4, 3), (1, 4), (6, 1)] {
            let d = decompose(n, m).unwrap();
            let den = 17i64;
            for ix in 1..den {
                for iy in 1..den {
                    let p = rp(ix, den, iy, den);
                    match d.region_of(&p) {
                        Ok(region) => {
                            let via_segment =
                                tumble_sequence_of_segment(&p, &d.target).unwrap();
                            assert_eq!(via_segment, d.taus[region], "({n},{m}) at {p}");
                        }
                        Err(FaceError::OnBoundaryLine(_)) => {
                            assert!(tumble_sequence_of_segment(&p, &d.target).is_err());
                        }
                        Err(e) => panic!("unexpected error {e:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn json_export_shape() {
        let d = decompose(5, 3).unwrap();
        let j = d.to_json();
        assert_eq!(j["regions"].as_array().unwrap().len(), 3);
        assert_eq!(j["regions"][0]["tau"], "urrurr");
        assert_eq!(j["lines"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn svg_contains_fan_lines_and_points() {
        let d = decompose(5, 3).unwrap();
        let svg = d.to_svg();
        assert!(svg.contains("<svg"));
        assert!(svg.contains(">l1<"));
        assert!(svg.contains("polygon"));
    }
}
