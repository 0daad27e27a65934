//! Exact rational arithmetic, the denominator function ⟨x⟩, and lattice-point
//! visibility for the square and triangular lattices.
//!
//! The triangular lattice is handled in u,v coordinates, where visibility is
//! the same affine question as in the square lattice, so one set of
//! primitives serves both solids.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision integer used for all lattice coordinates.
pub type Int = BigInt;

/// Exact rational, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// A coordinate that is either an exact rational or the distinguished
/// irrational marker. Nothing in this crate constructs the marker from data;
/// it exists so the denominator contract ⟨x⟩ = 0 for x ∉ ℚ is expressible.
#[derive(Clone, Debug, PartialEq)]
pub enum Coord {
    Rational(Rational),
    Irrational,
}

/// The denominator function: ⟨c/d⟩ = 1/d for gcd(c,d) = 1, and ⟨x⟩ = 0 for
/// the irrational marker.
pub fn denom(x: &Coord) -> Rational {
    match x {
        Coord::Rational(r) => denom_of(r),
        Coord::Irrational => Rational::zero(),
    }
}

/// ⟨x⟩ for an exact rational: the reciprocal of the lowest-terms denominator.
pub fn denom_of(x: &Rational) -> Rational {
    Rational::new(Int::one(), x.denom().clone())
}

/// A lattice point. Interpreted in the square-lattice basis for the cube and
/// in the triangular basis u,v for the tetrahedron; the arithmetic is the
/// same either way.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub a: Int,
    pub b: Int,
}

impl LatticePoint {
    pub fn new(a: impl Into<Int>, b: impl Into<Int>) -> Self {
        Self { a: a.into(), b: b.into() }
    }

    pub fn origin() -> Self {
        Self::new(0, 0)
    }

    pub fn is_origin(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// The skew form ⟨self, other⟩ = a·b′ − b·a′ (signed parallelogram area).
    pub fn det(&self, other: &Self) -> Int {
        &self.a * &other.b - &self.b * &other.a
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.a + &other.a, &self.b + &other.b)
    }

    pub fn scaled_add(&self, k: &Int, other: &Self) -> Self {
        Self::new(&self.a + k * &other.a, &self.b + k * &other.b)
    }
}

impl std::fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// A point with exact rational coordinates, usually the start point of a
/// geodesic inside the unit cell [0,1)².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoint {
    pub x: Rational,
    pub y: Rational,
}

impl RationalPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }

    pub fn from_ints(x: impl Into<Int>, y: impl Into<Int>) -> Self {
        Self { x: Rational::from_integer(x.into()), y: Rational::from_integer(y.into()) }
    }

    /// Both coordinates integral.
    pub fn is_lattice(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    pub fn in_unit_cell(&self) -> bool {
        !self.x.is_negative()
            && !self.y.is_negative()
            && self.x < Rational::one()
            && self.y < Rational::one()
    }
}

impl std::fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VisibilityError {
    #[error("visibility query requires q distinct from p")]
    SamePoint,
    #[error("the origin is not visible from itself")]
    OriginQuery,
}

/// True iff the open segment from `p` to `q` contains no lattice point.
///
/// Dispatches to a gcd test when `p` is itself a lattice point and to the
/// denominator criterion ⟨(b−y)/(a−x)⟩ ≤ 1/a when `p` lies in the unit cell
/// strip 0 ≤ x < 1 with a ≥ 1; otherwise scans candidate columns. All three
/// routes are equivalent (see the module tests).
pub fn visible_from(p: &RationalPoint, q: &LatticePoint) -> Result<bool, VisibilityError> {
    if p.is_lattice() && Rational::from_integer(q.a.clone()) == p.x
        && Rational::from_integer(q.b.clone()) == p.y
    {
        return Err(VisibilityError::SamePoint);
    }
    if p.is_lattice() {
        let da = (q.a.clone() - p.x.to_integer()).abs();
        let db = (q.b.clone() - p.y.to_integer()).abs();
        return Ok(da.gcd(&db).is_one());
    }
    let a_rat = Rational::from_integer(q.a.clone());
    if !p.x.is_negative() && p.x < Rational::one() && a_rat > p.x && q.a.is_positive() {
        // Visibility lemma: q = (a,b) with a > x is visible from p = (x,y),
        // 0 ≤ x < 1, iff the reduced denominator of (b−y)/(a−x) is ≥ a.
        let slope = (Rational::from_integer(q.b.clone()) - &p.y) / (a_rat - &p.x);
        return Ok(slope.denom() >= &q.a);
    }
    Ok(blocking_point(p, q)?.is_none())
}

/// The lattice point blocking `q` from `p`, if any: the first lattice point
/// strictly inside the segment p→q (hence itself visible from `p`).
pub fn blocking_point(
    p: &RationalPoint,
    q: &LatticePoint,
) -> Result<Option<LatticePoint>, VisibilityError> {
    let qx = Rational::from_integer(q.a.clone());
    let qy = Rational::from_integer(q.b.clone());
    if p.x == qx && p.y == qy {
        return Err(VisibilityError::SamePoint);
    }
    let dx = &qx - &p.x;
    let dy = &qy - &p.y;

    if dx.is_zero() {
        // Vertical segment: blockers are integer heights strictly between.
        if !p.x.is_integer() {
            return Ok(None);
        }
        let x = p.x.to_integer();
        let (lo, hi) = if p.y < qy { (&p.y, &qy) } else { (&qy, &p.y) };
        let first = lo.floor().to_integer() + Int::one();
        let first_rat = Rational::from_integer(first.clone());
        if &first_rat > lo && first_rat < *hi {
            // Nearest to p depends on direction.
            let blocker_y = if p.y < qy { first } else { hi.ceil().to_integer() - 1 };
            return Ok(Some(LatticePoint::new(x, blocker_y)));
        }
        return Ok(None);
    }

    // A blocker has an integer x-coordinate strictly between p.x and q.a.
    // March from the p side so the first hit is the nearest blocker.
    let toward_right = dx.is_positive();
    let mut k = if toward_right {
        p.x.floor().to_integer() + Int::one()
    } else {
        p.x.ceil().to_integer() - Int::one()
    };
    let step: Int = if toward_right { Int::one() } else { -Int::one() };
    loop {
        let k_rat = Rational::from_integer(k.clone());
        let past_end = if toward_right { k_rat >= qx } else { k_rat <= qx };
        if past_end {
            return Ok(None);
        }
        // Skip k == p.x exactly (possible when p.x is an integer).
        if k_rat != p.x {
            let y = &p.y + (&k_rat - &p.x) * &dy / &dx;
            if y.is_integer() {
                return Ok(Some(LatticePoint::new(k, y.to_integer())));
            }
        }
        k += &step;
    }
}

/// Visibility from the origin: gcd(|a|,|b|) = 1.
pub fn visible_from_origin(q: &LatticePoint) -> Result<bool, VisibilityError> {
    if q.is_origin() {
        return Err(VisibilityError::OriginQuery);
    }
    Ok(q.a.abs().gcd(&q.b.abs()).is_one())
}

/// Parse an exact rational from "n", "n/d", or a decimal like "0.25".
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Ok(r) = s.parse::<Rational>() {
        return Some(r);
    }
    // Decimal form: digits '.' digits
    let (int_part, frac_part) = s.split_once('.')?;
    let neg = int_part.starts_with('-');
    let int_val: Int = if int_part.is_empty() || int_part == "-" {
        Int::zero()
    } else {
        int_part.parse().ok()?
    };
    if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let num: Int = frac_part.parse().ok()?;
    let den = num::pow::pow(Int::from(10), frac_part.len());
    let frac = Rational::new(num, den);
    let whole = Rational::from_integer(int_val.abs());
    let total = whole + frac;
    Some(if neg { -total } else { total })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(Int::from(n), Int::from(d))
    }

    #[test]
    fn denominator_function() {
        assert_eq!(denom(&Coord::Rational(rat(2, 4))), rat(1, 2));
        assert_eq!(denom(&Coord::Rational(rat(5, 1))), rat(1, 1));
        assert_eq!(denom(&Coord::Irrational), Rational::zero());
        assert_eq!(denom_of(&rat(-3, 9)), rat(1, 3));
    }

    #[test]
    fn rationals_stay_in_lowest_terms() {
        let x = rat(6, 4) + rat(1, 4); // 7/4
        assert_eq!(x.numer(), &Int::from(7));
        assert_eq!(x.denom(), &Int::from(4));
        let y = rat(1, 6) + rat(1, 3); // 1/2
        assert_eq!(y.denom(), &Int::from(2));
        assert!(y.denom().is_positive());
    }

    #[test]
    fn origin_visibility_is_gcd() {
        assert!(visible_from_origin(&LatticePoint::new(5, 3)).unwrap());
        assert!(!visible_from_origin(&LatticePoint::new(2, 2)).unwrap());
        assert!(visible_from_origin(&LatticePoint::new(1, 0)).unwrap());
        assert_eq!(
            visible_from_origin(&LatticePoint::origin()),
            Err(VisibilityError::OriginQuery)
        );
    }

    #[test]
    fn segment_visibility_from_lattice_and_rational_points() {
        let origin = RationalPoint::from_ints(0, 0);
        assert!(visible_from(&origin, &LatticePoint::new(3, 2)).unwrap());
        assert!(!visible_from(&origin, &LatticePoint::new(4, 2)).unwrap());
        // (1/2, 0) sees (2,1): slope 2/3, denominator 1/3 ≤ 1/2.
        let p = RationalPoint::new(rat(1, 2), rat(0, 1));
        assert!(visible_from(&p, &LatticePoint::new(2, 1)).unwrap());
        assert_eq!(
            visible_from(&origin, &LatticePoint::origin()),
            Err(VisibilityError::SamePoint)
        );
    }

    #[test]
    fn blocker_is_named_and_visible() {
        let origin = RationalPoint::from_ints(0, 0);
        let b = blocking_point(&origin, &LatticePoint::new(4, 2)).unwrap();
        assert_eq!(b, Some(LatticePoint::new(2, 1)));
        let b = blocking_point(&origin, &LatticePoint::new(6, 3)).unwrap().unwrap();
        assert_eq!(b, LatticePoint::new(2, 1)); // nearest of (2,1), (4,2)
        assert!(visible_from(&origin, &b).unwrap());
        // Negative direction also works.
        let b = blocking_point(&origin, &LatticePoint::new(-4, -2)).unwrap();
        assert_eq!(b, Some(LatticePoint::new(-2, -1)));
    }

    #[test]
    fn vertical_segments_use_integer_between_test() {
        let p = RationalPoint::new(rat(1, 1), rat(1, 2));
        assert!(visible_from(&p, &LatticePoint::new(1, 1)).unwrap());
        assert!(!visible_from(&p, &LatticePoint::new(1, 2)).unwrap());
        assert_eq!(
            blocking_point(&p, &LatticePoint::new(1, 3)).unwrap(),
            Some(LatticePoint::new(1, 1))
        );
        // Downward vertical.
        let q = RationalPoint::new(rat(1, 1), rat(5, 2));
        assert_eq!(
            blocking_point(&q, &LatticePoint::new(1, 0)).unwrap(),
            Some(LatticePoint::new(1, 2))
        );
        // Non-integer x: nothing on the segment.
        let r = RationalPoint::new(rat(1, 2), rat(1, 2));
        assert!(visible_from(&r, &LatticePoint::new(0, 2)).unwrap());
    }

    /// Independent oracle: scan every lattice point in the bounding box for
    /// strict membership in the open segment.
    fn brute_force_visible(p: &RationalPoint, q: &LatticePoint) -> bool {
        let qx = Rational::from_integer(q.a.clone());
        let qy = Rational::from_integer(q.b.clone());
        let (xlo, xhi) = if p.x < qx { (p.x.clone(), qx.clone()) } else { (qx.clone(), p.x.clone()) };
        let (ylo, yhi) = if p.y < qy { (p.y.clone(), qy.clone()) } else { (qy.clone(), p.y.clone()) };
        let mut a = xlo.floor().to_integer();
        while Rational::from_integer(a.clone()) <= xhi {
            let mut b = ylo.floor().to_integer();
            while Rational::from_integer(b.clone()) <= yhi {
                let w = RationalPoint::from_ints(a.clone(), b.clone());
                let on_open_segment = {
                    let d1x = &w.x - &p.x;
                    let d1y = &w.y - &p.y;
                    let d2x = &qx - &p.x;
                    let d2y = &qy - &p.y;
                    let cross = &d1x * &d2y - &d1y * &d2x;
                    if !cross.is_zero() || (w.x == p.x && w.y == p.y) || (w.x == qx && w.y == qy) {
                        false
                    } else {
                        // Collinear: strictly between by dot-product bounds.
                        let t_num = &d1x * &d2x + &d1y * &d2y;
                        let len = &d2x * &d2x + &d2y * &d2y;
                        t_num.is_positive() && t_num < len
                    }
                };
                if on_open_segment {
                    return false;
                }
                b += 1;
            }
            a += 1;
        }
        true
    }

    #[test]
    fn visibility_gcd_agreement_to_50() {
        let origin = RationalPoint::from_ints(0, 0);
        for a in 1i64..=50 {
            for b in 1i64..=50 {
                let q = LatticePoint::new(a, b);
                let gcd_ok = Int::from(a).gcd(&Int::from(b)).is_one();
                assert_eq!(visible_from(&origin, &q).unwrap(), gcd_ok, "({a},{b})");
            }
        }
    }

    #[test]
    fn brute_force_oracle_agreement_small_denominators() {
        // All rational p in [0,1)² with denominators ≤ 4, all 1 ≤ a,b ≤ 20.
        let mut starts = Vec::new();
        for d in 1i64..=4 {
            for nx in 0..d {
                for ny in 0..d {
                    starts.push(RationalPoint::new(rat(nx, d), rat(ny, d)));
                }
            }
        }
        starts.sort_by(|p, q| (&p.x, &p.y).cmp(&(&q.x, &q.y)));
        starts.dedup();
        for p in &starts {
            for a in 1i64..=20 {
                for b in 1i64..=20 {
                    let q = LatticePoint::new(a, b);
                    if p.is_lattice() && p.x.to_integer() == q.a && p.y.to_integer() == q.b {
                        continue;
                    }
                    let expected = brute_force_visible(p, &q);
                    assert_eq!(visible_from(p, &q).unwrap(), expected, "p={p} q={q}");
                    let blocked = blocking_point(p, &q).unwrap();
                    assert_eq!(blocked.is_none(), expected, "p={p} q={q}");
                    if let Some(w) = blocked {
                        assert!(visible_from(p, &w).unwrap(), "blocker not visible p={p} w={w}");
                    }
                }
            }
        }
    }

    #[test]
    fn parses_rationals_and_decimals() {
        assert_eq!(parse_rational("1/2"), Some(rat(1, 2)));
        assert_eq!(parse_rational("7"), Some(rat(7, 1)));
        assert_eq!(parse_rational("0.25"), Some(rat(1, 4)));
        assert_eq!(parse_rational("-0.5"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("abc"), None);
    }
}
