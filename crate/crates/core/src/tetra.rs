//! Geodesics from a point to a vertex on the unit regular tetrahedron.
//!
//! Unfolding the tetrahedron tiles the plane with the triangular lattice
//! Λ = ℤu + ℤv, u = (1/2, √3/2), v = (1/2, −√3/2). Writing lattice points in
//! the u,v basis, the vertex touching a·u + b·v is χ(a,b) = (a mod 2, b mod 2),
//! and a geodesic from p = x·u + y·v to that vertex is exactly a visible
//! lattice point with matching parity. The canonical enumeration sector is
//! a > x, b ≥ y (starting angles in (−π/3, π/3]); the other five sectors are
//! served by rotating and relabeling.

use crate::rational::{self, Int, LatticePoint, Rational, RationalPoint};
use num::Integer;
use thiserror::Error;

/// A tetrahedron vertex name: an element of (ℤ/2)².
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TetraVertexLabel {
    pub first: u8,
    pub second: u8,
}

impl TetraVertexLabel {
    pub fn new(first: u8, second: u8) -> Self {
        Self { first: first & 1, second: second & 1 }
    }

    /// Componentwise addition in (ℤ/2)².
    pub fn xor(self, other: Self) -> Self {
        Self::new(self.first ^ other.first, self.second ^ other.second)
    }

    pub fn all() -> [Self; 4] {
        [Self::new(0, 0), Self::new(0, 1), Self::new(1, 0), Self::new(1, 1)]
    }
}

impl std::fmt::Display for TetraVertexLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.first, self.second)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TetraError {
    #[error("start point must lie in the unit cell [0,1)², got ({0},{1})")]
    StartOutsideCell(Rational, Rational),
    #[error("label components must be 0 or 1, got {0:?}")]
    BadLabel(String),
}

/// The labeling map χ: Λ → (ℤ/2)², q = a·u + b·v ↦ (a mod 2, b mod 2).
pub fn chi(q: &LatticePoint) -> TetraVertexLabel {
    let two = Int::from(2);
    TetraVertexLabel::new(
        u8::try_from(&q.a.mod_floor(&two)).unwrap(),
        u8::try_from(&q.b.mod_floor(&two)).unwrap(),
    )
}

/// An exact starting angle: arctan(√3 · coeff), stored by its rational
/// coefficient. For a geodesic to (a,b) from (x,y) the coefficient is
/// (a−b−x+y)/(a+b−x−y).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AngleTangent {
    pub coeff: Rational,
}

impl AngleTangent {
    pub fn new(coeff: Rational) -> Self {
        Self { coeff }
    }

    /// Display rendering in decimal degrees.
    pub fn degrees(&self) -> f64 {
        use num::ToPrimitive;
        let t = 3f64.sqrt() * self.coeff.to_f64().unwrap();
        t.atan().to_degrees()
    }

    pub fn numer(&self) -> &Int {
        self.coeff.numer()
    }

    pub fn denom(&self) -> &Int {
        self.coeff.denom()
    }
}

impl std::fmt::Display for AngleTangent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "sqrt(3)*({})", self.coeff)
    }
}

/// One geodesic direction: the visible endpoint, the displacement in the
/// u,v basis, and the exact starting-angle tangent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TetraGeodesic {
    pub target: LatticePoint,
    pub displacement: (Rational, Rational),
    pub tangent: AngleTangent,
}

fn geodesic_for(p: &RationalPoint, target: LatticePoint) -> TetraGeodesic {
    let da = Rational::from_integer(target.a.clone()) - &p.x;
    let db = Rational::from_integer(target.b.clone()) - &p.y;
    let num = &da - &db;
    let den = &da + &db;
    TetraGeodesic {
        target,
        displacement: (da, db),
        tangent: AngleTangent::new(num / den),
    }
}

/// All geodesics from p = x·u + y·v (x,y ∈ [0,1)) to the vertex `label`
/// within the canonical sector a > x, b ≥ y, bounded by a + b ≤ bound.
/// Output is ordered by (a+b, a).
pub fn geodesics_to_vertex(
    p: &RationalPoint,
    label: TetraVertexLabel,
    bound: u64,
) -> Result<Vec<TetraGeodesic>, TetraError> {
    if !p.in_unit_cell() {
        return Err(TetraError::StartOutsideCell(p.x.clone(), p.y.clone()));
    }
    let mut out = Vec::new();
    for s in 1..=bound {
        for a in 1..=s {
            let b = s - a;
            if (a % 2) as u8 != label.first || (b % 2) as u8 != label.second {
                continue;
            }
            let b_rat = Rational::from_integer(Int::from(b));
            if b_rat < p.y {
                continue;
            }
            let q = LatticePoint::new(a, b);
            if rational::visible_from(p, &q).expect("q differs from p in the sector") {
                out.push(geodesic_for(p, q));
            }
        }
    }
    Ok(out)
}

/// Starting-angle tangents of geodesics from vertex (0,0) to `label`:
/// √3(a−b)/(a+b) over coprime (a,b) in the canonical sector with matching
/// parities and a + b ≤ bound.
pub fn vertex_to_vertex_angles(label: TetraVertexLabel, bound: u64) -> Vec<AngleTangent> {
    let origin = RationalPoint::from_ints(0, 0);
    geodesics_to_vertex(&origin, label, bound)
        .expect("origin lies in the unit cell")
        .into_iter()
        .map(|g| g.tangent)
        .collect()
}

/// Rotation of the lattice by +120° in the u,v basis:
/// a·u + b·v ↦ (b−a)·u − a·v.
pub fn rotate120(q: &LatticePoint) -> LatticePoint {
    LatticePoint::new(&q.b - &q.a, -q.a.clone())
}

/// Rotation by −120°: a·u + b·v ↦ −b·u + (a−b)·v.
pub fn rotate120_inv(q: &LatticePoint) -> LatticePoint {
    LatticePoint::new(-q.b.clone(), &q.a - &q.b)
}

fn rotate120_inv_rational(p: &RationalPoint) -> RationalPoint {
    RationalPoint::new(-p.y.clone(), &p.x - &p.y)
}

fn rotate120_point_k(q: &LatticePoint, k: u8) -> LatticePoint {
    let mut out = q.clone();
    for _ in 0..(k % 3) {
        out = rotate120(&out);
    }
    out
}

/// Induced action of the +120° rotation on vertex labels: (f,s) ↦ (s−f, −f)
/// = (f+s, f) over ℤ/2. It has order 3.
pub fn rotate_label(l: TetraVertexLabel) -> TetraVertexLabel {
    TetraVertexLabel::new(l.first ^ l.second, l.first)
}

fn rotate_label_k(l: TetraVertexLabel, k: u8) -> TetraVertexLabel {
    let mut out = l;
    for _ in 0..(k % 3) {
        out = rotate_label(out);
    }
    out
}

/// A geodesic reported by the full-circle wrapper: `sector` k means the true
/// starting angle is the tangent's angle plus k·120°. The target and
/// displacement are in the original (unrotated) u,v frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedGeodesic {
    pub sector: u8,
    pub target: LatticePoint,
    pub displacement: (Rational, Rational),
    pub tangent_in_sector: AngleTangent,
}

/// Full-circle enumeration. The canonical sector spans the 120° of starting
/// angles (−π/3, π/3], so rotating the picture by 120° three times and
/// relabeling covers every direction exactly once; each rotated start point
/// is translated back into the unit cell before enumerating.
pub fn geodesics_all_directions(
    p: &RationalPoint,
    label: TetraVertexLabel,
    bound: u64,
) -> Result<Vec<DirectedGeodesic>, TetraError> {
    if !p.in_unit_cell() {
        return Err(TetraError::StartOutsideCell(p.x.clone(), p.y.clone()));
    }
    let mut out = Vec::new();
    for sector in 0..3u8 {
        // p in the frame rotated by −sector·120°.
        let mut p_rot = p.clone();
        for _ in 0..sector {
            p_rot = rotate120_inv_rational(&p_rot);
        }
        // Translate back into the unit cell by a lattice vector t.
        let t = LatticePoint::new(p_rot.x.floor().to_integer(), p_rot.y.floor().to_integer());
        let p_cell = RationalPoint::new(
            &p_rot.x - Rational::from_integer(t.a.clone()),
            &p_rot.y - Rational::from_integer(t.b.clone()),
        );
        // Sought label in the rotated, translated frame: χ(w) = V becomes
        // χ(w'') = R^{−sector}(V) + χ(t).
        let label_rot = rotate_label_k(label, (3 - sector % 3) % 3).xor(chi(&t));
        for g in geodesics_to_vertex(&p_cell, label_rot, bound)? {
            let back = rotate120_point_k(&g.target.add(&t), sector);
            let da = Rational::from_integer(back.a.clone()) - &p.x;
            let db = Rational::from_integer(back.b.clone()) - &p.y;
            out.push(DirectedGeodesic {
                sector,
                target: back,
                displacement: (da, db),
                tangent_in_sector: g.tangent,
            });
        }
    }
    Ok(out)
}

/// Parse a label of the form "1,0" or "10".
pub fn parse_label(s: &str) -> Result<TetraVertexLabel, TetraError> {
    let digits: Vec<u8> = s
        .chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c {
            '0' => Ok(0u8),
            '1' => Ok(1u8),
            _ => Err(TetraError::BadLabel(s.to_string())),
        })
        .collect::<Result<_, _>>()?;
    if digits.len() != 2 {
        return Err(TetraError::BadLabel(s.to_string()));
    }
    Ok(TetraVertexLabel::new(digits[0], digits[1]))
}
