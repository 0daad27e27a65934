//! Tumble sequences and tumble paths on the square lattice.
//!
//! A tumble sequence is the word over {r,u} recording the grid lines a
//! planar geodesic segment crosses, read in crossing order. Rolling the cube
//! out along the word produces the tumble path: the squares touched and the
//! vertex label at every lattice corner met on the way. Word positions are
//! 1-based throughout.

use crate::cube::CubeState;
use crate::rational::{Int, LatticePoint, Rational, RationalPoint};
use num::{Integer, One, Signed};
use std::collections::BTreeMap;
use thiserror::Error;

/// One cube roll: right or up.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Letter {
    R,
    U,
}

impl Letter {
    pub fn swapped(self) -> Self {
        match self {
            Letter::R => Letter::U,
            Letter::U => Letter::R,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::R => 'r',
            Letter::U => 'u',
        }
    }
}

/// A finite word over {r,u}.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct TumbleSequence(Vec<Letter>);

impl TumbleSequence {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self(letters)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn r_count(&self) -> usize {
        self.0.iter().filter(|&&l| l == Letter::R).count()
    }

    pub fn u_count(&self) -> usize {
        self.0.iter().filter(|&&l| l == Letter::U).count()
    }

    pub fn is_palindrome(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Self(letters)
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    /// Letter at 1-based position.
    pub fn at(&self, pos: usize) -> Option<Letter> {
        if pos == 0 {
            return None;
        }
        self.0.get(pos - 1).copied()
    }

    /// Swap r and u everywhere (the diagonal reflection of the word).
    pub fn swapped(&self) -> Self {
        Self(self.0.iter().map(|l| l.swapped()).collect())
    }
}

impl std::fmt::Display for TumbleSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl std::fmt::Debug for TumbleSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "\"{self}\"")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordParseError {
    #[error("tumble words use only the letters r and u, got {0:?}")]
    BadLetter(char),
}

impl std::str::FromStr for TumbleSequence {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                'r' => Ok(Letter::R),
                'u' => Ok(Letter::U),
                other => Err(WordParseError::BadLetter(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TumbleError {
    #[error("tumble sequences are defined for positive coordinates, got ({0},{1})")]
    NonPositive(Int, Int),
    #[error("({0},{1}) is not visible from the origin: gcd must be 1")]
    NotCoprime(Int, Int),
    #[error("word of length {0} does not fit in memory")]
    TooLong(Int),
}

/// The geodesic tumble sequence of the segment (0,0) → (a,b) for coprime
/// a,b ≥ 1: a word of length a+b−2 whose minority letters sit at positions
/// ⌈(a/b)·i⌉ + i − 1 (the pixel-line pattern).
pub fn tumble_sequence(a: &Int, b: &Int) -> Result<TumbleSequence, TumbleError> {
    if !a.is_positive() || !b.is_positive() {
        return Err(TumbleError::NonPositive(a.clone(), b.clone()));
    }
    if !a.gcd(b).is_one() {
        return Err(TumbleError::NotCoprime(a.clone(), b.clone()));
    }
    let total = a + b - Int::from(2);
    let len = usize::try_from(&total).map_err(|_| TumbleError::TooLong(total.clone()))?;
    if a == b {
        // gcd forces (1,1): the diagonal to the opposite corner, no crossings.
        return Ok(TumbleSequence::empty());
    }
    let (big, small, majority, minority) =
        if b < a { (a, b, Letter::R, Letter::U) } else { (b, a, Letter::U, Letter::R) };
    let mut word = vec![majority; len];
    let mut i = Int::one();
    while &i < small {
        let pos = (big * &i).div_ceil(small) + &i - Int::one();
        let idx = usize::try_from(&pos).expect("position within word") - 1;
        word[idx] = minority;
        i += 1;
    }
    Ok(TumbleSequence(word))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SegmentError {
    #[error("segment passes through the lattice point {0}: the geodesic ends there")]
    VertexHit(LatticePoint),
    #[error("segment must run strictly up and to the right (got direction ({0},{1}))")]
    NotUpRight(Rational, Rational),
}

/// Record the tumble word of the open segment p → q: an r per vertical grid
/// line crossed, a u per horizontal one, in crossing order. A simultaneous
/// crossing means the segment passes through a grid corner, which is exactly
/// a lattice point on the open segment; that ends the geodesic and is
/// reported as an error.
pub fn tumble_sequence_of_segment(
    p: &RationalPoint,
    q: &LatticePoint,
) -> Result<TumbleSequence, SegmentError> {
    let qx = Rational::from_integer(q.a.clone());
    let qy = Rational::from_integer(q.b.clone());
    let dx = &qx - &p.x;
    let dy = &qy - &p.y;
    if !dx.is_positive() || !dy.is_positive() {
        return Err(SegmentError::NotUpRight(dx, dy));
    }

    let mut word = Vec::new();
    let mut k = p.x.floor().to_integer() + Int::one(); // next vertical line
    let mut j = p.y.floor().to_integer() + Int::one(); // next horizontal line
    loop {
        let k_rat = Rational::from_integer(k.clone());
        let j_rat = Rational::from_integer(j.clone());
        let k_left = k_rat < qx;
        let j_left = j_rat < qy;
        match (k_left, j_left) {
            (false, false) => break,
            (true, false) => {
                word.push(Letter::R);
                k += 1;
            }
            (false, true) => {
                word.push(Letter::U);
                j += 1;
            }
            (true, true) => {
                // Compare crossing parameters (k−px)/dx vs (j−py)/dy.
                let lhs = (&k_rat - &p.x) * &dy;
                let rhs = (&j_rat - &p.y) * &dx;
                match lhs.cmp(&rhs) {
                    std::cmp::Ordering::Less => {
                        word.push(Letter::R);
                        k += 1;
                    }
                    std::cmp::Ordering::Greater => {
                        word.push(Letter::U);
                        j += 1;
                    }
                    std::cmp::Ordering::Equal => {
                        return Err(SegmentError::VertexHit(LatticePoint::new(k, j)));
                    }
                }
            }
        }
    }
    Ok(TumbleSequence(word))
}

/// The squares a rolled cube touches and the vertex label at every lattice
/// corner met along the way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TumblePath {
    /// Lower-left corners of the touched unit squares, in roll order.
    pub squares: Vec<LatticePoint>,
    /// Vertex label (0–7) at each lattice point touched by the path.
    pub corner_labels: BTreeMap<LatticePoint, u8>,
}

impl TumblePath {
    /// The lattice point the tumble ends on: the upper-right corner of the
    /// final square.
    pub fn target(&self) -> LatticePoint {
        let last = self.squares.last().expect("path has at least one square");
        LatticePoint::new(&last.a + Int::one(), &last.b + Int::one())
    }

    pub fn label_at(&self, p: &LatticePoint) -> Option<u8> {
        self.corner_labels.get(p).copied()
    }

    /// Label at the tumble endpoint.
    pub fn endpoint_label(&self) -> u8 {
        self.corner_labels[&self.target()]
    }
}

/// Roll the cube from its starting position along `word`, collecting the
/// path. The labels come from the explicit eight-vertex simulation; the
/// sum-to-7 rule is a theorem about the result, not an input.
pub fn tumble_path(word: &TumbleSequence) -> TumblePath {
    let mut state = CubeState::start();
    let mut squares = vec![state.square()];
    let mut corner_labels = BTreeMap::new();
    for (p, l) in state.bottom_corners() {
        corner_labels.insert(p, l);
    }
    for &letter in word.letters() {
        state.roll(letter);
        squares.push(state.square());
        for (p, l) in state.bottom_corners() {
            let prev = corner_labels.insert(p.clone(), l);
            debug_assert!(prev.is_none_or(|old| old == l), "inconsistent label at {p}");
        }
    }
    TumblePath { squares, corner_labels }
}

/// JSON form of a path: squares in roll order plus the corner labeling.
pub fn path_to_json(path: &TumblePath) -> serde_json::Value {
    serde_json::json!({
        "squares": path
            .squares
            .iter()
            .map(|s| vec![s.a.to_string(), s.b.to_string()])
            .collect::<Vec<_>>(),
        "corner_labels": path
            .corner_labels
            .iter()
            .map(|(p, l)| serde_json::json!({"x": p.a.to_string(), "y": p.b.to_string(), "label": l}))
            .collect::<Vec<_>>(),
        "target": {
            "x": path.target().a.to_string(),
            "y": path.target().b.to_string(),
            "label": path.endpoint_label(),
        },
    })
}

/// SVG rendering of a tumble path: touched squares, corner labels, and the
/// unfolded geodesic segment from the origin to the target.
pub fn path_to_svg(path: &TumblePath) -> String {
    use num::ToPrimitive;
    let scale = 60.0;
    let pad = 30.0;
    let max_x = path.squares.iter().map(|s| &s.a).max().unwrap().to_f64().unwrap() + 1.0;
    let max_y = path.squares.iter().map(|s| &s.b).max().unwrap().to_f64().unwrap() + 1.0;
    let width = max_x * scale + 2.0 * pad;
    let height = max_y * scale + 2.0 * pad;
    let tx = |x: f64| pad + x * scale;
    let ty = |y: f64| height - pad - y * scale;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">\n"
    ));
    for s in &path.squares {
        let x = s.a.to_f64().unwrap();
        let y = s.b.to_f64().unwrap();
        svg.push_str(&format!(
            "  <rect x=\"{:.1}\" y=\"{:.1}\" width=\"{scale:.1}\" height=\"{scale:.1}\" fill=\"#dce9f5\" stroke=\"#444\"/>\n",
            tx(x),
            ty(y + 1.0),
        ));
    }
    let t = path.target();
    svg.push_str(&format!(
        "  <line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#c22\" stroke-width=\"2\"/>\n",
        tx(0.0),
        ty(0.0),
        tx(t.a.to_f64().unwrap()),
        ty(t.b.to_f64().unwrap()),
    ));
    for (p, l) in &path.corner_labels {
        let x = p.a.to_f64().unwrap();
        let y = p.b.to_f64().unwrap();
        svg.push_str(&format!(
            "  <circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"2.5\" fill=\"#000\"/>\n  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"14\">{l}</text>\n",
            tx(x),
            ty(y),
            tx(x) + 4.0,
            ty(y) - 4.0,
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
