//! Cube orientations as permutations of the four main diagonals, the
//! word → orientation homomorphism, and an explicit rolled-cube state that
//! serves as the oracle for every orientation claim.
//!
//! Conventions. The starting position has opposite vertices at (0,0,0) and
//! (1,1,1); vertex labels 0–7 are the binary encodings of their coordinates.
//! Diagonal i is the main diagonal touching bottom vertex i. An orientation
//! is written in one-line notation: entry i is the diagonal currently sitting
//! in the starting position of diagonal i. A right roll multiplies the
//! orientation on the right by r = 1230, an up roll by u = 2310; composing
//! one-line arrays s·t means applying t to indices first, i.e.
//! `(s·t)[i] = s[t[i]]`, so appending roll letters multiplies on the right.

use crate::rational::{Int, LatticePoint};
use crate::tumble::{Letter, TumbleSequence};
use std::collections::BTreeMap;
use std::sync::LazyLock;
use thiserror::Error;

/// A permutation of the four cube diagonals in one-line notation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeOrientation([u8; 4]);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrientationParseError {
    #[error("orientation must be 4 characters over 0-3, got {0:?}")]
    BadFormat(String),
    #[error("orientation must be a permutation of 0123, got {0:?}")]
    NotBijective(String),
}

impl CubeOrientation {
    pub const IDENTITY: Self = Self([0, 1, 2, 3]);
    /// One right roll.
    pub const R: Self = Self([1, 2, 3, 0]);
    /// One up roll.
    pub const U: Self = Self([2, 3, 1, 0]);

    pub fn from_array(digits: [u8; 4]) -> Result<Self, OrientationParseError> {
        let mut seen = [false; 4];
        for &d in &digits {
            if d > 3 || seen[d as usize] {
                return Err(OrientationParseError::NotBijective(format!("{digits:?}")));
            }
            seen[d as usize] = true;
        }
        Ok(Self(digits))
    }

    pub fn as_array(&self) -> [u8; 4] {
        self.0
    }

    /// Group product: `self` then `rhs` in word order (right multiplication
    /// by the appended factor).
    pub fn compose(self, rhs: Self) -> Self {
        Self([
            self.0[rhs.0[0] as usize],
            self.0[rhs.0[1] as usize],
            self.0[rhs.0[2] as usize],
            self.0[rhs.0[3] as usize],
        ])
    }

    pub fn inverse(self) -> Self {
        let mut inv = [0u8; 4];
        for i in 0..4 {
            inv[self.0[i] as usize] = i as u8;
        }
        Self(inv)
    }

    /// Order of the element: 1, 2, 3 or 4.
    pub fn order(self) -> u32 {
        let mut acc = self;
        for k in 1..=4 {
            if acc == Self::IDENTITY {
                return k;
            }
            acc = acc.compose(self);
        }
        unreachable!("S4 elements have order at most 4")
    }

    pub fn pow(self, k: u64) -> Self {
        // Orders divide 12, so reduce the exponent first.
        let mut acc = Self::IDENTITY;
        for _ in 0..(k % 12) {
            acc = acc.compose(self);
        }
        acc
    }

    pub fn pow_int(self, k: &Int) -> Self {
        use num::ToPrimitive;
        let e = (k % Int::from(12)).to_u64().expect("reduced exponent fits");
        self.pow(e)
    }

    /// All 24 orientations in ascending one-line order.
    pub fn all() -> Vec<Self> {
        let mut out = Vec::with_capacity(24);
        let digits = [0u8, 1, 2, 3];
        for &a in &digits {
            for &b in &digits {
                for &c in &digits {
                    for &d in &digits {
                        if let Ok(o) = Self::from_array([a, b, c, d]) {
                            out.push(o);
                        }
                    }
                }
            }
        }
        out
    }
}

impl std::fmt::Display for CubeOrientation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{}{}{}", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

impl std::fmt::Debug for CubeOrientation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for CubeOrientation {
    type Err = OrientationParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        if bytes.len() != 4 || !bytes.iter().all(|b| (b'0'..=b'3').contains(b)) {
            return Err(OrientationParseError::BadFormat(s.to_string()));
        }
        Self::from_array([bytes[0] - b'0', bytes[1] - b'0', bytes[2] - b'0', bytes[3] - b'0'])
    }
}

/// Orientation of a single roll letter.
pub fn letter_orientation(l: Letter) -> CubeOrientation {
    match l {
        Letter::R => CubeOrientation::R,
        Letter::U => CubeOrientation::U,
    }
}

/// The monoid homomorphism from tumble words: empty ↦ identity, appending a
/// letter multiplies on the right.
pub fn orientation_of(word: &TumbleSequence) -> CubeOrientation {
    word.letters()
        .iter()
        .fold(CubeOrientation::IDENTITY, |acc, &l| acc.compose(letter_orientation(l)))
}

/// Full state of the labeled cube rolling on the square grid: the lattice
/// position of its bottom face plus which vertex label sits at each of the
/// eight corner slots of the current box (slot index = x + 2y + 4z in
/// box-relative coordinates).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeState {
    origin: LatticePoint,
    corners: [u8; 8],
}

impl Default for CubeState {
    fn default() -> Self {
        Self::start()
    }
}

impl CubeState {
    /// Starting position: label k at the corner with coordinates = binary k.
    pub fn start() -> Self {
        Self { origin: LatticePoint::origin(), corners: [0, 1, 2, 3, 4, 5, 6, 7] }
    }

    /// Lower-left lattice point of the current bottom face.
    pub fn square(&self) -> LatticePoint {
        self.origin.clone()
    }

    pub fn roll(&mut self, l: Letter) {
        match l {
            Letter::R => self.roll_right(),
            Letter::U => self.roll_up(),
        }
    }

    /// Tip over the right bottom edge: material point (x,y,z) of the unit box
    /// moves to (1+z, y, 1−x).
    pub fn roll_right(&mut self) {
        let old = self.corners;
        let mut new = [0u8; 8];
        for x in 0..2usize {
            for y in 0..2usize {
                for z in 0..2usize {
                    new[x + 2 * y + 4 * z] = old[(1 - z) + 2 * y + 4 * x];
                }
            }
        }
        self.corners = new;
        self.origin.a += 1;
    }

    /// Tip over the top bottom edge: (x,y,z) moves to (x, 1+z, 1−y).
    pub fn roll_up(&mut self) {
        let old = self.corners;
        let mut new = [0u8; 8];
        for x in 0..2usize {
            for y in 0..2usize {
                for z in 0..2usize {
                    new[x + 2 * y + 4 * z] = old[x + 2 * (1 - z) + 4 * y];
                }
            }
        }
        self.corners = new;
        self.origin.b += 1;
    }

    pub fn roll_word(&mut self, word: &TumbleSequence) {
        for &l in word.letters() {
            self.roll(l);
        }
    }

    /// Label at a bottom corner of the current square (dx, dy ∈ {0,1}).
    pub fn bottom_label(&self, dx: usize, dy: usize) -> u8 {
        self.corners[dx + 2 * dy]
    }

    /// Bottom corner labels with their absolute lattice positions.
    pub fn bottom_corners(&self) -> [(LatticePoint, u8); 4] {
        let mut out = Vec::with_capacity(4);
        for dy in 0..2usize {
            for dx in 0..2usize {
                let p = LatticePoint::new(&self.origin.a + Int::from(dx as u32), &self.origin.b + Int::from(dy as u32));
                out.push((p, self.bottom_label(dx, dy)));
            }
        }
        out.try_into().unwrap()
    }

    /// Label touching the tumble endpoint: the upper-right bottom corner.
    pub fn endpoint_label(&self) -> u8 {
        self.bottom_label(1, 1)
    }

    /// Read the diagonal permutation off the state: slot i of the bottom face
    /// holds the diagonal identified by the label pair {l, 7−l}.
    pub fn orientation(&self) -> CubeOrientation {
        let diag = |l: u8| l.min(7 - l);
        CubeOrientation([
            diag(self.bottom_label(0, 0)),
            diag(self.bottom_label(1, 0)),
            diag(self.bottom_label(0, 1)),
            diag(self.bottom_label(1, 1)),
        ])
    }
}

/// Endpoint-vertex table over all 24 orientations, derived once by breadth-
/// first roll simulation (never transcribed by hand).
static ENDPOINT_TABLE: LazyLock<BTreeMap<CubeOrientation, u8>> = LazyLock::new(|| {
    let mut table = BTreeMap::new();
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(CubeState::start());
    table.insert(CubeState::start().orientation(), CubeState::start().endpoint_label());
    while let Some(state) = queue.pop_front() {
        for l in [Letter::R, Letter::U] {
            let mut next = state.clone();
            next.roll(l);
            let o = next.orientation();
            if let std::collections::btree_map::Entry::Vacant(e) = table.entry(o) {
                e.insert(next.endpoint_label());
                queue.push_back(next);
            }
        }
    }
    assert_eq!(table.len(), 24, "rolls must reach all 24 orientations");
    table
});

/// The cube vertex label touching the lattice endpoint when a tumble from the
/// start ends in orientation `o`. Vertex 0 marks the three orientations that
/// never occur on geodesic tumbles.
pub fn endpoint_vertex(o: CubeOrientation) -> u8 {
    *ENDPOINT_TABLE.get(&o).expect("all 24 orientations tabulated")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> CubeOrientation {
        s.parse().unwrap()
    }

    #[test]
    fn composition_identity_and_generators() {
        assert_eq!(CubeOrientation::IDENTITY.compose(CubeOrientation::R), CubeOrientation::R);
        assert_eq!(o("0123"), CubeOrientation::IDENTITY);
        assert_eq!(CubeOrientation::R, o("1230"));
        assert_eq!(CubeOrientation::U, o("2310"));
    }

    #[test]
    fn defining_relations_hold() {
        let r = CubeOrientation::R;
        let u = CubeOrientation::U;
        assert_eq!(r.pow(4), CubeOrientation::IDENTITY);
        assert_eq!(u.pow(4), CubeOrientation::IDENTITY);
        let r2u = r.compose(r).compose(u);
        assert_eq!(r2u.compose(r2u), CubeOrientation::IDENTITY);
        let ur = u.compose(r);
        assert_eq!(ur.pow(3), CubeOrientation::IDENTITY);
    }

    #[test]
    fn inverses() {
        assert_eq!(CubeOrientation::R.inverse(), o("3012"));
        assert_eq!(CubeOrientation::U.inverse(), o("3201"));
        for x in CubeOrientation::all() {
            assert_eq!(x.compose(x.inverse()), CubeOrientation::IDENTITY);
            assert_eq!(x.inverse().compose(x), CubeOrientation::IDENTITY);
        }
    }

    #[test]
    fn word_orientations() {
        let word = |s: &str| s.parse::<TumbleSequence>().unwrap();
        assert_eq!(orientation_of(&word("")), o("0123"));
        assert_eq!(orientation_of(&word("r")), o("1230"));
        assert_eq!(orientation_of(&word("u")), o("2310"));
        // The diagonal geodesic to (5,2); see the roll-path test below.
        assert_eq!(orientation_of(&word("rrurr")), o("3201"));
        assert_eq!(orientation_of(&word("uuruu")), o("3012"));
    }

    #[test]
    fn single_rolls_put_the_stated_vertices_down() {
        let mut s = CubeState::start();
        s.roll_right();
        let mut down: Vec<u8> = s.bottom_corners().iter().map(|(_, l)| *l).collect();
        down.sort_unstable();
        assert_eq!(down, vec![1, 3, 5, 7]);
        assert_eq!(s.orientation(), o("1230"));

        let mut s = CubeState::start();
        s.roll_up();
        let mut down: Vec<u8> = s.bottom_corners().iter().map(|(_, l)| *l).collect();
        down.sort_unstable();
        assert_eq!(down, vec![2, 3, 6, 7]);
        assert_eq!(s.orientation(), o("2310"));
    }

    #[test]
    fn roll_path_rrurr_matches_hand_labeling() {
        // Corner labels accumulated while rolling the diagonal geodesic
        // word rrurr to (5,2).
        let mut s = CubeState::start();
        let mut labels = BTreeMap::new();
        for (p, l) in s.bottom_corners() {
            labels.insert((format!("{}", p.a), format!("{}", p.b)), l);
        }
        for l in "rrurr".parse::<TumbleSequence>().unwrap().letters() {
            s.roll(*l);
            for (p, lab) in s.bottom_corners() {
                labels.insert((format!("{}", p.a), format!("{}", p.b)), lab);
            }
        }
        let get = |x: i32, y: i32| labels[&(x.to_string(), y.to_string())];
        assert_eq!(get(0, 0), 0);
        assert_eq!(get(2, 0), 5);
        assert_eq!(get(3, 0), 4);
        assert_eq!(get(2, 1), 7);
        assert_eq!(get(3, 1), 6);
        assert_eq!(get(4, 1), 4);
        assert_eq!(get(5, 1), 5);
        assert_eq!(get(2, 2), 3);
        assert_eq!(get(3, 2), 2);
        assert_eq!(get(4, 2), 0);
        assert_eq!(get(5, 2), 1);
        assert_eq!(s.endpoint_label(), 1);
        assert_eq!(s.orientation(), o("3201"));
    }

    #[test]
    fn endpoint_table_matches_known_rows() {
        // The nine orientations that occur on geodesics, with their vertices.
        let expected = [
            ("3201", 1),
            ("3012", 2),
            ("0123", 3),
            ("0213", 4),
            ("1032", 5),
            ("2301", 6),
            ("1230", 7),
            ("2310", 7),
            ("3120", 7),
        ];
        for (name, v) in expected {
            assert_eq!(endpoint_vertex(o(name)), v, "{name}");
        }
        // The remaining three land on the start vertex and never occur.
        for name in ["1320", "2130", "3210"] {
            assert_eq!(endpoint_vertex(o(name)), 0, "{name}");
        }
        let zero_count = CubeOrientation::all()
            .into_iter()
            .filter(|&x| endpoint_vertex(x) == 0)
            .count();
        assert_eq!(zero_count, 3);
    }
}
