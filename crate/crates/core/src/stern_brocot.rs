//! The Stern–Brocot tree on first-quadrant lattice points visible from the
//! origin, with the tumble and orientation recurrences evaluated along the
//! subtractive (continued-fraction) descent.
//!
//! Every node t satisfies t = t⁺ + t⁻ and |⟨t,t±⟩| = 1; the root is (1,1)
//! with formal parents (0,1) and (1,0). Consecutive same-sign steps are
//! batched into quotients, so locating a point and evaluating its orientation
//! costs O(log(a+b)) big-integer operations — orientations along a branch are
//! a geometric sequence in S4, so a batch of k steps is one power with the
//! exponent reduced mod 12.

use crate::cube::{endpoint_vertex, orientation_of, CubeOrientation};
use crate::rational::{Int, LatticePoint};
use crate::tumble::{tumble_sequence, Letter, TumbleSequence};
use num::{Integer, One, Signed, Zero};
use thiserror::Error;

/// Edge sign: a node is its parent's negative or positive child.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn as_char(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A tree node: a visible lattice point with its two parents, its depth, and
/// the sign by which it hangs off its tree parent (`None` for the root).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SBNode {
    pub point: LatticePoint,
    pub pos_parent: LatticePoint,
    pub neg_parent: LatticePoint,
    pub depth: Int,
    pub child_sign: Option<Sign>,
}

impl SBNode {
    /// The root (1,1) with formal parents (0,1) and (1,0).
    pub fn root() -> Self {
        Self {
            point: LatticePoint::new(1, 1),
            pos_parent: LatticePoint::new(0, 1),
            neg_parent: LatticePoint::new(1, 0),
            depth: Int::zero(),
            child_sign: None,
        }
    }

    /// t₊ = t + t⁺, keeping the positive parent and making t the new
    /// negative parent.
    pub fn positive_child(&self) -> Self {
        Self {
            point: self.point.add(&self.pos_parent),
            pos_parent: self.pos_parent.clone(),
            neg_parent: self.point.clone(),
            depth: &self.depth + Int::one(),
            child_sign: Some(Sign::Plus),
        }
    }

    /// t₋ = t + t⁻, keeping the negative parent and making t the new
    /// positive parent.
    pub fn negative_child(&self) -> Self {
        Self {
            point: self.point.add(&self.neg_parent),
            pos_parent: self.point.clone(),
            neg_parent: self.neg_parent.clone(),
            depth: &self.depth + Int::one(),
            child_sign: Some(Sign::Minus),
        }
    }

    /// (positive child, negative child).
    pub fn children(&self) -> (Self, Self) {
        (self.positive_child(), self.negative_child())
    }

    pub fn is_root(&self) -> bool {
        self.child_sign.is_none()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SternBrocotError {
    #[error("tree points have positive coordinates, got ({0},{1})")]
    NonPositive(Int, Int),
    #[error("({0},{1}) is not in the tree: gcd must be 1")]
    NotCoprime(Int, Int),
    #[error("branch b{0}(t) is not defined for this node")]
    BranchUndefined(Sign),
}

/// Result of locating a point: its node and the run-length-encoded sign path
/// from the root (a batch per continued-fraction quotient).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Located {
    pub node: SBNode,
    pub sign_path: Vec<(Sign, Int)>,
}

impl Located {
    /// The sign path with batches expanded. Only sensible at small depths.
    pub fn expanded_path(&self) -> Vec<Sign> {
        let mut out = Vec::new();
        for (s, k) in &self.sign_path {
            let n = usize::try_from(k).expect("expanded path fits in memory");
            out.extend(std::iter::repeat_n(*s, n));
        }
        out
    }
}

/// Formal orientation of the root's positive parent (0,1): r⁻¹.
pub fn pos_root_parent_orientation() -> CubeOrientation {
    CubeOrientation::R.inverse()
}

/// Formal orientation of the root's negative parent (1,0): u⁻¹.
pub fn neg_root_parent_orientation() -> CubeOrientation {
    CubeOrientation::U.inverse()
}

struct Descent {
    pt: LatticePoint,
    pp: LatticePoint,
    np: LatticePoint,
    depth: Int,
    s_pt: CubeOrientation,
    s_pp: CubeOrientation,
    s_np: CubeOrientation,
    path: Vec<(Sign, Int)>,
}

impl Descent {
    fn new() -> Self {
        Self {
            pt: LatticePoint::new(1, 1),
            pp: LatticePoint::new(0, 1),
            np: LatticePoint::new(1, 0),
            depth: Int::zero(),
            s_pt: CubeOrientation::IDENTITY,
            s_pp: pos_root_parent_orientation(),
            s_np: neg_root_parent_orientation(),
            path: Vec::new(),
        }
    }

    /// Take `k` consecutive positive steps: pt ← pt + k·pp. Orientations on a
    /// positive chain satisfy σ(t_j) = σ(t_{j−1})·ur·σ(t⁺).
    fn positive_batch(&mut self, k: Int) {
        let m = CubeOrientation::U.compose(CubeOrientation::R).compose(self.s_pp);
        let k_minus_1 = &k - Int::one();
        self.np = self.pt.scaled_add(&k_minus_1, &self.pp);
        self.s_np = self.s_pt.compose(m.pow_int(&k_minus_1));
        self.pt = self.pt.scaled_add(&k, &self.pp);
        self.s_pt = self.s_pt.compose(m.pow_int(&k));
        self.depth += &k;
        self.path.push((Sign::Plus, k));
    }

    /// Take `k` consecutive negative steps: pt ← pt + k·np, with
    /// σ(t_j) = σ(t_{j−1})·ru·σ(t⁻).
    fn negative_batch(&mut self, k: Int) {
        let m = CubeOrientation::R.compose(CubeOrientation::U).compose(self.s_np);
        let k_minus_1 = &k - Int::one();
        self.pp = self.pt.scaled_add(&k_minus_1, &self.np);
        self.s_pp = self.s_pt.compose(m.pow_int(&k_minus_1));
        self.pt = self.pt.scaled_add(&k, &self.np);
        self.s_pt = self.s_pt.compose(m.pow_int(&k));
        self.depth += &k;
        self.path.push((Sign::Minus, k));
    }

    fn run(target: &LatticePoint) -> Self {
        let mut d = Self::new();
        while d.pt != *target {
            let d0 = d.pt.det(target);
            debug_assert!(!d0.is_zero(), "distinct primitive points are never collinear");
            if d0.is_positive() {
                let m = -d.pp.det(target);
                debug_assert!(m.is_positive());
                let (q, rem) = d0.div_rem(&m);
                let k = if rem.is_zero() { q } else { q + 1 };
                d.positive_batch(k);
            } else {
                let m = d.np.det(target);
                debug_assert!(m.is_positive());
                let (q, rem) = (-d0).div_rem(&m);
                let k = if rem.is_zero() { q } else { q + 1 };
                d.negative_batch(k);
            }
        }
        d
    }
}

fn check_point(a: &Int, b: &Int) -> Result<(), SternBrocotError> {
    if !a.is_positive() || !b.is_positive() {
        return Err(SternBrocotError::NonPositive(a.clone(), b.clone()));
    }
    if !a.gcd(b).is_one() {
        return Err(SternBrocotError::NotCoprime(a.clone(), b.clone()));
    }
    Ok(())
}

/// Locate (a,b) in the tree by running the parent recursion backwards,
/// batching repeated subtractions into quotients.
pub fn locate(a: &Int, b: &Int) -> Result<Located, SternBrocotError> {
    check_point(a, b)?;
    let target = LatticePoint::new(a.clone(), b.clone());
    let d = Descent::run(&target);
    let child_sign = d.path.last().map(|(s, _)| *s);
    Ok(Located {
        node: SBNode {
            point: d.pt,
            pos_parent: d.pp,
            neg_parent: d.np,
            depth: d.depth,
            child_sign,
        },
        sign_path: d.path,
    })
}

/// σ at a tree point in O(log(a+b)) group operations, via the orientation
/// recurrence σ(t) = σ(t⁺)·ru·σ(t⁻) batched along the descent.
pub fn orientation_at(a: &Int, b: &Int) -> Result<CubeOrientation, SternBrocotError> {
    check_point(a, b)?;
    let target = LatticePoint::new(a.clone(), b.clone());
    Ok(Descent::run(&target).s_pt)
}

/// σ for an already-located node.
pub fn orientation_of_node(n: &SBNode) -> CubeOrientation {
    orientation_at(&n.point.a, &n.point.b).expect("tree nodes are coprime positive points")
}

/// Same descent over machine integers, for bulk surveys. Intermediate
/// determinants are products of coordinates, so the explicit bound keeps all
/// arithmetic inside i128 by construction.
pub fn orientation_at_u64(a: u64, b: u64) -> CubeOrientation {
    const LIMIT: u64 = 1 << 40;
    assert!(a >= 1 && b >= 1 && a <= LIMIT && b <= LIMIT, "coordinates out of range");
    debug_assert_eq!(num::integer::gcd(a, b), 1);
    let (mut pt, mut pp, mut np) = ((1i128, 1i128), (0i128, 1i128), (1i128, 0i128));
    let mut s_pt = CubeOrientation::IDENTITY;
    let mut s_pp = pos_root_parent_orientation();
    let mut s_np = neg_root_parent_orientation();
    let t = (a as i128, b as i128);
    let det = |p: (i128, i128), q: (i128, i128)| p.0 * q.1 - p.1 * q.0;
    while pt != t {
        let d0 = det(pt, t);
        if d0 > 0 {
            let m = -det(pp, t);
            let k = if d0 % m == 0 { d0 / m } else { d0 / m + 1 };
            let mult = CubeOrientation::U.compose(CubeOrientation::R).compose(s_pp);
            np = (pt.0 + (k - 1) * pp.0, pt.1 + (k - 1) * pp.1);
            s_np = s_pt.compose(mult.pow((k - 1) as u64 % 12));
            pt = (pt.0 + k * pp.0, pt.1 + k * pp.1);
            s_pt = s_pt.compose(mult.pow(k as u64 % 12));
        } else {
            let m = det(np, t);
            let k = if (-d0) % m == 0 { -d0 / m } else { -d0 / m + 1 };
            let mult = CubeOrientation::R.compose(CubeOrientation::U).compose(s_np);
            pp = (pt.0 + (k - 1) * np.0, pt.1 + (k - 1) * np.1);
            s_pp = s_pt.compose(mult.pow((k - 1) as u64 % 12));
            pt = (pt.0 + k * np.0, pt.1 + k * np.1);
            s_pt = s_pt.compose(mult.pow(k as u64 % 12));
        }
    }
    s_pt
}

/// Tumble word of a node via the recurrence τ(t) = τ(t⁺)·ru·τ(t⁻), with the
/// closed forms τ(1,k+1) = uᵏ and τ(k+1,1) = rᵏ on the root branches. Output
/// length is Θ(a+b); intended for moderate coordinates.
pub fn tumble_of_node(n: &SBNode) -> TumbleSequence {
    tumble_at_point(&n.point)
}

fn tumble_at_point(p: &LatticePoint) -> TumbleSequence {
    if p.b.is_one() {
        let k = usize::try_from(&(&p.a - Int::one())).expect("word fits in memory");
        return TumbleSequence::new(vec![Letter::R; k]);
    }
    if p.a.is_one() {
        let k = usize::try_from(&(&p.b - Int::one())).expect("word fits in memory");
        return TumbleSequence::new(vec![Letter::U; k]);
    }
    let loc = locate(&p.a, &p.b).expect("tree nodes are coprime positive points");
    let mut word = tumble_at_point(&loc.node.pos_parent);
    word.push(Letter::R);
    word.push(Letter::U);
    word.concat(&tumble_at_point(&loc.node.neg_parent))
}

/// Orientations of the first `k` elements of the branch b±(n): the chain of
/// repeated same-sign children. The sequence is σ(n)·Mʲ for a fixed M ∈ S4,
/// hence periodic from the start with period ord(M) ≤ 4.
pub fn branch_orientations(
    n: &SBNode,
    sign: Sign,
    k: usize,
) -> Result<Vec<CubeOrientation>, SternBrocotError> {
    // b₊ is defined when n is adjacent to its positive parent (n is a
    // negative child), b₋ when adjacent to its negative parent; the root is
    // adjacent to both formal parents.
    let defined = match (sign, n.child_sign) {
        (_, None) => true,
        (Sign::Plus, Some(Sign::Minus)) => true,
        (Sign::Minus, Some(Sign::Plus)) => true,
        _ => false,
    };
    if !defined {
        return Err(SternBrocotError::BranchUndefined(sign));
    }
    let sigma_n = orientation_of_node(n);
    let parent_orientation = |p: &LatticePoint| {
        if p.a.is_zero() {
            pos_root_parent_orientation()
        } else if p.b.is_zero() {
            neg_root_parent_orientation()
        } else {
            orientation_at(&p.a, &p.b).expect("parents are coprime positive points")
        }
    };
    let multiplier = match sign {
        Sign::Plus => CubeOrientation::U
            .compose(CubeOrientation::R)
            .compose(parent_orientation(&n.pos_parent)),
        Sign::Minus => CubeOrientation::R
            .compose(CubeOrientation::U)
            .compose(parent_orientation(&n.neg_parent)),
    };
    let mut out = Vec::with_capacity(k);
    let mut acc = sigma_n;
    for _ in 0..k {
        acc = acc.compose(multiplier);
        out.push(acc);
    }
    Ok(out)
}

/// Minimal period of a sequence known to be periodic from the start.
pub fn minimal_period(seq: &[CubeOrientation]) -> usize {
    'outer: for p in 1..=seq.len() {
        for i in 0..seq.len() {
            if seq[i] != seq[i % p] {
                continue 'outer;
            }
        }
        return p;
    }
    seq.len()
}

/// All nodes to the given depth, breadth first, positive child first.
pub fn materialize(depth: usize) -> Vec<SBNode> {
    let mut out = vec![SBNode::root()];
    let mut level = vec![SBNode::root()];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * 2);
        for n in &level {
            let (p, m) = n.children();
            next.push(p);
            next.push(m);
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// DOT export of the tree to `depth`, each node annotated with its point,
/// tumble word, orientation, and endpoint vertex.
pub fn tree_dot(depth: usize) -> String {
    let mut s = String::from("digraph stern_brocot {\n  rankdir=LR;\n  node [shape=box];\n");
    for n in materialize(depth) {
        let sigma = orientation_of_node(&n);
        let tau = tumble_of_node(&n);
        s.push_str(&format!(
            "  \"{}\" [label=\"({},{})\\nt={}\\ns={} v={}\"];\n",
            n.point, n.point.a, n.point.b, tau, sigma, endpoint_vertex(sigma)
        ));
        if n.depth < Int::from(depth as u64) {
            let (pos, neg) = n.children();
            s.push_str(&format!("  \"{}\" -> \"{}\" [label=\"+\"];\n", n.point, pos.point));
            s.push_str(&format!("  \"{}\" -> \"{}\" [label=\"-\"];\n", n.point, neg.point));
        }
    }
    s.push_str("}\n");
    s
}

/// JSON export of the tree to `depth` (breadth first, positive child first).
pub fn tree_json(depth: usize) -> serde_json::Value {
    let nodes: Vec<_> = materialize(depth)
        .into_iter()
        .map(|n| {
            let sigma = orientation_of_node(&n);
            serde_json::json!({
                "a": n.point.a.to_string(),
                "b": n.point.b.to_string(),
                "depth": n.depth.to_string(),
                "sign": n.child_sign.map(|s| s.to_string()),
                "pos_parent": [n.pos_parent.a.to_string(), n.pos_parent.b.to_string()],
                "neg_parent": [n.neg_parent.a.to_string(), n.neg_parent.b.to_string()],
                "tumble": tumble_of_node(&n).to_string(),
                "orientation": sigma.to_string(),
                "vertex": endpoint_vertex(sigma),
            })
        })
        .collect();
    serde_json::json!({ "depth": depth, "nodes": nodes })
}

/// Slow reference for σ: build the word, then fold the homomorphism.
pub fn orientation_via_word(a: &Int, b: &Int) -> Result<CubeOrientation, SternBrocotError> {
    check_point(a, b)?;
    let word = tumble_sequence(a, b).expect("checked coprime positive");
    Ok(orientation_of(&word))
}
