//! The eight upper-level move operators.
//!
//! Every move is written `x' = op(x, T, a, b)`: `T` names the route (or
//! ordered pair of routes) involved, `a` is a customer of the first route and
//! `b` an [`Anchor`] locating the other end of the move.
//!
//! | op | kind | effect |
//! |----|------|--------|
//! | M1 | intra | relocate `a` before or after `b` |
//! | M2 | inter | relocate `a` after `b` in another route |
//! | M3 | intra | swap `a` and `b` |
//! | M4 | inter | swap `a` and `b` |
//! | M5 | intra | `(a,α),(b,β)` → `(a,b),(α,β)`, reversing the segment between |
//! | M6 | inter | `(a,α),(b,β)` → `(a,b),(α,β)` |
//! | M7 | inter | `(a,α),(b,β)` → `(a,β),(b,α)` |
//! | M8 | inter-empty | move `a` into an empty route |
//!
//! `α` and `β` are the successors of `a` and `b`, possibly the depot.

use std::fmt;

use crate::distance::DistanceOracle;
use crate::instance::NodeId;
use crate::solution::RoutingPlan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveOperator {
    IntraRelocate,
    InterRelocate,
    IntraSwap,
    InterSwap,
    IntraTwoOpt,
    InterTwoOptJoin,
    InterTwoOptTails,
    ToEmptyRoute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveClass {
    IntraRoute,
    InterRoute,
    InterRouteEmpty,
}

impl MoveOperator {
    /// M1 to M8 in order.
    pub const ALL: [MoveOperator; 8] = [
        Self::IntraRelocate,
        Self::InterRelocate,
        Self::IntraSwap,
        Self::InterSwap,
        Self::IntraTwoOpt,
        Self::InterTwoOptJoin,
        Self::InterTwoOptTails,
        Self::ToEmptyRoute,
    ];

    pub fn label(self) -> &'static str {
        ["M1", "M2", "M3", "M4", "M5", "M6", "M7", "M8"][self as usize]
    }

    pub fn class(self) -> MoveClass {
        match self {
            Self::IntraRelocate | Self::IntraSwap | Self::IntraTwoOpt => MoveClass::IntraRoute,
            Self::ToEmptyRoute => MoveClass::InterRouteEmpty,
            _ => MoveClass::InterRoute,
        }
    }
}

impl fmt::Display for MoveOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveTarget {
    Route(usize),
    /// `(route of a, route of b)`.
    Pair(usize, usize),
}

impl MoveTarget {
    pub fn first(self) -> usize {
        match self {
            Self::Route(r) | Self::Pair(r, _) => r,
        }
    }
}

/// The `b` argument of a move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Anchor {
    Before(NodeId),
    After(NodeId),
    Node(NodeId),
    EmptyRoute(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MoveError {
    InvalidTarget(&'static str),
    NoEmptyRoute,
}

impl fmt::Display for MoveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidTarget(why) => write!(f, "invalid move target: {why}"),
            Self::NoEmptyRoute => f.write_str("no empty route available"),
        }
    }
}

impl std::error::Error for MoveError {}

/// A move pinned to route positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Resolved {
    /// Remove `src[i]`, then insert it into `dst` at index `k` of the
    /// sequence left after removal.
    Relocate { src: usize, i: usize, dst: usize, k: usize },
    Swap { r1: usize, i: usize, r2: usize, j: usize },
    /// Reverse positions `i+1..=j`.
    Reverse { r: usize, i: usize, j: usize },
    /// Cut after `r1[i]` and `r2[j]`; `tails` picks M7 over M6.
    Cross { r1: usize, i: usize, r2: usize, j: usize, tails: bool },
}

#[inline]
fn arc(o: &DistanceOracle<'_>, u: NodeId, v: NodeId) -> f64 {
    if u == 0 && v == 0 {
        0.0
    } else {
        o.distance(u, v)
    }
}

#[inline]
fn at(route: &[NodeId], p: isize) -> NodeId {
    if p < 0 || p as usize >= route.len() {
        0
    } else {
        route[p as usize]
    }
}

/// Capacity view of a plan: per-route loads and inclusive prefix loads.
pub(crate) trait Loads {
    fn load(&self, r: usize) -> u64;
    /// Demand of `route[0..=i]`.
    fn prefix(&self, r: usize, i: usize) -> u64;
    fn demand(&self, c: NodeId) -> u64;
}

impl Resolved {
    pub(crate) fn delta(&self, routes: &[Vec<NodeId>], o: &DistanceOracle<'_>) -> f64 {
        match *self {
            Self::Relocate { src, i, dst, k } => {
                let s = &routes[src];
                let a = s[i];
                let (p, n) = (at(s, i as isize - 1), at(s, i as isize + 1));
                let removed = arc(o, p, n) - arc(o, p, a) - arc(o, a, n);
                let (u, v) = if src == dst {
                    // positions in the sequence after removal
                    let after = |q: isize| if q >= i as isize { q + 1 } else { q };
                    (at(s, after(k as isize - 1)), at(s, after(k as isize)))
                } else {
                    let d = &routes[dst];
                    (at(d, k as isize - 1), at(d, k as isize))
                };
                let inserted = if u == 0 && v == 0 {
                    2.0 * o.distance(0, a)
                } else {
                    arc(o, u, a) + arc(o, a, v) - arc(o, u, v)
                };
                removed + inserted
            }
            Self::Swap { r1, i, r2, j } => {
                let (ra, rb) = (&routes[r1], &routes[r2]);
                let (a, b) = (ra[i], rb[j]);
                let (pa, na) = (at(ra, i as isize - 1), at(ra, i as isize + 1));
                let (pb, nb) = (at(rb, j as isize - 1), at(rb, j as isize + 1));
                if r1 == r2 && (i + 1 == j || j + 1 == i) {
                    let (p, first, second, n) = if i < j { (pa, a, b, nb) } else { (pb, b, a, na) };
                    return arc(o, p, second) + arc(o, first, n) - arc(o, p, first) - arc(o, second, n);
                }
                arc(o, pa, b) + arc(o, b, na) + arc(o, pb, a) + arc(o, a, nb)
                    - arc(o, pa, a)
                    - arc(o, a, na)
                    - arc(o, pb, b)
                    - arc(o, b, nb)
            }
            Self::Reverse { r, i, j } => {
                let s = &routes[r];
                let (a, al, b, be) = (s[i], s[i + 1], s[j], at(s, j as isize + 1));
                arc(o, a, b) + arc(o, al, be) - arc(o, a, al) - arc(o, b, be)
            }
            Self::Cross { r1, i, r2, j, tails } => {
                let (c1, c2) = (&routes[r1], &routes[r2]);
                let (a, al) = (c1[i], at(c1, i as isize + 1));
                let (b, be) = (c2[j], at(c2, j as isize + 1));
                let added = if tails { arc(o, a, be) + arc(o, b, al) } else { arc(o, a, b) + arc(o, al, be) };
                added - arc(o, a, al) - arc(o, b, be)
            }
        }
    }

    pub(crate) fn apply(&self, routes: &mut [Vec<NodeId>]) {
        match *self {
            Self::Relocate { src, i, dst, k } => {
                let a = routes[src].remove(i);
                routes[dst].insert(k, a);
            }
            Self::Swap { r1, i, r2, j } => {
                let a = routes[r1][i];
                routes[r1][i] = routes[r2][j];
                routes[r2][j] = a;
            }
            Self::Reverse { r, i, j } => routes[r][i + 1..=j].reverse(),
            Self::Cross { r1, i, r2, j, tails } => {
                let t1 = routes[r1].split_off(i + 1);
                let t2 = routes[r2].split_off(j + 1);
                if tails {
                    routes[r1].extend(t2);
                    routes[r2].extend(t1);
                } else {
                    let mut head2 = std::mem::take(&mut routes[r2]);
                    head2.reverse();
                    routes[r1].extend(head2);
                    let mut new2 = t1;
                    new2.reverse();
                    new2.extend(t2);
                    routes[r2] = new2;
                }
            }
        }
    }

    /// Routes whose contents change.
    pub(crate) fn touched(&self) -> (usize, Option<usize>) {
        match *self {
            Self::Relocate { src, dst, .. } => (src, (src != dst).then_some(dst)),
            Self::Swap { r1, r2, .. } | Self::Cross { r1, r2, .. } => (r1, (r1 != r2).then_some(r2)),
            Self::Reverse { r, .. } => (r, None),
        }
    }

    /// Whether every touched route stays within `cap` after the move.
    pub(crate) fn capacity_ok(&self, routes: &[Vec<NodeId>], l: &impl Loads, cap: u64) -> bool {
        match *self {
            Self::Relocate { src, i, dst, .. } => src == dst || l.load(dst) + l.demand(routes[src][i]) <= cap,
            Self::Swap { r1, i, r2, j } => {
                if r1 == r2 {
                    return true;
                }
                let (da, db) = (l.demand(routes[r1][i]), l.demand(routes[r2][j]));
                l.load(r1) - da + db <= cap && l.load(r2) - db + da <= cap
            }
            Self::Reverse { .. } => true,
            Self::Cross { r1, i, r2, j, tails } => {
                let (p1, p2) = (l.prefix(r1, i), l.prefix(r2, j));
                let (t1, t2) = (l.load(r1) - p1, l.load(r2) - p2);
                if tails {
                    p1 + t2 <= cap && p2 + t1 <= cap
                } else {
                    p1 + p2 <= cap && t1 + t2 <= cap
                }
            }
        }
    }
}

/// Position of a customer: `(route, index)`.
pub(crate) type Locate<'a> = &'a dyn Fn(NodeId) -> Option<(usize, usize)>;

/// Pins `(op, T, a, b)` to positions, checking classification and
/// preconditions. No-op moves are accepted here.
pub(crate) fn resolve(
    op: MoveOperator,
    routes: &[Vec<NodeId>],
    loc: Locate<'_>,
    target: MoveTarget,
    a: NodeId,
    b: Anchor,
) -> Result<Resolved, MoveError> {
    let (ra, i) = loc(a).ok_or(MoveError::InvalidTarget("a is not routed"))?;
    if ra != target.first() {
        return Err(MoveError::InvalidTarget("a is not in the target's first route"));
    }
    let node_b = |b: NodeId| -> Result<(usize, usize), MoveError> {
        if b == a {
            return Err(MoveError::InvalidTarget("a and b coincide"));
        }
        let (rb, j) = loc(b).ok_or(MoveError::InvalidTarget("b is not routed"))?;
        match (op.class(), target) {
            (MoveClass::IntraRoute, MoveTarget::Route(_)) if rb == ra => Ok((rb, j)),
            (MoveClass::InterRoute, MoveTarget::Route(_)) if rb != ra => Ok((rb, j)),
            (MoveClass::InterRoute, MoveTarget::Pair(r1, r2)) if r1 != r2 && rb == r2 => Ok((rb, j)),
            _ => Err(MoveError::InvalidTarget("b does not match the operator's classification")),
        }
    };
    use MoveOperator::*;
    match (op, b) {
        (IntraRelocate, anchor @ (Anchor::Before(b) | Anchor::After(b))) => {
            let (_, j) = node_b(b)?;
            let j = if j > i { j - 1 } else { j };
            let k = if matches!(anchor, Anchor::After(_)) { j + 1 } else { j };
            Ok(Resolved::Relocate { src: ra, i, dst: ra, k })
        }
        (InterRelocate, Anchor::After(b)) => {
            let (rb, j) = node_b(b)?;
            Ok(Resolved::Relocate { src: ra, i, dst: rb, k: j + 1 })
        }
        (IntraSwap | InterSwap, Anchor::Node(b)) => {
            let (rb, j) = node_b(b)?;
            Ok(Resolved::Swap { r1: ra, i, r2: rb, j })
        }
        (IntraTwoOpt, Anchor::Node(b)) => {
            let (_, j) = node_b(b)?;
            Ok(Resolved::Reverse { r: ra, i: i.min(j), j: i.max(j) })
        }
        (InterTwoOptJoin | InterTwoOptTails, Anchor::Node(b)) => {
            let (rb, j) = node_b(b)?;
            Ok(Resolved::Cross { r1: ra, i, r2: rb, j, tails: op == InterTwoOptTails })
        }
        (ToEmptyRoute, Anchor::EmptyRoute(d)) => {
            if !routes.iter().any(Vec::is_empty) {
                return Err(MoveError::NoEmptyRoute);
            }
            if matches!(target, MoveTarget::Pair(_, t) if t != d) {
                return Err(MoveError::InvalidTarget("destination differs from the target pair"));
            }
            match routes.get(d) {
                Some(r) if r.is_empty() => Ok(Resolved::Relocate { src: ra, i, dst: d, k: 0 }),
                _ => Err(MoveError::InvalidTarget("M8 destination must be an empty route")),
            }
        }
        _ => Err(MoveError::InvalidTarget("anchor kind does not fit the operator")),
    }
}

/// Every valid `(b, move)` for `a` under `op` and `T`, in route order then
/// position order. Moves that leave the plan unchanged are left out.
pub(crate) fn candidates(
    op: MoveOperator,
    routes: &[Vec<NodeId>],
    loc: Locate<'_>,
    target: MoveTarget,
    a: NodeId,
) -> Vec<(Anchor, Resolved)> {
    let mut out = Vec::new();
    let Some((ra, _)) = loc(a) else { return out };
    if ra != target.first() {
        return out;
    }
    let mut push = |b: Anchor| {
        if let Ok(m) = resolve(op, routes, loc, target, a, b) {
            if !is_identity(&m, routes) {
                out.push((b, m));
            }
        }
    };
    let others: Vec<usize> = match target {
        MoveTarget::Pair(_, r2) if r2 != ra => vec![r2],
        MoveTarget::Pair(..) => Vec::new(),
        MoveTarget::Route(_) => (0..routes.len()).filter(|&r| r != ra).collect(),
    };
    use MoveOperator::*;
    match op {
        IntraRelocate => {
            for &b in routes[ra].iter().filter(|&&b| b != a) {
                push(Anchor::Before(b));
                push(Anchor::After(b));
            }
        }
        IntraSwap | IntraTwoOpt => {
            for &b in routes[ra].iter().filter(|&&b| b != a) {
                push(Anchor::Node(b));
            }
        }
        InterRelocate | InterSwap | InterTwoOptJoin | InterTwoOptTails => {
            for &r in &others {
                for &b in &routes[r] {
                    push(if op == InterRelocate { Anchor::After(b) } else { Anchor::Node(b) });
                }
            }
        }
        ToEmptyRoute => {
            if routes[ra].len() >= 2 {
                for &r in &others {
                    if routes[r].is_empty() {
                        push(Anchor::EmptyRoute(r));
                    }
                }
            }
        }
    }
    out
}

fn is_identity(m: &Resolved, routes: &[Vec<NodeId>]) -> bool {
    match *m {
        Resolved::Relocate { src, i, dst, k } => src == dst && i == k || (routes[src].len() == 1 && routes[dst].is_empty()),
        Resolved::Reverse { i, j, .. } => j == i + 1,
        Resolved::Cross { r1, i, r2, j, tails: true } => i + 1 == routes[r1].len() && j + 1 == routes[r2].len(),
        _ => false,
    }
}

fn locator(x: &RoutingPlan) -> impl Fn(NodeId) -> Option<(usize, usize)> + '_ {
    let n = x.routes().iter().flatten().copied().max().map_or(0, |m| m + 1);
    let mut pos = vec![None; n];
    for (r, route) in x.routes().iter().enumerate() {
        for (i, &c) in route.iter().enumerate() {
            pos[c] = Some((r, i));
        }
    }
    move |c| pos.get(c).copied().flatten()
}

/// `x' = op(x, T, a, b)`. `x` itself is left untouched.
pub fn apply_move(
    op: MoveOperator,
    x: &RoutingPlan,
    target: MoveTarget,
    a: NodeId,
    b: Anchor,
) -> Result<RoutingPlan, MoveError> {
    let loc = locator(x);
    let m = resolve(op, x.routes(), &loc, target, a, b)?;
    let mut routes = x.routes().to_vec();
    m.apply(&mut routes);
    Ok(RoutingPlan::new(routes))
}

/// `φ(x') − φ(x)` from the broken and created arcs only. Reads through
/// `oracle`, so a metered view is charged for exactly those arcs.
pub fn delta_phi(
    op: MoveOperator,
    x: &RoutingPlan,
    target: MoveTarget,
    a: NodeId,
    b: Anchor,
    oracle: &DistanceOracle<'_>,
) -> Result<f64, MoveError> {
    let loc = locator(x);
    Ok(resolve(op, x.routes(), &loc, target, a, b)?.delta(x.routes(), oracle))
}

/// Candidate `b` values for `a`, ordered by route index then position.
/// Anchors giving a move that leaves `x` unchanged are omitted.
pub fn enumerate_positions(op: MoveOperator, x: &RoutingPlan, target: MoveTarget, a: NodeId) -> Vec<Anchor> {
    let loc = locator(x);
    candidates(op, x.routes(), &loc, target, a).into_iter().map(|(b, _)| b).collect()
}
