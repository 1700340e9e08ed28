//! Implicit Cartesian products of paths and cycles.
//!
//! A [`GraphSpec`] is a list of dimensions, each a path (`wrap = false`) or a
//! cycle (`wrap = true`). Nothing is materialized: adjacency, distance and
//! flood fill are computed from coordinates. Vertex ids are the mixed-radix
//! encoding of the coordinates with the *last* coordinate varying fastest, so
//! id order coincides with lexicographic coordinate order.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// One factor of the product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dim {
    pub len: usize,
    pub wrap: bool,
}

impl Dim {
    pub fn path(len: usize) -> Self {
        Dim { len, wrap: false }
    }

    pub fn cycle(len: usize) -> Self {
        Dim { len, wrap: true }
    }

    /// Distance between two coordinates along this factor.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        let d = a.abs_diff(b);
        if self.wrap {
            d.min(self.len - d)
        } else {
            d
        }
    }
}

/// Which grammar form a spec was written in; only affects `Display`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Grid,
    Torus,
    Cube,
    Product,
}

/// A vertex as its coordinate tuple (0-based).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vertex(pub Vec<usize>);

impl Vertex {
    pub fn new(coords: impl Into<Vec<usize>>) -> Self {
        Vertex(coords.into())
    }

    pub fn coords(&self) -> &[usize] {
        &self.0
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }
}

impl<const N: usize> From<[usize; N]> for Vertex {
    fn from(c: [usize; N]) -> Self {
        Vertex(c.to_vec())
    }
}

impl std::ops::Index<usize> for Vertex {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Implicit Cartesian product graph.
#[derive(Clone, Debug)]
pub struct GraphSpec {
    dims: Vec<Dim>,
    family: Family,
    strides: Vec<usize>,
    vertex_count: usize,
    /// Every side has length 2, so ids are bit strings.
    binary: bool,
}

impl PartialEq for GraphSpec {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims
    }
}

impl Eq for GraphSpec {}

impl GraphSpec {
    pub fn new(dims: Vec<Dim>) -> Result<Self, GraphError> {
        Self::with_family(dims, Family::Product)
    }

    fn with_family(dims: Vec<Dim>, family: Family) -> Result<Self, GraphError> {
        if dims.is_empty() {
            return Err(GraphError::Invalid(
                "graph needs at least one dimension".into(),
            ));
        }
        for (i, d) in dims.iter().enumerate() {
            if d.len == 0 {
                return Err(GraphError::Invalid(format!("dimension {i} has length 0")));
            }
            if d.wrap && d.len < 3 {
                return Err(GraphError::Invalid(format!(
                    "wrapped dimension {i} has length {} (< 3)",
                    d.len
                )));
            }
        }
        let mut strides = vec![1usize; dims.len()];
        let mut count: usize = 1;
        for i in (0..dims.len()).rev() {
            strides[i] = count;
            count = count
                .checked_mul(dims[i].len)
                .ok_or_else(|| GraphError::Invalid("vertex count overflows".into()))?;
        }
        let binary = dims.iter().all(|d| d.len == 2 && !d.wrap);
        Ok(GraphSpec {
            dims,
            family,
            strides,
            vertex_count: count,
            binary,
        })
    }

    pub fn grid(lens: &[usize]) -> Result<Self, GraphError> {
        Self::with_family(lens.iter().map(|&l| Dim::path(l)).collect(), Family::Grid)
    }

    pub fn torus(lens: &[usize]) -> Result<Self, GraphError> {
        Self::with_family(lens.iter().map(|&l| Dim::cycle(l)).collect(), Family::Torus)
    }

    /// The hypercube Q_d as d copies of P_2.
    pub fn cube(d: usize) -> Result<Self, GraphError> {
        Self::with_family(vec![Dim::path(2); d], Family::Cube)
    }

    pub fn dims(&self) -> &[Dim] {
        &self.dims
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn dimension(&self) -> usize {
        self.dims.len()
    }

    pub fn len(&self, axis: usize) -> usize {
        self.dims[axis].len
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn is_hypercube(&self) -> bool {
        self.dims.iter().all(|d| d.len == 2 && !d.wrap)
    }

    pub fn is_grid(&self) -> bool {
        self.dims.iter().all(|d| !d.wrap)
    }

    pub fn is_torus(&self) -> bool {
        self.dims.iter().all(|d| d.wrap)
    }

    /// True when every dimension is a path of the same length `n`.
    pub fn is_cubic_grid(&self) -> Option<usize> {
        let n = self.dims[0].len;
        self.dims.iter().all(|d| !d.wrap && d.len == n).then_some(n)
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        v.0.len() == self.dims.len() && v.0.iter().zip(&self.dims).all(|(&c, d)| c < d.len)
    }

    pub fn check(&self, v: &Vertex) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex {
                vertex: v.clone(),
                graph: self.to_string(),
            })
        }
    }

    /// Vertex id of a (valid) vertex.
    pub fn index(&self, v: &Vertex) -> usize {
        debug_assert!(self.contains(v));
        v.0.iter().zip(&self.strides).map(|(c, s)| c * s).sum()
    }

    pub fn try_index(&self, v: &Vertex) -> Result<usize, GraphError> {
        self.check(v)?;
        Ok(self.index(v))
    }

    pub fn vertex(&self, id: usize) -> Vertex {
        Vertex((0..self.dims.len()).map(|a| self.coord(id, a)).collect())
    }

    #[inline]
    pub fn coord(&self, id: usize, axis: usize) -> usize {
        (id / self.strides[axis]) % self.dims[axis].len
    }

    #[inline]
    pub fn stride(&self, axis: usize) -> usize {
        self.strides[axis]
    }

    /// Id of the vertex obtained by replacing one coordinate.
    #[inline]
    pub fn with_coord(&self, id: usize, axis: usize, value: usize) -> usize {
        let c = self.coord(id, axis);
        id - c * self.strides[axis] + value * self.strides[axis]
    }

    /// Calls `f` on every neighbor id, per axis ascending, decrease before increase.
    #[inline]
    pub fn for_each_neighbor(&self, id: usize, mut f: impl FnMut(usize)) {
        if self.binary {
            for &s in &self.strides {
                f(id ^ s);
            }
            return;
        }
        for (axis, d) in self.dims.iter().enumerate() {
            let s = self.strides[axis];
            let c = (id / s) % d.len;
            if c > 0 {
                f(id - s);
            } else if d.wrap {
                f(id + (d.len - 1) * s);
            }
            if c + 1 < d.len {
                f(id + s);
            } else if d.wrap {
                f(id - (d.len - 1) * s);
            }
        }
    }

    pub fn neighbor_ids(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(2 * self.dims.len());
        self.for_each_neighbor(id, |n| out.push(n));
        out
    }

    pub fn neighbors(&self, v: &Vertex) -> Result<BTreeSet<Vertex>, GraphError> {
        let id = self.try_index(v)?;
        Ok(self
            .neighbor_ids(id)
            .into_iter()
            .map(|n| self.vertex(n))
            .collect())
    }

    pub fn degree(&self, id: usize) -> usize {
        let mut d = 0;
        self.for_each_neighbor(id, |_| d += 1);
        d
    }

    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        self.distance_ids(a, b) == 1
    }

    pub fn distance_ids(&self, a: usize, b: usize) -> usize {
        self.dims
            .iter()
            .enumerate()
            .map(|(axis, d)| d.distance(self.coord(a, axis), self.coord(b, axis)))
            .sum()
    }

    pub fn distance(&self, u: &Vertex, v: &Vertex) -> Result<usize, GraphError> {
        let a = self.try_index(u)?;
        let b = self.try_index(v)?;
        Ok(self.distance_ids(a, b))
    }

    /// One step from `from` along a shortest path to `to`: the lowest axis
    /// that differs moves first, and on a cycle an exact tie goes down.
    pub fn step_toward(&self, from: usize, to: usize) -> usize {
        for (axis, d) in self.dims.iter().enumerate() {
            let a = self.coord(from, axis);
            let b = self.coord(to, axis);
            if a == b {
                continue;
            }
            let next = if d.wrap {
                let down = (a + d.len - b) % d.len;
                let up = (b + d.len - a) % d.len;
                if down <= up {
                    (a + d.len - 1) % d.len
                } else {
                    (a + 1) % d.len
                }
            } else if b < a {
                a - 1
            } else {
                a + 1
            };
            return self.with_coord(from, axis, next);
        }
        from
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.vertex_count).map(move |id| self.vertex(id))
    }

    /// Breadth-first distances from `source` on the materialized graph.
    pub fn bfs_distances(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            self.for_each_neighbor(u, |w| {
                if dist[w] == usize::MAX {
                    dist[w] = du + 1;
                    queue.push_back(w);
                }
            });
        }
        dist
    }

    pub fn whole_box(&self) -> GridBox {
        GridBox {
            lo: Vertex(vec![0; self.dims.len()]),
            hi: Vertex(self.dims.iter().map(|d| d.len - 1).collect()),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lens = |sep: &str| {
            self.dims
                .iter()
                .map(|d| d.len.to_string())
                .collect::<Vec<_>>()
                .join(sep)
        };
        match self.family {
            Family::Grid if self.is_grid() => write!(f, "grid:{}", lens("x")),
            Family::Torus if self.is_torus() => write!(f, "torus:{}", lens("x")),
            Family::Cube if self.is_hypercube() => write!(f, "cube:{}", self.dims.len()),
            _ => {
                let parts: Vec<String> = self
                    .dims
                    .iter()
                    .map(|d| {
                        if d.wrap {
                            format!("{}w", d.len)
                        } else {
                            d.len.to_string()
                        }
                    })
                    .collect();
                write!(f, "product:{}", parts.join(","))
            }
        }
    }
}

fn parse_len(s: &str, text: &str) -> Result<usize, GraphError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(GraphError::Parse(format!("bad length {s:?} in {text:?}")));
    }
    s.parse()
        .map_err(|_| GraphError::Parse(format!("bad length {s:?} in {text:?}")))
}

impl FromStr for GraphSpec {
    type Err = GraphError;

    /// Grammar: `grid:5x5`, `torus:18x18`, `cube:10`, `product:5w,5w,4`.
    fn from_str(text: &str) -> Result<Self, GraphError> {
        let (kind, body) = text
            .split_once(':')
            .ok_or_else(|| GraphError::Parse(format!("missing ':' in {text:?}")))?;
        match kind {
            "grid" | "torus" => {
                let lens = body
                    .split('x')
                    .map(|p| parse_len(p, text))
                    .collect::<Result<Vec<_>, _>>()?;
                if kind == "grid" {
                    GraphSpec::grid(&lens)
                } else {
                    GraphSpec::torus(&lens)
                }
            }
            "cube" => {
                let d = parse_len(body, text)?;
                if d == 0 {
                    return Err(GraphError::Parse("cube dimension must be positive".into()));
                }
                GraphSpec::cube(d)
            }
            "product" => {
                let dims = body
                    .split(',')
                    .map(|p| match p.strip_suffix('w') {
                        Some(l) => parse_len(l, text).map(Dim::cycle),
                        None => parse_len(p, text).map(Dim::path),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                GraphSpec::new(dims)
            }
            other => Err(GraphError::Parse(format!("unknown graph family {other:?}"))),
        }
    }
}

/// Inclusive axis-aligned box `lo..=hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridBox {
    pub lo: Vertex,
    pub hi: Vertex,
}

impl GridBox {
    pub fn new(lo: impl Into<Vertex>, hi: impl Into<Vertex>) -> Self {
        GridBox {
            lo: lo.into(),
            hi: hi.into(),
        }
    }

    pub fn check(&self, g: &GraphSpec) -> Result<(), GraphError> {
        g.check(&self.lo)?;
        g.check(&self.hi)?;
        if self.lo.0.iter().zip(&self.hi.0).any(|(l, h)| l > h) {
            return Err(GraphError::Invalid(format!(
                "box lo {} exceeds hi {}",
                self.lo, self.hi
            )));
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.lo
            .0
            .iter()
            .zip(&self.hi.0)
            .map(|(l, h)| h - l + 1)
            .product()
    }

    pub fn side(&self, axis: usize) -> usize {
        self.hi.0[axis] - self.lo.0[axis] + 1
    }

    pub fn contains_id(&self, g: &GraphSpec, id: usize) -> bool {
        (0..g.dimension()).all(|a| {
            let c = g.coord(id, a);
            self.lo.0[a] <= c && c <= self.hi.0[a]
        })
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        v.0.iter()
            .enumerate()
            .all(|(a, &c)| self.lo.0[a] <= c && c <= self.hi.0[a])
    }

    /// Middle vertex, rounding down.
    pub fn center(&self) -> Vertex {
        Vertex(
            self.lo
                .0
                .iter()
                .zip(&self.hi.0)
                .map(|(l, h)| (l + h) / 2)
                .collect(),
        )
    }

    pub fn is_subset_of(&self, other: &GridBox) -> bool {
        other.contains(&self.lo) && other.contains(&self.hi)
    }

    /// Ids of all vertices of the box in lexicographic order.
    pub fn ids(&self, g: &GraphSpec) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.size());
        let dim = g.dimension();
        let mut cur = self.lo.0.clone();
        loop {
            out.push(g.index(&Vertex(cur.clone())));
            let mut axis = dim;
            loop {
                if axis == 0 {
                    return out;
                }
                axis -= 1;
                if cur[axis] < self.hi.0[axis] {
                    cur[axis] += 1;
                    break;
                }
                cur[axis] = self.lo.0[axis];
            }
        }
    }
}

/// Vertices of `b`, lexicographic order.
pub fn box_vertices<'a>(g: &'a GraphSpec, b: &GridBox) -> impl Iterator<Item = Vertex> + 'a {
    b.ids(g).into_iter().map(move |id| g.vertex(id))
}

/// `int(b)`: removes the box vertices that have a neighbor outside the box.
/// Returns `None` when nothing is left.
pub fn interior(g: &GraphSpec, b: &GridBox) -> Result<Option<GridBox>, GraphError> {
    b.check(g)?;
    let mut lo = b.lo.0.clone();
    let mut hi = b.hi.0.clone();
    for (axis, d) in g.dims().iter().enumerate() {
        let full = b.lo.0[axis] == 0 && b.hi.0[axis] == d.len - 1;
        if d.wrap {
            if full {
                continue;
            }
            // Both ends have a neighbor across the cut of the cycle.
            if hi[axis] < lo[axis] + 2 {
                return Ok(None);
            }
            lo[axis] += 1;
            hi[axis] -= 1;
            continue;
        }
        let shrink_lo = lo[axis] > 0;
        let shrink_hi = hi[axis] < d.len - 1;
        let need = usize::from(shrink_lo) + usize::from(shrink_hi);
        if hi[axis] + 1 < lo[axis] + 1 + need {
            return Ok(None);
        }
        if shrink_lo {
            lo[axis] += 1;
        }
        if shrink_hi {
            hi[axis] -= 1;
        }
    }
    Ok(Some(GridBox {
        lo: Vertex(lo),
        hi: Vertex(hi),
    }))
}

/// Vertices not occupied, as a flag vector, from a list of occupied ids.
pub fn blocked_mask(g: &GraphSpec, occupied: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut mask = vec![false; g.vertex_count()];
    for id in occupied {
        mask[id] = true;
    }
    mask
}

/// The connected component of `from` in the graph minus `blocked`.
/// `from` itself must not be blocked.
pub fn component_ids(g: &GraphSpec, blocked: &[bool], from: usize) -> Vec<usize> {
    debug_assert!(!blocked[from]);
    let mut seen = vec![false; g.vertex_count()];
    let mut out = vec![from];
    seen[from] = true;
    let mut head = 0;
    while head < out.len() {
        let u = out[head];
        head += 1;
        g.for_each_neighbor(u, |w| {
            if !blocked[w] && !seen[w] {
                seen[w] = true;
                out.push(w);
            }
        });
    }
    out
}

/// Labels every unblocked vertex with its component; blocked vertices get
/// `u32::MAX`. Returns the labels and the component sizes.
pub fn component_labels(g: &GraphSpec, blocked: &[bool]) -> (Vec<u32>, Vec<usize>) {
    let n = g.vertex_count();
    let mut label = vec![u32::MAX; n];
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if blocked[s] || label[s] != u32::MAX {
            continue;
        }
        let c = sizes.len() as u32;
        let mut size = 0;
        label[s] = c;
        stack.push(s);
        while let Some(u) = stack.pop() {
            size += 1;
            g.for_each_neighbor(u, |w| {
                if !blocked[w] && label[w] == u32::MAX {
                    label[w] = c;
                    stack.push(w);
                }
            });
        }
        sizes.push(size);
    }
    (label, sizes)
}
