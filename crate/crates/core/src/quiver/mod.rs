//! Quivers without oriented cycles, integer vectors on their vertices, and the
//! Euler form.

mod classify;
mod vector;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

pub use classify::{classify_by_definiteness, classify_by_graph, classify_quiver, Family, QuiverClass};
pub use vector::IntegerVector;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub tail: usize,
    pub head: usize,
}

/// A finite quiver with named vertices and arrows. Vertex declaration order is
/// the order used by every vector encoding.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    topo: Vec<usize>,
    connected: bool,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        let mut seen = HashSet::new();
        for v in &vertices {
            if !seen.insert(v.as_str()) {
                return Err(Error::DuplicateName {
                    kind: "vertex",
                    name: v.clone(),
                });
            }
        }
        let mut seen = HashSet::new();
        for a in &arrows {
            if !seen.insert(a.name.as_str()) {
                return Err(Error::DuplicateName {
                    kind: "arrow",
                    name: a.name.clone(),
                });
            }
            for end in [a.tail, a.head] {
                if end >= vertices.len() {
                    return Err(Error::DanglingEndpoint {
                        arrow: a.name.clone(),
                        vertex: format!("#{end}"),
                    });
                }
            }
        }
        let topo = topological_order(vertices.len(), &arrows).map_err(|v| Error::OrientedCycle(vertices[v].clone()))?;
        let connected = is_connected(vertices.len(), &arrows);
        Ok(Self {
            vertices,
            arrows,
            topo,
            connected,
        })
    }

    /// Builds a quiver from `(name, tail, head)` triples referring to vertex names.
    pub fn from_names(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<Self> {
        let index: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut list = Vec::with_capacity(arrows.len());
        for (name, t, h) in arrows {
            let lookup = |v: &str| {
                index.get(v).copied().ok_or_else(|| Error::DanglingEndpoint {
                    arrow: name.to_string(),
                    vertex: v.to_string(),
                })
            };
            list.push(Arrow {
                name: name.to_string(),
                tail: lookup(t)?,
                head: lookup(h)?,
            });
        }
        Self::new(vertices.iter().map(|s| s.to_string()).collect(), list)
    }

    /// Parses the line format: `v NAME`, `a NAME TAIL HEAD`, `#` comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut vertices: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut arrows = Vec::new();
        let mut arrow_names = HashSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = lineno + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["v", name] => {
                    if index.contains_key(*name) {
                        return Err(Error::DuplicateName {
                            kind: "vertex",
                            name: name.to_string(),
                        });
                    }
                    index.insert(name.to_string(), vertices.len());
                    vertices.push(name.to_string());
                }
                ["a", name, tail, head] => {
                    if !arrow_names.insert(name.to_string()) {
                        return Err(Error::DuplicateName {
                            kind: "arrow",
                            name: name.to_string(),
                        });
                    }
                    let lookup = |v: &str| {
                        index.get(v).copied().ok_or_else(|| Error::DanglingEndpoint {
                            arrow: name.to_string(),
                            vertex: v.to_string(),
                        })
                    };
                    arrows.push(Arrow {
                        name: name.to_string(),
                        tail: lookup(tail)?,
                        head: lookup(head)?,
                    });
                }
                _ => {
                    return Err(Error::Syntax {
                        line: lineno,
                        message: format!("expected `v NAME` or `a NAME TAIL HEAD`, found `{line}`"),
                    })
                }
            }
        }
        Self::new(vertices, arrows)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            let _ = writeln!(out, "v {v}");
        }
        for a in &self.arrows {
            let _ = writeln!(out, "a {} {} {}", a.name, self.vertices[a.tail], self.vertices[a.head]);
        }
        out
    }

    /// The generalized Kronecker quiver with `m` parallel arrows `1 -> 2`.
    pub fn kronecker(m: usize) -> Self {
        let arrows = (0..m)
            .map(|k| Arrow {
                name: arrow_label(k),
                tail: 0,
                head: 1,
            })
            .collect();
        Self::new(vec!["1".into(), "2".into()], arrows).expect("kronecker quiver is valid")
    }

    /// Equioriented type A path `1 -> 2 -> ... -> n`.
    pub fn path(n: usize) -> Self {
        let arrows = (1..n)
            .map(|k| Arrow {
                name: arrow_label(k - 1),
                tail: k - 1,
                head: k,
            })
            .collect();
        Self::new((1..=n).map(|k| k.to_string()).collect(), arrows).expect("path quiver is valid")
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, i: usize) -> &Arrow {
        &self.arrows[i]
    }

    pub fn vertex_name(&self, x: usize) -> &str {
        &self.vertices[x]
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn arrow_index(&self, name: &str) -> Result<usize> {
        self.arrows
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// A topological order of the vertices (tails before heads).
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn incoming(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&i| self.arrows[i].head == x)
    }

    pub fn outgoing(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&i| self.arrows[i].tail == x)
    }

    pub fn is_sink(&self, x: usize) -> bool {
        self.outgoing(x).next().is_none()
    }

    pub fn is_source(&self, x: usize) -> bool {
        self.incoming(x).next().is_none()
    }

    fn check_len(&self, v: &IntegerVector) -> Result<()> {
        if v.len() != self.num_vertices() {
            return Err(Error::DimensionMismatch {
                expected: self.num_vertices(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `<a, b> = sum_x a(x) b(x) - sum_arrows a(tail) b(head)`.
    pub fn euler_form(&self, a: &IntegerVector, b: &IntegerVector) -> Result<i64> {
        self.check_len(a)?;
        self.check_len(b)?;
        let diag: i64 = a.iter().zip(b.iter()).map(|(x, y)| x * y).sum();
        let off: i64 = self.arrows.iter().map(|ar| a[ar.tail] * b[ar.head]).sum();
        Ok(diag - off)
    }

    /// Matrix `E` with `<a, b> = a^T E b`.
    pub fn euler_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.num_vertices();
        let mut e = vec![vec![0; n]; n];
        for (x, row) in e.iter_mut().enumerate() {
            row[x] = 1;
        }
        for a in &self.arrows {
            e[a.tail][a.head] -= 1;
        }
        e
    }

    /// The weight `<alpha, .>`.
    pub fn weight_of_alpha(&self, alpha: &IntegerVector) -> Result<IntegerVector> {
        self.check_len(alpha)?;
        let mut sigma = alpha.clone();
        for a in &self.arrows {
            sigma[a.head] -= alpha[a.tail];
        }
        Ok(sigma)
    }

    /// The unique `alpha` with `<alpha, e_x> = sigma(x)` for every vertex.
    ///
    /// The Euler matrix is unitriangular in topological order, so the system
    /// is solved by forward substitution over the integers.
    pub fn alpha_of_weight(&self, sigma: &IntegerVector) -> Result<IntegerVector> {
        self.check_len(sigma)?;
        let mut alpha = IntegerVector::zeros(self.num_vertices());
        for &x in &self.topo {
            let inflow: i64 = self.incoming(x).map(|i| alpha[self.arrows[i].tail]).sum();
            alpha[x] = sigma[x] + inflow;
        }
        Ok(alpha)
    }

    /// Full subquiver on the given vertices (kept in declaration order) and
    /// the index of each new vertex in `self`.
    pub fn full_subquiver(&self, keep: &[bool]) -> (Quiver, Vec<usize>) {
        let map: Vec<usize> = (0..self.num_vertices()).filter(|&x| keep[x]).collect();
        let mut inverse = vec![usize::MAX; self.num_vertices()];
        for (new, &old) in map.iter().enumerate() {
            inverse[old] = new;
        }
        let arrows = self
            .arrows
            .iter()
            .filter(|a| keep[a.tail] && keep[a.head])
            .map(|a| Arrow {
                name: a.name.clone(),
                tail: inverse[a.tail],
                head: inverse[a.head],
            })
            .collect();
        let vertices = map.iter().map(|&x| self.vertices[x].clone()).collect();
        let q = Quiver::new(vertices, arrows).expect("full subquiver of a valid quiver is valid");
        (q, map)
    }

    /// Full subquiver on `{x : beta(x) > 0}` with its vertex correspondence.
    pub fn support_restrict(&self, beta: &IntegerVector) -> Result<(Quiver, Vec<usize>)> {
        self.check_len(beta)?;
        if !beta.is_nonnegative() {
            return Err(Error::NegativeDimension(beta.to_string()));
        }
        let keep: Vec<bool> = beta.iter().map(|&b| b > 0).collect();
        Ok(self.full_subquiver(&keep))
    }

    /// Same vertices, with every arrow touching `x` reversed.
    pub fn reverse_at(&self, x: usize) -> Quiver {
        let arrows = self
            .arrows
            .iter()
            .map(|a| {
                if a.tail == x || a.head == x {
                    Arrow {
                        name: a.name.clone(),
                        tail: a.head,
                        head: a.tail,
                    }
                } else {
                    a.clone()
                }
            })
            .collect();
        Quiver::new(self.vertices.clone(), arrows).expect("reflection at a sink or source keeps the quiver acyclic")
    }

    /// Whether the two quivers agree up to renaming vertices and arrows.
    pub fn is_isomorphic_to(&self, other: &Quiver) -> bool {
        let n = self.num_vertices();
        if n != other.num_vertices() || self.num_arrows() != other.num_arrows() || n > 9 {
            return n == other.num_vertices() && n == 0;
        }
        let count = |q: &Quiver| {
            let mut m = vec![vec![0usize; n]; n];
            for a in &q.arrows {
                m[a.tail][a.head] += 1;
            }
            m
        };
        let (ma, mb) = (count(self), count(other));
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            if (0..n).all(|i| (0..n).all(|j| ma[i][j] == mb[perm[i]][perm[j]])) {
                return true;
            }
            if !next_permutation(&mut perm) {
                return false;
            }
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

pub(crate) fn arrow_label(k: usize) -> String {
    if k < 26 {
        ((b'a' + k as u8) as char).to_string()
    } else {
        format!("a{k}")
    }
}

fn topological_order(n: usize, arrows: &[Arrow]) -> std::result::Result<Vec<usize>, usize> {
    let mut indeg = vec![0usize; n];
    for a in arrows {
        indeg[a.head] += 1;
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(x) = queue.pop_front() {
        order.push(x);
        for a in arrows.iter().filter(|a| a.tail == x) {
            indeg[a.head] -= 1;
            if indeg[a.head] == 0 {
                queue.push_back(a.head);
            }
        }
    }
    if order.len() < n {
        let stuck = (0..n).find(|&x| indeg[x] > 0).expect("some vertex lies on a cycle");
        return Err(stuck);
    }
    Ok(order)
}

fn is_connected(n: usize, arrows: &[Arrow]) -> bool {
    if n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for a in arrows {
            let other = if a.tail == x {
                a.head
            } else if a.head == x {
                a.tail
            } else {
                continue;
            };
            if !seen[other] {
                seen[other] = true;
                stack.push(other);
            }
        }
    }
    seen.into_iter().all(|s| s)
}
