//! Representations of quivers over the rationals.

mod decompose;
mod interaction;

use std::fmt::Write as _;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use decompose::{decompose, Decomposition, Summand};
pub use interaction::{
    for_each_interaction_entry, functional_determinant, has_simple_summand, hom_ext, interaction_matrix,
    schofield_eval, EntrySource, HomExt, InteractionShape,
};

use crate::error::{Error, Result};
use crate::linalg::{format_rational, parse_rational, rat, RationalMatrix};
use crate::quiver::{IntegerVector, Quiver};

/// One matrix per arrow; the matrix of `a` is `dim(head a) x dim(tail a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    quiver: Arc<Quiver>,
    dim: IntegerVector,
    maps: Vec<RationalMatrix>,
}

impl Representation {
    pub fn new(quiver: Arc<Quiver>, dim: IntegerVector, maps: Vec<RationalMatrix>) -> Result<Self> {
        check_dim(&quiver, &dim)?;
        if maps.len() != quiver.num_arrows() {
            return Err(Error::DimensionMismatch {
                expected: quiver.num_arrows(),
                found: maps.len(),
            });
        }
        for (a, m) in quiver.arrows().iter().zip(&maps) {
            let (r, c) = (dim[a.head] as usize, dim[a.tail] as usize);
            if m.rows() != r {
                return Err(Error::DimensionMismatch {
                    expected: r,
                    found: m.rows(),
                });
            }
            if m.cols() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    found: m.cols(),
                });
            }
        }
        Ok(Self { quiver, dim, maps })
    }

    pub fn zero(quiver: Arc<Quiver>, dim: IntegerVector) -> Result<Self> {
        check_dim(&quiver, &dim)?;
        let maps = quiver
            .arrows()
            .iter()
            .map(|a| RationalMatrix::zeros(dim[a.head] as usize, dim[a.tail] as usize))
            .collect();
        Ok(Self { quiver, dim, maps })
    }

    /// The simple representation `S_x`.
    pub fn simple(quiver: Arc<Quiver>, x: usize) -> Self {
        let dim = IntegerVector::unit(quiver.num_vertices(), x);
        Self::zero(quiver, dim).expect("unit vector is a dimension vector")
    }

    /// Entries uniform in `[-bound, bound]`, reproducible from `seed`.
    pub fn random(quiver: Arc<Quiver>, dim: &IntegerVector, seed: u64, bound: i64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(quiver, dim, &mut rng, bound)
    }

    pub fn random_with(quiver: Arc<Quiver>, dim: &IntegerVector, rng: &mut impl Rng, bound: i64) -> Result<Self> {
        check_dim(&quiver, dim)?;
        let maps = quiver
            .arrows()
            .iter()
            .map(|a| {
                RationalMatrix::from_fn(dim[a.head] as usize, dim[a.tail] as usize, |_, _| {
                    rat(rng.gen_range(-bound..=bound))
                })
            })
            .collect();
        Ok(Self {
            quiver,
            dim: dim.clone(),
            maps,
        })
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn dim(&self) -> &IntegerVector {
        &self.dim
    }

    /// Dimension at vertex `x`.
    pub fn dim_at(&self, x: usize) -> usize {
        self.dim[x] as usize
    }

    pub fn map(&self, a: usize) -> &RationalMatrix {
        &self.maps[a]
    }

    pub fn maps(&self) -> &[RationalMatrix] {
        &self.maps
    }

    pub fn is_thin(&self) -> bool {
        self.dim.iter().all(|&d| d <= 1)
    }

    pub(crate) fn same_quiver(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.quiver, &other.quiver) || self.quiver == other.quiver {
            Ok(())
        } else {
            Err(Error::QuiverMismatch)
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.same_quiver(other)?;
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| RationalMatrix::block_diagonal(&[a.clone(), b.clone()]))
            .collect();
        Ok(Self {
            quiver: self.quiver.clone(),
            dim: &self.dim + &other.dim,
            maps,
        })
    }

    /// The representation `g . V` with `(g . V)(a) = g(ha) V(a) g(ta)^{-1}`.
    pub fn conjugate(&self, g: &[RationalMatrix]) -> Result<Self> {
        let inverses = g
            .iter()
            .map(|m| {
                m.inverse()
                    .ok_or_else(|| Error::Precondition("change of basis is not invertible".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let maps = self
            .quiver
            .arrows()
            .iter()
            .zip(&self.maps)
            .map(|(a, m)| &(&g[a.head] * m) * &inverses[a.tail])
            .collect();
        Self::new(self.quiver.clone(), self.dim.clone(), maps)
    }

    /// Restriction to a full subquiver whose vertex `i` is vertex `map[i]` of `self`.
    pub fn restrict(&self, sub: Arc<Quiver>, map: &[usize]) -> Result<Self> {
        let dim = self.dim.restrict(map);
        let maps = sub
            .arrows()
            .iter()
            .map(|a| self.quiver.arrow_index(&a.name).map(|i| self.maps[i].clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(sub, dim, maps)
    }

    /// Extension by zero from a full subquiver of `parent`.
    pub fn extend_by_zero(&self, parent: Arc<Quiver>, map: &[usize]) -> Result<Self> {
        let dim = self.dim.extend(map, parent.num_vertices());
        let mut out = Self::zero(parent, dim)?;
        for (i, a) in self.quiver.arrows().iter().enumerate() {
            let j = out.quiver.arrow_index(&a.name)?;
            out.maps[j] = self.maps[i].clone();
        }
        Ok(out)
    }

    /// Parses the representation format against a known quiver.
    /// Returns the quiver file name recorded in the header as well.
    pub fn parse(text: &str, quiver: Arc<Quiver>) -> Result<(Self, String)> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or(Error::Syntax {
            line: 1,
            message: "missing `rep` header".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (file, dim) = match fields.as_slice() {
            ["rep", file, "dim", dim] => (file.to_string(), IntegerVector::parse(dim)?),
            ["rep", file, "dim"] => (file.to_string(), IntegerVector::default()),
            _ => {
                return Err(Error::Syntax {
                    line: hl,
                    message: "expected `rep QUIVERFILE dim d1,...,dn`".into(),
                })
            }
        };
        check_dim(&quiver, &dim)?;
        let mut maps: Vec<Option<RationalMatrix>> = vec![None; quiver.num_arrows()];
        while let Some((ln, line)) = lines.next() {
            let name = match line.split_whitespace().collect::<Vec<_>>().as_slice() {
                ["m", name] => name.to_string(),
                _ => {
                    return Err(Error::Syntax {
                        line: ln,
                        message: format!("expected `m ARROW`, found `{line}`"),
                    })
                }
            };
            let a = quiver.arrow_index(&name)?;
            if maps[a].is_some() {
                return Err(Error::DuplicateName { kind: "matrix", name });
            }
            let arrow = quiver.arrow(a);
            let (r, c) = (dim[arrow.head] as usize, dim[arrow.tail] as usize);
            let mut data = Vec::with_capacity(r * c);
            if c > 0 {
                for _ in 0..r {
                    let (rl, row) = lines.next().ok_or(Error::Syntax {
                        line: ln,
                        message: format!("matrix `{name}` needs {r} rows"),
                    })?;
                    let entries: Vec<&str> = row.split_whitespace().collect();
                    if entries.len() != c {
                        return Err(Error::Syntax {
                            line: rl,
                            message: format!("matrix `{name}` needs {c} entries per row, found {}", entries.len()),
                        });
                    }
                    for e in entries {
                        data.push(parse_rational(e, rl)?);
                    }
                }
            }
            maps[a] = Some(RationalMatrix::new(r, c, data)?);
        }
        let maps = maps
            .into_iter()
            .enumerate()
            .map(|(a, m)| {
                m.ok_or_else(|| Error::Syntax {
                    line: 0,
                    message: format!("no matrix given for arrow `{}`", quiver.arrow(a).name),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((Self::new(quiver, dim, maps)?, file))
    }

    pub fn to_text(&self, quiver_file: &str) -> String {
        let mut out = format!("rep {quiver_file} dim {}\n", self.dim);
        for (a, m) in self.quiver.arrows().iter().zip(&self.maps) {
            let _ = writeln!(out, "m {}", a.name);
            if m.cols() == 0 {
                continue;
            }
            for i in 0..m.rows() {
                let row: Vec<String> = m.row(i).iter().map(format_rational).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
        out
    }
}

fn check_dim(q: &Quiver, dim: &IntegerVector) -> Result<()> {
    if dim.len() != q.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: q.num_vertices(),
            found: dim.len(),
        });
    }
    if !dim.is_nonnegative() {
        return Err(Error::NegativeDimension(dim.to_string()));
    }
    Ok(())
}
