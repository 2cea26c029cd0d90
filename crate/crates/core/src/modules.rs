//! Finitely presented modules over Z[Z^r] and the coinvariant pushdown.
//!
//! The pushdown converts a module presentation plus a finite-index
//! sublattice P into an integer relation matrix for the coinvariants
//! M / M(P-1) as an abelian group. Because the coinvariant functor is right
//! exact, translating each relation by every coset representative yields a
//! complete relation set: no syzygy computation over the Laurent ring is
//! ever needed.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::groupring::{reduce_mod_lattice, LaurentElt, Sublattice};
use crate::intlinalg::{abelian_invariants, AbelianInvariants, IntMatrix};

/// Finitely presented Z[Z^r]-module: `gens` generators and a list of
/// relation vectors, each with `gens` Laurent components of rank `rank`.
/// An empty relation list presents a free module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulePresentation {
    rank: usize,
    gens: usize,
    relations: Vec<Vec<LaurentElt>>,
}

impl ModulePresentation {
    pub fn new(rank: usize, gens: usize, relations: Vec<Vec<LaurentElt>>) -> Result<Self> {
        for (index, rel) in relations.iter().enumerate() {
            if rel.len() != gens {
                return Err(Error::RelationShape {
                    index,
                    expected: gens,
                    got: rel.len(),
                });
            }
            for elt in rel {
                if elt.rank() != rank {
                    return Err(Error::RankMismatch {
                        left: elt.rank(),
                        right: rank,
                    });
                }
            }
        }
        Ok(ModulePresentation {
            rank,
            gens,
            relations,
        })
    }

    pub fn free(rank: usize, gens: usize) -> Self {
        ModulePresentation {
            rank,
            gens,
            relations: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &[Vec<LaurentElt>] {
        &self.relations
    }

    /// Largest l1 norm over the relations: for a relation vector the norm
    /// is the sum of the component norms. Zero when there are no relations.
    pub fn max_relation_norm(&self) -> BigInt {
        self.relations
            .iter()
            .map(|rel| rel.iter().map(LaurentElt::l1_norm).sum::<BigInt>())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Integer presentation of the coinvariants M (x)_{Z[P]} Z: one row per
    /// (relation, coset representative) pair, one column per
    /// (generator, coset representative) pair, both generator-major with
    /// cosets ordered by canonical representative.
    pub fn pushdown(&self, lattice: &Sublattice) -> Result<PushdownResult> {
        if self.rank != lattice.rank() {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: lattice.rank(),
            });
        }
        let table = lattice.coset_table()?;
        let m = table.size();
        let mut matrix = IntMatrix::zero(self.relations.len() * m, self.gens * m);
        for (ri, rel) in self.relations.iter().enumerate() {
            for (ci, rep) in table.representatives().iter().enumerate() {
                let row = ri * m + ci;
                for (j, component) in rel.iter().enumerate() {
                    let translated = component.mul_monomial(rep)?;
                    let reduced = reduce_mod_lattice(&translated, &table)?;
                    for (exps, coeff) in reduced.terms() {
                        let col = j * m + table.index_of(exps)?;
                        matrix.add_to(row, col, coeff);
                    }
                }
                // norm transport: reduction never inflates a row beyond its
                // source relation
                debug_assert!(
                    matrix.row(row).iter().map(num_traits::Signed::abs).sum::<BigInt>()
                        <= rel.iter().map(LaurentElt::l1_norm).sum(),
                    "pushdown row outgrew its relation norm"
                );
            }
        }
        let basis_labels = (0..self.gens)
            .flat_map(|j| {
                table
                    .representatives()
                    .iter()
                    .map(move |rep| (j, rep.clone()))
            })
            .collect();
        Ok(PushdownResult {
            matrix,
            basis_labels,
            m,
        })
    }

    /// Abelian invariants of the coinvariants M / M(P-1).
    pub fn coinvariant_invariants(&self, lattice: &Sublattice) -> Result<AbelianInvariants> {
        let pd = self.pushdown(lattice)?;
        abelian_invariants(&pd.matrix, self.gens * pd.m)
    }

    /// Parses the module file format: a header line `rank R gens S`
    /// followed by one relation per line with S semicolon-separated Laurent
    /// expressions.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty module text".into(),
        })?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        let (rank, gens) = match toks.as_slice() {
            ["rank", r, "gens", s] => {
                let rank = r.parse().map_err(|_| Error::Parse {
                    line: 1,
                    message: format!("invalid rank {r:?}"),
                })?;
                let gens = s.parse().map_err(|_| Error::Parse {
                    line: 1,
                    message: format!("invalid generator count {s:?}"),
                })?;
                (rank, gens)
            }
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    message: "header must be \"rank R gens S\"".into(),
                })
            }
        };
        let mut relations = Vec::new();
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split(';').collect();
            if parts.len() != gens {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected {gens} components, found {}", parts.len()),
                });
            }
            let rel = parts
                .iter()
                .map(|p| {
                    LaurentElt::parse(p.trim(), rank).map_err(|e| Error::Parse {
                        line: idx + 1,
                        message: e.to_string(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            relations.push(rel);
        }
        ModulePresentation::new(rank, gens, relations)
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = format!("rank {} gens {}\n", self.rank, self.gens);
        for rel in &self.relations {
            let line = rel
                .iter()
                .map(LaurentElt::to_string)
                .collect::<Vec<_>>()
                .join("; ");
            writeln!(out, "{line}").unwrap();
        }
        out
    }
}

/// Result of a coinvariant pushdown.
#[derive(Debug, Clone)]
pub struct PushdownResult {
    /// Rows: relations x cosets; columns: generators x cosets.
    pub matrix: IntMatrix,
    /// Column labels: (generator index, coset representative).
    pub basis_labels: Vec<(usize, Vec<i64>)>,
    /// Coset count.
    pub m: usize,
}
