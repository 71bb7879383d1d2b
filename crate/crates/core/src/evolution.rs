//! Evolution matrices `⟦U⟧^A_{ij} = U† (|j⟩⟨i|^A ⊗ 𝟙) U` and their calculus:
//! local evolution, trace-out, join, and the morphism `φ` to density
//! matrices against the fixed reference state `ρ₀ = |0…0⟩⟨0…0|`.
//!
//! Grid indices of a subsystem follow the global basis convention: the
//! lowest-numbered qubit of the subset is the most significant bit. For a
//! composite `AB` this puts `A`'s index first whenever `A`'s qubits precede
//! `B`'s; in general the bits of each part land on their own qubits'
//! positions.

use serde::{Deserialize, Serialize};

use crate::error::{argument, Error, Result};
use crate::linalg::{embed_gate, scatter, ComplexMatrix, QubitSubset, DEFAULT_TOL};
use crate::oracle::DensityMatrix;

/// Evolution matrix of subsystem `subset` of an `n`-qubit network.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EvolutionRepr", into = "EvolutionRepr")]
pub struct EvolutionMatrix {
    subset: QubitSubset,
    /// Row-major `d_A x d_A` grid of `2^n x 2^n` operators.
    cells: Vec<ComplexMatrix>,
}

#[derive(Serialize, Deserialize)]
struct EvolutionRepr {
    subset: Vec<usize>,
    n: usize,
    grid: Vec<Vec<ComplexMatrix>>,
}

impl TryFrom<EvolutionRepr> for EvolutionMatrix {
    type Error = Error;

    fn try_from(r: EvolutionRepr) -> Result<Self> {
        let subset = QubitSubset::new(r.n, r.subset)?;
        let d = subset.dim();
        if r.grid.len() != d || r.grid.iter().any(|row| row.len() != d) {
            return Err(argument(format!("evolution matrix grid must be {d}x{d}")));
        }
        let cells: Vec<ComplexMatrix> = r.grid.into_iter().flatten().collect();
        EvolutionMatrix::from_cells(subset, cells)
    }
}

impl From<EvolutionMatrix> for EvolutionRepr {
    fn from(em: EvolutionMatrix) -> Self {
        let d = em.dim();
        let n = em.n();
        let members = em.subset.members().to_vec();
        let mut cells = em.cells.into_iter();
        let grid = (0..d).map(|_| cells.by_ref().take(d).collect()).collect();
        EvolutionRepr { subset: members, n, grid }
    }
}

/// Largest violations of the three structural identities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    /// `max ‖grid[i][j]† − grid[j][i]‖`
    pub hermitian_pairing: f64,
    /// `‖Σ_i grid[i][i] − I‖`
    pub resolution_of_identity: f64,
    /// `max ‖grid[i][j]·grid[k][l] − δ_{il} grid[k][j]‖`
    pub product_relation: f64,
}

impl InvariantReport {
    pub fn holds(&self, pairing_tol: f64, product_tol: f64) -> bool {
        self.hermitian_pairing <= pairing_tol
            && self.resolution_of_identity <= pairing_tol
            && self.product_relation <= product_tol
    }

    pub fn max(&self) -> f64 {
        self.hermitian_pairing.max(self.resolution_of_identity).max(self.product_relation)
    }
}

impl EvolutionMatrix {
    /// Assembles an evolution matrix from its cells, checking only shapes.
    /// Use [`EvolutionMatrix::invariants`] to check the algebraic structure.
    pub fn from_cells(subset: QubitSubset, cells: Vec<ComplexMatrix>) -> Result<Self> {
        let d = subset.dim();
        if cells.len() != d * d {
            return Err(argument(format!("expected {} cells, got {}", d * d, cells.len())));
        }
        let full = 1usize << subset.n();
        if cells.iter().any(|m| !m.is_square() || m.rows() != full) {
            return Err(argument(format!("every cell must be {full}x{full}")));
        }
        Ok(EvolutionMatrix { subset, cells })
    }

    pub fn subset(&self) -> &QubitSubset {
        &self.subset
    }

    pub fn n(&self) -> usize {
        self.subset.n()
    }

    /// `d_A = 2^|A|`.
    pub fn dim(&self) -> usize {
        self.subset.dim()
    }

    pub fn cell(&self, i: usize, j: usize) -> &ComplexMatrix {
        &self.cells[i * self.dim() + j]
    }

    /// Max-norm distance over all cells; `None` if the subsets differ.
    pub fn distance(&self, other: &EvolutionMatrix) -> Option<f64> {
        (self.subset == other.subset).then(|| {
            self.cells.iter().zip(&other.cells).map(|(a, b)| a.max_diff(b)).fold(0.0, f64::max)
        })
    }

    /// Grid cell `(i, j)` with the largest deviation from `other`.
    pub fn worst_cell(&self, other: &EvolutionMatrix) -> Option<((usize, usize), f64)> {
        if self.subset != other.subset {
            return None;
        }
        let d = self.dim();
        self.cells
            .iter()
            .zip(&other.cells)
            .map(|(a, b)| a.max_diff(b))
            .enumerate()
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .map(|(idx, dev)| ((idx / d, idx % d), dev))
    }

    pub fn invariants(&self) -> InvariantReport {
        let d = self.dim();
        let full = 1usize << self.n();
        let mut pairing: f64 = 0.0;
        let mut diag_sum = ComplexMatrix::zeros(full, full);
        for i in 0..d {
            diag_sum = &diag_sum + self.cell(i, i);
            for j in i..d {
                pairing = pairing.max(self.cell(i, j).adjoint().max_diff(self.cell(j, i)));
            }
        }
        let resolution = diag_sum.max_diff(&ComplexMatrix::identity(full));
        let mut product: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let lhs = self.cell(i, j) * self.cell(k, l);
                        let dev = if i == l { lhs.max_diff(self.cell(k, j)) } else { lhs.max_norm() };
                        product = product.max(dev);
                    }
                }
            }
        }
        InvariantReport {
            hermitian_pairing: pairing,
            resolution_of_identity: resolution,
            product_relation: product,
        }
    }

    /// Errors with [`Error::Integrity`] unless the invariants hold
    /// (pairing/resolution within `1e-12`·scale, products within `1e-10`·scale,
    /// scale = `max(1, tol / 1e-10)`).
    pub fn check_invariants(&self, tol: f64) -> Result<InvariantReport> {
        let report = self.invariants();
        let scale = (tol / DEFAULT_TOL).max(1.0);
        if report.holds(1e-12 * scale, DEFAULT_TOL * scale) {
            Ok(report)
        } else {
            Err(Error::Integrity(format!(
                "evolution matrix on {} violates its invariants: {report:?}",
                self.subset
            )))
        }
    }
}

/// `⟦u⟧^A` for a unitary `u` on the full register.
pub fn build_evolution_matrix(u: &ComplexMatrix, a: &QubitSubset) -> Result<EvolutionMatrix> {
    let n = a.n();
    let full = 1usize << n;
    if !u.is_square() || u.rows() != full {
        return Err(argument(format!("expected a {full}x{full} unitary for {n} qubit(s)")));
    }
    let deviation = u.unitarity_deviation();
    if deviation > DEFAULT_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let d = a.dim();
    let comp = a.complement();
    let rests: Vec<usize> = (0..comp.dim()).map(|s| scatter(s, comp.members(), n)).collect();
    let spread: Vec<usize> = (0..d).map(|s| scatter(s, a.members(), n)).collect();

    // ⟦u⟧_{ij}[ℓ][k] = Σ_rest conj(u[(j,rest)][ℓ]) · u[(i,rest)][k]
    let mut cells = Vec::with_capacity(d * d);
    for &row_i in &spread {
        for &row_j in &spread {
            let mut m = ComplexMatrix::zeros(full, full);
            for &rest in &rests {
                let (ri, rj) = (row_i | rest, row_j | rest);
                for l in 0..full {
                    let left = u[(rj, l)].conj();
                    if left.norm_sqr() == 0.0 {
                        continue;
                    }
                    for k in 0..full {
                        m[(l, k)] += left * u[(ri, k)];
                    }
                }
            }
            cells.push(m);
        }
    }
    Ok(EvolutionMatrix { subset: a.clone(), cells })
}

/// `(V⟦U⟧)_{ij} = Σ_{mn} V_{im} ⟦U⟧_{mn} V†_{nj}` for a unitary `v` on `A`.
pub fn evolve_local(v: &ComplexMatrix, em: &EvolutionMatrix) -> Result<EvolutionMatrix> {
    let d = em.dim();
    if !v.is_square() || v.rows() != d {
        return Err(argument(format!("local operator must be {d}x{d} for subsystem {}", em.subset)));
    }
    let deviation = v.unitarity_deviation();
    if deviation > DEFAULT_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let full = 1usize << em.n();
    let mut cells = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut acc = ComplexMatrix::zeros(full, full);
            for m in 0..d {
                for nn in 0..d {
                    let coeff = v[(i, m)] * v[(j, nn)].conj();
                    if coeff.norm_sqr() == 0.0 {
                        continue;
                    }
                    acc = &acc + &em.cell(m, nn).scale(coeff);
                }
            }
            cells.push(acc);
        }
    }
    Ok(EvolutionMatrix { subset: em.subset.clone(), cells })
}

/// Positions (1-based, MSB first) of `part`'s qubits inside `whole`.
fn positions_within(part: &QubitSubset, whole: &QubitSubset) -> Vec<usize> {
    part.members().iter().map(|&q| whole.position(q).expect("part ⊆ whole") + 1).collect()
}

/// `(tr_B ⟦U⟧^{AB})_{ij} = Σ_k ⟦U⟧^{AB}_{ik;jk}`.
pub fn trace_out(em: &EvolutionMatrix, b: &QubitSubset) -> Result<EvolutionMatrix> {
    if !b.is_subset_of(&em.subset) {
        return Err(argument(format!("{b} is not contained in {}", em.subset)));
    }
    let s = &em.subset;
    let a = s.difference(b);
    let width = s.len();
    let a_pos = positions_within(&a, s);
    let b_pos = positions_within(b, s);
    let a_idx: Vec<usize> = (0..a.dim()).map(|i| scatter(i, &a_pos, width)).collect();
    let b_idx: Vec<usize> = (0..b.dim()).map(|k| scatter(k, &b_pos, width)).collect();
    let full = 1usize << em.n();
    let mut cells = Vec::with_capacity(a.dim() * a.dim());
    for &ai in &a_idx {
        for &aj in &a_idx {
            let mut acc = ComplexMatrix::zeros(full, full);
            for &bk in &b_idx {
                acc = &acc + em.cell(ai | bk, aj | bk);
            }
            cells.push(acc);
        }
    }
    Ok(EvolutionMatrix { subset: a, cells })
}

/// `(⟦U⟧^A ⊙ ⟦U⟧^B)_{ik;jl} = ⟦U⟧^A_{ij} ⟦U⟧^B_{kl}`.
///
/// Both operands must come from the same global unitary. That cannot be
/// decided from the local data; a mismatch only shows up as a violation of
/// the result's invariants.
pub fn join(ema: &EvolutionMatrix, emb: &EvolutionMatrix) -> Result<EvolutionMatrix> {
    if ema.n() != emb.n() {
        return Err(argument("evolution matrices belong to registers of different sizes"));
    }
    if !ema.subset.is_disjoint(&emb.subset) {
        return Err(argument(format!("{} and {} overlap", ema.subset, emb.subset)));
    }
    let s = ema.subset.union(&emb.subset);
    let width = s.len();
    let a_pos = positions_within(&ema.subset, &s);
    let b_pos = positions_within(&emb.subset, &s);
    let (da, db) = (ema.dim(), emb.dim());
    let d = s.dim();
    let full = 1usize << s.n();
    let mut cells = vec![ComplexMatrix::zeros(full, full); d * d];
    for i in 0..da {
        for j in 0..da {
            let (si, sj) = (scatter(i, &a_pos, width), scatter(j, &a_pos, width));
            for k in 0..db {
                for l in 0..db {
                    let row = si | scatter(k, &b_pos, width);
                    let col = sj | scatter(l, &b_pos, width);
                    cells[row * d + col] = ema.cell(i, j) * emb.cell(k, l);
                }
            }
        }
    }
    Ok(EvolutionMatrix { subset: s, cells })
}

/// Joins a list of evolution matrices on pairwise disjoint subsets.
pub fn join_all(ems: &[EvolutionMatrix]) -> Result<EvolutionMatrix> {
    let (first, rest) = ems.split_first().ok_or_else(|| argument("nothing to join"))?;
    rest.iter().try_fold(first.clone(), |acc, em| join(&acc, em))
}

/// `(φ⟦U⟧)_{ij} = tr(⟦U⟧_{ij} ρ₀)` with `ρ₀ = |0…0⟩⟨0…0|`, i.e. the top-left
/// entry of each cell.
pub fn morphism_phi(em: &EvolutionMatrix) -> Result<DensityMatrix> {
    let d = em.dim();
    let mut rho = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            rho[(i, j)] = em.cell(i, j)[(0, 0)];
        }
    }
    DensityMatrix::new(em.subset.clone(), rho)
}

/// `v` on subsystem `a`, identity elsewhere.
pub fn embed_local(v: &ComplexMatrix, a: &QubitSubset) -> Result<ComplexMatrix> {
    embed_gate(v, a.members(), a.n())
}
