//! Fermionic electronic-structure models and their qubit mapping.
//!
//! Spatial-orbital integrals use chemists' notation: the two-electron tensor
//! entry `g(p, q, r, s)` is `(pq|rs)`, symmetric under the eight index
//! permutations of real orbitals. The second-quantized Hamiltonian is
//!
//! ```text
//! H = sum_tu h_tu E_tu + 1/2 sum_tuvw g_tuvw e_tuvw + shift
//! E_tu = sum_s a+_{t,s} a_{u,s}
//! e_tuvw = sum_{s,s'} a+_{t,s} a+_{v,s'} a_{w,s'} a_{u,s}
//! ```
//!
//! Spin-orbitals interleave spin within each spatial orbital: spatial `t`
//! maps to qubits `2t` (up) and `2t + 1` (down), and qubit `q` is bit `q` of
//! the basis index. The Jordan-Wigner image of an annihilator is
//! `a_q = 1/2 (X_q + i Y_q) Z_{q-1} ... Z_0`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliOperator, PauliSum, PauliWord};

/// Spin-orbital index of `(spatial, spin)`; spin 0 is up, 1 is down.
pub fn spin_orbital(spatial: usize, spin: usize) -> usize {
    2 * spatial + spin
}

/// Spatial-orbital integrals plus the nuclear-repulsion/core scalar.
#[derive(Debug, Clone)]
pub struct MolecularIntegrals {
    orbital_count: usize,
    core_energy: f64,
    one_body: Vec<f64>,
    two_body: Vec<f64>,
}

impl MolecularIntegrals {
    /// Empty integral set over `orbital_count` spatial orbitals.
    pub fn new(orbital_count: usize, core_energy: f64) -> Result<Self> {
        if orbital_count == 0 || orbital_count > 32 {
            return Err(Error::Validation(format!(
                "orbital count {orbital_count} outside the supported 1..=32 range"
            )));
        }
        Ok(Self {
            orbital_count,
            core_energy,
            one_body: vec![0.0; orbital_count * orbital_count],
            two_body: vec![0.0; orbital_count.pow(4)],
        })
    }

    /// Number of spatial orbitals.
    pub fn orbital_count(&self) -> usize {
        self.orbital_count
    }

    /// Scalar core/nuclear-repulsion energy.
    pub fn core_energy(&self) -> f64 {
        self.core_energy
    }

    /// Sets the scalar core energy.
    pub fn set_core_energy(&mut self, value: f64) {
        self.core_energy = value;
    }

    /// One-body integral `h_pq`.
    pub fn h(&self, p: usize, q: usize) -> f64 {
        self.one_body[p * self.orbital_count + q]
    }

    /// Two-body integral `(pq|rs)` in chemists' notation.
    pub fn g(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let n = self.orbital_count;
        self.two_body[((p * n + q) * n + r) * n + s]
    }

    /// Sets `h_pq` (and `h_qp`).
    pub fn set_one_body(&mut self, p: usize, q: usize, value: f64) -> Result<()> {
        self.check_orbital(p)?;
        self.check_orbital(q)?;
        let n = self.orbital_count;
        self.one_body[p * n + q] = value;
        self.one_body[q * n + p] = value;
        Ok(())
    }

    /// Sets `(pq|rs)` along with its eight-fold symmetric images.
    pub fn set_two_body(&mut self, p: usize, q: usize, r: usize, s: usize, value: f64) -> Result<()> {
        for idx in [p, q, r, s] {
            self.check_orbital(idx)?;
        }
        let n = self.orbital_count;
        let mut put = |a: usize, b: usize, c: usize, d: usize| {
            self.two_body[((a * n + b) * n + c) * n + d] = value;
        };
        put(p, q, r, s);
        put(q, p, r, s);
        put(p, q, s, r);
        put(q, p, s, r);
        put(r, s, p, q);
        put(s, r, p, q);
        put(r, s, q, p);
        put(s, r, q, p);
        Ok(())
    }

    fn check_orbital(&self, p: usize) -> Result<()> {
        if p >= self.orbital_count {
            return Err(Error::Validation(format!(
                "orbital index {p} out of range ({} orbitals)",
                self.orbital_count
            )));
        }
        Ok(())
    }
}

/// Partition of the spatial orbitals into frozen doubly-occupied and active.
#[derive(Debug, Clone)]
pub struct ActiveSpaceSpec {
    /// Spatial orbitals kept doubly occupied and folded into the scalar shift.
    pub frozen: Vec<usize>,
    /// Spatial orbitals retained in the mapped Hamiltonian.
    pub active: Vec<usize>,
    /// Electrons distributed over the active orbitals.
    pub active_electrons: usize,
}

impl ActiveSpaceSpec {
    /// Everything active, nothing frozen.
    pub fn full(orbital_count: usize, electrons: usize) -> Self {
        Self { frozen: Vec::new(), active: (0..orbital_count).collect(), active_electrons: electrons }
    }

    /// Validates disjointness, index ranges, and electron capacity.
    pub fn validate(&self, orbital_count: usize) -> Result<()> {
        for &p in self.frozen.iter().chain(&self.active) {
            if p >= orbital_count {
                return Err(Error::Validation(format!(
                    "orbital {p} out of range ({orbital_count} orbitals)"
                )));
            }
        }
        for &f in &self.frozen {
            if self.active.contains(&f) {
                return Err(Error::Validation(format!("orbital {f} is both frozen and active")));
            }
        }
        let mut sorted_active = self.active.clone();
        sorted_active.sort_unstable();
        sorted_active.dedup();
        if sorted_active.len() != self.active.len() {
            return Err(Error::Validation("duplicate active orbital".into()));
        }
        if self.active.is_empty() {
            return Err(Error::Validation("active space must contain at least one orbital".into()));
        }
        if self.active_electrons > 2 * self.active.len() {
            return Err(Error::Validation(format!(
                "{} electrons cannot occupy {} active orbitals",
                self.active_electrons,
                self.active.len()
            )));
        }
        Ok(())
    }
}

/// Active-space Hamiltonian after mean-field elimination of frozen orbitals.
///
/// `scalar_shift` carries the core energy plus the frozen mean-field energy
/// `2 sum_i h_ii + sum_ij (2 (ii|jj) - (ij|ji))`; the embedding potential
/// `V_tu = sum_i (2 (tu|ii) - (ti|iu))` is folded into the active one-body
/// part.
#[derive(Debug, Clone)]
pub struct FrozenCoreHamiltonian {
    active_count: usize,
    one_body: Vec<f64>,
    two_body: Vec<f64>,
    scalar_shift: f64,
}

impl FrozenCoreHamiltonian {
    /// Assembles a Hamiltonian directly from active-space tensors.
    pub fn from_parts(
        active_count: usize,
        one_body: Vec<f64>,
        two_body: Vec<f64>,
        scalar_shift: f64,
    ) -> Result<Self> {
        if one_body.len() != active_count * active_count
            || two_body.len() != active_count.pow(4)
        {
            return Err(Error::Validation("tensor sizes do not match the active count".into()));
        }
        Ok(Self { active_count, one_body, two_body, scalar_shift })
    }

    /// Number of active spatial orbitals.
    pub fn active_count(&self) -> usize {
        self.active_count
    }

    /// Scalar shift (core energy plus frozen mean-field energy).
    pub fn scalar_shift(&self) -> f64 {
        self.scalar_shift
    }

    /// Effective one-body integral over active indices.
    pub fn h(&self, t: usize, u: usize) -> f64 {
        self.one_body[t * self.active_count + u]
    }

    /// Two-body integral `(tu|vw)` over active indices.
    pub fn g(&self, t: usize, u: usize, v: usize, w: usize) -> f64 {
        let n = self.active_count;
        self.two_body[((t * n + u) * n + v) * n + w]
    }
}

/// Mean-field elimination of the frozen orbitals.
pub fn freeze_core(
    integrals: &MolecularIntegrals,
    spec: &ActiveSpaceSpec,
) -> Result<FrozenCoreHamiltonian> {
    spec.validate(integrals.orbital_count())?;

    let mut frozen_energy = 0.0;
    for &i in &spec.frozen {
        frozen_energy += 2.0 * integrals.h(i, i);
        for &j in &spec.frozen {
            frozen_energy += 2.0 * integrals.g(i, i, j, j) - integrals.g(i, j, j, i);
        }
    }
    let scalar_shift = integrals.core_energy() + frozen_energy;

    let n_act = spec.active.len();
    let mut one_body = vec![0.0; n_act * n_act];
    for (t_new, &t) in spec.active.iter().enumerate() {
        for (u_new, &u) in spec.active.iter().enumerate() {
            let mut embedding = 0.0;
            for &i in &spec.frozen {
                embedding += 2.0 * integrals.g(t, u, i, i) - integrals.g(t, i, i, u);
            }
            one_body[t_new * n_act + u_new] = integrals.h(t, u) + embedding;
        }
    }

    let mut two_body = vec![0.0; n_act.pow(4)];
    for (t_new, &t) in spec.active.iter().enumerate() {
        for (u_new, &u) in spec.active.iter().enumerate() {
            for (v_new, &v) in spec.active.iter().enumerate() {
                for (w_new, &w) in spec.active.iter().enumerate() {
                    two_body[((t_new * n_act + u_new) * n_act + v_new) * n_act + w_new] =
                        integrals.g(t, u, v, w);
                }
            }
        }
    }

    FrozenCoreHamiltonian::from_parts(n_act, one_body, two_body, scalar_shift)
}

/// A single creation or annihilation operator on a spin-orbital index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Create(usize),
    Annihilate(usize),
}

impl Ladder {
    /// Spin-orbital index the operator acts on.
    pub fn index(self) -> usize {
        match self {
            Ladder::Create(q) | Ladder::Annihilate(q) => q,
        }
    }
}

/// One product of ladder operators with a real prefactor.
#[derive(Debug, Clone)]
pub struct FermionTerm {
    pub coefficient: f64,
    pub ops: Vec<Ladder>,
}

/// Jordan-Wigner image of a single ladder operator.
pub fn jw_ladder(qubit_count: usize, ladder: Ladder) -> Result<PauliSum> {
    let q = ladder.index();
    if q >= qubit_count {
        return Err(Error::Validation(format!(
            "spin-orbital {q} out of range for {qubit_count} qubits"
        )));
    }
    let mut x_letters = vec![Pauli::I; qubit_count];
    let mut y_letters = vec![Pauli::I; qubit_count];
    for lower in 0..q {
        x_letters[lower] = Pauli::Z;
        y_letters[lower] = Pauli::Z;
    }
    x_letters[q] = Pauli::X;
    y_letters[q] = Pauli::Y;

    let y_coeff = match ladder {
        Ladder::Annihilate(_) => Complex64::new(0.0, 0.5),
        Ladder::Create(_) => Complex64::new(0.0, -0.5),
    };
    let mut sum = PauliSum::zero(qubit_count)?;
    sum.add_term(PauliWord::from_letters(x_letters)?, Complex64::new(0.5, 0.0))?;
    sum.add_term(PauliWord::from_letters(y_letters)?, y_coeff)?;
    Ok(sum)
}

/// Jordan-Wigner image of a product of ladder operators (left to right).
pub fn jw_ladder_product(qubit_count: usize, ops: &[Ladder]) -> Result<PauliSum> {
    let mut acc = PauliSum::scalar(qubit_count, Complex64::new(1.0, 0.0))?;
    for &op in ops {
        acc = acc.mul(&jw_ladder(qubit_count, op)?)?;
    }
    Ok(acc)
}

/// Jordan-Wigner image of a real combination of ladder products.
pub fn jw_terms(qubit_count: usize, terms: &[FermionTerm]) -> Result<PauliSum> {
    let mut acc = PauliSum::zero(qubit_count)?;
    for term in terms {
        let product = jw_ladder_product(qubit_count, &term.ops)?;
        acc = acc.add_scaled(&product, Complex64::new(term.coefficient, 0.0))?;
    }
    Ok(acc)
}

/// Maps an active-space Hamiltonian onto qubits via Jordan-Wigner.
///
/// The scalar shift rides on the identity word, so eigenvalues of the result
/// are total electronic energies (plus core) directly.
pub fn jordan_wigner(hamiltonian: &FrozenCoreHamiltonian) -> Result<PauliOperator> {
    let n = hamiltonian.active_count();
    let qubit_count = 2 * n;
    let mut sum = PauliSum::scalar(qubit_count, Complex64::new(hamiltonian.scalar_shift(), 0.0))?;

    for t in 0..n {
        for u in 0..n {
            let coeff = hamiltonian.h(t, u);
            if coeff == 0.0 {
                continue;
            }
            for spin in 0..2 {
                let ops = [
                    Ladder::Create(spin_orbital(t, spin)),
                    Ladder::Annihilate(spin_orbital(u, spin)),
                ];
                let product = jw_ladder_product(qubit_count, &ops)?;
                sum = sum.add_scaled(&product, Complex64::new(coeff, 0.0))?;
            }
        }
    }

    for t in 0..n {
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    let coeff = hamiltonian.g(t, u, v, w);
                    if coeff == 0.0 {
                        continue;
                    }
                    for spin_a in 0..2 {
                        for spin_b in 0..2 {
                            let ops = [
                                Ladder::Create(spin_orbital(t, spin_a)),
                                Ladder::Create(spin_orbital(v, spin_b)),
                                Ladder::Annihilate(spin_orbital(w, spin_b)),
                                Ladder::Annihilate(spin_orbital(u, spin_a)),
                            ];
                            let product = jw_ladder_product(qubit_count, &ops)?;
                            sum = sum.add_scaled(&product, Complex64::new(0.5 * coeff, 0.0))?;
                        }
                    }
                }
            }
        }
    }

    sum.into_hermitian()
}

/// Total-spin operator `S^2 = S- S+ + S_z (S_z + 1)` over `orbitals` spatial
/// orbitals (2 * orbitals qubits).
pub fn s_squared_operator(orbitals: usize) -> Result<PauliOperator> {
    if orbitals == 0 {
        return Err(Error::Validation("spin operator needs at least one orbital".into()));
    }
    let qubit_count = 2 * orbitals;

    // S- S+ = sum_tu a+_{t,dn} a_{t,up} a+_{u,up} a_{u,dn}.
    let mut lowering_raising = PauliSum::zero(qubit_count)?;
    for t in 0..orbitals {
        for u in 0..orbitals {
            let ops = [
                Ladder::Create(spin_orbital(t, 1)),
                Ladder::Annihilate(spin_orbital(t, 0)),
                Ladder::Create(spin_orbital(u, 0)),
                Ladder::Annihilate(spin_orbital(u, 1)),
            ];
            let product = jw_ladder_product(qubit_count, &ops)?;
            lowering_raising = lowering_raising.add_scaled(&product, Complex64::new(1.0, 0.0))?;
        }
    }

    // S_z = 1/2 sum_t (n_{t,up} - n_{t,dn}).
    let mut sz = PauliSum::zero(qubit_count)?;
    for t in 0..orbitals {
        for (spin, sign) in [(0, 0.5), (1, -0.5)] {
            let ops = [
                Ladder::Create(spin_orbital(t, spin)),
                Ladder::Annihilate(spin_orbital(t, spin)),
            ];
            let product = jw_ladder_product(qubit_count, &ops)?;
            sz = sz.add_scaled(&product, Complex64::new(sign, 0.0))?;
        }
    }

    let sz_squared = sz.mul(&sz)?;
    let total = lowering_raising
        .add_scaled(&sz_squared, Complex64::new(1.0, 0.0))?
        .add_scaled(&sz, Complex64::new(1.0, 0.0))?;
    total.into_hermitian()
}

/// Total particle-number operator over `spin_orbitals` modes.
pub fn total_number_operator(spin_orbitals: usize) -> Result<PauliOperator> {
    let mut sum = PauliSum::zero(spin_orbitals)?;
    for q in 0..spin_orbitals {
        let product =
            jw_ladder_product(spin_orbitals, &[Ladder::Create(q), Ladder::Annihilate(q)])?;
        sum = sum.add_scaled(&product, Complex64::new(1.0, 0.0))?;
    }
    sum.into_hermitian()
}

/// Spin-projection operator `S_z` over `orbitals` spatial orbitals.
pub fn sz_operator(orbitals: usize) -> Result<PauliOperator> {
    let qubit_count = 2 * orbitals;
    let mut sum = PauliSum::zero(qubit_count)?;
    for t in 0..orbitals {
        for (spin, sign) in [(0, 0.5), (1, -0.5)] {
            let ops = [
                Ladder::Create(spin_orbital(t, spin)),
                Ladder::Annihilate(spin_orbital(t, spin)),
            ];
            let product = jw_ladder_product(qubit_count, &ops)?;
            sum = sum.add_scaled(&product, Complex64::new(sign, 0.0))?;
        }
    }
    sum.into_hermitian()
}

/// An anti-Hermitian excitation generator `t - t†` as a ladder-term bundle.
#[derive(Debug, Clone)]
pub struct GuccsdGenerator {
    /// Spin-orbital excitation label, e.g. `s:0->2` or `d:(1,0)->(3,2)`.
    pub label: String,
    /// The bundle `t - t†`, one [`FermionTerm`] per direction.
    pub terms: Vec<FermionTerm>,
}

impl GuccsdGenerator {
    /// Jordan-Wigner rotation coefficients of the bundle: pairs `(P, c)` such
    /// that the generator equals `-i * sum c P` (see
    /// [`PauliSum::into_rotation_coefficients`]).
    pub fn jw_rotation_coefficients(&self, qubit_count: usize) -> Result<Vec<(PauliWord, f64)>> {
        jw_terms(qubit_count, &self.terms)?.into_rotation_coefficients()
    }
}

/// Enumerates generalized-UCCSD generators over `active_orbitals` spatial
/// orbitals: all spin-conserving singles and doubles between distinct
/// spin-orbital index pairs, deduplicated by the bundle's antisymmetry.
///
/// Order is deterministic: all singles first (ascending by target, source,
/// spin channel), then doubles (ascending by creation pair, annihilation
/// pair). Bundles that vanish identically (creation pair equal to the
/// annihilation pair) are excluded.
pub fn enumerate_guccsd_generators(active_orbitals: usize) -> Result<Vec<GuccsdGenerator>> {
    if active_orbitals == 0 {
        return Err(Error::Validation("generator enumeration needs at least one orbital".into()));
    }
    let mut generators = Vec::new();

    // Generalized singles: same-spin spatial pairs p > q.
    for p in 1..active_orbitals {
        for q in 0..p {
            for spin in 0..2 {
                let hi = spin_orbital(p, spin);
                let lo = spin_orbital(q, spin);
                generators.push(GuccsdGenerator {
                    label: format!("s:{lo}->{hi}"),
                    terms: vec![
                        FermionTerm {
                            coefficient: 1.0,
                            ops: vec![Ladder::Create(hi), Ladder::Annihilate(lo)],
                        },
                        FermionTerm {
                            coefficient: -1.0,
                            ops: vec![Ladder::Create(lo), Ladder::Annihilate(hi)],
                        },
                    ],
                });
            }
        }
    }

    // Generalized doubles: spin-conserving pairs of distinct spin-orbital
    // pairs; requiring creation pair > annihilation pair (lexicographic)
    // removes the Hermitian self-pairs and the double counting from
    // `(t - t†)` antisymmetry.
    let spin_orbital_count = 2 * active_orbitals;
    let mut pairs = Vec::new();
    for hi in 1..spin_orbital_count {
        for lo in 0..hi {
            pairs.push((hi, lo));
        }
    }
    let up_count = |pair: (usize, usize)| (pair.0 % 2 == 0) as usize + (pair.1 % 2 == 0) as usize;
    for (ci, &create) in pairs.iter().enumerate() {
        for &annihilate in pairs.iter().take(ci) {
            if up_count(create) != up_count(annihilate) {
                continue;
            }
            let (p1, p2) = create;
            let (q1, q2) = annihilate;
            generators.push(GuccsdGenerator {
                label: format!("d:({q1},{q2})->({p1},{p2})"),
                terms: vec![
                    FermionTerm {
                        coefficient: 1.0,
                        ops: vec![
                            Ladder::Create(p1),
                            Ladder::Create(p2),
                            Ladder::Annihilate(q2),
                            Ladder::Annihilate(q1),
                        ],
                    },
                    FermionTerm {
                        coefficient: -1.0,
                        ops: vec![
                            Ladder::Create(q1),
                            Ladder::Create(q2),
                            Ladder::Annihilate(p2),
                            Ladder::Annihilate(p1),
                        ],
                    },
                ],
            });
        }
    }

    Ok(generators)
}
