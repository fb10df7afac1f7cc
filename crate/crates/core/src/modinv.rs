//! Invariants of finitely presented modules over Z\[a\]/(a^n - 1), and the
//! specific stable-isomorphism obstructions the decision pipeline needs:
//! torsion subgroups, the a-action on torsion socles, and for n = 2 the
//! decomposition type of the torsion-free part and the presence of a
//! trivial direct summand Z.

use crate::ring::{CyclicRingElt, RingMatrix, RingScalar};
use crate::snf::{kernel_basis, smith_normal_form, IntMat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModuleError {
    #[error("operation requires modulus 2, module has modulus {0}")]
    WrongModulus(usize),
    #[error("cannot compare modules over different moduli ({0} vs {1})")]
    ModulusMismatch(usize, usize),
}

/// Finitely presented module over Z\[a\]/(a^n - 1). Rows index generators,
/// columns are relations.
#[derive(Debug, Clone)]
pub struct FPModule {
    pub n: usize,
    pub presentation: RingMatrix<CyclicRingElt>,
}

impl FPModule {
    pub fn new(n: usize, presentation: RingMatrix<CyclicRingElt>) -> FPModule {
        FPModule { n, presentation }
    }

    /// Build from a matrix whose rows are the relations (the Fox
    /// Jacobian convention); transposes into the column convention.
    pub fn from_relation_rows(n: usize, rows: &RingMatrix<CyclicRingElt>) -> FPModule {
        let mut p = RingMatrix::filled(rows.cols, rows.rows, CyclicRingElt::zero(n));
        for i in 0..rows.rows {
            for j in 0..rows.cols {
                p[(j, i)] = rows[(i, j)].clone();
            }
        }
        FPModule { n, presentation: p }
    }

    /// The module presented by the conjugate transpose of this module's
    /// presentation matrix (the duality partner of the augmentation
    /// ideal when `self` presents it). `w` is the sign of the character
    /// on a.
    pub fn conjugate_partner(&self, w: i8) -> FPModule {
        FPModule { n: self.n, presentation: self.presentation.conjugate_transpose(&w) }
    }

    /// Direct sum (block diagonal presentation).
    pub fn direct_sum(&self, other: &FPModule) -> FPModule {
        assert_eq!(self.n, other.n);
        let zero = CyclicRingElt::zero(self.n);
        let (g1, r1) = (self.presentation.rows, self.presentation.cols);
        let (g2, r2) = (other.presentation.rows, other.presentation.cols);
        let mut p = RingMatrix::filled(g1 + g2, r1 + r2, zero);
        for i in 0..g1 {
            for j in 0..r1 {
                p[(i, j)] = self.presentation[(i, j)].clone();
            }
        }
        for i in 0..g2 {
            for j in 0..r2 {
                p[(g1 + i, r1 + j)] = other.presentation[(i, j)].clone();
            }
        }
        FPModule { n: self.n, presentation: p }
    }

    /// Free module R^k.
    pub fn free(n: usize, k: usize) -> FPModule {
        FPModule { n, presentation: RingMatrix::filled(k, 0, CyclicRingElt::zero(n)) }
    }

    /// Cyclic module R/(ideal generated by the given elements).
    pub fn cyclic_quotient(n: usize, relators: &[CyclicRingElt]) -> FPModule {
        let mut p = RingMatrix::filled(1, relators.len(), CyclicRingElt::zero(n));
        for (j, r) in relators.iter().enumerate() {
            p[(0, j)] = r.clone();
        }
        FPModule { n, presentation: p }
    }

    /// Z with the trivial action: R/(a - 1).
    pub fn trivial_z(n: usize) -> FPModule {
        let a_minus_1 = CyclicRingElt::monomial(n, 1, 1).sub(&CyclicRingElt::one(n));
        Self::cyclic_quotient(n, &[a_minus_1])
    }

    /// Z^w (n = 2): R/(a + 1).
    pub fn twisted_z() -> FPModule {
        let a_plus_1 = CyclicRingElt::monomial(2, 1, 1).add(&CyclicRingElt::one(2));
        Self::cyclic_quotient(2, &[a_plus_1])
    }

    /// Z/m with the action a = c: R/(m, a - c).
    pub fn torsion_with_action(n: usize, m: i64, c: i64) -> FPModule {
        let rel_m = CyclicRingElt::integer(n, m);
        let rel_a = CyclicRingElt::monomial(n, 1, 1).sub(&CyclicRingElt::integer(n, c));
        Self::cyclic_quotient(n, &[rel_m, rel_a])
    }

    /// Flatten to an integer presentation: each ring generator becomes n
    /// integer generators, each relation n integer relations, and the
    /// a-action is the cyclic coordinate shift.
    fn flatten(&self) -> IntMat {
        let (g, r, n) = (self.presentation.rows, self.presentation.cols, self.n);
        let mut m = IntMat::zero(g * n, r * n);
        for i in 0..g {
            for j in 0..r {
                let entry = &self.presentation[(i, j)];
                for t in 0..n {
                    for u in 0..n {
                        // coefficient of a^u in a^t * entry
                        let src = (u + n - t) % n;
                        m[(i * n + u, j * n + t)] = entry.coeffs[src].clone();
                    }
                }
            }
        }
        m
    }

    /// The a-action on the flattened generators (a permutation matrix).
    fn shift_matrix(&self) -> IntMat {
        let (g, n) = (self.presentation.rows, self.n);
        let mut s = IntMat::zero(g * n, g * n);
        for i in 0..g {
            for t in 0..n {
                s[(i * n + (t + 1) % n, i * n + t)] = BigInt::one();
            }
        }
        s
    }
}

/// Invariants extracted from a finitely presented module.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleInvariants {
    pub n: usize,
    pub free_rank: usize,
    /// prime-power cyclic orders, sorted
    pub torsion: Vec<u64>,
    /// a-action on the torsion-free quotient (free_rank x free_rank)
    pub action_on_free: Vec<Vec<BigInt>>,
    /// per prime p: the rank of (action - c id) on the p-socle for each
    /// c in F_p, as (c, rank) pairs in order of c
    pub torsion_action_profile: BTreeMap<u64, Vec<(u64, usize)>>,
    /// n = 2 only: multiplicities (alpha, beta, gamma) of R, Z, Z^w in
    /// the torsion-free part
    pub zw_counts: Option<(usize, usize, usize)>,
    /// n = 2 only: is the trivial module Z a direct summand
    pub has_trivial_z_summand: Option<bool>,
}

fn factor_prime_powers(mut d: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= d {
        if d % p == 0 {
            let mut q = 1;
            while d % p == 0 {
                d /= p;
                q *= p;
            }
            out.push(q);
        }
        p += 1;
    }
    if d > 1 {
        out.push(d);
    }
    out
}

fn smallest_prime_factor(q: u64) -> u64 {
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            return p;
        }
        p += 1;
    }
    q
}

/// Rank of a matrix over F_p (Gaussian elimination).
fn rank_mod_p(m: &[Vec<u64>], p: u64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut a: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| a[r][col] % p != 0) else { continue };
        a.swap(rank, pivot);
        let inv = mod_inverse(a[rank][col], p);
        for c in col..cols {
            a[rank][c] = a[rank][c] * inv % p;
        }
        for r in 0..rows {
            if r != rank && a[r][col] != 0 {
                let f = a[r][col];
                for c in col..cols {
                    a[r][c] = (a[r][c] + (p - f) % p * a[rank][c]) % p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Compute the full invariant set of a finitely presented module.
pub fn module_invariants(m: &FPModule) -> ModuleInvariants {
    let flat = m.flatten();
    let total = flat.rows;
    let snf = smith_normal_form(&flat);
    let mut diag: Vec<BigInt> = snf.diagonal();
    diag.resize(total, BigInt::zero());

    // the cokernel in z = u x coordinates has relations d_i z_i = 0;
    // coordinates with d_i = 1 are dead, d_i = 0 are free
    let free: Vec<usize> = (0..total).filter(|&i| diag[i].is_zero()).collect();
    let torsion_idx: Vec<usize> =
        (0..total).filter(|&i| !diag[i].is_one() && !diag[i].is_zero()).collect();

    // transport the shift action: rho = u * s * u_inv
    let rho = snf.u.mul(&m.shift_matrix()).mul(&snf.u_inv);
    // well-definedness: torsion coordinates cannot leak into free ones
    for &f in &free {
        for &t in &torsion_idx {
            assert!(
                (&rho[(f, t)] * &diag[t]).is_zero(),
                "action not well defined on the cokernel"
            );
        }
    }

    let free_rank = free.len();
    let action_on_free: Vec<Vec<BigInt>> =
        free.iter().map(|&i| free.iter().map(|&j| rho[(i, j)].clone()).collect()).collect();

    let mut torsion: Vec<u64> = Vec::new();
    for &i in &torsion_idx {
        let d = diag[i].to_u64().expect("torsion order fits in u64");
        torsion.extend(factor_prime_powers(d));
    }
    torsion.sort_unstable();

    let mut primes: Vec<u64> = torsion.iter().map(|&q| smallest_prime_factor(q)).collect();
    primes.sort_unstable();
    primes.dedup();

    let mut torsion_action_profile = BTreeMap::new();
    for &p in &primes {
        let pb = BigInt::from(p);
        let socle: Vec<usize> =
            torsion_idx.iter().copied().filter(|&i| (&diag[i] % &pb).is_zero()).collect();
        // socle basis vectors are (d_i/p) z_i; the coefficient of a * s_i
        // on s_j is ((d_i/p) rho_ji mod d_j) / (d_j/p)
        let mut act: Vec<Vec<u64>> = vec![vec![0; socle.len()]; socle.len()];
        for (col, &i) in socle.iter().enumerate() {
            let scale_i = &diag[i] / &pb;
            for (row, &j) in socle.iter().enumerate() {
                let raw = (&scale_i * &rho[(j, i)]).mod_floor(&diag[j]);
                let scale_j = &diag[j] / &pb;
                let (q, rem) = raw.div_rem(&scale_j);
                assert!(rem.is_zero(), "socle is not preserved by the action");
                act[row][col] = q.mod_floor(&pb).to_u64().unwrap();
            }
            for &j in &torsion_idx {
                if socle.contains(&j) {
                    continue;
                }
                let raw = (&scale_i * &rho[(j, i)]).mod_floor(&diag[j]);
                assert!(raw.is_zero(), "socle maps outside the p-torsion");
            }
        }
        let mut ranks = Vec::new();
        for c in 0..p {
            let shifted: Vec<Vec<u64>> = act
                .iter()
                .enumerate()
                .map(|(r, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(cidx, &v)| if r == cidx { (v + p - c) % p } else { v })
                        .collect()
                })
                .collect();
            ranks.push((c, rank_mod_p(&shifted, p)));
        }
        torsion_action_profile.insert(p, ranks);
    }

    let (zw_counts, has_trivial_z_summand) = if m.n == 2 {
        let zw = zw_decomposition(&action_on_free, free_rank);
        let ztriv = has_z_summand(&rho, &diag, &free, total);
        (Some(zw), Some(ztriv))
    } else {
        (None, None)
    };

    ModuleInvariants {
        n: m.n,
        free_rank,
        torsion,
        action_on_free,
        torsion_action_profile,
        zw_counts,
        has_trivial_z_summand,
    }
}

/// Decompose a Z\[Z/2\]-lattice given by an involution matrix into
/// multiplicities of R, Z and Z^w: the fixed and anti-fixed sublattices
/// span with index 2^alpha, each R summand contributing one factor of 2.
fn zw_decomposition(action: &[Vec<BigInt>], rank: usize) -> (usize, usize, usize) {
    if rank == 0 {
        return (0, 0, 0);
    }
    let mut rho = IntMat::zero(rank, rank);
    for i in 0..rank {
        for j in 0..rank {
            rho[(i, j)] = action[i][j].clone();
        }
    }
    assert_eq!(rho.mul(&rho), IntMat::identity(rank), "free-part action must be an involution");
    let mut minus = rho.clone();
    let mut plus = rho.clone();
    for i in 0..rank {
        let m = &minus[(i, i)] - BigInt::one();
        minus[(i, i)] = m;
        let p = &plus[(i, i)] + BigInt::one();
        plus[(i, i)] = p;
    }
    let fixed = kernel_basis(&minus);
    let anti = kernel_basis(&plus);
    let cols = fixed.len() + anti.len();
    let mut stack = IntMat::zero(rank, cols);
    for (j, v) in fixed.iter().chain(anti.iter()).enumerate() {
        for i in 0..rank {
            stack[(i, j)] = v[i].clone();
        }
    }
    let snf = smith_normal_form(&stack);
    assert_eq!(snf.rank(), rank, "fixed and anti-fixed parts must span rationally");
    let two = BigInt::from(2);
    let diag = snf.diagonal();
    assert!(
        diag.iter().all(|d| d.is_one() || *d == two),
        "index over the fixed/anti-fixed span must be a 2-group"
    );
    let alpha = diag.iter().filter(|d| **d == two).count();
    (alpha, fixed.len() - alpha, anti.len() - alpha)
}

/// Is the trivial module Z a direct summand? True iff some a-invariant
/// functional pairs to 1 with some a-fixed element; decided by the
/// content of the pairing matrix between invariant functionals on
/// M/torsion and the free projection of the fixed submodule.
fn has_z_summand(rho: &IntMat, diag: &[BigInt], free: &[usize], total: usize) -> bool {
    if free.is_empty() {
        return false;
    }
    // invariant functionals on the free quotient: kernel of (rho_free^T - I)
    let rank = free.len();
    let mut rt = IntMat::zero(rank, rank);
    for (i, &fi) in free.iter().enumerate() {
        for (j, &fj) in free.iter().enumerate() {
            rt[(i, j)] = rho[(fj, fi)].clone();
        }
    }
    for i in 0..rank {
        let v = &rt[(i, i)] - BigInt::one();
        rt[(i, i)] = v;
    }
    let functionals = kernel_basis(&rt);
    if functionals.is_empty() {
        return false;
    }

    // fixed submodule: kernel of [rho - I | -D] picks x with
    // (rho - I) x inside the relation lattice (dead coordinates with
    // d = 1 count: they are zero in the cokernel)
    let torsion_cols: Vec<usize> = (0..total).filter(|&i| !diag[i].is_zero()).collect();
    let mut sys = IntMat::zero(total, total + torsion_cols.len());
    for i in 0..total {
        for j in 0..total {
            sys[(i, j)] = rho[(i, j)].clone();
        }
        let v = &sys[(i, i)] - BigInt::one();
        sys[(i, i)] = v;
    }
    for (k, &t) in torsion_cols.iter().enumerate() {
        sys[(t, total + k)] = -diag[t].clone();
    }
    let fixed_vectors = kernel_basis(&sys);

    let mut content = BigInt::zero();
    for phi in &functionals {
        for x in &fixed_vectors {
            let mut pairing = BigInt::zero();
            for (i, &fi) in free.iter().enumerate() {
                pairing += &phi[i] * &x[fi];
            }
            content = content.gcd(&pairing);
        }
    }
    content.is_one()
}

/// Is the trivial module Z a direct summand of a module over Z\[Z/2\]?
pub fn has_trivial_z_summand(m: &FPModule) -> Result<bool, ModuleError> {
    if m.n != 2 {
        return Err(ModuleError::WrongModulus(m.n));
    }
    Ok(module_invariants(m).has_trivial_z_summand.expect("computed for n = 2"))
}

/// Why two modules cannot be stably isomorphic. Absence of a witness is
/// not a proof of stable isomorphism.
#[derive(Debug, Clone, PartialEq)]
pub enum ObstructionWitness {
    TorsionMismatch { left: Vec<u64>, right: Vec<u64> },
    TorsionActionMismatch { p: u64, c: u64, rank_left: usize, rank_right: usize },
    ZSummandAsymmetry { left_has_z: bool, right_has_z: bool },
    TorsionFreeTypeMismatch { left_zw: (usize, usize, usize), right_zw: (usize, usize, usize) },
}

impl ObstructionWitness {
    pub fn describe(&self) -> String {
        match self {
            ObstructionWitness::TorsionMismatch { left, right } => {
                format!("integer torsion differs: {left:?} vs {right:?}")
            }
            ObstructionWitness::TorsionActionMismatch { p, c, rank_left, rank_right } => format!(
                "on the {p}-torsion socle, rank(action - {c}) is {rank_left} on the I side and {rank_right} on the J side"
            ),
            ObstructionWitness::ZSummandAsymmetry { left_has_z, right_has_z } => format!(
                "the trivial summand Z is present on exactly one side (I: {left_has_z}, J: {right_has_z})"
            ),
            ObstructionWitness::TorsionFreeTypeMismatch { left_zw, right_zw } => format!(
                "torsion-free types (R,Z,Zw multiplicities) differ stably: {left_zw:?} vs {right_zw:?}"
            ),
        }
    }
}

/// Compare stable-isomorphism invariants. `None` does not certify
/// stable isomorphism; any `Some` witness refutes it.
pub fn compare_invariants(
    left: &ModuleInvariants,
    right: &ModuleInvariants,
) -> Result<Option<ObstructionWitness>, ModuleError> {
    if left.n != right.n {
        return Err(ModuleError::ModulusMismatch(left.n, right.n));
    }
    if left.torsion != right.torsion {
        return Ok(Some(ObstructionWitness::TorsionMismatch {
            left: left.torsion.clone(),
            right: right.torsion.clone(),
        }));
    }
    for (p, ranks_l) in &left.torsion_action_profile {
        if let Some(ranks_r) = right.torsion_action_profile.get(p) {
            for (&(c, rl), &(_, rr)) in ranks_l.iter().zip(ranks_r.iter()) {
                if rl != rr {
                    return Ok(Some(ObstructionWitness::TorsionActionMismatch {
                        p: *p,
                        c,
                        rank_left: rl,
                        rank_right: rr,
                    }));
                }
            }
        }
    }
    if left.n == 2 {
        let (zl, zr) = (left.has_trivial_z_summand.unwrap(), right.has_trivial_z_summand.unwrap());
        if zl != zr {
            return Ok(Some(ObstructionWitness::ZSummandAsymmetry { left_has_z: zl, right_has_z: zr }));
        }
        let (al, ar) = (left.zw_counts.unwrap(), right.zw_counts.unwrap());
        // beta and gamma are stable invariants; alpha absorbs free summands
        if (al.1, al.2) != (ar.1, ar.2) {
            return Ok(Some(ObstructionWitness::TorsionFreeTypeMismatch { left_zw: al, right_zw: ar }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torsion_with_action_example() {
        // R/(7, a-2) over Z[Z/3]: torsion Z/7, a acts by 2
        let m = FPModule::torsion_with_action(3, 7, 2);
        let inv = module_invariants(&m);
        assert_eq!(inv.free_rank, 0);
        assert_eq!(inv.torsion, vec![7]);
        let ranks = &inv.torsion_action_profile[&7];
        assert_eq!(ranks[2], (2, 0), "action - 2 vanishes on the socle");
        assert_eq!(ranks[4], (4, 1));
    }

    #[test]
    fn twisted_z_invariants() {
        let m = FPModule::twisted_z();
        let inv = module_invariants(&m);
        assert_eq!(inv.free_rank, 1);
        assert!(inv.torsion.is_empty());
        assert_eq!(inv.zw_counts, Some((0, 0, 1)));
        assert_eq!(inv.has_trivial_z_summand, Some(false));
    }

    #[test]
    fn circuit_module_z_plus_z2() {
        // R/(2(a-1)) over Z[Z/2]: underlying Z + Z/2 with a(m,[k]) = (m,[m+k]);
        // no trivial Z summand even though the free quotient is trivial
        let two_a_minus_2 = CyclicRingElt::from_coeffs(2, &[-2, 2]);
        let m = FPModule::cyclic_quotient(2, &[two_a_minus_2]);
        let inv = module_invariants(&m);
        assert_eq!(inv.free_rank, 1);
        assert_eq!(inv.torsion, vec![2]);
        assert_eq!(inv.zw_counts, Some((0, 1, 0)));
        assert_eq!(inv.has_trivial_z_summand, Some(false));
    }

    #[test]
    fn trivial_z_summand_operation() {
        assert!(has_trivial_z_summand(&FPModule::trivial_z(2)).unwrap());
        assert!(!has_trivial_z_summand(&FPModule::twisted_z()).unwrap());
        assert!(matches!(
            has_trivial_z_summand(&FPModule::trivial_z(3)),
            Err(ModuleError::WrongModulus(3))
        ));
    }

    #[test]
    fn trivial_z_has_summand() {
        let inv = module_invariants(&FPModule::trivial_z(2));
        assert_eq!(inv.has_trivial_z_summand, Some(true));
        assert_eq!(inv.zw_counts, Some((0, 1, 0)));
        // the regular module has no trivial summand
        let inv_r = module_invariants(&FPModule::free(2, 1));
        assert_eq!(inv_r.has_trivial_z_summand, Some(false));
        assert_eq!(inv_r.zw_counts, Some((1, 0, 0)));
    }

    #[test]
    fn round_trip_zw_counts() {
        for alpha in 0..3usize {
            for beta in 0..3usize {
                for gamma in 0..3usize {
                    let mut m = FPModule::free(2, alpha);
                    for _ in 0..beta {
                        m = m.direct_sum(&FPModule::trivial_z(2));
                    }
                    for _ in 0..gamma {
                        m = m.direct_sum(&FPModule::twisted_z());
                    }
                    m = m.direct_sum(&FPModule::torsion_with_action(2, 4, 1));
                    let inv = module_invariants(&m);
                    assert_eq!(inv.zw_counts, Some((alpha, beta, gamma)), "({alpha},{beta},{gamma})");
                    assert_eq!(inv.free_rank, 2 * alpha + beta + gamma);
                    assert_eq!(inv.torsion, vec![4]);
                }
            }
        }
    }

    #[test]
    fn theorem_torsion_action_witness() {
        // I-side: Z/7 with a = 2; J-side: Z/7 with a = 4 = 2^{-1}
        let i = module_invariants(&FPModule::torsion_with_action(3, 7, 2));
        let j = module_invariants(&FPModule::torsion_with_action(3, 7, 4));
        let w = compare_invariants(&i, &j).unwrap().expect("witness");
        match w {
            ObstructionWitness::TorsionActionMismatch { p, .. } => assert_eq!(p, 7),
            other => panic!("unexpected witness {other:?}"),
        }
        // symmetric detection
        assert!(compare_invariants(&j, &i).unwrap().is_some());
        // identical invariants: no witness
        assert!(compare_invariants(&i, &i).unwrap().is_none());
    }

    #[test]
    fn rho_sigma_witness_identity() {
        // the hand-built p-torsion element of N = R^2 / R(p, a^-1 - r):
        // rho = sum_{i<q} a^i r^i satisfies (a^-1 - r) rho = p sigma, and
        // [rho, sigma] is a nonzero p-torsion element killed by a^-1 - r
        let (q, p, r) = (3usize, 7i64, 2i64);
        let mut rho = CyclicRingElt::zero(q);
        let mut rk = 1i64;
        for i in 0..q {
            rho = rho.add(&CyclicRingElt::monomial(q, i, rk));
            rk *= r;
        }
        let a_inv_minus_r =
            CyclicRingElt::monomial(q, q - 1, 1).sub(&CyclicRingElt::integer(q, r));
        let lhs = a_inv_minus_r.mul(&rho);
        // exact divisibility by p gives sigma
        let sigma_coeffs: Vec<BigInt> = lhs
            .coeffs
            .iter()
            .map(|c| {
                let (quot, rem) = c.div_rem(&BigInt::from(p));
                assert!(rem.is_zero(), "(a^-1 - r) rho must be divisible by p");
                quot
            })
            .collect();
        let sigma = CyclicRingElt { n: q, coeffs: sigma_coeffs };
        assert_eq!(a_inv_minus_r.mul(&rho), CyclicRingElt::integer(q, p).mul(&sigma));
        // p [rho, sigma] = rho (p, a^-1 - r) and (a^-1 - r)[rho, sigma] =
        // sigma (p, a^-1 - r) vanish in N by construction; the class
        // itself is nonzero: (rho, sigma) is not a multiple of the row
        let n_mod = FPModule {
            n: q,
            presentation: RingMatrix::from_entries(
                2,
                1,
                vec![CyclicRingElt::integer(q, p), a_inv_minus_r.clone()],
            ),
        };
        let flat_row = n_mod.flatten();
        // membership: does (rho, sigma) lie in the relation lattice?
        let target: Vec<BigInt> =
            rho.coeffs.iter().chain(sigma.coeffs.iter()).cloned().collect();
        assert!(
            crate::snf::solve(&flat_row, &target).is_none(),
            "[rho, sigma] must be nonzero in N"
        );
        // and the invariants of N show p-torsion with the action r^-1
        let inv = module_invariants(&n_mod);
        assert_eq!(inv.torsion, vec![p as u64]);
        let r_inv = (1..p).find(|x| x * r % p == 1).unwrap() as u64;
        assert_eq!(inv.torsion_action_profile[&(p as u64)][r_inv as usize], (r_inv, 0));
    }

    #[test]
    fn modulus_mismatch_is_an_error() {
        let a = module_invariants(&FPModule::trivial_z(2));
        let b = module_invariants(&FPModule::trivial_z(3));
        assert!(compare_invariants(&a, &b).is_err());
    }

    #[test]
    fn lemma_shape_z_summand_witness() {
        // I side: Z^w + (Z/2)^2 torsion; J side presented by the
        // conjugate transpose with twisted character: has Z instead
        let zw_torsion = FPModule::twisted_z().direct_sum(&FPModule::torsion_with_action(2, 2, 1));
        let i_inv = module_invariants(&zw_torsion);
        let j_mod = zw_torsion.conjugate_partner(-1);
        let j_inv = module_invariants(&j_mod);
        assert_eq!(i_inv.has_trivial_z_summand, Some(false));
        assert_eq!(j_inv.has_trivial_z_summand, Some(true));
        let w = compare_invariants(&i_inv, &j_inv).unwrap().expect("witness");
        assert!(matches!(w, ObstructionWitness::ZSummandAsymmetry { .. }));
    }
}
