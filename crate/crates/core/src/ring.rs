//! Exact arithmetic in integral group rings.
//!
//! Three element kinds are supported: formal sums over a finite group
//! (`FiniteRingElt`), the cyclic quotient ring Z\[a\]/(a^n - 1)
//! (`CyclicRingElt`), and sums over amalgam normal forms (in
//! [`crate::amalgam`]). All of them implement [`RingScalar`], which is
//! what the matrix layer works with. Coefficients are `BigInt`, so no
//! computation can overflow silently.

use crate::group::GroupRef;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RingError {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("character is not multiplicative")]
    CharacterUndefined,
    #[error("map does not satisfy a relator: {0}")]
    RelatorViolated(String),
}

/// Common interface for ring elements that can live in a [`RingMatrix`].
pub trait RingScalar: Clone + PartialEq + fmt::Debug {
    /// Character data needed by the twisted involution.
    type Character: Clone;

    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// w-twisted involution: the linear extension of g -> w(g) g^-1.
    fn involute(&self, w: &Self::Character) -> Self;
    fn augmentation(&self) -> BigInt;
    fn render(&self) -> String;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

/// Element of Z\[G\] for a multiplication-table group G.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteRingElt {
    pub group: GroupRef,
    pub coeffs: Vec<BigInt>,
}

impl fmt::Debug for FiniteRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl FiniteRingElt {
    pub fn zero(group: &GroupRef) -> Self {
        FiniteRingElt { group: group.clone(), coeffs: vec![BigInt::zero(); group.order()] }
    }

    pub fn one(group: &GroupRef) -> Self {
        Self::element(group, 0)
    }

    pub fn element(group: &GroupRef, g: u16) -> Self {
        let mut x = Self::zero(group);
        x.coeffs[g as usize] = BigInt::one();
        x
    }

    pub fn from_terms(group: &GroupRef, terms: &[(u16, i64)]) -> Self {
        let mut x = Self::zero(group);
        for &(g, c) in terms {
            x.coeffs[g as usize] += BigInt::from(c);
        }
        x
    }

    /// nu_k(g) = 1 + g + ... + g^{k-1}
    pub fn nu(group: &GroupRef, g: u16, k: usize) -> Self {
        let mut x = Self::zero(group);
        let mut p = 0u16;
        for _ in 0..k {
            x.coeffs[p as usize] += BigInt::one();
            p = group.mul(p, g);
        }
        x
    }

    fn assert_same(&self, other: &Self) {
        assert_eq!(self.group.as_ref(), other.group.as_ref(), "ring mismatch: different finite group rings");
    }
}

/// A character on a finite group: one sign per element, multiplicative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupCharacter(pub Vec<i8>);

impl GroupCharacter {
    pub fn trivial(group: &GroupRef) -> Self {
        GroupCharacter(vec![1; group.order()])
    }

    /// Extend generator signs multiplicatively; errors if inconsistent.
    pub fn from_generator_signs(group: &GroupRef, signs: &[i8]) -> Result<Self, RingError> {
        assert_eq!(signs.len(), group.generators().len());
        let mut w = vec![0i8; group.order()];
        w[0] = 1;
        for g in group.elements() {
            let mut s = 1i8;
            for gi in group.word_for(g) {
                s *= signs[gi as usize];
            }
            w[g as usize] = s;
        }
        for a in group.elements() {
            for b in group.elements() {
                if w[group.mul(a, b) as usize] != w[a as usize] * w[b as usize] {
                    return Err(RingError::CharacterUndefined);
                }
            }
        }
        Ok(GroupCharacter(w))
    }
}

impl RingScalar for FiniteRingElt {
    type Character = GroupCharacter;

    fn zero_like(&self) -> Self {
        Self::zero(&self.group)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn add(&self, other: &Self) -> Self {
        self.assert_same(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        FiniteRingElt { group: self.group.clone(), coeffs }
    }

    fn neg(&self) -> Self {
        FiniteRingElt { group: self.group.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    fn mul(&self, other: &Self) -> Self {
        self.assert_same(other);
        let g = &self.group;
        let mut out = Self::zero(g);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = g.mul(i as u16, j as u16) as usize;
                out.coeffs[k] += a * b;
            }
        }
        out
    }

    fn involute(&self, w: &GroupCharacter) -> Self {
        assert_eq!(w.0.len(), self.group.order(), "character length mismatch");
        let g = &self.group;
        let mut out = Self::zero(g);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let inv = g.inv(i as u16) as usize;
            let signed = if w.0[i] == 1 { c.clone() } else { -c };
            out.coeffs[inv] += signed;
        }
        out
    }

    fn augmentation(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    fn render(&self) -> String {
        render_terms(
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (c.clone(), self.group.label(i as u16).to_string())),
        )
    }
}

/// Element of Z\[a\]/(a^n - 1).
#[derive(Clone, PartialEq, Eq)]
pub struct CyclicRingElt {
    pub n: usize,
    pub coeffs: Vec<BigInt>,
}

impl fmt::Debug for CyclicRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl CyclicRingElt {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1);
        CyclicRingElt { n, coeffs: vec![BigInt::zero(); n] }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(n, 0, 1)
    }

    pub fn monomial(n: usize, exp: usize, coeff: i64) -> Self {
        let mut x = Self::zero(n);
        x.coeffs[exp % n] += BigInt::from(coeff);
        x
    }

    pub fn from_coeffs(n: usize, coeffs: &[i64]) -> Self {
        let mut x = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            x.coeffs[i % n] += BigInt::from(*c);
        }
        x
    }

    pub fn integer(n: usize, c: i64) -> Self {
        Self::monomial(n, 0, c)
    }

    /// nu_k = 1 + a + ... + a^{k-1}
    pub fn nu(n: usize, k: usize) -> Self {
        let mut x = Self::zero(n);
        for i in 0..k {
            x.coeffs[i % n] += BigInt::one();
        }
        x
    }

    fn assert_same(&self, other: &Self) {
        assert_eq!(self.n, other.n, "ring mismatch: different cyclic moduli");
    }
}

/// Character of Z/nZ: the sign of w(a). A twisted character requires n
/// even (w must kill a^n = 1).
pub type CyclicCharacter = i8;

impl RingScalar for CyclicRingElt {
    type Character = CyclicCharacter;

    fn zero_like(&self) -> Self {
        Self::zero(self.n)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn add(&self, other: &Self) -> Self {
        self.assert_same(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        CyclicRingElt { n: self.n, coeffs }
    }

    fn neg(&self) -> Self {
        CyclicRingElt { n: self.n, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    fn mul(&self, other: &Self) -> Self {
        self.assert_same(other);
        let mut out = Self::zero(self.n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[(i + j) % self.n] += a * b;
            }
        }
        out
    }

    fn involute(&self, w: &CyclicCharacter) -> Self {
        assert!(*w == 1 || (*w == -1 && self.n % 2 == 0), "twisted character needs even modulus");
        let mut out = Self::zero(self.n);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign_neg = *w == -1 && i % 2 == 1;
            let signed = if sign_neg { -c } else { c.clone() };
            out.coeffs[(self.n - i) % self.n] += signed;
        }
        out
    }

    fn augmentation(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    fn render(&self) -> String {
        render_terms(self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| {
            let label = match i {
                0 => "1".to_string(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            (c.clone(), label)
        }))
    }
}

pub(crate) fn render_terms(terms: impl Iterator<Item = (BigInt, String)>) -> String {
    let mut out = String::new();
    let mut first = true;
    for (c, label) in terms {
        let neg = c < BigInt::zero();
        let abs = if neg { -c.clone() } else { c.clone() };
        if first {
            if neg {
                out.push('-');
            }
            first = false;
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if abs.is_one() && label != "1" {
            out.push_str(&label);
        } else if label == "1" {
            out.push_str(&abs.to_string());
        } else {
            out.push_str(&format!("{abs}*{label}"));
        }
    }
    if first {
        out.push('0');
    }
    out
}

/// Group homomorphism G -> Z/nZ, stored as an exponent per element.
#[derive(Debug, Clone)]
pub struct FiniteToCyclic {
    pub n: usize,
    pub exps: Vec<usize>,
}

/// Extend generator exponents to a homomorphism G -> Z/nZ; errors if the
/// assignment does not respect the multiplication table.
pub fn hom_to_cyclic(group: &GroupRef, n: usize, gen_exps: &[usize]) -> Result<FiniteToCyclic, RingError> {
    assert_eq!(gen_exps.len(), group.generators().len());
    let mut exps = vec![0usize; group.order()];
    for g in group.elements() {
        let mut e = 0usize;
        for gi in group.word_for(g) {
            e = (e + gen_exps[gi as usize]) % n;
        }
        exps[g as usize] = e;
    }
    for a in group.elements() {
        for b in group.elements() {
            if exps[group.mul(a, b) as usize] != (exps[a as usize] + exps[b as usize]) % n {
                return Err(RingError::RelatorViolated(format!(
                    "images do not define a homomorphism to Z/{n}Z"
                )));
            }
        }
    }
    Ok(FiniteToCyclic { n, exps })
}

/// Push a finite group-ring element through a homomorphism to Z/nZ.
pub fn push_finite_to_cyclic(x: &FiniteRingElt, f: &FiniteToCyclic) -> CyclicRingElt {
    assert_eq!(f.exps.len(), x.group.order(), "map domain mismatch");
    let mut out = CyclicRingElt::zero(f.n);
    for (i, c) in x.coeffs.iter().enumerate() {
        if !c.is_zero() {
            out.coeffs[f.exps[i]] += c;
        }
    }
    out
}

/// Rectangular matrix over one of the supported rings.
#[derive(Clone, PartialEq)]
pub struct RingMatrix<T: RingScalar> {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<T>,
}

impl<T: RingScalar> fmt::Debug for RingMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RingMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].render()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<T: RingScalar> std::ops::Index<(usize, usize)> for RingMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.entries[i * self.cols + j]
    }
}

impl<T: RingScalar> std::ops::IndexMut<(usize, usize)> for RingMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.entries[i * self.cols + j]
    }
}

impl<T: RingScalar> RingMatrix<T> {
    pub fn filled(rows: usize, cols: usize, zero: T) -> Self {
        RingMatrix { rows, cols, entries: vec![zero; rows * cols] }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<T>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        RingMatrix { rows, cols, entries }
    }

    pub fn map<U: RingScalar>(&self, f: impl Fn(&T) -> U) -> RingMatrix<U> {
        RingMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let zero = self
            .entries
            .first()
            .or(other.entries.first())
            .expect("cannot multiply empty matrices")
            .zero_like();
        let mut out = Self::filled(self.rows, other.cols, zero);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let term = self[(i, k)].mul(&other[(k, j)]);
                    out[(i, j)] = out[(i, j)].add(&term);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Entrywise involution composed with transpose.
    pub fn conjugate_transpose(&self, w: &T::Character) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self[(i, j)].involute(w));
            }
        }
        RingMatrix { rows: self.cols, cols: self.rows, entries }
    }

    pub fn is_self_conjugate(&self, w: &T::Character) -> bool {
        self.rows == self.cols && *self == self.conjugate_transpose(w)
    }

    /// Canonical text rendering (row major).
    pub fn render(&self) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].render()).collect();
            s.push_str(&format!("[{}]\n", row.join(", ")));
        }
        s
    }

    /// column\[target\] += column\[source\] * factor (right multiplication by
    /// an elementary matrix)
    pub fn col_axpy(&mut self, target: usize, source: usize, factor: &T) {
        for i in 0..self.rows {
            let term = self[(i, source)].mul(factor);
            self[(i, target)] = self[(i, target)].add(&term);
        }
    }

    /// column\[j\] *= factor (on the right)
    pub fn col_scale(&mut self, j: usize, factor: &T) {
        for i in 0..self.rows {
            self[(i, j)] = self[(i, j)].mul(factor);
        }
    }

    /// row\[target\] += factor * row\[source\]
    pub fn row_axpy(&mut self, target: usize, source: usize, factor: &T) {
        for j in 0..self.cols {
            let term = factor.mul(&self[(source, j)]);
            self[(target, j)] = self[(target, j)].add(&term);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::construct_catalog_group;
    use crate::group::CatalogTag;
    use std::sync::Arc;

    fn d6() -> GroupRef {
        Arc::new(construct_catalog_group(&CatalogTag::Dihedral(6), 1024).unwrap())
    }

    #[test]
    fn zero_divisor_from_involution() {
        // (a+1)(a-1) = 0 when a^2 = 1
        let g = d6();
        let a = g.generators()[0];
        let p = FiniteRingElt::from_terms(&g, &[(a, 1), (0, 1)]);
        let q = FiniteRingElt::from_terms(&g, &[(a, 1), (0, -1)]);
        assert!(p.mul(&q).is_zero());
    }

    #[test]
    fn six_identity_for_m3() {
        // (1+ab^s) + (a nu_s - nu_{s+1})(1+ab^s) = 0 in Z[D_6], s = 1
        let g = d6();
        let (a, b) = (g.generators()[0], g.generators()[1]);
        let one_abs = FiniteRingElt::from_terms(&g, &[(0, 1), (g.mul(a, b), 1)]);
        let a_nu = FiniteRingElt::element(&g, a).mul(&FiniteRingElt::nu(&g, b, 1));
        let d = a_nu.sub(&FiniteRingElt::nu(&g, b, 2));
        let total = one_abs.add(&d.mul(&one_abs));
        assert!(total.is_zero(), "got {}", total.render());
    }

    #[test]
    fn augmentation_of_nu() {
        let g = d6();
        let b = g.generators()[1];
        assert_eq!(FiniteRingElt::nu(&g, b, 3).augmentation(), BigInt::from(3));
    }

    #[test]
    fn involution_examples() {
        let g = d6();
        let (a, b) = (g.generators()[0], g.generators()[1]);
        let w = GroupCharacter::trivial(&g);
        // involute(a+1) = a+1
        let x = FiniteRingElt::from_terms(&g, &[(a, 1), (0, 1)]);
        assert_eq!(x.involute(&w), x);
        // involute(b) = b^2
        let y = FiniteRingElt::element(&g, b);
        assert_eq!(y.involute(&w), FiniteRingElt::element(&g, g.pow(b, 2)));
        // double involution is the identity even when twisted
        let tw = GroupCharacter::from_generator_signs(&g, &[-1, 1]).unwrap();
        let z = FiniteRingElt::from_terms(&g, &[(a, 2), (b, -1), (0, 5)]);
        assert_eq!(z.involute(&tw).involute(&tw), z);
    }

    #[test]
    fn twisted_cyclic_involution() {
        // involute(1-a) with w(a) = -1 is 1+a
        let x = CyclicRingElt::from_coeffs(2, &[1, -1]);
        let bar = x.involute(&-1);
        assert_eq!(bar, CyclicRingElt::from_coeffs(2, &[1, 1]));
        // untwisted: a |-> a^{n-1}
        let y = CyclicRingElt::monomial(3, 1, 1);
        assert_eq!(y.involute(&1), CyclicRingElt::monomial(3, 2, 1));
    }

    #[test]
    fn conjugate_transpose_shapes_and_diagonal() {
        let g = d6();
        let (a, b) = (g.generators()[0], g.generators()[1]);
        let w = GroupCharacter::trivial(&g);
        // diag(a+1, (a-1-b)b) is self-conjugate
        let e00 = FiniteRingElt::from_terms(&g, &[(a, 1), (0, 1)]);
        let bb = FiniteRingElt::element(&g, b);
        let e11 = FiniteRingElt::from_terms(&g, &[(a, 1), (0, -1), (b, -1)]).mul(&bb);
        let zero = FiniteRingElt::zero(&g);
        let m = RingMatrix::from_entries(2, 2, vec![e00, zero.clone(), zero, e11]);
        assert!(m.is_self_conjugate(&w));
        // 1x2 transposes to 2x1
        let r = RingMatrix::filled(1, 2, FiniteRingElt::zero(&g));
        assert_eq!(r.conjugate_transpose(&w).rows, 2);
    }

    #[test]
    fn push_through_examples() {
        let g = d6();
        // f: a |-> a, b |-> 1 into Z[Z/2]
        let f = hom_to_cyclic(&g, 2, &[1, 0]).unwrap();
        let (a, b) = (g.generators()[0], g.generators()[1]);
        let x = FiniteRingElt::from_terms(&g, &[(0, 1), (g.mul(a, b), 1)]);
        assert_eq!(push_finite_to_cyclic(&x, &f), CyclicRingElt::from_coeffs(2, &[1, 1]));
        assert!(push_finite_to_cyclic(&FiniteRingElt::zero(&g), &f).is_zero());
        // b |-> a is not a homomorphism to Z/2 (b has order 3)
        assert!(hom_to_cyclic(&g, 2, &[1, 1]).is_err());
    }

    #[test]
    fn rendering_is_canonical() {
        let x = CyclicRingElt::from_coeffs(4, &[1, -2, 0, 1]);
        assert_eq!(x.render(), "1 - 2*a + a^3");
        assert_eq!(CyclicRingElt::zero(2).render(), "0");
    }
}
