//! Normal forms and exact ring arithmetic for the iterated amalgamated
//! free products G_0 *_{Z/2} D_{2m_1} *_{Z/2} ... *_{Z/2} D_{2m_n}
//! over an identified involution.
//!
//! Elements are stored in the standard amalgam normal form: an optional
//! leading involution followed by an alternating sequence of nontrivial
//! right-coset representatives, adjacent factors distinct. The coset
//! transversal is canonical: the lowest element index per right coset of
//! the involution subgroup (for dihedral tails this is b^j).

use crate::group::GroupRef;
use crate::ring::{render_terms, FiniteToCyclic, GroupCharacter, RingError, RingScalar};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Descriptor of the amalgam: the even-order head factor with its
/// distinguished involution, and the odd parameters of the dihedral tails.
#[derive(Clone)]
pub struct AmalgamShape {
    pub g0: GroupRef,
    /// distinguished involution of g0 (order 2, index in the table)
    pub alpha: u16,
    /// m_i (odd, >= 3) for each dihedral tail D_{2 m_i}
    pub tails: Vec<u64>,
}

impl PartialEq for AmalgamShape {
    fn eq(&self, other: &Self) -> bool {
        self.g0.as_ref() == other.g0.as_ref() && self.alpha == other.alpha && self.tails == other.tails
    }
}
impl Eq for AmalgamShape {}

impl fmt::Debug for AmalgamShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AmalgamShape(|G0|={}, alpha={}, tails={:?})", self.g0.order(), self.alpha, self.tails)
    }
}

impl AmalgamShape {
    pub fn new(g0: GroupRef, alpha: u16, tails: Vec<u64>) -> AmalgamShape {
        // with no tails the shape degenerates to the plain group ring and
        // no distinguished involution is required
        assert!(
            tails.is_empty() || g0.element_order(alpha) == 2,
            "alpha must be an involution"
        );
        assert!(tails.iter().all(|&m| m >= 3 && m % 2 == 1), "tails must be odd and >= 3");
        AmalgamShape { g0, alpha, tails }
    }

    /// Number of free factors (1 + number of tails).
    pub fn factor_count(&self) -> usize {
        1 + self.tails.len()
    }

    /// Decompose a head element as alpha^e * rep with rep the canonical
    /// representative of its nontrivial coset (None for the trivial coset).
    fn decompose_head(&self, g: u16) -> (bool, Option<u16>) {
        if g == 0 {
            return (false, None);
        }
        if g == self.alpha {
            return (true, None);
        }
        let ag = self.g0.mul(self.alpha, g);
        let rep = g.min(ag);
        (g != rep, Some(rep))
    }
}

pub type ShapeRef = Arc<AmalgamShape>;

/// One syllable of a normal form: factor 0 is the head, factor i >= 1 is
/// tail i with representative b_i^code.
type Syllable = (usize, u32);

/// An element of the amalgam in normal form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AmalgamElt {
    leading: bool,
    syllables: Vec<Syllable>,
}

impl AmalgamElt {
    pub fn identity() -> AmalgamElt {
        AmalgamElt { leading: false, syllables: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        !self.leading && self.syllables.is_empty()
    }

    pub fn syllable_len(&self) -> usize {
        self.syllables.len()
    }

    pub fn render(&self, shape: &AmalgamShape) -> String {
        if self.is_identity() {
            return "1".into();
        }
        let mut parts = Vec::new();
        let mut syllables = self.syllables.as_slice();
        if self.leading {
            // a leading involution times a head representative is a
            // single head element; print its label directly
            if let Some(&(0, code)) = syllables.first() {
                parts.push(shape.g0.label(shape.g0.mul(shape.alpha, code as u16)).to_string());
                syllables = &syllables[1..];
            } else {
                parts.push(shape.g0.label(shape.alpha).to_string());
            }
        }
        for &(f, code) in syllables {
            if f == 0 {
                parts.push(shape.g0.label(code as u16).to_string());
            } else if code == 1 {
                parts.push(format!("b{f}"));
            } else {
                parts.push(format!("b{f}^{code}"));
            }
        }
        parts.join("*")
    }
}

/// The amalgam with its element operations.
#[derive(Clone)]
pub struct Amalgam {
    pub shape: ShapeRef,
}

impl Amalgam {
    pub fn new(shape: AmalgamShape) -> Amalgam {
        Amalgam { shape: Arc::new(shape) }
    }

    /// The identified involution as an element.
    pub fn alpha(&self) -> AmalgamElt {
        AmalgamElt { leading: true, syllables: Vec::new() }
    }

    /// Image of a head-factor element.
    pub fn from_head(&self, g: u16) -> AmalgamElt {
        let (lead, rep) = self.shape.decompose_head(g);
        AmalgamElt {
            leading: lead,
            syllables: rep.map(|r| (0usize, r as u32)).into_iter().collect(),
        }
    }

    /// b_tail^exp (tail index is 1-based).
    pub fn tail_power(&self, tail: usize, exp: i64) -> AmalgamElt {
        assert!(tail >= 1 && tail <= self.shape.tails.len(), "tail out of range");
        let m = self.shape.tails[tail - 1] as i64;
        let e = exp.rem_euclid(m) as u32;
        if e == 0 {
            AmalgamElt::identity()
        } else {
            AmalgamElt { leading: false, syllables: vec![(tail, e)] }
        }
    }

    /// Multiply on the right by alpha.
    fn alpha_right(&self, x: &mut AmalgamElt) {
        let shape = &self.shape;
        for idx in (0..x.syllables.len()).rev() {
            let (f, code) = x.syllables[idx];
            if f == 0 {
                let g = code as u16;
                let ga = shape.g0.mul(g, shape.alpha);
                let (carry, rep) = shape.decompose_head(ga);
                x.syllables[idx] = (0, rep.expect("coset representative survives") as u32);
                if !carry {
                    return;
                }
            } else {
                // b^j * a = a * b^{m-j}
                let m = shape.tails[f - 1] as u32;
                x.syllables[idx] = (f, m - code);
            }
        }
        x.leading = !x.leading;
    }

    /// Multiply on the right by a head element.
    fn push_head(&self, x: &mut AmalgamElt, g: u16) {
        let (carry, rep) = self.shape.decompose_head(g);
        if carry {
            self.alpha_right(x);
        }
        let Some(rep) = rep else { return };
        match x.syllables.last().copied() {
            Some((0, last)) => {
                let prod = self.shape.g0.mul(last as u16, rep);
                x.syllables.pop();
                let (carry2, rep2) = self.shape.decompose_head(prod);
                if carry2 {
                    self.alpha_right(x);
                }
                if let Some(r2) = rep2 {
                    x.syllables.push((0, r2 as u32));
                }
            }
            _ => x.syllables.push((0, rep as u32)),
        }
    }

    /// Multiply on the right by b_tail^exp.
    fn push_tail(&self, x: &mut AmalgamElt, tail: usize, exp: u32) {
        let m = self.shape.tails[tail - 1] as u32;
        let exp = exp % m;
        if exp == 0 {
            return;
        }
        match x.syllables.last().copied() {
            Some((f, last)) if f == tail => {
                let total = (last + exp) % m;
                x.syllables.pop();
                if total != 0 {
                    x.syllables.push((tail, total));
                }
            }
            _ => x.syllables.push((tail, exp)),
        }
    }

    /// Normal form of the product.
    pub fn mul(&self, x: &AmalgamElt, y: &AmalgamElt) -> AmalgamElt {
        let mut out = x.clone();
        if y.leading {
            self.alpha_right(&mut out);
        }
        for &(f, code) in &y.syllables {
            if f == 0 {
                self.push_head(&mut out, code as u16);
            } else {
                self.push_tail(&mut out, f, code);
            }
        }
        debug_assert!(self.well_formed(&out));
        out
    }

    pub fn inv(&self, x: &AmalgamElt) -> AmalgamElt {
        // (alpha^d s_1 ... s_k)^-1 = s_k^-1 ... s_1^-1 alpha^d
        let mut out = AmalgamElt::identity();
        for &(f, code) in x.syllables.iter().rev() {
            let piece = if f == 0 {
                self.from_head(self.shape.g0.inv(code as u16))
            } else {
                self.tail_power(f, -(code as i64))
            };
            out = self.mul(&out, &piece);
        }
        if x.leading {
            out = self.mul(&out, &self.alpha());
        }
        out
    }

    fn well_formed(&self, x: &AmalgamElt) -> bool {
        for w in x.syllables.windows(2) {
            if w[0].0 == w[1].0 {
                return false;
            }
        }
        for &(f, code) in &x.syllables {
            if f == 0 {
                let (lead, rep) = self.shape.decompose_head(code as u16);
                if lead || rep != Some(code as u16) {
                    return false;
                }
            } else if code == 0 || code >= self.shape.tails[f - 1] as u32 {
                return false;
            }
        }
        true
    }

    /// w of an element under a head character (tails are orientation
    /// preserving; the identified involution carries w(alpha)).
    pub fn character_of(&self, w: &GroupCharacter, x: &AmalgamElt) -> i8 {
        let mut sign = if x.leading { w.0[self.shape.alpha as usize] } else { 1 };
        for &(f, code) in &x.syllables {
            if f == 0 {
                sign *= w.0[code as usize];
            }
        }
        sign
    }
}

/// Finitely supported integer sum of amalgam normal forms.
#[derive(Clone)]
pub struct AmalgamRingElt {
    pub amalgam: Amalgam,
    terms: BTreeMap<AmalgamElt, BigInt>,
}

impl PartialEq for AmalgamRingElt {
    fn eq(&self, other: &Self) -> bool {
        self.amalgam.shape == other.amalgam.shape && self.terms == other.terms
    }
}

impl fmt::Debug for AmalgamRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl AmalgamRingElt {
    pub fn zero(amalgam: &Amalgam) -> Self {
        AmalgamRingElt { amalgam: amalgam.clone(), terms: BTreeMap::new() }
    }

    pub fn from_element(amalgam: &Amalgam, g: AmalgamElt) -> Self {
        let mut x = Self::zero(amalgam);
        x.add_term(g, BigInt::from(1));
        x
    }

    pub fn from_terms(amalgam: &Amalgam, terms: impl IntoIterator<Item = (AmalgamElt, i64)>) -> Self {
        let mut x = Self::zero(amalgam);
        for (g, c) in terms {
            x.add_term(g, BigInt::from(c));
        }
        x
    }

    fn add_term(&mut self, g: AmalgamElt, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(g).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            let dead: Vec<AmalgamElt> =
                self.terms.iter().filter(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).collect();
            for k in dead {
                self.terms.remove(&k);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&AmalgamElt, &BigInt)> {
        self.terms.iter()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    /// nu_k of a tail generator: 1 + b + ... + b^{k-1}.
    pub fn tail_nu(amalgam: &Amalgam, tail: usize, k: usize) -> Self {
        let mut x = Self::zero(amalgam);
        for i in 0..k {
            x.add_term(amalgam.tail_power(tail, i as i64), BigInt::from(1));
        }
        x
    }
}

/// Character data for the amalgam ring: a character of the head group
/// (the tails force +1 on the rotation generators).
pub type AmalgamCharacter = GroupCharacter;

impl RingScalar for AmalgamRingElt {
    type Character = AmalgamCharacter;

    fn zero_like(&self) -> Self {
        Self::zero(&self.amalgam)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        assert!(self.amalgam.shape == other.amalgam.shape, "ring mismatch: different amalgams");
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        out
    }

    fn neg(&self) -> Self {
        let mut out = Self::zero(&self.amalgam);
        for (g, c) in &self.terms {
            out.terms.insert(g.clone(), -c);
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        assert!(self.amalgam.shape == other.amalgam.shape, "ring mismatch: different amalgams");
        let mut out = Self::zero(&self.amalgam);
        for (g, c) in &self.terms {
            for (h, d) in &other.terms {
                out.add_term(self.amalgam.mul(g, h), c * d);
            }
        }
        out
    }

    fn involute(&self, w: &AmalgamCharacter) -> Self {
        let mut out = Self::zero(&self.amalgam);
        for (g, c) in &self.terms {
            let sign = self.amalgam.character_of(w, g);
            let coeff = if sign == 1 { c.clone() } else { -c };
            out.add_term(self.amalgam.inv(g), coeff);
        }
        out
    }

    fn augmentation(&self) -> BigInt {
        self.terms.values().sum()
    }

    fn render(&self) -> String {
        render_terms(self.terms.iter().map(|(g, c)| (c.clone(), g.render(&self.amalgam.shape))))
    }
}

/// Ring map from the amalgam ring onto Z[Z/nZ], given by exponent images
/// of the head elements and of each tail rotation.
#[derive(Debug, Clone)]
pub struct AmalgamToCyclic {
    pub n: usize,
    pub head: FiniteToCyclic,
    pub tail_exps: Vec<usize>,
}

impl AmalgamToCyclic {
    /// Validate that the images kill the amalgam relations: the head map
    /// must be a homomorphism and each dihedral relation must map to 0.
    pub fn new(shape: &AmalgamShape, head: FiniteToCyclic, tail_exps: Vec<usize>) -> Result<Self, RingError> {
        let n = head.n;
        if head.exps.len() != shape.g0.order() || tail_exps.len() != shape.tails.len() {
            return Err(RingError::RingMismatch("map shape mismatch".into()));
        }
        let alpha_exp = head.exps[shape.alpha as usize];
        for (i, &m) in shape.tails.iter().enumerate() {
            let t = tail_exps[i];
            // b^m = 1 and a b^s a = b^{s+1} force m*t = 0 and 2*alpha - t = 0
            if (m as usize * t) % n != 0 || (2 * alpha_exp + n - t % n) % n != 0 {
                return Err(RingError::RelatorViolated(format!("tail {} image breaks a relation", i + 1)));
            }
        }
        Ok(AmalgamToCyclic { n, head, tail_exps })
    }

    pub fn exponent_of(&self, shape: &AmalgamShape, g: &AmalgamElt) -> usize {
        let mut e = if g.leading { self.head.exps[shape.alpha as usize] } else { 0 };
        for &(f, code) in &g.syllables {
            if f == 0 {
                e += self.head.exps[code as usize];
            } else {
                e += code as usize * self.tail_exps[f - 1];
            }
        }
        e % self.n
    }
}

/// Push an amalgam ring element through to Z[Z/nZ].
pub fn push_amalgam_to_cyclic(x: &AmalgamRingElt, f: &AmalgamToCyclic) -> crate::ring::CyclicRingElt {
    let mut out = crate::ring::CyclicRingElt::zero(f.n);
    for (g, c) in x.terms() {
        out.coeffs[f.exponent_of(&x.amalgam.shape, g)] += c;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::construct_catalog_group;
    use crate::group::CatalogTag;

    fn z2_shape(tails: Vec<u64>) -> Amalgam {
        let g0 = Arc::new(construct_catalog_group(&CatalogTag::Cyclic(2), 64).unwrap());
        Amalgam::new(AmalgamShape::new(g0, 1, tails))
    }

    #[test]
    fn tail_powers_cancel() {
        let am = z2_shape(vec![3, 3]);
        let b1 = am.tail_power(1, 1);
        let b1sq = am.tail_power(1, 2);
        assert!(am.mul(&b1, &b1sq).is_identity());
        // a * (b1 b2) is already a normal form of length 2 with leading a
        let prod = am.mul(&am.alpha(), &am.mul(&b1, &am.tail_power(2, 1)));
        assert!(prod.leading);
        assert_eq!(prod.syllable_len(), 2);
    }

    #[test]
    fn edge_letters_cancel() {
        // (b1 a) * (a b2) = b1 b2
        let am = z2_shape(vec![3, 3]);
        let b1a = am.mul(&am.tail_power(1, 1), &am.alpha());
        let ab2 = am.mul(&am.alpha(), &am.tail_power(2, 1));
        let prod = am.mul(&b1a, &ab2);
        let expect = am.mul(&am.tail_power(1, 1), &am.tail_power(2, 1));
        assert_eq!(prod, expect);
    }

    #[test]
    fn single_tail_is_dihedral() {
        // Z/2 *_{Z/2} D_6 = D_6: the normal forms multiply exactly like
        // the dihedral table
        let am = z2_shape(vec![3]);
        let d6: GroupRef = Arc::new(construct_catalog_group(&CatalogTag::Dihedral(6), 64).unwrap());
        let (a, b) = (d6.generators()[0], d6.generators()[1]);
        // map D_6 element -> amalgam normal form
        let to_amalgam = |g: u16| -> AmalgamElt {
            let mut word = AmalgamElt::identity();
            let mut cur = g;
            // g = a^e b^j in the dihedral ordering
            let m = 3i64;
            let e = if cur >= 3 {
                cur = d6.mul(a, cur);
                true
            } else {
                false
            };
            let _ = m;
            if e {
                word = am.mul(&word, &am.alpha());
            }
            let j = cur as i64;
            am.mul(&word, &am.tail_power(1, j))
        };
        for x in d6.elements() {
            for y in d6.elements() {
                assert_eq!(
                    am.mul(&to_amalgam(x), &to_amalgam(y)),
                    to_amalgam(d6.mul(x, y)),
                    "mismatch at {x},{y}"
                );
            }
        }
        let _ = b;
    }

    #[test]
    fn q8_head_cosets() {
        let q8 = Arc::new(construct_catalog_group(&CatalogTag::Quaternionic(3), 64).unwrap());
        let alpha = q8.generators()[2];
        let am = Amalgam::new(AmalgamShape::new(q8, alpha, vec![3]));
        // inverses via normal forms agree with the group
        for g in 0..8u16 {
            let e = am.from_head(g);
            assert!(am.mul(&e, &am.inv(&e)).is_identity());
        }
        let x = am.mul(&am.from_head(1), &am.tail_power(1, 2));
        let xi = am.inv(&x);
        assert!(am.mul(&x, &xi).is_identity());
        assert!(am.mul(&xi, &x).is_identity());
    }

    #[test]
    fn ring_relator_identity() {
        // (1 + a b^s) + (a nu_s - nu_{s+1})(1 + a b^s) = 0 with s = 1 in
        // the amalgam ring of Z/2 *_{Z/2} D_6
        let am = z2_shape(vec![3]);
        let ab = am.mul(&am.alpha(), &am.tail_power(1, 1));
        let one_ab = AmalgamRingElt::from_terms(&am, [(AmalgamElt::identity(), 1), (ab, 1)]);
        let a_nu1 = AmalgamRingElt::from_element(&am, am.alpha());
        let nu2 = AmalgamRingElt::tail_nu(&am, 1, 2);
        let d = a_nu1.sub(&nu2);
        assert!(one_ab.add(&d.mul(&one_ab)).is_zero());
    }

    #[test]
    fn push_to_cyclic() {
        let am = z2_shape(vec![3]);
        let head = crate::ring::hom_to_cyclic(&am.shape.g0, 2, &[1]).unwrap();
        let f = AmalgamToCyclic::new(&am.shape, head, vec![0]).unwrap();
        let ab = am.mul(&am.alpha(), &am.tail_power(1, 1));
        let x = AmalgamRingElt::from_terms(&am, [(AmalgamElt::identity(), 1), (ab, 1)]);
        let pushed = push_amalgam_to_cyclic(&x, &f);
        assert_eq!(pushed, crate::ring::CyclicRingElt::from_coeffs(2, &[1, 1]));
        // a bad tail image is rejected: b |-> a with b of order 3
        let head2 = crate::ring::hom_to_cyclic(&am.shape.g0, 2, &[1]).unwrap();
        assert!(AmalgamToCyclic::new(&am.shape, head2, vec![1]).is_err());
    }

    #[test]
    fn involution_is_anti_automorphism_smoke() {
        let am = z2_shape(vec![3, 5]);
        let w = GroupCharacter::trivial(&am.shape.g0);
        let x = AmalgamRingElt::from_terms(
            &am,
            [(am.mul(&am.alpha(), &am.tail_power(1, 1)), 2), (am.tail_power(2, 3), -1)],
        );
        let y = AmalgamRingElt::from_terms(
            &am,
            [(am.tail_power(1, 2), 1), (AmalgamElt::identity(), 3)],
        );
        let lhs = x.mul(&y).involute(&w);
        let rhs = y.involute(&w).mul(&x.involute(&w));
        assert_eq!(lhs, rhs);
        assert_eq!(x.involute(&w).involute(&w), x);
    }
}
