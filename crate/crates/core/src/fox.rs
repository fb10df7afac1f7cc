//! Free differential calculus on presentation words and Jacobian
//! assembly over the supported coefficient rings.

use crate::amalgam::{Amalgam, AmalgamElt, AmalgamRingElt};
use crate::group::GroupRef;
use crate::ring::{CyclicRingElt, FiniteRingElt, RingMatrix, RingScalar};
use crate::word::{FreeWord, Presentation};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FoxError {
    #[error("unknown generator {0}")]
    UnknownGenerator(u32),
    #[error("evaluation map violates relator {0}: image is not the identity")]
    RelatorViolated(String),
    #[error("evaluation map must provide an image per generator")]
    ImageCountMismatch,
}

/// Finitely supported integer sum of free words (an element of the free
/// group ring).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FreeRingSum {
    terms: BTreeMap<FreeWord, BigInt>,
}

impl FreeRingSum {
    pub fn zero() -> FreeRingSum {
        FreeRingSum::default()
    }

    pub fn one() -> FreeRingSum {
        FreeRingSum::from_word(FreeWord::identity(), 1)
    }

    pub fn from_word(w: FreeWord, c: i64) -> FreeRingSum {
        let mut s = FreeRingSum::default();
        s.add_term(w, BigInt::from(c));
        s
    }

    pub fn add_term(&mut self, w: FreeWord, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &FreeRingSum) -> FreeRingSum {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> FreeRingSum {
        let mut out = FreeRingSum::default();
        for (w, c) in &self.terms {
            out.terms.insert(w.clone(), -c);
        }
        out
    }

    pub fn sub(&self, other: &FreeRingSum) -> FreeRingSum {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FreeRingSum) -> FreeRingSum {
        let mut out = FreeRingSum::default();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FreeWord, &BigInt)> {
        self.terms.iter()
    }

    pub fn render(&self, names: &dyn Fn(u32) -> String) -> String {
        crate::ring::render_terms(self.terms.iter().map(|(w, c)| (c.clone(), w.render(names))))
    }
}

/// Fox derivative d(r)/d(x): a single left-to-right pass keeping the
/// running prefix. Satisfies d(x)/d(x) = 1, d(x^-1)/d(x) = -x^-1 and
/// d(uv)/d(x) = d(u)/d(x) + u d(v)/d(x).
pub fn fox_derivative(r: &FreeWord, x: u32) -> FreeRingSum {
    let mut acc = FreeRingSum::zero();
    let mut prefix = FreeWord::identity();
    for &(g, e) in r.letters() {
        if e == 1 {
            if g == x {
                acc.add_term(prefix.clone(), BigInt::from(1));
            }
            prefix = prefix.concat(&FreeWord::from_letters([(g, 1)]));
        } else {
            prefix = prefix.concat(&FreeWord::from_letters([(g, -1)]));
            if g == x {
                acc.add_term(prefix.clone(), BigInt::from(-1));
            }
        }
    }
    acc
}

/// The symbolic Jacobian: entry (i, j) = d(relator_i)/d(generator_j) in
/// the free group ring.
pub fn symbolic_jacobian(p: &Presentation) -> Vec<Vec<FreeRingSum>> {
    p.relators
        .iter()
        .map(|r| (0..p.gen_count() as u32).map(|x| fox_derivative(r, x)).collect())
        .collect()
}

/// Evaluation of presentation generators into a coefficient ring.
pub enum EvalMap {
    /// generator i -> element of a finite group G, coefficients Z\[G\]
    Finite { group: GroupRef, images: Vec<u16> },
    /// generator i -> a^{exps\[i\]} in Z\[a\]/(a^n - 1)
    Cyclic { n: usize, exps: Vec<usize> },
    /// generator i -> amalgam normal form
    Amalgam { amalgam: Amalgam, images: Vec<AmalgamElt> },
}

impl EvalMap {
    fn check_images(&self, p: &Presentation) -> Result<(), FoxError> {
        let count = match self {
            EvalMap::Finite { images, .. } => images.len(),
            EvalMap::Cyclic { exps, .. } => exps.len(),
            EvalMap::Amalgam { images, .. } => images.len(),
        };
        if count != p.gen_count() {
            return Err(FoxError::ImageCountMismatch);
        }
        for r in &p.relators {
            let ok = match self {
                EvalMap::Finite { group, images } => eval_word_finite(group, images, r) == 0,
                EvalMap::Cyclic { n, exps } => eval_word_exp(*n, exps, r) == 0,
                EvalMap::Amalgam { amalgam, images } => eval_word_amalgam(amalgam, images, r).is_identity(),
            };
            if !ok {
                return Err(FoxError::RelatorViolated(r.to_string()));
            }
        }
        Ok(())
    }
}

pub fn eval_word_finite(group: &GroupRef, images: &[u16], w: &FreeWord) -> u16 {
    let mut acc = 0u16;
    for &(g, e) in w.letters() {
        let img = images[g as usize];
        acc = group.mul(acc, if e == 1 { img } else { group.inv(img) });
    }
    acc
}

fn eval_word_exp(n: usize, exps: &[usize], w: &FreeWord) -> usize {
    let mut acc = 0usize;
    for &(g, e) in w.letters() {
        let img = exps[g as usize] % n;
        acc = (acc + if e == 1 { img } else { (n - img) % n }) % n;
    }
    acc
}

pub fn eval_word_amalgam(am: &Amalgam, images: &[AmalgamElt], w: &FreeWord) -> AmalgamElt {
    let mut acc = AmalgamElt::identity();
    for &(g, e) in w.letters() {
        let img = &images[g as usize];
        let factor = if e == 1 { img.clone() } else { am.inv(img) };
        acc = am.mul(&acc, &factor);
    }
    acc
}

fn eval_sum<T: RingScalar>(
    s: &FreeRingSum,
    zero: T,
    eval_elt: &dyn Fn(&FreeWord) -> T,
) -> T {
    let mut acc = zero;
    for (w, c) in s.terms() {
        let mut term = eval_elt(w);
        term = scale(&term, c);
        acc = acc.add(&term);
    }
    acc
}

fn scale<T: RingScalar>(x: &T, c: &BigInt) -> T {
    // multiply by the integer c via repeated doubling on the coefficient
    // level: all our scalars store BigInt coefficients, so building from
    // the one-element is wasteful; use add chains only for small c.
    let mut acc = x.zero_like();
    let mut base = x.clone();
    let mut k = c.clone();
    let neg = k < BigInt::zero();
    if neg {
        k = -k;
    }
    while k > BigInt::zero() {
        if (&k % 2u8) == BigInt::from(1u8) {
            acc = acc.add(&base);
        }
        base = base.add(&base);
        k /= 2u8;
    }
    if neg {
        acc.neg()
    } else {
        acc
    }
}

/// The Jacobian evaluated through `target`: entry (i, j) is the image of
/// d(relator_i)/d(generator_j). Rows are relators, columns generators;
/// as a presentation of the augmentation ideal the rows are the
/// relations among the generators (x_j - 1).
pub fn jacobian_finite(p: &Presentation, target: &EvalMap) -> Result<RingMatrix<FiniteRingElt>, FoxError> {
    let EvalMap::Finite { group, images } = target else {
        panic!("jacobian_finite needs a finite evaluation map")
    };
    target.check_images(p)?;
    let sym = symbolic_jacobian(p);
    let zero = FiniteRingElt::zero(group);
    let mut m = RingMatrix::filled(p.relators.len(), p.gen_count(), zero);
    for (i, row) in sym.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            m[(i, j)] = eval_sum(s, FiniteRingElt::zero(group), &|w| {
                FiniteRingElt::element(group, eval_word_finite(group, images, w))
            });
        }
    }
    Ok(m)
}

pub fn jacobian_cyclic(p: &Presentation, target: &EvalMap) -> Result<RingMatrix<CyclicRingElt>, FoxError> {
    let EvalMap::Cyclic { n, exps } = target else {
        panic!("jacobian_cyclic needs a cyclic evaluation map")
    };
    target.check_images(p)?;
    let sym = symbolic_jacobian(p);
    let mut m = RingMatrix::filled(p.relators.len(), p.gen_count(), CyclicRingElt::zero(*n));
    for (i, row) in sym.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            m[(i, j)] = eval_sum(s, CyclicRingElt::zero(*n), &|w| {
                CyclicRingElt::monomial(*n, eval_word_exp(*n, exps, w), 1)
            });
        }
    }
    Ok(m)
}

pub fn jacobian_amalgam(p: &Presentation, target: &EvalMap) -> Result<RingMatrix<AmalgamRingElt>, FoxError> {
    let EvalMap::Amalgam { amalgam, images } = target else {
        panic!("jacobian_amalgam needs an amalgam evaluation map")
    };
    target.check_images(p)?;
    let sym = symbolic_jacobian(p);
    let zero = AmalgamRingElt::zero(amalgam);
    let mut m = RingMatrix::filled(p.relators.len(), p.gen_count(), zero);
    for (i, row) in sym.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            m[(i, j)] = eval_sum(s, AmalgamRingElt::zero(amalgam), &|w| {
                AmalgamRingElt::from_element(amalgam, eval_word_amalgam(amalgam, images, w))
            });
        }
    }
    Ok(m)
}

/// Fundamental identity of the free calculus:
/// sum_j d(r)/d(x_j) (x_j - 1) = r - 1 in the free group ring.
pub fn fundamental_identity_holds(r: &FreeWord, gen_count: u32) -> bool {
    let mut lhs = FreeRingSum::zero();
    for j in 0..gen_count {
        let d = fox_derivative(r, j);
        let xj = FreeRingSum::from_word(FreeWord::generator(j), 1).sub(&FreeRingSum::one());
        lhs = lhs.add(&d.mul(&xj));
    }
    let rhs = FreeRingSum::from_word(r.clone(), 1).sub(&FreeRingSum::one());
    lhs == rhs
}
