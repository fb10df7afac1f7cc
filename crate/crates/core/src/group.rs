//! Finite groups as explicit multiplication tables.
//!
//! Element 0 is always the identity and element ordering is the discovery
//! order of the construction, so everything downstream is deterministic.
//! Validation is exhaustive: Latin-square check, inverses, generator
//! closure, and associativity via Light's test over the generating set.

use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;
use thiserror::Error;

/// Default cap on group order for catalog constructors and closures.
pub const DEFAULT_ORDER_CAP: usize = 1024;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("closure exceeded cap of {0} elements")]
    CapExceeded(usize),
    #[error("inputs are not permutations of a common finite set")]
    NotPermutations,
    #[error("multiplication table is not a group: {0}")]
    NotAGroup(String),
}

/// Family descriptors for the catalog constructors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CatalogTag {
    /// Z/nZ
    Cyclic(u64),
    /// D_{2m} of order 2m, m odd >= 3
    Dihedral(u64),
    /// Q(2^k), k >= 3
    Quaternionic(u32),
    /// <a,b | a^n = b^m = 1, a b a^-1 = b^r>
    Metacyclic { m: u64, n: u64, r: u64 },
    /// T*_k of order 8 * 3^k
    BinaryTetrahedral(u32),
    /// O*_k of order 16 * 3^k
    BinaryOctahedral(u32),
    /// SL(2,p)
    Sl2(u64),
    /// TL(2,p): determinant 1 or omega, twisted multiplication
    Tl2(u64),
    /// Direct product
    Product(Box<CatalogTag>, Box<CatalogTag>),
}

impl fmt::Display for CatalogTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogTag::Cyclic(n) => write!(f, "cyclic({n})"),
            CatalogTag::Dihedral(n) => write!(f, "dihedral({n})"),
            CatalogTag::Quaternionic(k) => write!(f, "quaternionic({})", 1u64 << k),
            CatalogTag::Metacyclic { m, n, r } => write!(f, "metacyclic({m},{n},{r})"),
            CatalogTag::BinaryTetrahedral(k) => write!(f, "binary_tetrahedral({k})"),
            CatalogTag::BinaryOctahedral(k) => write!(f, "binary_octahedral({k})"),
            CatalogTag::Sl2(p) => write!(f, "SL2({p})"),
            CatalogTag::Tl2(p) => write!(f, "TL2({p})"),
            CatalogTag::Product(a, b) => write!(f, "product({a},{b})"),
        }
    }
}

/// A finite group given by its full multiplication table.
#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u16>,
    inverses: Vec<u16>,
    generators: Vec<u16>,
    labels: Vec<String>,
    /// element = factorization.0 * generators[factorization.1]; identity has none
    factorization: Vec<Option<(u16, u16)>>,
    pub catalog_tag: Option<CatalogTag>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order={}", self.order)?;
        if let Some(tag) = &self.catalog_tag {
            write!(f, ", tag={tag}")?;
        }
        write!(f, ")")
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table && self.generators == other.generators
    }
}
impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Build and validate a group from a raw table. `generators` must
    /// generate; associativity is certified by Light's test over them.
    pub fn from_table(
        table: Vec<u16>,
        generators: Vec<u16>,
        labels: Option<Vec<String>>,
        catalog_tag: Option<CatalogTag>,
    ) -> Result<FiniteGroup, GroupError> {
        let order = (table.len() as f64).sqrt() as usize;
        if order * order != table.len() || order == 0 {
            return Err(GroupError::NotAGroup("table is not square".into()));
        }
        if order > u16::MAX as usize {
            return Err(GroupError::CapExceeded(u16::MAX as usize));
        }
        let labels = labels.unwrap_or_else(|| (0..order).map(|i| format!("g{i}")).collect());
        if labels.len() != order {
            return Err(GroupError::NotAGroup("label count mismatch".into()));
        }
        let mut g = FiniteGroup {
            order,
            table,
            inverses: vec![0; order],
            generators,
            labels,
            factorization: vec![None; order],
            catalog_tag,
        };
        g.validate()?;
        g.compute_factorization()?;
        Ok(g)
    }

    fn validate(&mut self) -> Result<(), GroupError> {
        let n = self.order;
        let idx = |i: usize, j: usize| i * n + j;
        // identity row and column
        for i in 0..n {
            if self.table[idx(0, i)] as usize != i || self.table[idx(i, 0)] as usize != i {
                return Err(GroupError::NotAGroup("element 0 is not an identity".into()));
            }
        }
        // Latin square
        for i in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for j in 0..n {
                let r = self.table[idx(i, j)] as usize;
                let c = self.table[idx(j, i)] as usize;
                if r >= n || c >= n || seen_row[r] || seen_col[c] {
                    return Err(GroupError::NotAGroup("not a Latin square".into()));
                }
                seen_row[r] = true;
                seen_col[c] = true;
            }
        }
        // inverses
        for i in 0..n {
            let mut found = None;
            for j in 0..n {
                if self.table[idx(i, j)] == 0 {
                    found = Some(j as u16);
                    break;
                }
            }
            let j = found.ok_or_else(|| GroupError::NotAGroup("missing inverse".into()))?;
            if self.table[idx(j as usize, i)] != 0 {
                return Err(GroupError::NotAGroup("one-sided inverse".into()));
            }
            self.inverses[i] = j;
        }
        // generator closure
        if self.generators.is_empty() && n > 1 {
            return Err(GroupError::NotAGroup("no generators for nontrivial group".into()));
        }
        let closure = closure_of(self, &self.generators.clone());
        if closure.len() != n {
            return Err(GroupError::NotAGroup("generators do not generate".into()));
        }
        // Light's associativity test over the generating set
        for &a in &self.generators {
            for x in 0..n {
                let xa = self.table[idx(x, a as usize)] as usize;
                for y in 0..n {
                    let ay = self.table[idx(a as usize, y)] as usize;
                    if self.table[idx(xa, y)] != self.table[idx(x, ay)] {
                        return Err(GroupError::NotAGroup("associativity fails".into()));
                    }
                }
            }
        }
        Ok(())
    }

    fn compute_factorization(&mut self) -> Result<(), GroupError> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = std::collections::VecDeque::from([0u16]);
        while let Some(x) = queue.pop_front() {
            for &g in &self.generators {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    self.factorization[y as usize] = Some((x, g));
                    queue.push_back(y);
                }
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err(GroupError::NotAGroup("generators do not generate".into()))
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn generators(&self) -> &[u16] {
        &self.generators
    }

    pub fn label(&self, g: u16) -> &str {
        &self.labels[g as usize]
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        self.inverses[a as usize]
    }

    pub fn pow(&self, a: u16, k: i64) -> u16 {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut e = k.unsigned_abs();
        let mut acc = 0u16;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            e >>= 1;
        }
        acc
    }

    pub fn conjugate(&self, g: u16, x: u16) -> u16 {
        // g x g^-1
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: u16) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn elements(&self) -> impl Iterator<Item = u16> + '_ {
        0..self.order as u16
    }

    /// Word in the generator list expressing `g` (positive letters only).
    pub fn word_for(&self, g: u16) -> Vec<u16> {
        let mut out = Vec::new();
        let mut cur = g;
        while let Some((parent, gen)) = self.factorization[cur as usize] {
            out.push(gen);
            cur = parent;
        }
        out.reverse();
        // map elements back to generator list positions
        out.iter()
            .map(|e| self.generators.iter().position(|g| g == e).expect("generator") as u16)
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        for a in 0..self.order as u16 {
            for b in 0..a {
                if self.mul(a, b) != self.mul(b, a) {
                    return false;
                }
            }
        }
        true
    }

    pub fn center(&self) -> Vec<u16> {
        self.elements()
            .filter(|&z| self.elements().all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }

    pub fn involutions(&self) -> Vec<u16> {
        self.elements().filter(|&g| g != 0 && self.mul(g, g) == 0).collect()
    }

    pub fn conjugacy_class(&self, x: u16) -> BTreeSet<u16> {
        self.elements().map(|g| self.conjugate(g, x)).collect()
    }

    /// Element-order histogram, a cheap isomorphism fingerprint.
    pub fn order_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for g in self.elements() {
            *h.entry(self.element_order(g)).or_insert(0) += 1;
        }
        h
    }
}

/// Closure of a subset under multiplication (sorted ascending).
pub fn closure_of(g: &FiniteGroup, set: &[u16]) -> Vec<u16> {
    let mut seen = vec![false; g.order()];
    seen[0] = true;
    let mut stack: Vec<u16> = vec![0];
    for &s in set {
        if !seen[s as usize] {
            seen[s as usize] = true;
            stack.push(s);
        }
    }
    let mut frontier = stack.clone();
    while let Some(x) = frontier.pop() {
        for &s in set {
            for y in [g.mul(x, s), g.mul(s, x)] {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    frontier.push(y);
                }
            }
        }
    }
    (0..g.order() as u16).filter(|&i| seen[i as usize]).collect()
}

/// Centralizer of a subset.
pub fn centralizer(g: &FiniteGroup, set: &[u16]) -> Vec<u16> {
    g.elements()
        .filter(|&c| set.iter().all(|&s| g.mul(c, s) == g.mul(s, c)))
        .collect()
}

/// Normalizer of the subgroup generated by a subset.
pub fn normalizer(g: &FiniteGroup, set: &[u16]) -> Vec<u16> {
    let h: BTreeSet<u16> = closure_of(g, set).into_iter().collect();
    g.elements()
        .filter(|&n| h.iter().all(|&x| h.contains(&g.conjugate(n, x))))
        .collect()
}

/// One Sylow p-subgroup, found by greedy closure over p-power-order
/// elements. A maximal p-subgroup is Sylow, and the order is verified
/// against the p-part of |G|.
pub fn sylow(g: &FiniteGroup, p: usize) -> Vec<u16> {
    let mut sub: Vec<u16> = vec![0];
    loop {
        let cur: BTreeSet<u16> = sub.iter().copied().collect();
        let mut extended = false;
        for cand in g.elements() {
            if cur.contains(&cand) {
                continue;
            }
            let o = g.element_order(cand);
            if !is_p_power(o, p) {
                continue;
            }
            let mut gens: Vec<u16> = sub.iter().copied().filter(|&x| x != 0).collect();
            gens.push(cand);
            let cl = closure_of(g, &gens);
            if is_p_power(cl.len(), p) {
                sub = cl;
                extended = true;
                break;
            }
        }
        if !extended {
            break;
        }
    }
    let mut p_part = 1;
    let mut n = g.order();
    while n % p == 0 {
        p_part *= p;
        n /= p;
    }
    assert_eq!(sub.len(), p_part, "greedy Sylow is not maximal");
    sub
}

fn is_p_power(mut n: usize, p: usize) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// Closure of a set of permutations (or any concrete finite group
/// elements) into a full multiplication table. Discovery order is BFS
/// over the generator list, so element numbering is deterministic.
pub(crate) fn table_from_concrete<T: Clone + Eq + Hash>(
    identity: T,
    gens: &[T],
    mul: impl Fn(&T, &T) -> T,
    label: impl Fn(&T) -> String,
    cap: usize,
    tag: Option<CatalogTag>,
) -> Result<FiniteGroup, GroupError> {
    let mut index: HashMap<T, u16> = HashMap::new();
    let mut elems: Vec<T> = vec![identity.clone()];
    index.insert(identity, 0);
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let prod = mul(&elems[i], g);
            if !index.contains_key(&prod) {
                if elems.len() >= cap {
                    return Err(GroupError::CapExceeded(cap));
                }
                index.insert(prod.clone(), elems.len() as u16);
                elems.push(prod);
                queue.push_back(elems.len() - 1);
            }
        }
    }
    let n = elems.len();
    let mut table = vec![0u16; n * n];
    for i in 0..n {
        for j in 0..n {
            let prod = mul(&elems[i], &elems[j]);
            let k = *index
                .get(&prod)
                .ok_or_else(|| GroupError::NotAGroup("set not closed under products".into()))?;
            table[i * n + j] = k;
        }
    }
    let gen_idx: Vec<u16> = gens.iter().map(|g| index[g]).collect();
    let labels: Vec<String> = elems.iter().map(&label).collect();
    FiniteGroup::from_table(table, gen_idx, Some(labels), tag)
}

/// Group generated by permutations of a finite set.
pub fn group_from_generators(perms: &[Vec<u16>], cap: usize) -> Result<FiniteGroup, GroupError> {
    if perms.is_empty() {
        return Err(GroupError::InvalidParameters("empty generator list".into()));
    }
    let degree = perms[0].len();
    for p in perms {
        if p.len() != degree {
            return Err(GroupError::NotPermutations);
        }
        let mut seen = vec![false; degree];
        for &x in p {
            if (x as usize) >= degree || seen[x as usize] {
                return Err(GroupError::NotPermutations);
            }
            seen[x as usize] = true;
        }
    }
    let identity: Vec<u16> = (0..degree as u16).collect();
    let compose = |a: &Vec<u16>, b: &Vec<u16>| -> Vec<u16> {
        // (a*b)(x) = a(b(x))
        (0..degree).map(|x| a[b[x] as usize]).collect()
    };
    table_from_concrete(identity, perms, compose, |_| String::new(), cap, None).map(|mut g| {
        for i in 0..g.order {
            g.labels[i] = format!("g{i}");
        }
        g
    })
}

/// Tri-state answer for "does the cohomological period divide 4".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

/// Structural profile used by the admissibility filters.
#[derive(Debug, Clone, Serialize)]
pub struct GroupProfile {
    pub is_cyclic: bool,
    pub is_metacyclic: bool,
    pub is_dihedral_odd: bool,
    pub has_periodic_cohomology: bool,
    pub period_divides_4: TriState,
    pub unique_central_involution: Option<u16>,
    pub involution_classes: usize,
}

/// Witness that the group contains Z/pZ x| Z/qZ with trivial centre,
/// certifying cohomological period greater than 4.
#[derive(Debug, Clone, Serialize)]
pub struct PqWitness {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub a: u16,
    pub b: u16,
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Search for a subgroup Z/pZ x| Z/qZ (p odd prime, q an odd prime or 4,
/// action by a primitive q-th root, trivial centre).
pub fn find_pq_subgroup(g: &FiniteGroup) -> Option<PqWitness> {
    for b in g.elements() {
        let p = g.element_order(b);
        if p % 2 == 0 || !is_prime(p) || p < 3 {
            continue;
        }
        let powers: Vec<u16> = {
            let mut v = Vec::with_capacity(p);
            let mut x = 0u16;
            for _ in 0..p {
                v.push(x);
                x = g.mul(x, b);
            }
            v
        };
        for a in g.elements() {
            let q = g.element_order(a);
            if !(q == 4 || (q % 2 == 1 && is_prime(q))) || q == 1 {
                continue;
            }
            let c = g.conjugate(a, b);
            let Some(r) = powers.iter().position(|&x| x == c) else {
                continue;
            };
            if r <= 1 {
                continue;
            }
            // r must be a primitive q-th root mod p
            let mut rk = r;
            let mut ord = 1;
            while rk != 1 {
                rk = rk * r % p;
                ord += 1;
                if ord > q {
                    break;
                }
            }
            if ord != q {
                continue;
            }
            let sub = closure_of(g, &[a, b]);
            let subset: BTreeSet<u16> = sub.iter().copied().collect();
            let central = sub
                .iter()
                .filter(|&&z| subset.iter().all(|&x| g.mul(z, x) == g.mul(x, z)))
                .count();
            if central == 1 {
                return Some(PqWitness { p, q, r, a, b });
            }
        }
    }
    None
}

/// Dihedral detection: a of order 2 and b of odd order m >= 3 with
/// a b a^-1 = b^-1 generating the whole group.
pub fn dihedral_odd_params(g: &FiniteGroup) -> Option<(u16, u16, usize)> {
    let n = g.order();
    if n % 2 != 0 || n < 6 || (n / 2) % 2 == 0 {
        return None;
    }
    let m = n / 2;
    for b in g.elements() {
        if g.element_order(b) != m {
            continue;
        }
        for a in g.involutions() {
            if g.conjugate(a, b) == g.inv(b) && closure_of(g, &[a, b]).len() == n {
                return Some((a, b, m));
            }
        }
    }
    None
}

/// Generalized quaternion detection: x of order 2^{k-1}, y with
/// y^2 = x^{2^{k-2}} and y x y^-1 = x^-1.
pub fn quaternionic_params(g: &FiniteGroup) -> Option<(u16, u16)> {
    let n = g.order();
    if n < 8 || !is_p_power(n, 2) {
        return None;
    }
    let half = n / 2;
    for x in g.elements() {
        if g.element_order(x) != half {
            continue;
        }
        let xc = g.pow(x, (half / 2) as i64);
        for y in g.elements() {
            if g.mul(y, y) == xc && g.conjugate(y, x) == g.inv(x) && closure_of(g, &[x, y]).len() == n {
                return Some((x, y));
            }
        }
    }
    None
}

/// Metacyclic <a,b | a^{2^e} = b^m = 1, a b a^-1 = b^-1> detection (m odd).
/// These have cohomological period dividing 4.
fn metacyclic_neg_one(g: &FiniteGroup) -> bool {
    let n = g.order();
    let mut m = n;
    let mut two = 1usize;
    while m % 2 == 0 {
        m /= 2;
        two *= 2;
    }
    if m < 3 || two < 2 {
        return false;
    }
    for b in g.elements() {
        if g.element_order(b) != m {
            continue;
        }
        for a in g.elements() {
            if g.element_order(a) != two {
                continue;
            }
            if g.conjugate(a, b) == g.inv(b) && closure_of(g, &[a, b]).len() == n {
                return true;
            }
        }
    }
    false
}

fn has_periodic_cohomology(g: &FiniteGroup) -> bool {
    // no Z/p x Z/p subgroup: two commuting elements of the same prime
    // order p with y outside <x> would generate one
    let orders: Vec<usize> = g.elements().map(|x| g.element_order(x)).collect();
    for x in g.elements() {
        let p = orders[x as usize];
        if !is_prime(p) {
            continue;
        }
        let powers: BTreeSet<u16> = {
            let mut v = BTreeSet::new();
            let mut z = 0u16;
            for _ in 0..p {
                v.insert(z);
                z = g.mul(z, x);
            }
            v
        };
        for y in g.elements() {
            if orders[y as usize] == p && !powers.contains(&y) && g.mul(x, y) == g.mul(y, x) {
                return false;
            }
        }
    }
    true
}

fn is_cyclic(g: &FiniteGroup) -> bool {
    g.elements().any(|x| g.element_order(x) == g.order())
}

/// Compute the structural profile of a validated group.
pub fn classify_group(g: &FiniteGroup) -> GroupProfile {
    let cyclic = is_cyclic(g);
    let periodic = has_periodic_cohomology(g);
    // metacyclic in the sense "all Sylow subgroups cyclic"
    let metacyclic = {
        let mut n = g.order();
        let mut primes = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                primes.push(d);
                while n % d == 0 {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            primes.push(n);
        }
        primes.iter().all(|&p| {
            let s = sylow(g, p);
            let sub_orders: Vec<usize> = s.iter().map(|&x| g.element_order(x)).collect();
            sub_orders.iter().any(|&o| o == s.len())
        })
    };
    let dihedral = dihedral_odd_params(g).is_some();

    let invs = g.involutions();
    let center: BTreeSet<u16> = g.center().into_iter().collect();
    let unique_central_involution = if invs.len() == 1 && center.contains(&invs[0]) {
        Some(invs[0])
    } else {
        None
    };
    let mut classes: Vec<BTreeSet<u16>> = Vec::new();
    for &i in &invs {
        if !classes.iter().any(|c| c.contains(&i)) {
            classes.push(g.conjugacy_class(i));
        }
    }

    let period_divides_4 = if !periodic {
        TriState::No
    } else if find_pq_subgroup(g).is_some() {
        TriState::No
    } else if cyclic || dihedral || quaternionic_params(g).is_some() || metacyclic_neg_one(g) {
        TriState::Yes
    } else if period4_by_split(g) {
        TriState::Yes
    } else {
        TriState::Unknown
    };

    GroupProfile {
        is_cyclic: cyclic,
        is_metacyclic: metacyclic,
        is_dihedral_odd: dihedral,
        has_periodic_cohomology: periodic,
        period_divides_4,
        unique_central_involution,
        involution_classes: classes.len(),
    }
}

/// Try to split off a central cyclic direct factor of odd order coprime
/// to the rest, then recognize the complement as one of the period-4
/// families (cyclic, dihedral-odd, quaternionic, metacyclic with r = -1,
/// or a binary polyhedral fingerprint).
fn period4_by_split(g: &FiniteGroup) -> bool {
    if binary_polyhedral_fingerprint(g) {
        return true;
    }
    let n = g.order();
    for z in g.center() {
        if z == 0 {
            continue;
        }
        let d = g.element_order(z);
        if d % 2 == 0 || n % d != 0 || num_integer::gcd(d, n / d) != 1 {
            continue;
        }
        // complement = elements of order dividing n/d
        let q = (n / d) as i64;
        let b: Vec<u16> = g.elements().filter(|&x| g.pow(x, q) == 0).collect();
        if b.len() != n / d {
            continue;
        }
        let bset: BTreeSet<u16> = b.iter().copied().collect();
        if !b.iter().all(|&x| b.iter().all(|&y| bset.contains(&g.mul(x, y)))) {
            continue;
        }
        let sub = subgroup_as_group(g, &b);
        let p = classify_group(&sub);
        if p.period_divides_4 == TriState::Yes {
            return true;
        }
    }
    false
}

/// Compare against the binary polyhedral groups T*_k, O*_k, I* by order
/// shape, involution count and element-order histogram.
fn binary_polyhedral_fingerprint(g: &FiniteGroup) -> bool {
    use crate::catalog::construct_catalog_group;
    let n = g.order();
    if g.involutions().len() != 1 {
        return false;
    }
    let mut candidates: Vec<CatalogTag> = Vec::new();
    let mut t = n;
    let mut threes = 0u32;
    while t % 3 == 0 {
        t /= 3;
        threes += 1;
    }
    if threes >= 1 && t == 8 {
        candidates.push(CatalogTag::BinaryTetrahedral(threes));
    }
    if threes >= 1 && t == 16 {
        candidates.push(CatalogTag::BinaryOctahedral(threes));
    }
    if n == 120 {
        candidates.push(CatalogTag::Sl2(5));
    }
    for tag in candidates {
        if let Ok(reference) = construct_catalog_group(&tag, DEFAULT_ORDER_CAP) {
            if reference.order_histogram() == g.order_histogram() {
                return true;
            }
        }
    }
    false
}

/// Profile cache for catalog-tagged groups (classification is pure and
/// deterministic, and the admissibility filters ask repeatedly).
pub fn cached_profile(g: &FiniteGroup) -> GroupProfile {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};
    let Some(tag) = &g.catalog_tag else { return classify_group(g) };
    static CACHE: OnceLock<Mutex<HashMap<String, GroupProfile>>> = OnceLock::new();
    let key = tag.to_string();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&key) {
        return p.clone();
    }
    let p = classify_group(g);
    cache.lock().unwrap().insert(key, p.clone());
    p
}

/// View a subgroup (given as a sorted element list) as a standalone group.
pub fn subgroup_as_group(g: &FiniteGroup, elements: &[u16]) -> FiniteGroup {
    let n = elements.len();
    let pos: HashMap<u16, u16> = elements.iter().enumerate().map(|(i, &e)| (e, i as u16)).collect();
    assert_eq!(elements[0], 0, "subgroup must contain the identity first");
    let mut table = vec![0u16; n * n];
    for i in 0..n {
        for j in 0..n {
            table[i * n + j] = pos[&g.mul(elements[i], elements[j])];
        }
    }
    let gens: Vec<u16> = (1..n as u16).collect();
    let labels: Vec<String> = elements.iter().map(|&e| g.label(e).to_string()).collect();
    FiniteGroup::from_table(table, gens, Some(labels), None).expect("subgroup is a group")
}

/// Shared handle used across the ring and graph layers.
pub type GroupRef = Arc<FiniteGroup>;
