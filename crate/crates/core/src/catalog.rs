//! Catalog constructors for the finite-group families with periodic
//! cohomology, together with their standard presentations and the
//! distinguished involution used by the realization pipeline.

use crate::group::{table_from_concrete, CatalogTag, FiniteGroup, GroupError, DEFAULT_ORDER_CAP};
use crate::toddcox::presented_order;
use num_integer::gcd;

/// A presentation of a catalog group, aligned with the group's generator
/// list: presentation generator i maps to `gen_elements\[i\]`.
#[derive(Debug, Clone)]
pub struct CatalogPresentation {
    pub gen_names: Vec<String>,
    pub gen_elements: Vec<u16>,
    /// relators as syllable words (generator index, exponent)
    pub relators: Vec<Vec<(usize, i32)>>,
    /// distinguished involution as a word over the generators, if the
    /// group has one usable for amalgamation
    pub involution: Option<(Vec<(usize, i32)>, u16)>,
}

/// Evaluate a syllable word at the given generator images.
pub fn eval_word(g: &FiniteGroup, images: &[u16], word: &[(usize, i32)]) -> u16 {
    let mut acc = 0u16;
    for &(gi, e) in word {
        acc = g.mul(acc, g.pow(images[gi], e as i64));
    }
    acc
}

fn is_prime(n: u64) -> bool {
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

/// Construct-once cache for catalog groups, keyed by tag. Construction
/// is deterministic, so sharing is safe; the per-call `cap` still gates
/// the order.
pub fn cached_catalog_group(
    tag: &CatalogTag,
    cap: usize,
) -> Result<crate::group::GroupRef, GroupError> {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<String, crate::group::GroupRef>>> = OnceLock::new();
    let key = tag.to_string();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(g) = cache.lock().unwrap().get(&key) {
        return if g.order() <= cap {
            Ok(g.clone())
        } else {
            Err(GroupError::InvalidParameters(format!("order {} exceeds cap {cap}", g.order())))
        };
    }
    let built = Arc::new(construct_catalog_group(tag, cap.max(DEFAULT_ORDER_CAP))?);
    cache.lock().unwrap().insert(key, built.clone());
    if built.order() <= cap {
        Ok(built)
    } else {
        Err(GroupError::InvalidParameters(format!("order {} exceeds cap {cap}", built.order())))
    }
}

/// Build a validated catalog group. `cap` bounds the order (the default
/// used by the CLI is [`DEFAULT_ORDER_CAP`]).
pub fn construct_catalog_group(tag: &CatalogTag, cap: usize) -> Result<FiniteGroup, GroupError> {
    let g = match tag {
        CatalogTag::Cyclic(n) => cyclic(*n, cap)?,
        CatalogTag::Dihedral(two_m) => dihedral(*two_m, cap)?,
        CatalogTag::Quaternionic(k) => quaternionic(*k, cap)?,
        CatalogTag::Metacyclic { m, n, r } => metacyclic(*m, *n, *r, cap)?,
        CatalogTag::BinaryTetrahedral(k) => binary_tetrahedral(*k, cap)?,
        CatalogTag::BinaryOctahedral(k) => binary_octahedral(*k, cap)?,
        CatalogTag::Sl2(p) => special_linear(*p, false, cap)?,
        CatalogTag::Tl2(p) => special_linear(*p, true, cap)?,
        CatalogTag::Product(a, b) => product(a, b, cap)?,
    };
    if let Some(p) = catalog_presentation(&g) {
        verify_presentation(&g, &p)?;
    }
    Ok(g)
}

/// Check that the stored presentation's relators hold in the table and
/// that the presented group has the same order (coset enumeration).
fn verify_presentation(g: &FiniteGroup, p: &CatalogPresentation) -> Result<(), GroupError> {
    for r in &p.relators {
        if eval_word(g, &p.gen_elements, r) != 0 {
            return Err(GroupError::NotAGroup("presentation relator fails in table".into()));
        }
    }
    let enumerated = presented_order(p.gen_names.len(), &p.relators, 40 * g.order() + 200)
        .ok_or_else(|| GroupError::NotAGroup("coset enumeration did not close".into()))?;
    if enumerated != g.order() {
        return Err(GroupError::NotAGroup(format!(
            "presentation gives order {enumerated}, table has {}",
            g.order()
        )));
    }
    if let Some((word, elt)) = &p.involution {
        if eval_word(g, &p.gen_elements, word) != *elt || g.element_order(*elt) != 2 {
            return Err(GroupError::NotAGroup("involution word mismatch".into()));
        }
    }
    Ok(())
}

fn check_cap(order: u64, cap: usize) -> Result<usize, GroupError> {
    if order == 0 {
        return Err(GroupError::InvalidParameters("order must be positive".into()));
    }
    if order > cap as u64 {
        return Err(GroupError::InvalidParameters(format!("order {order} exceeds cap {cap}")));
    }
    Ok(order as usize)
}

fn cyclic(n: u64, cap: usize) -> Result<FiniteGroup, GroupError> {
    let n = check_cap(n, cap)?;
    let mut table = vec![0u16; n * n];
    for i in 0..n {
        for j in 0..n {
            table[i * n + j] = ((i + j) % n) as u16;
        }
    }
    let labels = (0..n)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "a".to_string(),
            _ => format!("a^{i}"),
        })
        .collect();
    let gens = if n > 1 { vec![1u16] } else { vec![] };
    FiniteGroup::from_table(table, gens, Some(labels), Some(CatalogTag::Cyclic(n as u64)))
}

fn dihedral(two_m: u64, cap: usize) -> Result<FiniteGroup, GroupError> {
    if two_m % 2 != 0 || two_m < 6 || (two_m / 2) % 2 == 0 {
        return Err(GroupError::InvalidParameters(format!(
            "dihedral({two_m}): order must be 2m with m odd and at least 3"
        )));
    }
    let n = check_cap(two_m, cap)?;
    let m = n / 2;
    // element e*m + j  <->  a^e b^j
    let idx = |e: usize, j: usize| (e * m + j) as u16;
    let mut table = vec![0u16; n * n];
    for e1 in 0..2 {
        for j1 in 0..m {
            for e2 in 0..2 {
                for j2 in 0..m {
                    let j = if e2 == 1 { (m - j1) % m } else { j1 };
                    table[(e1 * m + j1) * n + (e2 * m + j2)] = idx((e1 + e2) % 2, (j + j2) % m);
                }
            }
        }
    }
    let labels = (0..n)
        .map(|i| {
            let (e, j) = (i / m, i % m);
            match (e, j) {
                (0, 0) => "1".into(),
                (0, 1) => "b".into(),
                (0, _) => format!("b^{j}"),
                (1, 0) => "a".into(),
                (1, 1) => "a*b".into(),
                _ => format!("a*b^{j}"),
            }
        })
        .collect();
    FiniteGroup::from_table(table, vec![idx(1, 0), idx(0, 1)], Some(labels), Some(CatalogTag::Dihedral(n as u64)))
}

fn quaternionic(k: u32, cap: usize) -> Result<FiniteGroup, GroupError> {
    if k < 3 {
        return Err(GroupError::InvalidParameters("quaternionic needs order at least 8".into()));
    }
    let n = check_cap(1u64 << k, cap)?;
    let half = n / 2; // order of x
    let quarter = n / 4; // y^2 = x^quarter
    let idx = |i: usize, e: usize| (e * half + i) as u16;
    let mut table = vec![0u16; n * n];
    for e1 in 0..2 {
        for i1 in 0..half {
            for e2 in 0..2 {
                for i2 in 0..half {
                    // x^{i1} y^{e1} x^{i2} y^{e2}
                    let mut i = if e1 == 1 { (i1 + half - i2 % half) % half } else { (i1 + i2) % half };
                    let mut e = e1 + e2;
                    if e == 2 {
                        i = (i + quarter) % half;
                        e = 0;
                    }
                    table[(e1 * half + i1) * n + (e2 * half + i2)] = idx(i, e);
                }
            }
        }
    }
    let labels = (0..n)
        .map(|i| {
            let (e, p) = (i / half, i % half);
            match (e, p) {
                (0, 0) => "1".into(),
                (0, 1) => "x".into(),
                (0, _) => format!("x^{p}"),
                (1, 0) => "y".into(),
                (1, 1) => "x*y".into(),
                _ => format!("x^{p}*y"),
            }
        })
        .collect();
    FiniteGroup::from_table(
        table,
        vec![idx(1, 0), idx(0, 1), idx(quarter, 0)],
        Some(labels),
        Some(CatalogTag::Quaternionic(k)),
    )
}

fn metacyclic(m: u64, n: u64, r: u64, cap: usize) -> Result<FiniteGroup, GroupError> {
    if m < 3 || m % 2 == 0 || n < 2 {
        return Err(GroupError::InvalidParameters(
            "metacyclic(m,n,r) needs odd m >= 3 and n >= 2".into(),
        ));
    }
    if gcd(r, m) != 1 {
        return Err(GroupError::InvalidParameters("metacyclic: r must be a unit mod m".into()));
    }
    let mut rn = 1u64;
    for _ in 0..n {
        rn = rn * r % m;
    }
    if rn != 1 {
        return Err(GroupError::InvalidParameters("metacyclic: r^n != 1 mod m".into()));
    }
    let order = check_cap(m * n, cap)?;
    let (m, n) = (m as usize, n as usize);
    // powers of r mod m
    let mut rp = vec![1usize; n];
    for j in 1..n {
        rp[j] = rp[j - 1] * (r as usize) % m;
    }
    // element j*m + i  <->  b^i a^j ; a^j b = b^{r^j} a^j
    let idx = |i: usize, j: usize| (j * m + i) as u16;
    let mut table = vec![0u16; order * order];
    for j1 in 0..n {
        for i1 in 0..m {
            for j2 in 0..n {
                for i2 in 0..m {
                    let i = (i1 + i2 * rp[j1]) % m;
                    let j = (j1 + j2) % n;
                    table[(j1 * m + i1) * order + (j2 * m + i2)] = idx(i, j);
                }
            }
        }
    }
    let labels = (0..order)
        .map(|x| {
            let (j, i) = (x / m, x % m);
            match (i, j) {
                (0, 0) => "1".into(),
                (0, _) => format!("a^{j}"),
                (_, 0) => format!("b^{i}"),
                _ => format!("b^{i}*a^{j}"),
            }
        })
        .collect();
    FiniteGroup::from_table(
        table,
        vec![idx(0, 1), idx(1, 0)],
        Some(labels),
        Some(CatalogTag::Metacyclic { m: m as u64, n: n as u64, r }),
    )
}

fn product(a: &CatalogTag, b: &CatalogTag, cap: usize) -> Result<FiniteGroup, GroupError> {
    let ga = construct_catalog_group(a, cap)?;
    let gb = construct_catalog_group(b, cap)?;
    let order = check_cap(ga.order() as u64 * gb.order() as u64, cap)?;
    let nb = gb.order();
    let idx = |x: u16, y: u16| (x as usize * nb + y as usize) as u16;
    let mut table = vec![0u16; order * order];
    for x1 in 0..ga.order() as u16 {
        for y1 in 0..nb as u16 {
            for x2 in 0..ga.order() as u16 {
                for y2 in 0..nb as u16 {
                    table[idx(x1, y1) as usize * order + idx(x2, y2) as usize] =
                        idx(ga.mul(x1, x2), gb.mul(y1, y2));
                }
            }
        }
    }
    let mut gens: Vec<u16> = ga.generators().iter().map(|&g| idx(g, 0)).collect();
    gens.extend(gb.generators().iter().map(|&g| idx(0, g)));
    let labels = (0..order)
        .map(|i| {
            let (x, y) = ((i / nb) as u16, (i % nb) as u16);
            match (ga.label(x), gb.label(y)) {
                ("1", "1") => "1".into(),
                (lx, "1") => lx.into(),
                ("1", ly) => ly.into(),
                (lx, ly) => format!("{lx}|{ly}"),
            }
        })
        .collect();
    FiniteGroup::from_table(
        table,
        gens,
        Some(labels),
        Some(CatalogTag::Product(Box::new(a.clone()), Box::new(b.clone()))),
    )
}

/// Order-3 automorphism of Q(8): x -> y -> xy.
fn q8_rotation(q8: &FiniteGroup) -> Vec<u16> {
    let x = q8.generators()[0];
    let y = q8.generators()[1];
    let images = [y, q8.mul(x, y), q8.generators()[2]];
    (0..q8.order() as u16)
        .map(|g| {
            let mut acc = 0u16;
            for gi in q8.word_for(g) {
                acc = q8.mul(acc, images[gi as usize]);
            }
            acc
        })
        .collect()
}

fn binary_tetrahedral(k: u32, cap: usize) -> Result<FiniteGroup, GroupError> {
    if k < 1 {
        return Err(GroupError::InvalidParameters("binary_tetrahedral needs k >= 1".into()));
    }
    let three_k = 3u64.checked_pow(k).ok_or_else(|| GroupError::InvalidParameters("k too large".into()))?;
    check_cap(8 * three_k, cap)?;
    let q8 = quaternionic(3, 8)?;
    let phi = q8_rotation(&q8);
    let tk = three_k as u32;
    // pairs (q, c) with (q1,c1)(q2,c2) = (q1 * phi^{c1 mod 3}(q2), c1+c2)
    let mul = move |a: &(u16, u32), b: &(u16, u32)| -> (u16, u32) {
        let mut qb = b.0;
        for _ in 0..(a.1 % 3) {
            qb = phi[qb as usize];
        }
        (q8.mul(a.0, qb), (a.1 + b.1) % tk)
    };
    let q8l = quaternionic(3, 8)?;
    let gens = vec![(q8l.generators()[0], 0u32), (q8l.generators()[1], 0u32), (0u16, 1u32)];
    let label = move |e: &(u16, u32)| -> String {
        match (q8l.label(e.0), e.1) {
            ("1", 0) => "1".into(),
            (l, 0) => l.into(),
            ("1", 1) => "z".into(),
            ("1", c) => format!("z^{c}"),
            (l, 1) => format!("{l}*z"),
            (l, c) => format!("{l}*z^{c}"),
        }
    };
    table_from_concrete((0u16, 0u32), &gens, mul, label, cap, Some(CatalogTag::BinaryTetrahedral(k)))
}

fn binary_octahedral(k: u32, cap: usize) -> Result<FiniteGroup, GroupError> {
    if k < 1 {
        return Err(GroupError::InvalidParameters("binary_octahedral needs k >= 1".into()));
    }
    let three_k = 3u64.checked_pow(k).ok_or_else(|| GroupError::InvalidParameters("k too large".into()))?;
    check_cap(16 * three_k, cap)?;
    let t = binary_tetrahedral(k, cap)?;
    let (x, y, z) = (t.generators()[0], t.generators()[1], t.generators()[2]);
    // theta: x -> x, y -> xy, z -> xyz^2; theta^2 = conjugation by x
    let theta: Vec<u16> = {
        let images = [x, t.mul(x, y), t.mul(t.mul(x, y), t.mul(z, z))];
        (0..t.order() as u16)
            .map(|g| {
                let mut acc = 0u16;
                for gi in t.word_for(g) {
                    acc = t.mul(acc, images[gi as usize]);
                }
                acc
            })
            .collect()
    };
    for g in 0..t.order() as u16 {
        let tt = theta[theta[g as usize] as usize];
        assert_eq!(tt, t.conjugate(x, g), "theta^2 must be conjugation by x");
    }
    // crossed extension by theta with w^2 = x
    let tm = t.clone();
    let mul = move |a: &(u16, u8), b: &(u16, u8)| -> (u16, u8) {
        let tb = if a.1 == 1 { theta[b.0 as usize] } else { b.0 };
        let mut q = tm.mul(a.0, tb);
        let d = a.1 + b.1;
        if d == 2 {
            q = tm.mul(q, x);
        }
        (q, d % 2)
    };
    let gens = vec![(x, 0u8), (y, 0u8), (z, 0u8), (0u16, 1u8)];
    let tl = t.clone();
    let label = move |e: &(u16, u8)| -> String {
        match (tl.label(e.0), e.1) {
            ("1", 0) => "1".into(),
            (l, 0) => l.into(),
            ("1", 1) => "w".into(),
            (l, 1) => format!("{l}*w"),
            _ => unreachable!(),
        }
    };
    let g = table_from_concrete((0u16, 0u8), &gens, mul, label, cap, Some(CatalogTag::BinaryOctahedral(k)))?;
    if g.involutions().len() != 1 {
        return Err(GroupError::NotAGroup("binary octahedral must have a unique involution".into()));
    }
    Ok(g)
}

fn special_linear(p: u64, twisted: bool, cap: usize) -> Result<FiniteGroup, GroupError> {
    if !is_prime(p) || p < 3 {
        return Err(GroupError::InvalidParameters("SL2/TL2 needs an odd prime".into()));
    }
    let sl_order = p * p * p - p;
    let order = if twisted { 2 * sl_order } else { sl_order };
    check_cap(order, cap)?;
    let p = p as u64;
    // smallest quadratic nonresidue
    let omega = (2..p).find(|&w| (1..p).all(|x| x * x % p != w)).unwrap_or(0);
    let omega_inv = (1..p).find(|&x| x * omega % p == 1).unwrap_or(0);
    type M = [u64; 4];
    let det = move |m: &M| (m[0] * m[3] % p + p * p - m[1] * m[2] % p) % p;
    let mul = move |a: &M, b: &M| -> M {
        let mut c = [
            (a[0] * b[0] + a[1] * b[2]) % p,
            (a[0] * b[1] + a[1] * b[3]) % p,
            (a[2] * b[0] + a[3] * b[2]) % p,
            (a[2] * b[1] + a[3] * b[3]) % p,
        ];
        if twisted && det(a) != 1 && det(b) != 1 {
            for x in c.iter_mut() {
                *x = *x * omega_inv % p;
            }
        }
        c
    };
    let mut gens: Vec<M> = vec![[1, 1, 0, 1], [1, 0, 1, 1]];
    if twisted {
        gens.push([1, 0, 0, omega]);
    }
    let tag = if twisted { CatalogTag::Tl2(p) } else { CatalogTag::Sl2(p) };
    let g = table_from_concrete(
        [1, 0, 0, 1],
        &gens,
        mul,
        |m: &M| format!("[{},{};{},{}]", m[0], m[1], m[2], m[3]),
        cap,
        Some(tag),
    )?;
    if g.order() != order as usize {
        return Err(GroupError::NotAGroup(format!("expected order {order}, got {}", g.order())));
    }
    Ok(g)
}

/// Human-facing generator names for DSL embeddings, aligned with
/// `FiniteGroup::generators()`.
pub fn generator_names(tag: &CatalogTag) -> Vec<String> {
    let strs: Vec<&str> = match tag {
        CatalogTag::Cyclic(1) => vec![],
        CatalogTag::Cyclic(_) => vec!["a"],
        CatalogTag::Dihedral(_) => vec!["a", "b"],
        CatalogTag::Quaternionic(_) => vec!["x", "y", "a"],
        CatalogTag::Metacyclic { .. } => vec!["a", "b"],
        CatalogTag::BinaryTetrahedral(_) => vec!["x", "y", "z"],
        CatalogTag::BinaryOctahedral(_) => vec!["x", "y", "z", "w"],
        CatalogTag::Sl2(_) => vec!["s", "t"],
        CatalogTag::Tl2(_) => vec!["s", "t", "d"],
        CatalogTag::Product(a, b) => {
            let mut names = generator_names(a);
            for n in generator_names(b) {
                let mut n = n;
                while names.contains(&n) {
                    n.push('\'');
                }
                names.push(n);
            }
            return names;
        }
    };
    strs.into_iter().map(String::from).collect()
}

/// The standard presentation of a catalog group, when one is available.
/// SL2/TL2 groups have none and are rejected by the presentation layer.
pub fn catalog_presentation(g: &FiniteGroup) -> Option<CatalogPresentation> {
    let tag = g.catalog_tag.clone()?;
    let gen_names = generator_names(&tag);
    let gen_elements: Vec<u16> = g.generators().to_vec();
    let relators: Vec<Vec<(usize, i32)>>;
    let mut involution: Option<(Vec<(usize, i32)>, u16)> = None;
    match &tag {
        CatalogTag::Cyclic(1) => {
            relators = vec![];
        }
        CatalogTag::Cyclic(n) => {
            relators = vec![vec![(0, *n as i32)]];
            if n % 2 == 0 {
                let w = vec![(0, (*n / 2) as i32)];
                let e = eval_word(g, &gen_elements, &w);
                involution = Some((w, e));
            }
        }
        CatalogTag::Dihedral(two_m) => {
            let s = ((two_m / 2 - 1) / 2) as i32;
            relators = vec![vec![(0, 2)], vec![(0, 1), (1, s), (0, 1), (1, -s - 1)]];
            involution = Some((vec![(0, 1)], gen_elements[0]));
        }
        CatalogTag::Quaternionic(k) => {
            let n = 1i32 << (k - 2);
            relators = vec![
                vec![(0, n), (2, -1)],
                vec![(1, 2), (2, -1)],
                vec![(0, 1), (1, 1), (0, 1), (1, 1), (2, -1)],
            ];
            involution = Some((vec![(2, 1)], gen_elements[2]));
        }
        CatalogTag::Metacyclic { m, n, r } => {
            relators = vec![
                vec![(0, *n as i32)],
                vec![(1, *m as i32)],
                vec![(0, 1), (1, 1), (0, -1), (1, -(*r as i32))],
            ];
            if n % 2 == 0 {
                let w = vec![(0, (*n / 2) as i32)];
                let e = eval_word(g, &gen_elements, &w);
                if g.element_order(e) == 2 && g.center().contains(&e) {
                    involution = Some((w, e));
                }
            }
        }
        CatalogTag::BinaryTetrahedral(k) => {
            relators = vec![
                vec![(0, 2), (1, -2)],
                vec![(1, 1), (0, 1), (1, -1), (0, 1)],
                vec![(2, 1), (0, 1), (2, -1), (1, -1)],
                vec![(2, 1), (1, 1), (2, -1), (1, -1), (0, -1)],
                vec![(2, 3i32.pow(*k))],
            ];
            let w = vec![(0, 2)];
            involution = Some((w.clone(), eval_word(g, &gen_elements, &w)));
        }
        CatalogTag::BinaryOctahedral(k) => {
            relators = vec![
                vec![(0, 2), (1, -2)],
                vec![(1, 1), (0, 1), (1, -1), (0, 1)],
                vec![(2, 1), (0, 1), (2, -1), (1, -1)],
                vec![(2, 1), (1, 1), (2, -1), (1, -1), (0, -1)],
                vec![(2, 3i32.pow(*k))],
                vec![(3, 2), (0, -1)],
                vec![(3, 1), (0, 1), (3, -1), (0, -1)],
                vec![(3, 1), (1, 1), (3, -1), (1, -1), (0, -1)],
                vec![(3, 1), (2, 1), (3, -1), (2, -2), (1, -1), (0, -1)],
            ];
            let w = vec![(0, 2)];
            involution = Some((w.clone(), eval_word(g, &gen_elements, &w)));
        }
        CatalogTag::Sl2(_) | CatalogTag::Tl2(_) => return None,
        CatalogTag::Product(ta, tb) => {
            let ga = construct_catalog_group(ta, DEFAULT_ORDER_CAP).ok()?;
            let gb = construct_catalog_group(tb, DEFAULT_ORDER_CAP).ok()?;
            let pa = catalog_presentation(&ga)?;
            let pb = catalog_presentation(&gb)?;
            let na = pa.gen_names.len();
            let mut rel = pa.relators.clone();
            for r in &pb.relators {
                rel.push(r.iter().map(|&(i, e)| (i + na, e)).collect());
            }
            for i in 0..na {
                for j in 0..pb.gen_names.len() {
                    rel.push(vec![(i, 1), (na + j, 1), (i, -1), (na + j, -1)]);
                }
            }
            relators = rel;
            // inherit a distinguished involution from whichever factor
            // provides the product's unique central involution
            let invs = g.involutions();
            let center = g.center();
            if invs.len() == 1 && center.contains(&invs[0]) {
                let target = invs[0];
                if let Some((w, e)) = &pa.involution {
                    let lifted = eval_word(&ga, &pa.gen_elements, w);
                    assert_eq!(lifted, *e);
                    let in_product = (*e as usize * gb.order()) as u16;
                    if in_product == target {
                        involution = Some((w.clone(), target));
                    }
                }
                if involution.is_none() {
                    if let Some((w, e)) = &pb.involution {
                        let shifted: Vec<(usize, i32)> = w.iter().map(|&(i, x)| (i + na, x)).collect();
                        if *e as u16 == target {
                            involution = Some((shifted, target));
                        }
                    }
                }
            }
        }
    }
    Some(CatalogPresentation { gen_names, gen_elements, relators, involution })
}
