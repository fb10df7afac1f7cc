//! Graphs of finite groups: validation, reduction, fundamental-group
//! presentations with stable letters, the normalizer and structural
//! admissibility filters, and the bounded enumerator of admissible
//! linear trees.

use crate::catalog::{catalog_presentation, construct_catalog_group};
use crate::group::{
    closure_of, dihedral_odd_params, normalizer, subgroup_as_group, CatalogTag, FiniteGroup,
    GroupProfile, GroupRef, TriState, DEFAULT_ORDER_CAP,
};
use crate::ring::GroupCharacter;
use crate::word::{FreeWord, GenOrigin, Generator, Presentation};
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("graph is not connected")]
    NotConnected,
    #[error("bad embedding: {0}")]
    BadEmbedding(String),
    #[error("orientation character is inconsistent: {0}")]
    CharacterInconsistent(String),
    #[error("vertex {0} has no catalog presentation")]
    NoPresentation(String),
    #[error("enumeration bounds too large: {0}")]
    BoundsTooLarge(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

#[derive(Debug, Clone)]
pub struct VertexData {
    pub name: String,
    pub group: GroupRef,
}

#[derive(Debug, Clone)]
pub struct EdgeData {
    pub name: String,
    pub o: usize,
    pub t: usize,
    pub group: GroupRef,
    /// generator images in the origin / target vertex groups
    pub emb_o: Vec<u16>,
    pub emb_t: Vec<u16>,
}

/// Orientation data: signs on every vertex-group generator and on the
/// stable letter of every edge (tree edges ignore theirs).
#[derive(Debug, Clone)]
pub struct OrientationData {
    pub vertex_signs: Vec<Vec<i8>>,
    pub edge_signs: Vec<i8>,
}

impl OrientationData {
    pub fn trivial(g: &GraphOfGroups) -> OrientationData {
        OrientationData {
            vertex_signs: g.vertices.iter().map(|v| vec![1; v.group.generators().len()]).collect(),
            edge_signs: vec![1; g.edges.len()],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.vertex_signs.iter().all(|v| v.iter().all(|&s| s == 1))
            && self.edge_signs.iter().all(|&s| s == 1)
    }
}

#[derive(Debug, Clone)]
pub struct GraphOfGroups {
    pub vertices: Vec<VertexData>,
    pub edges: Vec<EdgeData>,
}

/// Full element-level monomorphism of an edge group into a vertex group,
/// extended from generator images.
fn full_embedding(
    edge_group: &FiniteGroup,
    images: &[u16],
    target: &FiniteGroup,
) -> Result<Vec<u16>, GraphError> {
    if images.len() != edge_group.generators().len() {
        return Err(GraphError::BadEmbedding("one image per edge-group generator required".into()));
    }
    let mut map = vec![0u16; edge_group.order()];
    for g in edge_group.elements() {
        let mut acc = 0u16;
        for gi in edge_group.word_for(g) {
            acc = target.mul(acc, images[gi as usize]);
        }
        map[g as usize] = acc;
    }
    for a in edge_group.elements() {
        for b in edge_group.elements() {
            if map[edge_group.mul(a, b) as usize] != target.mul(map[a as usize], map[b as usize]) {
                return Err(GraphError::BadEmbedding("generator images are not a homomorphism".into()));
            }
        }
    }
    let distinct: BTreeSet<u16> = map.iter().copied().collect();
    if distinct.len() != edge_group.order() {
        return Err(GraphError::BadEmbedding("generator images are not injective".into()));
    }
    Ok(map)
}

impl GraphOfGroups {
    pub fn single_vertex(name: &str, group: GroupRef) -> GraphOfGroups {
        GraphOfGroups { vertices: vec![VertexData { name: name.into(), group }], edges: vec![] }
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                for (a, b) in [(e.o, e.t), (e.t, e.o)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// First Betti number of the underlying graph.
    pub fn betti_1(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    pub fn full_embeddings(&self, e: &EdgeData) -> Result<(Vec<u16>, Vec<u16>), GraphError> {
        let fo = full_embedding(&e.group, &e.emb_o, &self.vertices[e.o].group)?;
        let ft = full_embedding(&e.group, &e.emb_t, &self.vertices[e.t].group)?;
        Ok((fo, ft))
    }

    /// Maximal tree by breadth-first search from vertex 0, lowest edge
    /// index as tie-break. Returns a flag per edge.
    pub fn maximal_tree(&self) -> Result<Vec<bool>, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::NotConnected);
        }
        let mut in_tree = vec![false; self.edges.len()];
        let mut reached = vec![false; self.vertices.len()];
        reached[0] = true;
        let mut frontier = std::collections::VecDeque::from([0usize]);
        while let Some(v) = frontier.pop_front() {
            for (i, e) in self.edges.iter().enumerate() {
                if e.o == e.t {
                    continue;
                }
                for (a, b) in [(e.o, e.t), (e.t, e.o)] {
                    if a == v && !reached[b] {
                        reached[b] = true;
                        in_tree[i] = true;
                        frontier.push_back(b);
                    }
                }
            }
        }
        Ok(in_tree)
    }
}

/// Result of `validate_and_reduce`: the reduced graph, the indices of
/// loop-isomorphism edges, and a log of contractions.
#[derive(Debug)]
pub struct ReducedGraph {
    pub graph: GraphOfGroups,
    pub orientation: OrientationData,
    pub loop_isomorphisms: Vec<usize>,
    pub contractions: Vec<String>,
}

/// Validate all embeddings, then repeatedly contract non-loop edges
/// whose embedding is onto a whole vertex group. Loop isomorphisms are
/// recorded but kept.
pub fn validate_and_reduce(g: &GraphOfGroups, w: &OrientationData) -> Result<ReducedGraph, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::NotConnected);
    }
    if w.vertex_signs.len() != g.vertices.len() || w.edge_signs.len() != g.edges.len() {
        return Err(GraphError::CharacterInconsistent("orientation data shape mismatch".into()));
    }
    for (v, signs) in g.vertices.iter().zip(&w.vertex_signs) {
        if signs.len() != v.group.generators().len() {
            return Err(GraphError::CharacterInconsistent(format!("vertex {}", v.name)));
        }
        GroupCharacter::from_generator_signs(&v.group, signs)
            .map_err(|_| GraphError::CharacterInconsistent(format!("vertex {}", v.name)))?;
    }

    let mut graph = g.clone();
    let mut orientation = w.clone();
    let mut contractions = Vec::new();
    'outer: loop {
        for (i, e) in graph.edges.iter().enumerate() {
            let (fo, ft) = graph.full_embeddings(e)?;
            if e.o == e.t {
                continue;
            }
            let onto = |f: &Vec<u16>, v: usize| f.len() == graph.vertices[v].group.order();
            let o_onto = onto(&fo, e.o);
            let t_onto = onto(&ft, e.t);
            if o_onto || t_onto {
                // absorb the redundant vertex through the isomorphism
                let (gone, kept, f_gone, f_kept) =
                    if o_onto { (e.o, e.t, fo, ft) } else { (e.t, e.o, ft, fo) };
                contractions.push(format!(
                    "contracted edge {} (vertex {} absorbed into {})",
                    e.name, graph.vertices[gone].name, graph.vertices[kept].name
                ));
                let inverse_of_gone: Vec<u16> = {
                    let order = graph.vertices[gone].group.order();
                    let mut inv = vec![0u16; order];
                    for (x, &img) in f_gone.iter().enumerate() {
                        inv[img as usize] = x as u16;
                    }
                    inv
                };
                let transfer = |x: u16| -> u16 { f_kept[inverse_of_gone[x as usize] as usize] };
                let edge_idx = i;
                let mut new_edges = Vec::new();
                let mut new_edge_signs = Vec::new();
                for (j, e2) in graph.edges.iter().enumerate() {
                    if j == edge_idx {
                        continue;
                    }
                    let mut e2 = e2.clone();
                    if e2.o == gone {
                        e2.o = kept;
                        e2.emb_o = e2.emb_o.iter().map(|&x| transfer(x)).collect();
                    }
                    if e2.t == gone {
                        e2.t = kept;
                        e2.emb_t = e2.emb_t.iter().map(|&x| transfer(x)).collect();
                    }
                    new_edges.push(e2);
                    new_edge_signs.push(orientation.edge_signs[j]);
                }
                let mut new_vertices = Vec::new();
                let mut new_vertex_signs = Vec::new();
                let mut remap = vec![usize::MAX; graph.vertices.len()];
                for (vi, v) in graph.vertices.iter().enumerate() {
                    if vi != gone {
                        remap[vi] = new_vertices.len();
                        new_vertices.push(v.clone());
                        new_vertex_signs.push(orientation.vertex_signs[vi].clone());
                    }
                }
                for e2 in &mut new_edges {
                    e2.o = remap[e2.o];
                    e2.t = remap[e2.t];
                }
                graph = GraphOfGroups { vertices: new_vertices, edges: new_edges };
                orientation =
                    OrientationData { vertex_signs: new_vertex_signs, edge_signs: new_edge_signs };
                continue 'outer;
            }
        }
        break;
    }

    let mut loop_isomorphisms = Vec::new();
    for (i, e) in graph.edges.iter().enumerate() {
        if e.o != e.t {
            continue;
        }
        let (fo, ft) = graph.full_embeddings(e)?;
        let order = graph.vertices[e.o].group.order();
        if fo.len() == order && ft.len() == order && e.group.order() == order {
            loop_isomorphisms.push(i);
        }
    }
    Ok(ReducedGraph { graph, orientation, loop_isomorphisms, contractions })
}

/// Convert an element of a vertex group to a word in the presentation
/// generators of that vertex.
fn element_word(group: &FiniteGroup, base: u32, elt: u16) -> FreeWord {
    let letters: Vec<(u32, i8)> =
        group.word_for(elt).iter().map(|&gi| (base + gi as u32, 1)).collect();
    FreeWord::from_letters(letters)
}

/// Assemble the fundamental presentation of a reduced graph of groups:
/// vertex presentations plus edge relations, stable letters only on
/// non-tree edges, followed by a Tietze pass that eliminates generators
/// pinned by an identification relator.
pub fn fundamental_presentation(rg: &ReducedGraph) -> Result<Presentation, GraphError> {
    let g = &rg.graph;
    let w = &rg.orientation;
    let tree = g.maximal_tree()?;

    let mut all_names: Vec<String> = Vec::new();
    for v in &g.vertices {
        let p = catalog_presentation(&v.group).ok_or_else(|| GraphError::NoPresentation(v.name.clone()))?;
        all_names.extend(p.gen_names.iter().cloned());
    }
    let unique = |n: &str| all_names.iter().filter(|x| x.as_str() == n).count() == 1;

    let mut generators: Vec<Generator> = Vec::new();
    let mut character: Vec<i8> = Vec::new();
    let mut vertex_base: Vec<u32> = Vec::new();
    let mut vertex_presentations = Vec::new();
    for (vi, v) in g.vertices.iter().enumerate() {
        let p = catalog_presentation(&v.group).expect("checked above");
        vertex_base.push(generators.len() as u32);
        for (k, name) in p.gen_names.iter().enumerate() {
            let full = if unique(name) { name.clone() } else { format!("{}.{}", v.name, name) };
            generators.push(Generator { name: full, origin: GenOrigin::Vertex { vertex: vi, index: k } });
            character.push(w.vertex_signs[vi][k]);
        }
        vertex_presentations.push(p);
    }
    let mut stable_base = vec![u32::MAX; g.edges.len()];
    for (ei, e) in g.edges.iter().enumerate() {
        if !tree[ei] {
            stable_base[ei] = generators.len() as u32;
            generators.push(Generator {
                name: format!("t_{}", e.name),
                origin: GenOrigin::StableLetter { edge: ei },
            });
            character.push(w.edge_signs[ei]);
        }
    }

    let mut relators: Vec<FreeWord> = Vec::new();
    for (vi, p) in vertex_presentations.iter().enumerate() {
        for r in &p.relators {
            let sylls: Vec<(u32, i32)> =
                r.iter().map(|&(gi, e)| (vertex_base[vi] + gi as u32, e)).collect();
            relators.push(FreeWord::from_syllables(&sylls));
        }
    }
    for (ei, e) in g.edges.iter().enumerate() {
        for k in 0..e.emb_o.len() {
            let wo = element_word(&g.vertices[e.o].group, vertex_base[e.o], e.emb_o[k]);
            let wt = element_word(&g.vertices[e.t].group, vertex_base[e.t], e.emb_t[k]);
            let rel = if tree[ei] {
                wo.concat(&wt.inverse())
            } else {
                let t = FreeWord::generator(stable_base[ei]);
                t.concat(&wo).concat(&t.inverse()).concat(&wt.inverse())
            };
            if !rel.is_empty() {
                relators.push(rel);
            }
        }
    }

    let mut p = Presentation { generators, relators, character };
    if !p.character_consistent() {
        return Err(GraphError::CharacterInconsistent("character does not vanish on a relator".into()));
    }
    tietze_eliminate(&mut p);
    Ok(p)
}

/// Eliminate vertex generators that occur exactly once in some relator;
/// deduplicate relators up to rotation and inversion afterwards.
fn tietze_eliminate(p: &mut Presentation) {
    loop {
        let mut target: Option<(usize, u32, FreeWord)> = None;
        'search: for (ri, r) in p.relators.iter().enumerate() {
            for &(gidx, _) in r.letters() {
                if !matches!(p.generators[gidx as usize].origin, GenOrigin::Vertex { .. }) {
                    continue;
                }
                if r.occurrences(gidx) != 1 {
                    continue;
                }
                // r = u x^e v with x absent from u and v, so x^e = u^-1 v^-1
                let pos = r.letters().iter().position(|&(x, _)| x == gidx).unwrap();
                let e = r.letters()[pos].1;
                let u = FreeWord::from_letters(r.letters()[..pos].iter().copied());
                let v = FreeWord::from_letters(r.letters()[pos + 1..].iter().copied());
                let solved = u.inverse().concat(&v.inverse());
                let replacement = if e == 1 { solved } else { solved.inverse() };
                target = Some((ri, gidx, replacement));
                break 'search;
            }
        }
        let Some((ri, gidx, replacement)) = target else { break };
        p.relators.remove(ri);
        for r in p.relators.iter_mut() {
            *r = r.substitute(gidx, &replacement);
        }
        p.generators.remove(gidx as usize);
        p.character.remove(gidx as usize);
        let map = |g: u32| if g > gidx { g - 1 } else { g };
        for r in p.relators.iter_mut() {
            *r = r.remap(&map);
        }
    }
    let mut seen: BTreeSet<FreeWord> = BTreeSet::new();
    p.relators.retain(|r| {
        if r.is_empty() {
            return false;
        }
        seen.insert(canonical_cyclic(r))
    });
}

fn canonical_cyclic(r: &FreeWord) -> FreeWord {
    let red = r.cyclic_reduction();
    let mut best: Option<FreeWord> = None;
    for w in [red.clone(), red.inverse()] {
        let letters = w.letters().to_vec();
        for rot in 0..letters.len().max(1) {
            let rotated: Vec<_> =
                letters.iter().cycle().skip(rot).take(letters.len()).copied().collect();
            let cand = FreeWord::from_letters(rotated);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_else(FreeWord::identity)
}

/// Witness that the graph does not present an indecomposable candidate
/// other than Z itself.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum FreeFactorWitness {
    /// trivial edge group separating the graph: nontrivial free product
    NontrivialFreeProduct { edge: String },
    /// trivial edge group on a cycle: a free factor Z splits off
    FreeFactorZ { edge: String },
    /// the whole group is Z (single trivial vertex, one trivial loop)
    GroupIsZ { twisted: bool },
    /// loop isomorphism with nontrivial edge group under a fully
    /// orientable character
    OrientableLoopIsomorphism { edge: String },
}

pub fn free_factor_scan(rg: &ReducedGraph) -> Option<FreeFactorWitness> {
    let g = &rg.graph;
    for (i, e) in g.edges.iter().enumerate() {
        if e.group.order() != 1 {
            continue;
        }
        let mut without = g.clone();
        without.edges.remove(i);
        if e.o != e.t && !without.is_connected() {
            return Some(FreeFactorWitness::NontrivialFreeProduct { edge: e.name.clone() });
        }
        let only_piece =
            g.edges.len() == 1 && g.vertices.len() == 1 && g.vertices[0].group.order() == 1;
        if only_piece {
            let twisted = rg.orientation.edge_signs[i] == -1;
            return Some(FreeFactorWitness::GroupIsZ { twisted });
        }
        return Some(FreeFactorWitness::FreeFactorZ { edge: e.name.clone() });
    }
    if rg.orientation.is_trivial() {
        if let Some(&i) = rg.loop_isomorphisms.first() {
            if rg.graph.edges[i].group.order() > 1 {
                return Some(FreeFactorWitness::OrientableLoopIsomorphism {
                    edge: rg.graph.edges[i].name.clone(),
                });
            }
        }
    }
    None
}

/// Witness that some finite subgroup has an infinite normalizer in a way
/// the centralizer theorem forbids (odd prime order, or an
/// orientation-preserving involution).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum CrispWitness {
    /// Z/p inside an edge group is properly normalized on both sides
    EdgeNormalizerGrowsBothSides { edge: String, p: usize },
    /// all edge orders share p and the graph has a cycle
    CommonPrimeCycle { p: usize },
    /// two distinct vertices properly normalize the edge prime
    TwoGrowingVertices { p: usize, v1: String, v2: String },
}

impl CrispWitness {
    pub fn describe(&self) -> String {
        match self {
            CrispWitness::EdgeNormalizerGrowsBothSides { edge, p } => format!(
                "a subgroup of order {p} in edge {edge} is properly normalized in both endpoint groups, so its normalizer in the fundamental group is infinite"
            ),
            CrispWitness::CommonPrimeCycle { p } => format!(
                "every edge order is divisible by {p} and the graph has a cycle, so a subgroup of order {p} has an infinite normalizer"
            ),
            CrispWitness::TwoGrowingVertices { p, v1, v2 } => format!(
                "vertices {v1} and {v2} both properly normalize the order-{p} edge subgroup, giving it an infinite normalizer"
            ),
        }
    }
}

/// Character sign of a vertex-group element.
fn element_sign(group: &GroupRef, signs: &[i8], elt: u16) -> i8 {
    let mut s = 1i8;
    for gi in group.word_for(elt) {
        s *= signs[gi as usize];
    }
    s
}

/// Order-p subgroups of a group, one generator each, deduplicated.
fn prime_subgroups(g: &FiniteGroup, p: usize) -> Vec<u16> {
    let mut seen: BTreeSet<Vec<u16>> = BTreeSet::new();
    let mut out = Vec::new();
    for x in g.elements() {
        if g.element_order(x) == p {
            let sub = closure_of(g, &[x]);
            if seen.insert(sub) {
                out.push(x);
            }
        }
    }
    out
}

/// Are all order-p subgroups conjugate to each other?
fn unique_prime_class(g: &FiniteGroup, p: usize) -> bool {
    let reps = prime_subgroups(g, p);
    if reps.len() <= 1 {
        return true;
    }
    let first: BTreeSet<u16> = closure_of(g, &[reps[0]]).into_iter().collect();
    reps.iter().skip(1).all(|&x| {
        g.elements().any(|c| {
            let conj: BTreeSet<u16> =
                closure_of(g, &[x]).iter().map(|&y| g.conjugate(c, y)).collect();
            conj == first
        })
    })
}

/// The normalizer-based exclusion filter.
pub fn crisp_filter(rg: &ReducedGraph) -> Result<Option<CrispWitness>, GraphError> {
    let g = &rg.graph;
    let w = &rg.orientation;

    // rule (a): Z/p in an edge group properly normalized on both sides
    for e in &g.edges {
        let (fo, ft) = g.full_embeddings(e)?;
        let mut primes: Vec<usize> = Vec::new();
        let mut n = e.group.order();
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
        for p in primes {
            for c in prime_subgroups(&e.group, p) {
                let sub: Vec<u16> = closure_of(&e.group, &[c]);
                let in_edge = normalizer(&e.group, &sub).len();
                let sub_o: Vec<u16> = sub.iter().map(|&x| fo[x as usize]).collect();
                let sub_t: Vec<u16> = sub.iter().map(|&x| ft[x as usize]).collect();
                let n_o = normalizer(&g.vertices[e.o].group, &sub_o).len();
                let n_t = normalizer(&g.vertices[e.t].group, &sub_t).len();
                if n_o > in_edge && n_t > in_edge {
                    // an orientation-reversing involution may have a
                    // two-ended centralizer, so p = 2 escapes then
                    let sign =
                        element_sign(&g.vertices[e.o].group, &w.vertex_signs[e.o], fo[c as usize]);
                    if p != 2 || sign == 1 {
                        return Ok(Some(CrispWitness::EdgeNormalizerGrowsBothSides {
                            edge: e.name.clone(),
                            p,
                        }));
                    }
                }
            }
        }
    }

    // rules (b) and (c) need a prime dividing every edge order and a
    // unique conjugacy class of order-p subgroups in each vertex group
    if g.edges.is_empty() {
        return Ok(None);
    }
    let mut common: Option<Vec<usize>> = None;
    for e in &g.edges {
        let ps: Vec<usize> =
            (2..=e.group.order()).filter(|&p| e.group.order() % p == 0 && is_prime_usize(p)).collect();
        common = Some(match common {
            None => ps,
            Some(prev) => prev.into_iter().filter(|p| ps.contains(p)).collect(),
        });
    }
    for p in common.unwrap_or_default() {
        if !g.vertices.iter().all(|v| unique_prime_class(&v.group, p)) {
            continue;
        }
        let mut reversing = false;
        if p == 2 {
            'scan: for e in &g.edges {
                let (fo, _) = g.full_embeddings(e)?;
                for c in prime_subgroups(&e.group, 2) {
                    if element_sign(&g.vertices[e.o].group, &w.vertex_signs[e.o], fo[c as usize]) == -1
                    {
                        reversing = true;
                        break 'scan;
                    }
                }
            }
        }
        if reversing {
            continue;
        }
        if g.betti_1() > 0 {
            return Ok(Some(CrispWitness::CommonPrimeCycle { p }));
        }
        // rule (c): at most one vertex may properly normalize the prime
        let mut growing: Vec<usize> = Vec::new();
        for (vi, v) in g.vertices.iter().enumerate() {
            let mut grows = false;
            for e in &g.edges {
                let (fo, ft) = g.full_embeddings(e)?;
                for (end, emb) in [(e.o, &fo), (e.t, &ft)] {
                    if end != vi {
                        continue;
                    }
                    for c in prime_subgroups(&e.group, p) {
                        let sub: Vec<u16> = closure_of(&e.group, &[c]);
                        let img: Vec<u16> = sub.iter().map(|&x| emb[x as usize]).collect();
                        let inner = normalizer(&e.group, &sub).len();
                        if normalizer(&v.group, &img).len() > inner {
                            grows = true;
                        }
                    }
                }
            }
            if grows {
                growing.push(vi);
            }
        }
        if growing.len() >= 2 {
            return Ok(Some(CrispWitness::TwoGrowingVertices {
                p,
                v1: g.vertices[growing[0]].name.clone(),
                v2: g.vertices[growing[1]].name.clone(),
            }));
        }
    }
    Ok(None)
}

pub(crate) fn is_prime_usize(n: usize) -> bool {
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

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RuleStatus {
    Pass,
    Fail,
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct RuleCheck {
    pub rule: String,
    pub status: RuleStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub orientable: bool,
    pub rules: Vec<RuleCheck>,
    /// true when a cyclic(6) edge makes realizability an open case
    pub z6_edge: bool,
}

impl AdmissibilityReport {
    pub fn admissible(&self) -> bool {
        self.rules.iter().all(|r| r.status == RuleStatus::Pass)
    }

    pub fn failed(&self) -> Option<&RuleCheck> {
        self.rules.iter().find(|r| r.status == RuleStatus::Fail)
    }

    pub fn unknown(&self) -> Option<&RuleCheck> {
        self.rules.iter().find(|r| r.status == RuleStatus::Unknown)
    }
}

/// Does the group split as (dihedral of order 2m, m odd coprime to 6) x Z/3?
fn matches_d2m_z3(g: &FiniteGroup) -> Option<usize> {
    let n = g.order();
    if n % 6 != 0 {
        return None;
    }
    let m = n / 6;
    if m % 2 == 0 || m % 3 == 0 || m < 5 {
        return None;
    }
    let center = g.center();
    center.iter().find(|&&z| g.element_order(z) == 3)?;
    let complement: Vec<u16> = g.elements().filter(|&x| g.pow(x, (n / 3) as i64) == 0).collect();
    if complement.len() != n / 3 {
        return None;
    }
    let sub = subgroup_as_group(g, &complement);
    dihedral_odd_params(&sub).map(|(_, _, m)| m)
}

/// Does the group split as B x Z/d with B binary tetrahedral (order 24)
/// or SL(2,5), and (d, |B|) = 1?
fn matches_b_zd(g: &FiniteGroup) -> bool {
    for b_order in [24usize, 120] {
        let n = g.order();
        if n % b_order != 0 {
            continue;
        }
        let d = n / b_order;
        if d % 2 == 0 || num_integer::gcd(d, b_order) != 1 {
            continue;
        }
        let complement: Vec<u16> =
            g.elements().filter(|&x| g.pow(x, b_order as i64) == 0).collect();
        if complement.len() != b_order {
            continue;
        }
        let sub = subgroup_as_group(g, &complement);
        let reference = if b_order == 24 {
            construct_catalog_group(&CatalogTag::BinaryTetrahedral(1), DEFAULT_ORDER_CAP)
        } else {
            construct_catalog_group(&CatalogTag::Sl2(5), DEFAULT_ORDER_CAP)
        };
        if let Ok(r) = reference {
            if r.order_histogram() == sub.order_histogram() && sub.involutions().len() == 1 {
                return true;
            }
        }
    }
    false
}

/// The structural admissibility report for a reduced graph that already
/// passed the free-factor and normalizer filters.
pub fn structural_admissibility(rg: &ReducedGraph, profiles: &[GroupProfile]) -> AdmissibilityReport {
    let g = &rg.graph;
    let orientable = rg.orientation.is_trivial();
    let mut rules = Vec::new();
    let mut z6_edge = false;

    if !orientable {
        // only Z and Z + Z/2 survive; Z is caught by the free-factor
        // scan, so the admissible shape here is a single Z/2 vertex with
        // a loop isomorphism and a reversing involution
        let shape_ok = g.vertices.len() == 1
            && g.vertices[0].group.order() == 2
            && g.edges.len() == 1
            && rg.loop_isomorphisms.len() == 1
            && element_sign(
                &g.vertices[0].group,
                &rg.orientation.vertex_signs[0],
                g.vertices[0].group.generators().first().copied().unwrap_or(0),
            ) == -1;
        rules.push(RuleCheck {
            rule: "nonorientable-catalog".into(),
            status: if shape_ok { RuleStatus::Pass } else { RuleStatus::Fail },
            detail: if shape_ok {
                "single Z/2 vertex with a reversing loop isomorphism (Z + Z/2)".into()
            } else {
                "nonorientable inputs are admissible only for Z and Z + Z/2".into()
            },
        });
        return AdmissibilityReport { orientable, rules, z6_edge };
    }

    rules.push(RuleCheck {
        rule: "graph-is-tree".into(),
        status: if g.betti_1() == 0 { RuleStatus::Pass } else { RuleStatus::Fail },
        detail: format!("first Betti number {}", g.betti_1()),
    });

    for (v, p) in g.vertices.iter().zip(profiles) {
        let (status, detail) = match p.period_divides_4 {
            TriState::Yes => (RuleStatus::Pass, format!("vertex {} has period dividing 4", v.name)),
            TriState::No => (
                RuleStatus::Fail,
                format!("vertex {} has period exceeding 4 or no periodic cohomology", v.name),
            ),
            TriState::Unknown => (RuleStatus::Unknown, format!("vertex {} period undetermined", v.name)),
        };
        rules.push(RuleCheck { rule: "vertex-period-divides-4".into(), status, detail });
    }

    let mut z6_edges: Vec<usize> = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        let ord = e.group.order();
        let cyclic = e.group.elements().any(|x| e.group.element_order(x) == ord);
        if ord == 2 {
            continue;
        }
        if ord == 6 && cyclic {
            z6_edges.push(i);
            continue;
        }
        rules.push(RuleCheck {
            rule: "edge-groups-z2-or-one-z6".into(),
            status: RuleStatus::Fail,
            detail: format!("edge {} has group of order {}", e.name, ord),
        });
    }
    if z6_edges.len() > 1 {
        rules.push(RuleCheck {
            rule: "edge-groups-z2-or-one-z6".into(),
            status: RuleStatus::Fail,
            detail: format!("{} edges of order 6", z6_edges.len()),
        });
    } else if z6_edges.len() == 1 {
        z6_edge = true;
        let e = &g.edges[z6_edges[0]];
        let go = &g.vertices[e.o];
        let gt = &g.vertices[e.t];
        let pair_ok = (matches_d2m_z3(&go.group).is_some() && matches_b_zd(&gt.group))
            || (matches_d2m_z3(&gt.group).is_some() && matches_b_zd(&go.group));
        rules.push(RuleCheck {
            rule: "z6-adjacent-vertex-shapes".into(),
            status: if pair_ok { RuleStatus::Pass } else { RuleStatus::Fail },
            detail: format!(
                "order-6 edge {} joins {} and {}; expected dihedral x Z/3 against binary polyhedral x Z/d",
                e.name, go.name, gt.name
            ),
        });
        for (vi, v) in g.vertices.iter().enumerate() {
            if vi == e.o || vi == e.t {
                continue;
            }
            if !profiles[vi].is_dihedral_odd {
                rules.push(RuleCheck {
                    rule: "z6-remaining-vertices-dihedral".into(),
                    status: RuleStatus::Fail,
                    detail: format!("vertex {} is not dihedral", v.name),
                });
            }
        }
    } else if !g.edges.is_empty() {
        let non_dihedral: Vec<&VertexData> = g
            .vertices
            .iter()
            .zip(profiles)
            .filter(|(_, p)| !p.is_dihedral_odd)
            .map(|(v, _)| v)
            .collect();
        if non_dihedral.len() > 1 {
            rules.push(RuleCheck {
                rule: "at-most-one-non-dihedral-vertex".into(),
                status: RuleStatus::Fail,
                detail: format!(
                    "vertices {} are not dihedral",
                    non_dihedral.iter().map(|v| v.name.as_str()).collect::<Vec<_>>().join(", ")
                ),
            });
        } else {
            rules.push(RuleCheck {
                rule: "at-most-one-non-dihedral-vertex".into(),
                status: RuleStatus::Pass,
                detail: format!("{} non-dihedral vertices", non_dihedral.len()),
            });
        }
    }

    AdmissibilityReport { orientable, rules, z6_edge }
}

/// Enumerate admissible linear trees with catalog vertex groups, all
/// edges Z/2 plus the single-Z/6 variant, deduplicated by vertex tag
/// multiset. Single-vertex graphs cover finite fundamental groups.
pub fn enumerate_admissible(max_vertices: usize, max_order: usize) -> Result<Vec<GraphOfGroups>, GraphError> {
    if max_vertices > 4 || max_order > 256 {
        return Err(GraphError::BoundsTooLarge(format!(
            "supported bounds: at most 4 vertices and vertex order 256 (got {max_vertices}, {max_order})"
        )));
    }
    let mut singles: Vec<CatalogTag> = Vec::new();
    let mut attachable: Vec<CatalogTag> = Vec::new();
    let mut dihedrals: Vec<CatalogTag> = Vec::new();

    let mut candidates: Vec<CatalogTag> = Vec::new();
    for n in 1..=max_order as u64 {
        candidates.push(CatalogTag::Cyclic(n));
    }
    let mut m = 3u64;
    while 2 * m <= max_order as u64 {
        candidates.push(CatalogTag::Dihedral(2 * m));
        m += 2;
    }
    let mut k = 3u32;
    while (1u64 << k) <= max_order as u64 {
        candidates.push(CatalogTag::Quaternionic(k));
        k += 1;
    }
    for kk in 1..=3u32 {
        if 8 * 3u64.pow(kk) <= max_order as u64 {
            candidates.push(CatalogTag::BinaryTetrahedral(kk));
        }
        if 16 * 3u64.pow(kk) <= max_order as u64 {
            candidates.push(CatalogTag::BinaryOctahedral(kk));
        }
    }
    if 120 <= max_order as u64 {
        candidates.push(CatalogTag::Sl2(5));
    }
    let mut mm = 3u64;
    while 4 * mm <= max_order as u64 {
        let mut e = 2u32;
        while mm * (1 << e) <= max_order as u64 {
            candidates.push(CatalogTag::Metacyclic { m: mm, n: 1 << e, r: mm - 1 });
            e += 1;
        }
        mm += 2;
    }
    let base: Vec<CatalogTag> =
        candidates.iter().filter(|t| !matches!(t, CatalogTag::Cyclic(_))).cloned().collect();
    for b in &base {
        let border = order_of_tag(b);
        let mut d = 3u64;
        while border * d <= max_order as u64 {
            if num_integer::gcd(border, d) == 1 {
                candidates
                    .push(CatalogTag::Product(Box::new(b.clone()), Box::new(CatalogTag::Cyclic(d))));
            }
            d += 2;
        }
    }

    for tag in candidates {
        let Ok(g) = crate::catalog::cached_catalog_group(&tag, max_order) else { continue };
        let profile = crate::group::cached_profile(&g);
        if profile.period_divides_4 != TriState::Yes {
            continue;
        }
        singles.push(tag.clone());
        if g.order() > 2 && !g.involutions().is_empty() {
            if profile.is_dihedral_odd {
                dihedrals.push(tag.clone());
            } else {
                attachable.push(tag.clone());
            }
        }
    }

    let mut out: Vec<(Vec<String>, GraphOfGroups)> = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();

    if max_vertices >= 1 {
        for tag in &singles {
            let fp = format!("1|{tag}");
            if seen.insert(fp) {
                let g = crate::catalog::cached_catalog_group(tag, max_order).unwrap();
                out.push((vec![tag.to_string()], GraphOfGroups::single_vertex("v0", g)));
            }
        }
    }

    if max_vertices >= 2 {
        fn extend(
            pool: &[CatalogTag],
            cur: Vec<CatalogTag>,
            start: usize,
            len_left: usize,
            acc: &mut Vec<Vec<CatalogTag>>,
        ) {
            acc.push(cur.clone());
            if len_left == 0 {
                return;
            }
            for i in start..pool.len() {
                let mut next = cur.clone();
                next.push(pool[i].clone());
                extend(pool, next, i, len_left - 1, acc);
            }
        }
        let mut multisets: Vec<Vec<CatalogTag>> = Vec::new();
        extend(&dihedrals, Vec::new(), 0, max_vertices, &mut multisets);
        for ms in &multisets {
            if ms.len() > max_vertices {
                continue;
            }
            if ms.len() >= 2 {
                push_linear_tree(&mut out, &mut seen, ms, None, max_order);
            }
            if ms.len() + 1 <= max_vertices && !ms.is_empty() {
                for nd in &attachable {
                    let mut tags = ms.clone();
                    tags.push(nd.clone());
                    push_linear_tree(&mut out, &mut seen, &tags, None, max_order);
                }
            }
        }

        // the single-Z/6-edge variant
        let mut lefts: Vec<CatalogTag> = Vec::new();
        let mut ml = 5u64;
        while 6 * ml <= max_order as u64 {
            if ml % 3 != 0 {
                lefts.push(CatalogTag::Product(
                    Box::new(CatalogTag::Dihedral(2 * ml)),
                    Box::new(CatalogTag::Cyclic(3)),
                ));
            }
            ml += 2;
        }
        let mut rights: Vec<CatalogTag> = Vec::new();
        for (b, border) in [(CatalogTag::BinaryTetrahedral(1), 24u64), (CatalogTag::Sl2(5), 120)] {
            if border <= max_order as u64 {
                rights.push(b.clone());
            }
            let mut d = 5u64;
            while border * d <= max_order as u64 {
                if num_integer::gcd(border, d) == 1 {
                    rights.push(CatalogTag::Product(Box::new(b.clone()), Box::new(CatalogTag::Cyclic(d))));
                }
                d += 2;
            }
        }
        for l in &lefts {
            for r in &rights {
                for extra in 0..=(max_vertices.saturating_sub(2)) {
                    let tails: Vec<Vec<CatalogTag>> = if extra == 0 {
                        vec![vec![]]
                    } else {
                        let mut acc = Vec::new();
                        extend(&dihedrals, Vec::new(), 0, extra, &mut acc);
                        acc.into_iter().filter(|v| v.len() == extra).collect()
                    };
                    for tail in tails {
                        let mut tags = tail.clone();
                        tags.push(l.clone());
                        tags.push(r.clone());
                        push_linear_tree(&mut out, &mut seen, &tags, Some(tags.len() - 2), max_order);
                    }
                }
            }
        }
    }

    out.sort_by(|a, b| (a.1.vertices.len(), &a.0).cmp(&(b.1.vertices.len(), &b.0)));
    Ok(out.into_iter().map(|(_, g)| g).collect())
}

fn order_of_tag(tag: &CatalogTag) -> u64 {
    match tag {
        CatalogTag::Cyclic(n) => *n,
        CatalogTag::Dihedral(n) => *n,
        CatalogTag::Quaternionic(k) => 1 << k,
        CatalogTag::Metacyclic { m, n, .. } => m * n,
        CatalogTag::BinaryTetrahedral(k) => 8 * 3u64.pow(*k),
        CatalogTag::BinaryOctahedral(k) => 16 * 3u64.pow(*k),
        CatalogTag::Sl2(p) => p * p * p - p,
        CatalogTag::Tl2(p) => 2 * (p * p * p - p),
        CatalogTag::Product(a, b) => order_of_tag(a) * order_of_tag(b),
    }
}

fn push_linear_tree(
    out: &mut Vec<(Vec<String>, GraphOfGroups)>,
    seen: &mut BTreeSet<String>,
    tags: &[CatalogTag],
    z6_between: Option<usize>,
    max_order: usize,
) {
    let mut sorted: Vec<String> = tags.iter().map(|t| t.to_string()).collect();
    sorted.sort();
    let fp = format!("{}|{}|z6={:?}", tags.len(), sorted.join(","), z6_between.is_some());
    if !seen.insert(fp) {
        return;
    }
    let Some(graph) = build_linear_tree(tags, z6_between, max_order) else { return };
    let w = OrientationData::trivial(&graph);
    let Ok(rg) = validate_and_reduce(&graph, &w) else { return };
    if rg.graph.vertices.len() != graph.vertices.len() {
        return; // a contraction happened: not reduced as given
    }
    if free_factor_scan(&rg).is_some() {
        return;
    }
    if !matches!(crisp_filter(&rg), Ok(None)) {
        return;
    }
    let profiles: Vec<GroupProfile> =
        rg.graph.vertices.iter().map(|v| crate::group::cached_profile(&v.group)).collect();
    let report = structural_admissibility(&rg, &profiles);
    if report.admissible() {
        out.push((sorted, graph));
    }
}

/// Lowest-index element of the given order (canonical embedding choice;
/// the relevant subgroups are unique up to vertex automorphism).
fn element_of_order(g: &FiniteGroup, ord: usize) -> Option<u16> {
    g.elements().find(|&x| g.element_order(x) == ord)
}

pub fn build_linear_tree(
    tags: &[CatalogTag],
    z6_between: Option<usize>,
    max_order: usize,
) -> Option<GraphOfGroups> {
    let groups: Vec<GroupRef> = tags
        .iter()
        .map(|t| crate::catalog::cached_catalog_group(t, max_order).ok())
        .collect::<Option<Vec<_>>>()?;
    let vertices: Vec<VertexData> = groups
        .iter()
        .enumerate()
        .map(|(i, g)| VertexData { name: format!("v{i}"), group: g.clone() })
        .collect();
    let mut edges = Vec::new();
    for i in 0..groups.len().saturating_sub(1) {
        let is_z6 = z6_between == Some(i);
        let (edge_tag, ord) = if is_z6 { (CatalogTag::Cyclic(6), 6) } else { (CatalogTag::Cyclic(2), 2) };
        let edge_group = crate::catalog::cached_catalog_group(&edge_tag, 16).unwrap();
        let img_o = element_of_order(&groups[i], ord)?;
        let img_t = element_of_order(&groups[i + 1], ord)?;
        edges.push(EdgeData {
            name: format!("e{i}"),
            o: i,
            t: i + 1,
            group: edge_group,
            emb_o: vec![img_o],
            emb_t: vec![img_t],
        });
    }
    Some(GraphOfGroups { vertices, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::classify_group;
    use std::sync::Arc;

    fn grp(tag: CatalogTag) -> GroupRef {
        Arc::new(construct_catalog_group(&tag, DEFAULT_ORDER_CAP).unwrap())
    }

    fn s3_z2_s3() -> GraphOfGroups {
        build_linear_tree(&[CatalogTag::Dihedral(6), CatalogTag::Dihedral(6)], None, 64).unwrap()
    }

    #[test]
    fn validate_and_reduce_keeps_reduced_graph() {
        let g = s3_z2_s3();
        let w = OrientationData::trivial(&g);
        let rg = validate_and_reduce(&g, &w).unwrap();
        assert_eq!(rg.graph.vertices.len(), 2);
        assert!(rg.contractions.is_empty());
    }

    #[test]
    fn reduce_contracts_surjective_edge() {
        let z2 = grp(CatalogTag::Cyclic(2));
        let s3 = grp(CatalogTag::Dihedral(6));
        let edge = grp(CatalogTag::Cyclic(2));
        let g = GraphOfGroups {
            vertices: vec![
                VertexData { name: "A".into(), group: z2 },
                VertexData { name: "B".into(), group: s3.clone() },
            ],
            edges: vec![EdgeData {
                name: "e".into(),
                o: 0,
                t: 1,
                group: edge,
                emb_o: vec![1],
                emb_t: vec![s3.involutions()[0]],
            }],
        };
        let w = OrientationData::trivial(&g);
        let rg = validate_and_reduce(&g, &w).unwrap();
        assert_eq!(rg.graph.vertices.len(), 1);
        assert_eq!(rg.graph.vertices[0].name, "B");
        assert_eq!(rg.contractions.len(), 1);
        // idempotent
        let again = validate_and_reduce(&rg.graph, &rg.orientation).unwrap();
        assert!(again.contractions.is_empty());
    }

    #[test]
    fn bad_embedding_is_rejected() {
        let s3 = grp(CatalogTag::Dihedral(6));
        let edge = grp(CatalogTag::Cyclic(2));
        let g = GraphOfGroups {
            vertices: vec![
                VertexData { name: "A".into(), group: s3.clone() },
                VertexData { name: "B".into(), group: s3.clone() },
            ],
            edges: vec![EdgeData {
                name: "e".into(),
                o: 0,
                t: 1,
                group: edge,
                emb_o: vec![0],
                emb_t: vec![s3.involutions()[0]],
            }],
        };
        let w = OrientationData::trivial(&g);
        assert!(matches!(validate_and_reduce(&g, &w), Err(GraphError::BadEmbedding(_))));
    }

    #[test]
    fn presentation_of_s3_star_s3() {
        let g = s3_z2_s3();
        let w = OrientationData::trivial(&g);
        let rg = validate_and_reduce(&g, &w).unwrap();
        let p = fundamental_presentation(&rg).unwrap();
        // after eliminating the identified involution: balanced on 3 generators
        assert_eq!(p.gen_count(), 3);
        assert_eq!(p.relators.len(), 3);
        assert!(p.is_orientable());
    }

    #[test]
    fn presentation_of_s3_star_z4() {
        // the involution of Z/4 is a^2: elimination leaves <a,b | a^4, a^2 b a^2 b^-2>
        let g = build_linear_tree(&[CatalogTag::Cyclic(4), CatalogTag::Dihedral(6)], None, 64).unwrap();
        let w = OrientationData::trivial(&g);
        let rg = validate_and_reduce(&g, &w).unwrap();
        let p = fundamental_presentation(&rg).unwrap();
        assert_eq!(p.gen_count(), 2);
        assert_eq!(p.relators.len(), 2);
    }

    #[test]
    fn presentation_single_vertex_z4() {
        let g = GraphOfGroups::single_vertex("A", grp(CatalogTag::Cyclic(4)));
        let w = OrientationData::trivial(&g);
        let rg = validate_and_reduce(&g, &w).unwrap();
        let p = fundamental_presentation(&rg).unwrap();
        assert_eq!(p.gen_count(), 1);
        assert_eq!(p.relators.len(), 1);
        assert_eq!(p.relators[0].len(), 4);
    }

    #[test]
    fn loop_isomorphism_gives_z_plus_z2_presentation() {
        let z2 = grp(CatalogTag::Cyclic(2));
        let g = GraphOfGroups {
            vertices: vec![VertexData { name: "A".into(), group: z2.clone() }],
            edges: vec![EdgeData {
                name: "l".into(),
                o: 0,
                t: 0,
                group: z2.clone(),
                emb_o: vec![1],
                emb_t: vec![1],
            }],
        };
        let mut w = OrientationData::trivial(&g);
        w.vertex_signs[0][0] = -1;
        let rg = validate_and_reduce(&g, &w).unwrap();
        assert_eq!(rg.loop_isomorphisms, vec![0]);
        let p = fundamental_presentation(&rg).unwrap();
        // <a, t | a^2, t a t^-1 a^-1>
        assert_eq!(p.gen_count(), 2);
        assert_eq!(p.relators.len(), 2);
        assert!(!p.is_orientable());
    }

    #[test]
    fn inconsistent_character_across_an_edge_is_rejected() {
        // identified involutions with opposite signs cannot carry a
        // character of the fundamental group
        let z4 = grp(CatalogTag::Cyclic(4));
        let s3 = grp(CatalogTag::Dihedral(6));
        let edge = grp(CatalogTag::Cyclic(2));
        let g = GraphOfGroups {
            vertices: vec![
                VertexData { name: "A".into(), group: s3.clone() },
                VertexData { name: "B".into(), group: z4.clone() },
            ],
            edges: vec![EdgeData {
                name: "e".into(),
                o: 0,
                t: 1,
                group: edge,
                emb_o: vec![s3.involutions()[0]],
                emb_t: vec![2],
            }],
        };
        let mut w = OrientationData::trivial(&g);
        // reversing reflection in S_3, orientation-preserving Z/4
        w.vertex_signs[0][0] = -1;
        let rg = validate_and_reduce(&g, &w).unwrap();
        assert!(matches!(
            fundamental_presentation(&rg),
            Err(GraphError::CharacterInconsistent(_))
        ));
        // a sign that does not extend to the vertex group is caught even
        // earlier: b has odd order, so w(b) = -1 is impossible
        let mut w2 = OrientationData::trivial(&g);
        w2.vertex_signs[0][1] = -1;
        assert!(matches!(validate_and_reduce(&g, &w2), Err(GraphError::CharacterInconsistent(_))));
    }

    #[test]
    fn free_factor_witnesses() {
        let triv = grp(CatalogTag::Cyclic(1));
        let g = GraphOfGroups {
            vertices: vec![VertexData { name: "A".into(), group: triv.clone() }],
            edges: vec![EdgeData {
                name: "l".into(),
                o: 0,
                t: 0,
                group: triv.clone(),
                emb_o: vec![],
                emb_t: vec![],
            }],
        };
        let w = OrientationData::trivial(&g);
        let rg = validate_and_reduce(&g, &w).unwrap();
        assert_eq!(free_factor_scan(&rg), Some(FreeFactorWitness::GroupIsZ { twisted: false }));

        let s3 = grp(CatalogTag::Dihedral(6));
        let g2 = GraphOfGroups {
            vertices: vec![
                VertexData { name: "A".into(), group: s3.clone() },
                VertexData { name: "B".into(), group: s3.clone() },
            ],
            edges: vec![EdgeData {
                name: "e".into(),
                o: 0,
                t: 1,
                group: triv.clone(),
                emb_o: vec![],
                emb_t: vec![],
            }],
        };
        let w2 = OrientationData::trivial(&g2);
        let rg2 = validate_and_reduce(&g2, &w2).unwrap();
        assert!(matches!(
            free_factor_scan(&rg2),
            Some(FreeFactorWitness::NontrivialFreeProduct { .. })
        ));

        let g3 = s3_z2_s3();
        let w3 = OrientationData::trivial(&g3);
        let rg3 = validate_and_reduce(&g3, &w3).unwrap();
        assert!(free_factor_scan(&rg3).is_none());
    }

    #[test]
    fn crisp_filter_examples() {
        // S_3 --Z/3-- S_3: odd prime normalized on both sides
        let s3 = grp(CatalogTag::Dihedral(6));
        let z3 = grp(CatalogTag::Cyclic(3));
        let b = s3.elements().find(|&x| s3.element_order(x) == 3).unwrap();
        let g = GraphOfGroups {
            vertices: vec![
                VertexData { name: "A".into(), group: s3.clone() },
                VertexData { name: "B".into(), group: s3.clone() },
            ],
            edges: vec![EdgeData { name: "e".into(), o: 0, t: 1, group: z3, emb_o: vec![b], emb_t: vec![b] }],
        };
        let w = OrientationData::trivial(&g);
        let rg = validate_and_reduce(&g, &w).unwrap();
        let witness = crisp_filter(&rg).unwrap().expect("witness");
        assert!(matches!(witness, CrispWitness::EdgeNormalizerGrowsBothSides { p: 3, .. }));

        // S_3 --Z/2-- Q8: allowed (one exceptional vertex)
        let g2 =
            build_linear_tree(&[CatalogTag::Dihedral(6), CatalogTag::Quaternionic(3)], None, 64).unwrap();
        let w2 = OrientationData::trivial(&g2);
        let rg2 = validate_and_reduce(&g2, &w2).unwrap();
        assert!(crisp_filter(&rg2).unwrap().is_none());

        // Q8 --Z/2-- Z/4: two growing vertices
        let g3 =
            build_linear_tree(&[CatalogTag::Quaternionic(3), CatalogTag::Cyclic(4)], None, 64).unwrap();
        let w3 = OrientationData::trivial(&g3);
        let rg3 = validate_and_reduce(&g3, &w3).unwrap();
        let witness3 = crisp_filter(&rg3).unwrap().expect("witness");
        assert!(matches!(
            witness3,
            CrispWitness::EdgeNormalizerGrowsBothSides { p: 2, .. }
                | CrispWitness::TwoGrowingVertices { p: 2, .. }
        ));
    }

    #[test]
    fn admissibility_examples() {
        let g = build_linear_tree(&[CatalogTag::Dihedral(6), CatalogTag::Cyclic(4)], None, 64).unwrap();
        let w = OrientationData::trivial(&g);
        let rg = validate_and_reduce(&g, &w).unwrap();
        let profiles: Vec<GroupProfile> =
            rg.graph.vertices.iter().map(|v| classify_group(&v.group)).collect();
        let rep = structural_admissibility(&rg, &profiles);
        assert!(rep.admissible(), "{rep:?}");

        // (D_10 x Z/3) --Z/6-- T*_1: admissible with the open order-6 case
        let l = CatalogTag::Product(Box::new(CatalogTag::Dihedral(10)), Box::new(CatalogTag::Cyclic(3)));
        let g2 = build_linear_tree(&[l, CatalogTag::BinaryTetrahedral(1)], Some(0), 64).unwrap();
        let w2 = OrientationData::trivial(&g2);
        let rg2 = validate_and_reduce(&g2, &w2).unwrap();
        let profiles2: Vec<GroupProfile> =
            rg2.graph.vertices.iter().map(|v| classify_group(&v.group)).collect();
        let rep2 = structural_admissibility(&rg2, &profiles2);
        assert!(rep2.admissible(), "{rep2:?}");
        assert!(rep2.z6_edge);

        // two quaternion vertices: two non-dihedral vertices
        let g3 =
            build_linear_tree(&[CatalogTag::Quaternionic(3), CatalogTag::Quaternionic(3)], None, 64)
                .unwrap();
        let w3 = OrientationData::trivial(&g3);
        let rg3 = validate_and_reduce(&g3, &w3).unwrap();
        let profiles3: Vec<GroupProfile> =
            rg3.graph.vertices.iter().map(|v| classify_group(&v.group)).collect();
        let rep3 = structural_admissibility(&rg3, &profiles3);
        assert!(!rep3.admissible());
    }

    #[test]
    fn enumerate_small() {
        let graphs = enumerate_admissible(2, 8).unwrap();
        let tags: Vec<Vec<String>> = graphs
            .iter()
            .map(|g| {
                g.vertices.iter().map(|v| v.group.catalog_tag.clone().unwrap().to_string()).collect()
            })
            .collect();
        assert!(tags.contains(&vec!["dihedral(6)".to_string(), "dihedral(6)".to_string()]));
        assert!(tags.contains(&vec!["dihedral(6)".to_string(), "cyclic(4)".to_string()]));
        assert!(tags.contains(&vec!["dihedral(6)".to_string(), "quaternionic(8)".to_string()]));
        assert!(graphs.len() >= 3);
        assert!(enumerate_admissible(9, 8).is_err());
    }
}
