//! Coset enumeration over the trivial subgroup (HLT strategy with
//! coincidence handling). Used to certify that a catalog presentation
//! presents a group of the expected order.

/// Enumerate the cosets of the trivial subgroup of the group presented by
/// `relators` over `ngens` generators. Words are sequences of
/// (generator, exponent) syllables. Returns the group order, or `None`
/// if the enumeration exceeds `max_cosets` live-plus-dead cosets.
pub fn presented_order(ngens: usize, relators: &[Vec<(usize, i32)>], max_cosets: usize) -> Option<usize> {
    let words: Vec<Vec<usize>> = relators.iter().map(|r| flatten(ngens, r)).collect();
    let mut t = Table::new(ngens, max_cosets);
    let mut alpha = 0usize;
    while alpha < t.len() {
        if !t.is_live(alpha) {
            alpha += 1;
            continue;
        }
        for w in &words {
            if !t.is_live(alpha) {
                break;
            }
            if !t.scan_and_fill(alpha, w) {
                return None;
            }
        }
        if t.is_live(alpha) {
            for x in 0..2 * ngens {
                if t.get(alpha, x).is_none() && !t.define(alpha, x) {
                    return None;
                }
            }
        }
        alpha += 1;
    }
    Some((0..t.len()).filter(|&c| t.is_live(c)).count())
}

fn flatten(ngens: usize, word: &[(usize, i32)]) -> Vec<usize> {
    let mut out = Vec::new();
    for &(g, e) in word {
        assert!(g < ngens, "generator out of range");
        let letter = if e >= 0 { 2 * g } else { 2 * g + 1 };
        for _ in 0..e.unsigned_abs() {
            out.push(letter);
        }
    }
    out
}

fn inv(letter: usize) -> usize {
    letter ^ 1
}

struct Table {
    nletters: usize,
    max: usize,
    tab: Vec<Vec<Option<usize>>>,
    rep: Vec<usize>,
    queue: Vec<usize>,
}

impl Table {
    fn new(ngens: usize, max: usize) -> Table {
        Table { nletters: 2 * ngens, max, tab: vec![vec![None; 2 * ngens]], rep: vec![0], queue: Vec::new() }
    }

    fn len(&self) -> usize {
        self.tab.len()
    }

    fn is_live(&self, c: usize) -> bool {
        self.rep[c] == c
    }

    fn find(&mut self, mut c: usize) -> usize {
        while self.rep[c] != c {
            let up = self.rep[self.rep[c]];
            self.rep[c] = up;
            c = up;
        }
        c
    }

    fn get(&self, c: usize, x: usize) -> Option<usize> {
        self.tab[c][x]
    }

    fn set(&mut self, c: usize, x: usize, d: usize) {
        self.tab[c][x] = Some(d);
        self.tab[d][inv(x)] = Some(c);
    }

    fn define(&mut self, c: usize, x: usize) -> bool {
        if self.tab.len() >= self.max {
            return false;
        }
        let d = self.tab.len();
        self.tab.push(vec![None; self.nletters]);
        self.rep.push(d);
        self.set(c, x, d);
        true
    }

    fn merge(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.rep[hi] = lo;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.merge(a, b);
        while let Some(dead) = self.queue.pop() {
            for x in 0..self.nletters {
                let Some(target) = self.tab[dead][x] else { continue };
                self.tab[dead][x] = None;
                // remove the back-reference before re-filing
                let mu = self.find(dead);
                let nu = self.find(target);
                match self.tab[mu][x] {
                    Some(existing) => {
                        let e = self.find(existing);
                        if e != nu {
                            self.merge(e, nu);
                        }
                    }
                    None => self.set(mu, x, nu),
                }
                let mu2 = self.find(dead);
                let nu2 = self.find(target);
                match self.tab[nu2][inv(x)] {
                    Some(existing) => {
                        let e = self.find(existing);
                        if e != mu2 {
                            self.merge(e, mu2);
                        }
                    }
                    None => self.set(nu2, inv(x), mu2),
                }
            }
        }
    }

    /// Scan `word` at coset `alpha`, defining cosets as needed. Returns
    /// false only when the coset cap is hit.
    fn scan_and_fill(&mut self, alpha: usize, word: &[usize]) -> bool {
        if word.is_empty() {
            return true;
        }
        let mut f = self.find(alpha);
        let mut i = 0usize;
        let mut b = f;
        let mut j = word.len();
        loop {
            while i < j {
                let Some(next) = self.get(f, word[i]) else { break };
                f = self.find(next);
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return true;
            }
            while j > i {
                let Some(prev) = self.get(b, inv(word[j - 1])) else { break };
                b = self.find(prev);
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return true;
            }
            if j == i + 1 {
                self.set(f, word[i], b);
                return true;
            }
            if !self.define(f, word[i]) {
                return false;
            }
            let next = self.get(f, word[i]).unwrap();
            f = self.find(next);
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_and_dihedral() {
        assert_eq!(presented_order(1, &[vec![(0, 7)]], 100), Some(7));
        // <a,b | a^2, b^3, (ab)^2> = S_3
        let rel = vec![vec![(0, 2)], vec![(1, 3)], vec![(0, 1), (1, 1), (0, 1), (1, 1)]];
        assert_eq!(presented_order(2, &rel, 100), Some(6));
    }

    #[test]
    fn quaternion_presentation() {
        // <x,y | x^2 y^-2, y x y^-1 x>
        let rel = vec![vec![(0, 2), (1, -2)], vec![(1, 1), (0, 1), (1, -1), (0, 1)]];
        assert_eq!(presented_order(2, &rel, 200), Some(8));
    }

    #[test]
    fn free_group_hits_cap() {
        assert_eq!(presented_order(2, &[], 50), None);
    }

    #[test]
    fn trivialized_presentation() {
        // <a | a^2, a^3> = 1
        let rel = vec![vec![(0, 2)], vec![(0, 3)]];
        assert_eq!(presented_order(1, &rel, 100), Some(1));
    }
}
