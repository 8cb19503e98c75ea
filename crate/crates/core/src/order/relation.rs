/// Square boolean matrix stored as packed rows.
///
/// Row `x` holds the set of `y` with `x R y`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Relation {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Relation {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Relation::new(n);
        for x in 0..n {
            r.set(x, x);
        }
        r
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[x * self.words + y / 64] >> (y % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize) {
        self.bits[x * self.words + y / 64] |= 1 << (y % 64);
    }

    pub fn row(&self, x: usize) -> &[u64] {
        &self.bits[x * self.words..(x + 1) * self.words]
    }

    /// Iterates the `y` with `x R y`, ascending.
    pub fn successors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(x).iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + bit)
            })
        })
    }

    pub fn count_row(&self, x: usize) -> usize {
        self.row(x).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Reflexive-transitive closure (Warshall over packed rows).
    pub fn close(&mut self) {
        for x in 0..self.n {
            self.set(x, x);
        }
        for k in 0..self.n {
            let (kw, words) = (k * self.words, self.words);
            for x in 0..self.n {
                if self.get(x, k) {
                    for w in 0..words {
                        let v = self.bits[kw + w];
                        self.bits[x * words + w] |= v;
                    }
                }
            }
        }
    }

    pub fn transpose(&self) -> Relation {
        let mut t = Relation::new(self.n);
        for x in 0..self.n {
            for y in self.successors(x).collect::<Vec<_>>() {
                t.set(y, x);
            }
        }
        t
    }

    /// Restriction to the listed indices, renumbered in the given order.
    pub fn restrict(&self, keep: &[usize]) -> Relation {
        let mut r = Relation::new(keep.len());
        for (i, &x) in keep.iter().enumerate() {
            for (j, &y) in keep.iter().enumerate() {
                if self.get(x, y) {
                    r.set(i, j);
                }
            }
        }
        r
    }

    pub fn pair_count(&self) -> usize {
        (0..self.n).map(|x| self.count_row(x)).sum()
    }
}

impl std::fmt::Debug for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let pairs: Vec<(usize, usize)> = (0..self.n)
            .flat_map(|x| self.successors(x).map(move |y| (x, y)))
            .collect();
        f.debug_struct("Relation")
            .field("n", &self.n)
            .field("pairs", &pairs)
            .finish()
    }
}
