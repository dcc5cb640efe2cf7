//! Bitset adjacency for transversal scans of an (r+1)-partite r-graph.
//!
//! For each omitted class `i` the edges of `P_i` are stored as a bit matrix:
//! one row per tuple over the "key" classes, one column per vertex of the
//! "row" class (the last class other than `i`). For `i < r` the row class is
//! the last class `r`, so fixing a prefix `(x_0, ..., x_{r-1})` and dropping
//! `x_i` selects a row whose set bits are exactly the vertices of `V_r`
//! completing that (r-1)-tuple. ANDing those rows yields all cliques through
//! the prefix at once.

use rayon::prelude::*;

use crate::hypergraph::{missing_class, PartiteHypergraph};

pub(crate) struct BitMatrix {
    strides: Vec<usize>,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(sizes: &[usize], omitted: usize, row_class: usize) -> Self {
        let t = sizes.len();
        let mut strides = vec![0usize; t];
        let mut stride = 1usize;
        for c in (0..t).rev().filter(|&c| c != omitted && c != row_class) {
            strides[c] = stride;
            stride *= sizes[c];
        }
        let words = sizes[row_class].div_ceil(64);
        Self {
            strides,
            words,
            bits: vec![0; stride * words],
        }
    }

    #[inline]
    fn key(&self, x: &[usize]) -> usize {
        x.iter().zip(&self.strides).map(|(a, b)| a * b).sum()
    }

    #[inline]
    fn row(&self, key: usize) -> &[u64] {
        &self.bits[key * self.words..(key + 1) * self.words]
    }

    fn set(&mut self, key: usize, col: usize) {
        self.bits[key * self.words + col / 64] |= 1u64 << (col % 64);
    }
}

pub(crate) struct TransversalIndex {
    r: usize,
    sizes: Vec<usize>,
    /// `mats[i]` holds the edges avoiding class `i`.
    mats: Vec<BitMatrix>,
}

/// Qualifying last-class vertices for one prefix.
pub(crate) struct PrefixHits<'a> {
    /// Locals of classes `0..r`; entry `r` is unused.
    pub prefix: &'a [usize],
    /// Bitset over `V_r`.
    pub mask: &'a [u64],
}

impl TransversalIndex {
    pub fn new(g: &PartiteHypergraph) -> Self {
        let r = g.r();
        let t = r + 1;
        debug_assert_eq!(g.num_classes(), t);
        let sizes = g.class_sizes();
        let mut mats: Vec<BitMatrix> = (0..t)
            .map(|i| BitMatrix::new(&sizes, i, if i == r { r - 1 } else { r }))
            .collect();
        let mut x = vec![0usize; t];
        for e in g.edges() {
            let i = missing_class(e, t);
            x.iter_mut().for_each(|v| *v = 0);
            for v in e.vertices() {
                x[v.class] = v.local;
            }
            let row_class = if i == r { r - 1 } else { r };
            let key = mats[i].key(&x);
            mats[i].set(key, x[row_class]);
        }
        Self { r, sizes, mats }
    }

    /// Is the r-subset of transversal `x` avoiding class `i` an edge?
    pub fn present(&self, x: &[usize], i: usize) -> bool {
        let row_class = if i == self.r { self.r - 1 } else { self.r };
        let m = &self.mats[i];
        let col = x[row_class];
        m.row(m.key(x))[col / 64] >> (col % 64) & 1 == 1
    }

    /// Calls `f` for every prefix over classes `0..r` that has at least one
    /// last-class vertex completing a transversal missing at most `k` edges.
    /// Prefixes arrive in lexicographic order. The scan over `x_0` runs in
    /// parallel when `parallel` is set; results are folded per `x_0` and
    /// combined in index order.
    pub fn scan<T, F, M>(&self, k: usize, parallel: bool, init: impl Fn() -> T + Sync, f: F, merge: M) -> T
    where
        T: Send,
        F: Fn(&mut T, PrefixHits<'_>) + Sync,
        M: Fn(T, T) -> T + Sync + Send,
    {
        let run = |x0: usize| {
            let mut acc = init();
            self.scan_from(x0, k, &mut |hits| {
                f(&mut acc, hits);
                true
            });
            acc
        };
        let n0 = self.sizes[0];
        if parallel && n0 > 1 {
            let parts: Vec<T> = (0..n0).into_par_iter().map(run).collect();
            parts.into_iter().fold(init(), &merge)
        } else {
            (0..n0).map(run).fold(init(), &merge)
        }
    }

    /// First qualifying prefix in lexicographic order, with its mask.
    pub fn first_hit(&self, k: usize) -> Option<(Vec<usize>, Vec<u64>)> {
        let mut found = None;
        for x0 in 0..self.sizes[0] {
            self.scan_from(x0, k, &mut |hits| {
                found = Some((hits.prefix.to_vec(), hits.mask.to_vec()));
                false
            });
            if found.is_some() {
                break;
            }
        }
        found
    }

    /// Scans prefixes starting with `x0`; stops early when `f` returns false.
    fn scan_from(&self, x0: usize, k: usize, f: &mut dyn FnMut(PrefixHits<'_>) -> bool) {
        let r = self.r;
        let last = self.sizes[r];
        let words = last.div_ceil(64);
        let tail_mask = if last.is_multiple_of(64) { u64::MAX } else { (1u64 << (last % 64)) - 1 };
        let mut x = vec![0usize; r + 1];
        x[0] = x0;
        let mut mask = vec![0u64; words];
        let mut counts = vec![0u8; if k > 0 { last } else { 0 }];
        loop {
            let top_missing = usize::from(!self.present(&x, r));
            let mut any = false;
            if k == 0 {
                if top_missing == 0 {
                    mask.iter_mut().for_each(|w| *w = u64::MAX);
                    mask[words - 1] = tail_mask;
                    for i in 0..r {
                        let m = &self.mats[i];
                        let row = m.row(m.key(&x));
                        for (a, b) in mask.iter_mut().zip(row) {
                            *a &= b;
                        }
                    }
                    any = mask.iter().any(|&w| w != 0);
                }
            } else if top_missing <= k {
                counts.iter_mut().for_each(|c| *c = top_missing as u8);
                for i in 0..r {
                    let m = &self.mats[i];
                    let row = m.row(m.key(&x));
                    for (col, c) in counts.iter_mut().enumerate() {
                        if row[col / 64] >> (col % 64) & 1 == 0 {
                            *c += 1;
                        }
                    }
                }
                mask.iter_mut().for_each(|w| *w = 0);
                for (col, &c) in counts.iter().enumerate() {
                    if usize::from(c) <= k {
                        mask[col / 64] |= 1 << (col % 64);
                        any = true;
                    }
                }
            }
            if any && !f(PrefixHits { prefix: &x, mask: &mask }) {
                return;
            }
            // advance classes 1..r-1, class 0 fixed
            let mut p = r;
            loop {
                if p <= 1 {
                    return;
                }
                p -= 1;
                x[p] += 1;
                if x[p] < self.sizes[p] {
                    break;
                }
                x[p] = 0;
            }
        }
    }
}

/// Set bit positions of a word slice, ascending.
pub(crate) fn ones(mask: &[u64]) -> impl Iterator<Item = usize> + '_ {
    mask.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            }
        })
    })
}
