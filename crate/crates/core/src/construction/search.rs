//! Exhaustive search for gadget lattices.
//!
//! Candidates are bounded posets on `o, i, a(p), b(p), a(q), b(q)` plus
//! auxiliary elements. They are generated by one-point extensions: each new
//! element picks a down-closed set `D` below it and an up-closed set `U`
//! above it. Auxiliary elements are only ever added as maximal-so-far among
//! the auxiliaries (a natural labeling), which cuts the labeled count while
//! still reaching every isomorphism type. Duplicates under permutation of the
//! auxiliaries are removed by a canonical form, computed only for candidates
//! that pass the fast contract filter.
//!
//! All bit tricks use `u32` rows over the interior elements; the bounds are
//! implicit.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::gadget::{verify_gadget, Gadget};
use super::ConstructionError;
use crate::lattice::{lattice_from_order, FrameLabeling, Role};
use crate::order::{BoundedPoset, ElementId};

const AP: usize = 0;
const BP: usize = 1;
const AQ: usize = 2;
const BQ: usize = 3;
const DESIGNATED: u32 = 0b1111;
const P_CHAIN: u32 = 1 << AP | 1 << BP;
const Q_CHAIN: u32 = 1 << AQ | 1 << BQ;

/// Largest number of auxiliary elements the bitmask encoding supports.
pub const MAX_AUX: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub max_aux: usize,
    /// Maximum number of candidate posets examined.
    pub budget: u64,
    /// Stop after this many passers.
    pub max_results: usize,
    /// Only accept gadgets that fit the frame: `a(p) ≺ b(p)` and
    /// `a(q) ≺ b(q)` are covers, and every element of `{a(p), b(p)}` is a
    /// complement of every element of `{a(q), b(q)}`.
    pub frame_compatible: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_aux: 3,
            budget: 50_000_000,
            max_results: 1,
            frame_compatible: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// Passers in enumeration order.
    pub gadgets: Vec<Gadget>,
    pub examined: u64,
}

/// Interior order as bit rows: `up[x]` holds every interior `y ≥ x`.
#[derive(Clone)]
struct Small {
    up: Vec<u32>,
}

impl Small {
    fn len(&self) -> usize {
        self.up.len()
    }

    fn le(&self, x: usize, y: usize) -> bool {
        self.up[x] >> y & 1 == 1
    }

    fn down(&self) -> Vec<u32> {
        let mut dn = vec![0u32; self.len()];
        for (x, &row) in self.up.iter().enumerate() {
            for_bits(row, |y| dn[y] |= 1 << x);
        }
        dn
    }

    fn extend(&self, d: u32, u: u32) -> Small {
        let m = self.len();
        let mut up = self.up.clone();
        up.push(1 << m | u);
        for_bits(d, |x| up[x] |= 1 << m | u);
        Small { up }
    }

    fn remove(&self, x: usize) -> Small {
        let keep: Vec<usize> = (0..self.len()).filter(|&y| y != x).collect();
        let up = keep
            .iter()
            .map(|&a| {
                keep.iter()
                    .enumerate()
                    .filter(|&(_, &b)| self.le(a, b))
                    .fold(0u32, |acc, (j, _)| acc | 1 << j)
            })
            .collect();
        Small { up }
    }
}

fn for_bits(mut bits: u32, mut f: impl FnMut(usize)) {
    while bits != 0 {
        f(bits.trailing_zeros() as usize);
        bits &= bits - 1;
    }
}

/// Join and meet tables over the interior plus `o = m`, `i = m + 1`.
struct Tables {
    n: usize,
    join: Vec<u8>,
    meet: Vec<u8>,
}

impl Tables {
    fn new(p: &Small) -> Option<Tables> {
        let m = p.len();
        let n = m + 2;
        let (o, i) = (m, m + 1);
        let mut up = vec![0u32; n];
        for x in 0..m {
            up[x] = p.up[x] | 1 << i;
        }
        up[o] = (1u32 << n) - 1;
        up[i] = 1 << i;
        let mut dn = vec![0u32; n];
        for (x, &row) in up.iter().enumerate() {
            for_bits(row, |y| dn[y] |= 1 << x);
        }
        let least = |set: u32, rows: &[u32]| -> Option<u8> {
            let mut found = None;
            for_bits(set, |z| {
                if found.is_none() && rows[z] & set == set {
                    found = Some(z as u8);
                }
            });
            found
        };
        let mut join = vec![0u8; n * n];
        let mut meet = vec![0u8; n * n];
        for x in 0..n {
            for y in x..n {
                let j = least(up[x] & up[y], &up)?;
                let g = least(dn[x] & dn[y], &dn)?;
                join[x * n + y] = j;
                join[y * n + x] = j;
                meet[x * n + y] = g;
                meet[y * n + x] = g;
            }
        }
        Some(Tables { n, join, meet })
    }

    fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.n + y] as usize
    }

    fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.n + y] as usize
    }

    /// Class representatives (block minima by index) of `con(a, b)`.
    fn con(&self, a: usize, b: usize) -> Vec<usize> {
        let n = self.n;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut pending = vec![(a, b)];
        while let Some((x, y)) = pending.pop() {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            if rx == ry {
                continue;
            }
            parent[rx.max(ry)] = rx.min(ry);
            for z in 0..n {
                let (j1, j2) = (self.join(x, z), self.join(y, z));
                if j1 != j2 {
                    pending.push((j1, j2));
                }
                let (m1, m2) = (self.meet(x, z), self.meet(y, z));
                if m1 != m2 {
                    pending.push((m1, m2));
                }
            }
        }
        (0..n).map(|x| find(&mut parent, x)).collect()
    }
}

fn refines(a: &[usize], b: &[usize]) -> bool {
    (0..a.len()).all(|x| b[x] == b[a[x]])
}

fn bound_isolating(c: &[usize]) -> bool {
    let n = c.len();
    let (o, i) = (n - 2, n - 1);
    (0..n).any(|x| c[x] != x) && (0..n).all(|x| (x == o || c[x] != c[o]) && (x == i || c[x] != c[i]))
}

/// Cross pairs complementary and both designated intervals prime.
fn fits_frame(p: &Small, t: &Tables) -> bool {
    let (o, i) = (t.n - 2, t.n - 1);
    let prime = |a: usize, b: usize| !(0..p.len()).any(|z| z != a && z != b && p.le(a, z) && p.le(z, b));
    prime(AP, BP)
        && prime(AQ, BQ)
        && [AP, BP]
            .iter()
            .all(|&a| [AQ, BQ].iter().all(|&b| t.join(a, b) == i && t.meet(a, b) == o))
}

/// C3 and C4 on the bitmask representation.
fn strict_bi_pair(t: &Tables) -> bool {
    let cp = t.con(AP, BP);
    let cq = t.con(AQ, BQ);
    cp != cq && refines(&cp, &cq) && bound_isolating(&cp) && bound_isolating(&cq)
}

/// First auxiliary element that can serve as `x` (C6 and C7).
fn slimmable_x(p: &Small) -> Option<usize> {
    let m = p.len();
    (4..m).find(|&x| {
        let below: Vec<usize> = (0..m).filter(|&y| y != x && p.le(y, x)).collect();
        let maximal = below
            .iter()
            .filter(|&&y| !below.iter().any(|&z| z != y && p.le(y, z)))
            .count();
        // with none below, the unique lower cover is o
        if maximal > 1 {
            return false;
        }
        let q = p.remove(x);
        let Some(t) = Tables::new(&q) else {
            return false;
        };
        let (cp, cq) = (t.con(AP, BP), t.con(AQ, BQ));
        cp == cq && bound_isolating(&cp)
    })
}

/// Minimum row encoding over all permutations of the auxiliaries.
fn canonical(p: &Small, x: usize) -> Vec<u32> {
    let k = p.len() - 4;
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best: Option<Vec<u32>> = None;
    loop {
        let map = |y: usize| if y < 4 { y } else { 4 + perm[y - 4] };
        let mut enc = vec![0u32; p.len() + 1];
        for (y, &row) in p.up.iter().enumerate() {
            let mut r = 0;
            for_bits(row, |z| r |= 1 << map(z));
            enc[map(y)] = r;
        }
        enc[p.len()] = map(x) as u32;
        if best.as_ref().is_none_or(|b| enc < *b) {
            best = Some(enc);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.expect("at least one permutation")
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Valid `(D, U)` pairs for a new element on top of `p`. `u_allowed`
/// restricts which elements may lie above the new one.
fn extensions(p: &Small, u_allowed: u32) -> Vec<(u32, u32)> {
    let m = p.len();
    let dn = p.down();
    let down_closed = |d: u32| {
        let mut ok = true;
        for_bits(d, |x| ok &= dn[x] & !d == 0);
        ok
    };
    let up_closed = |u: u32| {
        let mut ok = true;
        for_bits(u, |x| ok &= p.up[x] & !u == 0);
        ok
    };
    let mut out = Vec::new();
    let mut ups = Vec::new();
    let mut u = u_allowed;
    loop {
        ups.push(u);
        if u == 0 {
            break;
        }
        u = (u - 1) & u_allowed;
    }
    ups.reverse();
    let ups: Vec<u32> = ups.into_iter().filter(|&u| up_closed(u)).collect();
    for d in 0u32..(1 << m) {
        if !down_closed(d) {
            continue;
        }
        for &u in &ups {
            if d & u != 0 {
                continue;
            }
            let mut ok = true;
            for_bits(d, |x| ok &= p.up[x] & u == u);
            if ok {
                out.push((d, u));
            }
        }
    }
    out
}

/// Orders on the four designated elements with `a(p) < b(p)`, `a(q) < b(q)`.
fn designated_bases(frame_compatible: bool) -> Vec<Small> {
    let start = Small {
        up: vec![1 << AP | 1 << BP, 1 << BP],
    };
    if frame_compatible {
        return vec![start.extend(0, 0).extend(1 << AQ, 0)];
    }
    let mut out = Vec::new();
    for (d, u) in extensions(&start, 0b11) {
        let with_aq = start.extend(d, u);
        for (d2, u2) in extensions(&with_aq, 0b111) {
            if d2 >> AQ & 1 == 1 {
                out.push(with_aq.extend(d2, u2));
            }
        }
    }
    out
}

struct Walk<'a> {
    cfg: &'a SearchConfig,
    examined: u64,
    seen: HashSet<Vec<u32>>,
    found: Vec<(Small, usize)>,
}

impl Walk<'_> {
    fn done(&self) -> bool {
        self.found.len() >= self.cfg.max_results
    }

    fn grow(&mut self, p: &Small, left: usize) -> Result<(), ConstructionError> {
        if self.done() {
            return Ok(());
        }
        if left == 0 {
            return self.check(p);
        }
        // no auxiliary above the new one: U only among designated elements
        // that have no auxiliary above them
        let mut allowed = 0u32;
        for x in 0..4 {
            if p.up[x] & !DESIGNATED == 0 {
                allowed |= 1 << x;
            }
        }
        for (d, u) in extensions(p, allowed) {
            if self.cfg.frame_compatible && (d | u) & P_CHAIN != 0 && (d | u) & Q_CHAIN != 0 {
                continue;
            }
            self.grow(&p.extend(d, u), left - 1)?;
            if self.done() {
                break;
            }
        }
        Ok(())
    }

    fn check(&mut self, p: &Small) -> Result<(), ConstructionError> {
        self.examined += 1;
        if self.examined > self.cfg.budget {
            return Err(ConstructionError::BudgetExhausted {
                examined: self.examined - 1,
            });
        }
        let Some(t) = Tables::new(p) else {
            return Ok(());
        };
        if self.cfg.frame_compatible && !fits_frame(p, &t) {
            return Ok(());
        }
        if !strict_bi_pair(&t) {
            return Ok(());
        }
        let Some(x) = slimmable_x(p) else {
            return Ok(());
        };
        if self.seen.insert(canonical(p, x)) {
            self.found.push((p.clone(), x));
        }
        Ok(())
    }
}

/// Enumerates candidate gadgets with 0, 1, …, `max_aux` auxiliary elements
/// (fewest first) and returns contract passers in enumeration order. Each
/// passer is re-certified by [`verify_gadget`].
pub fn search_gadgets(cfg: &SearchConfig) -> Result<SearchOutcome, ConstructionError> {
    if cfg.max_aux > MAX_AUX {
        return Err(ConstructionError::Search(format!(
            "max_aux {} exceeds the supported {MAX_AUX}",
            cfg.max_aux
        )));
    }
    let mut walk = Walk {
        cfg,
        examined: 0,
        seen: HashSet::new(),
        found: Vec::new(),
    };
    for k in 0..=cfg.max_aux {
        for base in designated_bases(cfg.frame_compatible) {
            walk.grow(&base, k)?;
        }
        if walk.done() {
            break;
        }
    }
    let mut gadgets = Vec::new();
    for (p, x) in &walk.found {
        let g = to_gadget(p, *x)?;
        let report = verify_gadget(&g);
        if !report.passes_contract() || (cfg.frame_compatible && !report.fits_frame()) {
            return Err(ConstructionError::Search(format!(
                "fast filter and verify_gadget disagree on candidate {}",
                gadgets.len()
            )));
        }
        gadgets.push(g);
    }
    Ok(SearchOutcome {
        gadgets,
        examined: walk.examined,
    })
}

fn to_gadget(p: &Small, x: usize) -> Result<Gadget, ConstructionError> {
    let (gp, gq) = (ElementId::from("p"), ElementId::from("q"));
    let mut roles = vec![
        Role::A(gp.clone()),
        Role::B(gp.clone()),
        Role::A(gq.clone()),
        Role::B(gq.clone()),
    ];
    let mut k = 0;
    for y in 4..p.len() {
        if y == x {
            roles.push(Role::X(gp.clone(), gq.clone()));
        } else {
            k += 1;
            roles.push(Role::Aux(gp.clone(), gq.clone(), k));
        }
    }
    let mut labels = FrameLabeling::new();
    let ids: Vec<ElementId> = roles.into_iter().map(|r| labels.insert_canonical(r)).collect();
    let o = labels.insert_canonical(Role::Bottom);
    let i = labels.insert_canonical(Role::Top);
    let mut elements = ids.clone();
    elements.extend([o.clone(), i.clone()]);
    let mut edges = Vec::new();
    for (a, id) in ids.iter().enumerate() {
        edges.push((o.clone(), id.clone()));
        edges.push((id.clone(), i.clone()));
        for (b, other) in ids.iter().enumerate() {
            if a != b && p.le(a, b) {
                edges.push((id.clone(), other.clone()));
            }
        }
    }
    let order = BoundedPoset::build(elements, edges, &o, &i)?;
    let lattice = lattice_from_order(&order)?;
    Ok(Gadget::new(lattice, labels, gp, gq))
}
