use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{kernel_between, neighbors_j, JInvariant};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

/// A walk j_0 -> ... -> j_n in the 2-isogeny graph. `kernels[i]` is the
/// x-coordinate of the kernel point on `curve_from_j(j_i)` of the step
/// j_i -> j_{i+1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticPath {
    pub vertices: Vec<JInvariant>,
    pub kernels: Vec<crate::field::Fp2>,
}

impl EllipticPath {
    pub fn trivial(j: JInvariant) -> EllipticPath {
        EllipticPath { vertices: vec![j], kernels: Vec::new() }
    }

    /// Build from a vertex sequence, choosing the smallest witness per step.
    pub fn from_vertices(vertices: Vec<JInvariant>) -> Result<EllipticPath> {
        let kernels = vertices
            .windows(2)
            .map(|w| {
                kernel_between(w[0], w[1])?.ok_or_else(|| {
                    Error::InconsistentWitness(format!("{} and {} are not 2-isogenous", w[0], w[1]))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EllipticPath { vertices, kernels })
    }

    pub fn len(&self) -> usize {
        self.kernels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kernels.is_empty()
    }

    pub fn start(&self) -> JInvariant {
        self.vertices[0]
    }

    pub fn end(&self) -> JInvariant {
        *self.vertices.last().unwrap()
    }

    /// No vertex repeats.
    pub fn is_simple(&self) -> bool {
        let set: HashSet<_> = self.vertices.iter().collect();
        set.len() == self.vertices.len()
    }

    /// Recompute every step from its kernel witness.
    pub fn verify(&self) -> Result<()> {
        if self.vertices.len() != self.kernels.len() + 1 {
            return Err(Error::InconsistentWitness("vertex/kernel count mismatch".into()));
        }
        for (i, x) in self.kernels.iter().enumerate() {
            let m = super::curve_from_j(self.vertices[i]);
            let j = m.two_isogeny(*x)?.j_invariant()?;
            if j != self.vertices[i + 1] {
                return Err(Error::InconsistentWitness(format!("step {i} lands on {j}")));
            }
        }
        Ok(())
    }
}

type Key = (JInvariant, u8);

/// Bidirectional breadth-first search between `j1` and `j2`.
///
/// Without a parity constraint the search runs on the graph itself and
/// returns a shortest path. With one, it runs on the bipartite double cover
/// (vertex, depth mod 2) and accepts a meeting vertex only when the two
/// depths sum to the requested parity; the result is then a walk, which may
/// revisit vertices.
pub fn mitm_path(
    j1: JInvariant,
    j2: JInvariant,
    parity: Option<Parity>,
    max_len: usize,
) -> Result<EllipticPath> {
    let want = parity.map(Parity::bit);
    let key = |j: JInvariant, depth: usize| -> Key {
        match want {
            None => (j, 0),
            Some(_) => (j, (depth % 2) as u8),
        }
    };
    // partner of a forward key on the backward side
    let partner = |(j, a): Key| -> Key {
        match want {
            None => (j, 0),
            Some(w) => (j, (w + 2 - a) % 2),
        }
    };

    let mut fwd: HashMap<Key, Option<Key>> = HashMap::from([(key(j1, 0), None)]);
    let mut bwd: HashMap<Key, Option<Key>> = HashMap::from([(key(j2, 0), None)]);
    let mut fwd_frontier = vec![key(j1, 0)];
    let mut bwd_frontier = vec![key(j2, 0)];
    let (mut fwd_depth, mut bwd_depth) = (0usize, 0usize);

    let mut meeting = None;
    if bwd.contains_key(&partner(key(j1, 0))) {
        meeting = Some(key(j1, 0));
    }
    while meeting.is_none() {
        if fwd_depth + bwd_depth >= max_len || (fwd_frontier.is_empty() && bwd_frontier.is_empty()) {
            return Err(Error::PathNotFound(max_len));
        }
        let expand_fwd = !fwd_frontier.is_empty() && (fwd_frontier.len() <= bwd_frontier.len() || bwd_frontier.is_empty());
        let (map, frontier, depth) = if expand_fwd {
            (&mut fwd, &mut fwd_frontier, &mut fwd_depth)
        } else {
            (&mut bwd, &mut bwd_frontier, &mut bwd_depth)
        };
        *depth += 1;
        let mut next = Vec::new();
        for &k in frontier.iter() {
            let mut ns: Vec<JInvariant> = neighbors_j(k.0)?.into_iter().map(|(j, _)| j).collect();
            ns.dedup();
            for n in ns {
                let nk = key(n, *depth);
                if map.contains_key(&nk) {
                    continue;
                }
                map.insert(nk, Some(k));
                next.push(nk);
            }
        }
        *frontier = next;
        // look for a meeting among the freshly discovered keys
        let fresh: &Vec<Key> = if expand_fwd { &fwd_frontier } else { &bwd_frontier };
        for &k in fresh {
            let hit = if expand_fwd {
                bwd.contains_key(&partner(k)).then_some(k)
            } else {
                let fk = partner(k);
                fwd.contains_key(&fk).then_some(fk)
            };
            if hit.is_some() {
                meeting = hit;
                break;
            }
        }
    }
    let m = meeting.unwrap();
    let mut vertices = Vec::new();
    let mut cur = Some(m);
    while let Some(k) = cur {
        vertices.push(k.0);
        cur = fwd[&k];
    }
    vertices.reverse();
    let mut cur = bwd[&partner(m)];
    while let Some(k) = cur {
        vertices.push(k.0);
        cur = bwd[&k];
    }
    let path = EllipticPath::from_vertices(vertices)?;
    if path.len() > max_len {
        return Err(Error::PathNotFound(max_len));
    }
    Ok(path)
}

/// Low-memory path search: pseudorandom walks of fixed length from both
/// ends, keeping only walks whose endpoint is distinguished (its encoding
/// starts with `dp_bits` zero bits of a cheap mix). When the two sides share a
/// distinguished endpoint the two walks are regenerated and joined, and the
/// result is loop-erased into a path.
///
/// `digits` supplies the randomness (hex digits 0..16); walks are
/// non-backtracking.
pub fn lowmem_path<I: Iterator<Item = u8>>(
    j1: JInvariant,
    j2: JInvariant,
    digits: &mut I,
    walk_len: usize,
    dp_bits: u32,
    max_walks: usize,
) -> Result<EllipticPath> {
    if j1 == j2 {
        return Ok(EllipticPath::trivial(j1));
    }
    let mask = (1u64 << dp_bits) - 1;
    let distinguished = |j: &JInvariant| mix(j) & mask == 0;
    // endpoint -> (side, walk vertices); only distinguished endpoints kept
    let mut table: BTreeMap<JInvariant, (u8, Vec<JInvariant>)> = BTreeMap::new();
    for w in 0..max_walks {
        let side = (w % 2) as u8;
        let start = if side == 0 { j1 } else { j2 };
        let walk = random_walk(start, walk_len, digits)?;
        let end = *walk.last().unwrap();
        if !distinguished(&end) {
            continue;
        }
        match table.get(&end) {
            Some((s, other)) if *s != side => {
                let (a, b) = if side == 0 { (walk, other.clone()) } else { (other.clone(), walk) };
                let mut vs = a;
                vs.extend(b.into_iter().rev().skip(1));
                return EllipticPath::from_vertices(loop_erase(&vs));
            }
            Some(_) => {}
            None => {
                table.insert(end, (side, walk));
            }
        }
    }
    Err(Error::PathNotFound(walk_len))
}

fn mix(j: &JInvariant) -> u64 {
    let v = j.0.c0().wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ j.0.c1().wrapping_mul(0xc2b2_ae3d_27d4_eb4f);
    v ^ (v >> 29)
}

fn random_walk<I: Iterator<Item = u8>>(start: JInvariant, len: usize, digits: &mut I) -> Result<Vec<JInvariant>> {
    let mut vs = vec![start];
    let mut prev: Option<JInvariant> = None;
    let mut cur = start;
    for _ in 0..len {
        let mut ns: Vec<JInvariant> = neighbors_j(cur)?.into_iter().map(|(j, _)| j).collect();
        if let Some(p) = prev {
            if let Some(i) = ns.iter().position(|&j| j == p) {
                ns.remove(i);
            }
        }
        let d = digits.next().ok_or(Error::PathNotFound(len))? as usize;
        let next = ns[d % ns.len()];
        prev = Some(cur);
        cur = next;
        vs.push(cur);
    }
    Ok(vs)
}

/// Chronological loop erasure of a vertex sequence.
pub(crate) fn loop_erase<T: Copy + Eq + std::hash::Hash>(seq: &[T]) -> Vec<T> {
    let mut out: Vec<T> = Vec::new();
    let mut pos: HashMap<T, usize> = HashMap::new();
    for &v in seq {
        if let Some(&i) = pos.get(&v) {
            for u in out.drain(i + 1..) {
                pos.remove(&u);
            }
        } else {
            pos.insert(v, out.len());
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeCtx;
    use crate::genus1::supersingular_closure;

    #[test]
    fn trivial_path() {
        let c = PrimeCtx::new(11).unwrap();
        let j = JInvariant::j1728(&c);
        let p = mitm_path(j, j, None, 10).unwrap();
        assert!(p.is_empty());
        assert_eq!(p.vertices, vec![j]);
    }

    #[test]
    fn p11_short_path() {
        let c = PrimeCtx::new(11).unwrap();
        let p = mitm_path(JInvariant::j0(&c), JInvariant::j1728(&c), None, 10).unwrap();
        assert!(p.len() <= 2);
        p.verify().unwrap();
    }

    #[test]
    fn parity_is_honoured() {
        let c = PrimeCtx::new(127).unwrap();
        let s1 = supersingular_closure(JInvariant::j1728(&c)).unwrap();
        for (i, &a) in s1.iter().enumerate() {
            let b = s1[(i * 7 + 3) % s1.len()];
            for par in [Parity::Even, Parity::Odd] {
                let p = mitm_path(a, b, Some(par), 40).unwrap();
                p.verify().unwrap();
                assert_eq!(Parity::of(p.len()), par);
                assert_eq!((p.start(), p.end()), (a, b));
            }
            let p = mitm_path(a, b, None, 40).unwrap();
            assert!(p.is_simple());
        }
    }

    #[test]
    fn max_len_is_enforced() {
        let c = PrimeCtx::new(127).unwrap();
        let s1 = supersingular_closure(JInvariant::j1728(&c)).unwrap();
        let far = s1
            .iter()
            .map(|&j| (mitm_path(JInvariant::j1728(&c), j, None, 40).unwrap().len(), j))
            .max()
            .unwrap();
        assert!(far.0 >= 2);
        assert_eq!(
            mitm_path(JInvariant::j1728(&c), far.1, None, far.0 - 1),
            Err(Error::PathNotFound(far.0 - 1))
        );
    }

    #[test]
    fn loop_erasure() {
        assert_eq!(loop_erase(&[1, 2, 3, 2, 4, 1, 5]), vec![1, 5]);
        assert_eq!(loop_erase(&[1, 2, 3]), vec![1, 2, 3]);
    }

    #[test]
    fn lowmem_finds_a_path() {
        let c = PrimeCtx::new(1019).unwrap();
        let s1 = supersingular_closure(JInvariant::j1728(&c)).unwrap();
        let (a, b) = (s1[3], s1[s1.len() - 2]);
        let mut state = 12345u64;
        let mut digits = std::iter::from_fn(|| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            Some((state >> 60) as u8)
        });
        let p = lowmem_path(a, b, &mut digits, 12, 1, 20_000).unwrap();
        p.verify().unwrap();
        assert!(p.is_simple());
        assert_eq!((p.start(), p.end()), (a, b));
    }
}
