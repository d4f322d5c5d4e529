//! Seeded random instances for the identity checks.
//!
//! Equivariant complexes are assembled from lattices with a standard action
//! (trivial `Z`, sign `Z`, the regular permutation module and the cyclotomic
//! lattice `Z[x]/(P)`), and differentials are drawn from the lattice of
//! equivariant maps killing the previous image. Acyclicity over `Q` is forced
//! by matching isotypic multiplicities and then checked, with rejection.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{ChainComplex, GroupAction};
use crate::constructions::order::OrderComplex;
use crate::constructions::{CellActionSpec, CellSpec, CwData};
use crate::linalg::{rational_rank, saturated_kernel, IntMatrix, IntPoly, RatMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Block {
    Trivial,
    /// The regular permutation module `Z[C_p]`.
    Free,
    /// `Z[x]/(1 + x + ... + x^{p-1})`; for `p = 2` the sign representation.
    Cyclotomic,
}

fn block_matrix(b: Block, p: u32) -> IntMatrix {
    let p = p as usize;
    match b {
        Block::Trivial => IntMatrix::identity(1),
        Block::Free => {
            let mut m = IntMatrix::zeros(p, p);
            for i in 0..p {
                m.set((i + 1) % p, i, BigInt::one());
            }
            m
        }
        Block::Cyclotomic => {
            // Companion matrix of 1 + x + ... + x^{p-1}.
            let n = p - 1;
            let mut m = IntMatrix::zeros(n, n);
            for i in 0..n {
                if i + 1 < n {
                    m.set(i + 1, i, BigInt::one());
                }
                m.set(i, n - 1, -BigInt::one());
            }
            m
        }
    }
}

fn block_rank(b: Block, p: u32) -> usize {
    match b {
        Block::Trivial => 1,
        Block::Free => p as usize,
        Block::Cyclotomic => p as usize - 1,
    }
}

/// Parameters for [`random_complex`].
#[derive(Clone, Debug)]
pub struct Params {
    /// Order of the action; `1` produces complexes without an action.
    pub order: u32,
    pub max_len: usize,
    pub max_rank: usize,
    pub max_entry: i64,
    /// Require rational acyclicity.
    pub acyclic: bool,
    /// Use only signed permutation actions and the identity metric.
    pub unimodular: bool,
    /// Attach a random invariant positive definite metric instead of the
    /// identity (or its group average).
    pub random_metric: bool,
    /// Force `sum (-1)^i #(fixed basis vectors) = 0`.
    pub balanced_fixed: bool,
    /// Attach a metric at all.
    pub metric: bool,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            order: 1,
            max_len: 3,
            max_rank: 4,
            max_entry: 5,
            acyclic: true,
            unimodular: false,
            random_metric: false,
            balanced_fixed: false,
            metric: true,
        }
    }
}

/// Solution lattice of `sigma' X = X sigma` and `X D = 0` for `X` of shape `m x n`.
fn constrained_maps(sigma: Option<(&IntMatrix, &IntMatrix)>, kill: Option<&IntMatrix>, m: usize, n: usize) -> Vec<IntMatrix> {
    let unknowns = m * n;
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    if let Some((s_src, s_dst)) = sigma {
        for a in 0..m {
            for b in 0..n {
                let mut eq = vec![BigInt::zero(); unknowns];
                for i in 0..m {
                    eq[i * n + b] += s_dst.get(a, i);
                }
                for j in 0..n {
                    eq[a * n + j] -= s_src.get(j, b);
                }
                rows.push(eq);
            }
        }
    }
    if let Some(d) = kill {
        for a in 0..m {
            for b in 0..d.cols() {
                let mut eq = vec![BigInt::zero(); unknowns];
                for j in 0..n {
                    eq[a * n + j] += d.get(j, b);
                }
                rows.push(eq);
            }
        }
    }
    let basis = if rows.is_empty() {
        IntMatrix::identity(unknowns)
    } else {
        saturated_kernel(&IntMatrix::from_rows(rows, unknowns).expect("constraint rows"))
    };
    (0..basis.cols())
        .map(|c| IntMatrix::from_vec(m, n, basis.column(c)).expect("reshape"))
        .collect()
}

fn random_combination<R: Rng>(rng: &mut R, basis: &[IntMatrix], m: usize, n: usize, coeff: i64) -> IntMatrix {
    let mut x = IntMatrix::zeros(m, n);
    for b in basis {
        let c: i64 = rng.gen_range(-coeff..=coeff);
        if c != 0 {
            x = x.add_matrix(&b.scale(&BigInt::from(c)));
        }
    }
    x
}

fn random_pd<R: Rng>(rng: &mut R, n: usize) -> RatMatrix {
    let b = RatMatrix::from_rows(
        (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| BigRational::new(BigInt::from(rng.gen_range(-2..=2)), BigInt::from(rng.gen_range(1..=2))))
                    .collect()
            })
            .collect(),
        n,
    )
    .expect("square");
    let mut s = b.transpose().matmul(&b);
    for i in 0..n {
        let v = s.get(i, i).clone() + BigRational::one();
        s.set(i, i, v);
    }
    s
}

/// `sum_k (sigma^k)^T S sigma^k`, which is invariant and positive definite.
fn average_metric(s: &RatMatrix, sigma: &IntMatrix, p: u32) -> RatMatrix {
    let sr = sigma.to_rational();
    let mut acc = RatMatrix::zeros(s.rows(), s.cols());
    let mut power = RatMatrix::identity(s.rows());
    for _ in 0..p {
        acc = acc.add_matrix(&power.transpose().matmul(s).matmul(&power));
        power = sr.matmul(&power);
    }
    acc
}

fn choose_blocks<R: Rng>(rng: &mut R, params: &Params) -> Option<Vec<Vec<Block>>> {
    let p = params.order.max(1);
    let len = rng.gen_range(2..=params.max_len.max(2));
    // Rational isotypic multiplicities (trivial type, type of `P(sigma)`) per
    // degree, built from two-term pieces `k -> k + 1` so that both
    // isotypic Euler characteristics vanish; each degree is then realised by
    // free blocks (one of each type) plus single blocks.
    let mut mult = vec![(0usize, 0usize); len];
    for k in 0..len - 1 {
        let pieces = rng.gen_range(if params.acyclic { 1 } else { 0 }..=3);
        for _ in 0..pieces {
            let (t, s) = match p {
                1 => (1, 0),
                _ if params.unimodular && p > 2 => *[(1, 1), (1, 0)].choose(rng).unwrap(),
                _ => *[(1, 1), (1, 0), (0, 1)].choose(rng).unwrap(),
            };
            for m in &mut mult[k..=k + 1] {
                m.0 += t;
                m.1 += s;
            }
        }
    }
    if !params.acyclic {
        for m in mult.iter_mut() {
            if rng.gen_bool(0.4) {
                m.0 += 1;
            }
            if p > 1 && rng.gen_bool(0.3) {
                m.1 += 1;
            }
        }
    }
    let mut degree_blocks: Vec<Vec<Block>> = Vec::with_capacity(len);
    for &(t, s) in &mult {
        let free = if p == 1 {
            0
        } else if params.unimodular && p > 2 {
            if s > t {
                return None;
            }
            s
        } else {
            rng.gen_range(0..=t.min(s))
        };
        let mut bs = vec![Block::Free; free];
        bs.extend(std::iter::repeat(Block::Trivial).take(t - free));
        bs.extend(std::iter::repeat(Block::Cyclotomic).take(s - free));
        degree_blocks.push(bs);
    }
    for blocks in degree_blocks.iter_mut() {
        blocks.shuffle(rng);
    }
    let rank = |bs: &Vec<Block>| bs.iter().map(|b| block_rank(*b, p)).sum::<usize>();
    if degree_blocks.iter().any(|bs| rank(bs) > params.max_rank) || degree_blocks.iter().all(|bs| bs.is_empty()) {
        return None;
    }
    if params.balanced_fixed {
        let fixed: i64 = degree_blocks
            .iter()
            .enumerate()
            .map(|(k, bs)| {
                let n = bs.iter().filter(|b| **b != Block::Free).count() as i64;
                if k % 2 == 0 { n } else { -n }
            })
            .sum();
        if fixed != 0 {
            return None;
        }
    }
    Some(degree_blocks)
}

fn try_complex<R: Rng>(rng: &mut R, params: &Params) -> Option<ChainComplex> {
    let p = params.order.max(1);
    let blocks = choose_blocks(rng, params)?;
    let ranks: Vec<usize> = blocks.iter().map(|bs| bs.iter().map(|b| block_rank(*b, p)).sum()).collect();
    let sigmas: Vec<IntMatrix> = blocks
        .iter()
        .map(|bs| bs.iter().fold(IntMatrix::zeros(0, 0), |acc, b| acc.block_diag(&block_matrix(*b, p))))
        .collect();
    let mut diffs: Vec<IntMatrix> = Vec::new();
    for k in 0..ranks.len() - 1 {
        let (n, m) = (ranks[k], ranks[k + 1]);
        let sigma = (p > 1).then(|| (&sigmas[k], &sigmas[k + 1]));
        let basis = constrained_maps(sigma, diffs.last(), m, n);
        let mut chosen = None;
        for _ in 0..8 {
            let coeff = if rng.gen_bool(0.5) { 1 } else { 2 };
            let x = random_combination(rng, &basis, m, n, coeff);
            if x.max_abs() > BigInt::from(params.max_entry) {
                continue;
            }
            if params.acyclic {
                let below = diffs.last().map_or(0, |d| rational_rank(&d.to_rational()));
                if rational_rank(&x.to_rational()) != n - below {
                    continue;
                }
            }
            chosen = Some(x);
            break;
        }
        diffs.push(chosen?);
    }
    let mut c = ChainComplex::new(0, ranks.clone(), diffs).ok()?;
    if params.acyclic && !c.is_rationally_acyclic() {
        return None;
    }
    let shift = rng.gen_range(-1..=1);
    c = c.shifted_to(shift);
    if p > 1 {
        c = c.with_action(GroupAction::new(p, sigmas.clone())).ok()?;
    }
    if params.metric {
        let grams: Vec<RatMatrix> = if params.unimodular || p == 1 && !params.random_metric {
            ranks.iter().map(|&n| RatMatrix::identity(n)).collect()
        } else {
            ranks
                .iter()
                .zip(&sigmas)
                .map(|(&n, s)| {
                    let base = if params.random_metric { random_pd(rng, n) } else { RatMatrix::identity(n) };
                    if p > 1 {
                        average_metric(&base, s, p)
                    } else {
                        base
                    }
                })
                .collect()
        };
        c = c.with_gram(grams).ok()?;
    }
    debug_assert!(c.validate().passed());
    Some(c)
}

/// Random complex per `params`, retrying until the constraints are met.
pub fn random_complex<R: Rng>(rng: &mut R, params: &Params) -> ChainComplex {
    loop {
        if let Some(c) = try_complex(rng, params) {
            return c;
        }
    }
}

/// Random `Q`-acyclic complex without action, identity metric.
pub fn random_acyclic<R: Rng>(rng: &mut R, max_len: usize, max_rank: usize, max_entry: i64) -> ChainComplex {
    random_complex(
        rng,
        &Params {
            max_len,
            max_rank,
            max_entry,
            ..Params::default()
        },
    )
}

/// Random complex (every degree range and rank bounded by `max_len`,
/// `max_rank`) with no acyclicity requirement.
pub fn random_any<R: Rng>(rng: &mut R, max_len: usize, max_rank: usize, max_entry: i64) -> ChainComplex {
    random_complex(
        rng,
        &Params {
            max_len,
            max_rank,
            max_entry,
            acyclic: false,
            ..Params::default()
        },
    )
}

/// Random `Q`-acyclic complex without action, identity metric, total rank at
/// most `max_total` and at most `max_len` degrees.
pub fn random_small<R: Rng>(rng: &mut R, max_total: usize, max_len: usize) -> ChainComplex {
    loop {
        let c = random_complex(
            rng,
            &Params {
                max_len,
                max_rank: max_total.min(3),
                max_entry: 4,
                ..Params::default()
            },
        );
        if c.total_rank() <= max_total {
            return c;
        }
    }
}

/// Small random metrized complex of total rank at most `max_total`, used as a
/// tensor factor.
pub fn random_tensor_base<R: Rng>(rng: &mut R, max_total: usize) -> ChainComplex {
    loop {
        let acyclic = rng.gen_bool(0.5);
        let random_metric = rng.gen_bool(0.5);
        let c = random_complex(
            rng,
            &Params {
                max_len: 3,
                max_rank: max_total.min(3),
                max_entry: 4,
                acyclic,
                random_metric,
                ..Params::default()
            },
        );
        if c.total_rank() <= max_total && c.total_rank() > 0 {
            return c;
        }
    }
}

/// Random equivariant graph: vertices and edges fall into fixed cells and free
/// orbits of size `p`; fixed edges join fixed vertices.
pub fn random_graph<R: Rng>(rng: &mut R, p: u32) -> CwData {
    let p = p as usize;
    loop {
        let fixed_v = rng.gen_range(0..=2usize);
        let free_v = rng.gen_range(0..=2usize);
        if fixed_v + free_v == 0 {
            continue;
        }
        let mut cells = Vec::new();
        let mut map = BTreeMap::new();
        let mut vertices: Vec<(String, Option<(usize, usize)>)> = Vec::new();
        for i in 0..fixed_v {
            let id = format!("a{i}");
            cells.push(CellSpec { id: id.clone(), dim: 0, boundary: vec![] });
            vertices.push((id, None));
        }
        for o in 0..free_v {
            for k in 0..p {
                let id = format!("v{o}_{k}");
                cells.push(CellSpec { id: id.clone(), dim: 0, boundary: vec![] });
                map.insert(id.clone(), (format!("v{o}_{}", (k + 1) % p), 1));
                vertices.push((id, Some((o, k))));
            }
        }
        let vertex_name = |v: &(String, Option<(usize, usize)>), shift: usize| match v.1 {
            None => v.0.clone(),
            Some((o, k)) => format!("v{o}_{}", (k + shift) % p),
        };
        let fixed_e = if fixed_v > 0 { rng.gen_range(0..=2usize) } else { 0 };
        for i in 0..fixed_e {
            let a = rng.gen_range(0..fixed_v);
            let b = rng.gen_range(0..fixed_v);
            let boundary = if a == b {
                vec![]
            } else {
                vec![(format!("a{b}"), 1), (format!("a{a}"), -1)]
            };
            cells.push(CellSpec { id: format!("f{i}"), dim: 1, boundary });
        }
        let free_e = rng.gen_range(0..=3usize);
        for o in 0..free_e {
            let s = vertices.choose(rng).unwrap().clone();
            let t = vertices.choose(rng).unwrap().clone();
            if s.1.is_none() && t.1.is_none() && s.0 == t.0 {
                continue;
            }
            for k in 0..p {
                let id = format!("e{o}_{k}");
                let (from, to) = (vertex_name(&s, k), vertex_name(&t, k));
                let boundary = if from == to { vec![] } else { vec![(to, 1), (from, -1)] };
                cells.push(CellSpec { id: id.clone(), dim: 1, boundary });
                map.insert(id, (format!("e{o}_{}", (k + 1) % p), 1));
            }
        }
        if let Ok(k) = CwData::new(&cells, Some(&CellActionSpec { order: p as u32, map })) {
            return k;
        }
    }
}

/// Random rationally acyclic complex over `O = Z[x]/(f)` of ranks at most 2.
pub fn random_order_complex<R: Rng>(rng: &mut R, modulus: &IntPoly) -> OrderComplex {
    let deg = modulus.degree().expect("monic");
    loop {
        let r = rng.gen_range(1..=2usize);
        let entry = |rng: &mut R| IntPoly::from_i64(&(0..deg).map(|_| rng.gen_range(-2..=2)).collect::<Vec<_>>());
        let d: Vec<Vec<IntPoly>> = (0..r).map(|_| (0..r).map(|_| entry(rng)).collect()).collect();
        let min_degree = rng.gen_range(0..=1);
        let Ok(p) = OrderComplex::new(modulus.clone(), min_degree, vec![r, r], vec![d]) else {
            continue;
        };
        match crate::constructions::restrict_scalars(&p) {
            Ok(c) if c.is_rationally_acyclic() => return p,
            _ => continue,
        }
    }
}

/// Whether every stored entry lies in `[-bound, bound]`.
pub fn entries_within(c: &ChainComplex, bound: i64) -> bool {
    c.differentials()
        .iter()
        .all(|d| d.entries().all(|(_, _, v)| v.abs() <= BigInt::from(bound)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_complexes_are_valid() {
        let mut r = rng(1);
        for order in [1, 2, 3] {
            for _ in 0..10 {
                let c = random_complex(&mut r, &Params { order, ..Params::default() });
                assert!(c.validate().passed());
                assert!(c.is_rationally_acyclic());
            }
        }
    }

    #[test]
    fn unimodular_complexes_use_identity_metric() {
        let mut r = rng(2);
        let c = random_complex(&mut r, &Params { order: 3, unimodular: true, ..Params::default() });
        assert!(c.has_unimodular_metric());
        assert!(c.validate().passed());
    }

    #[test]
    fn same_seed_same_complex() {
        let a = random_acyclic(&mut rng(9), 4, 6, 5);
        let b = random_acyclic(&mut rng(9), 4, 6, 5);
        assert_eq!(a, b);
    }

    #[test]
    fn graphs_are_valid() {
        let mut r = rng(3);
        for p in [2, 3] {
            for _ in 0..10 {
                let k = random_graph(&mut r, p);
                assert!(crate::constructions::cw_cochain_complex(&k).unwrap().validate().passed());
            }
        }
    }
}
