//! Search for invariant subspaces of a (non-uniform) nilpotent Jordan
//! operator with equal restriction models that are not related by any
//! invertible element of the commutant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{
    commutant_orbit, int_vec, jordan_partitions, krylov_basis, model_of_partition, nilpotent_jordan, span_key, DecidedBy,
    QMat, Q,
};
use crate::jordan::JordanModel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleOptions {
    /// Jordan block sizes of `T`, e.g. `[2, 1]` for `S(z^2) ⊕ S(z)`.
    pub blocks: Vec<usize>,
    /// Generating vectors have integer entries in `[-resolution, resolution]`;
    /// `0` restricts the search to the coordinate lattice elements.
    pub resolution: i64,
    /// Maximum number of subspace pairs decided.
    pub budget: usize,
    /// Stop after this many witnesses.
    pub max_witnesses: usize,
    pub seed: u64,
}

impl Default for CounterexampleOptions {
    fn default() -> Self {
        Self { blocks: vec![2, 1], resolution: 1, budget: 100_000, max_witnesses: 1, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Integer spanning columns of `M_1` and `M_2`.
    pub m1: Vec<Vec<String>>,
    pub m2: Vec<Vec<String>>,
    pub restriction: JordanModel,
    pub compression1: JordanModel,
    pub compression2: JordanModel,
    pub decided_by: DecidedBy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub blocks: Vec<usize>,
    pub resolution: i64,
    pub candidates: usize,
    pub pairs_checked: usize,
    /// `true` when every pair in the enumerated family was decided.
    pub complete: bool,
    pub witnesses: Vec<Witness>,
}

struct Candidate {
    basis: QMat,
    restriction: Vec<usize>,
    compression: Vec<usize>,
}

/// Coordinate subspaces spanned by the last `t_b` basis vectors of each block.
fn lattice_elements(blocks: &[usize]) -> Vec<QMat> {
    let n: usize = blocks.iter().sum();
    let mut out = Vec::new();
    let mut tails = vec![0usize; blocks.len()];
    loop {
        let mut columns = Vec::new();
        let mut offset = 0;
        for (b, &k) in blocks.iter().enumerate() {
            for i in k - tails[b]..k {
                let mut e = vec![Q::default(); n];
                e[offset + i] = Q::from_integer(1.into());
                columns.push(e);
            }
            offset += k;
        }
        out.push(QMat::from_columns(n, &columns));
        let mut pos = 0;
        loop {
            if pos == blocks.len() {
                return out;
            }
            tails[pos] += 1;
            if tails[pos] <= blocks[pos] {
                break;
            }
            tails[pos] = 0;
            pos += 1;
        }
    }
}

fn integer_grid(n: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut v = vec![-r; n];
    loop {
        if v.iter().any(|&x| x != 0) {
            out.push(v.clone());
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return out;
            }
            v[pos] += 1;
            if v[pos] <= r {
                break;
            }
            v[pos] = -r;
            pos += 1;
        }
    }
}

fn render(basis: &QMat) -> Vec<Vec<String>> {
    basis.columns().iter().map(|c| c.iter().map(ToString::to_string).collect()).collect()
}

/// Enumerates invariant subspaces (lattice elements, cyclic subspaces of grid
/// vectors and joins of pairs of them), groups them by restriction model and
/// decides commutant-orbit membership for each pair inside a group.
pub fn search(options: &CounterexampleOptions) -> Result<CounterexampleReport> {
    if options.blocks.is_empty() || options.blocks.contains(&0) {
        return Err(Error::PreconditionViolated("block sizes must be positive".into()));
    }
    if options.resolution < 0 {
        return Err(Error::PreconditionViolated("resolution must be non-negative".into()));
    }
    let t = nilpotent_jordan(&options.blocks);
    let n = t.rows();

    let mut keys = Vec::new();
    let mut spans = Vec::new();
    let add = |basis: QMat, keys: &mut Vec<Vec<Q>>, spans: &mut Vec<QMat>| {
        let key = span_key(&basis);
        if !keys.contains(&key) {
            keys.push(key);
            spans.push(basis);
        }
    };
    for basis in lattice_elements(&options.blocks) {
        add(basis, &mut keys, &mut spans);
    }
    if options.resolution > 0 {
        let cyclic: Vec<QMat> = integer_grid(n, options.resolution)
            .iter()
            .map(|v| krylov_basis(&t, &[int_vec(v)]))
            .collect();
        let mut distinct = Vec::new();
        let mut cyclic_keys = Vec::new();
        for basis in cyclic {
            let key = span_key(&basis);
            if !cyclic_keys.contains(&key) {
                cyclic_keys.push(key);
                distinct.push(basis);
            }
        }
        for basis in &distinct {
            add(basis.clone(), &mut keys, &mut spans);
        }
        for (i, a) in distinct.iter().enumerate() {
            for b in &distinct[i + 1..] {
                let mut cols = a.columns();
                cols.extend(b.columns());
                add(QMat::from_columns(n, &cols).column_basis(), &mut keys, &mut spans);
            }
        }
    }

    let candidates: Vec<Candidate> = spans
        .into_iter()
        .map(|basis| {
            let (restriction, compression) = jordan_partitions(&t, &basis);
            Candidate { basis, restriction, compression }
        })
        .collect();

    let mut report = CounterexampleReport {
        blocks: options.blocks.clone(),
        resolution: options.resolution,
        candidates: candidates.len(),
        pairs_checked: 0,
        complete: true,
        witnesses: Vec::new(),
    };
    'outer: for (i, a) in candidates.iter().enumerate() {
        for b in &candidates[i + 1..] {
            if a.restriction != b.restriction {
                continue;
            }
            if report.pairs_checked >= options.budget {
                report.complete = false;
                break 'outer;
            }
            report.pairs_checked += 1;
            let decision = commutant_orbit(&t, &a.basis, &b.basis, options.seed);
            if decision.in_orbit || decision.decided_by == DecidedBy::Randomized {
                continue;
            }
            report.witnesses.push(Witness {
                m1: render(&a.basis),
                m2: render(&b.basis),
                restriction: model_of_partition(&a.restriction),
                compression1: model_of_partition(&a.compression),
                compression2: model_of_partition(&b.compression),
                decided_by: decision.decided_by,
            });
            if report.witnesses.len() >= options.max_witnesses {
                break 'outer;
            }
        }
    }
    Ok(report)
}
