//! Minimum-weight perfect matching for planar surface codes.
//!
//! Each sector gets a decoding graph whose nodes are the checks of one type
//! plus a single virtual boundary node, and whose edges are data qubits. An
//! X error on a qubit flips the Z-checks at both ends of its edge (or one
//! check and the boundary), so matching the Z-check defects in pairs or to the
//! boundary and flipping the qubits along shortest paths reproduces the
//! syndrome.

use std::collections::VecDeque;

use mwmatching::{Matching, SENTINEL};

use crate::bits::BitVec;
use crate::code::{StabilizerCode, Syndrome};
use crate::error::{QecError, Result};
use crate::library::CheckKind;
use crate::pauli::PauliOperator;

/// Defect cap of the bitmask solver.
pub const DEFAULT_EXACT_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MatchingSolver {
    /// Weighted blossom; exact with no defect limit.
    #[default]
    Blossom,
    /// Memoized dynamic programming over defect subsets, refusing more than `cap` defects.
    Exact { cap: usize },
}

/// Shortest-path data for one sector.
#[derive(Clone, Debug)]
struct SectorGraph {
    /// Error letter corrected in this sector.
    kind: CheckKind,
    /// Generator positions of the checks that see this sector's errors.
    checks: Vec<usize>,
    /// `dist[a][b]` in data-qubit hops; the last index is the boundary.
    dist: Vec<Vec<u32>>,
    /// `parent[src][v] = (previous node, qubit)` in the BFS tree rooted at `src`.
    parent: Vec<Vec<Option<(usize, usize)>>>,
}

const UNREACHABLE: u32 = u32::MAX / 4;

impl SectorGraph {
    fn new(code: &StabilizerCode, check_kind: CheckKind, error_kind: CheckKind) -> Result<Self> {
        let layout = code.layout().ok_or_else(|| QecError::NoLayout(code.name().to_string()))?;
        let checks: Vec<usize> = layout
            .ancillas
            .iter()
            .enumerate()
            .filter(|(_, a)| a.kind == check_kind)
            .map(|(i, _)| i)
            .collect();
        let boundary = checks.len();
        let mut touching: Vec<Vec<usize>> = vec![Vec::new(); code.n()];
        for (node, &g) in checks.iter().enumerate() {
            for &q in &layout.ancillas[g].support {
                touching[q - 1].push(node);
            }
        }
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); boundary + 1];
        for (q, nodes) in touching.iter().enumerate() {
            match nodes.as_slice() {
                [a] => {
                    adj[*a].push((boundary, q));
                    adj[boundary].push((*a, q));
                }
                [a, b] => {
                    adj[*a].push((*b, q));
                    adj[*b].push((*a, q));
                }
                _ => {
                    return Err(QecError::InvalidCode(format!(
                        "qubit {} touches {} {:?}-checks; matching needs 1 or 2",
                        q + 1,
                        nodes.len(),
                        check_kind
                    )))
                }
            }
        }
        let mut dist = Vec::with_capacity(boundary + 1);
        let mut parent = Vec::with_capacity(boundary + 1);
        for src in 0..=boundary {
            let mut d = vec![UNREACHABLE; boundary + 1];
            let mut p = vec![None; boundary + 1];
            let mut queue = VecDeque::from([src]);
            d[src] = 0;
            while let Some(u) = queue.pop_front() {
                // Paths never pass through the boundary node.
                if u == boundary && src != boundary {
                    continue;
                }
                // Highest qubit first among equal-length routes.
                for &(v, q) in adj[u].iter().rev() {
                    if d[v] == UNREACHABLE {
                        d[v] = d[u] + 1;
                        p[v] = Some((u, q));
                        queue.push_back(v);
                    }
                }
            }
            dist.push(d);
            parent.push(p);
        }
        Ok(Self {
            kind: error_kind,
            checks,
            dist,
            parent,
        })
    }

    fn boundary(&self) -> usize {
        self.checks.len()
    }

    fn problem(&self, s: &Syndrome) -> MatchingProblem {
        let defects: Vec<usize> = (0..self.checks.len()).filter(|&i| s.get(self.checks[i])).collect();
        let b = self.boundary();
        MatchingProblem {
            sector: self.kind,
            boundary_cost: defects.iter().map(|&i| self.dist[i][b]).collect(),
            pair_cost: defects
                .iter()
                .map(|&i| defects.iter().map(|&j| self.dist[i][j]).collect())
                .collect(),
            defects: defects.iter().map(|&i| self.checks[i] + 1).collect(),
            nodes: defects,
        }
    }

    /// Flips this sector's letter on every qubit of the path `from → to`.
    fn flip_path(&self, from: usize, to: usize, mask: &mut BitVec) {
        let mut v = to;
        while v != from {
            let (u, q) = self.parent[from][v].expect("matched nodes are connected");
            mask.flip(q);
            v = u;
        }
    }
}

/// One sector's matching instance.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchingProblem {
    /// Error type this sector corrects.
    pub sector: CheckKind,
    /// 1-based generator labels of the flagged checks.
    pub defects: Vec<usize>,
    /// Lattice distance from each defect to the boundary.
    pub boundary_cost: Vec<u32>,
    /// Symmetric defect-to-defect lattice distances.
    pub pair_cost: Vec<Vec<u32>>,
    nodes: Vec<usize>,
}

/// Each defect is paired with another (`Some(j)`) or with the boundary (`None`).
#[derive(Clone, Debug, PartialEq)]
pub struct MatchingSolution {
    pub partner: Vec<Option<usize>>,
    pub cost: u64,
}

impl MatchingProblem {
    /// Builds an instance directly from cost tables.
    pub fn from_costs(sector: CheckKind, boundary_cost: Vec<u32>, pair_cost: Vec<Vec<u32>>) -> Self {
        let k = boundary_cost.len();
        Self {
            sector,
            defects: (1..=k).collect(),
            boundary_cost,
            pair_cost,
            nodes: (0..k).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.boundary_cost.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary_cost.is_empty()
    }

    pub fn cost_of(&self, partner: &[Option<usize>]) -> u64 {
        partner
            .iter()
            .enumerate()
            .map(|(i, p)| match p {
                None => u64::from(self.boundary_cost[i]),
                // Each pair is visited twice.
                Some(j) if i < *j => u64::from(self.pair_cost[i][*j]),
                Some(_) => 0,
            })
            .sum()
    }

    pub fn solve(&self, solver: MatchingSolver) -> Result<MatchingSolution> {
        match solver {
            MatchingSolver::Blossom => Ok(self.solve_blossom()),
            MatchingSolver::Exact { cap } => self.solve_exact(cap),
        }
    }

    pub fn solve_exact(&self, cap: usize) -> Result<MatchingSolution> {
        let k = self.len();
        if k > cap {
            return Err(QecError::InstanceTooLarge { defects: k, cap });
        }
        let full = (1usize << k) - 1;
        // best[mask] = minimum cost of matching the defects in `mask`.
        let mut best = vec![u64::MAX; full + 1];
        let mut choice = vec![None; full + 1];
        best[0] = 0;
        for mask in 1..=full {
            let i = mask.trailing_zeros() as usize;
            let rest = mask & !(1 << i);
            let mut b = best[rest] + u64::from(self.boundary_cost[i]);
            let mut c = None;
            let mut others = rest;
            while others != 0 {
                let j = others.trailing_zeros() as usize;
                others &= others - 1;
                let cost = best[rest & !(1 << j)] + u64::from(self.pair_cost[i][j]);
                if cost < b {
                    b = cost;
                    c = Some(j);
                }
            }
            best[mask] = b;
            choice[mask] = c;
        }
        let mut partner = vec![None; k];
        let mut mask = full;
        while mask != 0 {
            let i = mask.trailing_zeros() as usize;
            mask &= !(1 << i);
            if let Some(j) = choice[mask | (1 << i)] {
                partner[i] = Some(j);
                partner[j] = Some(i);
                mask &= !(1 << j);
            }
        }
        Ok(MatchingSolution {
            partner,
            cost: best[full],
        })
    }

    /// Perfect matching on defects plus one boundary copy per defect, solved as
    /// a maximum-cardinality maximum-weight matching with weights `C - w`.
    pub fn solve_blossom(&self) -> MatchingSolution {
        let k = self.len();
        if k == 0 {
            return MatchingSolution {
                partner: Vec::new(),
                cost: 0,
            };
        }
        let top = self
            .boundary_cost
            .iter()
            .copied()
            .chain(self.pair_cost.iter().flatten().copied())
            .filter(|&w| w < UNREACHABLE)
            .max()
            .unwrap_or(0) as i32
            + 1;
        let mut edges = Vec::new();
        for i in 0..k {
            edges.push((i, k + i, top - self.boundary_cost[i].min(UNREACHABLE) as i32));
            for j in i + 1..k {
                let w = self.pair_cost[i][j];
                if u64::from(w) < u64::from(self.boundary_cost[i]) + u64::from(self.boundary_cost[j]) {
                    edges.push((i, j, top - w as i32));
                }
                edges.push((k + i, k + j, top));
            }
        }
        let mate = Matching::new(edges).max_cardinality().solve();
        let partner: Vec<Option<usize>> = (0..k)
            .map(|i| {
                let m = mate[i];
                debug_assert!(m != SENTINEL);
                (m < k).then_some(m)
            })
            .collect();
        let cost = self.cost_of(&partner);
        MatchingSolution { partner, cost }
    }

    /// Minimum over every pairing, by plain recursion. Exponential; for tests.
    pub fn brute_force_cost(&self) -> u64 {
        fn go(p: &MatchingProblem, left: &mut Vec<usize>) -> u64 {
            let Some(i) = left.pop() else {
                return 0;
            };
            let mut best = u64::from(p.boundary_cost[i]) + go(p, left);
            for t in 0..left.len() {
                let j = left.remove(t);
                best = best.min(u64::from(p.pair_cost[i][j]) + go(p, left));
                left.insert(t, j);
            }
            left.push(i);
            best
        }
        go(self, &mut (0..self.len()).collect())
    }
}

/// Matching decoder for a code carrying a [`SurfaceLayout`](crate::library::SurfaceLayout).
#[derive(Clone, Debug)]
pub struct MwpmDecoder {
    n: usize,
    m: usize,
    /// X errors (seen by Z-checks), then Z errors (seen by X-checks).
    sectors: [SectorGraph; 2],
    solver: MatchingSolver,
}

impl MwpmDecoder {
    pub fn new(code: &StabilizerCode) -> Result<Self> {
        Ok(Self {
            n: code.n(),
            m: code.m(),
            sectors: [
                SectorGraph::new(code, CheckKind::Z, CheckKind::X)?,
                SectorGraph::new(code, CheckKind::X, CheckKind::Z)?,
            ],
            solver: MatchingSolver::default(),
        })
    }

    pub fn with_solver(mut self, solver: MatchingSolver) -> Self {
        self.solver = solver;
        self
    }

    pub fn solver(&self) -> MatchingSolver {
        self.solver
    }

    /// The X-error and Z-error matching instances for `s`.
    pub fn problems(&self, s: &Syndrome) -> Result<[MatchingProblem; 2]> {
        self.check_len(s)?;
        Ok([self.sectors[0].problem(s), self.sectors[1].problem(s)])
    }

    fn check_len(&self, s: &Syndrome) -> Result<()> {
        if s.len() != self.m {
            return Err(QecError::SyndromeLength {
                expected: self.m,
                actual: s.len(),
            });
        }
        Ok(())
    }

    pub fn decode(&self, s: &Syndrome) -> Result<PauliOperator> {
        self.check_len(s)?;
        let mut x = BitVec::zeros(self.n);
        let mut z = BitVec::zeros(self.n);
        for sector in &self.sectors {
            let problem = sector.problem(s);
            let solution = problem.solve(self.solver)?;
            let mask = if sector.kind == CheckKind::X { &mut x } else { &mut z };
            for (i, p) in solution.partner.iter().enumerate() {
                let from = problem.nodes[i];
                match p {
                    None => sector.flip_path(from, sector.boundary(), mask),
                    Some(j) if i < *j => sector.flip_path(from, problem.nodes[*j], mask),
                    Some(_) => {}
                }
            }
        }
        PauliOperator::from_bits(x, z, 0)
    }
}

/// One-shot MWPM decode with the default solver.
pub fn mwpm_decode(code: &StabilizerCode, s: &Syndrome) -> Result<PauliOperator> {
    MwpmDecoder::new(code)?.decode(s)
}
