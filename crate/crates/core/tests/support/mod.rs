//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use casecontrol_core::{ContingencyTable, Schema};
use rand::Rng;

/// Every simple path from `a` to `b` in the undirected graph given by
/// `adj`, found by depth-first enumeration; separated when each one passes
/// through `c`.
pub fn separated_by_paths(adj: &[Vec<bool>], a: &[usize], b: &[usize], c: &[usize]) -> bool {
    fn walk(
        adj: &[Vec<bool>],
        v: usize,
        b: &[usize],
        c: &[usize],
        on_path: &mut Vec<bool>,
    ) -> bool {
        if b.contains(&v) {
            return true;
        }
        for w in 0..adj.len() {
            if adj[v][w] && !on_path[w] && !c.contains(&w) {
                on_path[w] = true;
                let open = walk(adj, w, b, c, on_path);
                on_path[w] = false;
                if open {
                    return true;
                }
            }
        }
        false
    }
    let mut on_path = vec![false; adj.len()];
    !a.iter().any(|&s| {
        on_path[s] = true;
        let open = walk(adj, s, b, c, &mut on_path);
        on_path[s] = false;
        open
    })
}

/// Maximal cliques by checking every vertex subset.
pub fn cliques_by_subsets(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let is_clique = |m: usize| {
        (0..n).all(|i| (0..n).all(|j| i == j || m >> i & 1 == 0 || m >> j & 1 == 0 || adj[i][j]))
    };
    let mut out: Vec<Vec<usize>> = (1usize..1 << n)
        .filter(|&m| is_clique(m))
        .filter(|&m| (0..n).all(|v| m >> v & 1 == 1 || !is_clique(m | 1 << v)))
        .map(|m| (0..n).filter(|v| m >> v & 1 == 1).collect())
        .collect();
    out.sort();
    out
}

pub fn names(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("X{i}")).collect()
}

/// Integer counts in `lo..=hi` over `k` variables.
pub fn random_table<R: Rng>(rng: &mut R, k: usize, lo: u32, hi: u32) -> ContingencyTable {
    let schema = Schema::new(names(k)).unwrap();
    let counts = (0..schema.cells())
        .map(|_| rng.gen_range(lo..=hi) as f64)
        .collect();
    ContingencyTable::new(schema, counts).unwrap()
}

/// Reads the cell-list CSV layout without the std crate.
pub fn parse_cells(text: &str) -> ContingencyTable {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').map(str::trim).collect();
    let k = header.len() - 1;
    let schema = Schema::new(header[..k].iter().copied()).unwrap();
    let mut counts = vec![0.0; schema.cells()];
    for line in lines {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        let levels: Vec<u8> = f[..k].iter().map(|x| x.parse().unwrap()).collect();
        counts[schema.index(&levels)] = f[k].parse().unwrap();
    }
    ContingencyTable::new(schema, counts).unwrap()
}

pub fn bundled() -> ContingencyTable {
    parse_cells(include_str!("../../../../data/zatonski_selected.csv"))
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}
