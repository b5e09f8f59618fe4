//! The graph whose vertices are the zero-sums of a multiset that have a
//! disjoint zero-sum partner, with an edge between disjoint vertices.
//!
//! Every copy of an element is a separate point, so a vertex is a subset of
//! copy positions stored as a bitmask.

use serde::Serialize;

use crate::abelian::{GElem, GMultiSet};
use crate::error::{Error, Result};

/// Largest multiset for which all sub-multisets are scanned.
pub const MAX_HOST: usize = 16;

#[derive(Clone, Debug, Serialize)]
pub struct ZeroSumGraph {
    #[serde(skip)]
    pub host: GMultiSet,
    /// Element index of each copy, in `expanded_indices` order.
    pub copies: Vec<usize>,
    /// Copy subsets, ascending.
    pub vertices: Vec<u32>,
    /// Sorted neighbour lists.
    pub adjacency: Vec<Vec<u32>>,
}

impl ZeroSumGraph {
    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&(b as u32)).is_ok()
    }

    /// Graph on explicitly given copy subsets; edges join disjoint ones.
    pub fn from_parts(host: &GMultiSet, mut vertices: Vec<u32>) -> Result<Self> {
        let copies = host.expanded_indices();
        if copies.len() > MAX_HOST {
            return Err(Error::Argument(format!(
                "host has {} elements, at most {MAX_HOST} supported",
                copies.len()
            )));
        }
        if vertices.iter().any(|&v| v == 0 || v >> copies.len() != 0) {
            return Err(Error::Argument("vertex is empty or outside the host".into()));
        }
        vertices.sort_unstable();
        vertices.dedup();
        let adjacency = vertices
            .iter()
            .map(|&a| {
                (0..vertices.len() as u32).filter(|&j| a & vertices[j as usize] == 0).collect()
            })
            .collect();
        Ok(Self { host: host.clone(), copies, vertices, adjacency })
    }

    /// The sub-multiset of vertex `v`.
    pub fn part(&self, v: usize) -> GMultiSet {
        let g = self.host.group();
        let mut ms = GMultiSet::new(g);
        for (i, &e) in self.copies.iter().enumerate() {
            if self.vertices[v] >> i & 1 == 1 {
                ms.insert(&g.elem_at(e), 1).expect("same group");
            }
        }
        ms
    }

    pub fn elements(&self, v: usize) -> Vec<GElem> {
        self.part(v).expanded_indices().into_iter().map(|i| self.host.group().elem_at(i)).collect()
    }
}

/// Every nonempty copy subset summing to zero, ascending.
pub fn zero_sum_subsets(host: &GMultiSet) -> Result<Vec<u32>> {
    let copies = host.expanded_indices();
    if copies.len() > MAX_HOST {
        return Err(Error::Argument(format!(
            "host has {} elements, at most {MAX_HOST} supported",
            copies.len()
        )));
    }
    let t = host.group().tables()?;
    // subset sums by lowest set bit
    let mut sums = vec![0usize; 1 << copies.len()];
    let mut out = Vec::new();
    for mask in 1u32..1 << copies.len() {
        let low = mask.trailing_zeros() as usize;
        let s = t.add(sums[(mask & (mask - 1)) as usize], copies[low]);
        sums[mask as usize] = s;
        if s == 0 {
            out.push(mask);
        }
    }
    Ok(out)
}

pub fn build_zero_sum_graph(host: &GMultiSet) -> Result<ZeroSumGraph> {
    let zs = zero_sum_subsets(host)?;
    let vertices: Vec<u32> =
        zs.iter().copied().filter(|&a| zs.iter().any(|&b| a & b == 0)).collect();
    ZeroSumGraph::from_parts(host, vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::GroupSpec;
    use crate::proof335::cube;

    #[test]
    fn zero_sum_free_host_gives_empty_graph() {
        let g = cube();
        let ms = GMultiSet::parse(&g, "(1,0,0)^2 (0,1,0)^2").unwrap();
        let gr = build_zero_sum_graph(&ms).unwrap();
        assert!(gr.vertices.is_empty());
        assert_eq!(gr.edge_count(), 0);
    }

    #[test]
    fn toy_graph() {
        // a^2 (-2a)^2 b (-b) in Z_9: zero-sums {a,a,-2a}, {a,a,-2a,..} and {b,-b}
        let g = GroupSpec::cyclic(9).unwrap();
        let ms = GMultiSet::parse(&g, "1^2 7^2 3 6").unwrap();
        let gr = build_zero_sum_graph(&ms).unwrap();
        // copies: 1 1 3 6 7 7
        let b_pair = 0b001100;
        assert!(gr.vertices.contains(&b_pair));
        let v = gr.vertices.iter().position(|&m| m == b_pair).unwrap();
        for &u in &gr.adjacency[v] {
            assert_eq!(gr.vertices[u as usize] & b_pair, 0);
            assert!(crate::abelian::sum_of(&gr.part(u as usize)).is_zero());
        }
        assert!(!gr.adjacency[v].is_empty());
        // every vertex has a partner and every edge joins disjoint parts
        for a in 0..gr.vertices.len() {
            assert!(!gr.adjacency[a].is_empty());
            for b in 0..gr.vertices.len() {
                assert_eq!(gr.has_edge(a, b), gr.vertices[a] & gr.vertices[b] == 0);
            }
        }
    }

    #[test]
    fn without_partner_no_vertex() {
        let g = GroupSpec::cyclic(9).unwrap();
        let ms = GMultiSet::parse(&g, "3 6 1").unwrap();
        assert!(build_zero_sum_graph(&ms).unwrap().vertices.is_empty());
    }
}
