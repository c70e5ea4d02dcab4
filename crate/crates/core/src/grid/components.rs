//! Connected-component labeling on the cell grid via union-find.

use std::mem;

pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(len: usize) -> UnionFind {
        UnionFind {
            parent: (0..len as u32).collect(),
            size: vec![1; len],
        }
    }

    pub fn find(&mut self, x: u32) -> u32 {
        let mut x = x;
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    pub fn union(&mut self, a: u32, b: u32) {
        let mut ra = self.find(a);
        let mut rb = self.find(b);
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
    }
}

/// Groups the selected cells into components under the given neighbor
/// offsets; returns cell-index sets sorted by their smallest member.
pub fn label_components(
    nx: u32,
    ny: u32,
    selected: &[bool],
    diagonal: bool,
) -> Vec<Vec<u32>> {
    debug_assert_eq!(selected.len(), (nx * ny) as usize);
    let mut uf = UnionFind::new(selected.len());
    let idx = |i: u32, j: u32| j * nx + i;
    for j in 0..ny {
        for i in 0..nx {
            if !selected[idx(i, j) as usize] {
                continue;
            }
            let here = idx(i, j);
            if i + 1 < nx && selected[idx(i + 1, j) as usize] {
                uf.union(here, idx(i + 1, j));
            }
            if j + 1 < ny && selected[idx(i, j + 1) as usize] {
                uf.union(here, idx(i, j + 1));
            }
            if diagonal && j + 1 < ny {
                if i + 1 < nx && selected[idx(i + 1, j + 1) as usize] {
                    uf.union(here, idx(i + 1, j + 1));
                }
                if i > 0 && selected[idx(i - 1, j + 1) as usize] {
                    uf.union(here, idx(i - 1, j + 1));
                }
            }
        }
    }
    let mut by_root: std::collections::HashMap<u32, Vec<u32>> = std::collections::HashMap::new();
    for cell in 0..selected.len() as u32 {
        if selected[cell as usize] {
            by_root.entry(uf.find(cell)).or_default().push(cell);
        }
    }
    let mut components: Vec<Vec<u32>> = by_root.into_values().collect();
    for c in &mut components {
        c.sort_unstable();
    }
    components.sort_by_key(|c| c[0]);
    components
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_diagonal_cells() {
        // 2x2 grid, cells (0,0) and (1,1) selected.
        let selected = vec![true, false, false, true];
        assert_eq!(label_components(2, 2, &selected, false).len(), 2);
        assert_eq!(label_components(2, 2, &selected, true).len(), 1);
    }

    #[test]
    fn empty_selection_has_no_components() {
        assert!(label_components(3, 3, &[false; 9], true).is_empty());
    }

    #[test]
    fn components_are_sorted_and_partition_the_selection() {
        let selected = vec![
            true, true, false, false, //
            false, false, false, true, //
            true, false, true, true,
        ];
        let comps = label_components(4, 3, &selected, false);
        let total: usize = comps.iter().map(Vec::len).sum();
        assert_eq!(total, selected.iter().filter(|&&s| s).count());
        for w in comps.windows(2) {
            assert!(w[0][0] < w[1][0]);
        }
    }
}
