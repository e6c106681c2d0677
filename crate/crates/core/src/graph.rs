//! Strongly connected components (iterative Tarjan) and SCC periods.

use num_integer::Integer;

/// SCC decomposition of a directed graph given by adjacency lists.
#[derive(Debug, Clone)]
pub struct Sccs {
    /// Components in reverse topological order (sinks first), as produced by Tarjan.
    pub components: Vec<Vec<usize>>,
    /// Component index of every vertex.
    pub comp_of: Vec<usize>,
}

pub fn tarjan(adj: &[Vec<usize>]) -> Sccs {
    let n = adj.len();
    const UNSET: usize = usize::MAX;
    let mut index = vec![UNSET; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp_of = vec![UNSET; n];
    let mut components = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        // (vertex, next child position)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if index[w] == UNSET {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp_of[w] = components.len();
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    components.push(comp);
                }
            }
        }
    }
    Sccs { components, comp_of }
}

impl Sccs {
    /// True when the component contains a cycle (more than one vertex or a self-loop).
    pub fn is_nontrivial(&self, adj: &[Vec<usize>], c: usize) -> bool {
        let comp = &self.components[c];
        comp.len() > 1 || adj[comp[0]].contains(&comp[0])
    }
}

/// Period of a component: gcd of `level(u) + 1 - level(v)` over internal
/// edges `u → v`, with BFS levels from an arbitrary member. Zero when the
/// component has no internal edge.
pub fn period(adj: &[Vec<usize>], comp_of: &[usize], members: &[usize]) -> u64 {
    let c = comp_of[members[0]];
    let mut level: Vec<Option<i64>> = vec![None; adj.len()];
    let mut queue = std::collections::VecDeque::new();
    level[members[0]] = Some(0);
    queue.push_back(members[0]);
    let mut g: i64 = 0;
    while let Some(u) = queue.pop_front() {
        let lu = level[u].expect("visited");
        for &v in &adj[u] {
            if comp_of[v] != c {
                continue;
            }
            match level[v] {
                None => {
                    level[v] = Some(lu + 1);
                    queue.push_back(v);
                }
                Some(lv) => g = g.gcd(&(lu + 1 - lv).abs()),
            }
        }
    }
    g as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_and_tail() {
        // 0 -> 1 -> 2 -> 0, 2 -> 3
        let adj = vec![vec![1], vec![2], vec![0, 3], vec![]];
        let s = tarjan(&adj);
        assert_eq!(s.components.len(), 2);
        assert_eq!(s.comp_of[0], s.comp_of[2]);
        assert_ne!(s.comp_of[0], s.comp_of[3]);
        // sinks come first
        assert_eq!(s.components[0], vec![3]);
        let c = s.comp_of[0];
        assert_eq!(period(&adj, &s.comp_of, &s.components[c]), 3);
        assert_eq!(period(&adj, &s.comp_of, &[3]), 0);
    }

    #[test]
    fn mixed_cycle_lengths() {
        // cycles of length 2 and 3 through vertex 0 -> period 1
        let adj = vec![vec![1, 2], vec![0], vec![3], vec![0]];
        let s = tarjan(&adj);
        assert_eq!(s.components.len(), 1);
        assert_eq!(period(&adj, &s.comp_of, &s.components[0]), 1);
        // cycles of length 2 and 4 -> period 2
        let adj = vec![vec![1, 2], vec![0], vec![3], vec![4], vec![0]];
        let s = tarjan(&adj);
        assert_eq!(period(&adj, &s.comp_of, &s.components[0]), 2);
    }
}
