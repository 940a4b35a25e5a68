//! Small graph utilities: strongly connected components (iterative Tarjan)
//! and topological sorting, shared by the DFA and monoid layers.

use alloc::vec::Vec;

/// Component id per vertex; ids are dense and number components in reverse
/// topological order of discovery.
pub fn scc(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut index = alloc::vec![usize::MAX; n];
    let mut low = alloc::vec![0usize; n];
    let mut on_stack = alloc::vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comp = alloc::vec![usize::MAX; n];
    let mut next_index = 0usize;
    let mut comp_count = 0usize;

    // explicit call stack of (vertex, next edge position)
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut ei)) = call.last_mut() {
            if *ei < adj[v].len() {
                let w = adj[v][*ei];
                *ei += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
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
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp[w] = comp_count;
                        if w == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
            }
        }
    }
    comp
}

/// True when every strongly connected component is a single vertex
/// (self-loops permitted; they are ignored by the component structure).
pub fn sccs_all_trivial(adj: &[Vec<usize>]) -> bool {
    let comp = scc(adj);
    let n = adj.len();
    let mut size = alloc::vec![0usize; n];
    for &c in &comp {
        size[c] += 1;
    }
    size.iter().all(|&s| s <= 1)
}

/// Kahn's algorithm on the graph with self-loops removed; `Some(order)` when
/// acyclic, with `order[v]` the position of `v` in a topological order.
pub fn topological_order(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut indegree = alloc::vec![0usize; n];
    for (v, out) in adj.iter().enumerate() {
        for &w in out {
            if w != v {
                indegree[w] += 1;
            }
        }
    }
    let mut queue: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut order = alloc::vec![usize::MAX; n];
    let mut seen = 0usize;
    while let Some(v) = queue.pop() {
        order[v] = seen;
        seen += 1;
        for &w in &adj[v] {
            if w != v {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    queue.push(w);
                }
            }
        }
    }
    (seen == n).then_some(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cycle_is_one_component() {
        let adj = alloc::vec![alloc::vec![1], alloc::vec![0], alloc::vec![0]];
        let comp = scc(&adj);
        assert_eq!(comp[0], comp[1]);
        assert_ne!(comp[0], comp[2]);
        assert!(!sccs_all_trivial(&adj));
        assert!(topological_order(&adj).is_none());
    }

    #[test]
    fn self_loops_are_trivial_components() {
        let adj = alloc::vec![alloc::vec![0, 1], alloc::vec![1]];
        assert!(sccs_all_trivial(&adj));
        let order = topological_order(&adj).unwrap();
        assert!(order[0] < order[1]);
    }
}
