//! Reverse Cuthill–McKee ordering for profile reduction.

/// Symmetric permutation `new → old` together with its inverse.
#[derive(Debug, Clone)]
pub struct Permutation {
    pub new_to_old: Vec<usize>,
    pub old_to_new: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            new_to_old: (0..n).collect(),
            old_to_new: (0..n).collect(),
        }
    }

    fn from_new_to_old(new_to_old: Vec<usize>) -> Self {
        let mut old_to_new = vec![0; new_to_old.len()];
        for (new, &old) in new_to_old.iter().enumerate() {
            old_to_new[old] = new;
        }
        Self {
            new_to_old,
            old_to_new,
        }
    }
}

/// Breadth-first Cuthill–McKee sweep from `start`, visiting neighbours by
/// increasing degree. Returns the visit order and the index where the last
/// level begins.
fn cm_sweep(
    adj: &[Vec<usize>],
    start: usize,
    stamp: &mut [usize],
    gen: usize,
) -> (Vec<usize>, usize, usize) {
    let mut order = vec![start];
    stamp[start] = gen;
    let mut level_start = 0;
    let mut depth = 0;
    let mut nbrs: Vec<usize> = Vec::new();
    loop {
        let level_end = order.len();
        for k in level_start..level_end {
            let v = order[k];
            nbrs.clear();
            nbrs.extend(adj[v].iter().copied().filter(|&w| stamp[w] != gen));
            nbrs.sort_by_key(|&w| (adj[w].len(), w));
            for &w in &nbrs {
                stamp[w] = gen;
                order.push(w);
            }
        }
        if order.len() == level_end {
            return (order, level_start, depth);
        }
        level_start = level_end;
        depth += 1;
    }
}

/// Reverse Cuthill–McKee ordering of the graph given by a CSR pattern.
///
/// Each connected component starts from a pseudo-peripheral vertex
/// (George–Liu iteration).
pub fn reverse_cuthill_mckee(row_ptr: &[usize], col_idx: &[usize]) -> Permutation {
    let n = row_ptr.len() - 1;
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            col_idx[row_ptr[i]..row_ptr[i + 1]]
                .iter()
                .copied()
                .filter(|&j| j != i)
                .collect()
        })
        .collect();

    let mut stamp = vec![0usize; n];
    let mut gen = 0;
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);

    for root in 0..n {
        if placed[root] {
            continue;
        }
        gen += 1;
        let (comp, _, _) = cm_sweep(&adj, root, &mut stamp, gen);
        let start = *comp.iter().min_by_key(|&&v| (adj[v].len(), v)).unwrap();
        gen += 1;
        let (mut sweep, mut last, mut depth) = cm_sweep(&adj, start, &mut stamp, gen);
        for _ in 0..16 {
            let cand = *sweep[last..]
                .iter()
                .min_by_key(|&&v| (adj[v].len(), v))
                .unwrap();
            gen += 1;
            let (s2, l2, d2) = cm_sweep(&adj, cand, &mut stamp, gen);
            if d2 > depth {
                sweep = s2;
                last = l2;
                depth = d2;
            } else {
                break;
            }
        }
        for &v in &sweep {
            placed[v] = true;
        }
        order.extend(sweep);
    }
    order.reverse();
    Permutation::from_new_to_old(order)
}

/// Sum over rows of the distance from the first nonzero to the diagonal.
pub fn profile_size(row_ptr: &[usize], col_idx: &[usize], perm: &Permutation) -> usize {
    let n = row_ptr.len() - 1;
    let mut first: Vec<usize> = (0..n).collect();
    for old_i in 0..n {
        let i = perm.old_to_new[old_i];
        for &old_j in &col_idx[row_ptr[old_i]..row_ptr[old_i + 1]] {
            let j = perm.old_to_new[old_j];
            if j < i {
                first[i] = first[i].min(j);
            }
        }
    }
    (0..n).map(|i| i - first[i]).sum()
}
