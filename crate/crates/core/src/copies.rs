//! Counting copies of one complete multipartite graph inside another.

use crate::graph::{bits, build_complete_multipartite, Graph, PartiteSpec};

/// Number of distinct edge subsets of `K(host)` that form a copy of `K(pattern)`.
///
/// A copy is fixed by a vertex subset plus an unordered partition of it into
/// blocks with the pattern's sizes, such that every cross-block pair is a
/// host edge. When the pattern has at least two parts its edge set determines
/// both the vertex subset and the partition, so counting those is counting
/// edge sets. An edgeless pattern (a single part) has exactly one copy, the
/// empty edge set, provided it fits.
pub fn count_subgraph_copies(host: &PartiteSpec, pattern: &PartiteSpec) -> u64 {
    let k = pattern.vertex_count();
    let n = host.vertex_count();
    if k > n {
        return 0;
    }
    if pattern.parts().len() < 2 {
        return 1;
    }
    let g = build_complete_multipartite(host);
    let mut sizes = pattern.parts().to_vec();
    sizes.sort_unstable_by(|a, b| b.cmp(a));

    let mut total = 0;
    for subset in subsets_of_size(n, k) {
        let verts: Vec<usize> = bits(subset).collect();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        total += count_partitions(&g, &verts, 0, &mut blocks, &sizes);
    }
    total
}

fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut next = if k == 0 { Some(0) } else { Some((1u64 << k) - 1) };
    std::iter::from_fn(move || {
        let cur = next?;
        if cur > limit || (k > 0 && cur == 0) {
            return None;
        }
        // Gosper's hack
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur.wrapping_add(c);
            if r == 0 {
                None
            } else {
                Some((((r ^ cur) >> 2) / c) | r)
            }
        };
        Some(cur)
    })
}

/// Counts set partitions of `verts` (blocks ordered by first element) whose
/// multiset of block sizes equals `sizes` and whose cross-block pairs are all edges.
fn count_partitions(g: &Graph, verts: &[usize], idx: usize, blocks: &mut Vec<Vec<usize>>, sizes: &[usize]) -> u64 {
    if idx == verts.len() {
        let mut got: Vec<usize> = blocks.iter().map(Vec::len).collect();
        got.sort_unstable_by(|a, b| b.cmp(a));
        return u64::from(got == sizes);
    }
    let v = verts[idx];
    let max_block = sizes[0];
    let mut count = 0;
    for b in 0..blocks.len() {
        if blocks[b].len() == max_block {
            continue;
        }
        // v must be adjacent to everything outside its block
        let ok = blocks
            .iter()
            .enumerate()
            .all(|(i, blk)| i == b || blk.iter().all(|&w| g.has_edge(v, w)));
        if ok {
            blocks[b].push(v);
            count += count_partitions(g, verts, idx + 1, blocks, sizes);
            blocks[b].pop();
        }
    }
    if blocks.len() < sizes.len() && blocks.iter().all(|blk| blk.iter().all(|&w| g.has_edge(v, w))) {
        blocks.push(vec![v]);
        count += count_partitions(g, verts, idx + 1, blocks, sizes);
        blocks.pop();
    }
    count
}
