//! Maximum bipartite matching by augmenting paths (Kuhn's algorithm).

/// Computes a maximum matching of a bipartite graph.
///
/// `adjacency[l]` lists the right vertices adjacent to left vertex `l`; right
/// vertices are `0..right_count`. Returns, for each left vertex, its matched
/// right vertex. Left vertices are processed in order and adjacency lists are
/// tried in order, so the result is deterministic.
pub fn maximum_matching(adjacency: &[Vec<usize>], right_count: usize) -> Vec<Option<usize>> {
    let mut right_match: Vec<Option<usize>> = vec![None; right_count];
    let mut visited = vec![false; right_count];

    for left in 0..adjacency.len() {
        visited.iter_mut().for_each(|v| *v = false);
        augment(left, adjacency, &mut right_match, &mut visited);
    }

    let mut left_match = vec![None; adjacency.len()];
    for (right, left) in right_match.iter().enumerate() {
        if let Some(l) = *left {
            left_match[l] = Some(right);
        }
    }
    left_match
}

fn augment(left: usize, adjacency: &[Vec<usize>], right_match: &mut [Option<usize>], visited: &mut [bool]) -> bool {
    for &right in &adjacency[left] {
        if visited[right] {
            continue;
        }
        visited[right] = true;
        let free = match right_match[right] {
            None => true,
            Some(other) => augment(other, adjacency, right_match, visited),
        };
        if free {
            right_match[right] = Some(left);
            return true;
        }
    }
    false
}

pub fn matching_size(matching: &[Option<usize>]) -> usize {
    matching.iter().filter(|m| m.is_some()).count()
}
