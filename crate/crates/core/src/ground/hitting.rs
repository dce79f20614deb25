use std::collections::BTreeSet;

/// All subset-minimal sets containing at least one element of every sequence in `family`.
/// The empty family has exactly one hitting set, the empty set; a family containing an
/// empty sequence has none.
///
/// Computed incrementally: each sequence extends every partial hitting set that misses it
/// by one of its elements, after which non-minimal sets are discarded.
pub fn hitting_sets<T: Ord + Clone>(family: &[Vec<T>]) -> Vec<BTreeSet<T>> {
    let mut sets: Vec<BTreeSet<T>> = family.iter().map(|s| s.iter().cloned().collect()).collect();
    // A superset of another member is hit whenever the smaller one is.
    sets.sort_by_key(BTreeSet::len);
    let mut kept: Vec<BTreeSet<T>> = Vec::new();
    for s in sets {
        if !kept.iter().any(|k| k.is_subset(&s)) {
            kept.push(s);
        }
    }

    let mut result: Vec<BTreeSet<T>> = vec![BTreeSet::new()];
    for s in &kept {
        let mut next: Vec<BTreeSet<T>> = Vec::new();
        let mut extended: Vec<BTreeSet<T>> = Vec::new();
        for h in result {
            if h.iter().any(|x| s.contains(x)) {
                next.push(h);
            } else {
                for x in s {
                    let mut g = h.clone();
                    g.insert(x.clone());
                    extended.push(g);
                }
            }
        }
        // Sets that already hit `s` stay minimal; extensions may be absorbed.
        extended.sort();
        extended.dedup();
        extended.sort_by_key(BTreeSet::len);
        for g in extended {
            if !next.iter().any(|h| h.is_subset(&g)) {
                next.push(g);
            }
        }
        result = next;
        if result.is_empty() {
            break;
        }
    }
    result.sort();
    result
}
