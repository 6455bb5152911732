//! Backtracking search for structure-preserving bijections between finite
//! sets carrying partial "moves" (typically groupoid actions).
//!
//! A bijection `σ: A → B` is accepted when it preserves colors and commutes
//! with every move: `σ(p·l) = σ(p)·l`, with both sides defined or neither.
//! Once `σ(p)` is fixed, every point reachable from `p` by moves is forced,
//! so the search branches once per move-orbit.

#[derive(Clone, Debug, Default)]
pub struct MovedSet {
    pub colors: Vec<u64>,
    /// `moves[l][p]` is `p` moved by label `l`, if defined.
    pub moves: Vec<Vec<Option<usize>>>,
}

impl MovedSet {
    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }
}

/// The first equivariant bijection in search order, if any.
pub fn find_bijection(a: &MovedSet, b: &MovedSet) -> Option<Vec<usize>> {
    if a.len() != b.len() || a.moves.len() != b.moves.len() {
        return None;
    }
    let mut ca = a.colors.clone();
    let mut cb = b.colors.clone();
    ca.sort_unstable();
    cb.sort_unstable();
    if ca != cb {
        return None;
    }
    let mut sigma = vec![usize::MAX; a.len()];
    let mut used = vec![false; b.len()];
    search(a, b, &mut sigma, &mut used).then_some(sigma)
}

fn search(a: &MovedSet, b: &MovedSet, sigma: &mut [usize], used: &mut [bool]) -> bool {
    let Some(p) = sigma.iter().position(|&x| x == usize::MAX) else {
        return true;
    };
    for q in 0..b.len() {
        if used[q] || b.colors[q] != a.colors[p] {
            continue;
        }
        let mut trail = Vec::new();
        if propagate(a, b, p, q, sigma, used, &mut trail) && search(a, b, sigma, used) {
            return true;
        }
        for x in trail {
            used[sigma[x]] = false;
            sigma[x] = usize::MAX;
        }
    }
    false
}

fn propagate(
    a: &MovedSet,
    b: &MovedSet,
    p: usize,
    q: usize,
    sigma: &mut [usize],
    used: &mut [bool],
    trail: &mut Vec<usize>,
) -> bool {
    sigma[p] = q;
    used[q] = true;
    trail.push(p);
    let mut head = trail.len() - 1;
    while head < trail.len() {
        let x = trail[head];
        head += 1;
        let y = sigma[x];
        for (ma, mb) in a.moves.iter().zip(&b.moves) {
            match (ma[x], mb[y]) {
                (None, None) => {}
                (Some(x2), Some(y2)) => {
                    if sigma[x2] == usize::MAX {
                        if used[y2] || a.colors[x2] != b.colors[y2] {
                            return false;
                        }
                        sigma[x2] = y2;
                        used[y2] = true;
                        trail.push(x2);
                    } else if sigma[x2] != y2 {
                        return false;
                    }
                }
                _ => return false,
            }
        }
    }
    true
}

/// Checks a candidate bijection directly.
pub fn is_equivariant_bijection(a: &MovedSet, b: &MovedSet, sigma: &[usize]) -> bool {
    if sigma.len() != a.len() || a.len() != b.len() || a.moves.len() != b.moves.len() {
        return false;
    }
    let mut hit = vec![false; b.len()];
    for &y in sigma {
        if y >= b.len() || hit[y] {
            return false;
        }
        hit[y] = true;
    }
    (0..a.len()).all(|p| {
        a.colors[p] == b.colors[sigma[p]]
            && a.moves.iter().zip(&b.moves).all(|(ma, mb)| match (ma[p], mb[sigma[p]]) {
                (None, None) => true,
                (Some(x), Some(y)) => sigma[x] == y,
                _ => false,
            })
    })
}
