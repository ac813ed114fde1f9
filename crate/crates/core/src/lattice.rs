//! Enumeration of integer lattice vectors in sup-norm balls.

/// Calls `visit` on every `I ∈ ℤⁿ` with `0 < ‖I‖_∞ ≤ radius` whose first nonzero entry is
/// positive, so each pair `±I` is visited exactly once.
pub fn for_each_half_ball(n: usize, radius: u32, mut visit: impl FnMut(&[i32])) {
    if n == 0 || radius == 0 {
        return;
    }
    let r = radius as i32;
    let mut v = vec![-r; n];
    loop {
        if is_normalized(&v) {
            visit(&v);
        }
        let mut j = n;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            if v[j] < r {
                v[j] += 1;
                break;
            }
            v[j] = -r;
        }
    }
}

/// True when the first nonzero entry is positive (and the vector is nonzero).
pub fn is_normalized(v: &[i32]) -> bool {
    v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// `v` or `−v`, whichever has positive first nonzero entry.
pub fn normalize(v: &[i32]) -> Vec<i32> {
    if is_normalized(v) {
        v.to_vec()
    } else {
        v.iter().map(|x| -x).collect()
    }
}
