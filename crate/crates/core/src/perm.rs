//! Permutations of `0..n` in lexicographic order.

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    (0..factorial(n)).map(|r| unrank(n, r)).collect()
}

/// Lexicographic rank of a permutation.
pub fn rank(p: &[usize]) -> usize {
    let n = p.len();
    let mut r = 0;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count();
        r += smaller * factorial(n - 1 - i);
    }
    r
}

pub fn unrank(n: usize, mut r: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let f = factorial(i);
        out.push(pool.remove(r / f));
        r %= f;
    }
    out
}

/// `first`, then `second`: `i ↦ second[first[i]]`.
pub fn compose(first: &[usize], second: &[usize]) -> Vec<usize> {
    first.iter().map(|&i| second[i]).collect()
}

pub fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}
