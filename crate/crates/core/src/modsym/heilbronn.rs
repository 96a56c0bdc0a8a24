//! Merel's matrices of determinant n, which realise T_n on Manin symbols.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// `[a, b, c, d]` for the matrix `[[a, b], [c, d]]`.
pub type Mat2 = [i64; 4];

/// All `[[a, b], [c, d]]` with `ad - bc = n`, `a > b >= 0`, `d > c >= 0`.
pub fn merel_set(n: u64) -> Vec<Mat2> {
    assert!(n >= 1);
    let n = n as i64;
    let mut out = Vec::new();
    for a in 1..=n {
        if n % a != 0 {
            continue;
        }
        let d = n / a;
        for c in 0..d {
            out.push([a, 0, c, d]);
        }
        for b in 1..a {
            out.push([a, b, 0, d]);
        }
    }
    // b, c >= 1: write a = b + a1, d = c + d1, so b d1 + a1 c + a1 d1 = n
    for a1 in 1..n {
        for d1 in 1..=(n - 1) / a1 {
            let rem = n - a1 * d1;
            let mut b = 1;
            while b * d1 < rem {
                let r = rem - b * d1;
                if r % a1 == 0 {
                    let c = r / a1;
                    out.push([b + a1, b, c, c + d1]);
                }
                b += 1;
            }
        }
    }
    out
}

fn cache() -> &'static Mutex<HashMap<u64, Arc<Vec<Mat2>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<Mat2>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Shared, memoised [`merel_set`].
pub fn merel_set_cached(n: u64) -> Arc<Vec<Mat2>> {
    if let Some(v) = cache().lock().unwrap().get(&n) {
        return Arc::clone(v);
    }
    let v = Arc::new(merel_set(n));
    cache().lock().unwrap().entry(n).or_insert(v).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn brute(n: i64) -> HashSet<Mat2> {
        let mut s = HashSet::new();
        for a in 1..=n + 1 {
            for b in 0..a {
                for d in 1..=n + 1 {
                    for c in 0..d {
                        if a * d - b * c == n {
                            s.insert([a, b, c, d]);
                        }
                    }
                }
            }
        }
        s
    }

    #[test]
    fn matches_brute_force() {
        for n in 1..=30 {
            let fast = merel_set(n as u64);
            let set: HashSet<Mat2> = fast.iter().copied().collect();
            assert_eq!(set.len(), fast.len(), "duplicates at n = {n}");
            assert_eq!(set, brute(n), "n = {n}");
        }
    }

    #[test]
    fn cached_copy_is_identical() {
        assert_eq!(*merel_set_cached(12), merel_set(12));
        assert!(Arc::ptr_eq(&merel_set_cached(12), &merel_set_cached(12)));
    }
}
