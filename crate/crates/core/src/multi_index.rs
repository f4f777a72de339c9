use std::cmp::Ordering;
use std::fmt;

/// Exponent tuple `m = (m_1, …, m_n)`. Entries are signed so the same type
/// serves polynomial (ℕⁿ) and Laurent (ℤⁿ) objects.
///
/// Ordering is graded first (by `|m|`), then reverse-lexicographic: within a
/// degree the tuple with the smaller last differing entry comes first, so
/// `z1² < z1·z2 < z2²`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<i32>);

impl MultiIndex {
    pub fn new(entries: Vec<i32>) -> Self {
        Self(entries)
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// Unit vector `e_k` (0-based `k`).
    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = vec![0; n];
        v[k] = 1;
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[i32] {
        &self.0
    }

    pub fn get(&self, k: usize) -> i32 {
        self.0[k]
    }

    /// `|m|`, the entry sum.
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&x| x as i64).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn is_all_negative(&self) -> bool {
        self.0.iter().all(|&x| x < 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `m + delta·e_k`.
    pub fn shifted(&self, k: usize, delta: i32) -> MultiIndex {
        let mut v = self.0.clone();
        v[k] += delta;
        MultiIndex(v)
    }

    pub fn is_unit(&self) -> Option<usize> {
        let mut hit = None;
        for (k, &x) in self.0.iter().enumerate() {
            match x {
                0 => {}
                1 if hit.is_none() => hit = Some(k),
                _ => return None,
            }
        }
        hit
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| {
                for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
                    match a.cmp(b) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            })
            .then_with(|| self.0.len().cmp(&other.0.len()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl From<Vec<i32>> for MultiIndex {
    fn from(v: Vec<i32>) -> Self {
        Self(v)
    }
}

impl From<&[i32]> for MultiIndex {
    fn from(v: &[i32]) -> Self {
        Self(v.to_vec())
    }
}

/// All `m ∈ ℕⁿ` with `|m| = d`, in canonical order.
pub fn indices_of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current = vec![0i32; n];
    fill(&mut current, 0, d as i32, &mut out);
    out.sort();
    out
}

fn fill(current: &mut Vec<i32>, pos: usize, remaining: i32, out: &mut Vec<MultiIndex>) {
    let n = current.len();
    if pos + 1 == n {
        current[pos] = remaining;
        out.push(MultiIndex(current.clone()));
        current[pos] = 0;
        return;
    }
    for v in 0..=remaining {
        current[pos] = v;
        fill(current, pos + 1, remaining - v, out);
    }
    current[pos] = 0;
}

/// All `m ∈ ℕⁿ` with `lo ≤ |m| ≤ hi`, in canonical order.
pub fn indices_up_to(n: usize, lo: u32, hi: u32) -> Vec<MultiIndex> {
    (lo..=hi).flat_map(|d| indices_of_degree(n, d)).collect()
}

/// Writes `z1^2·z2` style monomials (1-based variable names).
pub fn format_monomial(m: &MultiIndex) -> String {
    let parts: Vec<String> = m
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(k, &e)| {
            if e == 1 {
                format!("z{}", k + 1)
            } else {
                format!("z{}^{}", k + 1, e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("·")
    }
}
