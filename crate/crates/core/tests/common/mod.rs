//! Oracles shared by the integration tests. Each one evaluates a definition
//! directly and never calls into the code path it checks.
#![allow(dead_code)]

use pcm_core::PcMatrix;

/// Triads `(i, j, k)` with `i < j < k` in Koczkodaj's original form:
/// `min(a_ik / (a_ij a_jk), a_ij a_jk / a_ik)`.
pub fn ki_oracle(m: &PcMatrix) -> f64 {
    let n = m.n();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let direct = m.get(i, k);
                let indirect = m.get(i, j) * m.get(j, k);
                let r = (direct / indirect).min(indirect / direct);
                worst = worst.max(1.0 - r);
            }
        }
    }
    worst
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Counts concordant and discordant object pairs by comparing positions in
/// the two best-to-worst orders.
pub fn kendall_oracle(x: &[usize], y: &[usize]) -> f64 {
    let n = x.len();
    let pos = |order: &[usize], obj: usize| order.iter().position(|&o| o == obj).unwrap();
    let (mut nc, mut nd) = (0i64, 0i64);
    for a in 0..n {
        for b in (a + 1)..n {
            let same = (pos(x, a) < pos(x, b)) == (pos(y, a) < pos(y, b));
            if same {
                nc += 1
            } else {
                nd += 1
            }
        }
    }
    (nc - nd) as f64 / (n * (n - 1) / 2) as f64
}

pub fn spearman_oracle(x: &[usize], y: &[usize]) -> f64 {
    let n = x.len();
    let pos = |order: &[usize], obj: usize| order.iter().position(|&o| o == obj).unwrap() as i64;
    let d2: i64 = (0..n).map(|o| (pos(x, o) - pos(y, o)).pow(2)).sum();
    let nn = n as i64;
    (nn * (nn * nn - 1) - 6 * d2) as f64 / (nn * (nn * nn - 1)) as f64
}
