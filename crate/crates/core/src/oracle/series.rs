//! Dense truncated power series in a few variables with double coefficients.

/// Multi-indices of total degree at most `order`, listed by increasing degree.
#[derive(Clone, Debug)]
pub struct IndexTable {
    pub dim: usize,
    pub order: u32,
    pub list: Vec<Vec<u32>>,
    lookup: Vec<usize>,
}

impl IndexTable {
    pub fn new(dim: usize, order: u32) -> Self {
        let side = order as usize + 1;
        let mut list = Vec::new();
        for deg in 0..=order {
            let mut cur = vec![0u32; dim];
            collect(&mut list, &mut cur, 0, deg);
        }
        let mut lookup = vec![usize::MAX; side.pow(dim as u32)];
        for (i, m) in list.iter().enumerate() {
            lookup[flat(m, side)] = i;
        }
        IndexTable { dim, order, list, lookup }
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn index(&self, m: &[u32]) -> Option<usize> {
        if m.iter().sum::<u32>() > self.order {
            return None;
        }
        let i = self.lookup[flat(m, self.order as usize + 1)];
        (i != usize::MAX).then_some(i)
    }
}

fn flat(m: &[u32], side: usize) -> usize {
    m.iter().fold(0, |acc, &e| acc * side + e as usize)
}

fn collect(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, pos: usize, left: u32) {
    if cur.is_empty() {
        if left == 0 {
            out.push(vec![]);
        }
        return;
    }
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(cur.clone());
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e;
        collect(out, cur, pos + 1, left - e);
    }
    cur[pos] = 0;
}

/// Coefficients of `(u / u(0))^p` for a polynomial `u` given as sparse terms,
/// via the recurrence `u·E(g) = p·g·E(u)` with `E` the degree operator.
pub fn normalized_power(table: &IndexTable, u: &[(Vec<u32>, f64)], p: f64) -> Vec<f64> {
    let c0: f64 = u.iter().filter(|(e, _)| e.iter().all(|&x| x == 0)).map(|(_, c)| c).sum();
    let terms: Vec<(&Vec<u32>, u32, f64)> = u
        .iter()
        .filter_map(|(e, c)| {
            let d: u32 = e.iter().sum();
            (d > 0 && d <= table.order).then_some((e, d, c / c0))
        })
        .collect();
    let mut g = vec![0.0; table.len()];
    g[0] = 1.0;
    let mut rest = vec![0u32; table.dim];
    for (gi, gamma) in table.list.iter().enumerate().skip(1) {
        let k: u32 = gamma.iter().sum();
        let mut acc = 0.0;
        for &(beta, d, c) in &terms {
            if d > k || beta.iter().zip(gamma).any(|(b, g)| b > g) {
                continue;
            }
            for ((r, g), b) in rest.iter_mut().zip(gamma).zip(beta) {
                *r = g - b;
            }
            let idx = table.index(&rest).expect("sub-index within table");
            acc += (p * d as f64 - (k - d) as f64) * c * g[idx];
        }
        g[gi] = acc / k as f64;
    }
    g
}

/// Product of a truncated series with a sparse polynomial.
pub fn multiply_sparse(table: &IndexTable, g: &[f64], poly: &[(Vec<u32>, f64)]) -> Vec<f64> {
    let mut h = vec![0.0; table.len()];
    let mut sum = vec![0u32; table.dim];
    for (gi, gamma) in table.list.iter().enumerate() {
        if g[gi] == 0.0 {
            continue;
        }
        for (beta, c) in poly {
            for ((s, a), b) in sum.iter_mut().zip(gamma).zip(beta) {
                *s = a + b;
            }
            if let Some(idx) = table.index(&sum) {
                h[idx] += c * g[gi];
            }
        }
    }
    h
}
