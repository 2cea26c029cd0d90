//! Brute-force reference computations for the integration tests. Nothing
//! here calls the normal-form kernels under test: rank comes from
//! fraction-free elimination, quotient sizes from coset search in a
//! bounding box, and mod-2 dimensions from bitmask elimination.
#![allow(dead_code)] // each test binary uses its own subset

/// Exact rank over the rationals of integer rows, by fraction-free
/// cross-multiplication. Entries stay far below i128 at oracle scale.
pub struct SpanTester {
    echelon: Vec<Vec<i128>>,
    pivots: Vec<usize>,
    cols: usize,
}

impl SpanTester {
    pub fn new(rows: &[Vec<i64>], cols: usize) -> Self {
        let mut tester = SpanTester {
            echelon: Vec::new(),
            pivots: Vec::new(),
            cols,
        };
        for row in rows {
            let reduced = tester.reduce(row);
            if let Some(p) = reduced.iter().position(|&x| x != 0) {
                let mut insert_at = tester.pivots.len();
                for (i, &piv) in tester.pivots.iter().enumerate() {
                    if p < piv {
                        insert_at = i;
                        break;
                    }
                }
                tester.echelon.insert(insert_at, reduced);
                tester.pivots.insert(insert_at, p);
            }
        }
        tester
    }

    pub fn rank(&self) -> usize {
        self.echelon.len()
    }

    fn reduce(&self, v: &[i64]) -> Vec<i128> {
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        w.resize(self.cols, 0);
        for (row, &p) in self.echelon.iter().zip(&self.pivots) {
            if w[p] == 0 {
                continue;
            }
            let (a, b) = (row[p], w[p]);
            for j in 0..self.cols {
                w[j] = w[j] * a - row[j] * b;
            }
            // keep magnitudes down; the gcd never changes the zero pattern
            let g = w.iter().fold(0i128, |acc, &x| gcd_i128(acc, x));
            if g > 1 {
                for x in w.iter_mut() {
                    *x /= g;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Union-find over indices.
struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Result of the box-search oracle.
pub struct BoxQuotient {
    pub free_rank: usize,
    /// Torsion size, present only when the box search certified
    /// completeness (class counts stable under box growth).
    pub torsion: Option<u64>,
}

/// Enumerates Z^n / (row span) by coset search inside a bounding box: the
/// points of the rational row span intersected with the box, glued along
/// lattice translations, are exactly the torsion classes when the box is
/// large enough. The translation steps are not just the given rows but a
/// harvested set of short lattice vectors (otherwise classes can fall
/// apart into several components when every generator is long).
/// Certification: the class count must agree between two box sizes.
/// Returns `torsion: None` when the search cannot certify within the
/// point budget.
pub fn box_quotient(rows: &[Vec<i64>], n: usize, point_budget: usize) -> BoxQuotient {
    let span = SpanTester::new(rows, n);
    let free_rank = n - span.rank();
    let linf_max = rows
        .iter()
        .flat_map(|r| r.iter().map(|&x| x.unsigned_abs()))
        .max()
        .unwrap_or(0) as i64;
    let linf_sum: i64 = rows
        .iter()
        .map(|r| r.iter().map(|&x| x.abs()).max().unwrap_or(0))
        .sum();
    let b1_floor = linf_sum + 1;
    if ((2 * (b1_floor + 2) + 1) as u128).pow(n as u32) > point_budget as u128 {
        return BoxQuotient {
            free_rank,
            torsion: None,
        };
    }
    let steps = harvest_short_vectors(rows, n, linf_max + 1, 3 * linf_max + 2, 20_000);
    let step_norm = steps
        .iter()
        .map(|v| v.iter().map(|&x| x.abs()).max().unwrap_or(0))
        .max()
        .unwrap_or(1);
    let b1 = linf_sum + 1;
    let b2 = b1 + step_norm + 1;
    let volume = |b: i64| ((2 * b + 1) as u128).checked_pow(n as u32);
    if volume(b2).map_or(true, |v| v > point_budget as u128) {
        return BoxQuotient {
            free_rank,
            torsion: None,
        };
    }
    let count1 = count_classes(&steps, n, &span, b1);
    let count2 = count_classes(&steps, n, &span, b2);
    BoxQuotient {
        free_rank,
        torsion: (count1 == count2).then_some(count1),
    }
}

/// Packs box coordinates in [-b, b]^n into a dense nonnegative index.
struct BoxCoder {
    n: usize,
    b: i64,
    side: i64,
}

impl BoxCoder {
    fn new(n: usize, b: i64) -> Self {
        BoxCoder {
            n,
            b,
            side: 2 * b + 1,
        }
    }

    fn volume(&self) -> usize {
        (self.side as usize).pow(self.n as u32)
    }

    fn encode(&self, v: &[i64]) -> Option<usize> {
        let mut acc = 0usize;
        for &c in v {
            if c.abs() > self.b {
                return None;
            }
            acc = acc * self.side as usize + (c + self.b) as usize;
        }
        Some(acc)
    }

    fn decode(&self, mut code: usize) -> Vec<i64> {
        let mut out = vec![0i64; self.n];
        for slot in out.iter_mut().rev() {
            *slot = (code % self.side as usize) as i64 - self.b;
            code /= self.side as usize;
        }
        out
    }
}

/// Short nonzero lattice vectors found by breadth-first closure of the
/// generators inside a roaming ball, iterated so that vectors discovered in
/// one round serve as steps in the next. Always contains the generators
/// themselves.
fn harvest_short_vectors(
    rows: &[Vec<i64>],
    n: usize,
    keep_radius: i64,
    roam_radius: i64,
    cap: usize,
) -> Vec<Vec<i64>> {
    use std::collections::VecDeque;
    let mut steps: Vec<Vec<i64>> = rows
        .iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .cloned()
        .collect();
    if steps.is_empty() {
        return steps;
    }
    let coder = BoxCoder::new(n, roam_radius);
    for _round in 0..3 {
        let mut seen = vec![false; coder.volume()];
        let origin = coder.encode(&vec![0; n]).unwrap();
        seen[origin] = true;
        let mut queue = VecDeque::from([origin]);
        let mut visited = vec![origin];
        while let Some(code) = queue.pop_front() {
            if visited.len() >= cap {
                break;
            }
            let point = coder.decode(code);
            for step in &steps {
                for dir in [1i64, -1] {
                    let next: Vec<i64> = point
                        .iter()
                        .zip(step)
                        .map(|(&a, &d)| a + dir * d)
                        .collect();
                    let Some(next_code) = coder.encode(&next) else {
                        continue;
                    };
                    if !seen[next_code] {
                        seen[next_code] = true;
                        visited.push(next_code);
                        queue.push_back(next_code);
                    }
                }
            }
        }
        let mut short: Vec<Vec<i64>> = visited
            .into_iter()
            .map(|code| coder.decode(code))
            .filter(|v| {
                v.iter().any(|&x| x != 0) && v.iter().all(|&x| x.abs() <= keep_radius)
            })
            .collect();
        short.sort_by_key(|v| v.iter().map(|&x| x.abs()).sum::<i64>());
        short.truncate(32);
        for r in rows {
            if r.iter().any(|&x| x != 0) && !short.contains(r) {
                short.push(r.clone());
            }
        }
        if short == steps {
            break;
        }
        steps = short;
    }
    steps
}

fn count_classes(steps: &[Vec<i64>], n: usize, span: &SpanTester, b: i64) -> u64 {
    let coder = BoxCoder::new(n, b);
    let mut index: Vec<i32> = vec![-1; coder.volume()];
    let mut points: Vec<Vec<i64>> = Vec::new();
    let mut current = vec![-b; n];
    loop {
        if span.contains(&current) {
            index[coder.encode(&current).unwrap()] = points.len() as i32;
            points.push(current.clone());
        }
        let mut axis = n;
        loop {
            if axis == 0 {
                break;
            }
            axis -= 1;
            current[axis] += 1;
            if current[axis] <= b {
                break;
            }
            current[axis] = -b;
        }
        if current.iter().all(|&c| c == -b) || n == 0 {
            break;
        }
    }
    let mut dsu = Dsu::new(points.len());
    for (i, p) in points.iter().enumerate() {
        for step in steps {
            let shifted: Vec<i64> = p.iter().zip(step).map(|(&a, &d)| a + d).collect();
            if let Some(code) = coder.encode(&shifted) {
                let j = index[code];
                if j >= 0 {
                    dsu.union(i, j as usize);
                }
            }
        }
    }
    let mut roots = std::collections::BTreeSet::new();
    for i in 0..points.len() {
        roots.insert(dsu.find(i));
    }
    roots.len() as u64
}

/// Rank over GF(2) of bitmask rows (up to 64 columns), by the standard
/// leading-bit xor basis.
pub fn gf2_rank(rows: &[u64]) -> usize {
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for &row in rows {
        let mut v = row;
        while v != 0 {
            let bit = 63 - v.leading_zeros() as usize;
            if basis[bit] == 0 {
                basis[bit] = v;
                rank += 1;
                break;
            }
            v ^= basis[bit];
        }
    }
    rank
}
