//! Solving `δf · ω′ = ω` exactly.
//!
//! Writing `ν = ω/ω′` and `f(s) = e^{2πi a_s/N}`, the equation becomes the
//! linear system `a_s + a_t − a_{st} ≡ N·q(s,t) (mod N)`. Any circle-valued
//! solution satisfies `f(s)^{|G|} = Π_t ν(s,t)`, so with `N = D·|G|` (`D` the
//! lcm of the denominators of `ν`) every solution already lives in `μ_N` and
//! the finite system is complete. It is solved by a Smith normal form over
//! `Z/N`; the solution set is a coset of `Hom(G, μ_N)`, which is small, so the
//! lexicographically first solution is found by enumeration.

use num_integer::Integer;

use super::TwoCocycle;
use crate::exactnum::{Phase, Rat};

/// Returns `f` with `f(e) = 1` and `δf·ω′ = ω`, or `None` if `[ω] ≠ [ω′]`.
///
/// Among all solutions the one with lexicographically smallest exponent
/// vector (in element order, exponents in `[0, 1)`) is returned.
pub fn coboundary_solve(omega: &TwoCocycle, omega_prime: &TwoCocycle) -> Option<Vec<Phase>> {
    assert!(*omega.group() == *omega_prime.group(), "cocycles on different groups");
    let nu = omega.div(omega_prime);
    let g = nu.group().clone();
    let n = g.order();
    if n == 1 {
        return Some(vec![Phase::ONE]);
    }
    let modulus = (nu.modulus() * n as u64) as i64;

    // Unknowns a_1..a_{n-1}; a_0 = 0.
    let cols = n - 1;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut rhs: Vec<i64> = Vec::new();
    for s in 1..n {
        for t in 1..n {
            let mut row = vec![0i64; cols];
            let st = g.mul(s, t);
            row[s - 1] += 1;
            row[t - 1] += 1;
            if st != 0 {
                row[st - 1] -= 1;
            }
            for x in row.iter_mut() {
                *x = x.rem_euclid(modulus);
            }
            let q = nu.value(s, t).q() * Rat::from_integer(modulus);
            rows.push(row);
            rhs.push(q.to_integer().rem_euclid(modulus));
        }
    }
    let solutions = solve_mod(rows, rhs, cols, modulus)?;
    let best = solutions
        .into_iter()
        .min()
        .expect("a consistent system has a solution");
    let mut f = vec![Phase::ONE];
    f.extend(best.iter().map(|&a| Phase::new(Rat::new(a, modulus))));
    debug_assert!(TwoCocycle::coboundary(g, &f).mul(omega_prime) == *omega);
    Some(f)
}

/// All solutions `x ∈ (Z/N)^cols` of `A x ≡ b`, or `None` if inconsistent.
fn solve_mod(mut a: Vec<Vec<i64>>, mut b: Vec<i64>, cols: usize, n: i64) -> Option<Vec<Vec<i64>>> {
    let rows = a.len();
    // Column operations are accumulated in v so that x = v·y.
    let mut v: Vec<Vec<i64>> = (0..cols)
        .map(|i| (0..cols).map(|j| i64::from(i == j)).collect())
        .collect();
    let mul = |x: i64, y: i64| ((x as i128 * y as i128).rem_euclid(n as i128)) as i64;
    let combine = |x: i64, y: i64, p: i64, q: i64| (mul(x, p) + mul(y, q)).rem_euclid(n);

    let rank_limit = rows.min(cols);
    let mut diag = Vec::new();
    for t in 0..rank_limit {
        // Pivot: the entry generating the largest ideal, i.e. smallest gcd with N.
        let mut best: Option<(i64, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let gx = x.gcd(&n);
                    if best.map_or(true, |(bg, _, _)| gx < bg) {
                        best = Some((gx, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        a.swap(t, pi);
        b.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            for i in t + 1..rows {
                let x = a[i][t];
                if x != 0 {
                    let (s, u, y, z) = unimodular(a[t][t], x, n);
                    for j in 0..cols {
                        let (rt, ri) = (a[t][j], a[i][j]);
                        a[t][j] = combine(rt, ri, s, u);
                        a[i][j] = combine(rt, ri, y, z);
                    }
                    let (bt, bi) = (b[t], b[i]);
                    b[t] = combine(bt, bi, s, u);
                    b[i] = combine(bt, bi, y, z);
                }
            }
            for j in t + 1..cols {
                let x = a[t][j];
                if x != 0 {
                    let (s, u, y, z) = unimodular(a[t][t], x, n);
                    for row in a.iter_mut().chain(v.iter_mut()) {
                        let (ct, cj) = (row[t], row[j]);
                        row[t] = combine(ct, cj, s, u);
                        row[j] = combine(ct, cj, y, z);
                    }
                }
            }
            if (t + 1..rows).all(|i| a[i][t] == 0) {
                break;
            }
        }
        diag.push(a[t][t]);
    }
    let r = diag.len();
    if b[r..].iter().any(|&x| x != 0) {
        return None;
    }
    // d_i y_i ≡ c_i: particular solution plus multiples of N/g_i; free columns range over Z/N.
    let mut choices: Vec<Vec<i64>> = Vec::with_capacity(cols);
    for (i, &d) in diag.iter().enumerate() {
        let g = d.gcd(&n);
        if b[i] % g != 0 {
            return None;
        }
        let m = n / g;
        let inv = modinv((d / g).rem_euclid(m), m);
        let y0 = mul(b[i] / g, inv).rem_euclid(m);
        choices.push((0..g).map(|k| y0 + k * m).collect());
    }
    for _ in r..cols {
        choices.push((0..n).collect());
    }
    let total: usize = choices.iter().map(Vec::len).product();
    assert!(total <= 1 << 20, "solution space unexpectedly large");
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; cols];
    loop {
        let y: Vec<i64> = idx.iter().zip(&choices).map(|(&k, c)| c[k]).collect();
        let x: Vec<i64> = (0..cols)
            .map(|i| (0..cols).fold(0i64, |acc, j| (acc + mul(v[i][j], y[j])).rem_euclid(n)))
            .collect();
        out.push(x);
        let mut pos = 0;
        loop {
            if pos == cols {
                return Some(out);
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Determinant-one `[[s, u], [y, z]]` sending `(p, x)` to `(gcd, 0)`, reduced mod `n`.
///
/// When `p` divides `x` the first row is `(1, 0)`, so the pivot row is left alone.
fn unimodular(p: i64, x: i64, n: i64) -> (i64, i64, i64, i64) {
    if x % p == 0 {
        return (1, 0, (-(x / p)).rem_euclid(n), 1);
    }
    let e = p.extended_gcd(&x);
    let (p1, x1) = (p / e.gcd, x / e.gcd);
    (e.x.rem_euclid(n), e.y.rem_euclid(n), (-x1).rem_euclid(n), p1.rem_euclid(n))
}

fn modinv(a: i64, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    let e = a.extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m)
}

/// Brute-force search over all `f: G → μ_N` with `f(e) = 1`, for small groups.
///
/// Test oracle only: `N^{|G|-1}` candidates.
pub fn coboundary_solve_exhaustive(
    omega: &TwoCocycle,
    omega_prime: &TwoCocycle,
    n: u64,
) -> Option<Vec<Phase>> {
    let g = omega.group().clone();
    let k = g.order();
    let mut idx = vec![0u64; k];
    loop {
        let f: Vec<Phase> = idx.iter().map(|&a| Phase::from_fraction(a as i64, n as i64)).collect();
        if TwoCocycle::coboundary(g.clone(), &f).mul(omega_prime) == *omega {
            return Some(f);
        }
        let mut pos = k - 1;
        loop {
            if pos == 0 {
                return None;
            }
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
            pos -= 1;
        }
    }
}
