//! Dense complex linear algebra kernels.
//!
//! Hand-rolled QR and one-sided Jacobi SVD, generic over the real scalar.
//! Jacobi is chosen over bidiagonalization because it is simple, has high
//! relative accuracy on the small singular values the truncation ledger
//! depends on, and is bit-deterministic given its input. Degenerate singular
//! values are disambiguated by a fixed sign convention: the largest-modulus
//! entry of each left singular vector is made real positive.

use ndarray::{Array2, ArrayView2};

use crate::error::{Error, Result};
use crate::scalar::{norm_sqr, Real, C};

/// Thin singular value decomposition `a = u * diag(s) * vh`.
pub struct Svd<T: Real> {
    pub u: Array2<C<T>>,
    pub s: Vec<T>,
    pub vh: Array2<C<T>>,
}

/// Truncated SVD of a two-site block, with the discarded weight accounted.
pub struct TruncatedSvd<T: Real> {
    pub u: Array2<C<T>>,
    pub s: Vec<T>,
    pub vh: Array2<C<T>>,
    /// Sum of the kept squared singular values.
    pub kept_weight: T,
    /// Sum of all squared singular values (the pre-truncation Frobenius norm²).
    pub total_weight: T,
}

/// Column-major scratch matrix; columns are contiguous for the Jacobi sweeps.
struct ColMat<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Real> ColMat<T> {
    fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C::new(T::zero(), T::zero()); rows * cols] }
    }

    fn eye(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for j in 0..n {
            m.data[j * n + j] = C::new(T::one(), T::zero());
        }
        m
    }

    fn from_view(a: &ArrayView2<C<T>>) -> Self {
        let (rows, cols) = a.dim();
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            let col = &mut m.data[j * rows..(j + 1) * rows];
            for (i, slot) in col.iter_mut().enumerate() {
                *slot = a[(i, j)];
            }
        }
        m
    }

    fn col(&self, j: usize) -> &[C<T>] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    fn col_mut(&mut self, j: usize) -> &mut [C<T>] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Two-column rotation `(p, q) <- (c*p - s*conj(alpha)*q, s*alpha*p + c*q)`.
    fn rotate_pair(&mut self, p: usize, q: usize, cos: T, sin: T, alpha: C<T>) {
        debug_assert!(p < q);
        let (lo, hi) = self.data.split_at_mut(q * self.rows);
        let cp = &mut lo[p * self.rows..(p + 1) * self.rows];
        let cq = &mut hi[..self.rows];
        let sa = alpha * sin;
        let sac = alpha.conj() * sin;
        for (zp, zq) in cp.iter_mut().zip(cq.iter_mut()) {
            let new_p = zp.scale(cos) - *zq * sac;
            let new_q = *zp * sa + zq.scale(cos);
            *zp = new_p;
            *zq = new_q;
        }
    }
}

fn col_dot<T: Real>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    let mut acc = C::new(T::zero(), T::zero());
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x.conj() * *y;
    }
    acc
}

fn col_norm_sqr<T: Real>(a: &[C<T>]) -> T {
    let mut acc = T::zero();
    for x in a {
        acc += norm_sqr(*x);
    }
    acc
}

/// One-sided Jacobi on a tall matrix (rows >= cols). Returns the rotated
/// matrix (columns = u_j * s_j) and the accumulated right rotations `v`.
fn jacobi_tall<T: Real>(mut a: ColMat<T>, want_v: bool) -> (ColMat<T>, Option<ColMat<T>>) {
    let n = a.cols;
    let mut v = if want_v { Some(ColMat::eye(n)) } else { None };
    let mut norms: Vec<T> = vec![T::zero(); n];
    let tol = T::epsilon() * T::of(8.0);
    let tol2 = tol * tol;
    let max_sweeps = 48;
    for _ in 0..max_sweeps {
        for (j, slot) in norms.iter_mut().enumerate() {
            *slot = col_norm_sqr(a.col(j));
        }
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let app = norms[p];
                let aqq = norms[q];
                if app <= T::zero() || aqq <= T::zero() {
                    continue;
                }
                let apq = col_dot(a.col(p), a.col(q));
                let off = norm_sqr(apq);
                if off <= tol2 * app * aqq || off == T::zero() {
                    continue;
                }
                rotated = true;
                let abs_apq = off.sqrt();
                let alpha = apq.unscale(abs_apq);
                let tau = (aqq - app) / (T::of(2.0) * abs_apq);
                let sign = if tau >= T::zero() { T::one() } else { -T::one() };
                let t = sign / (tau.abs() + (T::one() + tau * tau).sqrt());
                let cos = T::one() / (T::one() + t * t).sqrt();
                let sin = t * cos;
                a.rotate_pair(p, q, cos, sin, alpha);
                if let Some(vm) = v.as_mut() {
                    vm.rotate_pair(p, q, cos, sin, alpha);
                }
                norms[p] = (app - t * abs_apq).max(T::zero());
                norms[q] = aqq + t * abs_apq;
            }
        }
        if !rotated {
            break;
        }
    }
    (a, v)
}

struct JacobiOut<T: Real> {
    u: ColMat<T>,
    s: Vec<T>,
    v: Option<ColMat<T>>,
}

/// SVD of a tall matrix via one-sided Jacobi, singular values descending.
/// Columns of `u` beyond the numerical rank are zero.
fn svd_tall<T: Real>(a: ColMat<T>, want_u: bool, want_v: bool) -> JacobiOut<T> {
    let (rows, cols) = (a.rows, a.cols);
    let (rotated, v) = jacobi_tall(a, want_v);
    let mut sigmas: Vec<(T, usize)> = (0..cols)
        .map(|j| (col_norm_sqr(rotated.col(j)).sqrt(), j))
        .collect();
    sigmas.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    let smax = sigmas.first().map(|x| x.0).unwrap_or_else(T::zero);
    let zero_tol = smax * T::epsilon() * T::of(64.0);
    let mut u = if want_u { ColMat::zeros(rows, cols) } else { ColMat::zeros(0, 0) };
    let mut v_sorted = if want_v { Some(ColMat::zeros(cols, cols)) } else { None };
    let mut s = Vec::with_capacity(cols);
    for (slot, &(sigma, j)) in sigmas.iter().enumerate() {
        s.push(sigma);
        if want_u && sigma > zero_tol {
            let inv = T::one() / sigma;
            let src = rotated.col(j).to_vec();
            for (dst, x) in u.col_mut(slot).iter_mut().zip(src) {
                *dst = x.scale(inv);
            }
        }
        if let (Some(dst), Some(src)) = (v_sorted.as_mut(), v.as_ref()) {
            let col = src.col(j).to_vec();
            dst.col_mut(slot).copy_from_slice(&col);
        }
    }
    // Phase convention: largest-modulus entry of each left singular vector
    // becomes real positive; the compensating phase moves into v.
    if want_u {
        for slot in 0..cols {
            if s[slot] <= zero_tol {
                continue;
            }
            let colu = u.col(slot);
            let mut best = T::zero();
            let mut best_i = 0;
            for (i, z) in colu.iter().enumerate() {
                let m = norm_sqr(*z);
                if m > best {
                    best = m;
                    best_i = i;
                }
            }
            if best == T::zero() {
                continue;
            }
            let z = u.col(slot)[best_i];
            let phase = z.unscale(z.re.hypot(z.im));
            let phase_conj = phase.conj();
            for x in u.col_mut(slot).iter_mut() {
                *x *= phase_conj;
            }
            if let Some(vm) = v_sorted.as_mut() {
                for x in vm.col_mut(slot).iter_mut() {
                    *x *= phase_conj;
                }
            }
        }
    }
    JacobiOut { u, s, v: v_sorted }
}

fn colmat_to_array<T: Real>(m: &ColMat<T>, cols: usize) -> Array2<C<T>> {
    Array2::from_shape_fn((m.rows, cols), |(i, j)| m.col(j)[i])
}

/// `v` holds right singular vectors as columns; emit `vh` (rows = conj cols).
fn v_to_vh<T: Real>(v: &ColMat<T>, keep: usize) -> Array2<C<T>> {
    Array2::from_shape_fn((keep, v.rows), |(k, j)| v.col(k)[j].conj())
}

/// Thin SVD with singular values in descending order.
pub fn svd<T: Real>(a: &ArrayView2<C<T>>) -> Svd<T> {
    let (m, n) = a.dim();
    if m >= n {
        let out = svd_tall(ColMat::from_view(a), true, true);
        Svd {
            u: colmat_to_array(&out.u, n),
            s: out.s,
            vh: v_to_vh(out.v.as_ref().unwrap(), n),
        }
    } else {
        // svd(a†) = (v, s, u†)
        let adag = a.t().map(|z| z.conj());
        let out = svd_tall(ColMat::from_view(&adag.view()), true, true);
        let k = m;
        let v = out.v.as_ref().unwrap();
        // u columns of a = columns of v (of a†)
        let u = Array2::from_shape_fn((m, k), |(i, j)| v.col(j)[i]);
        // vh rows of a = conj of u columns of a†
        let vh = Array2::from_shape_fn((k, n), |(j, i)| out.u.col(j)[i].conj());
        Svd { u, s: out.s, vh }
    }
}

/// Singular values only, descending.
pub fn singular_values<T: Real>(a: &ArrayView2<C<T>>) -> Vec<T> {
    let (m, n) = a.dim();
    let mat = if m >= n {
        ColMat::from_view(a)
    } else {
        let adag = a.t().map(|z| z.conj());
        ColMat::from_view(&adag.view())
    };
    svd_tall(mat, false, false).s
}

/// SVD truncated to at most `max_keep` nonzero singular values.
///
/// Keeps exactly `min(max_keep, numerical rank)` triplets; the discarded
/// weight is reported through `kept_weight` / `total_weight`.
pub fn svd_trunc<T: Real>(a: &ArrayView2<C<T>>, max_keep: usize) -> TruncatedSvd<T> {
    let full = svd(a);
    let smax = full.s.first().copied().unwrap_or_else(T::zero);
    let zero_tol = smax * T::epsilon() * T::of(64.0);
    let rank = full.s.iter().take_while(|&&x| x > zero_tol).count();
    let keep = rank.min(max_keep).max(usize::from(rank > 0));
    let keep = keep.min(full.s.len());
    let total_weight = full.s.iter().map(|&x| x * x).sum::<T>();
    let kept_weight = full.s.iter().take(keep).map(|&x| x * x).sum::<T>();
    TruncatedSvd {
        u: full.u.slice(ndarray::s![.., ..keep]).to_owned(),
        s: full.s[..keep].to_vec(),
        vh: full.vh.slice(ndarray::s![..keep, ..]).to_owned(),
        kept_weight,
        total_weight,
    }
}

/// Thin QR decomposition via complex Householder reflections.
/// Returns `(q, r)` with `q` of shape `(m, k)`, `r` of shape `(k, n)`,
/// `k = min(m, n)`.
pub fn qr<T: Real>(a: &ArrayView2<C<T>>) -> (Array2<C<T>>, Array2<C<T>>) {
    let (m, n) = a.dim();
    let k = m.min(n);
    let mut r = ColMat::from_view(a);
    // Householder vectors, stored per reflection.
    let mut reflectors: Vec<Vec<C<T>>> = Vec::with_capacity(k);
    for step in 0..k {
        let col = &r.col(step)[step..];
        let xnorm = col_norm_sqr(col).sqrt();
        if xnorm <= T::epsilon() * T::of(4.0) {
            reflectors.push(Vec::new());
            continue;
        }
        let x0 = col[0];
        // hypot keeps the phase at unit modulus even when |x0| is so small
        // that its squared norm falls into the denormal range; a mis-scaled
        // phase leaves an un-eliminated residue below the diagonal.
        let x0_mod = x0.re.hypot(x0.im);
        let phase = if x0_mod > T::zero() {
            x0.unscale(x0_mod)
        } else {
            C::new(T::one(), T::zero())
        };
        // u = x + phase*|x| e1 ; P = I - 2 u u† / |u|²  maps x -> -phase*|x| e1
        let mut u = col.to_vec();
        u[0] += phase.scale(xnorm);
        let unorm2 = col_norm_sqr(&u);
        let scale = T::of(2.0) / unorm2;
        for j in step..n {
            let colj = &mut r.col_mut(j)[step..];
            let proj = col_dot(&u, colj).scale(scale);
            for (cj, ui) in colj.iter_mut().zip(u.iter()) {
                *cj -= *ui * proj;
            }
        }
        reflectors.push(u);
    }
    // Assemble thin Q by applying reflections in reverse to the identity.
    let mut q = ColMat::zeros(m, k);
    for j in 0..k {
        q.col_mut(j)[j] = C::new(T::one(), T::zero());
    }
    for step in (0..k).rev() {
        let u = &reflectors[step];
        if u.is_empty() {
            continue;
        }
        let unorm2 = col_norm_sqr(u);
        let scale = T::of(2.0) / unorm2;
        for j in 0..k {
            let colj = &mut q.col_mut(j)[step..];
            let proj = col_dot(u, colj).scale(scale);
            for (cj, ui) in colj.iter_mut().zip(u.iter()) {
                *cj -= *ui * proj;
            }
        }
    }
    let qa = colmat_to_array(&q, k);
    let ra = Array2::from_shape_fn((k, n), |(i, j)| if j >= i { r.col(j)[i] } else { C::new(T::zero(), T::zero()) });
    (qa, ra)
}

/// LQ decomposition: `a = l * q` with the rows of `q` orthonormal.
pub fn lq<T: Real>(a: &ArrayView2<C<T>>) -> (Array2<C<T>>, Array2<C<T>>) {
    let adag = a.t().map(|z| z.conj());
    let (qt, rt) = qr(&adag.view());
    let l = rt.t().map(|z| z.conj());
    let q = qt.t().map(|z| z.conj());
    (l, q)
}

/// Conjugate transpose.
pub fn dagger<T: Real>(a: &ArrayView2<C<T>>) -> Array2<C<T>> {
    a.t().map(|z| z.conj())
}

/// Maximum entrywise deviation of `a† a` from the identity.
pub fn unitarity_deviation<T: Real>(a: &ArrayView2<C<T>>) -> T {
    let prod = dagger(a).dot(a);
    let n = prod.nrows();
    let mut worst = T::zero();
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { T::one() } else { T::zero() };
            let d = (prod[(i, j)] - C::new(target, T::zero())).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Kronecker product.
pub fn kron<T: Real>(a: &ArrayView2<C<T>>, b: &ArrayView2<C<T>>) -> Array2<C<T>> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    Array2::from_shape_fn((ar * br, ac * bc), |(i, j)| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Complete a set of orthonormal columns to a full unitary.
///
/// `given` maps column positions to column vectors of length `dim`. The free
/// positions are filled, in ascending order, by orthogonalizing the standard
/// basis vectors (taken in index order) against everything placed so far.
/// Candidates whose residual is numerically inside the current span are
/// skipped, which guarantees the completion never amplifies noise.
pub fn complete_unitary<T: Real>(dim: usize, given: &[(usize, Vec<C<T>>)]) -> Result<Array2<C<T>>> {
    let mut worst = T::zero();
    for (a, (pa, ca)) in given.iter().enumerate() {
        if *pa >= dim || ca.len() != dim {
            return Err(Error::InvalidSize(format!(
                "column at position {pa} does not fit a dimension-{dim} unitary"
            )));
        }
        for (pb, cb) in given.iter().skip(a) {
            let target = if pa == pb { T::one() } else { T::zero() };
            let d = (col_dot(ca, cb) - C::new(target, T::zero())).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    if worst > T::of(1e-8) {
        return Err(Error::NotOrthonormal { deviation: worst.as_f64() });
    }

    let mut cols: Vec<Option<Vec<C<T>>>> = vec![None; dim];
    let mut placed: Vec<Vec<C<T>>> = Vec::with_capacity(dim);
    for (p, c) in given {
        cols[*p] = Some(c.clone());
        placed.push(c.clone());
    }
    let skip_tol = T::one() / (T::of(2.0) * T::of(dim as f64).sqrt());
    let mut basis = 0usize;
    for pos in 0..dim {
        if cols[pos].is_some() {
            continue;
        }
        loop {
            if basis >= dim {
                return Err(Error::NotOrthonormal { deviation: f64::NAN });
            }
            let mut cand = vec![C::new(T::zero(), T::zero()); dim];
            cand[basis] = C::new(T::one(), T::zero());
            basis += 1;
            for _pass in 0..2 {
                for u in &placed {
                    let proj = col_dot(u, &cand);
                    for (c, ui) in cand.iter_mut().zip(u.iter()) {
                        *c -= *ui * proj;
                    }
                }
            }
            let nrm = col_norm_sqr(&cand).sqrt();
            if nrm > skip_tol {
                let inv = T::one() / nrm;
                for c in cand.iter_mut() {
                    *c = c.scale(inv);
                }
                cols[pos] = Some(cand.clone());
                placed.push(cand);
                break;
            }
        }
    }
    let mut out = Array2::from_elem((dim, dim), C::new(T::zero(), T::zero()));
    for (j, col) in cols.into_iter().enumerate() {
        let col = col.unwrap();
        for (i, z) in col.into_iter().enumerate() {
            out[(i, j)] = z;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(m: usize, n: usize, rng: &mut impl Rng) -> Array2<C<f64>> {
        Array2::from_shape_fn((m, n), |_| {
            C::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
    }

    fn reconstruct(svd: &Svd<f64>) -> Array2<C<f64>> {
        let k = svd.s.len();
        let mut us = svd.u.clone();
        for j in 0..k {
            for i in 0..us.nrows() {
                us[(i, j)] = us[(i, j)].scale(svd.s[j]);
            }
        }
        us.dot(&svd.vh)
    }

    fn max_abs_diff(a: &Array2<C<f64>>, b: &Array2<C<f64>>) -> f64 {
        a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn svd_reconstructs_tall_wide_and_square() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(m, n) in &[(8, 8), (12, 5), (5, 12), (16, 16), (3, 1), (1, 3)] {
            let a = random_matrix(m, n, &mut rng);
            let dec = svd(&a.view());
            assert!(max_abs_diff(&reconstruct(&dec), &a) < 1e-12, "{m}x{n}");
            assert!(unitarity_deviation(&dec.u.view()) < 1e-12);
            assert!(unitarity_deviation(&dagger(&dec.vh.view()).view()) < 1e-12);
            for w in dec.s.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }

    #[test]
    fn svd_handles_rank_deficiency() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let b = random_matrix(6, 2, &mut rng);
        let c = random_matrix(2, 6, &mut rng);
        let a = b.dot(&c); // rank 2
        let dec = svd(&a.view());
        assert!(max_abs_diff(&reconstruct(&dec), &a) < 1e-12);
        assert!(dec.s[2] < 1e-12 * dec.s[0]);
        let t = svd_trunc(&a.view(), 10);
        assert_eq!(t.s.len(), 2);
        assert!((t.kept_weight - t.total_weight).abs() < 1e-13 * t.total_weight);
    }

    #[test]
    fn svd_is_deterministic_and_sign_fixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = random_matrix(10, 10, &mut rng);
        let d1 = svd(&a.view());
        let d2 = svd(&a.view());
        assert_eq!(d1.u, d2.u);
        assert_eq!(d1.s, d2.s);
        for j in 0..d1.s.len() {
            let col = d1.u.column(j);
            let mut best = 0.0;
            let mut best_val = C::new(0.0, 0.0);
            for z in col.iter() {
                if z.norm_sqr() > best {
                    best = z.norm_sqr();
                    best_val = *z;
                }
            }
            assert!(best_val.im.abs() < 1e-12 && best_val.re > 0.0);
        }
    }

    #[test]
    fn qr_orthonormal_and_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for &(m, n) in &[(9, 4), (4, 9), (6, 6), (1, 1)] {
            let a = random_matrix(m, n, &mut rng);
            let (q, r) = qr(&a.view());
            assert!(unitarity_deviation(&q.view()) < 1e-13);
            assert!(max_abs_diff(&q.dot(&r), &a) < 1e-13);
        }
    }

    #[test]
    fn lq_rows_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let a = random_matrix(4, 9, &mut rng);
        let (l, q) = lq(&a.view());
        assert!(max_abs_diff(&l.dot(&q), &a) < 1e-13);
        let qqd = q.dot(&dagger(&q.view()));
        let eye = Array2::from_shape_fn((4, 4), |(i, j)| {
            C::new(if i == j { 1.0 } else { 0.0 }, 0.0)
        });
        assert!(max_abs_diff(&qqd, &eye) < 1e-13);
    }

    #[test]
    fn completion_reproduces_given_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let a = random_matrix(8, 3, &mut rng);
        let (q, _) = qr(&a.view());
        let given: Vec<(usize, Vec<C<f64>>)> = (0..3)
            .map(|j| (2 * j, q.column(j).to_vec()))
            .collect();
        let u = complete_unitary(8, &given).unwrap();
        assert!(unitarity_deviation(&u.view()) < 1e-12);
        for (pos, col) in &given {
            for i in 0..8 {
                assert!((u[(i, *pos)] - col[i]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn completion_rejects_non_orthonormal() {
        let given = vec![(0usize, vec![C::new(0.9, 0.0), C::new(0.0, 0.0)])];
        assert!(matches!(
            complete_unitary(2, &given),
            Err(Error::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn completion_full_input_is_identity_operation() {
        let u0 = array![
            [C::new(0.0, 0.0), C::new(1.0, 0.0)],
            [C::new(1.0, 0.0), C::new(0.0, 0.0)]
        ];
        let given: Vec<(usize, Vec<C<f64>>)> =
            (0..2).map(|j| (j, u0.column(j).to_vec())).collect();
        let u = complete_unitary(2, &given).unwrap();
        assert_eq!(u, u0);
    }

    #[test]
    fn kron_matches_manual() {
        let x = array![[C::new(0.0, 0.0), C::new(1.0, 0.0)], [C::new(1.0, 0.0), C::new(0.0, 0.0)]];
        let z = array![[C::new(1.0, 0.0), C::new(0.0, 0.0)], [C::new(0.0, 0.0), C::new(-1.0, 0.0)]];
        let xz = kron(&x.view(), &z.view());
        assert_eq!(xz[(0, 2)], C::new(1.0, 0.0));
        assert_eq!(xz[(1, 3)], C::new(-1.0, 0.0));
        assert_eq!(xz[(2, 0)], C::new(1.0, 0.0));
        assert_eq!(xz[(3, 1)], C::new(-1.0, 0.0));
    }

    #[test]
    fn singular_values_match_svd_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let a = random_matrix(6, 10, &mut rng);
        let s1 = singular_values(&a.view());
        let s2 = svd(&a.view()).s;
        for (x, y) in s1.iter().zip(s2.iter()) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn generic_f32_smoke() {
        let a = Array2::from_shape_fn((4, 4), |(i, j)| {
            C::new(((i * 7 + j * 3) % 5) as f32 - 2.0, (i as f32 - j as f32) * 0.5)
        });
        let dec = svd(&a.view());
        let mut us = dec.u.clone();
        for j in 0..dec.s.len() {
            for i in 0..4 {
                us[(i, j)] = us[(i, j)].scale(dec.s[j]);
            }
        }
        let recon = us.dot(&dec.vh);
        let err: f32 = recon
            .iter()
            .zip(a.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f32::max);
        assert!(err < 1e-4);
    }
}
