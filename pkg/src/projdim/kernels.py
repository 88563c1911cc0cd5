"""Hot numeric kernels with numba and pure-numpy implementations.

Every public function here dispatches on :mod:`projdim.backend`.  The
numba path runs tight scalar loops; the numpy path vectorises the same
arithmetic over batches.  Both follow identical sweep orders and sign
conventions so results agree to rounding.

Kernels:

* ``jacobi_eigh3``       -- eigensystem of symmetric 3x3 batches (cyclic Jacobi)
* ``cartan_batch``       -- singular values + orthogonal frames from the Gram matrix
* ``lyapunov_chains``    -- iterated products with periodic QR renormalisation
* ``propagate_points``   -- projective orbits of a point cloud under random words
* ``min_pairwise_sqdist``-- closest pair in a flat point set
* ``enum_word_tree``     -- depth-first word-tree enumeration of singular gaps
"""

import math

import numpy as np

from .backend import NUMBA_ENABLED

_JACOBI_TOL = 1e-14
_MAX_SWEEPS = 30


# ---------------------------------------------------------------------------
# symmetric 3x3 Jacobi eigensolver
# ---------------------------------------------------------------------------

def _jacobi_eigh3_py(S, want_vectors=True):
    """Scalar cyclic Jacobi on one symmetric 3x3 matrix.

    Returns eigenvalues (descending, stable order) and eigenvectors as
    columns.  Rotation order (0,1),(0,2),(1,2) is fixed.
    """
    A = S.copy()
    V = np.eye(3)
    frob = math.sqrt(
        A[0, 0] ** 2 + A[1, 1] ** 2 + A[2, 2] ** 2
        + 2.0 * (A[0, 1] ** 2 + A[0, 2] ** 2 + A[1, 2] ** 2)
    )
    if frob == 0.0:
        return np.zeros(3), V
    for _ in range(_MAX_SWEEPS):
        off = abs(A[0, 1]) + abs(A[0, 2]) + abs(A[1, 2])
        if off <= _JACOBI_TOL * frob:
            break
        for p in range(2):
            for q in range(p + 1, 3):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                sgn = 1.0 if theta >= 0.0 else -1.0
                t = sgn / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                r = 3 - p - q
                app = A[p, p]
                aqq = A[q, q]
                arp = A[r, p]
                arq = A[r, q]
                A[p, p] = app - t * apq
                A[q, q] = aqq + t * apq
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[r, p] = c * arp - s * arq
                A[p, r] = A[r, p]
                A[r, q] = s * arp + c * arq
                A[q, r] = A[r, q]
                if want_vectors:
                    for k in range(3):
                        vkp = V[k, p]
                        vkq = V[k, q]
                        V[k, p] = c * vkp - s * vkq
                        V[k, q] = s * vkp + c * vkq
    w = np.array([A[0, 0], A[1, 1], A[2, 2]])
    # stable descending order of three values (insertion sort on indices)
    o0, o1, o2 = 0, 1, 2
    if w[o1] > w[o0]:
        o0, o1 = o1, o0
    if w[o2] > w[o1]:
        o1, o2 = o2, o1
        if w[o1] > w[o0]:
            o0, o1 = o1, o0
    wout = np.empty(3)
    Vout = np.empty((3, 3))
    wout[0] = w[o0]
    wout[1] = w[o1]
    wout[2] = w[o2]
    for k in range(3):
        Vout[k, 0] = V[k, o0]
        Vout[k, 1] = V[k, o1]
        Vout[k, 2] = V[k, o2]
    return wout, Vout


def _jacobi_eigh3_batch_np(S, want_vectors=True):
    """Vectorised cyclic Jacobi over a (N,3,3) symmetric batch."""
    A = S.astype(np.float64).copy()
    n = A.shape[0]
    V = np.broadcast_to(np.eye(3), (n, 3, 3)).copy()
    frob = np.sqrt((A * A).sum(axis=(1, 2)))
    frob[frob == 0.0] = 1.0
    for _ in range(_MAX_SWEEPS):
        off = np.abs(A[:, 0, 1]) + np.abs(A[:, 0, 2]) + np.abs(A[:, 1, 2])
        if (off <= _JACOBI_TOL * frob).all():
            break
        for p in range(2):
            for q in range(p + 1, 3):
                apq = A[:, p, q].copy()
                nz = apq != 0.0
                theta = np.zeros(n)
                np.divide(A[:, q, q] - A[:, p, p], 2.0 * apq,
                          out=theta, where=nz)
                sgn = np.where(theta >= 0.0, 1.0, -1.0)
                t = np.zeros(n)
                t[nz] = sgn[nz] / (np.abs(theta[nz])
                                   + np.sqrt(theta[nz] ** 2 + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                r = 3 - p - q
                arp = A[:, r, p].copy()
                arq = A[:, r, q].copy()
                A[:, p, p] -= t * apq
                A[:, q, q] += t * apq
                A[:, p, q] = 0.0
                A[:, q, p] = 0.0
                A[:, r, p] = c * arp - s * arq
                A[:, p, r] = A[:, r, p]
                A[:, r, q] = s * arp + c * arq
                A[:, q, r] = A[:, r, q]
                if want_vectors:
                    vp = V[:, :, p].copy()
                    vq = V[:, :, q].copy()
                    V[:, :, p] = c[:, None] * vp - s[:, None] * vq
                    V[:, :, q] = s[:, None] * vp + c[:, None] * vq
    w = np.stack([A[:, 0, 0], A[:, 1, 1], A[:, 2, 2]], axis=1)
    order = np.argsort(-w, axis=1, kind="stable")
    widx = np.take_along_axis(w, order, axis=1)
    Vidx = np.take_along_axis(V, order[:, None, :], axis=2)
    return widx, Vidx


# ---------------------------------------------------------------------------
# Cartan (SVD) of 3x3 batches via the Gram matrix
# ---------------------------------------------------------------------------

def _cartan_batch_np(g):
    gram = np.einsum("nji,njk->nik", g, g)
    w, V = _jacobi_eigh3_batch_np(gram, want_vectors=True)
    sigma = np.sqrt(np.maximum(w, 0.0))
    safe = np.maximum(sigma, 1e-300)
    U = np.einsum("nij,njk->nik", g, V) / safe[:, None, :]
    # modified Gram-Schmidt keeps frames orthogonal near-degenerate spectra
    for j in range(3):
        for i in range(j):
            proj = np.einsum("nk,nk->n", U[:, :, j], U[:, :, i])
            U[:, :, j] -= proj[:, None] * U[:, :, i]
        nrm = np.sqrt(np.einsum("nk,nk->n", U[:, :, j], U[:, :, j]))
        U[:, :, j] /= np.maximum(nrm, 1e-300)[:, None]
    k_right = np.swapaxes(V, 1, 2)
    return sigma, U, k_right


def _cartan_one_py(g):
    """Scalar Cartan data for one 3x3 matrix (numba-compilable)."""
    S = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            acc = 0.0
            for k in range(3):
                acc += g[k, i] * g[k, j]
            S[i, j] = acc
    w, V = _jacobi_eigh3_one(S)
    sigma = np.empty(3)
    for i in range(3):
        sigma[i] = math.sqrt(w[i]) if w[i] > 0.0 else 0.0
    U = np.empty((3, 3))
    for j in range(3):
        s = sigma[j] if sigma[j] > 1e-300 else 1e-300
        for i in range(3):
            acc = 0.0
            for k in range(3):
                acc += g[i, k] * V[k, j]
            U[i, j] = acc / s
    # modified Gram-Schmidt on the columns of U
    for j in range(3):
        for i in range(j):
            proj = U[0, j] * U[0, i] + U[1, j] * U[1, i] + U[2, j] * U[2, i]
            for k in range(3):
                U[k, j] -= proj * U[k, i]
        nrm = math.sqrt(U[0, j] ** 2 + U[1, j] ** 2 + U[2, j] ** 2)
        if nrm < 1e-300:
            nrm = 1e-300
        for k in range(3):
            U[k, j] /= nrm
    k_right = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            k_right[i, j] = V[j, i]
    return sigma, U, k_right


def _cartan_batch_loop_py(g):
    n = g.shape[0]
    sigma = np.empty((n, 3))
    kl = np.empty((n, 3, 3))
    kr = np.empty((n, 3, 3))
    for i in range(n):
        s, u, v = _cartan_one(g[i])
        sigma[i] = s
        kl[i] = u
        kr[i] = v
    return sigma, kl, kr


# ---------------------------------------------------------------------------
# Lyapunov chains: products with periodic QR renormalisation
# ---------------------------------------------------------------------------

def _lyapunov_chains_np(atoms, idx, renorm):
    """idx has shape (chains, steps); returns per-chain log-diagonal sums.

    Renormalisation happens every ``renorm`` steps and once at the end
    of a partial block, so the accumulated sums cover all steps.
    """
    chains, steps = idx.shape
    Q = np.broadcast_to(np.eye(3), (chains, 3, 3)).copy()
    acc = np.zeros((chains, 3))
    done = 0
    while done < steps:
        block = min(renorm, steps - done)
        for t in range(done, done + block):
            Q = np.matmul(atoms[idx[:, t]], Q)
        Qn, R = np.linalg.qr(Q)
        d = np.abs(np.stack([R[:, 0, 0], R[:, 1, 1], R[:, 2, 2]], axis=1))
        acc += np.log(np.maximum(d, 1e-300))
        sign = np.where(
            np.stack([R[:, 0, 0], R[:, 1, 1], R[:, 2, 2]], axis=1) < 0, -1.0, 1.0)
        Q = Qn * sign[:, None, :]
        done += block
    return acc


def _lyapunov_chains_py(atoms, idx, renorm):
    chains, steps = idx.shape
    acc = np.zeros((chains, 3))
    for c in range(chains):
        Q = np.eye(3)
        W = np.empty((3, 3))
        since = 0
        for t in range(steps):
            a = atoms[idx[c, t]]
            for i in range(3):
                for j in range(3):
                    W[i, j] = (a[i, 0] * Q[0, j] + a[i, 1] * Q[1, j]
                               + a[i, 2] * Q[2, j])
            Q, W = W, Q
            since += 1
            if since == renorm or t == steps - 1:
                Q, logs = _qr3_pos(Q)
                acc[c] += logs
                since = 0
    return acc


def _qr3_pos(M):
    """3x3 modified Gram-Schmidt QR with positive diagonal; returns Q, log(diag R)."""
    Q = np.empty((3, 3))
    logs = np.empty(3)
    for j in range(3):
        v0 = M[0, j]
        v1 = M[1, j]
        v2 = M[2, j]
        for i in range(j):
            proj = Q[0, i] * v0 + Q[1, i] * v1 + Q[2, i] * v2
            v0 -= proj * Q[0, i]
            v1 -= proj * Q[1, i]
            v2 -= proj * Q[2, i]
        r = math.sqrt(v0 * v0 + v1 * v1 + v2 * v2)
        Q[0, j] = v0 / r
        Q[1, j] = v1 / r
        Q[2, j] = v2 / r
        logs[j] = math.log(r)
    return Q, logs


# ---------------------------------------------------------------------------
# point-cloud propagation
# ---------------------------------------------------------------------------

def _propagate_points_np(atoms, idx, start):
    """idx shape (points, burn_in); returns unit representatives (points, 3)."""
    npts, burn = idx.shape
    v = np.broadcast_to(start, (npts, 3)).astype(np.float64).copy()
    for t in range(burn):
        v = np.einsum("nij,nj->ni", atoms[idx[:, t]], v)
        v /= np.linalg.norm(v, axis=1, keepdims=True)
    return v


def _propagate_points_py(atoms, idx, start):
    npts, burn = idx.shape
    out = np.empty((npts, 3))
    for n in range(npts):
        v0 = start[0]
        v1 = start[1]
        v2 = start[2]
        for t in range(burn):
            a = atoms[idx[n, t]]
            w0 = a[0, 0] * v0 + a[0, 1] * v1 + a[0, 2] * v2
            w1 = a[1, 0] * v0 + a[1, 1] * v1 + a[1, 2] * v2
            w2 = a[2, 0] * v0 + a[2, 1] * v1 + a[2, 2] * v2
            nrm = math.sqrt(w0 * w0 + w1 * w1 + w2 * w2)
            v0 = w0 / nrm
            v1 = w1 / nrm
            v2 = w2 / nrm
        out[n, 0] = v0
        out[n, 1] = v1
        out[n, 2] = v2
    return out


# ---------------------------------------------------------------------------
# closest pair
# ---------------------------------------------------------------------------

def _min_pairwise_sqdist_py(flat):
    n, k = flat.shape
    best = math.inf
    bi = -1
    bj = -1
    for i in range(n):
        for j in range(i + 1, n):
            d = 0.0
            for c in range(k):
                diff = flat[i, c] - flat[j, c]
                d += diff * diff
            if d < best:
                best = d
                bi = i
                bj = j
    return best, bi, bj


def _min_pairwise_sqdist_np(flat, chunk=512):
    n = flat.shape[0]
    norms = (flat * flat).sum(axis=1)
    best = math.inf
    bi = bj = -1
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        g = flat[lo:hi] @ flat.T
        d2 = norms[lo:hi, None] + norms[None, :] - 2.0 * g
        rows = np.arange(lo, hi)
        # mask the diagonal and the lower triangle of the full matrix
        mask = rows[:, None] >= np.arange(n)[None, :]
        d2[mask] = math.inf
        k = int(np.argmin(d2))
        i, j = divmod(k, n)
        if d2[i, j] < best:
            best = float(d2[i, j])
            bi = lo + i
            bj = j
    return max(best, 0.0), bi, bj


# ---------------------------------------------------------------------------
# word-tree enumeration of singular gaps
# ---------------------------------------------------------------------------

def word_tree_counts(m, n_max, allowed, run_cap):
    """Exact per-level word counts under successor/run constraints.

    Dynamic program over (last letter, current run length) states.
    ``run_cap <= 0`` means unlimited.
    """
    cap = run_cap if run_cap and run_cap > 0 else n_max
    state = np.zeros((m, cap), dtype=np.int64)
    state[:, 0] = 1  # level 1: every letter, run length 1
    counts = [int(state.sum())]
    for _ in range(2, n_max + 1):
        nxt = np.zeros_like(state)
        for last in range(m):
            total_from = state[last].sum()
            for let in range(m):
                if not allowed[last, let]:
                    continue
                if let == last:
                    nxt[let, 1:] += state[last, :-1]
                else:
                    nxt[let, 0] += total_from
        state = nxt
        counts.append(int(state.sum()))
    return counts


def _enum_word_tree_py(gens, n_max, allowed, run_cap, offsets,
                       chi1, chi2, min_chi1, min_words):
    m = gens.shape[0]
    cap = run_cap if run_cap > 0 else n_max + 1
    prod = np.empty((n_max + 1, 3, 3))
    prod[0] = np.eye(3)
    word = np.zeros(n_max, dtype=np.int8)
    runlen = np.zeros(n_max + 1, dtype=np.int64)
    nxt = np.zeros(n_max + 1, dtype=np.int64)
    cursor = offsets[:-1].copy()
    depth = 0
    nxt[0] = 0
    while depth >= 0:
        if depth == n_max or nxt[depth] == m:
            depth -= 1
            continue
        let = nxt[depth]
        nxt[depth] += 1
        if depth > 0:
            prev = word[depth - 1]
            if not allowed[prev, let]:
                continue
            newrun = runlen[depth] + 1 if let == prev else 1
        else:
            newrun = 1
        if newrun > cap:
            continue
        word[depth] = let
        # P = prod[depth] @ gens[let], normalised to unit Frobenius norm
        P = prod[depth + 1]
        a = prod[depth]
        b = gens[let]
        nf = 0.0
        for i in range(3):
            for j in range(3):
                acc = a[i, 0] * b[0, j] + a[i, 1] * b[1, j] + a[i, 2] * b[2, j]
                P[i, j] = acc
                nf += acc * acc
        nf = math.sqrt(nf)
        for i in range(3):
            for j in range(3):
                P[i, j] /= nf
        runlen[depth + 1] = newrun
        # singular gaps of the product (scale-invariant)
        g00 = P[0, 0] * P[0, 0] + P[1, 0] * P[1, 0] + P[2, 0] * P[2, 0]
        g11 = P[0, 1] * P[0, 1] + P[1, 1] * P[1, 1] + P[2, 1] * P[2, 1]
        g22 = P[0, 2] * P[0, 2] + P[1, 2] * P[1, 2] + P[2, 2] * P[2, 2]
        g01 = P[0, 0] * P[0, 1] + P[1, 0] * P[1, 1] + P[2, 0] * P[2, 1]
        g02 = P[0, 0] * P[0, 2] + P[1, 0] * P[1, 2] + P[2, 0] * P[2, 2]
        g12 = P[0, 1] * P[0, 2] + P[1, 1] * P[1, 2] + P[2, 1] * P[2, 2]
        S = np.empty((3, 3))
        S[0, 0] = g00
        S[1, 1] = g11
        S[2, 2] = g22
        S[0, 1] = g01
        S[1, 0] = g01
        S[0, 2] = g02
        S[2, 0] = g02
        S[1, 2] = g12
        S[2, 1] = g12
        w = _jacobi3_values(S)
        s1 = math.sqrt(w[0]) if w[0] > 0.0 else 1e-300
        s2 = math.sqrt(w[1]) if w[1] > 0.0 else 1e-300
        s3 = math.sqrt(w[2]) if w[2] > 0.0 else 1e-300
        c1 = math.log(s1 / s2)
        c2 = math.log(s1 / s3)
        k = cursor[depth]
        chi1[k] = c1
        chi2[k] = c2
        cursor[depth] = k + 1
        if c1 < min_chi1[depth]:
            min_chi1[depth] = c1
            for t in range(depth + 1):
                min_words[depth, t] = word[t]
        depth += 1
        nxt[depth] = 0


def _jacobi3_values_py(S):
    A = S.copy()
    frob = math.sqrt(
        A[0, 0] ** 2 + A[1, 1] ** 2 + A[2, 2] ** 2
        + 2.0 * (A[0, 1] ** 2 + A[0, 2] ** 2 + A[1, 2] ** 2)
    )
    if frob == 0.0:
        return np.zeros(3)
    for _ in range(_MAX_SWEEPS):
        off = abs(A[0, 1]) + abs(A[0, 2]) + abs(A[1, 2])
        if off <= _JACOBI_TOL * frob:
            break
        for p in range(2):
            for q in range(p + 1, 3):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                sgn = 1.0 if theta >= 0.0 else -1.0
                t = sgn / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                r = 3 - p - q
                arp = A[r, p]
                arq = A[r, q]
                A[p, p] -= t * apq
                A[q, q] += t * apq
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[r, p] = c * arp - s * arq
                A[p, r] = A[r, p]
                A[r, q] = s * arp + c * arq
                A[q, r] = A[r, q]
    w = sorted([A[0, 0], A[1, 1], A[2, 2]], reverse=True)
    out = np.empty(3)
    out[0] = w[0]
    out[1] = w[1]
    out[2] = w[2]
    return out


def _enum_word_tree_np(gens, n_max, allowed, run_cap, offsets,
                       chi1, chi2, min_chi1, min_words):
    """Breadth-first equivalent of the depth-first kernel.

    Level extension in (prefix, letter) lexicographic order matches the
    DFS output ordering exactly.
    """
    m = gens.shape[0]
    cap = run_cap if run_cap > 0 else n_max + 1
    prods = np.eye(3)[None, :, :]
    last = np.full(1, -1, dtype=np.int64)
    runs = np.zeros(1, dtype=np.int64)
    words = np.zeros((1, 0), dtype=np.int8)
    for depth in range(n_max):
        npar = prods.shape[0]
        rep = np.repeat(np.arange(npar), m)
        let = np.tile(np.arange(m), npar)
        if depth == 0:
            mask = np.ones(npar * m, dtype=bool)
        else:
            mask = allowed[last[rep], let]
        same = last[rep] == let
        newrun = np.where(same, runs[rep] + 1, 1)
        mask &= newrun <= cap
        rep = rep[mask]
        let = let[mask]
        newrun = newrun[mask]
        new = np.matmul(prods[rep], gens[let])
        nf = np.sqrt((new * new).sum(axis=(1, 2)))[:, None, None]
        new = new / nf
        gram = np.einsum("nji,njk->nik", new, new)
        w, _ = _jacobi_eigh3_batch_np(gram, want_vectors=False)
        s = np.sqrt(np.maximum(w, 1e-300))
        c1 = np.log(s[:, 0] / s[:, 1])
        c2 = np.log(s[:, 0] / s[:, 2])
        lo = offsets[depth]
        hi = offsets[depth + 1]
        chi1[lo:hi] = c1
        chi2[lo:hi] = c2
        words = np.concatenate(
            [words[rep], let.astype(np.int8)[:, None]], axis=1)
        amin = int(np.argmin(c1))
        min_chi1[depth] = c1[amin]
        min_words[depth, : depth + 1] = words[amin]
        prods = new
        last = let
        runs = newrun


# ---------------------------------------------------------------------------
# numba compilation and dispatch
# ---------------------------------------------------------------------------

if NUMBA_ENABLED:
    from numba import njit

    _jacobi_eigh3_one = njit(cache=True)(_jacobi_eigh3_py)
    _jacobi3_values = njit(cache=True)(_jacobi3_values_py)
    _cartan_one = njit(cache=True)(_cartan_one_py)
    _cartan_batch_loop = njit(cache=True)(_cartan_batch_loop_py)
    _lyapunov_chains_nb = njit(cache=True)(_lyapunov_chains_py)
    _qr3_pos = njit(cache=True)(_qr3_pos)
    _propagate_points_nb = njit(cache=True)(_propagate_points_py)
    _min_pairwise_sqdist_nb = njit(cache=True)(_min_pairwise_sqdist_py)
    _enum_word_tree_nb = njit(cache=True)(_enum_word_tree_py)
else:
    _jacobi_eigh3_one = _jacobi_eigh3_py
    _jacobi3_values = _jacobi3_values_py
    _cartan_one = _cartan_one_py


def jacobi_eigh3(S):
    """Eigenvalues (descending) and eigenvector columns of symmetric 3x3 batch."""
    S = np.asarray(S, dtype=np.float64)
    if S.ndim == 2:
        if NUMBA_ENABLED:
            return _jacobi_eigh3_one(S)
        w, V = _jacobi_eigh3_batch_np(S[None])
        return w[0], V[0]
    if NUMBA_ENABLED:
        n = S.shape[0]
        w = np.empty((n, 3))
        V = np.empty((n, 3, 3))
        for i in range(n):
            w[i], V[i] = _jacobi_eigh3_one(S[i])
        return w, V
    return _jacobi_eigh3_batch_np(S)


def cartan_batch(g):
    """(sigma, k_left, k_right) with g = k_left @ diag(sigma) @ k_right."""
    g = np.asarray(g, dtype=np.float64)
    if g.ndim == 2:
        if NUMBA_ENABLED:
            return _cartan_one(np.ascontiguousarray(g))
        sigma, kl, kr = _cartan_batch_np(g[None])
        return sigma[0], kl[0], kr[0]
    if NUMBA_ENABLED:
        return _cartan_batch_loop(np.ascontiguousarray(g))
    return _cartan_batch_np(g)


def lyapunov_chains(atoms, idx, renorm):
    atoms = np.ascontiguousarray(atoms, dtype=np.float64)
    idx = np.ascontiguousarray(idx, dtype=np.int64)
    if NUMBA_ENABLED:
        return _lyapunov_chains_nb(atoms, idx, renorm)
    return _lyapunov_chains_np(atoms, idx, renorm)


def propagate_points(atoms, idx, start):
    atoms = np.ascontiguousarray(atoms, dtype=np.float64)
    idx = np.ascontiguousarray(idx, dtype=np.int64)
    start = np.asarray(start, dtype=np.float64)
    if NUMBA_ENABLED:
        return _propagate_points_nb(atoms, idx, start)
    return _propagate_points_np(atoms, idx, start)


def min_pairwise_sqdist(flat):
    flat = np.ascontiguousarray(flat, dtype=np.float64)
    if flat.shape[0] < 2:
        return math.inf, -1, -1
    if NUMBA_ENABLED:
        return _min_pairwise_sqdist_nb(flat)
    return _min_pairwise_sqdist_np(flat)


def enum_word_tree(gens, n_max, allowed=None, run_cap=0, budget=10 ** 7):
    """Enumerate all admissible words of length 1..n_max.

    Returns ``(levels, min_chi1, min_words, counts)`` where ``levels`` is
    a list of (chi1, chi2) array pairs per word length, ``min_chi1`` the
    per-level minimum top gap and ``min_words`` the witnessing words.
    """
    from .errors import EnumerationOverflow

    gens = np.ascontiguousarray(gens, dtype=np.float64)
    m = gens.shape[0]
    if allowed is None:
        allowed = np.ones((m, m), dtype=np.bool_)
    else:
        allowed = np.ascontiguousarray(allowed, dtype=np.bool_)
    counts = word_tree_counts(m, n_max, allowed, run_cap)
    total = int(sum(counts))
    if total > budget:
        raise EnumerationOverflow(
            f"word tree holds {total} nodes, budget is {budget}")
    offsets = np.zeros(n_max + 1, dtype=np.int64)
    offsets[1:] = np.cumsum(counts)
    chi1 = np.empty(total)
    chi2 = np.empty(total)
    min_chi1 = np.full(n_max, np.inf)
    min_words = np.full((n_max, n_max), -1, dtype=np.int8)
    impl = _enum_word_tree_nb if NUMBA_ENABLED else _enum_word_tree_np
    impl(gens, n_max, allowed, int(run_cap), offsets,
         chi1, chi2, min_chi1, min_words)
    levels = [
        (chi1[offsets[i]:offsets[i + 1]], chi2[offsets[i]:offsets[i + 1]])
        for i in range(n_max)
    ]
    return levels, min_chi1, min_words, counts
