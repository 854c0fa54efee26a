"""Pure numpy implementations of the hot kernels.

Signatures and results match the compiled ``_kernels`` module; see
:mod:`schroeder_tails.kernels` for how one of the two is selected.
"""
import numpy as np


def schroeder_sweep(probs, order, tiny=1e-280):
    """Taylor coefficients of the Schroeder function up to ``order``.

    Sweeps the powers ``P**k`` row by row.  Once ``phi[k]`` is final its
    row is scattered into the accumulator of every higher coefficient, so
    ``phi[n] = acc[n] / (p1 - p1**n)`` is available when the sweep reaches
    ``n``.  Row entries below ``tiny`` are dropped from the active window.
    """
    probs = np.ascontiguousarray(probs, dtype=float)
    deg = len(probs) - 1
    p1 = probs[1]
    tail = probs[1:]
    phi = np.zeros(order + 1)
    phi[1] = 1.0
    acc = np.zeros(order + 1)
    row = np.zeros(order + 1)
    hi = min(deg, order)
    row[1:hi + 1] = probs[1:hi + 1]
    lo = 1
    acc[1:hi + 1] += row[1:hi + 1]
    p1k = p1
    for k in range(2, order + 1):
        p1k *= p1
        phi[k] = acc[k] / (p1 - p1k)
        if lo > hi:
            continue
        new_hi = min(hi + deg, order)
        prod = np.convolve(row[lo:hi + 1], tail)
        row[lo:new_hi + 1] = 0.0
        lo += 1
        n_keep = min(prod.size, new_hi - lo + 1)
        row[lo:lo + n_keep] = prod[:n_keep]
        hi = new_hi
        while lo <= hi and row[lo] < tiny:
            row[lo] = 0.0
            lo += 1
        while hi >= lo and row[hi] < tiny:
            row[hi] = 0.0
            hi -= 1
        start = max(lo, k + 1)
        if start <= hi:
            acc[start:hi + 1] += phi[k] * row[start:hi + 1]
    return phi


def poincare_recursion(shifted, mean, order):
    """Coefficients of ``u = Pi - 1`` from ``Q(u(z)) = u(E z)``.

    ``shifted[k]`` is the k-th Taylor coefficient of ``P`` about 1, so
    ``Q(u) = sum_{k>=1} shifted[k] u**k`` and ``shifted[1] == E``.
    """
    shifted = np.asarray(shifted, dtype=float)
    deg = len(shifted) - 1
    pw = np.zeros((deg + 1, order + 1))
    u = pw[1]
    u[1] = -1.0
    scale = mean
    for n in range(2, order + 1):
        scale *= mean
        s = 0.0
        for k in range(2, deg + 1):
            if n < k:
                break
            pw[k, n] = np.dot(u[1:n - k + 2], pw[k - 1, n - 1:k - 2:-1])
            s += shifted[k] * pw[k, n]
        u[n] = s / (scale - mean)
    return u.copy()


def reduce_iterate(probs, shifted, u, steps):
    """Apply ``P`` ``steps[i]`` times to ``1 + u[i]``; returns the images.

    Near the fixed point 1 the iterate is carried as the offset ``u`` and
    advanced with the shifted polynomial, which keeps full relative
    precision in ``1 - w``; once ``|u| >= 0.5`` it switches to ``w``
    itself so that values close to 0 keep their relative precision too.
    """
    probs = np.asarray(probs, dtype=float)
    shifted = np.asarray(shifted, dtype=float)
    shape = np.shape(u)
    u = np.array(u, dtype=complex).ravel()
    steps = np.broadcast_to(np.asarray(steps), shape).ravel()
    w = 1.0 + u
    far = np.zeros(u.shape, dtype=bool)
    n_iter = int(steps.max()) if steps.size else 0
    for it in range(n_iter):
        active = steps > it
        switch = active & ~far & (np.abs(u) >= 0.5)
        w[switch] = 1.0 + u[switch]
        far |= switch
        near = active & ~far
        if near.any():
            v = u[near]
            acc = np.full(v.shape, shifted[-1], dtype=complex)
            for c in shifted[-2:0:-1]:
                acc = acc * v + c
            u[near] = acc * v
        fa = active & far
        if fa.any():
            v = w[fa]
            acc = np.full(v.shape, probs[-1], dtype=complex)
            for c in probs[-2:0:-1]:
                acc = acc * v + c
            w[fa] = acc * v
    return np.where(far, w, 1.0 + u).reshape(shape)
