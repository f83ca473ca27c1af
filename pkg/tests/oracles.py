"""Independent reference computations used by several test modules."""
import numpy as np


def gaussian_window(m, sigma=None):
    sigma = m / 3.0 if sigma is None else sigma
    k = m // 2
    w = []
    for dy in range(-k, k + 1):
        for dx in range(-k, k + 1):
            w.append(np.exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma)))
    return np.array(w)


def window(plane, r, c, m):
    h, w = plane.shape
    k = m // 2
    vals = []
    for y in range(r - k, r + k + 1):
        for x in range(c - k, c + k + 1):
            vals.append(plane[min(max(y, 0), h - 1), min(max(x, 0), w - 1)])
    return np.array(vals)


def prior_slope_scalar(nir_vals, vis_vals):
    mid = len(nir_vals) // 2
    mn, mv = nir_vals.mean(), vis_vals.mean()
    vn = ((nir_vals - mn) ** 2).mean()
    vv = ((vis_vals - mv) ** 2).mean()
    w1 = 0.5 if vn + vv == 0 else vn / (vn + vv)
    return w1 * nir_vals[mid] / max(mn, 1e-4) + (1 - w1) * vis_vals[mid] / max(mv, 1e-4)


def ridge_oracle(nir_vals, vis_vals, mu_c, m):
    """Explicit (Q^T W Q + mu I)^-1 (Q^T W p + mu a0) with a hand-written 2x2 inverse."""
    Q = np.column_stack([nir_vals, np.ones_like(nir_vals)])
    W = np.diag(gaussian_window(m))
    A = Q.T @ W @ Q + mu_c * np.eye(2)
    a0 = np.array([prior_slope_scalar(nir_vals, vis_vals), 0.0])
    b = Q.T @ W @ vis_vals + mu_c * a0
    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    inv = np.array([[A[1, 1], -A[0, 1]], [-A[1, 0], A[0, 0]]]) / det
    return inv @ b


def subgradient_detail(d_new, d_nir, mu, iters=5000):
    """Best objective of plain subgradient descent with step 1 / (2 mu k)."""
    def grad_h(x):
        return np.roll(x, -1, axis=1) - x

    def grad_v(x):
        return np.roll(x, -1, axis=0) - x

    def adj_h(g):
        return np.roll(g, 1, axis=1) - g

    def adj_v(g):
        return np.roll(g, 1, axis=0) - g

    gh, gv = grad_h(d_nir), grad_v(d_nir)

    def obj(x):
        return (mu * np.sum((x - d_new) ** 2) + np.sum(np.abs(grad_h(x) - gh))
                + np.sum(np.abs(grad_v(x) - gv)))

    x = d_new.copy()
    best = obj(x)
    for k in range(1, iters + 1):
        g = 2 * mu * (x - d_new) + adj_h(np.sign(grad_h(x) - gh)) + adj_v(np.sign(grad_v(x) - gv))
        x = x - g / (2 * mu * k)
        best = min(best, obj(x))
    return best
