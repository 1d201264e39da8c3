"""Reference values for the frozen-value tests in crates/core/tests.

Each configuration is solved by a method unrelated to the Rust solver that
serves it:

  annulus, perturbed disk, two holes in the ball -> method of fundamental
      solutions (least-squares collocation), checked by doubling the sources
  concentric spheres -> Legendre series in mpmath, coefficients solved by hand
  rectangle -> sine modes along the length, closed-form Neumann 1D kernel
      across the width
  truncated sector -> pure angular eigen-series with the radial 1D kernel

Run with `python3 tools/reference_values.py`; prints Rust constant tables.
"""

import numpy as np
import mpmath as mp

mp.mp.dps = 40


def gamma2(x, y):
    return -np.log(np.linalg.norm(np.asarray(x) - np.asarray(y), axis=-1)) / (2 * np.pi)


def gamma3(x, y):
    return 1.0 / (4 * np.pi * np.linalg.norm(np.asarray(x) - np.asarray(y), axis=-1))


def circle(n, r, c=(0.0, 0.0), phase=0.0):
    t = 2 * np.pi * (np.arange(n) + phase) / n
    return np.stack([c[0] + r * np.cos(t), c[1] + r * np.sin(t)], axis=1), t


def fibonacci(n, r=1.0, c=(0.0, 0.0, 0.0)):
    k = np.arange(n)
    z = 1 - (2 * k + 1) / n
    rho = np.sqrt(1 - z * z)
    phi = np.pi * (3 - np.sqrt(5)) * k
    p = np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=1)
    return np.asarray(c) + r * p


# ---------------------------------------------------------------- annulus

def annulus_mfs(eps, bc, x, y, n):
    """bc: 'DD', 'DN' (Neumann on the hole) or 'ND' (Neumann outside)."""
    src_out, _ = circle(n, 1.5, phase=0.25)
    src_in, _ = circle(n, 0.5 * eps, phase=0.25)
    src = np.vstack([src_out, src_in])
    col_out, _ = circle(3 * n, 1.0)
    col_in, _ = circle(3 * n, eps)

    def basis(p):
        cols = [gamma2(p[:, None, :], src[None, :, :])]
        cols.append(np.ones((len(p), 1)))
        cols.append(np.log(np.linalg.norm(p, axis=1))[:, None])
        return np.hstack(cols)

    def basis_dn(p, outward):
        # derivative along the unit normal pointing out of the annulus
        nrm = p / np.linalg.norm(p, axis=1)[:, None] * (1.0 if outward else -1.0)
        d = p[:, None, :] - src[None, :, :]
        g = -d / (2 * np.pi * np.sum(d * d, axis=2)[:, :, None])
        cols = [np.sum(g * nrm[:, None, :], axis=2)]
        cols.append(np.zeros((len(p), 1)))
        cols.append((np.sum(p * nrm, axis=1) / np.sum(p * p, axis=1))[:, None])
        return np.hstack(cols)

    def free_dn(p, outward):
        nrm = p / np.linalg.norm(p, axis=1)[:, None] * (1.0 if outward else -1.0)
        d = p - np.asarray(y)
        return np.sum(-d / (2 * np.pi * np.sum(d * d, axis=1)[:, None]) * nrm, axis=1)

    rows, rhs = [], []
    if bc[0] == "D":
        rows.append(basis(col_out)); rhs.append(gamma2(col_out, y))
    else:
        rows.append(basis_dn(col_out, True)); rhs.append(free_dn(col_out, True))
    if bc[1] == "D":
        rows.append(basis(col_in)); rhs.append(gamma2(col_in, y))
    else:
        rows.append(basis_dn(col_in, False)); rhs.append(free_dn(col_in, False))
    a = np.vstack(rows)
    b = np.concatenate(rhs)
    coef, *_ = np.linalg.lstsq(a, b, rcond=None)
    h = basis(np.asarray([x], dtype=float)) @ coef
    return float(gamma2(x, y) - h[0])


# ------------------------------------------------------- concentric spheres

def spheres_series(eps, x, y, lmax=400):
    eps = mp.mpf(eps)
    x = [mp.mpf(v) for v in x]
    y = [mp.mpf(v) for v in y]
    r = mp.sqrt(sum(v * v for v in x))
    s = mp.sqrt(sum(v * v for v in y))
    c = sum(a * b for a, b in zip(x, y)) / (r * s)
    free = 1 / (4 * mp.pi * mp.sqrt(sum((a - b) ** 2 for a, b in zip(x, y))))
    h = mp.mpf(0)
    for l in range(lmax):
        # h_l = A r^l + B r^{-(l+1)} matches the free kernel on r = 1 and r = eps
        a = s ** l / (4 * mp.pi)
        b = eps ** l / (4 * mp.pi * s ** (l + 1))
        B = (b - a * eps ** l) / (eps ** (-(l + 1)) - eps ** l)
        A = a - B
        term = (A * r ** l + B * r ** (-(l + 1))) * mp.legendre(l, c)
        h += term
        if l > 20 and abs(term) < mp.mpf(10) ** -30:
            break
    return float(free - h)


# ---------------------------------------------------------------- rectangle

def rectangle_sine_series(width, half, x, y, nmax=4000):
    """(0, width) x (-half, half); Neumann at x1 = 0, width; Dirichlet at t = +-half."""
    x1, t = map(mp.mpf, x)
    y1, s = map(mp.mpf, y)
    w, a = mp.mpf(width), mp.mpf(half)
    lo, hi = min(x1, y1), max(x1, y1)
    total = mp.mpf(0)
    for n in range(1, nmax):
        k = n * mp.pi / (2 * a)
        g = mp.cosh(k * lo) * mp.cosh(k * (w - hi)) / (k * mp.sinh(k * w))
        term = mp.sin(k * (t + a)) * mp.sin(k * (s + a)) * g / a
        total += term
        if n > 10 and abs(g) < mp.mpf(10) ** -30:
            break
    return float(total)


# ---------------------------------------------------------------- sector

def sector_series(alpha, eps, x, y, kmax=4000):
    alpha, eps = mp.mpf(alpha), mp.mpf(eps)
    r, th = mp.sqrt(x[0] ** 2 + x[1] ** 2), mp.atan2(x[1], x[0])
    rho, ph = mp.sqrt(y[0] ** 2 + y[1] ** 2), mp.atan2(y[1], y[0])
    lo, hi = min(r, rho), max(r, rho)
    total = mp.mpf(0)
    for k in range(1, kmax):
        mu = k * mp.pi / alpha
        g = (lo ** mu - eps ** (2 * mu) * lo ** (-mu)) * (hi ** (-mu) - hi ** mu) / (2 * mu * (1 - eps ** (2 * mu)))
        term = 2 / alpha * mp.sin(mu * th) * mp.sin(mu * ph) * g
        total += term
        if k > 10 and abs(g) < mp.mpf(10) ** -30:
            break
    return float(total)


# ------------------------------------------------------------ perturbed disk

def perturbed_disk_mfs(eps, cos_coef, x, y, n):
    def radius(t):
        return 1 - eps * sum(c * np.cos(k * t) for k, c in enumerate(cos_coef))

    t_src = 2 * np.pi * (np.arange(n) + 0.5) / n
    src = np.stack([1.25 * radius(t_src) * np.cos(t_src), 1.25 * radius(t_src) * np.sin(t_src)], axis=1)
    t_col = 2 * np.pi * np.arange(3 * n) / (3 * n)
    col = np.stack([radius(t_col) * np.cos(t_col), radius(t_col) * np.sin(t_col)], axis=1)

    def basis(p):
        return np.hstack([gamma2(p[:, None, :], src[None, :, :]), np.ones((len(p), 1))])

    coef, *_ = np.linalg.lstsq(basis(col), gamma2(col, y), rcond=None)
    return float(gamma2(x, y) - (basis(np.asarray([x], dtype=float)) @ coef)[0])


# --------------------------------------------------------- two holes in 3D

def holes_mfs(centers, eps, x, y, n_out, n_hole):
    src = [fibonacci(n_out, 1.6)] + [fibonacci(n_hole, 0.4 * eps, c) for c in centers]
    src = np.vstack(src)
    col = [fibonacci(3 * n_out, 1.0)] + [fibonacci(3 * n_hole, eps, c) for c in centers]
    col = np.vstack(col)

    def basis(p):
        return gamma3(p[:, None, :], src[None, :, :])

    coef, *_ = np.linalg.lstsq(basis(col), gamma3(col, y), rcond=None)
    return float(gamma3(x, y) - (basis(np.asarray([x], dtype=float)) @ coef)[0])


def emit(name, rows):
    print(f"// {name}")
    for r in rows:
        print("    " + r)
    print()


def fmt(v):
    return repr(float(v))


if __name__ == "__main__":
    annulus_pairs = [((0.5, 0.1), (-0.3, 0.4)), ((0.25, 0.0), (0.9, 0.2)), ((0.3, -0.2), (0.35, -0.1))]
    for bc in ["DD", "DN", "ND"]:
        rows = []
        for x, y in annulus_pairs:
            a = annulus_mfs(0.2, bc, x, y, 240)
            b = annulus_mfs(0.2, bc, x, y, 480)
            rows.append(f"([{x[0]}, {x[1]}], [{y[0]}, {y[1]}], {fmt(b)}), // doubling change {abs(a - b):.1e}")
        emit(f"annulus eps = 0.2 {bc}", rows)

    sphere_pairs = [((0.5, 0.0, 0.0), (0.0, 0.5, 0.0)), ((0.3, 0.2, -0.1), (-0.6, 0.1, 0.4)), ((0.9, 0.0, 0.1), (0.12, 0.05, 0.0))]
    rows = []
    for x, y in sphere_pairs:
        rows.append(f"([{x[0]}, {x[1]}, {x[2]}], [{y[0]}, {y[1]}, {y[2]}], {fmt(spheres_series(0.1, x, y))}),")
    emit("concentric spheres eps = 0.1", rows)

    rect_pairs = [((0.1, 0.2), (0.5, -0.3)), ((0.05, 0.9), (0.55, 0.95)), ((0.3, -0.7), (0.0, 0.4))]
    rows = []
    for x, y in rect_pairs:
        rows.append(f"([{x[0]}, {x[1]}], [{y[0]}, {y[1]}], {fmt(rectangle_sine_series(0.6, 1.0, x, y))}),")
    emit("rectangle width 0.6, half-length 1", rows)

    for alpha_name, alpha in [("pi/2", np.pi / 2), ("3pi/4", 0.75 * np.pi)]:
        rows = []
        for x, y in [((0.5, 0.2), (0.2, 0.3)), ((0.15, 0.1), (0.7, 0.5)), ((0.9, 0.05), (0.3, 0.02))]:
            rows.append(f"([{x[0]}, {x[1]}], [{y[0]}, {y[1]}], {fmt(sector_series(alpha, 0.1, x, y))}),")
        emit(f"sector alpha = {alpha_name}, eps = 0.1", rows)

    rows = []
    for x, y in [((0.3, 0.0), (0.0, 0.4)), ((0.8, 0.05), (0.75, -0.1)), ((-0.5, 0.5), (0.2, -0.6))]:
        a = perturbed_disk_mfs(0.08, [1.0, 0.3], x, y, 200)
        b = perturbed_disk_mfs(0.08, [1.0, 0.3], x, y, 400)
        rows.append(f"([{x[0]}, {x[1]}], [{y[0]}, {y[1]}], {fmt(b)}), // doubling change {abs(a - b):.1e}")
    emit("perturbed disk delta = 1 + 0.3 cos, eps = 0.08", rows)

    centers = [(0.3, 0.0, 0.0), (-0.3, 0.0, 0.0)]
    rows = []
    for x, y in [((0.0, 0.3, 0.0), (0.0, -0.2, 0.4)), ((0.45, 0.0, 0.0), (-0.3, 0.2, 0.0)), ((0.7, 0.3, -0.2), (0.1, 0.0, 0.05))]:
        a = holes_mfs(centers, 0.1, x, y, 500, 250)
        b = holes_mfs(centers, 0.1, x, y, 1000, 500)
        rows.append(f"([{x[0]}, {x[1]}, {x[2]}], [{y[0]}, {y[1]}, {y[2]}], {fmt(b)}), // doubling change {abs(a - b):.1e}")
    emit("two holes at (+-0.3, 0, 0), eps = 0.1", rows)
