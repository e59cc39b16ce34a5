"""Dense vectors, matrix-free linear operators, spectral estimation and CG.

Everything here works on plain 1-D float64 numpy arrays. Operators are
matrix-free: they only promise ``forward`` and ``adjoint`` maps plus their
dimensions, which is all the solvers and the power iteration need.
"""

import numpy as np

__all__ = [
    "as_vector",
    "LinearOperator",
    "DenseOperator",
    "IdentityOperator",
    "TVOperator",
    "tv_operator",
    "power_iteration",
    "cg_solve",
    "PowerIterationError",
    "CGError",
    "save_matrix_txt",
    "load_matrix_txt",
]


def as_vector(x, name="vector"):
    """Coerce to a finite 1-D float64 array, rejecting NaN/Inf entries."""
    v = np.asarray(x, dtype=np.float64)
    if v.ndim == 0:
        v = v.reshape(1)
    if v.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains non-finite entries")
    return v


class LinearOperator:
    """A linear map with an adjoint.

    Subclasses set ``in_dim``/``out_dim`` and implement ``forward`` and
    ``adjoint``. Adjoint consistency <forward(u), v> == <u, adjoint(v)>
    is a contract, checked by the test suite on random vectors.
    """

    in_dim = None
    out_dim = None

    def forward(self, v):
        raise NotImplementedError

    def adjoint(self, v):
        raise NotImplementedError

    def __call__(self, v):
        return self.forward(v)

    def gram(self, v):
        """adjoint(forward(v)); the symmetric PSD map used by power iteration."""
        return self.adjoint(self.forward(v))


class DenseOperator(LinearOperator):
    """Wrap an explicit matrix. Keeps ``matrix`` accessible for dense paths."""

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=np.float64)
        if m.ndim != 2:
            raise ValueError(f"matrix must be 2-D, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("matrix contains non-finite entries")
        self.matrix = m
        self.out_dim, self.in_dim = m.shape

    def forward(self, v):
        return self.matrix @ v

    def adjoint(self, v):
        return self.matrix.T @ v


class IdentityOperator(LinearOperator):
    def __init__(self, dim):
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.in_dim = self.out_dim = int(dim)

    def forward(self, v):
        return np.asarray(v, dtype=np.float64)

    adjoint = forward


class TVOperator(LinearOperator):
    """Discrete gradient of an image, the operator behind the TV seminorm.

    Input is a row-major ``height x width`` image flattened to length h*w.
    Output has length 2*h*w with the horizontal and vertical forward
    differences of pixel p interleaved at entries (2p, 2p+1), so each
    pixel's gradient is a contiguous group of 2 for the l2,1 norm.
    Differences past the last column/row are 0 (replicate boundary), which
    keeps gram() a graph Laplacian.
    """

    def __init__(self, height, width):
        if height < 1 or width < 1:
            raise ValueError("image dimensions must be positive")
        self.height = int(height)
        self.width = int(width)
        self.in_dim = self.height * self.width
        self.out_dim = 2 * self.in_dim

    def forward(self, v):
        u = np.asarray(v, dtype=np.float64).reshape(self.height, self.width)
        dx = np.zeros_like(u)
        dy = np.zeros_like(u)
        dx[:, :-1] = u[:, 1:] - u[:, :-1]
        dy[:-1, :] = u[1:, :] - u[:-1, :]
        out = np.empty(self.out_dim)
        out[0::2] = dx.ravel()
        out[1::2] = dy.ravel()
        return out

    def adjoint(self, v):
        w = np.asarray(v, dtype=np.float64)
        ax = w[0::2].reshape(self.height, self.width)
        ay = w[1::2].reshape(self.height, self.width)
        out = np.zeros((self.height, self.width))
        # dx[i,j] = u[i,j+1] - u[i,j] for j < w-1 (boundary column emits 0)
        out[:, :-1] -= ax[:, :-1]
        out[:, 1:] += ax[:, :-1]
        out[:-1, :] -= ay[:-1, :]
        out[1:, :] += ay[:-1, :]
        return out.ravel()


def tv_operator(height, width):
    """Forward-difference image gradient operator (see TVOperator)."""
    return TVOperator(height, width)


class PowerIterationError(RuntimeError):
    """Power iteration did not reach the requested tolerance.

    ``last_estimate`` carries the eigenvalue estimate at abort time.
    """

    def __init__(self, message, last_estimate):
        super().__init__(message)
        self.last_estimate = last_estimate


def power_iteration(op, tol=1e-10, max_iter=10000, seed=0):
    """Largest eigenvalue of adjoint(forward(.)), i.e. the squared spectral
    norm of ``op``.

    Runs a seeded power iteration on the Gram map and stops once the
    eigenvalue residual ||M v - lam v|| <= tol * max(lam, eps), which for a
    symmetric M bounds the distance from lam to an eigenvalue of M.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if op.in_dim is None or op.in_dim < 1:
        raise ValueError("operator must have positive input dimension")
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(op.in_dim)
    nv = np.linalg.norm(v)
    if nv == 0.0:  # cannot happen for a continuous draw, but stay safe
        v = np.ones(op.in_dim)
        nv = np.sqrt(float(op.in_dim))
    v /= nv
    lam = 0.0
    for _ in range(int(max_iter)):
        w = op.gram(v)
        lam = float(v @ w)
        resid = np.linalg.norm(w - lam * v)
        if resid <= tol * max(lam, np.finfo(float).tiny):
            return lam
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0  # op maps v into the null space: zero operator branch
        v = w / nw
    raise PowerIterationError(
        f"power iteration: residual above tolerance after {max_iter} iterations "
        f"(estimate {lam:.6e})",
        last_estimate=lam,
    )


class CGError(RuntimeError):
    """Conjugate gradient breakdown or iteration budget exhausted."""

    def __init__(self, message, x, residual_norm):
        super().__init__(message)
        self.x = x
        self.residual_norm = residual_norm


def cg_solve(op, rhs, tol=1e-10, max_iter=None, x0=None):
    """Solve op(x) = rhs for a symmetric positive definite ``op``.

    Stops when ||op(x) - rhs|| <= tol * max(1, ||rhs||). ``x0`` warm-starts
    the iteration. Raises CGError on zero/negative curvature (op not SPD)
    or when the budget runs out; the error carries the best iterate.
    """
    rhs = np.asarray(rhs, dtype=np.float64)
    n = rhs.shape[0]
    if max_iter is None:
        max_iter = max(200, 4 * n)
    target = tol * max(1.0, float(np.linalg.norm(rhs)))
    x = np.zeros(n) if x0 is None else np.asarray(x0, dtype=np.float64).copy()
    r = rhs - op(x)
    rn = float(np.linalg.norm(r))
    if rn <= target:
        return x
    p = r.copy()
    rs = float(r @ r)
    for _ in range(int(max_iter)):
        ap = op(p)
        curv = float(p @ ap)
        if curv <= 0.0:
            raise CGError(
                f"cg: non-positive curvature {curv:.3e} (operator not SPD?)",
                x=x, residual_norm=rn,
            )
        alpha = rs / curv
        x = x + alpha * p
        r = r - alpha * ap
        rn = float(np.linalg.norm(r))
        if rn <= target:
            return x
        rs_new = float(r @ r)
        p = r + (rs_new / rs) * p
        rs = rs_new
    raise CGError(
        f"cg: residual {rn:.3e} above target {target:.3e} after {max_iter} iterations",
        x=x, residual_norm=rn,
    )


def save_matrix_txt(path, matrix):
    """Write a dense matrix as: 'rows cols' header, then row-major reals."""
    m = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    with open(path, "w") as fh:
        fh.write(f"{m.shape[0]} {m.shape[1]}\n")
        for row in m:
            fh.write(" ".join(repr(float(v)) for v in row))
            fh.write("\n")


def load_matrix_txt(path):
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: first line must be 'rows cols'")
        rows, cols = int(header[0]), int(header[1])
        data = np.loadtxt(fh, dtype=np.float64, ndmin=2)
    if data.size != rows * cols:
        data = data.reshape(-1)
        if data.size != rows * cols:
            raise ValueError(f"{path}: expected {rows * cols} values, got {data.size}")
    return data.reshape(rows, cols)
