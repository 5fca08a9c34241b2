"""Soft-margin kernel SVM trained by sequential minimal optimization (SMO).

Multiclass is one-vs-rest: one binary machine per class, predicting the class
with the largest decision value. The trainer is the classic simplified SMO
sweep: examine each point, pick a random partner index, solve the two-variable
subproblem analytically, and stop after a fixed number of consecutive sweeps
without an accepted update (or at a hard iteration cap). Each pair update
maximizes the dual on its subproblem, so the dual objective never decreases
across accepted updates; instrumented fits record it for verification.

Everything is deterministic given the seed; the random partner choice is the
only stochastic ingredient and is drawn from a per-machine seeded generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataError
from .representation import FeatureMatrix, FeatureVector

KERNEL_KINDS = ("linear", "rbf", "polynomial")

# An update must move alpha by at least this much to be accepted.
# Steps below this are fp noise; anything larger must be accepted, otherwise
# large-magnitude kernels (decision shift ~ step * K) could leave margin
# violations bigger than the KKT tolerance permanently out of reach.
_MIN_ALPHA_STEP = 1e-12
# Alphas within this of the box edges count as 0 / C for support-vector pruning.
_ALPHA_EDGE = 1e-8


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family and parameters. ``gamma=None`` resolves to 1/dim at fit."""

    kind: str = "rbf"
    gamma: float | None = None
    degree: int = 3
    coef0: float = 1.0

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ConfigError(f"unknown kernel {self.kind!r}; expected one of {KERNEL_KINDS}")
        if self.gamma is not None and not self.gamma > 0:
            raise ConfigError(f"gamma must be > 0, got {self.gamma}")
        if self.degree < 1:
            raise ConfigError(f"degree must be >= 1, got {self.degree}")

    def resolve_gamma(self, dim: int) -> float:
        return self.gamma if self.gamma is not None else 1.0 / dim

    def label(self) -> str:
        return self.kind


def kernel_eval(spec: KernelSpec, x, y, gamma: float | None = None) -> float:
    """Evaluate the kernel on two equal-length vectors."""
    xv = x.values if isinstance(x, FeatureVector) else np.asarray(x, dtype=np.float64)
    yv = y.values if isinstance(y, FeatureVector) else np.asarray(y, dtype=np.float64)
    if xv.shape != yv.shape:
        raise DataError(f"kernel arguments have mismatched shapes {xv.shape} vs {yv.shape}")
    if spec.kind == "linear":
        return float(xv @ yv)
    if spec.kind == "polynomial":
        return float((xv @ yv + spec.coef0) ** spec.degree)
    g = spec.resolve_gamma(len(xv)) if gamma is None else gamma
    diff = xv - yv
    return float(np.exp(-g * (diff @ diff)))


def _kernel_rows(spec: KernelSpec, gamma: float, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Kernel values between every row of X and every row of Y, shape (len(X), len(Y))."""
    if spec.kind == "linear":
        return X @ Y.T
    if spec.kind == "polynomial":
        return (X @ Y.T + spec.coef0) ** spec.degree
    d2 = (X**2).sum(axis=1)[:, None] - 2.0 * X @ Y.T + (Y**2).sum(axis=1)[None, :]
    np.maximum(d2, 0.0, out=d2)
    return np.exp(-gamma * d2)


@dataclass
class BinaryMachine:
    """One trained one-vs-rest machine.

    ``coef`` holds alpha_i * y_i for the support vectors. ``alpha`` keeps the
    full training-set multipliers for post-fit diagnostics (box/KKT checks);
    it is not serialized. ``objective_trace`` is filled only on instrumented
    fits.
    """

    class_index: int
    coef: np.ndarray
    support_vectors: np.ndarray
    bias: float
    alpha: np.ndarray | None = field(default=None, repr=False)
    objective_trace: list[float] | None = field(default=None, repr=False)
    sweeps: int = 0

    def decision(self, spec: KernelSpec, gamma: float, Q: np.ndarray) -> np.ndarray:
        """Decision values for query rows Q."""
        if len(self.coef) == 0:
            return np.full(len(Q), self.bias)
        return _kernel_rows(spec, gamma, Q, self.support_vectors) @ self.coef + self.bias


@dataclass
class SvmModel:
    """One-vs-rest ensemble over a fixed class list."""

    machines: list[BinaryMachine]
    kernel: KernelSpec
    gamma: float
    C: float
    tolerance: float
    class_names: tuple[str, ...]
    feature_dim: int

    def decision_values(self, Q: np.ndarray) -> np.ndarray:
        """(n_queries, k) matrix of per-class decision values."""
        out = np.empty((len(Q), len(self.machines)), dtype=np.float64)
        for j, machine in enumerate(self.machines):
            out[:, j] = machine.decision(self.kernel, self.gamma, Q)
        return out


def _dual_objective(alpha: np.ndarray, y: np.ndarray, K: np.ndarray) -> float:
    ay = alpha * y
    return float(alpha.sum() - 0.5 * ay @ K @ ay)


def _smo_binary(
    X: np.ndarray,
    y: np.ndarray,
    spec: KernelSpec,
    gamma: float,
    C: float,
    tol: float,
    rng: np.random.Generator,
    max_passes: int,
    max_iter: int,
    track_objective: bool,
):
    """Train one binary machine; returns (alpha, bias, trace, sweeps).

    ``y`` must be +-1. The error cache E = f(x) - y is updated incrementally
    from the two kernel rows touched by each accepted update.
    """
    n = len(y)
    alpha = np.zeros(n, dtype=np.float64)
    b = 0.0
    E = -y.astype(np.float64)
    trace: list[float] | None = [] if track_objective else None
    # The full Gram matrix is cheap to hold at desk scale and turns the inner
    # loop into pure indexing; above the cutoff fall back to on-demand rows.
    K_full = (
        _kernel_rows(spec, gamma, X, X) if (track_objective or n <= 2048) else None
    )

    def try_pair(i: int, j: int) -> bool:
        """Attempt a joint update of (alpha[i], alpha[j]); True if accepted."""
        nonlocal b, E
        ai_old, aj_old = alpha[i], alpha[j]
        if y[i] != y[j]:
            L = max(0.0, aj_old - ai_old)
            H = min(C, C + aj_old - ai_old)
        else:
            L = max(0.0, ai_old + aj_old - C)
            H = min(C, ai_old + aj_old)
        if L >= H:
            return False
        if K_full is not None:
            Ki, Kj = K_full[i], K_full[j]
        else:
            Ki = _kernel_rows(spec, gamma, X[i : i + 1], X)[0]
            Kj = _kernel_rows(spec, gamma, X[j : j + 1], X)[0]
        eta = 2.0 * Ki[j] - Ki[i] - Kj[j]
        if eta >= 0:
            return False
        aj_new = aj_old - y[j] * (E[i] - E[j]) / eta
        aj_new = min(max(aj_new, L), H)
        if abs(aj_new - aj_old) < _MIN_ALPHA_STEP:
            return False
        ai_new = ai_old + y[i] * y[j] * (aj_old - aj_new)
        di = y[i] * (ai_new - ai_old)
        dj = y[j] * (aj_new - aj_old)
        b1 = b - E[i] - di * Ki[i] - dj * Ki[j]
        b2 = b - E[j] - di * Ki[j] - dj * Kj[j]
        if 0 < ai_new < C:
            b_new = b1
        elif 0 < aj_new < C:
            b_new = b2
        else:
            b_new = 0.5 * (b1 + b2)
        E += di * Ki + dj * Kj + (b_new - b)
        alpha[i], alpha[j] = ai_new, aj_new
        b = b_new
        if track_objective:
            trace.append(_dual_objective(alpha, y, K_full))
        return True

    passes = 0
    sweeps = 0
    while passes < max_passes and sweeps < max_iter:
        sweeps += 1
        num_changed = 0
        for i in range(n):
            r = y[i] * E[i]
            if not ((r < -tol and alpha[i] < C) or (r > tol and alpha[i] > 0)):
                continue
            # Partner choice: one seeded random draw per violating point sets
            # where the rotation starts; every other index gets a chance
            # before the violation is given up on, so a "no change" sweep
            # means no pair at all can make progress.
            start = int(rng.integers(n - 1))
            for offset in range(n - 1):
                j = (start + offset) % (n - 1)
                if j >= i:
                    j += 1
                if try_pair(i, j):
                    num_changed += 1
                    break
        passes = passes + 1 if num_changed == 0 else 0
    return alpha, b, trace, sweeps


def svm_fit(
    train: FeatureMatrix,
    kernel: KernelSpec,
    C: float = 1.0,
    tolerance: float = 1e-3,
    seed: int = 0,
    max_passes: int = 5,
    max_iter: int = 10_000,
    track_objective: bool = False,
) -> SvmModel:
    """Train one binary machine per class (that class vs the rest).

    Deterministic given the seed: machine j draws its random partner indices
    from PCG64 keyed by (seed, j). Raises DataError when fewer than two
    classes are present in the training labels.
    """
    if train.labels is None:
        raise DataError("SVM training data must be labeled")
    if C <= 0:
        raise ConfigError(f"C must be > 0, got {C}")
    present = np.unique(train.labels)
    if len(present) < 2:
        raise DataError(f"need at least 2 classes to train, got {len(present)}")
    X = train.values
    gamma = kernel.resolve_gamma(X.shape[1])
    machines = []
    for j in range(train.k):
        y = np.where(train.labels == j, 1.0, -1.0)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, j])))
        alpha, b, trace, sweeps = _smo_binary(
            X, y, kernel, gamma, C, tolerance, rng, max_passes, max_iter, track_objective
        )
        sv = alpha > _ALPHA_EDGE
        machines.append(
            BinaryMachine(
                class_index=j,
                coef=(alpha[sv] * y[sv]).copy(),
                support_vectors=X[sv].copy(),
                bias=b,
                alpha=alpha,
                objective_trace=trace,
                sweeps=sweeps,
            )
        )
    return SvmModel(
        machines=machines,
        kernel=kernel,
        gamma=gamma,
        C=C,
        tolerance=tolerance,
        class_names=train.class_names,
        feature_dim=X.shape[1],
    )


def svm_predict(model: SvmModel, query: FeatureVector | np.ndarray) -> int:
    """Class index with the largest decision value; ties go to the lower index."""
    q = query.values if isinstance(query, FeatureVector) else np.asarray(query, dtype=np.float64)
    if q.shape != (model.feature_dim,):
        raise DataError(f"query has shape {q.shape}, expected ({model.feature_dim},)")
    values = model.decision_values(q[None, :])[0]
    return int(np.argmax(values))


def svm_predict_many(model: SvmModel, queries: FeatureMatrix | np.ndarray) -> np.ndarray:
    Q = queries.values if isinstance(queries, FeatureMatrix) else np.asarray(queries, dtype=np.float64)
    return np.argmax(model.decision_values(Q), axis=1).astype(np.int64)


def max_kkt_violation(
    model: SvmModel, machine: BinaryMachine, X: np.ndarray, labels: np.ndarray
) -> float:
    """Largest KKT breach of one machine over its training set.

    Decision values are recomputed from scratch (not from the trainer's error
    cache). For each point: alpha at the lower box edge requires
    y*f >= 1 - tol, at the upper edge y*f <= 1 + tol, and interior alphas
    require |y*f - 1| <= tol; the returned value is the worst breach beyond
    the model's tolerance, so <= 0 means the conditions hold.
    """
    if machine.alpha is None:
        raise DataError("machine carries no alphas (loaded model?); refit to check KKT")
    y = np.where(labels == machine.class_index, 1.0, -1.0)
    f = machine.decision(model.kernel, model.gamma, X)
    margin = y * f
    alpha = machine.alpha
    tol = model.tolerance
    lower = alpha <= _ALPHA_EDGE
    upper = alpha >= model.C - _ALPHA_EDGE
    interior = ~lower & ~upper
    breach = np.zeros_like(alpha)
    breach[lower] = (1.0 - tol) - margin[lower]
    breach[upper] = margin[upper] - (1.0 + tol)
    breach[interior] = np.abs(margin[interior] - 1.0) - tol
    return float(breach.max()) if len(breach) else 0.0
