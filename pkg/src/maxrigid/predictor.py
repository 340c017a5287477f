"""Best linear prediction of a linear statistic from observation functionals.

With ``<h, h'>_S = Cov(M(h), M(h'))`` the predictor ``sum_i w_i M(h_i)``
of ``M(f)`` minimizing the mean-squared error solves the normal equations
``sum_i <h_i, h_j> w_i = <f, h_j>``; the minimum is
``Var(M(f)) - sum_j conj(w_j) <f, h_j>``.
"""

from dataclasses import dataclass, field, asdict
import csv
import io
import json

import numpy as np
from scipy import linalg
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import MaxRigidError, SingularGram
from .functionals import Cell, PointMass
from .spectral import CovarianceKernel, SpectralMeasure, spectral_inner
from .design import BallRegion, ObservationDesign, grid_design

__all__ = [
    "gram_inner_product",
    "gram_matrix",
    "cross_covariances",
    "PredictionResult",
    "solve_predictor",
    "BestLinearPredictor",
    "SweepTable",
    "interpolation_error_sweep",
    "classify_trend",
]

COND_LIMIT = 1e14
AUTO_RIDGE = 1e-10


def gram_inner_product(h, h2, S, quadrature=None):
    """``<h, h'>_S = (2 pi)^(-d) int h^ conj(h'^) dS``."""
    return spectral_inner(h, h2, S, quadrature)


def _all_cells_1d(fs):
    return all(isinstance(f, Cell) and f.d == 1 for f in fs)


def _kernel_block(rows, cols, kernel):
    if kernel.cell_cov is not None and _all_cells_1d(rows) and _all_cells_1d(cols):
        a = np.array([f.corner[0] for f in rows])[:, None]
        h = np.array([f.side for f in rows])[:, None]
        b = np.array([f.corner[0] for f in cols])[None, :]
        k = np.array([f.side for f in cols])[None, :]
        return np.asarray(kernel.cell_cov(a, h, b, k), dtype=float)
    if all(isinstance(f, PointMass) for f in list(rows) + list(cols)):
        x = np.array([f.x for f in rows])
        y = np.array([f.x for f in cols])
        diff = (x[:, None, :] - y[None, :, :]).reshape(-1, kernel.domain.d)
        return kernel(diff).reshape(len(rows), len(cols))
    raise MaxRigidError("the kernel route handles 1-D cells or point masses only")


def _atomic_block(rows, cols, S):
    loc = S.atom_locations
    Fr = np.array([f.fourier(loc) for f in rows])
    Fc = np.array([f.fourier(loc) for f in cols])
    return (Fr * S.atom_weights) @ Fc.conj().T / (2 * np.pi) ** S.d


def _block(rows, cols, source, quadrature):
    if isinstance(source, CovarianceKernel):
        return _kernel_block(rows, cols, source)
    if source.is_atomic:
        return _atomic_block(rows, cols, source)
    out = np.empty((len(rows), len(cols)), dtype=complex)
    for i, f in enumerate(rows):
        for j, g in enumerate(cols):
            out[i, j] = spectral_inner(f, g, source, quadrature)
    return out


def gram_matrix(functionals, source, quadrature=None):
    """Matrix ``G_ij = <h_i, h_j>`` from a spectral measure or a covariance kernel.

    Closed-form kernels are used for 1-D cells, atomic measures give an
    exact atom sum, and densities fall back to pairwise quadrature.
    """
    fs = list(functionals)
    if isinstance(source, SpectralMeasure) and not source.is_atomic:
        n = len(fs)
        G = np.empty((n, n), dtype=complex)
        for i in range(n):
            for j in range(i, n):
                G[i, j] = spectral_inner(fs[i], fs[j], source, quadrature)
                G[j, i] = np.conj(G[i, j])
        return _realify(G)
    G = _block(fs, fs, source, quadrature)
    G = 0.5 * (G + np.conj(G.T))
    return _realify(G)


def cross_covariances(target, functionals, source, quadrature=None):
    """Vector ``b_j = <target, h_j>``."""
    return _realify(_block([target], list(functionals), source, quadrature)[0])


def _realify(a):
    a = np.asarray(a)
    if np.iscomplexobj(a) and np.all(np.abs(a.imag) <= 1e-14 * max(1.0, np.abs(a.real).max(initial=0.0))):
        return a.real.copy()
    return a


@dataclass
class PredictionResult:
    """Solved predictor with its diagnostics.

    Attributes
    ----------
    weights : ndarray
        Coefficients ``w_i`` aligned with the design.
    mse : float
        Achieved mean-squared error, clipped at 0.
    target_variance : float
    gram_condition : float
        Ratio of extreme eigenvalues of the unregularized Gram matrix.
    regularization : float
        Ridge added to the diagonal.
    rhs : ndarray
        Cross covariances ``<target, h_j>``.
    raw_mse : float
        Unclipped error from the quadratic form.
    """

    weights: np.ndarray
    mse: float
    target_variance: float
    gram_condition: float
    regularization: float
    rhs: np.ndarray = field(repr=False)
    raw_mse: float = 0.0

    @property
    def relative_mse(self):
        return self.mse / self.target_variance if self.target_variance > 0 else 0.0

    def to_dict(self):
        w = np.asarray(self.weights)
        return {
            "weights_real": w.real.tolist(),
            "weights_imag": w.imag.tolist() if np.iscomplexobj(w) else [0.0] * len(w),
            "mse": self.mse,
            "target_variance": self.target_variance,
            "gram_condition": self.gram_condition,
            "regularization": self.regularization,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def _condition(G):
    if G.shape[0] == 0:
        return 1.0
    ev = np.linalg.eigvalsh(G)
    top = ev[-1]
    if top <= 0:
        return np.inf
    return float(top / ev[0]) if ev[0] > 0 else np.inf


def _solve(G, b, reg):
    A = G + reg * np.eye(len(G))
    # G is Hermitian, so conj(G) w = b is the normal system
    A = np.conj(A)
    try:
        return linalg.solve(A, b, assume_a="pos" if not np.iscomplexobj(A) else "her")
    except (linalg.LinAlgError, ValueError):
        return linalg.lstsq(A, b)[0]


def solve_with_gram(G, b, var, reg="auto"):
    """Solve the normal equations given ``G``, ``b`` and ``Var(target)``."""
    n = len(b)
    cond = _condition(G)
    if reg == "auto":
        reg = AUTO_RIDGE * float(np.real(np.trace(G))) / max(n, 1)
    reg = float(reg)
    if reg == 0.0 and cond > COND_LIMIT:
        raise SingularGram(f"Gram condition {cond:.3e} exceeds {COND_LIMIT:.0e}; supply a ridge")
    if n == 0:
        return PredictionResult(np.zeros(0), max(var, 0.0), var, 1.0, reg, b, var)
    w = _solve(G, b, reg)
    quad = np.real(w @ G @ np.conj(w))
    raw = float(var - 2 * np.real(np.vdot(w, b)) + quad)
    return PredictionResult(w, max(raw, 0.0), float(var), cond, reg, b, raw)


def solve_predictor(target, design, source, reg="auto", quadrature=None):
    """Best linear predictor of ``M(target)`` from the design functionals.

    Parameters
    ----------
    target : LinearFunctional
    design : ObservationDesign or sequence of LinearFunctional
    source : SpectralMeasure or CovarianceKernel
        Second-order structure; kernels with closed-form cell covariances
        skip spectral quadrature.
    reg : float or "auto"
        Ridge added to the Gram diagonal; "auto" uses
        ``1e-10 * trace(G) / n``.
    quadrature : QuadratureSpec, optional

    Returns
    -------
    PredictionResult

    Raises
    ------
    SingularGram
        When ``reg = 0`` and the Gram condition exceeds ``1e14``.
    """
    fs = list(design.functionals if isinstance(design, ObservationDesign) else design)
    G = gram_matrix(fs, source, quadrature)
    b = cross_covariances(target, fs, source, quadrature)
    var = float(np.real(_block([target], [target], source, quadrature)[0, 0]))
    return solve_with_gram(G, b, var, reg)


class BestLinearPredictor(RegressorMixin, BaseEstimator):
    """Estimator wrapper: fit on a design, predict the target from observed values.

    Parameters
    ----------
    target : LinearFunctional
        Statistic to reconstruct.
    source : SpectralMeasure or CovarianceKernel
        Second-order model.
    reg : float or "auto"
    quadrature : QuadratureSpec, optional

    Attributes
    ----------
    coef_ : ndarray
        Predictor weights.
    result_ : PredictionResult
    n_features_in_ : int
        Number of observation functionals.
    """

    def __init__(self, target=None, source=None, reg="auto", quadrature=None):
        self.target = target
        self.source = source
        self.reg = reg
        self.quadrature = quadrature

    def fit(self, X, y=None):
        """Solve the predictor for the design ``X`` (functionals); ``y`` is ignored."""
        if self.target is None or self.source is None:
            raise ValueError("target and source must be set before fitting")
        self.result_ = solve_predictor(self.target, X, self.source, self.reg, self.quadrature)
        self.coef_ = self.result_.weights
        self.n_features_in_ = len(self.coef_)
        return self

    def predict(self, X):
        """Predicted target values from observed statistics, shape (n_samples, n_obs)."""
        check_is_fitted(self, "coef_")
        X = np.atleast_2d(np.asarray(X))
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} observations per sample, got {X.shape[1]}")
        return X @ np.conj(self.coef_)

    @property
    def mse_(self):
        check_is_fitted(self, "result_")
        return self.result_.mse


# ------------------------------------------------------------------- sweeps

VANISH_RATIO = 0.1
PLATEAU_CHANGE = 0.01


def classify_trend(mses):
    """``"vanishing"``, ``"plateau"`` or ``"undetermined"`` for a refinement sequence.

    Vanishing: last value below ``0.1`` times the first and the sequence
    nonincreasing. Plateau: the last refinement changes the value by less
    than 1%.
    """
    m = np.asarray(mses, dtype=float)
    if len(m) < 2 or not np.all(np.isfinite(m)):
        return "undetermined"
    if m[-1] < VANISH_RATIO * m[0] and np.all(np.diff(m) <= 1e-15 * max(m[0], 1e-300)):
        return "vanishing"
    if abs(m[-1] - m[-2]) <= PLATEAU_CHANGE * max(abs(m[-2]), 1e-300):
        return "plateau"
    return "undetermined"


@dataclass
class SweepTable:
    rows: list
    trends: dict
    thresholds: dict = field(default_factory=lambda: {"vanish_ratio": VANISH_RATIO, "plateau_change": PLATEAU_CHANGE})

    columns = ("rho", "h", "R", "mse", "target_var", "cond", "reg")

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([repr(float(r[c])) if r[c] is not None else "nan" for c in self.columns])
        return buf.getvalue()


def interpolation_error_sweep(source, rho_list, schedule, target, reg="auto", quadrature=None, d=1):
    """Prediction error of ``target`` from cells outside ``B(0, rho)``.

    Parameters
    ----------
    source : SpectralMeasure or CovarianceKernel
    rho_list : sequence of float
        Exclusion radii.
    schedule : sequence of (h, R)
        Refining designs, ``h`` decreasing and ``R`` increasing.
    target : LinearFunctional or callable
        The statistic, or ``rho -> functional``.
    reg, quadrature
        Passed to :func:`solve_predictor`.

    Returns
    -------
    SweepTable
        One row per (rho, h, R); failed cells carry ``mse = nan``.
    """
    sched = list(schedule)
    hs = [h for h, _ in sched]
    Rs = [R for _, R in sched]
    if any(b >= a for a, b in zip(hs, hs[1:])) or any(b < a for a, b in zip(Rs, Rs[1:])):
        raise ValueError("schedule must refine: h strictly decreasing and R nondecreasing")
    rows, trends = [], {}
    for rho in rho_list:
        tgt = target(rho) if callable(target) else target
        mses = []
        for h, R in sched:
            row = {"rho": rho, "h": h, "R": R, "mse": np.nan, "target_var": np.nan, "cond": np.nan, "reg": np.nan}
            try:
                design = grid_design(BallRegion(rho), h, R, d=d)
                res = solve_predictor(tgt, design, source, reg, quadrature)
                row.update(mse=res.mse, target_var=res.target_variance, cond=res.gram_condition, reg=res.regularization)
            except MaxRigidError as exc:
                row["error"] = str(exc)
            rows.append(row)
            mses.append(row["mse"])
        trends[rho] = classify_trend(mses)
    return SweepTable(rows, trends)
