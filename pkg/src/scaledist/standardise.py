"""Per-variable standardisation for distance construction.

Two families:

* linear methods divide each column by a scale statistic (no location shift),
  optionally pooling the statistic within known classes;
* the boxplot transform centres each column at its median, scales the two
  halves so the quartiles land on -0.5 and +0.5, and compresses each tail
  nonlinearly so the most extreme training value lands on -2 or +2.  New data
  can then be mapped with the fitted parameters and capped to [-2, 2].

Dividing by a scale only (never shifting, except for the median centring the
boxplot transform needs) keeps all methods comparable: distances between rows
are unaffected by per-column location.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import _atomic_write, check_data_matrix, check_labels

__all__ = [
    "LINEAR_METHODS",
    "POOLED_METHODS",
    "METHODS",
    "quantile",
    "scale_statistic",
    "standardise_matrix",
    "solve_tail_exponent",
    "BoxplotParams",
    "fit_boxplot",
    "apply_boxplot",
    "Standardiser",
    "fit_standardiser",
]

POOLED_METHODS = (
    "pooled_variance",
    "pooled_mad_weights",
    "pooled_mad_shift",
    "pooled_range_weights",
    "pooled_range_shift",
)

LINEAR_METHODS = ("unit_variance", "mad", "range") + POOLED_METHODS

METHODS = ("none",) + LINEAR_METHODS + ("boxplot",)


def quantile(values, prob):
    """Quantile by linear interpolation of order statistics.

    With the sample sorted as v_1 <= ... <= v_n, the quantile at probability
    p interpolates between the order statistics bracketing position
    h = (n - 1) * p + 1.

    Parameters
    ----------
    values : array_like, 1-D, non-empty, finite
    prob : float in [0, 1]

    Returns
    -------
    float
    """
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError("values must be 1-D")
    if v.shape[0] == 0:
        raise ValueError("cannot take a quantile of an empty sample")
    if not np.all(np.isfinite(v)):
        raise ValueError("values must be finite")
    if not 0.0 <= prob <= 1.0:
        raise ValueError("prob must be in [0, 1], got %r" % (prob,))
    return float(np.quantile(v, prob, method="linear"))


def _mad(v):
    # median absolute deviation from the median, no consistency factor
    med = quantile(v, 0.5)
    return quantile(np.abs(v - med), 0.5)


def scale_statistic(column, method, labels=None):
    """Scale statistic of one variable under a named method.

    Methods
    -------
    none
        Always 1.0.
    unit_variance
        Sample standard deviation (denominator n - 1).
    mad
        Median absolute deviation from the median (no consistency factor).
    range
        max - min.
    pooled_variance
        Square root of the variance pooled within classes,
        sum_l (n_l - 1) s_l^2 / sum_l (n_l - 1); every class needs >= 2 members.
    pooled_mad_weights / pooled_range_weights
        Class-size weighted mean of the per-class statistic, (1/n) sum_l n_l stat_l.
    pooled_mad_shift
        Median absolute deviation from the own-class median, pooled over all
        observations.
    pooled_range_shift
        Largest per-class range.

    Pooled methods require ``labels``.
    """
    col = np.asarray(column, dtype=np.float64)
    if col.ndim != 1:
        raise ValueError("column must be 1-D")
    if col.shape[0] < 2:
        raise ValueError("need at least 2 observations, got %d" % col.shape[0])
    if not np.all(np.isfinite(col)):
        raise ValueError("column must be finite")
    if method == "none":
        return 1.0
    if method == "unit_variance":
        return float(np.std(col, ddof=1))
    if method == "mad":
        return _mad(col)
    if method == "range":
        return float(col.max() - col.min())
    if method not in POOLED_METHODS:
        raise ValueError("unknown scale method %r" % (method,))
    if labels is None:
        raise ValueError("method %r requires class labels" % (method,))
    y, k = check_labels(labels, n_expected=col.shape[0])
    groups = [col[y == c] for c in range(1, k + 1)]
    if method == "pooled_variance":
        for c, g in enumerate(groups, start=1):
            if g.shape[0] < 2:
                raise ValueError("class %d has fewer than 2 members" % c)
        dof = np.array([g.shape[0] - 1 for g in groups], dtype=np.float64)
        variances = np.array([np.var(g, ddof=1) for g in groups])
        return float(np.sqrt(np.sum(dof * variances) / np.sum(dof)))
    n = col.shape[0]
    if method == "pooled_mad_weights":
        return float(sum(g.shape[0] * _mad(g) for g in groups) / n)
    if method == "pooled_range_weights":
        return float(sum(g.shape[0] * (g.max() - g.min()) for g in groups) / n)
    if method == "pooled_mad_shift":
        centred = np.concatenate([np.abs(g - quantile(g, 0.5)) for g in groups])
        return quantile(centred, 0.5)
    # pooled_range_shift
    return float(max(g.max() - g.min() for g in groups))


def standardise_matrix(X, method, labels=None):
    """Divide every column of X by its scale statistic.

    ``method="none"`` returns an unchanged copy.  Columns with zero scale are
    set entirely to zero and reported in a single warning.  The input is never
    modified.
    """
    return fit_standardiser(X, method, labels=labels).transform(X)


# --- boxplot transform -------------------------------------------------------

# The tail equation is solved against a target sitting one part in ~10^13
# inside the exact value 1.5, so that re-evaluating the fitted map in floating
# point keeps the training extreme strictly inside [-2, 2].
_TAIL_TARGET = 1.5 - 2.0 ** -44


def _tail_gain(base, t):
    """(1 - base**(-t)) / t with the t -> 0 limit log(base).

    Computed as -expm1(-t*log(base))/t, which stays accurate for tiny t where
    the direct form cancels catastrophically.  ``base`` and ``t`` may be
    scalars or broadcastable arrays; base must be >= 1.
    """
    base = np.asarray(base, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    zero = t == 0.0
    tsafe = np.where(zero, 1.0, t)
    with np.errstate(over="ignore"):
        out = -np.expm1(-tsafe * np.log(base)) / tsafe
    return np.where(zero, np.log(base), out)


def solve_tail_exponent(M):
    """Exponent t of the tail map for a variable whose extreme sits at M.

    Solves (1 - M**(-t)) / t = 1.5 (limit log(M) at t = 0) for the unique t;
    the left side is strictly decreasing in t, so an expanding bracket plus
    bisection converges.  M > 1 is required; when a value beyond the +-2 band
    exists, M > 2.5 by construction.  The returned exponent is taken from the
    inner side of the final bracket (biased ~5.7e-14 in the equation value) so
    that the fitted map, re-evaluated in floating point, cannot push the
    training extreme outside [-2, 2].
    """
    M = float(M)
    if not np.isfinite(M) or M <= 1.0:
        raise ValueError("tail extent M must be finite and > 1, got %r" % (M,))

    def g(t):
        return float(_tail_gain(M, t))

    target = _TAIL_TARGET
    g0 = g(0.0)
    if g0 == target:
        return 0.0
    if g0 > target:
        lo, hi = 0.0, 1.0  # g(1) = 1 - 1/M < 1 < target
    else:
        hi = 0.0
        lo = -1.0
        for _ in range(200):
            if g(lo) > target:
                break
            lo *= 2.0
        else:
            raise ValueError("could not bracket the tail exponent for M=%r" % (M,))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        gm = g(mid)
        if gm == target:
            return mid
        if gm > target:
            lo = mid
        else:
            hi = mid
    return hi


@dataclass(frozen=True)
class BoxplotParams:
    """Fitted per-variable parameters of the boxplot transform.

    All fields are arrays of length n_vars.  ``lqr``/``uqr`` are the effective
    half-ranges used for scaling (a zero half substitutes the other side; both
    zero marks the variable degenerate and its values are unused).  Tail
    exponents are NaN where the training data had no value beyond the +-2
    band.  ``scaled_min``/``scaled_max`` record the training extremes on the
    scaled axis, before tail compression.
    """

    median: np.ndarray = field(repr=False)
    lqr: np.ndarray = field(repr=False)
    uqr: np.ndarray = field(repr=False)
    t_lower: np.ndarray = field(repr=False)
    t_upper: np.ndarray = field(repr=False)
    degenerate: np.ndarray = field(repr=False)
    scaled_min: np.ndarray = field(repr=False)
    scaled_max: np.ndarray = field(repr=False)

    def __post_init__(self):
        arrays = {}
        for name in ("median", "lqr", "uqr", "t_lower", "t_upper", "scaled_min", "scaled_max"):
            arrays[name] = np.asarray(getattr(self, name), dtype=np.float64)
        arrays["degenerate"] = np.asarray(self.degenerate, dtype=bool)
        p = arrays["median"].shape[0] if arrays["median"].ndim == 1 else -1
        for name, arr in arrays.items():
            if arr.ndim != 1 or arr.shape[0] != p:
                raise ValueError("parameter arrays must be 1-D with equal length")
            object.__setattr__(self, name, arr)

    @property
    def n_vars(self):
        return self.median.shape[0]

    def to_json_dict(self):
        def opt(x):
            return None if np.isnan(x) else float(x)

        variables = []
        for j in range(self.n_vars):
            variables.append(
                {
                    "median": float(self.median[j]),
                    "lqr": float(self.lqr[j]),
                    "uqr": float(self.uqr[j]),
                    "t_lower": opt(self.t_lower[j]),
                    "t_upper": opt(self.t_upper[j]),
                    "degenerate": bool(self.degenerate[j]),
                    "scaled_min": float(self.scaled_min[j]),
                    "scaled_max": float(self.scaled_max[j]),
                }
            )
        return {"variables": variables}

    @classmethod
    def from_json_dict(cls, data):
        try:
            variables = data["variables"]
        except (TypeError, KeyError):
            raise ValueError("expected a JSON object with key 'variables'") from None
        if not variables:
            raise ValueError("no variables in parameter file")

        def arr(key, default=None):
            out = []
            for v in variables:
                val = v[key] if default is None else v.get(key, default)
                out.append(np.nan if val is None else val)
            return np.array(out, dtype=np.float64)

        return cls(
            median=arr("median"),
            lqr=arr("lqr"),
            uqr=arr("uqr"),
            t_lower=arr("t_lower"),
            t_upper=arr("t_upper"),
            degenerate=np.array([bool(v["degenerate"]) for v in variables]),
            scaled_min=arr("scaled_min"),
            scaled_max=arr("scaled_max"),
        )


def _scale_about_median(X, median, lqr, uqr):
    # centre on the median, divide the lower half by 2*LQR and the upper by
    # 2*UQR; exact zeros stay zero so the median maps to 0 exactly
    xm = X - median[None, :]
    with np.errstate(invalid="ignore"):
        lower = xm / (2.0 * lqr[None, :])
        upper = xm / (2.0 * uqr[None, :])
    return np.where(xm < 0.0, lower, np.where(xm > 0.0, upper, 0.0))


def fit_boxplot(X):
    """Fit the boxplot transform on training data, one variable at a time.

    Returns a :class:`BoxplotParams`.  A tail exponent is fitted only where a
    scaled training value falls strictly outside [-2, 2].
    """
    X = check_data_matrix(X, min_rows=2)
    q1, med, q3 = np.quantile(X, [0.25, 0.5, 0.75], axis=0, method="linear")
    lqr_raw = med - q1
    uqr_raw = q3 - med
    degenerate = (lqr_raw == 0.0) & (uqr_raw == 0.0)
    lqr = np.where(lqr_raw > 0.0, lqr_raw, uqr_raw)
    uqr = np.where(uqr_raw > 0.0, uqr_raw, lqr_raw)
    lqr = np.where(degenerate, 1.0, lqr)
    uqr = np.where(degenerate, 1.0, uqr)
    scaled = _scale_about_median(X, med, lqr, uqr)
    scaled[:, degenerate] = 0.0
    smin = scaled.min(axis=0)
    smax = scaled.max(axis=0)
    p = X.shape[1]
    t_lower = np.full(p, np.nan)
    t_upper = np.full(p, np.nan)
    for j in np.flatnonzero(smin < -2.0):
        t_lower[j] = solve_tail_exponent(0.5 - smin[j])
    for j in np.flatnonzero(smax > 2.0):
        t_upper[j] = solve_tail_exponent(smax[j] + 0.5)
    return BoxplotParams(
        median=med,
        lqr=lqr,
        uqr=uqr,
        t_lower=t_lower,
        t_upper=t_upper,
        degenerate=degenerate,
        scaled_min=smin,
        scaled_max=smax,
    )


def apply_boxplot(X, params, cap=False):
    """Apply a fitted boxplot transform to data with the same variables.

    The fitted median maps to 0 and the fitted quartiles to -0.5/+0.5.  Where
    a tail exponent was fitted, values beyond the matching quartile are
    compressed so the training extreme lands on -2/+2; the compression is
    continuous with slope 1 at the quartile anchors and strictly increasing
    everywhere.  Degenerate variables map to all zeros.

    With ``cap=True`` (intended for data the transform was not fitted on) the
    output is clipped to [-2, 2].
    """
    if not isinstance(params, BoxplotParams):
        raise TypeError("params must be BoxplotParams")
    X = check_data_matrix(X)
    if X.shape[1] != params.n_vars:
        raise ValueError(
            "matrix has %d variables, parameters describe %d" % (X.shape[1], params.n_vars)
        )
    scaled = _scale_about_median(X, params.median, params.lqr, params.uqr)
    out = scaled.copy()
    t_low = np.broadcast_to(params.t_lower[None, :], scaled.shape)
    lower = (scaled < -0.5) & ~np.isnan(t_low)
    if lower.any():
        out[lower] = -0.5 - _tail_gain(0.5 - scaled[lower], t_low[lower])
    t_up = np.broadcast_to(params.t_upper[None, :], scaled.shape)
    upper = (scaled > 0.5) & ~np.isnan(t_up)
    if upper.any():
        out[upper] = 0.5 + _tail_gain(scaled[upper] + 0.5, t_up[upper])
    out[:, params.degenerate] = 0.0
    if cap:
        np.clip(out, -2.0, 2.0, out=out)
    return out


# --- fitted standardiser for train/test pipelines ----------------------------


class Standardiser:
    """A fitted standardisation, applicable to training and later test data.

    Linear methods store the per-column scales fitted on training data; the
    boxplot method stores its :class:`BoxplotParams`.  ``transform`` never
    looks at anything but the stored parameters, so test data cannot leak
    into the fit.
    """

    def __init__(self, method, scales=None, boxplot=None):
        if method not in METHODS:
            raise ValueError("unknown standardisation method %r" % (method,))
        self.method = method
        self.scales = None if scales is None else np.asarray(scales, dtype=np.float64)
        self.boxplot = boxplot
        if method == "boxplot":
            if boxplot is None:
                raise ValueError("boxplot method needs fitted parameters")
        elif self.scales is None:
            raise ValueError("method %r needs fitted scales" % (method,))

    @property
    def n_vars(self):
        if self.method == "boxplot":
            return self.boxplot.n_vars
        return self.scales.shape[0]

    def transform(self, X, cap=False):
        """Standardise X with the fitted parameters.

        ``cap`` only affects the boxplot method, where it clips the output to
        [-2, 2]; linear scaling is unbounded by construction.
        """
        if self.method == "boxplot":
            return apply_boxplot(X, self.boxplot, cap=cap)
        X = check_data_matrix(X)
        if X.shape[1] != self.scales.shape[0]:
            raise ValueError(
                "matrix has %d variables, fit had %d" % (X.shape[1], self.scales.shape[0])
            )
        zero = self.scales == 0.0
        out = X / np.where(zero, 1.0, self.scales)[None, :]
        out[:, zero] = 0.0
        return out

    def to_json_dict(self):
        if self.method == "boxplot":
            return {"method": self.method, **self.boxplot.to_json_dict()}
        return {"method": self.method, "scales": [float(s) for s in self.scales]}

    @classmethod
    def from_json_dict(cls, data):
        try:
            method = data["method"]
        except (TypeError, KeyError):
            raise ValueError("expected a JSON object with key 'method'") from None
        if method == "boxplot":
            return cls(method, boxplot=BoxplotParams.from_json_dict(data))
        if "scales" not in data:
            raise ValueError("parameter file for %r lacks 'scales'" % (method,))
        return cls(method, scales=np.array(data["scales"], dtype=np.float64))

    def save(self, path):
        _atomic_write(path, json.dumps(self.to_json_dict(), indent=1) + "\n")

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))


def fit_standardiser(X, method, labels=None):
    """Fit a :class:`Standardiser` on training data.

    For linear methods this computes the per-column scale statistics (columns
    with zero scale are reported in one warning and will map to zero); for
    ``boxplot`` it fits the full transform.  ``none`` scales by 1.
    """
    X = check_data_matrix(X, min_rows=2)
    if method == "boxplot":
        return Standardiser(method, boxplot=fit_boxplot(X))
    if method == "none":
        return Standardiser(method, scales=np.ones(X.shape[1]))
    if method in POOLED_METHODS and labels is None:
        raise ValueError("method %r requires class labels" % (method,))
    scales = np.array(
        [scale_statistic(X[:, j], method, labels=labels) for j in range(X.shape[1])]
    )
    zero = np.flatnonzero(scales == 0.0)
    if zero.size:
        warnings.warn(
            "zero %s scale in column(s) %s; output set to zero there"
            % (method, ", ".join(str(j + 1) for j in zero)),
            UserWarning,
            stacklevel=2,
        )
    return Standardiser(method, scales=scales)
