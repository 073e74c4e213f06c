"""Cross-validation harness, regression metrics, and the two-sample t-test."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import boost

HALF_LN_2PI = boost.HALF_LN_2PI


class MetricError(ValueError):
    """Undefined metric or degenerate test input."""


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignments: tuple[int, ...]  # row index -> fold index

    def fold_rows(self, fold: int) -> list[int]:
        return [i for i, f in enumerate(self.assignments) if f == fold]


@dataclass(frozen=True)
class FoldScore:
    nll: float            # mean per-example NLL of log service time
    r2: float             # log-space R^2 against predicted mu
    nll_seconds: float    # same likelihood expressed in seconds space
    r2_seconds: float     # original-space R^2 against the log-normal mean


@dataclass(frozen=True)
class CVReport:
    per_fold: tuple[FoldScore, ...]
    mean_nll: float
    sd_nll: float
    mean_r2: float
    sd_r2: float

    def to_json_obj(self) -> dict:
        return {
            "k": len(self.per_fold),
            "per_fold": [
                {
                    "nll_log_space": f.nll,
                    "r2_log_space": f.r2,
                    "nll_seconds_space": f.nll_seconds,
                    "r2_seconds_space": f.r2_seconds,
                }
                for f in self.per_fold
            ],
            "mean_nll_log_space": self.mean_nll,
            "sd_nll_log_space": self.sd_nll,
            "mean_r2_log_space": self.mean_r2,
            "sd_r2_log_space": self.sd_r2,
            "mean_nll_seconds_space": _mean(f.nll_seconds for f in self.per_fold),
            "mean_r2_seconds_space": _mean(f.r2_seconds for f in self.per_fold),
        }


@dataclass(frozen=True)
class TTestResult:
    t: float
    df: int
    p_two_sided: float
    n1: int
    n2: int
    mean1: float
    mean2: float

    def to_json_obj(self) -> dict:
        return {
            "t": self.t,
            "df": self.df,
            "p_two_sided": self.p_two_sided,
            "n1": self.n1,
            "n2": self.n2,
            "mean1": self.mean1,
            "mean2": self.mean2,
        }


def _mean(values) -> float:
    vals = list(values)
    return sum(vals) / len(vals)


def _population_sd(values) -> float:
    vals = list(values)
    m = _mean(vals)
    return math.sqrt(sum((v - m) ** 2 for v in vals) / len(vals))


def kfold_split(n: int, k: int, seed: int) -> FoldPlan:
    """Seeded uniform shuffle, then contiguous blocks of near-equal size."""
    if not 2 <= k <= n:
        raise MetricError(f"need 2 <= k <= n, got k={k}, n={n}")
    order = np.random.default_rng(seed).permutation(n)
    assignments = [0] * n
    base = n // k
    extra = n % k
    pos = 0
    for fold in range(k):
        size = base + (1 if fold < extra else 0)
        for i in range(pos, pos + size):
            assignments[order[i]] = fold
        pos += size
    return FoldPlan(k, tuple(assignments))


def r_squared(y_true, y_pred) -> float:
    """Coefficient of determination, 1 - SS_res / SS_tot."""
    yt = np.asarray(y_true, dtype=np.float64)
    yp = np.asarray(y_pred, dtype=np.float64)
    if yt.shape != yp.shape or yt.ndim != 1 or yt.size < 2:
        raise MetricError("r_squared needs two equal-length vectors of size >= 2")
    ss_tot = float(np.sum((yt - yt.mean()) ** 2))
    if ss_tot == 0.0:
        raise MetricError("r_squared undefined for constant y_true")
    ss_res = float(np.sum((yt - yp) ** 2))
    return 1.0 - ss_res / ss_tot


@dataclass(frozen=True)
class _Subset:
    X: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...]


def cross_validate(data, cfg: boost.FitConfig, k: int, seed: int) -> CVReport:
    """K-fold evaluation: fit on the train rows, score the held-out rows."""
    X = np.asarray(data.X, dtype=np.float64)
    y = np.asarray(data.y, dtype=np.float64)
    n = y.size
    plan = kfold_split(n, k, seed)
    assignments = np.asarray(plan.assignments)

    scores = []
    for fold in range(k):
        test = assignments == fold
        train = ~test
        try:
            model = boost.fit(_Subset(X[train], y[train], tuple(data.feature_names)), cfg)
        except boost.ModelError as exc:
            raise boost.ModelError(f"fold {fold}: {exc}") from exc

        z = np.log(y[test])
        mu, s = model.predict_batch(X[test])
        per_example = HALF_LN_2PI + s + (z - mu) ** 2 / (2.0 * np.exp(2.0 * s))
        nll_log = float(per_example.mean())
        # seconds-space likelihood adds the log-normal Jacobian, i.e. mean(z)
        nll_seconds = nll_log + float(z.mean())
        if z.size >= 2 and z.min() != z.max():
            r2_log = r_squared(z, mu)
            r2_seconds = r_squared(y[test], np.exp(mu + 0.5 * np.exp(2.0 * s)))
        else:
            r2_log = math.nan  # undefined on single-row or constant folds
            r2_seconds = math.nan
        scores.append(FoldScore(nll_log, r2_log, nll_seconds, r2_seconds))

    return CVReport(
        per_fold=tuple(scores),
        mean_nll=_mean(f.nll for f in scores),
        sd_nll=_population_sd(f.nll for f in scores),
        mean_r2=_mean(f.r2 for f in scores),
        sd_r2=_population_sd(f.r2 for f in scores),
    )


# ---------------------------------------------------------------------------
# Student t machinery

_FPMIN = 1e-300
_BETACF_TOL = 1e-12


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, 600):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETACF_TOL:
            return h
    raise MetricError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def reg_inc_beta(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        a * math.log(x)
        + b * math.log1p(-x)
        + math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_sf2(t: float, df: int) -> float:
    """Two-sided tail probability P(|T| >= |t|) for Student's t."""
    if df < 1:
        raise MetricError(f"df must be >= 1, got {df}")
    if t == 0.0:
        return 1.0
    x = df / (df + t * t)
    return reg_inc_beta(x, df / 2.0, 0.5)


def t_test_pooled(a, b) -> TTestResult:
    """Two-sample pooled-variance Student t-test (two-sided).

    Inputs are expected already log-transformed by the caller when testing
    service times.
    """
    av = np.asarray(a, dtype=np.float64)
    bv = np.asarray(b, dtype=np.float64)
    n1, n2 = av.size, bv.size
    if n1 < 2 or n2 < 2:
        raise MetricError("each sample needs at least 2 observations")

    m1, m2 = float(av.mean()), float(bv.mean())
    ss1 = float(np.sum((av - m1) ** 2))
    ss2 = float(np.sum((bv - m2) ** 2))
    df = n1 + n2 - 2
    pooled_var = (ss1 + ss2) / df
    if pooled_var == 0.0:
        raise MetricError("degenerate test: pooled variance is zero")

    t = (m1 - m2) / math.sqrt(pooled_var * (1.0 / n1 + 1.0 / n2))
    return TTestResult(t, df, student_t_sf2(t, df), n1, n2, m1, m2)
