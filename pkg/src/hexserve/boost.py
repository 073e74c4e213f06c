"""Natural-gradient boosting of a log-normal service-time distribution.

The model predicts, per cell, the parameters (mu, log_sigma) of a normal
distribution over log service time.  Each boosting stage fits one regression
tree per parameter to the Fisher-preconditioned gradient of the negative
log-likelihood, line-searches a shared scaling along the combined update
direction, and applies the scaled step.  Everything is deterministic: no row
or column subsampling, exhaustive split search, fixed tie-breaking.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

HALF_LN_2PI = 0.5 * math.log(2.0 * math.pi)
LOG_SIGMA_FLOOR = math.log(1e-6)
# halving line-search grid, 1 down to 2**-10
LINE_SEARCH_GRID = tuple(0.5**k for k in range(11))


class ModelError(ValueError):
    """Invalid model input (non-positive targets, degenerate data, shapes)."""


@dataclass(frozen=True)
class DistParams:
    """Normal parameters of log service time; scale kept as log(sigma)."""

    mu: float
    log_sigma: float

    @property
    def sigma(self) -> float:
        return math.exp(self.log_sigma)

    def mean_seconds(self) -> float:
        """Mean of the implied log-normal in original (seconds) space."""
        return math.exp(self.mu + 0.5 * self.sigma**2)

    def median_seconds(self) -> float:
        return math.exp(self.mu)


@dataclass(frozen=True)
class FitConfig:
    n_stages: int = 500
    learning_rate: float = 0.01
    max_depth: int = 3
    min_samples_leaf: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.n_stages < 0:
            raise ModelError(f"n_stages must be >= 0, got {self.n_stages}")
        if self.learning_rate <= 0:
            raise ModelError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.max_depth <= 0 or self.min_samples_leaf <= 0:
            raise ModelError("max_depth and min_samples_leaf must be positive")


def nll(z: float, theta: DistParams) -> float:
    """Negative log-likelihood of a log-space observation under theta."""
    if not (math.isfinite(z) and math.isfinite(theta.mu) and math.isfinite(theta.log_sigma)):
        raise ModelError("nll requires finite inputs")
    resid = z - theta.mu
    return HALF_LN_2PI + theta.log_sigma + resid * resid / (2.0 * math.exp(2.0 * theta.log_sigma))


def gradient(z: float, theta: DistParams) -> tuple[float, float]:
    """Plain NLL gradient in (mu, log_sigma) coordinates."""
    sigma2 = math.exp(2.0 * theta.log_sigma)
    std2 = (z - theta.mu) ** 2 / sigma2
    return ((theta.mu - z) / sigma2, 1.0 - std2)


def natural_gradient(z: float, theta: DistParams) -> tuple[float, float]:
    """Fisher-preconditioned NLL gradient: diag(sigma^2, 1/2) times gradient."""
    std2 = (z - theta.mu) ** 2 / math.exp(2.0 * theta.log_sigma)
    return (theta.mu - z, (1.0 - std2) / 2.0)


# ---------------------------------------------------------------------------
# regression trees

@dataclass(frozen=True)
class TreeNode:
    """Internal split node or leaf; leaves have feature == -1."""

    feature: int
    threshold: float
    left: "TreeNode | None"
    right: "TreeNode | None"
    value: float
    gain: float = 0.0  # squared-error reduction of this split

    @property
    def is_leaf(self) -> bool:
        return self.feature < 0


@dataclass(frozen=True)
class RegressionTree:
    root: TreeNode
    max_depth: int

    def predict_one(self, x) -> float:
        node = self.root
        while not node.is_leaf:
            node = node.left if x[node.feature] < node.threshold else node.right
        return node.value

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(X.shape[0])
        self._fill(self.root, X, np.arange(X.shape[0]), out)
        return out

    def _fill(self, node: TreeNode, X, idx, out) -> None:
        if node.is_leaf:
            out[idx] = node.value
            return
        mask = X[idx, node.feature] < node.threshold
        self._fill(node.left, X, idx[mask], out)
        self._fill(node.right, X, idx[~mask], out)

    def split_gains(self):
        """Yield (feature, gain) for every split node."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            if not node.is_leaf:
                yield node.feature, node.gain
                stack.append(node.left)
                stack.append(node.right)


def _leaf(values_sum: float, n: int) -> TreeNode:
    return TreeNode(-1, 0.0, None, None, values_sum / n)


def _grow(X: np.ndarray, y: np.ndarray, idx: np.ndarray, depth: int, cfg: FitConfig) -> TreeNode:
    ysub = y[idx]
    n = idx.size
    total = float(ysub.sum())

    if depth >= cfg.max_depth or n < 2 * cfg.min_samples_leaf:
        return _leaf(total, n)
    if float(ysub.min()) == float(ysub.max()):
        return _leaf(total, n)  # zero variance; avoids float-noise splits

    # exhaustive least-squares split search; ties resolved toward the lowest
    # feature index, then the lowest threshold (first argmax of the gain scan)
    best_gain = 0.0
    best_feature = -1
    best_threshold = 0.0
    parent_term = total * total / n

    for f in range(X.shape[1]):
        xs = X[idx, f]
        order = np.argsort(xs, kind="stable")
        xsorted = xs[order]
        if xsorted[0] == xsorted[-1]:
            continue
        ysorted = ysub[order]

        left_sum = np.cumsum(ysorted)[:-1]
        nl = np.arange(1, n)
        valid = (xsorted[1:] != xsorted[:-1]) & (nl >= cfg.min_samples_leaf) & (
            n - nl >= cfg.min_samples_leaf
        )
        if not valid.any():
            continue

        score = np.where(
            valid,
            left_sum * left_sum / nl + (total - left_sum) ** 2 / (n - nl),
            -np.inf,
        )
        k = int(np.argmax(score))
        gain = float(score[k]) - parent_term
        if gain > best_gain:
            best_gain = gain
            best_feature = f
            best_threshold = (float(xsorted[k]) + float(xsorted[k + 1])) / 2.0

    if best_feature < 0:
        return _leaf(total, n)

    mask = X[idx, best_feature] < best_threshold
    left = _grow(X, y, idx[mask], depth + 1, cfg)
    right = _grow(X, y, idx[~mask], depth + 1, cfg)
    return TreeNode(best_feature, best_threshold, left, right, total / n, best_gain)


def fit_tree(X: np.ndarray, targets: np.ndarray, cfg: FitConfig) -> RegressionTree:
    """Greedy least-squares regression tree on the given targets.

    Deterministic for fixed inputs; the exhaustive candidate scan leaves no
    role for randomness.
    """
    X = np.asarray(X, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if X.ndim != 2 or targets.ndim != 1 or X.shape[0] != targets.size:
        raise ModelError("X must be 2-D with one target per row")
    if targets.size == 0:
        raise ModelError("cannot fit a tree on an empty dataset")
    root = _grow(X, targets, np.arange(targets.size), 0, cfg)
    return RegressionTree(root, cfg.max_depth)


# ---------------------------------------------------------------------------
# boosting

@dataclass(frozen=True)
class BoostStage:
    scaling: float
    tree_mu: RegressionTree
    tree_logsigma: RegressionTree


@dataclass
class BoostModel:
    init: DistParams
    stages: list[BoostStage]
    learning_rate: float
    feature_names: tuple[str, ...]
    # per-stage mean training NLL, entry 0 is the marginal fit; not serialized
    train_nll: list[float] = field(default_factory=list, compare=False, repr=False)

    def predict_params(self, x) -> DistParams:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (len(self.feature_names),):
            raise ModelError(
                f"feature vector has {x.shape} entries, model expects {len(self.feature_names)}"
            )
        mu = self.init.mu
        s = self.init.log_sigma
        for stage in self.stages:
            step = self.learning_rate * stage.scaling
            mu -= step * stage.tree_mu.predict_one(x)
            s -= step * stage.tree_logsigma.predict_one(x)
        return DistParams(mu, s)

    def predict_batch(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != len(self.feature_names):
            raise ModelError("feature matrix width does not match the model")
        mu = np.full(X.shape[0], self.init.mu)
        s = np.full(X.shape[0], self.init.log_sigma)
        for stage in self.stages:
            step = self.learning_rate * stage.scaling
            mu -= step * stage.tree_mu.predict(X)
            s -= step * stage.tree_logsigma.predict(X)
        return mu, s


def _total_nll(z: np.ndarray, mu: np.ndarray, s: np.ndarray) -> float:
    return float(np.sum(HALF_LN_2PI + s + (z - mu) ** 2 / (2.0 * np.exp(2.0 * s))))


def marginal_init(z: np.ndarray) -> DistParams:
    """Gaussian MLE of the pooled log targets, with a floored scale."""
    sd = float(z.std())
    log_sigma = math.log(sd) if sd > 0.0 else -math.inf
    return DistParams(float(z.mean()), max(log_sigma, LOG_SIGMA_FLOOR))


def fit(data, cfg: FitConfig) -> BoostModel:
    """Fit the boosted distribution model to a cell dataset.

    `data` provides X (cells x features), y (mean service seconds, > 0) and
    feature_names.  Training NLL is non-increasing across stages: each stage
    applies the best scaling on a halving grid, falling back to the smallest
    grid point when no candidate improves.
    """
    X = np.asarray(data.X, dtype=np.float64)
    y = np.asarray(data.y, dtype=np.float64)
    if y.size == 0:
        raise ModelError("empty dataset")
    if y.size == 1:
        raise ModelError("cannot estimate a spread from a single cell")
    if np.any(y <= 0) or not np.all(np.isfinite(y)):
        raise ModelError("all target service times must be positive and finite")

    z = np.log(y)
    init = marginal_init(z)
    mu = np.full(y.size, init.mu)
    s = np.full(y.size, init.log_sigma)

    stages: list[BoostStage] = []
    nll_path = [_total_nll(z, mu, s) / y.size]

    for _ in range(cfg.n_stages):
        sigma = np.exp(s)
        std2 = ((z - mu) / sigma) ** 2
        g_mu = mu - z
        g_s = (1.0 - std2) / 2.0

        tree_mu = fit_tree(X, g_mu, cfg)
        tree_s = fit_tree(X, g_s, cfg)
        t_mu = tree_mu.predict(X)
        t_s = tree_s.predict(X)

        current = _total_nll(z, mu, s)
        best_rho = None
        best_nll = math.inf
        for rho in LINE_SEARCH_GRID:
            step = cfg.learning_rate * rho
            cand = _total_nll(z, mu - step * t_mu, s - step * t_s)
            if cand < best_nll:
                best_nll = cand
                best_rho = rho
        if best_nll >= current:
            best_rho = LINE_SEARCH_GRID[-1]

        step = cfg.learning_rate * best_rho
        mu = mu - step * t_mu
        s = s - step * t_s
        stages.append(BoostStage(best_rho, tree_mu, tree_s))
        nll_path.append(_total_nll(z, mu, s) / y.size)

    return BoostModel(init, stages, cfg.learning_rate, tuple(data.feature_names), nll_path)


def predict(model: BoostModel, x) -> DistParams:
    return model.predict_params(x)


def feature_importance(model: BoostModel) -> list[tuple[str, float]]:
    """Features ranked by their share of total split gain across all trees."""
    gains = np.zeros(len(model.feature_names))
    for stage in model.stages:
        for tree in (stage.tree_mu, stage.tree_logsigma):
            for feature, gain in tree.split_gains():
                gains[feature] += gain
    total = float(gains.sum())
    if total <= 0.0:
        return []
    ranked = [
        (name, float(g) / total) for name, g in zip(model.feature_names, gains) if g > 0.0
    ]
    ranked.sort(key=lambda item: (-item[1], item[0]))
    return ranked


# ---------------------------------------------------------------------------
# serialization

def _node_to_obj(node: TreeNode):
    if node.is_leaf:
        return {"leaf": node.value}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "gain": node.gain,
        "left": _node_to_obj(node.left),
        "right": _node_to_obj(node.right),
    }


def _node_from_obj(obj) -> TreeNode:
    if "leaf" in obj:
        return TreeNode(-1, 0.0, None, None, float(obj["leaf"]))
    return TreeNode(
        int(obj["feature"]),
        float(obj["threshold"]),
        _node_from_obj(obj["left"]),
        _node_from_obj(obj["right"]),
        0.0,
        float(obj.get("gain", 0.0)),
    )


def _node_depth(node: TreeNode) -> int:
    if node.is_leaf:
        return 0
    return 1 + max(_node_depth(node.left), _node_depth(node.right))


def model_to_json(model: BoostModel) -> str:
    doc = {
        "init": {"mu": model.init.mu, "log_sigma": model.init.log_sigma},
        "learning_rate": model.learning_rate,
        "feature_names": list(model.feature_names),
        "stages": [
            {
                "scaling": st.scaling,
                "tree_mu": _node_to_obj(st.tree_mu.root),
                "tree_logsigma": _node_to_obj(st.tree_logsigma.root),
            }
            for st in model.stages
        ],
    }
    return json.dumps(doc, indent=None, separators=(",", ":"))


def model_from_json(text: str) -> BoostModel:
    try:
        doc = json.loads(text)
        init = DistParams(float(doc["init"]["mu"]), float(doc["init"]["log_sigma"]))
        stages = []
        for st in doc["stages"]:
            roots = [_node_from_obj(st["tree_mu"]), _node_from_obj(st["tree_logsigma"])]
            stages.append(
                BoostStage(
                    float(st["scaling"]),
                    RegressionTree(roots[0], _node_depth(roots[0])),
                    RegressionTree(roots[1], _node_depth(roots[1])),
                )
            )
        return BoostModel(
            init, stages, float(doc["learning_rate"]), tuple(doc["feature_names"])
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"malformed model document: {exc}") from None
