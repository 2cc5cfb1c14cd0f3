"""Multi-label node classification on embeddings.

One-vs-rest logistic regression trained by full-batch gradient descent,
top-t prediction with each test node's true label count t, and
Micro/Macro-F1 over repeated random splits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass
class LabeledDataset:
    embedding: np.ndarray
    labels: list  # per-row sets of label ids
    n_labels: int

    def __post_init__(self):
        self.embedding = np.asarray(self.embedding, dtype=np.float64)
        if len(self.labels) != self.embedding.shape[0]:
            raise ValueError("need one label set per embedding row")
        used = set().union(*self.labels) if self.labels else set()
        if any(not 0 <= lab < self.n_labels for lab in used):
            raise ValueError("label ids must lie in [0, n_labels)")
        if len(used) < 2:
            raise ValueError("dataset needs at least 2 distinct labels")

    @classmethod
    def from_label_sets(cls, embedding, label_sets, keep_unlabeled: bool = False):
        """Map arbitrary label ids to ``0..L-1`` (sorted) and drop unlabeled rows."""
        label_sets = [set(s) for s in label_sets]
        ids = sorted(set().union(*label_sets))
        remap = {lab: i for i, lab in enumerate(ids)}
        rows = [i for i, s in enumerate(label_sets) if s or keep_unlabeled]
        emb = np.asarray(embedding)[rows]
        return cls(emb, [{remap[x] for x in label_sets[i]} for i in rows], len(ids)), np.asarray(rows)

    def indicator(self) -> np.ndarray:
        y = np.zeros((len(self.labels), self.n_labels), dtype=bool)
        for i, labs in enumerate(self.labels):
            y[i, list(labs)] = True
        return y


@dataclass
class OvrModel:
    weights: np.ndarray      # (k, L)
    bias: np.ndarray         # (L,)
    mean: np.ndarray         # feature standardisation
    scale: np.ndarray
    degenerate: np.ndarray   # labels fit as a constant prior
    loss_history: np.ndarray  # (epochs + 1, L)

    def decision(self, x: np.ndarray) -> np.ndarray:
        z = (np.asarray(x) - self.mean) / self.scale
        return z @ self.weights + self.bias


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def logistic_loss(w, b, x, y, l2):
    """Per-label mean log-loss plus ``l2 ||w||^2 / (2 n)``; returns ``(L,)``."""
    z = x @ w + b
    # log(1 + e^z) - y z, computed stably
    loss = np.logaddexp(0.0, z) - y * z
    return loss.mean(axis=0) + l2 * (w ** 2).sum(axis=0) / (2 * x.shape[0])


def logistic_grad(w, b, x, y, l2):
    n = x.shape[0]
    r = _sigmoid(x @ w + b) - y
    return x.T @ r / n + l2 * w / n, r.mean(axis=0)


def train_ova_logreg(ds: LabeledDataset, train_ids, l2: float = 1.0, epochs: int = 300,
                     lr: float | None = None) -> OvrModel:
    """Fit one binary classifier per label by full-batch gradient descent.

    Features are standardised with training statistics.  The default step
    is ``1 / L`` with ``L`` the smoothness constant of the objective, which
    makes the loss non-increasing.  Labels that are all-positive or
    all-negative in the training split get a bias-only prior model.
    """
    train_ids = np.asarray(train_ids)
    if train_ids.size == 0:
        raise ValueError("empty training set")
    x = ds.embedding[train_ids]
    if not np.all(np.isfinite(x)):
        raise ValueError("features must be finite")
    y = ds.indicator()[train_ids].astype(np.float64)
    n, k = x.shape
    mean = x.mean(axis=0)
    scale = x.std(axis=0)
    scale[scale == 0] = 1.0
    xs = (x - mean) / scale

    prev = y.mean(axis=0)
    degenerate = (prev == 0) | (prev == 1)
    if lr is None:
        # smoothness of mean log-loss in (w, b) plus the ridge term
        xb = np.hstack([xs, np.ones((n, 1))])
        lip = np.linalg.norm(xb, 2) ** 2 / (4 * n) + l2 / n
        lr = 1.0 / lip

    w = np.zeros((k, y.shape[1]))
    clipped = np.clip(prev, 1e-6, 1 - 1e-6)
    b = np.log(clipped / (1 - clipped))
    history = [logistic_loss(w, b, xs, y, l2)]
    active = ~degenerate
    for _ in range(epochs):
        gw, gb = logistic_grad(w[:, active], b[active], xs, y[:, active], l2)
        w[:, active] -= lr * gw
        b[active] -= lr * gb
        history.append(logistic_loss(w, b, xs, y, l2))
    return OvrModel(weights=w, bias=b, mean=mean, scale=scale, degenerate=degenerate,
                    loss_history=np.array(history))


def predict_topk(model: OvrModel, ds: LabeledDataset, node_ids, counts=None) -> list[set[int]]:
    """Predict, for each node, its ``t`` highest-scoring labels.

    ``t`` is the node's true label count unless ``counts`` is given.  Ties
    go to the lower label id.
    """
    node_ids = np.asarray(node_ids)
    scores = model.decision(ds.embedding[node_ids])
    if counts is None:
        counts = [len(ds.labels[i]) for i in node_ids]
    return topk_from_scores(scores, counts)


def topk_from_scores(scores: np.ndarray, counts) -> list[set[int]]:
    order = np.argsort(-scores, axis=1, kind="stable")
    return [set(order[i, :t].tolist()) for i, t in enumerate(counts)]


def f1_scores(predicted, truth, n_labels: int | None = None) -> tuple[float, float]:
    """Micro- and Macro-F1 of aligned lists of label sets.

    Macro averages over all ``n_labels`` labels; a label with no true and no
    predicted occurrences contributes 0.
    """
    if n_labels is None:
        n_labels = 1 + max((max(s) for s in list(predicted) + list(truth) if s), default=-1)
    tp = np.zeros(n_labels)
    fp = np.zeros(n_labels)
    fn = np.zeros(n_labels)
    for p, t in zip(predicted, truth):
        for lab in p:
            if lab in t:
                tp[lab] += 1
            else:
                fp[lab] += 1
        for lab in t:
            if lab not in p:
                fn[lab] += 1
    denom = 2 * tp.sum() + fp.sum() + fn.sum()
    micro = 2 * tp.sum() / denom if denom else 0.0
    per = np.divide(2 * tp, 2 * tp + fp + fn, out=np.zeros(n_labels), where=(2 * tp + fp + fn) > 0)
    macro = float(per.mean()) if n_labels else 0.0
    return float(micro), macro


def split(n: int, ratio: float, rng: np.random.Generator):
    """Uniform random split with ``floor(ratio n)`` training nodes and at least one test node."""
    if not 0.0 < ratio < 1.0:
        raise ValueError(f"training ratio must lie in (0, 1), got {ratio}")
    n_train = min(max(int(math.floor(ratio * n)), 1), n - 1)
    perm = rng.permutation(n)
    return np.sort(perm[:n_train]), np.sort(perm[n_train:])


def evaluate_split(ds: LabeledDataset, train, test, l2=1.0, epochs=300):
    model = train_ova_logreg(ds, train, l2=l2, epochs=epochs)
    pred = predict_topk(model, ds, test)
    return f1_scores(pred, [ds.labels[i] for i in test], ds.n_labels)


def run_protocol(ds: LabeledDataset, ratios=(0.1, 0.3, 0.5, 0.7, 0.9), trials: int = 5,
                 seed: int = 0, l2: float = 1.0, epochs: int = 300) -> list[dict]:
    """Mean and standard deviation of Micro/Macro-F1 per training ratio."""
    for ratio in ratios:
        if not 0.0 < ratio < 1.0:
            raise ValueError(f"training ratio must lie in (0, 1), got {ratio}")
    rows = []
    n = len(ds.labels)
    for ratio in ratios:
        rng = np.random.default_rng([seed, int(round(ratio * 1e6))])
        scores = np.array([evaluate_split(ds, *split(n, ratio, rng), l2=l2, epochs=epochs)
                           for _ in range(trials)])
        rows.append({
            "ratio": ratio,
            "micro_mean": float(scores[:, 0].mean()), "micro_std": float(scores[:, 0].std()),
            "macro_mean": float(scores[:, 1].mean()), "macro_std": float(scores[:, 1].std()),
            "micro": scores[:, 0].tolist(), "macro": scores[:, 1].tolist(),
        })
    return rows


def format_table(rows) -> str:
    lines = ["ratio\tmicro_mean\tmicro_std\tmacro_mean\tmacro_std"]
    for r in rows:
        lines.append(f"{r['ratio']:g}\t{r['micro_mean']:.6f}\t{r['micro_std']:.6f}\t"
                     f"{r['macro_mean']:.6f}\t{r['macro_std']:.6f}")
    return "\n".join(lines) + "\n"
