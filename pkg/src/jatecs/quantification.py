"""Prevalence estimation: a pool of six quantifiers over one classifier.

The pool pairs classify-and-count with its adjusted and threshold-policy
corrections, plus the probabilistic (score averaging) counterparts:

  CC    fraction of documents decided positive
  ACC   CC corrected by fold-estimated tpr/fpr
  MAX   ACC at the rate-curve threshold maximizing tpr - fpr
  PCC   mean logistic-scaled score
  PACC  PCC corrected by mean scaled scores on positives/negatives
  PMAX  MAX computed over the scaled scores

Correction rates are estimated from out-of-fold predictions on the training
set only; the test set is never consulted (quantify receives no labels).
The pool composition is a registry, so swapping members is trivial.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from .errors import ValidationError
from .experiments import SIMPLE, STRATIFIED, make_folds
from .index import Index, subset_index
from .learners import TrainedClassifier, train

log = logging.getLogger("jatecs")

QUANTIFIERS = ("CC", "ACC", "MAX", "PCC", "PACC", "PMAX")

DEFAULT_FOLDS = 50

_RATE_EPS = 1e-9


@dataclass(frozen=True)
class LogisticScaling:
    """Maps raw classifier scores into (0, 1) via 1 / (1 + exp(-slope * s))."""

    slope: float = 1.0

    def __post_init__(self):
        if self.slope <= 0:
            raise ValidationError("logistic slope must be > 0")


def scale_score(scaling: LogisticScaling, raw_score: float) -> float:
    x = scaling.slope * raw_score
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def _rate_curve(scores, labels):
    """(threshold, tpr, fpr) at every distinct score, descending threshold."""
    n_pos = sum(1 for y in labels if y)
    n_neg = len(labels) - n_pos
    curve = []
    for thr in sorted(set(scores), reverse=True):
        tp = sum(1 for s, y in zip(scores, labels) if y and s >= thr)
        fp = sum(1 for s, y in zip(scores, labels) if not y and s >= thr)
        curve.append((thr,
                      tp / n_pos if n_pos else 0.0,
                      fp / n_neg if n_neg else 0.0))
    return tuple(curve)


@dataclass(frozen=True)
class RatesEstimate:
    """Fold-estimated correction rates for one category."""

    tpr: float
    fpr: float
    tpr_p: float
    fpr_p: float
    curve: tuple         # over raw scores
    curve_scaled: tuple  # over logistic-scaled scores


@dataclass(frozen=True)
class PrevalenceEstimate:
    """per quantifier name -> {cID: estimated prevalence in [0, 1]}."""

    estimates: dict

    def of(self, quantifier: str, c_id: int) -> float:
        return self.estimates[quantifier][c_id]


@dataclass(frozen=True)
class QuantifierPool:
    classifier: TrainedClassifier
    scaling: LogisticScaling
    rates: dict  # cID -> RatesEstimate
    category_labels: tuple
    warnings: tuple = field(default_factory=tuple)


def learn_quantifiers(learner, train_index: Index, folds: int = DEFAULT_FOLDS,
                      scaling: LogisticScaling | None = None) -> QuantifierPool:
    """Estimate rates from out-of-fold predictions, then train on everything.

    Any classification learner plugs in.  `folds` is clamped to the training
    size; stratified folds are used unless some category has fewer than two
    positives, in which case simple folds are used and a warning is issued.
    """
    if scaling is None:
        scaling = LogisticScaling()
    if folds < 2:
        raise ValidationError("folds must be >= 2")
    n_docs = train_index.num_documents
    if n_docs < 2:
        raise ValidationError("need at least 2 training documents")
    folds = min(folds, n_docs)
    warnings = []
    mode = STRATIFIED
    thin = [train_index.categories.name(c)
            for c in range(train_index.num_categories)
            if len(train_index.category_documents(c)) < 2]
    if thin:
        mode = SIMPLE
        message = ("categories with fewer than 2 positives, falling back to "
                   f"simple folds: {', '.join(thin)}")
        warnings.append(message)
        log.warning("%s", message)
    plan = make_folds(train_index, folds, mode=mode, seed=0)

    n_cats = train_index.num_categories
    oof_scores = [[0.0] * n_docs for _ in range(n_cats)]
    oof_decisions = [[False] * n_docs for _ in range(n_cats)]
    for fold in range(plan.k):
        test_ids = plan.fold_documents(fold)
        train_ids = set(range(n_docs)) - set(test_ids)
        fold_classifier = train(learner, subset_index(train_index,
                                                      keep_docs=train_ids))
        fold_index = subset_index(train_index, keep_docs=set(test_ids))
        for local_d, d in enumerate(test_ids):
            scores = fold_classifier.score_document(fold_index, local_d)
            for c in range(n_cats):
                oof_scores[c][d] = scores[c]
                oof_decisions[c][d] = fold_classifier.decide(c, scores[c])

    rates = {}
    for c in range(n_cats):
        members = train_index.category_documents(c)
        labels = [d in members for d in range(n_docs)]
        n_pos = sum(labels)
        n_neg = n_docs - n_pos
        scaled = [scale_score(scaling, s) for s in oof_scores[c]]
        tpr = (sum(1 for d in range(n_docs) if labels[d] and oof_decisions[c][d])
               / n_pos if n_pos else 0.0)
        fpr = (sum(1 for d in range(n_docs) if not labels[d] and oof_decisions[c][d])
               / n_neg if n_neg else 0.0)
        tpr_p = (sum(s for s, y in zip(scaled, labels) if y) / n_pos
                 if n_pos else 0.0)
        fpr_p = (sum(s for s, y in zip(scaled, labels) if not y) / n_neg
                 if n_neg else 0.0)
        rates[c] = RatesEstimate(tpr=tpr, fpr=fpr, tpr_p=tpr_p, fpr_p=fpr_p,
                                 curve=_rate_curve(oof_scores[c], labels),
                                 curve_scaled=_rate_curve(scaled, labels))

    classifier = train(learner, train_index)
    warnings.extend(classifier.warnings)
    return QuantifierPool(classifier=classifier, scaling=scaling, rates=rates,
                          category_labels=train_index.categories.names,
                          warnings=tuple(warnings))


def _clip(p: float) -> float:
    return min(1.0, max(0.0, p))


def _corrected(observed: float, tpr: float, fpr: float) -> float:
    if abs(tpr - fpr) < _RATE_EPS:
        return _clip(observed)
    return _clip((observed - fpr) / (tpr - fpr))


def _best_threshold(curve) -> tuple:
    """Curve point maximizing tpr - fpr; ties keep the highest threshold."""
    best = None
    for thr, tpr, fpr in curve:
        if best is None or tpr - fpr > best[1] - best[2]:
            best = (thr, tpr, fpr)
    return best


def quantify(pool: QuantifierPool, test: Index) -> PrevalenceEstimate:
    """All six prevalence estimates per category on an unlabeled test index."""
    n_docs = test.num_documents
    if n_docs == 0:
        raise ValidationError("cannot quantify an empty test set")
    estimates: dict = {name: {} for name in QUANTIFIERS}
    for c in range(pool.classifier.num_categories):
        scores = [pool.classifier.score_document_category(test, d, c)
                  for d in range(n_docs)]
        scaled = [scale_score(pool.scaling, s) for s in scores]
        decided = sum(1 for s in scores if pool.classifier.decide(c, s))
        rates = pool.rates[c]

        cc = decided / n_docs
        pcc = sum(scaled) / n_docs
        estimates["CC"][c] = _clip(cc)
        estimates["PCC"][c] = _clip(pcc)
        estimates["ACC"][c] = _corrected(cc, rates.tpr, rates.fpr)
        estimates["PACC"][c] = _corrected(pcc, rates.tpr_p, rates.fpr_p)

        point = _best_threshold(rates.curve)
        if point is None:
            estimates["MAX"][c] = _clip(cc)
        else:
            thr, tpr, fpr = point
            observed = sum(1 for s in scores if s >= thr) / n_docs
            estimates["MAX"][c] = _corrected(observed, tpr, fpr)

        point = _best_threshold(rates.curve_scaled)
        if point is None:
            estimates["PMAX"][c] = _clip(pcc)
        else:
            thr, tpr, fpr = point
            observed = sum(1 for s in scaled if s >= thr) / n_docs
            estimates["PMAX"][c] = _corrected(observed, tpr, fpr)
    return PrevalenceEstimate(estimates=estimates)


# -- evaluation -----------------------------------------------------------------


@dataclass(frozen=True)
class QuantificationReport:
    """Per (quantifier, category) errors plus per-quantifier means."""

    rows: tuple   # (quantifier, cID, estimate, true, AE, RAE, KLD)
    means: dict   # quantifier -> {"AE": .., "RAE": .., "KLD": ..}


def smoothed_kld(estimated: float, true: float, eps: float) -> float:
    """Binary KL divergence with both distributions epsilon-smoothed."""
    p = (true + eps) / (1.0 + 2.0 * eps)
    q = (estimated + eps) / (1.0 + 2.0 * eps)
    return p * math.log(p / q) + (1.0 - p) * math.log((1.0 - p) / (1.0 - q))


def evaluate_quantification(estimates: PrevalenceEstimate,
                            true_prevalences: dict,
                            test_size: int) -> QuantificationReport:
    """AE, RAE and epsilon-smoothed KLD per quantifier and category.

    eps = 1 / (2 * |test|) smooths both the KLD and the RAE denominator.
    """
    if test_size < 1:
        raise ValidationError("test_size must be >= 1")
    eps = 1.0 / (2.0 * test_size)
    rows = []
    sums: dict = {name: [0.0, 0.0, 0.0] for name in estimates.estimates}
    for name in estimates.estimates:
        per_cat = estimates.estimates[name]
        if set(per_cat) != set(true_prevalences):
            raise ValidationError("estimate and truth category sets differ")
        for c in sorted(per_cat):
            p_hat, p = per_cat[c], true_prevalences[c]
            ae = abs(p_hat - p)
            rae = ae / max(p, eps)
            kld = smoothed_kld(p_hat, p, eps)
            rows.append((name, c, p_hat, p, ae, rae, kld))
            sums[name][0] += ae
            sums[name][1] += rae
            sums[name][2] += kld
    n_cats = max(1, len(true_prevalences))
    means = {name: {"AE": s[0] / n_cats, "RAE": s[1] / n_cats,
                    "KLD": s[2] / n_cats}
             for name, s in sums.items()}
    return QuantificationReport(rows=tuple(rows), means=means)


def true_prevalences(index: Index) -> dict:
    """Gold prevalence of every category in a labeled index."""
    n = index.num_documents
    return {c: (len(index.category_documents(c)) / n if n else 0.0)
            for c in range(index.num_categories)}
