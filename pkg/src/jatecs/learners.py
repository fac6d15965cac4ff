"""Native learning algorithms and the classifier contract.

Every learner treats each category as an independent binary problem, so all
classifiers are multilabel-capable.  Naive Bayes consumes raw occurrence
counts, Rocchio and kNN consume the weighting relation, and the boosting
learner consumes binary feature presence.

A trained classifier can score any index sharing the training feature space;
feature ids beyond the trained vocabulary are ignored.  When the training
index carries a local feature domain, features that are invalid for a
category contribute nothing to that category's score.
"""

from __future__ import annotations

import math
import os
import pickle
from dataclasses import dataclass

from .errors import ValidationError
from .index import Index

#: score emitted for categories that could not be trained (no positives)
MIN_SCORE = -1e300

NAIVE_BAYES = "NaiveBayes"
ROCCHIO = "Rocchio"
KNN = "KNN"
ADABOOST_MH = "AdaBoostMH"


@dataclass(frozen=True)
class NaiveBayesLearner:
    """Multinomial Bayes with Laplace(1) smoothing, log-odds decisions."""

    kind: str = NAIVE_BAYES


@dataclass(frozen=True)
class RocchioLearner:
    """Profile classifier: positive centroid minus a weighted negative one.

    Negative profile components are clipped at zero; the score is the cosine
    between profile and document vector.  A document is assigned when its
    similarity strictly exceeds the threshold ("any positive similarity").
    """

    beta: float = 16.0
    gamma: float = 4.0
    threshold: float = 0.0
    kind: str = ROCCHIO


@dataclass(frozen=True)
class KnnLearner:
    """k nearest neighbors by cosine similarity, vote weighted by similarity."""

    k: int = 30
    threshold: float = 0.5
    kind: str = KNN

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError("k must be >= 1")


@dataclass(frozen=True)
class AdaBoostMHLearner:
    """Real-valued one-feature stumps boosted for T rounds per category."""

    iterations: int = 100
    kind: str = ADABOOST_MH

    def __post_init__(self):
        if self.iterations < 1:
            raise ValidationError("iterations must be >= 1")


_LEARNER_KINDS = {
    "nb": NaiveBayesLearner,
    "rocchio": RocchioLearner,
    "knn": KnnLearner,
    "boost": AdaBoostMHLearner,
}

_INT_PARAMS = {"k", "iterations"}


def make_learner(kind: str, **params):
    """CLI/grid-search factory; rejects unknown kinds and parameters."""
    try:
        cls = _LEARNER_KINDS[kind]
    except KeyError:
        raise ValidationError(f"unknown learner kind {kind!r}") from None
    coerced = {}
    for name, value in params.items():
        if name not in cls.__dataclass_fields__ or name == "kind":
            raise ValidationError(f"unknown {kind} hyperparameter {name!r}")
        coerced[name] = int(value) if name in _INT_PARAMS else float(value)
    return cls(**coerced)


@dataclass(frozen=True)
class ClassificationResult:
    """Per-category scores and threshold decisions for one document.

    Covers all categories when produced by classify_document, or a single
    one when produced by classify_category.
    """

    scores: dict
    decisions: dict


class TrainedClassifier:
    """Base classifier: per-category scoring plus threshold decisions."""

    kind = "?"

    def __init__(self, category_labels, thresholds, num_features,
                 valid=None, strict=False, warnings=()):
        self.category_labels = tuple(category_labels)
        self.thresholds = tuple(thresholds)
        self.num_features = num_features       # trained vocabulary size
        self.valid = valid                     # cID -> frozenset, or None
        self.strict = strict                   # decision uses > instead of >=
        self.warnings = list(warnings)
        self.hyperparameters = {}              # filled in by train()

    @property
    def num_categories(self) -> int:
        return len(self.category_labels)

    def _restrict(self, vector: dict, c_id: int) -> dict:
        known = {f: v for f, v in vector.items() if f < self.num_features}
        if self.valid is None:
            return known
        valid = self.valid.get(c_id, frozenset())
        return {f: v for f, v in known.items() if f in valid}

    def decide(self, c_id: int, score: float) -> bool:
        if self.strict:
            return score > self.thresholds[c_id]
        return score >= self.thresholds[c_id]

    def score_document_category(self, index: Index, d_id: int, c_id: int) -> float:
        raise NotImplementedError

    def score_document(self, index: Index, d_id: int) -> list:
        return [self.score_document_category(index, d_id, c)
                for c in range(self.num_categories)]


def _cosine(u: dict, u_norm: float, v: dict, v_norm: float) -> float:
    if u_norm == 0.0 or v_norm == 0.0:
        return 0.0
    if len(v) < len(u):
        u, v = v, u
    dot = sum(val * v.get(f, 0.0) for f, val in u.items())
    return dot / (u_norm * v_norm)


def _norm(vector: dict) -> float:
    return math.sqrt(sum(v * v for v in vector.values()))


# -- Naive Bayes ---------------------------------------------------------------


class NaiveBayesClassifier(TrainedClassifier):
    kind = NAIVE_BAYES

    def __init__(self, category_labels, num_features, models, valid=None,
                 warnings=()):
        super().__init__(category_labels, [0.0] * len(category_labels),
                         num_features, valid=valid, warnings=warnings)
        # models: per category, None (untrainable) or
        # (log_odds_prior, log_num_pos, log_den_pos, log_num_neg, log_den_neg)
        self.models = models

    def score_document_category(self, index, d_id, c_id):
        model = self.models[c_id]
        if model is None:
            return MIN_SCORE
        if model == "all-positive":
            return -MIN_SCORE
        log_odds, num_pos, den_pos, num_neg, den_neg = model
        score = log_odds
        counts = self._restrict(index.document_features(d_id), c_id)
        for f, tf in counts.items():
            theta_pos = num_pos.get(f, 0.0) - den_pos
            theta_neg = num_neg.get(f, 0.0) - den_neg
            score += tf * (theta_pos - theta_neg)
        return score


def _train_naive_bayes(learner, index: Index):
    labels = index.categories.names
    valid = _valid_map(index)
    models = []
    warnings = []
    n_docs = index.num_documents
    for c in range(index.num_categories):
        pos_docs = index.category_documents(c)
        if not pos_docs:
            warnings.append(f"category {labels[c]!r} has no positive "
                            "training documents")
            models.append(None)
            continue
        if len(pos_docs) == n_docs:
            warnings.append(f"category {labels[c]!r} has no negative "
                            "training documents")
            models.append("all-positive")
            continue
        valid_set = valid.get(c) if valid else None
        vocab = len(valid_set) if valid_set is not None else index.num_features
        pos_counts: dict = {}
        neg_counts: dict = {}
        for d in range(n_docs):
            target = pos_counts if d in pos_docs else neg_counts
            for f, tf in index.document_features(d).items():
                if valid_set is not None and f not in valid_set:
                    continue
                target[f] = target.get(f, 0) + tf
        pos_total = sum(pos_counts.values())
        neg_total = sum(neg_counts.values())
        log_odds = math.log(len(pos_docs) / n_docs) - \
            math.log((n_docs - len(pos_docs)) / n_docs)
        num_pos = {f: math.log(n + 1.0) for f, n in pos_counts.items()}
        num_neg = {f: math.log(n + 1.0) for f, n in neg_counts.items()}
        models.append((log_odds,
                       num_pos, math.log(pos_total + vocab),
                       num_neg, math.log(neg_total + vocab)))
    return NaiveBayesClassifier(labels, index.num_features, models,
                                valid=valid, warnings=warnings)


# -- Rocchio ---------------------------------------------------------------------


class RocchioClassifier(TrainedClassifier):
    kind = ROCCHIO

    def __init__(self, category_labels, num_features, profiles, norms,
                 threshold, valid=None, warnings=()):
        super().__init__(category_labels, [threshold] * len(category_labels),
                         num_features, valid=valid, strict=True,
                         warnings=warnings)
        self.profiles = profiles  # per category: dict or None
        self.norms = norms

    def score_document_category(self, index, d_id, c_id):
        profile = self.profiles[c_id]
        if profile is None:
            return MIN_SCORE
        vector = self._restrict(index.document_weights(d_id), c_id)
        return _cosine(profile, self.norms[c_id], vector, _norm(vector))


def _train_rocchio(learner, index: Index):
    labels = index.categories.names
    valid = _valid_map(index)
    profiles = []
    norms = []
    warnings = []
    n_docs = index.num_documents
    doc_vectors = [index.document_weights(d) for d in range(n_docs)]
    for c in range(index.num_categories):
        pos_docs = index.category_documents(c)
        if not pos_docs:
            warnings.append(f"category {labels[c]!r} has no positive "
                            "training documents")
            profiles.append(None)
            norms.append(0.0)
            continue
        valid_set = valid.get(c) if valid else None
        profile: dict = {}
        n_neg = n_docs - len(pos_docs)
        pos_w = learner.beta / len(pos_docs)
        neg_w = learner.gamma / n_neg if n_neg else 0.0
        for d in range(n_docs):
            scale = pos_w if d in pos_docs else -neg_w
            if scale == 0.0:
                continue
            for f, w in doc_vectors[d].items():
                if valid_set is not None and f not in valid_set:
                    continue
                profile[f] = profile.get(f, 0.0) + scale * w
        profile = {f: w for f, w in profile.items() if w > 0.0}
        profiles.append(profile)
        norms.append(_norm(profile))
    return RocchioClassifier(labels, index.num_features, profiles, norms,
                             learner.threshold, valid=valid, warnings=warnings)


# -- k nearest neighbors ----------------------------------------------------------


class KnnClassifier(TrainedClassifier):
    kind = KNN

    def __init__(self, category_labels, num_features, vectors, vector_norms,
                 memberships, k, threshold, valid=None, warnings=()):
        super().__init__(category_labels, [threshold] * len(category_labels),
                         num_features, valid=valid, warnings=warnings)
        self.vectors = vectors            # training doc id -> weight dict
        self.vector_norms = vector_norms
        self.memberships = memberships    # cID -> frozenset of training dIDs
        self.k = k

    def _neighbors(self, vector: dict, restrict=None) -> list:
        """Top-k training docs by cosine similarity; ties broken by id."""
        if restrict is not None:
            vector = {f: v for f, v in vector.items() if f in restrict}
        v_norm = _norm(vector)
        sims = []
        for d, train_vec in enumerate(self.vectors):
            if restrict is not None:
                train_vec = {f: v for f, v in train_vec.items() if f in restrict}
                t_norm = _norm(train_vec)
            else:
                t_norm = self.vector_norms[d]
            sims.append((_cosine(vector, v_norm, train_vec, t_norm), d))
        sims.sort(key=lambda sd: (-sd[0], sd[1]))
        return sims[:min(self.k, len(sims))]

    def score_document_category(self, index, d_id, c_id):
        return self._scores_for_doc(index, d_id)[c_id]

    def _scores_for_doc(self, index, d_id):
        vector = {f: v for f, v in index.document_weights(d_id).items()
                  if f < self.num_features}
        if self.valid is None:
            top = self._neighbors(vector)
            return [self._vote(top, c) for c in range(self.num_categories)]
        return [self._vote(self._neighbors(vector, self.valid.get(c, frozenset())), c)
                for c in range(self.num_categories)]

    def _vote(self, top, c_id):
        denom = sum(sim for sim, _ in top)
        if denom == 0.0:
            return 0.0
        members = self.memberships[c_id]
        return sum(sim for sim, d in top if d in members) / denom

    def score_document(self, index, d_id):
        return self._scores_for_doc(index, d_id)


def _train_knn(learner, index: Index):
    labels = index.categories.names
    valid = _valid_map(index)
    warnings = []
    vectors = [dict(index.document_weights(d))
               for d in range(index.num_documents)]
    norms = [_norm(v) for v in vectors]
    memberships = {c: index.category_documents(c)
                   for c in range(index.num_categories)}
    for c in range(index.num_categories):
        if not memberships[c]:
            warnings.append(f"category {labels[c]!r} has no positive "
                            "training documents")
    return KnnClassifier(labels, index.num_features, vectors, norms,
                         memberships, learner.k, learner.threshold,
                         valid=valid, warnings=warnings)


# -- AdaBoost.MH with real-valued stumps -------------------------------------------


class BoostClassifier(TrainedClassifier):
    kind = ADABOOST_MH

    def __init__(self, category_labels, num_features, rounds, z_values,
                 iterations, epsilon, valid=None, warnings=()):
        super().__init__(category_labels, [0.0] * len(category_labels),
                         num_features, valid=valid, warnings=warnings)
        self.rounds = rounds      # per category: list of (fID, c0, c1) or None
        self.z_values = z_values  # per category: per-round normalizer Z_t
        self.iterations = iterations
        self.epsilon = epsilon

    def score_document_category(self, index, d_id, c_id):
        rounds = self.rounds[c_id]
        if rounds is None:
            return MIN_SCORE
        present = self._restrict(index.document_features(d_id), c_id)
        return sum(c1 if f in present else c0 for f, c0, c1 in rounds)


def _train_boost(learner, index: Index):
    labels = index.categories.names
    valid = _valid_map(index)
    n_docs = index.num_documents
    epsilon = 1.0 / n_docs
    all_rounds = []
    all_z = []
    warnings = []
    for c in range(index.num_categories):
        pos_docs = index.category_documents(c)
        if not pos_docs:
            warnings.append(f"category {labels[c]!r} has no positive "
                            "training documents")
            all_rounds.append(None)
            all_z.append([])
            continue
        valid_set = valid.get(c) if valid else None
        candidates = (sorted(valid_set) if valid_set is not None
                      else range(index.num_features))
        weights = [1.0 / n_docs] * n_docs
        positive = [d in pos_docs for d in range(n_docs)]
        rounds = []
        z_values = []
        for _ in range(learner.iterations):
            w_pos_total = sum(w for d, w in enumerate(weights) if positive[d])
            w_neg_total = sum(w for d, w in enumerate(weights) if not positive[d])
            best = None
            for f in candidates:
                w1p = w1m = 0.0
                for d in index.feature_documents(f):
                    if positive[d]:
                        w1p += weights[d]
                    else:
                        w1m += weights[d]
                w0p = w_pos_total - w1p
                w0m = w_neg_total - w1m
                c0 = 0.5 * math.log((w0p + epsilon) / (w0m + epsilon))
                c1 = 0.5 * math.log((w1p + epsilon) / (w1m + epsilon))
                z = (w0p * math.exp(-c0) + w0m * math.exp(c0)
                     + w1p * math.exp(-c1) + w1m * math.exp(c1))
                if best is None or z < best[0]:
                    best = (z, f, c0, c1)
            z, f, c0, c1 = best
            rounds.append((f, c0, c1))
            z_values.append(z)
            posting = index.feature_documents(f)
            for d in range(n_docs):
                h = c1 if d in posting else c0
                y = 1.0 if positive[d] else -1.0
                weights[d] = weights[d] * math.exp(-y * h) / z
        all_rounds.append(rounds)
        all_z.append(z_values)
    return BoostClassifier(labels, index.num_features, all_rounds, all_z,
                           iterations=learner.iterations, epsilon=epsilon,
                           valid=valid, warnings=warnings)


# -- shared operations ---------------------------------------------------------------


def _valid_map(index: Index):
    if not index.domain.local:
        return None
    return {c: index.domain.valid_features(c)
            for c in range(index.num_categories)}


_TRAINERS = {
    NAIVE_BAYES: _train_naive_bayes,
    ROCCHIO: _train_rocchio,
    KNN: _train_knn,
    ADABOOST_MH: _train_boost,
}


def train(learner, index: Index) -> TrainedClassifier:
    """Fit the learner on a training index; deterministic given its inputs.

    Categories without positive training documents yield a minimum-score
    model and are flagged in the classifier's warnings.
    """
    if index.num_documents < 1:
        raise ValidationError("cannot train on an empty index")
    if index.num_categories < 1:
        raise ValidationError("cannot train without categories")
    try:
        trainer = _TRAINERS[learner.kind]
    except (AttributeError, KeyError):
        raise ValidationError(f"unknown learner {learner!r}") from None
    classifier = trainer(learner, index)
    classifier.hyperparameters = {
        name: getattr(learner, name)
        for name in learner.__dataclass_fields__ if name != "kind"}
    return classifier


def classify_document(classifier: TrainedClassifier, index: Index,
                      d_id: int) -> ClassificationResult:
    """Scores and decisions for one document against every category."""
    index.documents.name(d_id)
    scores = classifier.score_document(index, d_id)
    return ClassificationResult(
        scores={c: s for c, s in enumerate(scores)},
        decisions={c: classifier.decide(c, s) for c, s in enumerate(scores)})


def classify_category(classifier: TrainedClassifier, index: Index,
                      c_id: int) -> list:
    """One single-category result per document, in ascending document id."""
    if not 0 <= c_id < classifier.num_categories:
        raise ValidationError(f"unknown category id {c_id}")
    results = []
    for d in range(index.num_documents):
        score = classifier.score_document_category(index, d, c_id)
        results.append(ClassificationResult(
            scores={c_id: score},
            decisions={c_id: classifier.decide(c_id, score)}))
    return results


def one_vs_all_predict(classifier: TrainedClassifier, index: Index,
                       d_id: int) -> int:
    """Single-label prediction: argmax score, ties to the lower category id."""
    scores = classifier.score_document(index, d_id)
    best = 0
    for c in range(1, len(scores)):
        if scores[c] > scores[best]:
            best = c
    return best


def predict_classification(classifier: TrainedClassifier, index: Index) -> dict:
    """Decided (document -> sorted category tuple) map over a whole index."""
    out = {}
    for d in range(index.num_documents):
        result = classify_document(classifier, index, d)
        out[d] = tuple(c for c in range(classifier.num_categories)
                       if result.decisions[c])
    return out


# -- model persistence -----------------------------------------------------------------


def save_classifier(classifier: TrainedClassifier, directory) -> None:
    os.makedirs(directory, exist_ok=True)
    with open(os.path.join(directory, "model.pkl"), "wb") as fh:
        pickle.dump(classifier, fh)
    lines = [f"kind\t{classifier.kind}\n"]
    for name in sorted(classifier.hyperparameters):
        lines.append(f"param\t{name}\t{classifier.hyperparameters[name]!r}\n")
    for c, label in enumerate(classifier.category_labels):
        lines.append(f"category\t{c}\t{label}\n")
    for c, thr in enumerate(classifier.thresholds):
        lines.append(f"threshold\t{c}\t{thr!r}\n")
    with open(os.path.join(directory, "model-meta.tsv"), "w",
              encoding="utf-8", newline="\n") as fh:
        fh.writelines(lines)


def load_classifier(directory) -> TrainedClassifier:
    path = os.path.join(directory, "model.pkl")
    if not os.path.exists(path):
        raise ValidationError(f"no model payload at {path}")
    with open(path, "rb") as fh:
        return pickle.load(fh)
