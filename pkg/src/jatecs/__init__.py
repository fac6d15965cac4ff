"""Text categorization toolkit.

Corpus-centric sparse indexing, corpus format parsers, feature extraction,
feature selection and random projections, tf-idf/BM25 weighting, native
learners, contingency-table evaluation, prevalence quantification, and
experiment templates, all exposed through a library API and the `jatecs`
command line tool.
"""

from .errors import InternalError, JatecsError, ParseError, ValidationError
from .index import (
    Index,
    build_index,
    deserialize_index,
    query_category_documents,
    query_document_features,
    serialize_index,
    subset_index,
)
from .corpus import (
    RawDocument,
    SparseInstance,
    documents_to_index,
    read_arff,
    read_category_file,
    read_csv,
    read_libsvm,
    write_libsvm,
)
from .textproc import (
    ExtractorConfig,
    english_stopwords,
    extract_bow,
    extract_char_ngrams,
    extract_set,
)
from .porter import porter_stem
from .tsr import (
    CooccurrenceCounts,
    FeatureRanking,
    apply_selection,
    cooccurrence_counts,
    per_category_rankings,
    rank_features,
    select_round_robin,
    tsr_score,
)
from .projection import ProjectionModel, build_projection, project
from .weighting import CorpusStats, bm25, recompute_stats, tfidf_normalized
from .learners import (
    AdaBoostMHLearner,
    ClassificationResult,
    KnnLearner,
    NaiveBayesLearner,
    RocchioLearner,
    TrainedClassifier,
    classify_category,
    classify_document,
    make_learner,
    one_vs_all_predict,
    train,
)
from .evaluation import (
    ConfusionMatrix,
    ContingencyTable,
    ContingencyTableSet,
    compare,
    confusion,
    measures,
    micro_macro,
)
from .quantification import (
    LogisticScaling,
    PrevalenceEstimate,
    QuantifierPool,
    evaluate_quantification,
    learn_quantifiers,
    quantify,
    scale_score,
)
from .experiments import FoldPlan, grid_search, kfold_evaluate, make_folds

__version__ = "0.1.0"
