"""Token-level decision summarization over meeting transcripts."""

from decsum._core import (
    Corpus,
    DaRef,
    DecisionCluster,
    Posterior,
    Summary,
    attach_context,
    baseline_longest,
    baseline_prototype,
    domsum,
    klsum_select,
    load_corpus,
    load_posterior,
    porter_stem,
    preprocess_for_rouge,
    rouge_n,
    rouge_su4,
    run_experiment,
    score_multitopic,
    score_onetopic,
    score_tmm,
    tokenize,
    train,
    true_clusters,
    upperbound,
    validate_config,
)

__all__ = [
    "Corpus",
    "DaRef",
    "DecisionCluster",
    "Posterior",
    "Summary",
    "attach_context",
    "baseline_longest",
    "baseline_prototype",
    "domsum",
    "klsum_select",
    "load_corpus",
    "load_posterior",
    "porter_stem",
    "preprocess_for_rouge",
    "rouge_n",
    "rouge_su4",
    "run_experiment",
    "score_multitopic",
    "score_onetopic",
    "score_tmm",
    "tokenize",
    "train",
    "true_clusters",
    "upperbound",
    "validate_config",
]
