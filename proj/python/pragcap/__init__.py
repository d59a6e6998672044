"""Symbolic caption generation, pragmatic metrics, and reference games."""

from pragcap._core import (  # noqa: F401
    IMAGE_COUNT,
    Caption,
    CaptionKind,
    ContrastProfile,
    Feature,
    GameResult,
    ImagePair,
    KConvention,
    Label,
    Lexicon,
    LexiconError,
    LexiconFormatError,
    ListenerConfig,
    MentionRecord,
    PairSet,
    SpeakerConfig,
    SplitCategory,
    __version__,
    aggregate,
    build_split,
    cardinality,
    contrast_profile,
    count_captions,
    count_for_label,
    decode_id,
    encode_id,
    eval_from_counts,
    evaluate_caption,
    exhaustive_captions,
    extract_mentions,
    feature_name,
    l0_posterior,
    load_lexicon,
    minimal_utterances,
    play_game,
    play_game_with_caption,
    rsa_distribution,
    run_benchmark,
    sample_caption,
    short_captions,
    speak,
    standard_suite,
    tokenize,
    validate_lexicon,
    validate_split,
)
