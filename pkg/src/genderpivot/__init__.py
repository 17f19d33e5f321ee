"""genderpivot: mine gender-labeled Spanish pronoun examples from comparable
bilingual documents, evaluate pronoun-gender classifiers, and inject gender
tags into MT input."""

from .classify import (HeuristicClassifier, Prediction, Probe, RemoteClassifier,
                       build_probe, decode_mask_fills, heuristic_classify)
from .dataset import DatasetSplit, balance, read_examples, split, write_examples
from .explain import Explanation, explain, fit_local_linear, perturb
from .extract import (PronounExample, PronounSlot, SpanishAnalyzer,
                      detect_possessive, detect_prodrop, project_gender)
from .inject import inject_tag, strip_tag, substream
from .metrics import (ConfusionMatrix, EvalReport, GenderPRF, agreement_stats,
                      bleu, prodrop_rate, pronoun_prf)
from .model import (Document, GenderLabel, Sentence, Token, detokenize,
                    parse_conllu, read_plaintext, serialize_conllu, tokenize)
from .pages import PagePair, align_pages
from .sentalign import SentencePair, align_sentences, edit_distance, shares_content_word
from .synth import build_synthetic_corpus
from .translate import (CachingTranslator, DictionaryProvider, ExternalProvider,
                        IdentityProvider, TranslationRecord, load_dictionary)
from .wordalign import TokenAlignment, TranslationTable, align_tokens, train_ibm1

__version__ = "0.1.0"
