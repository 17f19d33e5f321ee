"""Bundled synthetic bilingual corpus with planted, known-gender pronoun
examples, plus the fixture dictionary that bridges it.

Twenty biography articles (ten feminine, ten masculine). Each article has an
intro, one planted sentence carrying a dropped subject and two possessive
pronouns, and a filler sentence, so the whole pipeline can be exercised and
its yield checked against ground truth.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import lexicons
from .extract import POSSESSIVE, PRODROP
from .model import Document, GenderLabel, Sentence, tokenize

_FEM_FIRST = ["Mitsuko", "María", "Ana", "Carmen", "Lucía", "Elena", "Sofía", "Isabel", "Laura", "Marta"]
_MASC_FIRST = ["Juan", "Pedro", "Carlos", "Miguel", "José", "Luis", "Antonio", "Diego", "Pablo", "Andrés"]
_SURNAMES = ["Shiga", "Gómez", "Torres", "Rivera", "Molina", "Vargas", "Ortega", "Castro",
             "Navarro", "Rojas", "Méndez", "Fuentes", "Salas", "Duarte", "Ibarra", "Lara",
             "Paredes", "Quintana", "Serrano", "Vidal"]

_OCC_FEM = [("poetisa", "poet"), ("escritora", "writer"), ("pintora", "painter"),
            ("cantante", "singer"), ("actriz", "actress")]
_OCC_MASC = [("poeta", "poet"), ("escritor", "writer"), ("pintor", "painter"),
             ("cantante", "singer"), ("actor", "actor")]
_NAT_FEM = [("japonesa", "Japanese"), ("española", "Spanish"), ("mexicana", "Mexican"),
            ("francesa", "French"), ("italiana", "Italian")]
_NAT_MASC = [("japonés", "Japanese"), ("español", "Spanish"), ("mexicano", "Mexican"),
             ("francés", "French"), ("italiano", "Italian")]

_VERBS = [("adquirió", "acquired"), ("publicó", "published"), ("escribió", "wrote"),
          ("compuso", "composed"), ("ganó", "won"), ("dirigió", "directed"),
          ("fundó", "founded"), ("estudió", "studied")]
_OBJECTS = [("fama", "fame"), ("música", "music"), ("poesía", "poetry"),
            ("arte", "art"), ("teatro", "theater")]
_NOUNS_1 = [("niñez", "childhood"), ("juventud", "youth"), ("carrera", "career"), ("vida", "lifetime")]
_NOUNS_2 = [("madurez", "maturity"), ("éxito", "success"), ("obra", "work"), ("historia", "story")]
_THINGS = [("novela", "novel"), ("obra", "work")]
_FILLER_NOUNS = [("obra", "work"), ("novela", "novel")]

_FUNCTION_WORDS = {
    "fue": "was", "una": "a", "un": "a", "la": "the", "el": "the", "de": "of",
    "su": "her", "sus": "her", "durante": "during", "con": "with", "en": "in",
    "y": "and", "numerosas": "numerous", "antologías": "anthologies",
    "incluyendo": "including", "varios": "several", "premios": "prizes",
    "recibió": "received", "vida": "lifetime",
}

_TABLE_ES = ("Publicó numerosas antologías de su poesía durante su vida, "
             "incluyendo Fuji no Mi, Asa Tsuki, Asa Ginu, y Kamakura Zakki.")
_TABLE_EN = ('She published numerous anthologies of her poetry during her lifetime, '
             'including Fuji no Mi ("Wisteria Beans"), Asa Tsuki ("Morning Moon"), '
             'Asa Ginu ("Linen Silk"), and Kamakura Zakki ("Kamakura Miscellany").')


@dataclass(frozen=True)
class PlantedExample:
    doc_id: str
    sent_id: int
    kind: str
    anchor: int
    label: GenderLabel
    witness: str

    @property
    def key(self) -> tuple:
        return (self.doc_id, self.sent_id, self.kind, self.anchor)


@dataclass(frozen=True)
class SynthCorpus:
    es_docs: tuple[Document, ...]
    en_docs: tuple[Document, ...]
    dictionary: dict[str, str]
    planted: tuple[PlantedExample, ...]


def _planted_sentence(k: int, fem: bool) -> tuple[str, str]:
    if k == 0:
        return _TABLE_ES, _TABLE_EN
    verb_es, verb_en = _VERBS[k % len(_VERBS)]
    obj_es, obj_en = _OBJECTS[k % len(_OBJECTS)]
    n1_es, n1_en = _NOUNS_1[k % len(_NOUNS_1)]
    n2_es, n2_en = _NOUNS_2[(k + 1) % len(_NOUNS_2)]
    t1_es, t1_en = _THINGS[k % len(_THINGS)]
    t2_es, t2_en = _THINGS[(k + 1) % len(_THINGS)]
    pron = "She" if fem else "He"
    poss = "her" if fem else "his"
    template = k % 4
    if template == 0:
        es = f"{verb_es.capitalize()} {obj_es} de su {n1_es} durante su {n2_es}."
        en = f"{pron} {verb_en} {obj_en} of {poss} {n1_en} during {poss} {n2_en}."
    elif template == 1:
        es = f"{verb_es.capitalize()} {obj_es} con su {n1_es} en su {n2_es}."
        en = f"{pron} {verb_en} {obj_en} with {poss} {n1_en} in {poss} {n2_en}."
    elif template == 2:
        es = f"{verb_es.capitalize()} su {t1_es} y su {t2_es}."
        en = f"{pron} {verb_en} {poss} {t1_en} and {poss} {t2_en}."
    else:
        es = f"{verb_es.capitalize()} {obj_es} en su {n1_es} y su {n2_es}."
        en = f"{pron} {verb_en} {obj_en} in {poss} {n1_en} and {poss} {n2_en}."
    return es, en


def build_synthetic_corpus() -> SynthCorpus:
    """Deterministic 20-article corpus with 60 planted pronoun examples."""
    es_docs, en_docs, planted = [], [], []
    dictionary = dict(_FUNCTION_WORDS)
    for es_w, en_w in (_VERBS + _OBJECTS + _NOUNS_1 + _NOUNS_2 + _THINGS +
                       _OCC_FEM + _OCC_MASC + _NAT_FEM + _NAT_MASC):
        dictionary[es_w] = en_w

    for k in range(20):
        fem = k % 2 == 0
        label = GenderLabel.FEM if fem else GenderLabel.MASC
        first = _FEM_FIRST[k // 2] if fem else _MASC_FIRST[k // 2]
        surname = _SURNAMES[k]
        title = f"{first} {surname}"
        occ_es, occ_en = (_OCC_FEM if fem else _OCC_MASC)[k % 5]
        nat_es, nat_en = (_NAT_FEM if fem else _NAT_MASC)[(k // 5) % 5]
        article = "una" if fem else "un"

        intro_es = f"{first} {surname} fue {article} {occ_es} {nat_es}."
        intro_en = f"{first} {surname} was a {nat_en} {occ_en}."
        planted_es, planted_en = _planted_sentence(k, fem)
        fn_es, fn_en = _FILLER_NOUNS[k % len(_FILLER_NOUNS)]
        filler_es = f"La {fn_es} recibió varios premios."
        filler_en = f"The {fn_en} received several prizes."

        es_doc_id = f"eswiki-{k:04d}"
        es_docs.append(Document(es_doc_id, "es", title, tuple(
            Sentence.from_text(i, text) for i, text in enumerate([intro_es, planted_es, filler_es]))))
        en_docs.append(Document(f"enwiki-{k:04d}", "en", title, tuple(
            Sentence.from_text(i, text) for i, text in enumerate([intro_en, planted_en, filler_en]))))

        tokens = [t.surface.lower() for t in tokenize(planted_es)]
        planted.append(PlantedExample(es_doc_id, 1, PRODROP, 0, label,
                                      "She" if fem else "He"))
        for i, surf in enumerate(tokens):
            if surf in ("su", "sus"):
                planted.append(PlantedExample(es_doc_id, 1, POSSESSIVE, i, label,
                                              "her" if fem else "his"))

    return SynthCorpus(tuple(es_docs), tuple(en_docs), dictionary, tuple(planted))


def dictionary_tsv(corpus: SynthCorpus) -> str:
    return "".join(f"{src}\t{tgt}\n" for src, tgt in sorted(corpus.dictionary.items()))


def pos_lexicon_tsv() -> str:
    return "".join(f"{tok}\t{tag}\n" for tok, tag in sorted(lexicons.EN_POS.items()))
