"""Built-in lexicons sufficient for fixtures and the bundled synthetic corpus.

Real runs should supply CoNLL-U annotations and external lexicon files;
these tables exist so the pipeline is exercisable offline end to end.
"""

from __future__ import annotations

from .model import GenderLabel

# finite third-person-singular Spanish verb forms
ES_VERBS_3SG = frozenset("""
adquirió publicó escribió fundó dirigió compuso ganó recibió estudió enseñó
viajó trabajó comenzó actuó participó fue era tiene vive pintó tradujo editó
interpretó grabó
""".split())

ES_NOUNS = frozenset("""
fama poesía vida niñez obra libro música carrera novela premio premios
juventud ciudad historia arte teatro universidad escuela país madurez éxito
poetisa poeta escritora escritor cantante pintora pintor actriz actor niña
niño mujer hombre antología antologías programa televisión papeles
producciones fotografía cuentos ensayos retratos canciones
""".split())

NAMES_FEM = frozenset("""
maría ana carmen lucía elena sofía isabel laura marta teresa mitsuko britney
rosa clara
""".split())

NAMES_MASC = frozenset("""
juan pedro carlos miguel josé luis antonio diego pablo andrés jorge raúl
""".split())

SURNAMES = frozenset("""
shiga gómez torres rivera spears molina vargas ortega castro navarro rojas
méndez fuentes salas duarte ibarra lara paredes quintana serrano vidal
""".split())

ES_SUBJECT_PRONOUNS = frozenset("""
él ella ellos ellas yo tú usted ustedes nosotros nosotras vosotros vosotras
""".split())

ES_DETERMINERS = frozenset("el la los las un una unos unas su sus".split())

# Spanish gendered nouns and names for the antecedent-heuristic baseline
GENDERED_ES: dict[str, GenderLabel] = {}
for _w in ("niña", "mujer", "escritora", "poetisa", "pintora", "actriz",
           "cantante_f", "reina", "hermana", "madre", "hija", "abuela"):
    GENDERED_ES[_w] = GenderLabel.FEM
for _w in ("niño", "hombre", "escritor", "poeta", "pintor", "actor",
           "rey", "hermano", "padre", "hijo", "abuelo"):
    GENDERED_ES[_w] = GenderLabel.MASC
del GENDERED_ES["cantante_f"]
for _w in NAMES_FEM:
    GENDERED_ES[_w] = GenderLabel.FEM
for _w in NAMES_MASC:
    GENDERED_ES[_w] = GenderLabel.MASC

# English POS lexicon entries (token -> noun|verb) for shared-content checks
EN_POS: dict[str, str] = {}
for _w in ("published", "acquired", "wrote", "founded", "directed", "composed",
           "won", "received", "studied", "taught", "traveled", "worked", "was",
           "began", "acted", "participated", "gained", "painted", "translated",
           "edited", "performed", "recorded", "lived"):
    EN_POS[_w] = "verb"
for _w in ("fame", "poetry", "lifetime", "life", "childhood", "work", "book",
           "music", "career", "novel", "prize", "prizes", "youth", "city",
           "story", "art", "theater", "university", "school", "country",
           "maturity", "success", "poet", "writer", "singer", "painter",
           "girl", "boy", "woman", "man", "anthology", "anthologies",
           "photography", "stories", "essays", "portraits", "songs"):
    EN_POS[_w] = "noun"
