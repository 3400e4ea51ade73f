#!/usr/bin/env python3
"""Regenerate the bundled lexicon: WordNet-format database files and word vectors.

The synonym table below is the single source of truth.  Data files carry
true byte offsets (8-digit, fixed width, so a second pass can fill them in
without shifting lines), hexadecimal word counts and license-style header
lines, matching the WordNet 3.x database layout the parser expects.

Vectors are synset-coherent: members of a synset share a base direction
plus noise, so synonym pairs score high cosine similarity while unrelated
words land near zero.  Inflected forms from the exception lists sit close
to their base lemma.  Usage:

    python tools/build_lexicon.py
"""

from __future__ import annotations

import csv
import re
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "src" / "textfray" / "data"

DIM = 32
NOISE = 0.30
INFLECTION_NOISE = 0.20
SEED = 7

# (pos, members, gloss).  Multiword members use underscores and are parsed
# but excluded from substitution candidates.
SYNSETS: list[tuple[str, list[str], str]] = [
    # adjectives
    ("a", ["good", "fine", "solid"], "having desirable qualities"),
    ("a", ["good", "estimable", "honorable"], "deserving of respect"),
    ("a", ["great", "grand", "immense"], "remarkable in degree"),
    ("a", ["great", "celebrated", "renowned"], "widely known and admired"),
    ("a", ["wonderful", "marvelous", "tremendous", "terrific"], "extraordinarily good"),
    ("a", ["funny", "amusing", "comic", "comical"], "arousing laughter"),
    ("a", ["exciting", "thrilling", "electrifying"], "creating strong interest"),
    ("a", ["brilliant", "superb", "magnificent", "splendid"], "of surpassing excellence"),
    ("a", ["moving", "touching", "poignant", "affecting"], "arousing deep emotion"),
    ("a", ["clever", "cunning", "ingenious"], "showing inventiveness"),
    ("a", ["beautiful", "lovely", "gorgeous"], "pleasing to the senses"),
    ("a", ["memorable", "unforgettable"], "worth remembering"),
    ("a", ["engaging", "gripping", "absorbing", "engrossing"], "taking up the attention"),
    ("a", ["fresh", "novel", "original"], "new and different"),
    ("a", ["charming", "delightful", "enchanting"], "pleasing and winning"),
    ("a", ["sweet", "tender", "gentle"], "pleasing in disposition"),
    ("a", ["sharp", "keen", "incisive"], "quick and forceful"),
    ("a", ["terrible", "horrendous", "horrific"], "exceptionally bad"),
    ("a", ["bad", "awful", "dreadful"], "very poor in quality"),
    ("a", ["bad", "spoiled", "rotten"], "past usefulness"),
    ("a", ["stupid", "dumb", "witless"], "lacking intelligence"),
    ("a", ["weak", "feeble", "faint"], "lacking strength"),
    ("a", ["boring", "dull", "tedious", "tiresome"], "causing weariness"),
    ("a", ["predictable", "foreseeable"], "known in advance"),
    ("a", ["ugly", "unsightly", "hideous"], "displeasing to the eye"),
    ("a", ["shallow", "superficial"], "lacking depth"),
    ("a", ["hollow", "vacuous", "empty"], "lacking substance"),
    ("a", ["dreary", "drab", "dingy"], "depressingly dull"),
    ("a", ["slow", "sluggish", "laggard"], "not quick"),
    ("a", ["clumsy", "awkward", "bungling"], "lacking grace"),
    ("a", ["silly", "fatuous", "inane"], "lacking good sense"),
    ("a", ["long", "lengthy", "prolonged"], "of extended duration"),
    ("a", ["old", "aged"], "having lived a long time"),
    ("a", ["feisty", "plucky", "spunky"], "showing courage and spirit"),
    ("a", ["astonishing", "astounding", "staggering"], "causing amazement"),
    ("a", ["quiet", "hushed", "muted"], "free of noise"),
    ("a", ["familiar", "everyday", "usual"], "commonly encountered"),
    ("a", ["whole", "entire", "total"], "including every part"),
    ("a", ["fair", "reasonable", "evenhanded"], "free of favoritism"),
    ("a", ["fast", "quick", "rapid", "speedy"], "acting with speed"),
    ("a", ["big", "large"], "above average in size"),
    ("a", ["small", "little"], "below average in size"),
    ("a", ["deep", "profound"], "of great intensity"),
    ("a", ["real", "genuine", "authentic"], "not counterfeit"),
    ("a", ["fake", "false", "bogus", "phony"], "fraudulent"),
    ("a", ["strong", "powerful", "potent"], "having great force"),
    ("a", ["happy", "glad", "cheerful"], "feeling joy"),
    ("a", ["sad", "unhappy", "sorrowful"], "feeling sorrow"),
    ("a", ["perfect", "flawless"], "without defect"),
    ("a", ["far", "distant", "remote"], "separated in space"),
    # nouns
    ("n", ["dog", "domestic_dog", "canis_familiaris"], "a domesticated canine"),
    ("n", ["labor", "labour", "toil"], "productive work"),
    ("n", ["movie", "film", "picture", "flick", "moving_picture"], "a form of entertainment"),
    ("n", ["story", "tale", "narrative"], "a recounting of events"),
    ("n", ["plot", "storyline"], "the events of a narrative"),
    ("n", ["scene", "shot"], "a unit of dramatic action"),
    ("n", ["ending", "conclusion", "finale"], "the last part"),
    ("n", ["start", "beginning", "commencement"], "the first part"),
    ("n", ["finish", "close", "finale"], "the concluding part"),
    ("n", ["act"], "a subdivision of a play"),
    ("n", ["cast"], "the actors in a production"),
    ("n", ["script", "screenplay"], "written text of a production"),
    ("n", ["dialogue", "duologue"], "lines spoken by characters"),
    ("n", ["pacing", "tempo"], "rate of movement or activity"),
    ("n", ["premise", "assumption", "precondition"], "a basis for reasoning"),
    ("n", ["idea", "thought", "notion"], "the content of cognition"),
    ("n", ["twist", "device", "gimmick"], "a clever narrative turn"),
    ("n", ["comedy", "funniness"], "a humorous work"),
    ("n", ["drama", "dramatic_play", "play"], "a work for theatrical performance"),
    ("n", ["evening", "eve", "eventide"], "the latter part of the day"),
    ("n", ["director", "filmmaker", "film_maker"], "one who supervises production"),
    ("n", ["performance", "rendition", "rendering"], "the act of presenting a work"),
    ("n", ["sequel", "continuation"], "a following work"),
    ("n", ["joke", "jest", "gag", "laugh"], "something said to amuse"),
    ("n", ["hour", "hr"], "a period of sixty minutes"),
    ("n", ["work", "piece_of_work"], "a produced result"),
    ("n", ["take"], "a filmed shot"),
    ("n", ["fun", "merriment", "playfulness"], "enjoyable diversion"),
    ("n", ["friend", "companion", "comrade"], "a person one knows well"),
    ("n", ["friendship", "friendly_relationship"], "the state of being friends"),
    ("n", ["owner", "proprietor", "possessor"], "one who owns"),
    ("n", ["center", "centre", "middle", "midpoint"], "an equidistant point"),
    ("n", ["noise", "racket", "din"], "loud confused sound"),
    ("n", ["trailer", "preview", "prevue"], "an advance advertisement"),
    ("n", ["paint", "pigment"], "a colored coating substance"),
    ("n", ["attempt", "effort", "endeavor", "try"], "earnest activity toward a goal"),
    ("n", ["suspense", "tension"], "excited anticipation"),
    ("n", ["costume", "outfit", "getup"], "clothing of a distinctive style"),
    ("n", ["set", "stage_set"], "scenery for a production"),
    ("n", ["staging", "theatrical_production"], "the production of a play"),
    ("n", ["lecture", "talk", "public_lecture"], "a speech of instruction"),
    ("n", ["man", "adult_male"], "an adult male person"),
    ("n", ["woman", "adult_female"], "an adult female person"),
    ("n", ["child", "kid", "youngster"], "a young person"),
    ("n", ["foot", "human_foot", "pes"], "the lower extremity of the leg"),
    ("n", ["tooth"], "a hard bony structure in the jaw"),
    ("n", ["life", "living"], "the experience of being alive"),
    ("n", ["wife", "married_woman"], "a married female partner"),
    ("n", ["knife"], "a cutting tool with a blade"),
    ("n", ["mouse"], "a small rodent"),
    ("n", ["goose"], "a large waterfowl"),
    ("n", ["foolishness", "folly", "madness"], "a lack of good sense"),
    ("n", ["fertility", "richness"], "the property of producing abundantly"),
    ("n", ["screen", "silver_screen", "projection_screen"], "a display surface"),
    ("n", ["intention", "aim", "design"], "a planned purpose"),
    ("n", ["home", "dwelling", "domicile", "abode"], "where one lives"),
    ("n", ["timing"], "the regulation of occurrence in time"),
    ("n", ["charm", "appeal", "appealingness"], "attractiveness"),
    ("n", ["hurry", "haste", "rush"], "overly eager speed"),
    ("n", ["luck", "fortune", "chance"], "an unknown force shaping events"),
    ("n", ["money", "cash"], "a medium of exchange"),
    ("n", ["marriage", "matrimony", "union"], "the state of being married"),
    # verbs
    ("v", ["labor", "labour", "toil", "drudge"], "to work hard"),
    ("v", ["run", "go", "pass"], "to stretch out over a distance or time"),
    ("v", ["go", "travel", "proceed"], "to change location"),
    ("v", ["make", "create", "produce"], "to bring into existence"),
    ("v", ["carry", "transport"], "to move while supporting"),
    ("v", ["keep", "hold", "maintain"], "to cause to continue in a state"),
    ("v", ["turn", "become"], "to change into"),
    ("v", ["find", "discover", "locate"], "to come upon"),
    ("v", ["feel", "sense", "experience"], "to undergo an emotional state"),
    ("v", ["see", "perceive"], "to become aware of through the eyes"),
    ("v", ["say", "state", "tell"], "to express in words"),
    ("v", ["think", "believe", "consider"], "to judge or regard"),
    ("v", ["begin", "start", "commence"], "to take the first step"),
    ("v", ["end", "stop", "finish", "terminate"], "to bring to a close"),
    ("v", ["sink", "settle", "subside"], "to fall or descend"),
    ("v", ["bury", "entomb", "inhume"], "to place out of sight"),
    ("v", ["promise", "assure"], "to give an assurance"),
    ("v", ["deliver", "present", "render"], "to hand over or produce"),
    ("v", ["pile", "heap", "stack"], "to arrange in a quantity"),
    ("v", ["drift", "wander", "float"], "to move aimlessly"),
    ("v", ["stretch", "extend"], "to lengthen in time or space"),
    ("v", ["drag", "trail"], "to pull along slowly"),
    ("v", ["watch", "view", "observe"], "to look at attentively"),
    ("v", ["earn", "garner"], "to acquire by effort"),
    ("v", ["be", "exist"], "to have being"),
    ("v", ["have", "own", "possess"], "to hold as property"),
    ("v", ["do", "perform", "execute"], "to carry out"),
    ("v", ["tell", "narrate", "recount"], "to give an account of"),
    ("v", ["waste", "squander"], "to spend thoughtlessly"),
    ("v", ["ruin", "destroy"], "to damage irreparably"),
    ("v", ["spoil", "botch", "bungle"], "to do badly"),
    ("v", ["love", "adore"], "to feel deep affection for"),
    ("v", ["hate", "detest"], "to dislike intensely"),
    ("v", ["laugh", "express_mirth"], "to show amusement"),
    ("v", ["cry", "weep"], "to shed tears"),
    ("v", ["build", "construct", "make"], "to assemble from parts"),
    ("v", ["fill", "fill_up"], "to make full"),
    ("v", ["play", "act", "represent"], "to perform a role"),
    ("v", ["dry", "dry_out"], "to remove moisture from"),
    ("v", ["fly", "wing"], "to travel through the air"),
    # adverbs
    ("r", ["well", "good"], "in a satisfactory manner"),
    ("r", ["quickly", "rapidly", "speedily"], "with speed"),
    ("r", ["slowly", "tardily"], "without speed"),
    ("r", ["badly", "poorly", "ill"], "in an unsatisfactory manner"),
    ("r", ["far"], "at or to a great distance"),
    ("r", ["early"], "before the usual time"),
    ("r", ["late", "belatedly"], "after the usual time"),
    ("r", ["together"], "in contact or combination"),
    ("r", ["back", "backward", "backwards"], "toward the rear"),
    ("r", ["away", "off"], "from a place"),
]

EXCEPTIONS: dict[str, list[tuple[str, str]]] = {
    "noun": [
        ("children", "child"),
        ("feet", "foot"),
        ("geese", "goose"),
        ("knives", "knife"),
        ("lives", "life"),
        ("men", "man"),
        ("mice", "mouse"),
        ("teeth", "tooth"),
        ("wives", "wife"),
        ("women", "woman"),
    ],
    "verb": [
        ("are", "be"),
        ("began", "begin"),
        ("begun", "begin"),
        ("been", "be"),
        ("built", "build"),
        ("did", "do"),
        ("done", "do"),
        ("felt", "feel"),
        ("flew", "fly"),
        ("found", "find"),
        ("gone", "go"),
        ("had", "have"),
        ("has", "have"),
        ("held", "hold"),
        ("is", "be"),
        ("kept", "keep"),
        ("made", "make"),
        ("ran", "run"),
        ("said", "say"),
        ("saw", "see"),
        ("seen", "see"),
        ("sent", "send"),
        ("told", "tell"),
        ("thought", "think"),
        ("was", "be"),
        ("went", "go"),
        ("wept", "weep"),
        ("were", "be"),
    ],
    "adj": [
        ("best", "good"),
        ("better", "good"),
        ("further", "far"),
        ("furthest", "far"),
        ("worse", "bad"),
        ("worst", "bad"),
    ],
    "adv": [
        ("best", "well"),
        ("better", "well"),
        ("farther", "far"),
    ],
}

POS_SUFFIX = {"n": "noun", "v": "verb", "a": "adj", "r": "adv"}

HEADER = (
    "  1 This database is a miniature lexicon in the WordNet 3.x file format.\n"
    "  2 Generated by tools/build_lexicon.py; regenerate rather than editing.\n"
)

_WORD_RE = re.compile(r"[^\W\d_]+(?:'[^\W\d_]+)*")


def build_wordnet(out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    by_pos: dict[str, list[tuple[list[str], str]]] = {p: [] for p in POS_SUFFIX}
    for pos, members, gloss in SYNSETS:
        seen = set()
        for m in members:
            if m in seen:
                raise SystemExit(f"duplicate member {m!r} in synset {members}")
            seen.add(m)
        by_pos[pos].append((members, gloss))

    for pos, suffix in POS_SUFFIX.items():
        synsets = by_pos[pos]
        # First pass with placeholder offsets; the offset field is fixed-width
        # eight digits, so real byte positions can be substituted afterwards.
        lines = []
        for members, gloss in synsets:
            words = " ".join(f"{w} {i:x}" for i, w in enumerate(members))
            frames = " 00" if pos == "v" else ""
            lines.append(f"{{off}} 00 {pos} {len(members):02x} {words} 000{frames} | {gloss}\n")
        offsets = []
        cursor = len(HEADER.encode("utf-8"))
        for line in lines:
            offsets.append(cursor)
            cursor += len(line.format(off="00000000").encode("utf-8"))
        data_text = HEADER + "".join(
            line.format(off=f"{off:08d}") for line, off in zip(lines, offsets)
        )
        (out_dir / f"data.{suffix}").write_text(data_text, encoding="utf-8")

        index: dict[str, list[int]] = {}
        for (members, _), off in zip(synsets, offsets):
            for w in members:
                index.setdefault(w, []).append(off)
        index_lines = []
        for lemma in sorted(index):
            offs = index[lemma]
            offs_text = " ".join(f"{o:08d}" for o in offs)
            index_lines.append(f"{lemma} {pos} {len(offs)} 0 {len(offs)} 0 {offs_text}\n")
        (out_dir / f"index.{suffix}").write_text(HEADER + "".join(index_lines), encoding="utf-8")

        exc_lines = [f"{infl} {base}\n" for infl, base in sorted(EXCEPTIONS[suffix])]
        (out_dir / f"{suffix}.exc").write_text("".join(exc_lines), encoding="utf-8")


def corpus_words(csv_path: Path) -> list[str]:
    words = []
    with open(csv_path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            words.extend(m.group(0).lower() for m in _WORD_RE.finditer(row["text"]))
    return words


def stopword_list(path: Path) -> list[str]:
    out = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def build_vectors(out_path: Path) -> None:
    rng = np.random.RandomState(SEED)

    def unit(v):
        return v / np.linalg.norm(v)

    def noisy(base, scale):
        noise = rng.randn(DIM)
        return unit(base + scale * unit(noise))

    vectors: dict[str, np.ndarray] = {}
    # Synset members share a base direction so synonyms stay close in cosine.
    for _, members, _ in SYNSETS:
        base = unit(rng.randn(DIM))
        for w in members:
            if "_" in w or w in vectors:
                continue
            vectors[w] = noisy(base, NOISE)
    # Inflected forms sit next to their base lemma.
    for pairs in EXCEPTIONS.values():
        for infl, base_lemma in pairs:
            if infl in vectors:
                continue
            if base_lemma in vectors:
                vectors[infl] = noisy(vectors[base_lemma], INFLECTION_NOISE)
            else:
                vectors[infl] = unit(rng.randn(DIM))
    # Everything else seen in the corpus or stopword list gets its own direction.
    extra = sorted(
        set(corpus_words(DATA / "toy_reviews.csv")) | set(stopword_list(DATA / "stopwords.txt"))
    )
    for w in extra:
        if w not in vectors:
            vectors[w] = unit(rng.randn(DIM))

    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(vectors)} {DIM}\n")
        for w in sorted(vectors):
            comps = " ".join(f"{c:.5f}" for c in vectors[w])
            fh.write(f"{w} {comps}\n")


def main() -> int:
    build_wordnet(DATA / "wordnet")
    build_vectors(DATA / "vectors.txt")
    print(f"wrote {DATA / 'wordnet'} and {DATA / 'vectors.txt'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
