#!/usr/bin/env python3
"""Generates the bundled demo corpus and embedding fixtures.

Outputs (committed under data/fixture/):
  statements_200.csv          200 labeled workplace statements (110 / 90)
  embeddings_100d.txt         100-dim vectors for the corpus vocabulary,
                              semantically clustered so related words sit
                              near each other (pretrained-style)
  embeddings_100d_debiased.txt  same cluster structure, fresh noise draws

The corpus is synthetic demo data in the style of the public
sexist-workplace-statements dataset; point the CLI at the real CSV and a
real GloVe file for full-scale runs.
"""

import csv
import random
import zlib
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "data" / "fixture"

SLANG = {"u": "you", "r": "are", "ur": "your", "thx": "thanks",
         "b4": "before", "pls": "please", "ppl": "people"}

TERMINAL = ".!?,"


def normalize(text):
    """Mirror of the engine's normalization pipeline (for dedup + vocab)."""
    words = text.lower().split()
    words = [w for w in words
             if "@" not in w and "://" not in w
             and not w.startswith(("http://", "https://", "www."))]
    kept = []
    for i, w in enumerate(words):
        if w.startswith("#") and i == len(words) - 1:
            continue
        w = w.replace("#", "")
        if w:
            kept.append(w)
    kept = [SLANG.get(w, w) for w in kept]
    tokens = []
    for chunk in kept:
        for w in chunk.split():
            tail = []
            while w and w[-1] in TERMINAL:
                tail.append(w[-1])
                w = w[:-1]
            if w:
                tokens.append(w)
            tokens.extend(reversed(tail))
    return tokens


# ---------------------------------------------------------------- pools --
# Pools are deliberately wide so most content words occur only a handful
# of times in the 200 statements: generalizing to a rarely-seen synonym
# is what separates pretrained from randomly initialized embeddings.
POOLS = {
    "fem": ["women", "girls", "ladies", "females", "gals"],
    "male": ["men", "guys", "gentlemen", "fellows"],
    "emo": ["emotional", "dramatic", "hysterical", "irrational", "moody",
            "sensitive", "fragile", "temperamental", "weepy", "flighty",
            "frantic", "excitable", "erratic", "jumpy", "skittish",
            "volatile"],
    "appearance": ["pretty", "cute", "attractive", "charming", "sweet",
                   "adorable", "gorgeous", "photogenic", "delicate"],
    "competent": ["logical", "rational", "decisive", "composed", "focused",
                  "levelheaded", "disciplined", "steady", "methodical",
                  "calm"],
    "role_high": ["manager", "director", "engineer", "executive", "lead",
                  "architect", "chief", "principal", "supervisor",
                  "officer", "strategist", "partner"],
    "role_low": ["secretary", "receptionist", "assistant", "typist",
                 "greeter"],
    "office": ["report", "budget", "deadline", "presentation", "audit",
               "roadmap", "forecast", "proposal", "review", "meeting",
               "briefing", "retrospective", "standup", "postmortem",
               "handover", "estimate"],
    "nverb": ["finished", "reviewed", "shipped", "scheduled", "presented",
              "drafted", "approved", "updated", "submitted", "merged",
              "archived", "summarized", "polished", "rehearsed"],
    "day": ["monday", "tuesday", "wednesday", "thursday", "friday"],
    "artifact": ["dashboard", "pipeline", "feature", "prototype", "release",
                 "integration", "migration", "rollout", "refactor",
                 "benchmark"],
    "good_adj": ["solid", "promising", "strong", "healthy", "encouraging",
                 "stable", "tidy", "reassuring", "excellent"],
    "soft_task": ["party planning", "greeting visitors", "decorating the office",
                  "organizing snacks", "picking the gift baskets",
                  "watering the plants"],
    "hard_task": ["strategy", "architecture", "negotiations", "budgeting",
                  "forecasting", "procurement", "escalations"],
    "field": ["engineering", "finance", "sales", "research", "operations",
              "security", "logistics"],
    "deal_word": ["contract", "deal", "acquisition", "partnership",
                  "renewal", "tender"],
    "room_word": ["boardroom", "conference room", "back office", "war room"],
    "stress_word": ["stressful", "hectic", "tense", "chaotic", "demanding",
                    "turbulent"],
}


def fill(rng, template):
    out = template
    while "{" in out:
        start = out.index("{")
        end = out.index("}", start)
        key = out[start + 1:end]
        out = out[:start] + rng.choice(POOLS[key]) + out[end + 1:]
    return out


# Statements quoted in the public dataset's description; the demo corpus
# keeps them so the documented examples work out of the box.
DATASET_EXAMPLES = [
    ("Women always get more upset than men.", 1),
    ("The people at work are childish. it's run by women and when women dont agree to something, oh man.", 1),
    ("I'm going to miss her resting bitch face.", 1),
    ("Seeing as you two think this is a modelling competition, I give you two a score of negative ten for your looks.", 1),
    ("No mountain is high enough for a girl to climb.", 0),
    ("The Belgian bar near the end of the road was a great spot to go after work", 0),
    ("It seems the world is not ready for one of the most powerful and influential countries to have a woman leader. So sad.", 0),
    ("Can you explain why what she described there is wrong?", 0),
]

# The bulk of both classes shares sentence skeletons; the label hangs on
# the subject x adjective-cluster combination (women+excitable is sexist,
# women+composed is praise, the team+excitable is just a bad week), so
# classifying a rare synonym correctly requires embedding-level knowledge.
SEXIST_TEMPLATES = [
    ("the {fem} get {emo} when the {office} turns {stress_word}.", 9),
    ("{fem} are too {emo} to run the {office}.", 9),
    ("keep the {fem} off the {deal_word}, they turn {emo} under pressure.", 7),
    ("a woman cannot stay {competent} once the {office} gets {stress_word}.", 6),
    ("she is too {appearance} to be taken seriously as a {role_high}.", 6),
    ("{fem} belong in {role_low} roles, not {role_high} ones.", 6),
    ("the {fem} are {emo}, so the {male} should present the {office}.", 6),
    ("{fem} are naturally better at {soft_task} than {hard_task}.", 6),
    ("she only got the {role_high} job because she is {appearance}.", 5),
    ("let the {fem} plan the office party, the {male} will handle the {hard_task}.", 4),
    ("we need a man to run the {office} with the client.", 3),
    ("hiring a young woman for the {field} team is a gamble, she will just leave to have kids.", 3),
    ("be a dear and fetch the coffee before the {office}.", 2),
    ("never send a woman to close a {deal_word}, they fold under pressure.", 3),
    ("for a girl, your {office} work is surprisingly {competent}.", 4),
    ("surely your husband set up the {artifact} for you, right?", 2),
    ("the {fem} in {field} are only there to fill the diversity quota.", 3),
    ("no wonder the {office} failed, a woman was running it.", 3),
    ("her {office} was fine, for a woman.", 3),
    ("dont put a girl on the night shift, she will cry over the {office}.", 2),
    ("maybe you should smile more if you want to make {role_high} here.", 2),
    ("a girl running the {deal_word}? the {office} will be a mess.", 2),
    ("the client expects a man, so send one of the {male} to the {office}.", 2),
]

SEXIST_RAW = [
    "Girls simply can't handle a server room #justsaying",
    "u r too pretty to be an engineer",
    "@mark women should stick to the front desk",
    "Typical WOMAN driver of a project plan...",
    "why promote her? office morale will tank lol https://example.com/post",
    "another she-boss crying in the standup #drama",
    "the ladies r b4 everything else here just decoration",
    "thx but we want a real engineer, not a girl coder",
]

NEUTRAL_TEMPLATES = [
    # same skeleton vocabulary as the sexist core, different subjects or
    # polarity: these force the models past keyword spotting
    ("the {fem} stayed {competent} while the {office} got {stress_word}.", 8),
    ("the team got {emo} when the {office} turned {stress_word}.", 8),
    ("he got {emo} about the {artifact} delay and apologized later.", 6),
    ("our {role_high} kept everyone {competent} through the {stress_word} {office}.", 6),
    ("the new {role_high} is {competent} and the {office} shows it.", 5),
    ("it is normal to feel {emo} during a {stress_word} {office}.", 5),
    ("she was promoted to {role_high} after the {artifact} launch.", 5),
    ("the women on the team closed the {deal_word} this quarter.", 4),
    # plain office traffic
    ("the {office} is due on {day}.", 4),
    ("she {nverb} the {office} before the deadline.", 4),
    ("our team {nverb} the new {artifact} ahead of schedule.", 4),
    ("he {nverb} the {office} with the client yesterday.", 3),
    ("the quarterly {office} looks {good_adj} this time.", 3),
    ("please book the {room_word} for the {office} on {day}.", 3),
    ("more women joined the {field} team this quarter.", 2),
    ("the {office} ran too long today, let us keep it short on {day}.", 3),
    ("he cannot make the {office}, she will run it instead.", 3),
    ("can you forward the {office} notes to the team?", 2),
]

NEUTRAL_RAW = [
    "Great sprint everyone #winning",
    "u did great in the demo today",
    "@team the build is green again",
    "the roadmap doc lives at https://docs.example.com/plan now",
    "HUGE thanks to everyone for the release push!",
    "lunch orders for the offsite close at noon.",
    "badge readers are down, use the side entrance.",
    "the #quarterly numbers go out after the board call",
]


def expand(rng, templates, raws, target, seen):
    out = []
    for template, count in templates:
        made = 0
        attempts = 0
        while made < count and attempts < 60:
            attempts += 1
            text = fill(rng, template)
            key = tuple(normalize(text))
            if key and key not in seen:
                seen.add(key)
                out.append(text)
                made += 1
        if made < count:
            raise SystemExit(f"could not fill template: {template}")
    for text in raws:
        key = tuple(normalize(text))
        if key and key not in seen:
            seen.add(key)
            out.append(text)
    if len(out) < target:
        raise SystemExit(f"only {len(out)} statements, need {target}")
    return out[:target]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rng = random.Random(manual_seed := 20240 + 811)
    seen = set()
    for text, _ in DATASET_EXAMPLES:
        seen.add(tuple(normalize(text)))

    sexist = expand(rng, SEXIST_TEMPLATES, SEXIST_RAW, 106, seen)
    neutral = expand(rng, NEUTRAL_TEMPLATES, NEUTRAL_RAW, 86, seen)

    rows = [(t, l) for t, l in DATASET_EXAMPLES]
    rows += [(t, 1) for t in sexist]
    rows += [(t, 0) for t in neutral]
    order = random.Random(7).sample(range(len(rows)), len(rows))
    rows = [rows[i] for i in order]
    assert len(rows) == 200
    assert sum(l for _, l in rows) == 110

    with open(OUT / "statements_200.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["text", "label"])
        writer.writerows(rows)

    # ------------------------------------------------------- embeddings --
    vocab = {}
    for text, _ in rows:
        for tok in normalize(text):
            vocab[tok] = vocab.get(tok, 0) + 1
    print(f"corpus vocabulary: {len(vocab)} tokens")

    # words that stay out of the embedding file (exercise the OOV path);
    # rare and non-discriminative
    holdouts = {"belgian", "mountain", "modelling", "childish", "badge", "negative"}
    holdouts &= set(vocab)
    print(f"holdouts: {sorted(holdouts)}")

    extra_words = """about above after again all almost along already also
    always another any anyone around because been before being below between
    both bring call came chair change check city close come could day desk
    does done door down during each early email end even ever every few find
    first floor found four from gave give goes going good great group hand
    have having hello help here high hold home hour idea into item just keep
    know large last late learn left life like line list little long look made
    make many may member might month morning most move much must name near
    need never next nice night note nothing number offer often once only
    open order other over own page paper part phone place plan point print
    put question quite rather read right room said same say see send sent
    seven several shall share short show side since site six small some soon
    staff stand start state still such sure table take talk tell than that
    their them then there these thing think third this those three time
    today together told took total turn under until upon used using very
    visit wait walk want week well went were what when where which while
    whole will with word write year your""".split()

    dim = 100
    nprng = np.random.default_rng(manual_seed)

    # cluster centers: one per substitution pool, one per punctuation class
    centers = {}
    for pool, words in POOLS.items():
        centers[pool] = nprng.normal(0.0, 0.55, dim)
    word_pool = {}
    for pool, words in POOLS.items():
        for w in words:
            for tok in normalize(w):
                word_pool.setdefault(tok, pool)

    def vector(token, noise_rng):
        if token in word_pool:
            base = centers[word_pool[token]]
        else:
            # unpooled words get a stable pseudo-center of their own
            h = zlib.crc32(token.encode("utf-8"))
            base = np.random.default_rng(h).normal(0.0, 0.55, dim)
        return base + noise_rng.normal(0.0, 0.35, dim)

    def write_file(path, noise_seed):
        noise_rng = np.random.default_rng(noise_seed)
        tokens = [t for t in sorted(vocab) if t not in holdouts]
        tokens += [w for w in extra_words if w not in vocab]
        with open(path, "w", encoding="utf-8") as fh:
            for tok in tokens:
                vec = vector(tok, noise_rng)
                fh.write(tok + " " + " ".join(f"{v:.5f}" for v in vec) + "\n")
        print(f"{path.name}: {len(tokens)} vectors, dim {dim}")

    write_file(OUT / "embeddings_100d.txt", manual_seed + 1)
    write_file(OUT / "embeddings_100d_debiased.txt", manual_seed + 2)

    lengths = [len(normalize(t)) for t, _ in rows]
    print(f"token lengths: min {min(lengths)} max {max(lengths)}")
    assert max(lengths) <= 48


if __name__ == "__main__":
    main()
