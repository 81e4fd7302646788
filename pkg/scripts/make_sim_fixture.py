#!/usr/bin/env python3
"""Regenerate the shipped 160-sentence simulation fixture.

Deterministic: template expansion with a fixed seed, tokens precomputed
with the default tagger resources so the committed corpus is self-contained.
Sentence frames are deliberately uniform across labels (same determiners,
same copulas) so the only separating signal is content vocabulary; a slice
of each label uses "great/good/nice" wording to put the labels' boundaries
genuinely close together.

Run from the repository root: python3 scripts/make_sim_fixture.py
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from teachloop.annotation import annotate_text, default_resources
from teachloop.annotation.corpus import sentence_to_record

OUT = Path(__file__).resolve().parents[1] / "src" / "teachloop" / "data" / "sim"

FOOD = ["bagels", "pancakes", "burgers", "tacos", "wings", "pastries", "steaks", "noodles", "desserts", "drinks"]
MEAL = ["meal", "lunch", "dinner", "combo", "buffet", "brunch"]
STAFF = ["waiter", "server", "hostess", "waitress"]
ROOM = ["patio", "decor", "lighting", "seating"]

# (count, template, slot pools); {f}/{m}/{s}/{r} pull from the noun pools
PRODUCTS = [
    (10, "The {f} were {a}", {"a": ["delicious", "tasty", "flavorful", "scrumptious", "yummy"]}),
    (6, "The {m} was {a}", {"a": ["delicious", "tasty", "flavorful"]}),
    (8, "The {f} were {a}", {"a": ["fresh", "crispy", "bland", "stale", "watery"]}),
    (4, "The {f} were {a}", {"a": ["good", "great", "nice", "amazing"]}),
    (6, "The {f} were {a} and {b}", {"a": ["fresh", "tasty", "crispy"], "b": ["delicious", "flavorful", "generous"]}),
    (6, "The {f} tasted {a}", {"a": ["delicious", "fresh", "stale", "bland"]}),
]
PRICE = [
    (6, "The {m} was {a}", {"a": ["overpriced", "expensive", "pricey", "costly"]}),
    (5, "The {f} were {a}", {"a": ["overpriced", "expensive", "pricey"]}),
    (5, "The {m} was a great deal", {}),
    (3, "The {m} was a good value", {}),
    (5, "The {m} was pretty cheap", {}),
    (3, "The {f} were very affordable", {}),
    (2, "The bill was {a}", {"a": ["steep", "outrageous"]}),
    (2, "Way too expensive for the {n}", {"n": ["portion", "serving"]}),
    (6, "The {m} was a real bargain", {}),
    (3, "The {f} were a real bargain", {}),
]
SERVICE = [
    (10, "The {s} was {a}", {"a": ["friendly", "attentive", "helpful", "polite"]}),
    (8, "The {s} was {a}", {"a": ["rude", "slow", "dismissive", "careless"]}),
    (6, "The service was {a}", {"a": ["great", "quick", "nice", "friendly", "slow", "terrible"]}),
    (6, "The staff were {a}", {"a": ["friendly", "welcoming", "rude", "attentive", "helpful", "polite"]}),
    (6, "The {s} was {a} all night", {"a": ["helpful", "attentive", "slow", "rude"]}),
    (4, "The {s} ignored us", {}),
]
ENVIRONMENT = [
    (10, "The {r} was {a}", {"a": ["cozy", "charming", "lovely", "warm"]}),
    (8, "The {r} was {a}", {"a": ["noisy", "cramped", "loud", "dingy"]}),
    (8, "The atmosphere was {a}", {"a": ["great", "nice", "warm", "relaxed", "lovely", "cozy", "charming", "pleasant"]}),
    (6, "The dining room was {a}", {"a": ["cozy", "intimate", "noisy", "charming", "warm", "quiet"]}),
    (4, "The garden was {a}", {"a": ["lovely", "beautiful", "pleasant", "quiet"]}),
    (4, "A {a} spot near the garden", {"a": ["cozy", "charming", "noisy", "lovely"]}),
]

LABELS = [
    ("price", "Price", "#e11d48", PRICE, {"m": MEAL, "f": FOOD}),
    ("service", "Service", "#2563eb", SERVICE, {"s": STAFF}),
    ("environment", "Environment", "#059669", ENVIRONMENT, {"r": ROOM}),
    ("products", "Products", "#d97706", PRODUCTS, {"f": FOOD, "m": MEAL}),
]

LEXICON = [
    ("delicious", ["tasty", "yummy", "flavorful", "scrumptious"]),
    ("good", ["great", "nice", "fine", "decent", "cheap"]),
    ("fresh", ["crispy"]),
    ("expensive", ["overpriced", "costly", "pricey", "steep", "outrageous"]),
    ("cheap", ["affordable", "inexpensive"]),
    ("bargain", ["steal"]),
    ("price", ["purchase", "pricey", "cheap", "cost", "pricing"]),
    ("friendly", ["kind", "attentive", "welcoming", "polite", "helpful"]),
    ("rude", ["dismissive", "unfriendly", "curt", "slow", "careless"]),
    ("cozy", ["charming", "warm", "intimate", "snug"]),
    ("lovely", ["beautiful", "pleasant", "quiet"]),
    ("noisy", ["loud", "cramped", "dingy"]),
    ("bland", ["stale", "watery", "soggy"]),
    ("atmosphere", ["ambiance", "vibe"]),
]

PHRASEBOOK = {
    "price": [
        "a good bargain", "pretty cheap", "a great deal", "good but overpriced", "well priced",
        "very affordable", "quite pricey", "too expensive", "cheap drinks",
        "overpriced pastries", "costly steaks", "a cheap lunch", "expensive tacos",
        "overpriced bagels", "pricey pancakes", "expensive burgers", "cheap wings",
        "affordable noodles", "overpriced desserts", "a cheap dinner", "cheap bread",
        "an affordable combo", "a pricey buffet", "an overpriced brunch", "a costly meal",
    ],
    "service": [
        "great service", "friendly staff", "rude waiter", "attentive crew",
        "friendly service", "slow service", "a friendly waitress", "helpful servers",
    ],
    "environment": [
        "great atmosphere", "cozy dining room", "charming patio", "lovely garden",
        "a cozy spot", "noisy seating", "warm lighting", "charming decor",
    ],
    "products": [
        "delicious food", "tasty bread", "fresh pastries", "crispy wings",
        "delicious drinks", "tasty desserts", "flavorful noodles", "fresh bagels",
    ],
}


def expand_label(rng: random.Random, templates, slots) -> list[str]:
    texts: list[str] = []
    seen: set[str] = set()
    for count, template, locals_ in templates:
        pools = {**slots, **locals_}
        made = 0
        guard = 0
        while made < count:
            guard += 1
            if guard > 3000:
                raise RuntimeError(f"cannot fill template {template!r}")
            values = {name: rng.choice(pool) for name, pool in pools.items()}
            if "a" in values and "b" in values and values["a"] == values["b"]:
                continue
            text = template.format(**values)
            if text in seen:
                continue
            seen.add(text)
            texts.append(text)
            made += 1
    return texts


GOODISH = ("good", "great", "nice", "amazing", "deal", "value", "cheap", "affordable")


def main() -> None:
    rng = random.Random(160)
    resources = default_resources()
    per_label_texts = {
        key: expand_label(rng, templates, slots)
        for key, _, _, templates, slots in LABELS
    }
    for key, texts in per_label_texts.items():
        assert len(texts) == 40, (key, len(texts))

    # id order shapes the cold-start rounds (selection breaks ties by id):
    # the first twenty sentences alternate products and price, with the
    # products side mixing taste- and good-family wording and the price side
    # strictly expensive-family, so the earliest learned rules are clean and
    # the other labels' vocabulary arrives later in the id sequence.
    products = per_label_texts["products"]
    price = per_label_texts["price"]
    prod_good = [t for t in products if any(w in t for w in GOODISH)]
    prod_rest = [t for t in products if t not in prod_good]
    price_plain = [t for t in price if not any(w in t for w in GOODISH)]
    early_products = prod_rest[:3] + prod_good[:2] + prod_rest[3:7] + prod_good[2:3]
    early_price = price_plain[:10]
    late_price = [t for t in price if "bargain" in t]
    leftovers = {
        "products": [t for t in products if t not in early_products],
        "price": [t for t in price if t not in early_price and t not in late_price],
        "service": list(per_label_texts["service"]),
        "environment": list(per_label_texts["environment"]),
    }

    ordered: list[tuple[str, str]] = []
    for i in range(10):
        ordered.append(("products", early_products[i]))
        ordered.append(("price", early_price[i]))
    queues = [(k, leftovers[k]) for k in ("price", "service", "environment", "products")]
    cursor = 0
    while any(q for _, q in queues):
        key, queue = queues[cursor % len(queues)]
        if queue:
            ordered.append((key, queue.pop(0)))
        cursor += 1
    ordered.extend(("price", t) for t in late_price)
    assert len(ordered) == 160

    OUT.mkdir(parents=True, exist_ok=True)
    corpus_lines = []
    oracle_lines = []
    for key, text in ordered:
        idx = len(corpus_lines) + 1
        sid = f"s{idx:03d}"
        sentence = annotate_text(text, resources, sentence_id=sid)
        corpus_lines.append(json.dumps(sentence_to_record(sentence), ensure_ascii=False))
        oracle_lines.append(json.dumps({"id": sid, "labels": [key]}, ensure_ascii=False))

    (OUT / "corpus.jsonl").write_text("\n".join(corpus_lines) + "\n", encoding="utf-8")
    (OUT / "oracle.jsonl").write_text("\n".join(oracle_lines) + "\n", encoding="utf-8")
    (OUT / "labels.jsonl").write_text(
        "\n".join(
            json.dumps({"key": k, "display": d, "color": c}, ensure_ascii=False)
            for k, d, c, _, _ in LABELS
        )
        + "\n",
        encoding="utf-8",
    )
    (OUT / "lexicon.jsonl").write_text(
        "\n".join(
            json.dumps({"head": h, "members": m}, ensure_ascii=False) for h, m in LEXICON
        )
        + "\n",
        encoding="utf-8",
    )
    (OUT / "phrasebook.json").write_text(
        json.dumps(PHRASEBOOK, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    print(f"wrote {len(corpus_lines)} sentences to {OUT}")


if __name__ == "__main__":
    main()
