#!/usr/bin/env python3
"""Regenerates the bundled mini source manifests.

Output is a pure function of SEED: running this twice yields identical files.
Every positive text mentions the attribute phrases listed in its image's
concept_tags, so antonym substitution visibly breaks the text/tag overlap.
"""

import json
import random
from pathlib import Path

SEED = 20170
HERE = Path(__file__).resolve().parent

COLORS = ["red", "blue", "green", "yellow", "orange", "purple", "pink", "brown", "gray", "white", "black", "silver"]
SIZES = ["tall", "small", "big", "little", "large", "tiny", "old", "young"]

CATEGORIES = {
    "animal": ["dog", "cat", "horse", "cow", "sheep", "goat", "pony", "rabbit"],
    "vehicle": ["car", "bus", "truck", "bicycle", "tram", "scooter", "van", "tractor"],
    "food": ["pizza", "cake", "sandwich", "pie", "bowl", "cookie", "salad", "burger"],
    "furniture": ["chair", "table", "sofa", "bench", "shelf", "lamp", "stool", "desk"],
    "sport": ["ball", "kite", "surfboard", "skateboard", "racket", "helmet", "glove", "bat"],
    "building": ["tower", "house", "barn", "church", "cabin", "lighthouse", "shed", "hut"],
}
PLACES = ["on the street", "in the park", "beside the river", "at the market", "near the station", "in the yard"]


def phrase(rng, nouns):
    return f"{rng.choice(COLORS)} {rng.choice(nouns)}", f"{rng.choice(SIZES)} {rng.choice(nouns)}"


def captions(rng, n):
    """Short one-sentence captions with a two-level category path."""
    out = []
    tops = sorted(CATEGORIES)
    for i in range(n):
        top = tops[i % len(tops)]
        a, b = phrase(rng, CATEGORIES[top])
        noun = a.split()[1]
        out.append({
            "id": f"cap-{i:03d}",
            "image_ref": f"captions/{i:03d}.jpg",
            "texts": [f"A {a} and a {b} {rng.choice(PLACES)}."],
            "category_path": [top, noun],
            "concept_tags": [a, b],
        })
    return out


def descriptions(rng, n):
    """Two-sentence stand-alone descriptions of what the image shows."""
    openers = ["This photograph shows", "The picture depicts", "In this image we see", "The scene contains"]
    closers = ["Next to it stands", "Behind it is", "To one side there is", "Close by rests"]
    out = []
    tops = sorted(CATEGORIES)
    for i in range(n):
        nouns = CATEGORIES[tops[i % len(tops)]]
        a, b = phrase(rng, nouns)
        out.append({
            "id": f"desc-{i:03d}",
            "image_ref": f"descriptions/{i:03d}.jpg",
            "texts": [
                f"{rng.choice(openers)} a {a} {rng.choice(PLACES)}. "
                f"{rng.choice(closers)} a {b} under a {rng.choice(['clear', 'cloudy', 'bright'])} sky."
            ],
            "concept_tags": [a, b],
        })
    return out


def stories(rng, n, members=4):
    """Narrative stories: each member image carries one past-tense caption."""
    starts = ["Yesterday our family went", "Last weekend my friends and I drove", "On Sunday we walked", "Early that morning we travelled"]
    middles = ["Then we noticed", "Later the kids found", "After lunch we spotted", "Finally we remembered"]
    feelings = ["Everyone laughed about it for hours.", "It was the best part of the trip.", "We took a lot of pictures.", "Nobody wanted to go home."]
    out = []
    tops = sorted(CATEGORIES)
    for s in range(n):
        story_id = f"story-{s:03d}"
        for m in range(members):
            nouns = CATEGORIES[tops[(s + m) % len(tops)]]
            a, b = phrase(rng, nouns)
            if m == 0:
                text = f"{rng.choice(starts)} to the {rng.choice(['lake', 'farm', 'fair', 'coast'])}. We saw a {a}."
            elif m == members - 1:
                text = f"In the end we found a {a} and a {b}. {rng.choice(feelings)}"
            else:
                text = f"{rng.choice(middles)} a {a} beside a {b}."
            out.append({
                "id": f"{story_id}-{m}",
                "image_ref": f"stories/{s:03d}-{m}.jpg",
                "texts": [text],
                "story_id": story_id,
                "concept_tags": [a, b] if m != 0 else [a],
            })
    return out


SYLLABLES = ["ka", "lo", "mir", "ta", "ven", "so", "rux", "pel", "dor", "qui", "zan", "bel"]
GROUPS = ["mammal", "beetle", "fern", "songbird", "lizard", "orchid", "fish", "moth"]
PARTS = ["tail", "wings", "leaves", "shell", "beak", "petals", "fins", "legs", "ears", "spines"]
REGIONS = ["central Asia", "the Andes", "southern Africa", "the Pacific islands", "northern Europe", "the Amazon basin"]


def concepts(rng, n):
    """Encyclopedic summaries plus one or two example images per concept."""
    names = set()
    while len(names) < n:
        names.add("".join(rng.choice(SYLLABLES) for _ in range(3)).capitalize())
    images, summaries = [], []
    for i, name in enumerate(sorted(names)):
        p1, p2 = rng.sample(PARTS, 2)
        a = f"{rng.choice(COLORS)} {p1}"
        b = f"{rng.choice(SIZES)} {p2}"
        group = rng.choice(GROUPS)
        summaries.append({
            "id": f"sum-{i:03d}",
            "image_ref": f"summaries/{i:03d}.txt",
            "concept": name,
            "texts": [
                f"The {name} is a species of {group} native to {rng.choice(REGIONS)}. "
                f"It is recognised by its {a} and {b}. "
                f"The species was first described in {1800 + rng.randrange(200)} and is classified as {rng.choice(['least concern', 'vulnerable', 'near threatened'])}."
            ],
        })
        for k in range(1 + i % 2):
            images.append({
                "id": f"cimg-{i:03d}-{k}",
                "image_ref": f"concepts/{i:03d}-{k}.jpg",
                "concept": name,
                "concept_tags": [name.lower(), a, b],
            })
    return images, summaries


PRODUCTS = ["bottle", "sneaker", "phone", "watch", "perfume", "jacket", "headphones", "backpack"]
SLOGAN_A = ["Taste the freedom", "Just imagine", "Feel the difference", "Think different", "Live every moment", "Dream without limits", "Make it happen", "Because you deserve it", "Find your rhythm", "Never settle"]
SLOGAN_B = ["Every moment counts.", "Your story starts today.", "Nothing else comes close.", "Be yourself.", "Go beyond.", "Share the feeling.", "Stay curious.", "Believe in more."]


def slogans(rng, n):
    """Advertisement slogans that never name the depicted product."""
    combos = [(x, y) for x in SLOGAN_A for y in SLOGAN_B]
    rng.shuffle(combos)
    out = []
    for i in range(n):
        x, y = combos[i % len(combos)]
        product = rng.choice(PRODUCTS)
        out.append({
            "id": f"ad-{i:03d}",
            "image_ref": f"ads/{i:03d}.jpg",
            "texts": [f"{x}. {y}"],
            "concept_tags": [f"{rng.choice(COLORS)} {product}", product],
        })
    return out


def write(name, items):
    with open(HERE / name, "w", encoding="utf-8", newline="\n") as f:
        for item in items:
            f.write(json.dumps(item, sort_keys=True) + "\n")


def main():
    rng = random.Random(SEED)
    write("captions.jsonl", captions(rng, 72))
    write("descriptions.jsonl", descriptions(rng, 72))
    write("stories.jsonl", stories(rng, 64))
    images, summaries = concepts(rng, 72)
    write("concept_images.jsonl", images)
    write("concept_summaries.jsonl", summaries)
    write("slogans.jsonl", slogans(rng, 72))
    config = {
        "seed": 7,
        "sources": {
            "captions": "captions.jsonl",
            "descriptions": "descriptions.jsonl",
            "stories": "stories.jsonl",
            "concept_images": "concept_images.jsonl",
            "concept_summaries": "concept_summaries.jsonl",
            "slogans": "slogans.jsonl",
        },
        "targets": {name: 50 for name in [
            "Uncorrelated", "Interdependent", "Complementary", "Illustration",
            "Anchorage", "Contrasting", "Bad Illustration", "Bad Anchorage",
        ]},
        "max_sentences": 10,
    }
    with open(HERE / "build.json", "w", encoding="utf-8", newline="\n") as f:
        f.write(json.dumps(config, indent=2) + "\n")


if __name__ == "__main__":
    main()
