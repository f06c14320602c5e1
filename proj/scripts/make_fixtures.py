#!/usr/bin/env python3
"""Regenerates the synthetic fixtures under data/fixtures.

All output is a pure function of the seed below; rerunning produces
byte-identical files.
"""

import csv
import random
from pathlib import Path

SEED = 20240611
OUT = Path(__file__).resolve().parent.parent / "data" / "fixtures"

# Two vocabularies with no token in common. Class 1 words are built from the
# bundled seed lexicon so the same corpus exercises annotate-auto as well.
NEUTRAL = [
    "الماتش", "مليح", "بزاف", "الفيديو", "شكرا", "الخدمة", "البلاد", "الطريق", "الدار",
    "الجامعة", "القهوة", "الصباح", "العائلة", "الحومة", "الكرة", "المنتخب", "الفريق",
    "الشاطئ", "الصيف", "البحر", "الخبز", "السوق", "الحليب", "الكتاب", "المدرسة", "الطالب",
    "الاستاذ", "الحافلة", "المدينة", "الجبل",
]
HATEFUL = [
    "كلب", "حمار", "خنزير", "وسخ", "حقير", "جبان", "خاين", "بهيم", "مكلخ", "زبالة",
    "قذر", "تافه", "غبي", "منافق", "كذاب", "حثالة", "وقح", "ملعون", "نذل", "سافل",
    "منحط", "مجرم", "عنصري", "جرذ", "خونة", "عميل", "حشرة", "قمامة", "معفن", "ذليل",
]

NEUTRAL_TEMPLATES = [
    "{w} {w} {w} يعطيك الصحة",
    "والله {w} {w} هذا",
    "{w} {w} {w} {w}",
    "صحا خويا {w} {w} :)",
    "شوف هنا {w} {w} http://t.co/xyz",
    "ربي يحفظ {w} {w} {w}",
    "نحب {w} و {w} بزااااف",
    "ماشاء الله {w} {w} ١٢٣",
]
HATEFUL_TEMPLATES = [
    "يا {h} يا {h}",
    "{h} {w} {h} :(",
    "انتوما {h} و {h}",
    "هادا {h} {h} ماشي {w}",
    "روح يا {h} https://youtu.be/abc",
    "كل {w} {h}",
    "{h}!!! {h} {w}",
    "اسكت يا {h} {w} {w}",
]
ARABIZI = [
    ("kreht men hadi el miziria", 0),
    ("khouya rak mli7 bzaf", 0),
    ("3ib 3lik ya kelb", 1),
    ("ma tech-rich zit el aliha", 0),
    ("ya 7mar roh", 1),
    ("sa7a ftourkoum", 0),
]
DIACRITICS = ["َ", "ُ", "ِ", "ّ", "ْ", "ً"]


def decorate(rng, text):
    out = []
    for ch in text:
        out.append(ch)
        if "ء" <= ch <= "ي" and rng.random() < 0.04:
            out.append(rng.choice(DIACRITICS))
    text = "".join(out)
    return text.replace("ك", "گ", 1) if rng.random() < 0.1 else text


def raw_comments(rng):
    sources = ["youtube", "facebook", "twitter"]
    rows = []
    for i in range(120):
        hateful = i % 5 in (1, 3)
        tpl = rng.choice(HATEFUL_TEMPLATES if hateful else NEUTRAL_TEMPLATES)
        text = tpl
        while "{w}" in text:
            text = text.replace("{w}", rng.choice(NEUTRAL), 1)
        while "{h}" in text:
            text = text.replace("{h}", rng.choice(HATEFUL), 1)
        rows.append({"id": f"c{i + 1:04d}", "text": decorate(rng, text), "source": rng.choice(sources)})
    for j, (text, _) in enumerate(ARABIZI):
        rows.append({"id": f"z{j + 1:04d}", "text": text, "source": "youtube"})
    return rows


def disjoint_corpus(rng, n, prefix):
    rows = []
    for i in range(n):
        label = i % 2
        vocab = HATEFUL if label else NEUTRAL
        words = [rng.choice(vocab) for _ in range(rng.randint(6, 14))]
        text = " ".join(words)
        rows.append({
            "id": f"{prefix}{i + 1:04d}", "text": text, "label": str(label), "source": "unknown",
            "clean_text": text, "script": "arabic", "label_source": "manual",
        })
    return rows


def ncd_lines(rng):
    lines = []
    for i in range(40):
        vocab = NEUTRAL if i % 2 == 0 else HATEFUL
        while True:
            words = [rng.choice(vocab) for _ in range(rng.randint(12, 30))]
            line = " ".join(words)
            if len(line.encode("utf-8")) >= 100:
                break
        lines.append(line)
    # A few short and Latin lines keep the range checks honest.
    lines += ["قصير", "نص", "abc def ghi", "x"]
    return lines


def write_csv(path, rows, fields):
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = csv.DictWriter(f, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)
    write_csv(OUT / "raw_comments.csv", raw_comments(rng), ["id", "text", "source"])
    full = ["id", "text", "label", "source", "clean_text", "script", "label_source"]
    write_csv(OUT / "disjoint_200.csv", disjoint_corpus(rng, 200, "d"), full)
    write_csv(OUT / "separable_60.csv", disjoint_corpus(rng, 60, "s"), full)
    (OUT / "ncd_lines.txt").write_text("\n".join(ncd_lines(rng)) + "\n", encoding="utf-8")
    with open(OUT.parent / "seed_lexicon.txt", "w", encoding="utf-8") as f:
        f.write("# Seed list of offensive terms for automatic annotation, one entry per line.\n")
        for w in HATEFUL:
            f.write(w + "\n")
        f.write("يلعن\n")
    write_csv(OUT / "gold_4.csv", [
        {"id": "e1", "label": "1"}, {"id": "e2", "label": "1"}, {"id": "e3", "label": "0"}, {"id": "e4", "label": "0"},
    ], ["id", "label"])
    write_csv(OUT / "pred_4.csv", [
        {"id": "e1", "label": "1"}, {"id": "e2", "label": "0"}, {"id": "e3", "label": "0"}, {"id": "e4", "label": "0"},
    ], ["id", "label"])


if __name__ == "__main__":
    main()
