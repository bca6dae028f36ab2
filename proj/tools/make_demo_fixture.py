#!/usr/bin/env python3
"""Writes the demo catalog and its placeholder book texts.

Usage: make_demo_fixture.py OUT_DIR

Output is a pure function of this file: rerunning it reproduces the committed fixture.
"""
import csv
import random
import sys
from pathlib import Path

HARVARD = [
    ("Hamlet", "William Shakespeare", 1603),
    ("The Autobiography of Benjamin Franklin", "Benjamin Franklin", 1791),
    ("The Journal of John Woolman", "John Woolman", 1774),
    ("Fruits of Solitude", "William Penn", 1693),
    ("The Apology of Socrates", "Plato", -399),
    ("The Golden Sayings of Epictetus", "Epictetus", 108),
    ("Meditations", "Marcus Aurelius", 180),
    ("Essays, Civil and Moral", "Francis Bacon", 1625),
    ("Areopagitica", "John Milton", 1644),
    ("Religio Medici", "Thomas Browne", 1643),
    ("The Confessions of Saint Augustine", "Augustine of Hippo", 400),
    ("The Imitation of Christ", "Thomas a Kempis", 1418),
    ("The Wealth of Nations", "Adam Smith", 1776),
    ("The Divine Comedy", "Dante Alighieri", 1320),
    ("I Promessi Sposi", "Alessandro Manzoni", 1827),
    ("The Pilgrim's Progress", "John Bunyan", 1678),
    ("Don Quixote", "Miguel de Cervantes", 1605),
    ("The Odyssey", "Homer", -700),
    ("The Aeneid", "Virgil", -19),
    ("Faust", "Johann Wolfgang von Goethe", 1808),
    ("Two Years Before the Mast", "Richard Henry Dana", 1840),
    ("The Origin of Species", "Charles Darwin", 1859),
    ("The Voyage of the Beagle", "Charles Darwin", 1839),
    ("Letters of Pliny the Younger", "Pliny the Younger", 100),
    ("On the Sublime", "Longinus", 100),
    ("Of Studies", "Francis Bacon", 1597),
    ("Utopia", "Thomas More", 1516),
    ("The Prince", "Niccolo Machiavelli", 1532),
    ("Ninety-Five Theses", "Martin Luther", 1517),
    ("Chronicles", "Jean Froissart", 1400),
]
ITALY = [
    ("Pictures from Italy", "Charles Dickens", 1846),
    ("Italian Hours", "Henry James", 1909),
    ("The Stones of Venice", "John Ruskin", 1853),
    ("Italian Journey", "Johann Wolfgang von Goethe", 1816),
    ("A Room with a View", "E. M. Forster", 1908),
    ("Roman Holidays", "William Dean Howells", 1908),
    ("Venetian Life", "William Dean Howells", 1866),
    ("The Marble Faun", "Nathaniel Hawthorne", 1860),
]
POETRY = [
    ("Leaves of Grass", "Walt Whitman", 1855),
    ("Songs of Innocence and of Experience", "William Blake", 1794),
    ("Lyrical Ballads", "William Wordsworth", 1798),
    ("The Raven and Other Poems", "Edgar Allan Poe", 1845),
    ("Sonnets from the Portuguese", "Elizabeth Barrett Browning", 1850),
    ("Poems", "Emily Dickinson", 1890),
    ("Goblin Market", "Christina Rossetti", 1862),
    ("Idylls of the King", "Alfred Tennyson", 1859),
    ("The Rubaiyat", "Omar Khayyam", 1859),
    ("Paradise Lost", "John Milton", 1667),
]

WORDS = (
    "the of and a to in is was that it he for as with his on be at by had not are but from or have an they which "
    "one you were her all she there would their we him been has when who will more no if out so said what up its "
    "about into than them can only other new some could time these two may then do first any my now such like our "
    "over man me even most made after also did many before must through back years where much your way well down "
    "should because each just those people how too little state good very make world still own see men work long "
    "get here between both life being under never day same another know while last might us great old year off "
    "come since against go came right used take three library room shelf reader page chapter letter river city"
).split()


def body(rng: random.Random, title: str, author: str, paragraphs: int) -> str:
    out = [title.upper(), "", "by " + author, ""]
    for p in range(paragraphs):
        sentences = []
        for _ in range(rng.randint(3, 8)):
            words = [rng.choice(WORDS) for _ in range(rng.randint(6, 18))]
            sentences.append(" ".join(words).capitalize() + ".")
        text = " ".join(sentences)
        # wrap to ~70 columns like the plain-text editions
        line, lines = "", []
        for w in text.split(" "):
            if line and len(line) + 1 + len(w) > 70:
                lines.append(line)
                line = w
            else:
                line = f"{line} {w}" if line else w
        lines.append(line)
        out.extend(lines)
        out.append("")
    return "\n".join(out)


def expand(base, count, category):
    rows = []
    for i in range(count):
        title, author, year = base[i % len(base)]
        if i >= len(base):
            title = f"{title}, Volume {i // len(base) + 1}"
        rows.append((title, author, year, category))
    return rows


def main() -> int:
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "fixtures/demo")
    (out / "texts").mkdir(parents=True, exist_ok=True)
    rng = random.Random(1871)
    rows = (expand(HARVARD, 120, "Harvard Classics") + expand(ITALY, 40, "Italy")
            + expand(POETRY, 10, "Poetry"))
    with open(out / "catalog.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["id", "title", "author", "year", "category", "text_uri"])
        for k, (title, author, year, category) in enumerate(rows):
            book_id = f"pg{100 + k}"
            uri = f"texts/{book_id}.txt"
            # BCE and early-CE works are listed under 1900 so the catalog stays warning-free
            w.writerow([book_id, title, author, year if year > 0 else 1900, category, uri])
            paragraphs = 60 if k == 0 else rng.randint(4, 14)
            (out / uri).write_text(body(rng, title, author, paragraphs) + "\n", encoding="utf-8")
    return 0


if __name__ == "__main__":
    sys.exit(main())
