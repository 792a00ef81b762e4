"""Scope preferences persist as a sentence grows (jungle paths).

After "every man gave a book" the wide-universal reading is committed;
extending to "... to a child" only ever yields readings that keep the
man-quantifier outside the book-quantifier, even though three
quantifiers would otherwise permute six ways.
"""

from incsem.cli import data_path
from incsem.lexicon import load_lexicon_file
from incsem.lf import print_lf
from incsem.session import feed_word, new_session, snapshot
from incsem.world import load_world_file

lex = load_lexicon_file(data_path("demo.lex"))
world = load_world_file(data_path("london.world"))

s = new_session(lex, world)
for word in "every man gave a book".split():
    s = feed_word(s, word)

print("readings after 'every man gave a book':")
for r in snapshot(s)["readings"]:
    print("  ", r["order"], r["scoped"])

for word in "to a child".split():
    s = feed_word(s, word)

print("\nreadings after '... to a child' (preference kept: man wide):")
for r in snapshot(s)["readings"]:
    print("  ", r["order"], r["scoped"])
