"""The full per-word pipeline over a two-sentence discourse.

"london has a tower . every parent shows it" runs through parsing,
existential closure, pronoun coindexing, quantifier scoping, and
context evaluation; the snapshot after the last word carries both
scoped readings and both context logical forms.
"""

import json

from incsem.cli import data_path
from incsem.lexicon import load_lexicon_file
from incsem.session import feed_word, new_session, snapshot
from incsem.world import load_world_file

lex = load_lexicon_file(data_path("demo.lex"))
world = load_world_file(data_path("london.world"))

s = new_session(lex, world)
for word in "london has a tower . every parent shows it".split():
    s = feed_word(s, word)

snap = snapshot(s)
print("hypothesis after 'every parent shows it':")
print("   ", snap["hypotheses"][0]["lf"])
print("\ncontext committed at the sentence boundary:")
print("   ", snap["context"])
print("\nreadings for the pronoun resolved to the context tower:")
for r in snap["readings"]:
    if r["coindexed"] == "show(q(forall,x,parent(x)),w,q(exists,z,true))":
        print("  unscoped :", r["unscoped"])
        print("  coindexed:", r["coindexed"])
        print("  scoped   :", r["scoped"], f"[{r['verdict']}]")
        for c in r["context_lfs"]:
            print("  context  :", c)
        print()
