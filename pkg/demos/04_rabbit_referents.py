"""Word-by-word referent sets for a definite description.

The world has two rabbits: r1 sits in a hat and a box, r2 is in nothing
at all. "the rabbit in the hat" narrows to r1. "the rabbit in none of
the boxes" shows why recomputation beats eliminative refinement: at
"in" the candidates shrink to rabbits-in-something, but "none" brings
the containerless r2 back — a set that only ever shrinks could never
recover it.
"""

from incsem.cli import data_path
from incsem.lexicon import load_lexicon_file
from incsem.parser import init_session, step_word
from incsem.resolve import best_referent_hypothesis, referent_set
from incsem.world import load_world_file

lex = load_lexicon_file(data_path("demo.lex"))
world = load_world_file(data_path("rabbits.world"))

for phrase in ["the rabbit in the hat", "the rabbit in none of the boxes"]:
    print(phrase)
    state = init_session(lex)
    shown = []
    for word in phrase.split():
        state = step_word(state, word)
        shown.append(word)
        hyp = best_referent_hypothesis(list(state.hyps))
        refs = sorted(referent_set(hyp, 0, world))
        print(f"  {' '.join(shown):34} -> {{{', '.join(refs)}}}")
    print()
