"""Watch a sentence's meaning assemble one word at a time.

Feeding "mary introduced john to sue" produces, at every prefix, a typed
lambda expression standing in for all partial parses of that prefix:
first the type-raised subject, then a function awaiting two objects, and
finally a complete proposition.
"""

from incsem.cli import data_path
from incsem.lexicon import load_lexicon_file
from incsem.lf import print_lf
from incsem.parser import hypotheses, init_session, step_word

lex = load_lexicon_file(data_path("demo.lex"))
state = init_session(lex)

print(f"{'prefix':38} {'type':14} meaning")
print("-" * 80)
words = []
for word in "mary introduced john to sue".split():
    state = step_word(state, word)
    words.append(word)
    for ty, sem in hypotheses(state):
        print(f"{' '.join(words):38} {str(ty):14} {print_lf(sem)}")

print()
print("Each state is a function into a proposition; its pending argument")
print("types say what kind of material the parser still expects.")
