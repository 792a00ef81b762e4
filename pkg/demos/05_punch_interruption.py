"""Mid-sentence interruption from world knowledge.

The workshop world declares the punch immovable (constraint "bolted").
Feeding "put the punch onto" blocks as soon as "punch" arrives: every
reading of the prefix is implausible before the verb phrase is even
complete, which is exactly when an interactive system should interrupt.
"""

from incsem.cli import data_path
from incsem.lexicon import load_lexicon_file
from incsem.session import BlockedSessionError, feed_word, new_session, snapshot
from incsem.world import load_world_file

lex = load_lexicon_file(data_path("demo.lex"))
world = load_world_file(data_path("workshop.world"))

s = new_session(lex, world)
for word in "put the punch onto".split():
    try:
        s = feed_word(s, word)
    except BlockedSessionError as e:
        print(f"  [{word!r} not even processed: {e}]")
        break
    snap = snapshot(s)
    verdicts = {r["scoped"]: r["verdict"] for r in snap["readings"]}
    print(f"after {word!r}: blocked={snap['blocked']}")
    for scoped, verdict in verdicts.items():
        print(f"    {scoped} [{verdict}]")
    if snap["blocked"]:
        event = [e for e in snap["events"] if e.startswith("BLOCKED")][-1]
        print(f"\n  interruption: {event}")
        print("  The punch can't be moved -- its world constraint fired before")
        print("  the verb phrase was complete.")
