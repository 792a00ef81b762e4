"""Record per-word session snapshots as fixtures for the workbench tests.

The workbench renders purely from snapshots, so its test suite replays
these files without the service running.
"""

import json
import os

from incsem.cli import data_path
from incsem.lexicon import load_lexicon_file
from incsem.session import feed_word, new_session, snapshot
from incsem.world import load_world_file

OUT = os.path.join(os.path.dirname(__file__), "..", "frontend", "fixtures")

SCENARIOS = {
    "worked_example": ("london", "london has a tower . every parent shows it"),
    "rabbit_hat": ("rabbits", "the rabbit in the hat"),
    "rabbit_boxes": ("rabbits", "the rabbit in none of the boxes"),
    "punch": ("workshop", "put the punch onto"),
}


def record(world_name: str, text: str) -> list[dict]:
    lex = load_lexicon_file(data_path("demo.lex"))
    world = load_world_file(data_path(f"{world_name}.world"), world_name)
    s = new_session(lex, world)
    steps = [{"word": None, "snapshot": snapshot(s)}]
    for word in text.split():
        try:
            s = feed_word(s, word)
        except Exception as e:
            steps.append({"word": word, "error": str(e)})
            break
        steps.append({"word": word, "snapshot": snapshot(s)})
        if snapshot(s)["blocked"]:
            break
    return steps


def main() -> None:
    os.makedirs(OUT, exist_ok=True)
    for name, (world_name, text) in SCENARIOS.items():
        steps = record(world_name, text)
        path = os.path.join(OUT, f"{name}.json")
        with open(path, "w", encoding="utf-8") as f:
            json.dump({"scenario": name, "world": world_name, "text": text,
                       "steps": steps}, f, indent=1, sort_keys=True)
        print(f"wrote {path} ({len(steps)} steps)")


if __name__ == "__main__":
    main()
