"""
Reading the labeled corpus and deriving majority labels
=======================================================

Each tweet row carries three coder counts (hate, offensive, neither).
The class label is the strict majority of those votes; a tie leaves the
row unlabeled but still in the corpus.
"""

import importlib.resources

from hatetriage.corpus import corpus_stats, derive_label, parse_corpus, stats_report_text

# a strict majority wins ...
print("votes (2, 1, 0) ->", derive_label(2, 1, 0))
print("votes (0, 5, 1) ->", derive_label(0, 5, 1))

# ... and a tie yields no label at all
print("votes (1, 1, 0) ->", derive_label(1, 1, 0))

# the bundled demonstration corpus ships inside the package
data = importlib.resources.files("hatetriage.data").joinpath("toy_corpus.csv")
records = parse_corpus(data.read_bytes())
print(f"\nparsed {len(records)} records; first tweet: {records[0].text!r}")
print(f"coder counts {records[0].counts} -> label {records[0].label}")

# per-class shares and the mean plurality agreement in one report
print("\n" + stats_report_text(corpus_stats(records)))
