"""Reference BLEU and ROUGE-L values for the pinned evaluation corpus.

Uses nltk's corpus_bleu and rouge_score's LCS scorer on pre-tokenized text,
plus a brute-force LCS for cross-checking. Prints values to paste into the
C++ tests.
"""

import itertools
import json
import string
import sys
from pathlib import Path

from nltk.translate.bleu_score import corpus_bleu
from rouge_score import rouge_scorer, tokenizers

DATA = Path(__file__).resolve().parent.parent / "data"


def tokenize(text):
    out = []
    for raw in text.lower().split():
        tok = raw.strip(string.punctuation)
        if tok:
            out.append(tok)
    return out


class PreTokenized(tokenizers.Tokenizer):
    def tokenize(self, text):
        return text.split(" ")


def brute_lcs(a, b):
    best = 0
    for r in range(len(a), 0, -1):
        for combo in itertools.combinations(range(len(a)), r):
            sub = [a[i] for i in combo]
            it = iter(b)
            if all(tok in it for tok in sub):
                return r
    return best


def load():
    cands = [json.loads(l) for l in (DATA / "eval_candidates.jsonl").read_text().splitlines() if l]
    refs = {}
    for l in (DATA / "eval_references.jsonl").read_text().splitlines():
        if l:
            row = json.loads(l)
            refs[row["id"]] = row["references"]
    return [(c["id"], tokenize(c["candidate"]), [tokenize(r) for r in refs[c["id"]]]) for c in cands]


def main():
    pairs = load()
    hyps = [p[1] for p in pairs]
    refs = [p[2] for p in pairs]
    for n in range(1, 5):
        weights = tuple([1.0 / n] * n)
        print(f"corpus BLEU-{n}: {100 * corpus_bleu(refs, hyps, weights=weights):.12f}")

    scorer = rouge_scorer.RougeScorer(["rougeL"], tokenizer=PreTokenized())
    total = 0.0
    for pid, hyp, rs in pairs:
        best = max(scorer.score(" ".join(r), " ".join(hyp))["rougeL"].fmeasure for r in rs)
        total += best
        print(f"{pid} ROUGE-L {best:.12f}")
    print(f"mean ROUGE-L: {total / len(pairs):.12f}")

    # Cross-check rouge_score's LCS against enumeration on short sequences.
    a, b = tokenize("the cat sat"), tokenize("the cat on the mat")
    assert brute_lcs(a, b) == 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
