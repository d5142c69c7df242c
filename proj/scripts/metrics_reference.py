#!/usr/bin/env python3
# Copyright 2026  SAS toolkit authors
# Apache 2.0.
#
# Independent reference implementations of the caption metrics, used to
# freeze tests/golden/metrics_golden.json. Run from the repository root:
#
#   python3 scripts/metrics_reference.py > tests/golden/metrics_golden.json
#
# The values are compared against the C++ implementations in test_eval at
# 1e-6, so keep this file dependency-free and deterministic.

import itertools
import json
import math
import random


def ngrams(tokens, n):
    counts = {}
    for i in range(len(tokens) - n + 1):
        g = tuple(tokens[i:i + n])
        counts[g] = counts.get(g, 0) + 1
    return counts


def bleu(cands, refs_multi):
    num = [0.0] * 5
    den = [0.0] * 5
    c_total = 0
    r_total = 0
    for cand, refs in zip(cands, refs_multi):
        c_total += len(cand)
        best = None
        for ref in refs:
            key = (abs(len(ref) - len(cand)), len(ref))
            if best is None or key < best:
                best = key
        r_total += best[1]
        for n in range(1, 5):
            cc = ngrams(cand, n)
            rmax = {}
            for ref in refs:
                for g, c in ngrams(ref, n).items():
                    rmax[g] = max(rmax.get(g, 0), c)
            num[n] += sum(min(c, rmax.get(g, 0)) for g, c in cc.items())
            den[n] += max(0, len(cand) - n + 1)
    if c_total == 0:
        return [0.0] * 4
    bp = 1.0 if c_total >= r_total else math.exp(1.0 - r_total / c_total)
    out = []
    for k in range(1, 5):
        if any(num[n] <= 0 or den[n] <= 0 for n in range(1, k + 1)):
            out.append(0.0)
            continue
        log_sum = sum(math.log(num[n] / den[n]) for n in range(1, k + 1))
        out.append(100.0 * bp * math.exp(log_sum / k))
    return out


def count_chunks(pairs):
    pairs = sorted(pairs)
    chunks = 0
    for i, (c, r) in enumerate(pairs):
        if i == 0 or c != pairs[i - 1][0] + 1 or r != pairs[i - 1][1] + 1:
            chunks += 1
    return chunks


def min_chunks(cand, ref):
    by_word = {}
    for i, w in enumerate(cand):
        by_word.setdefault(w, ([], []))[0].append(i)
    for j, w in enumerate(ref):
        by_word.setdefault(w, ([], []))[1].append(j)
    words = []
    for w, (cp, rp) in sorted(by_word.items()):
        m = min(len(cp), len(rp))
        if m:
            words.append((cp, rp, m))
    options = []
    for cp, rp, m in words:
        word_opts = []
        for chosen_c in itertools.combinations(cp, m):
            for chosen_r in itertools.permutations(rp, m):
                word_opts.append(list(zip(chosen_c, chosen_r)))
        options.append(word_opts)
    space = 1
    for o in options:
        space *= len(o)
    assert space <= 200000, "golden corpus must stay in exhaustive range"
    best = None
    for combo in itertools.product(*options):
        pairs = [p for group in combo for p in group]
        ch = count_chunks(pairs)
        if best is None or ch < best:
            best = ch
    return best


def meteor(cands, refs_multi):
    total = 0.0
    for cand, refs in zip(cands, refs_multi):
        best = 0.0
        for ref in refs:
            if not cand or not ref:
                continue
            m = 0
            vocab = set(cand) | set(ref)
            for w in vocab:
                m += min(cand.count(w), ref.count(w))
            if m == 0:
                continue
            chunks = min_chunks(cand, ref)
            p = m / len(cand)
            r = m / len(ref)
            f = 10.0 * p * r / (r + 9.0 * p)
            score = f * (1.0 - 0.5 * (chunks / m) ** 3)
            best = max(best, score)
        total += best
    return 100.0 * total / len(cands)


def lcs(a, b):
    dp = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            if a[i - 1] == b[j - 1]:
                dp[i][j] = dp[i - 1][j - 1] + 1
            else:
                dp[i][j] = max(dp[i - 1][j], dp[i][j - 1])
    return dp[len(a)][len(b)]


def rouge_l(cands, refs_multi, beta=1.2):
    total = 0.0
    for cand, refs in zip(cands, refs_multi):
        best = 0.0
        for ref in refs:
            if not cand or not ref:
                continue
            ll = lcs(cand, ref)
            if ll == 0:
                continue
            p = ll / len(cand)
            r = ll / len(ref)
            best = max(best, (1 + beta * beta) * p * r / (r + beta * beta * p))
        total += best
    return 100.0 * total / len(cands)


def cider_d(cands, refs_multi):
    n_items = len(cands)
    df = [dict() for _ in range(5)]
    for refs in refs_multi:
        for n in range(1, 5):
            seen = set()
            for ref in refs:
                seen.update(ngrams(ref, n).keys())
            for g in seen:
                df[n][g] = df[n].get(g, 0) + 1

    def idf(n, g):
        return math.log(n_items) - math.log(max(1.0, df[n].get(g, 0)))

    total = 0.0
    for cand, refs in zip(cands, refs_multi):
        order_sum = 0.0
        for n in range(1, 5):
            cc = ngrams(cand, n)
            ref_sum = 0.0
            for ref in refs:
                rc = ngrams(ref, n)
                if not cc or not rc:
                    continue
                norm_c = sum((c * idf(n, g)) ** 2 for g, c in cc.items())
                norm_r = sum((c * idf(n, g)) ** 2 for g, c in rc.items())
                val = 0.0
                for g, c in rc.items():
                    if g in cc:
                        val += min(cc[g] * idf(n, g), c * idf(n, g)) * c * idf(n, g)
                if norm_c > 0 and norm_r > 0:
                    sim = val / (math.sqrt(norm_c) * math.sqrt(norm_r))
                elif norm_c == 0 and norm_r == 0:
                    nc = sum(c * c for c in cc.values())
                    nr = sum(c * c for c in rc.values())
                    v = sum(min(cc[g], c) * c for g, c in rc.items() if g in cc)
                    sim = v / (math.sqrt(nc) * math.sqrt(nr))
                else:
                    sim = 0.0
                gap = len(cand) - len(ref)
                ref_sum += sim * math.exp(-gap * gap / 72.0)
            order_sum += ref_sum / len(refs)
        total += 10.0 * order_sum / 4.0
    return total / n_items


def build_corpus():
    rng = random.Random(42)
    vocab = ["a", "and", "on", "with", "dog", "cat", "ball", "tree",
             "red", "blue", "man", "park"]
    items = []
    # Hand-built edge cases first.
    items.append((["a", "dog", "on", "a", "tree"],
                  [["a", "dog", "on", "a", "tree"]]))            # identical
    items.append((["red", "blue"], [["man", "park", "cat"]]))     # disjoint
    items.append((["cat", "a"], [["a", "cat"]]))                  # swap
    items.append(([], [["a", "ball"]]))                           # empty cand
    items.append((["a", "a", "dog"], [["a", "dog", "a", "dog"]]))  # repeats
    while len(items) < 20:
        cand = [rng.choice(vocab) for _ in range(rng.randint(3, 8))]
        refs = []
        for _ in range(rng.randint(1, 3)):
            refs.append([rng.choice(vocab) for _ in range(rng.randint(3, 8))])
        # Bias some references toward the candidate so scores are nontrivial.
        if rng.random() < 0.6:
            ref = list(cand)
            for _ in range(rng.randint(0, 2)):
                ref[rng.randrange(len(ref))] = rng.choice(vocab)
            refs[0] = ref
        items.append((cand, refs))
    return items


def main():
    items = build_corpus()
    cands = [c for c, _ in items]
    refs = [r for _, r in items]
    b = bleu(cands, refs)
    out = {
        "items": [{"candidate": c, "references": r} for c, r in items],
        "scores": {
            "B1": b[0],
            "B2": b[1],
            "B3": b[2],
            "B4": b[3],
            "M": meteor(cands, refs),
            "R": rouge_l(cands, refs),
            "C": cider_d(cands, refs),
        },
    }
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
