#!/usr/bin/env python3
"""Generate a (dv, dc)-regular LDPC parity-check matrix in alist format.

Edges come from a seeded random socket matching; 4-cycles and double edges are
removed by random edge swaps. The result is rejected unless H has full rank.

    python3 scripts/gen_regular_code.py 204 3 6 --seed 484 > codes/regular_204_102.alist
"""
import argparse
import random
import sys


def has_full_rank(rows, n):
    pivots = {}
    for row in rows:
        v = 0
        for i in row:
            v ^= 1 << i
        while v:
            p = v.bit_length() - 1
            if p in pivots:
                v ^= pivots[p]
            else:
                pivots[p] = v
                break
    return len(pivots) == len(rows)


def four_cycle_edges(checks):
    bad = []
    for a in range(len(checks)):
        for b in range(a + 1, len(checks)):
            common = checks[a] & checks[b]
            if len(common) > 1:
                bad.append((a, min(common)))
    return bad


def build(n, dv, dc, rng):
    m = n * dv // dc
    sockets = [i for i in range(n) for _ in range(dv)]
    rng.shuffle(sockets)
    checks = [sockets[j * dc:(j + 1) * dc] for j in range(m)]
    for _ in range(200000):
        bad = [j for j, c in enumerate(checks) if len(set(c)) < dc]
        sets = [set(c) for c in checks]
        bad += [j for j, _ in four_cycle_edges(sets)]
        if not bad:
            return [sorted(c) for c in checks]
        j = rng.choice(bad)
        k = rng.randrange(m)
        a = rng.randrange(dc)
        b = rng.randrange(dc)
        checks[j][a], checks[k][b] = checks[k][b], checks[j][a]
    return None


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("n", type=int)
    ap.add_argument("dv", type=int)
    ap.add_argument("dc", type=int)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    n, dv, dc = args.n, args.dv, args.dc
    m = n * dv // dc
    while True:
        checks = build(n, dv, dc, rng)
        if checks is not None and has_full_rank(checks, n):
            break
    cols = [[] for _ in range(n)]
    for j, c in enumerate(checks):
        for i in c:
            cols[i].append(j)
    out = sys.stdout
    out.write(f"{n} {m}\n{dv} {dc}\n")
    out.write(" ".join(str(dv) for _ in range(n)) + "\n")
    out.write(" ".join(str(dc) for _ in range(m)) + "\n")
    for c in cols:
        out.write(" ".join(str(j + 1) for j in c) + "\n")
    for r in checks:
        out.write(" ".join(str(i + 1) for i in r) + "\n")


if __name__ == "__main__":
    main()
