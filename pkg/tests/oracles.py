"""Slow independent references used by the property tests."""

from fractions import Fraction


def tensor_algebra_product(gram, left: dict, right: dict) -> dict:
    """Multiply in T(M)/(ab + ba - ω(a,b)) with an explicit worklist of unsorted words."""
    pending = []
    for u, a in left.items():
        for v, b in right.items():
            pending.append((tuple(u) + tuple(v), a * b))
    done: dict = {}
    while pending:
        word, c = pending.pop()
        if c == 0:
            continue
        k = next((k for k in range(len(word) - 1) if word[k] >= word[k + 1]), None)
        if k is None:
            done[word] = done.get(word, 0) + c
            continue
        a, b = word[k], word[k + 1]
        rest = word[:k] + word[k + 2 :]
        if a == b:
            pending.append((rest, c * Fraction(gram[a, a]) / 2))
        else:
            pending.append((rest, c * Fraction(gram[a, b])))
            pending.append((word[:k] + (b, a) + word[k + 2 :], -c))
    return {w: c for w, c in done.items() if c != 0}
