"""Independent reference implementations used to check the real ones."""

from functools import lru_cache


def naive_levenshtein(a: str, b: str) -> int:
    """Straight from the recursive definition of edit distance."""

    @lru_cache(maxsize=None)
    def rec(i: int, j: int) -> int:
        if i == len(a):
            return len(b) - j
        if j == len(b):
            return len(a) - i
        same = rec(i + 1, j + 1) if a[i] == b[j] else 1 + rec(i + 1, j + 1)
        return min(same, 1 + rec(i + 1, j), 1 + rec(i, j + 1))

    return rec(0, 0)


def first_minimum_scan(answer: str, candidate_texts: list[str]) -> tuple[int, int, bool]:
    """Brute-force candidate selection: (index, distance, tie)."""
    distances = [naive_levenshtein(answer, c) for c in candidate_texts]
    best = min(distances)
    return distances.index(best), best, distances.count(best) > 1
