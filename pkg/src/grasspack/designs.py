"""Difference sets and divisible difference sets, verified exactly.

All classification runs in integer arithmetic; character sums are only a
numeric cross-check.  Parameter conventions: for a subgroup N of G,
``n = |N|`` and ``m = [G:N]``, so the ambient group has order m*n.  Some
sources print the same quintuple with m and n swapped; serialized output
records both orderings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .abelian import (
    AbelianGroup,
    GroupElement,
    Subgroup,
    annihilator,
    element_from_json,
    element_to_json,
    group_from_json,
    group_to_json,
    make_group,
    subgroup_generated,
)
from .errors import CapacityError, DomainError, InvalidParameterError

SEARCH_MAX_GROUP_ORDER = 40


@dataclass(frozen=True)
class DSParams:
    """(n, k, lam): k-subset of a group of order n, each nonzero
    difference hit lam times."""

    n: int
    k: int
    lam: int

    def __post_init__(self):
        if min(self.n, self.k, self.lam) < 0:
            raise InvalidParameterError("difference set parameters must be nonnegative")
        if self.k > self.n:
            raise InvalidParameterError("k cannot exceed the group order")
        if self.k * (self.k - 1) != self.lam * (self.n - 1):
            raise InvalidParameterError(
                f"counting identity fails: {self.k}*{self.k - 1} != "
                f"{self.lam}*({self.n}-1)"
            )


@dataclass(frozen=True)
class DDSParams:
    """(m, n, k, lambda1, lambda2) with n = |N| and m = [G:N]."""

    m: int
    n: int
    k: int
    lambda1: int
    lambda2: int

    def __post_init__(self):
        if min(self.m, self.n, self.k, self.lambda1, self.lambda2) < 0:
            raise InvalidParameterError("parameters must be nonnegative")
        if self.k > self.m * self.n:
            raise InvalidParameterError("k cannot exceed the group order m*n")
        lhs = self.k * (self.k - 1)
        rhs = self.lambda1 * (self.n - 1) + self.lambda2 * (self.m * self.n - self.n)
        if lhs != rhs:
            raise InvalidParameterError(
                f"counting identity fails: k(k-1)={lhs} but "
                f"lambda1(n-1)+lambda2(mn-n)={rhs}"
            )

    def to_json(self) -> dict:
        label = [self.m, self.n, self.k, self.lambda1, self.lambda2]
        return {
            "m": self.m,
            "n": self.n,
            "k": self.k,
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "label": label,
            "label_mn_swapped": [self.n, self.m] + label[2:],
        }


def _check_subset(G: AbelianGroup, D: Iterable[GroupElement]) -> tuple[GroupElement, ...]:
    D = tuple(sorted(set(D), key=lambda e: e.coords))
    for d in D:
        if d.group != G:
            raise DomainError("set element outside the group")
    if len(D) < 2:
        raise InvalidParameterError("need at least two elements")
    return D


def difference_multiset(
    G: AbelianGroup, D: Iterable[GroupElement]
) -> dict[GroupElement, int]:
    """Counts of d_i - d_j over ordered pairs of distinct elements of D."""
    D = _check_subset(G, D)
    counts: dict[GroupElement, int] = {}
    for a, b in itertools.permutations(D, 2):
        diff = a - b
        counts[diff] = counts.get(diff, 0) + 1
    return counts


def classify_difference_set(
    G: AbelianGroup, D: Iterable[GroupElement]
) -> DSParams | None:
    """Parameters (|G|, |D|, lam) if D is a difference set, else None."""
    D = _check_subset(G, D)
    counts = difference_multiset(G, D)
    values = {counts.get(g, 0) for g in G.elements() if not g.is_identity()}
    if len(values) != 1:
        return None
    return DSParams(G.order, len(D), values.pop())


def classify_dds(
    G: AbelianGroup, N: Subgroup, D: Iterable[GroupElement]
) -> DDSParams | None:
    """Parameters (m, n, k, lambda1, lambda2) if D is a divisible
    difference set relative to N, else None.

    Degenerate conventions: lambda1 = 0 when N is trivial (no inner
    differences exist) and lambda2 = 0 when N = G (no outer ones).
    """
    if N.parent != G:
        raise DomainError("subgroup belongs to a different group")
    D = _check_subset(G, D)
    counts = difference_multiset(G, D)
    in_N = set(N.elements)
    inner = {counts.get(h, 0) for h in N.elements if not h.is_identity()}
    outer = {counts.get(g, 0) for g in G.elements() if g not in in_N}
    if len(inner) > 1 or len(outer) > 1:
        return None
    n = N.order
    m = G.order // n
    lambda1 = inner.pop() if inner else 0
    lambda2 = outer.pop() if outer else 0
    return DDSParams(m, n, len(D), lambda1, lambda2)


def is_semiregular(params: DDSParams | Sequence[int]) -> bool:
    """k > lambda1 and k^2 = lambda2 * m * n.

    Accepts a raw (m, n, k, lambda1, lambda2) tuple as well, so that
    parameter quintuples that fail the counting identity can still be
    probed.  When the answer is yes, m | k is checked (it always holds
    for a semiregular quintuple; its failure would indicate a bug).
    """
    if isinstance(params, DDSParams):
        m, n, k, lambda1, lambda2 = (
            params.m,
            params.n,
            params.k,
            params.lambda1,
            params.lambda2,
        )
    else:
        m, n, k, lambda1, lambda2 = params
    semiregular = k > lambda1 and k * k == lambda2 * m * n
    if semiregular and k % m != 0:
        raise DomainError("semiregular parameters must satisfy m | k")
    return semiregular


@dataclass(frozen=True)
class ProfileVerdict:
    """Result of cross-checking integer counts against character sums."""

    exact: DDSParams | None
    numeric: DDSParams | None
    agree: bool
    profile: tuple[int, ...] | None
    max_deviation: float


def _near_int(x: float, tol: float) -> int | None:
    r = round(x)
    return r if abs(x - r) <= tol else None


def char_sum_profile(
    G: AbelianGroup, N: Subgroup, D: Iterable[GroupElement], tol: float = 1e-8
) -> ProfileVerdict:
    """Evaluate |chi(D)|^2 for all characters and compare the three-case
    profile against the exact classification.

    A divisible difference set must produce k^2 on the principal
    character, k - lambda1 on characters nontrivial somewhere on N, and
    k^2 - lambda2*m*n on the rest; the numeric and exact verdicts are
    required to agree.
    """
    if N.parent != G:
        raise DomainError("subgroup belongs to a different group")
    D = _check_subset(G, D)
    k = len(D)
    n = N.order
    m = G.order // n
    ann = set(annihilator(G, N).elements)

    off_ann: list[float] = []
    on_ann: list[float] = []
    for chi in G.characters():
        if chi.is_principal():
            continue
        value = abs(chi.value_on_set(D)) ** 2
        (on_ann if chi.label in ann else off_ann).append(value)

    numeric: DDSParams | None = None
    deviation = 0.0
    lambda1 = 0
    lambda2 = 0
    consistent = True
    if off_ann:
        mid = (max(off_ann) + min(off_ann)) / 2
        deviation = max(deviation, max(off_ann) - min(off_ann))
        guess = _near_int(k - mid, tol)
        if guess is None or guess < 0 or max(abs(v - (k - guess)) for v in off_ann) > tol:
            consistent = False
        else:
            lambda1 = guess
    if on_ann:
        mid = (max(on_ann) + min(on_ann)) / 2
        deviation = max(deviation, max(on_ann) - min(on_ann))
        guess = _near_int((k * k - mid) / (m * n), tol)
        if (
            guess is None
            or guess < 0
            or max(abs(v - (k * k - guess * m * n)) for v in on_ann) > tol
        ):
            consistent = False
        else:
            lambda2 = guess
    if consistent:
        try:
            numeric = DDSParams(m, n, k, lambda1, lambda2)
        except InvalidParameterError:
            numeric = None

    exact = classify_dds(G, N, D)
    agree = exact == numeric
    profile = None
    if exact is not None:
        profile = tuple(
            dict.fromkeys(
                [
                    k * k,
                    *([k - exact.lambda1] if off_ann else []),
                    *([k * k - exact.lambda2 * m * n] if on_ann else []),
                ]
            )
        )
    return ProfileVerdict(exact, numeric, agree, profile, deviation)


def _params_from_counts(
    counts: list[int], inner_ranks: list[int], outer_ranks: list[int], m: int, n: int, k: int
) -> DDSParams | None:
    inner = {counts[r] for r in inner_ranks}
    outer = {counts[r] for r in outer_ranks}
    if len(inner) > 1 or len(outer) > 1:
        return None
    lambda1 = inner.pop() if inner else 0
    lambda2 = outer.pop() if outer else 0
    try:
        return DDSParams(m, n, k, lambda1, lambda2)
    except InvalidParameterError:
        return None


def _semiregular_caps(
    order: int, n: int, k: int
) -> tuple[int, int] | None:
    """The unique (lambda1, lambda2) a semiregular DDS could have, or
    None when no integral solution exists."""
    m = order // n
    if n == order:
        return None  # lambda2 undefined; semiregularity cannot hold
    lambda2, rem = divmod(k * k, order)
    if rem != 0 or lambda2 == 0:
        return None
    if n > 1:
        num = k * (k - 1) - lambda2 * (order - n)
        lambda1, rem = divmod(num, n - 1)
        if rem != 0 or lambda1 < 0 or k <= lambda1:
            return None
    else:
        lambda1 = 0
    if k % m != 0:
        return None  # a semiregular DDS forces m | k
    return lambda1, lambda2


def _run_search(
    G: AbelianGroup,
    N: Subgroup,
    k: int,
    require_semiregular: bool,
    limit: int | None,
    second_rank: int | None = None,
) -> list[tuple[tuple[GroupElement, ...], DDSParams]]:
    order = G.order
    n = N.order
    m = order // n
    elements = G.elements()
    rank = {e: i for i, e in enumerate(elements)}
    sub_table = [[rank[a - b] for b in elements] for a in elements]
    in_N = set(N.elements)
    inner_ranks = [rank[h] for h in N.elements if not h.is_identity()]
    outer_ranks = [rank[g] for g in elements if g not in in_N]

    caps: list[int] | None = None
    if require_semiregular:
        cap_pair = _semiregular_caps(order, n, k)
        if cap_pair is None:
            return []
        lambda1, lambda2 = cap_pair
        caps = [0] * order
        for r in inner_ranks:
            caps[r] = lambda1
        for r in outer_ranks:
            caps[r] = lambda2

    results: list[tuple[tuple[GroupElement, ...], DDSParams]] = []
    counts = [0] * order
    chosen = [0]  # identity is always rank 0

    def admit() -> bool:
        D = tuple(elements[r] for r in chosen)
        params = _params_from_counts(counts, inner_ranks, outer_ranks, m, n, k)
        if params is None:
            return False
        if require_semiregular and not is_semiregular(params):
            return False
        if classify_dds(G, N, D) != params:  # arbiter; prune logic must agree
            raise AssertionError("search pruning disagrees with classifier")
        results.append((D, params))
        return limit is not None and len(results) >= limit

    def extend(start: int, stop_after: int | None = None) -> bool:
        if len(chosen) == k:
            return admit()
        remaining = k - len(chosen)
        last = order - remaining if stop_after is None else stop_after
        for r in range(start, last + 1):
            row = sub_table[r]
            added = 0
            ok = True
            for s in chosen:
                d1, d2 = row[s], sub_table[s][r]
                counts[d1] += 1
                counts[d2] += 1
                added += 1
                if caps is not None and (
                    counts[d1] > caps[d1] or counts[d2] > caps[d2]
                ):
                    ok = False
                    break
            stop = False
            if ok:
                chosen.append(r)
                stop = extend(r + 1)
                chosen.pop()
            for s in chosen[:added]:
                counts[row[s]] -= 1
                counts[sub_table[s][r]] -= 1
            if stop:
                return True
        return False

    if second_rank is None:
        extend(1)
    else:
        extend(second_rank, stop_after=second_rank)
    return results


def search_dds(
    G: AbelianGroup,
    N: Subgroup,
    k: int,
    require_semiregular: bool = False,
    limit: int | None = None,
    workers: int | None = None,
) -> list[tuple[tuple[GroupElement, ...], DDSParams]]:
    """Exhaustive lexicographic search over k-subsets containing the identity.

    Difference multisets are translation invariant, so fixing the
    identity loses nothing.  With ``require_semiregular`` the target
    difference counts are fully determined by (|G|, |N|, k), which lets
    the search prune on partial counts.  Output order is the sequential
    lexicographic order regardless of ``workers``.
    """
    if N.parent != G:
        raise DomainError("subgroup belongs to a different group")
    if G.order > SEARCH_MAX_GROUP_ORDER:
        raise CapacityError(
            f"search limited to groups of order <= {SEARCH_MAX_GROUP_ORDER}"
        )
    if k > G.order:
        raise InvalidParameterError("k cannot exceed the group order")
    if limit is not None and limit <= 0:
        return []
    if k < 2:
        return []
    if workers is not None and workers > 1:
        return _search_parallel(G, N, k, require_semiregular, limit, workers)
    return _run_search(G, N, k, require_semiregular, limit)


def _branch_worker(args) -> list[tuple[list[list[int]], list[int]]]:
    factors, n_coords, k, require_semiregular, second, limit = args
    G = make_group(factors)
    N = subgroup_generated(G, [G.element(c) for c in n_coords])
    found = []
    for D, params in _run_search(G, N, k, require_semiregular, limit, second):
        found.append(
            (
                [list(e.coords) for e in D],
                [params.m, params.n, params.k, params.lambda1, params.lambda2],
            )
        )
    return found


def _search_parallel(G, N, k, require_semiregular, limit, workers):
    # Partition on the second element (the first is pinned to the
    # identity); branches are merged in rank order, so the output equals
    # the sequential lexicographic order.
    from concurrent.futures import ProcessPoolExecutor

    n_coords = [list(e.coords) for e in N.elements]
    jobs = [
        (G.factors, n_coords, k, require_semiregular, second, limit)
        for second in range(1, G.order - (k - 1) + 1)
    ]
    results: list[tuple[tuple[GroupElement, ...], DDSParams]] = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for branch in pool.map(_branch_worker, jobs):
            for coords_list, plist in branch:
                D = tuple(G.element(c) for c in coords_list)
                results.append((D, DDSParams(*plist)))
                if limit is not None and len(results) >= limit:
                    return results
    return results


# --- JSON wire format ---------------------------------------------------

def design_to_json(
    G: AbelianGroup,
    N: Subgroup,
    D: Sequence[GroupElement],
    params: DDSParams | None = None,
) -> dict:
    doc = {
        "group": group_to_json(G),
        "subgroup_generators": [element_to_json(e) for e in N.elements],
        "set": [element_to_json(d) for d in sorted(D, key=lambda e: e.coords)],
    }
    if params is not None:
        doc["params"] = params.to_json()
    return doc


def design_from_json(doc: dict) -> tuple[AbelianGroup, Subgroup, tuple[GroupElement, ...]]:
    G = group_from_json(doc["group"])
    N = subgroup_generated(
        G, [element_from_json(G, c) for c in doc["subgroup_generators"]]
    )
    D = tuple(element_from_json(G, c) for c in doc["set"])
    return G, N, D
