import random
from fractions import Fraction
from pathlib import Path

import pytest

from sponge import AffineMap1D, DiagonalAffineMap, SpongeIFS, parse_ifs

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load_fixture(name):
    return parse_ifs((FIXTURES / name).read_text())


@pytest.fixture(scope="session")
def lg5():
    return load_fixture("lg5.ifs")


@pytest.fixture(scope="session")
def lg4():
    return load_fixture("lg4.ifs")


@pytest.fixture(scope="session")
def bedford_mcmullen():
    return load_fixture("bedford_mcmullen.ifs")


def random_simple_labels(rng, max_maps=4, max_den=24, tiling=None):
    """A random simple IFS of [0,1] as a tuple of AffineMap1D.

    With tiling=True the images partition [0,1]; with tiling=False at
    least one gap is forced; None flips a coin.
    """
    if tiling is None:
        tiling = rng.random() < 0.5
    k = rng.randint(2, max_maps)
    q = rng.randint(max(k + 1, 2 * k), max_den)
    if tiling:
        cuts = sorted(rng.sample(range(1, q), k - 1))
        points = [0] + cuts + [q]
        labels = []
        for lo, hi in zip(points, points[1:]):
            labels.append(AffineMap1D(Fraction(hi - lo, q), Fraction(lo, q)))
        return tuple(labels)
    # pick 2k+1 breakpoints so at least one gap exists
    while True:
        marks = sorted(rng.sample(range(0, q + 1), 2 * k))
        ivs = [(marks[2 * i], marks[2 * i + 1]) for i in range(k)]
        if all(hi > lo for lo, hi in ivs) and sum(h - l for l, h in ivs) < q:
            return tuple(AffineMap1D(Fraction(h - l, q), Fraction(l, q))
                         for l, h in ivs)


def random_lg_system(rng, dim=2, max_maps=4, max_den=12):
    """A random 2-D Lalley-Gatzouras system (not necessarily UD)."""
    assert dim == 2
    first = random_simple_labels(rng, max_maps=max_maps, max_den=max_den)
    maps = []
    for g in first:
        # second ratio strictly below the first, unit-preserving offset
        num = rng.randint(1, max(1, int(g.ratio * max_den) - 1)) \
            if g.ratio * max_den > 1 else 1
        r2 = Fraction(num, max_den)
        if r2 >= g.ratio:
            r2 = g.ratio / 2
        den = r2.denominator
        top = int((1 - r2) * den)
        off = Fraction(rng.randint(0, top), den)
        maps.append(DiagonalAffineMap((g, AffineMap1D(r2, off))))
    return SpongeIFS(2, tuple(maps))


def random_special_system(rng, max_maps=4, max_den=12):
    """A random 2-D system of the special form: first coordinates tile
    [0,1], second coordinates strictly thinner, singleton deeper fibers."""
    while True:
        first = random_simple_labels(rng, max_maps=max_maps,
                                     max_den=max_den, tiling=True)
        ifs = random_lg_from_tiling(rng, first, max_den)
        if ifs is not None:
            return ifs


def random_lg_from_tiling(rng, first, max_den):
    from sponge import EXACTLY_ONE, classify, validate_lg
    maps = []
    for g in first:
        choices = [Fraction(n, d)
                   for d in range(2, max_den + 1)
                   for n in range(1, d)
                   if Fraction(n, d) < g.ratio]
        if not choices:
            return None
        r2 = rng.choice(choices)
        den = r2.denominator
        off = Fraction(rng.randint(0, int((1 - r2) * den)), den)
        maps.append(DiagonalAffineMap((g, AffineMap1D(r2, off))))
    try:
        ifs = SpongeIFS(2, tuple(maps))
    except Exception:
        return None
    if not validate_lg(ifs).lg_type:
        return None
    if classify(ifs).conformal_dim_class != EXACTLY_ONE:
        return None
    return ifs


def random_point_set(rng, max_points=12, dim=None, max_den=8):
    dim = dim or rng.randint(1, 3)
    n = rng.randint(2, min(max_points, (max_den + 1) ** dim - 1))
    pts = set()
    while len(pts) < n:
        pts.add(tuple(Fraction(rng.randint(0, max_den), max_den)
                      for _ in range(dim)))
    return sorted(pts)
