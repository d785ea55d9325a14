"""Decision procedure: conformal dimension class via fiber-IFS tiling.

The attractor is uniformly disconnected exactly when no fiber IFS has
attractor [0,1]; in that case the conformal dimension is zero.  When a
tiling fiber exists the dimension is at least one, and exactly one when
the system itself is of the special form (root fiber tiles with full
cardinality, all deeper fibers singletons).
"""

from dataclasses import dataclass
from fractions import Fraction

from .ifs import SpongeIFS, fixed_point
from .tree import TreeError, Vertex, build_labeled_tree, fiber_ifs

ZERO = "Zero"
AT_LEAST_ONE = "AtLeastOne"
EXACTLY_ONE = "ExactlyOne"


class ClassifyError(Exception):
    """Domain error from the classify module."""


@dataclass(frozen=True)
class FiberVerdict:
    owner: Vertex
    ratio_sum: Fraction
    tiles: bool


@dataclass(frozen=True)
class Classification:
    uniformly_disconnected: bool
    conformal_dim_class: str
    witness: Vertex | None
    fiber_report: tuple  # of FiberVerdict, breadth-first

    def __post_init__(self):
        assert self.uniformly_disconnected == (self.conformal_dim_class == ZERO)
        assert (self.witness is not None) == (not self.uniformly_disconnected)

    @property
    def equivalent_statements(self):
        """The three equivalent conditions, decided via the third.

        Uniform disconnectedness, total disconnectedness of every major
        projection, and absence of a tiling fiber attractor hold or fail
        together; the fiber test is the one evaluated exactly.
        """
        v = self.uniformly_disconnected
        return {
            "uniformly_disconnected": v,
            "all_major_projections_totally_disconnected": v,
            "no_fiber_attractor_is_unit_interval": v,
        }


@dataclass(frozen=True)
class SubsystemF0:
    prefix_maps: tuple   # witness vertex coordinates g_1..g_s
    sub_ifs: SpongeIFS   # dimension d-s
    anchor_point: tuple  # fixed point of (g_1..g_s); empty when s=0


def attractor_is_unit_interval(fiber):
    """True iff the closed label images tile [0,1] exactly."""
    images = sorted((g.image() for g in fiber.labels), key=lambda iv: iv.lo)
    if images[0].lo != 0 or images[-1].hi != 1:
        return False
    for a, b in zip(images, images[1:]):
        if a.hi != b.lo:
            return False
    return True


def _is_special_form(tree):
    """Special-form hypotheses: root fiber tiles with full cardinality,
    every fiber of rank >= 1 is a singleton."""
    root_fiber = fiber_ifs(tree, tree.levels[0][0])
    n_leaves = len(tree.levels[tree.dim])
    if root_fiber.size != n_leaves or not attractor_is_unit_interval(root_fiber):
        return False
    for level in tree.levels[1:tree.dim]:
        for vertex in level:
            if fiber_ifs(tree, vertex).size != 1:
                return False
    return True


def classify(ifs):
    """Classify the sponge; raises TreeError when LG validation fails."""
    tree = build_labeled_tree(ifs)
    verdicts = []
    witness = None
    for level in tree.levels[:tree.dim]:
        for vertex in level:
            fib = fiber_ifs(tree, vertex)
            tiles = attractor_is_unit_interval(fib)
            verdicts.append(FiberVerdict(vertex, fib.ratio_sum(), tiles))
            if tiles and witness is None:
                witness = vertex
    if witness is None:
        return Classification(True, ZERO, None, tuple(verdicts))
    dim_class = EXACTLY_ONE if _is_special_form(tree) else AT_LEAST_ONE
    return Classification(False, dim_class, witness, tuple(verdicts))


def line_segment_witness(ifs, witness):
    """Anchor point x0 such that {x0} x [0,1] lies in the attractor."""
    if witness.rank != ifs.dim - 1:
        raise ClassifyError(
            "classify: line-segment witness must have rank d-1 = %d, got %d"
            % (ifs.dim - 1, witness.rank))
    tree = build_labeled_tree(ifs)
    fib = fiber_ifs(tree, witness)
    if not attractor_is_unit_interval(fib):
        raise ClassifyError("classify: witness fiber does not tile [0,1]")
    from .ifs import DiagonalAffineMap
    x0 = fixed_point(DiagonalAffineMap(witness.projected_map)) \
        if witness.rank > 0 else ()
    return x0, ifs.dim


def extract_special_subsystem(ifs, witness):
    """Build the special subsystem anchored at the witness vertex.

    For each label h_j of the witness fiber, keep the first input map
    extending (witness, h_j) and truncate to its last d-s coordinates.
    """
    tree = build_labeled_tree(ifs)
    s = witness.rank
    if s > ifs.dim - 1:
        raise ClassifyError("classify: witness rank %d exceeds d-1" % s)
    try:
        fib = fiber_ifs(tree, witness)
    except TreeError as exc:
        raise ClassifyError("classify: %s" % exc)
    if not attractor_is_unit_interval(fib):
        raise ClassifyError("classify: witness fiber does not tile [0,1]")
    from .ifs import DiagonalAffineMap
    sub_maps = []
    for h in fib.labels:
        for m in ifs.maps:
            if m.coords[:s] == witness.projected_map and m.coords[s] == h:
                sub_maps.append(DiagonalAffineMap(m.coords[s:]))
                break
        else:
            raise ClassifyError("classify: no map extends the witness by %s" % h)
    sub_ifs = SpongeIFS(ifs.dim - s, tuple(sub_maps))
    if classify(sub_ifs).conformal_dim_class != EXACTLY_ONE:
        raise ClassifyError("classify: extracted subsystem is not of the "
                            "special form")
    anchor = fixed_point(DiagonalAffineMap(witness.projected_map)) if s else ()
    return SubsystemF0(witness.projected_map, sub_ifs, anchor)
