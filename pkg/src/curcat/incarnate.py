"""Matrix realizations of the diagram categories.

For a chosen dimension n, every word maps to the n^len tensor-power space
and every matching maps to the 0/1 tensor whose entries are products of
Kronecker deltas over its pairs. Up and down strands both land on the base
space (the dual is identified through the standard basis), and the
unoriented pairing is the identity bilinear form. Loops evaluate to n, so
delta-polynomial coefficients specialize at n before entering a matrix.

Multi-index flattening is row-major with the leftmost tensor factor most
significant; hom spaces flatten codomain-major (row index first).
"""
from __future__ import annotations

import dataclasses
from fractions import Fraction
from itertools import permutations, product as iproduct

from curcat.diagrams import (
    ORIENTED,
    UNORIENTED,
    DiagMorphism,
    DiagramTypeError,
    Matching,
    Word,
    all_matchings,
    antisymmetrizer,
    compose,
    permutation_diagram,
    tensor,
    word,
)
from curcat.exact import (
    RATIONAL_RING,
    ExactMatrix,
    kernel_basis,
    matrix_from_columns,
    rref,
)
from curcat.karoubi import KarMorphism


@dataclasses.dataclass(frozen=True)
class IncarnationConfig:
    """Target dimension and flavor for the matrix realization."""

    n: int
    flavor: str = ORIENTED

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be at least 1")
        if self.flavor not in (ORIENTED, UNORIENTED):
            raise ValueError(f"unknown flavor {self.flavor!r}")

    def space_dim(self, w: Word) -> int:
        return self.n ** len(w)


def hom_basis(w1: Word | str, w2: Word | str) -> list[Matching]:
    """All matchings from w1 to w2 in deterministic order."""
    w1 = w1 if isinstance(w1, Word) else word(w1)
    w2 = w2 if isinstance(w2, Word) else word(w2)
    return all_matchings(w1, w2)


def _digits_to_index(digits: tuple[int, ...], n: int) -> int:
    idx = 0
    for d in digits:
        idx = idx * n + d
    return idx


def incarnate_matching(m: Matching, cfg: IncarnationConfig) -> ExactMatrix:
    """The 0/1 matrix of a single matching.

    Each pair forces its two endpoints to carry equal basis indices; the
    nonzero entries are exactly the joint index assignments, one free index
    per pair.
    """
    n = cfg.n
    rows = cfg.space_dim(m.codomain)
    cols = cfg.space_dim(m.domain)
    entries = [[Fraction(0)] * cols for _ in range(rows)]
    pairs = m.pairs
    for assignment in iproduct(range(n), repeat=len(pairs)):
        bot = [0] * len(m.domain)
        top = [0] * len(m.codomain)
        for (p, q), value in zip(pairs, assignment):
            for side, i in (p, q):
                if side == "bot":
                    bot[i] = value
                else:
                    top[i] = value
        r = _digits_to_index(tuple(top), n)
        c = _digits_to_index(tuple(bot), n)
        entries[r][c] += 1
    return ExactMatrix(entries, RATIONAL_RING, cols=cols)


def incarnate(f: DiagMorphism | KarMorphism, cfg: IncarnationConfig) -> ExactMatrix:
    """Linearly extend the matching realization; loops become n.

    Envelope morphisms map to block matrices over the direct sum of the
    summand spaces.
    """
    if isinstance(f, KarMorphism):
        return _incarnate_blocks(f, cfg)
    rows = cfg.space_dim(f.codomain)
    cols = cfg.space_dim(f.domain)
    acc = ExactMatrix.zeros(rows, cols, RATIONAL_RING)
    for m, coeff in f.terms:
        value = coeff.evaluate(Fraction(cfg.n))
        acc = acc + incarnate_matching(m, cfg).scale(value)
    return acc


def _incarnate_blocks(f: KarMorphism, cfg: IncarnationConfig) -> ExactMatrix:
    row_dims = [cfg.space_dim(w) for w in f.target.summands]
    col_dims = [cfg.space_dim(w) for w in f.source.summands]
    rows = sum(row_dims)
    cols = sum(col_dims)
    entries = [[Fraction(0)] * cols for _ in range(rows)]
    r_off = 0
    for bi, row in enumerate(f.blocks):
        c_off = 0
        for bj, block in enumerate(row):
            small = incarnate(block, cfg)
            for r in range(small.rows):
                for c in range(small.cols):
                    entries[r_off + r][c_off + c] = small.entries[r][c]
            c_off += col_dims[bj]
        r_off += row_dims[bi]
    return ExactMatrix(entries, RATIONAL_RING, cols=cols)


# ---------------------------------------------------------------------------
# kernels


@dataclasses.dataclass(frozen=True)
class KernelResult:
    """Exact kernel of the realization map on one hom space."""

    domain: Word
    codomain: Word
    n: int
    matchings: tuple[Matching, ...]
    hom_dimension: int
    rank: int
    kernel_dimension: int
    basis: tuple[tuple[Fraction, ...], ...]


def kernel_of_incarnation(
    w1: Word | str, w2: Word | str, cfg: IncarnationConfig
) -> KernelResult:
    """Kernel of (matching coefficients) -> (flattened matrices)."""
    w1 = w1 if isinstance(w1, Word) else word(w1)
    w2 = w2 if isinstance(w2, Word) else word(w2)
    basis = hom_basis(w1, w2)
    columns = [list(incarnate_matching(m, cfg).flatten()) for m in basis]
    if not basis:
        return KernelResult(w1, w2, cfg.n, (), 0, 0, 0, ())
    mat = matrix_from_columns(columns, RATIONAL_RING)
    vectors = kernel_basis(mat)
    _, rank, _ = rref(mat)
    return KernelResult(
        w1,
        w2,
        cfg.n,
        tuple(basis),
        len(basis),
        rank,
        len(vectors),
        tuple(tuple(v) for v in vectors),
    )


def kernel_report_json(result: KernelResult) -> dict:
    return {
        "word": str(result.domain),
        "codomain": str(result.codomain),
        "n": result.n,
        "hom_dimension": result.hom_dimension,
        "rank": result.rank,
        "kernel_dimension": result.kernel_dimension,
        "basis": [[str(x) for x in v] for v in result.basis],
    }


# ---------------------------------------------------------------------------
# reports


def _entry(name: str, ok: bool, detail: str | None = None) -> dict:
    out = {"identity": name, "status": "pass" if ok else "fail"}
    if detail is not None and not ok:
        out["residual"] = detail
    return out


def antisymmetrizer_kernel_check(
    cfg: IncarnationConfig, words: list[Word | str]
) -> list[dict]:
    """A_{n+1} dies in the realization and its two-sided permutation
    paddings span the whole kernel on the supplied endomorphism spaces."""
    if cfg.flavor != ORIENTED:
        raise DiagramTypeError("kernel ideal checks run in the oriented flavor")
    n = cfg.n
    report = []
    a_top = antisymmetrizer(n + 1)
    report.append(
        _entry(
            f"vanishing(asym({n + 1}), n={n})",
            incarnate(a_top, cfg).is_zero(),
        )
    )
    report.append(
        _entry(
            f"nonvanishing(asym({n}), n={n})",
            not incarnate(antisymmetrizer(n), cfg).is_zero(),
        )
    )
    for w in words:
        w = w if isinstance(w, Word) else word(w)
        if w.count("u") != len(w):
            raise DiagramTypeError("ideal-span words must be uniform in u")
        k = len(w)
        result = kernel_of_incarnation(w, w, cfg)
        if k < n + 1:
            ok = result.kernel_dimension == 0
            report.append(
                _entry(f"kernel-empty(End({w}), n={n})", ok, str(result.kernel_dimension))
            )
            continue
        basis_index = {m: i for i, m in enumerate(result.matchings)}
        pad = DiagMorphism.identity(word("u" * (k - n - 1)))
        seed = tensor(a_top, pad) if len(pad.domain) else a_top
        span_vectors: list[list[Fraction]] = []
        perms = [permutation_diagram(p, w) for p in permutations(range(k))]
        for left in perms:
            mid = compose(left, seed)
            for right in perms:
                element = compose(mid, right)
                coeffs = [Fraction(0)] * len(result.matchings)
                for m, c in element.terms:
                    coeffs[basis_index[m]] = c.evaluate(Fraction(n))
                span_vectors.append(coeffs)
        span = matrix_from_columns(span_vectors, RATIONAL_RING)
        _, span_rank, _ = rref(span)
        ok = span_rank == result.kernel_dimension
        if ok and result.kernel_dimension:
            # same rank + containment of the union proves span = kernel
            combined = matrix_from_columns(
                span_vectors + [list(v) for v in result.basis], RATIONAL_RING
            )
            _, combined_rank, _ = rref(combined)
            ok = combined_rank == result.kernel_dimension
        report.append(
            _entry(
                f"ideal-span(End({w}), n={n})",
                ok,
                f"span rank {span_rank} vs kernel {result.kernel_dimension}",
            )
        )
    return report


def _skew_projector(n: int) -> ExactMatrix:
    size = n * n
    entries = [[Fraction(0)] * size for _ in range(size)]
    for i in range(n):
        for j in range(n):
            r = i * n + j
            entries[r][i * n + j] += Fraction(1, 2)
            entries[r][j * n + i] -= Fraction(1, 2)
    return ExactMatrix(entries, RATIONAL_RING)


def so_object_image_check(n: int) -> list[dict]:
    """The skew projector object realizes as projection onto antisymmetric
    matrices and its bracket realizes as the matrix commutator."""
    from curcat.lie import unoriented_so_object

    cfg = IncarnationConfig(n, UNORIENTED)
    so = unoriented_so_object()
    proj = incarnate(so.carrier.idempotent[0][0], cfg)
    report = []
    report.append(_entry(f"projector-idempotent(n={n})", (proj @ proj) == proj))
    report.append(_entry(f"projector-shape(n={n})", proj == _skew_projector(n)))
    _, rank, _ = rref(proj)
    expect = n * (n - 1) // 2
    report.append(
        _entry(f"image-dimension(n={n})", rank == expect, f"{rank} vs {expect}")
    )
    bracket = incarnate(so.bracket.blocks[0][0], cfg)
    ok = True
    detail = None
    skew_basis = []
    for i in range(n):
        for j in range(i + 1, n):
            m = [[Fraction(0)] * n for _ in range(n)]
            m[i][j] = Fraction(1)
            m[j][i] = Fraction(-1)
            skew_basis.append(ExactMatrix(m, RATIONAL_RING))
    for x in skew_basis:
        vx = ExactMatrix.column(list(x.flatten()), RATIONAL_RING)
        for y in skew_basis:
            vy = ExactMatrix.column(list(y.flatten()), RATIONAL_RING)
            pair = vx.kron(vy)
            got = bracket @ pair
            comm = (x @ y) - (y @ x)
            want = ExactMatrix.column(list(comm.flatten()), RATIONAL_RING)
            if got != want:
                ok = False
                detail = "bracket disagrees with the commutator"
                break
        if not ok:
            break
    report.append(_entry(f"bracket-is-commutator(n={n})", ok, detail))
    return report
