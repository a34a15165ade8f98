"""Additive idempotent completion of the diagram category.

Objects are formal direct sums of words together with an idempotent block
matrix; morphisms are block matrices of diagram morphisms absorbed by the
idempotents on both sides (g . h = h = h . f). Constructors validate these
conditions eagerly; internal hot paths that produce already-valid data use
check=False.

Block convention: block (i, j) of a morphism from X to Y maps X.summands[j]
to Y.summands[i]; matrices multiply in the usual row-by-column way with
diagram composition as the entry product.
"""
from __future__ import annotations

import dataclasses
from fractions import Fraction
from typing import Sequence

from curcat.diagrams import (
    DiagMorphism,
    DiagramTypeError,
    Word,
    compose,
    diag_from_json_dict,
    diag_to_json_dict,
    swap_words,
    tensor,
)
from curcat.exact import DeltaPoly

Blocks = tuple[tuple[DiagMorphism, ...], ...]


def _freeze_blocks(blocks: Sequence[Sequence[DiagMorphism]]) -> Blocks:
    return tuple(tuple(row) for row in blocks)


def _check_block_shape(
    blocks: Blocks, rows: Sequence[Word], cols: Sequence[Word]
) -> None:
    if len(blocks) != len(rows):
        raise DiagramTypeError(f"expected {len(rows)} block rows, got {len(blocks)}")
    for i, row in enumerate(blocks):
        if len(row) != len(cols):
            raise DiagramTypeError(
                f"row {i}: expected {len(cols)} blocks, got {len(row)}"
            )
        for j, b in enumerate(row):
            if b.domain != cols[j] or b.codomain != rows[i]:
                raise DiagramTypeError(
                    f"block ({i},{j}) has boundary {b.domain}->{b.codomain}, "
                    f"expected {cols[j]}->{rows[i]}"
                )


def _mat_compose(a: Blocks, b: Blocks) -> Blocks:
    """Blockwise product: entry (i,j) = sum_k a[i][k] after b[k][j]."""
    out = []
    for i in range(len(a)):
        row = []
        for j in range(len(b[0])):
            acc = None
            for k in range(len(b)):
                term = compose(a[i][k], b[k][j])
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _mat_add(a: Blocks, b: Blocks) -> Blocks:
    return tuple(
        tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b)
    )


def _mat_eq(a: Blocks, b: Blocks) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


@dataclasses.dataclass(frozen=True)
class KarObject:
    """A list of word summands with an idempotent block matrix."""

    summands: tuple[Word, ...]
    idempotent: Blocks

    def __post_init__(self):
        _check_block_shape(self.idempotent, self.summands, self.summands)

    @property
    def flavor(self) -> str:
        return self.summands[0].flavor if self.summands else "oriented"

    def __repr__(self):
        parts = "+".join(str(w) if len(w) else "1" for w in self.summands)
        return f"KarObject({parts or '0'})"


@dataclasses.dataclass(frozen=True)
class KarMorphism:
    """A block matrix of diagram morphisms between two envelope objects."""

    source: KarObject
    target: KarObject
    blocks: Blocks

    def __post_init__(self):
        _check_block_shape(self.blocks, self.target.summands, self.source.summands)

    def is_zero(self) -> bool:
        return all(b.is_zero() for row in self.blocks for b in row)

    def __add__(self, other: "KarMorphism") -> "KarMorphism":
        return kar_add(self, other)

    def __sub__(self, other: "KarMorphism") -> "KarMorphism":
        return kar_add(self, kar_scale(other, -1))

    def __neg__(self) -> "KarMorphism":
        return kar_scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, KarMorphism):
            return kar_compose(self, other)
        if isinstance(other, (int, Fraction, DeltaPoly)):
            return kar_scale(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, DeltaPoly)):
            return kar_scale(self, other)
        return NotImplemented

    def __matmul__(self, other: "KarMorphism") -> "KarMorphism":
        return kar_tensor(self, other)

    def specialize(self, delta_value) -> "KarMorphism":
        return KarMorphism(
            self.source,
            self.target,
            tuple(
                tuple(b.specialize(delta_value) for b in row) for row in self.blocks
            ),
        )

    def __repr__(self):
        return f"KarMorphism({self.source!r} -> {self.target!r})"


class NotIdempotentError(DiagramTypeError):
    """The proposed idempotent fails e . e = e."""


class NotAbsorbedError(DiagramTypeError):
    """The proposed blocks fail the absorption condition g . h = h = h . f."""


def kar_object(
    summands: Sequence[Word | str],
    idempotent: Sequence[Sequence[DiagMorphism]],
    check: bool = True,
) -> KarObject:
    """Build and (by default) validate an envelope object."""
    from curcat.diagrams import word as _word

    ws = tuple(w if isinstance(w, Word) else _word(w) for w in summands)
    e = _freeze_blocks(idempotent)
    obj = KarObject(ws, e)
    if check and not _mat_eq(_mat_compose(e, e), e):
        raise NotIdempotentError("block matrix is not idempotent")
    return obj


def kar_word(w: Word | str) -> KarObject:
    """The plain word as an envelope object (identity idempotent)."""
    from curcat.diagrams import word as _word

    w = w if isinstance(w, Word) else _word(w)
    return KarObject((w,), ((DiagMorphism.identity(w),),))


def kar_unit(flavor: str = "oriented") -> KarObject:
    from curcat.diagrams import empty_word

    return kar_word(empty_word(flavor))


def kar_morphism(
    source: KarObject,
    target: KarObject,
    blocks: Sequence[Sequence[DiagMorphism]],
    check: bool = True,
) -> KarMorphism:
    """Build a morphism; by default verify it is absorbed by both idempotents."""
    h = KarMorphism(source, target, _freeze_blocks(blocks))
    if check:
        left = _mat_compose(target.idempotent, h.blocks)
        right = _mat_compose(h.blocks, source.idempotent)
        if not _mat_eq(left, h.blocks) or not _mat_eq(right, h.blocks):
            raise NotAbsorbedError(
                "blocks are not absorbed by the source/target idempotents"
            )
    return h


def kar_sandwich(
    source: KarObject, target: KarObject, blocks: Sequence[Sequence[DiagMorphism]]
) -> KarMorphism:
    """Project raw blocks onto a valid morphism: target.e . blocks . source.e."""
    raw = _freeze_blocks(blocks)
    _check_block_shape(raw, target.summands, source.summands)
    absorbed = _mat_compose(
        target.idempotent, _mat_compose(raw, source.idempotent)
    )
    return KarMorphism(source, target, absorbed)


def kar_diag(f: DiagMorphism) -> KarMorphism:
    """A plain diagram morphism as a map between plain word objects."""
    return KarMorphism(kar_word(f.domain), kar_word(f.codomain), ((f,),))


def kar_identity(obj: KarObject) -> KarMorphism:
    """The identity of (X, e) is e itself."""
    return KarMorphism(obj, obj, obj.idempotent)


def kar_zero(source: KarObject, target: KarObject) -> KarMorphism:
    return KarMorphism(
        source,
        target,
        tuple(
            tuple(DiagMorphism.zero(sw, tw) for sw in source.summands)
            for tw in target.summands
        ),
    )


def kar_compose(f: KarMorphism, g: KarMorphism) -> KarMorphism:
    """The composite f after g."""
    if g.target != f.source:
        raise DiagramTypeError("cannot compose: middle objects differ")
    return KarMorphism(g.source, f.target, _mat_compose(f.blocks, g.blocks))


def kar_add(f: KarMorphism, g: KarMorphism) -> KarMorphism:
    if f.source != g.source or f.target != g.target:
        raise DiagramTypeError("cannot add: boundaries differ")
    return KarMorphism(f.source, f.target, _mat_add(f.blocks, g.blocks))


def kar_scale(f: KarMorphism, c) -> KarMorphism:
    return KarMorphism(
        f.source,
        f.target,
        tuple(tuple(b.scale(c) for b in row) for row in f.blocks),
    )


def kar_tensor_objects(a: KarObject, b: KarObject) -> KarObject:
    """Tensor of objects: summand pairs in left-major order."""
    summands = tuple(x + y for x in a.summands for y in b.summands)
    blocks = []
    for i1 in range(len(a.summands)):
        for i2 in range(len(b.summands)):
            row = []
            for j1 in range(len(a.summands)):
                for j2 in range(len(b.summands)):
                    row.append(tensor(a.idempotent[i1][j1], b.idempotent[i2][j2]))
            blocks.append(tuple(row))
    return KarObject(summands, tuple(blocks))


def kar_tensor(f: KarMorphism, g: KarMorphism) -> KarMorphism:
    source = kar_tensor_objects(f.source, g.source)
    target = kar_tensor_objects(f.target, g.target)
    blocks = []
    for i1 in range(len(f.target.summands)):
        for i2 in range(len(g.target.summands)):
            row = []
            for j1 in range(len(f.source.summands)):
                for j2 in range(len(g.source.summands)):
                    row.append(tensor(f.blocks[i1][j1], g.blocks[i2][j2]))
            blocks.append(tuple(row))
    return KarMorphism(source, target, tuple(blocks))


def kar_direct_sum(objects: Sequence[KarObject]) -> KarObject:
    """Block-diagonal direct sum."""
    summands = tuple(w for obj in objects for w in obj.summands)
    n = len(summands)
    offsets = []
    off = 0
    for obj in objects:
        offsets.append(off)
        off += len(obj.summands)
    blocks = [
        [DiagMorphism.zero(summands[j], summands[i]) for j in range(n)]
        for i in range(n)
    ]
    for obj, off in zip(objects, offsets):
        for i, row in enumerate(obj.idempotent):
            for j, b in enumerate(row):
                blocks[off + i][off + j] = b
    return KarObject(summands, _freeze_blocks(blocks))


def kar_inclusion(
    parts: Sequence[KarObject], total: KarObject, index: int
) -> KarMorphism:
    """The inclusion of parts[index] into their direct sum."""
    part = parts[index]
    off = sum(len(p.summands) for p in parts[:index])
    blocks = [
        [
            DiagMorphism.zero(sw, tw)
            for sw in part.summands
        ]
        for tw in total.summands
    ]
    for i, row in enumerate(part.idempotent):
        for j, b in enumerate(row):
            blocks[off + i][j] = b
    return KarMorphism(part, total, _freeze_blocks(blocks))


def kar_projection(
    parts: Sequence[KarObject], total: KarObject, index: int
) -> KarMorphism:
    """The projection of the direct sum onto parts[index]."""
    part = parts[index]
    off = sum(len(p.summands) for p in parts[:index])
    blocks = [
        [
            DiagMorphism.zero(sw, tw)
            for sw in total.summands
        ]
        for tw in part.summands
    ]
    for i, row in enumerate(part.idempotent):
        for j, b in enumerate(row):
            blocks[i][off + j] = b
    return KarMorphism(total, part, _freeze_blocks(blocks))


def kar_braiding(a: KarObject, b: KarObject) -> KarMorphism:
    """The symmetric braiding (A, e) tensor (B, f) -> (B, f) tensor (A, e)."""
    source = kar_tensor_objects(a, b)
    target = kar_tensor_objects(b, a)
    na, nb = len(a.summands), len(b.summands)
    raw = [
        [
            DiagMorphism.zero(source.summands[j], target.summands[i])
            for j in range(na * nb)
        ]
        for i in range(na * nb)
    ]
    for i in range(na):
        for j in range(nb):
            src_idx = i * nb + j
            tgt_idx = j * na + i
            raw[tgt_idx][src_idx] = swap_words(a.summands[i], b.summands[j])
    return kar_sandwich(source, target, raw)


def kar_from_blocks_validated(
    source: KarObject, target: KarObject, blocks
) -> KarMorphism:
    return kar_morphism(source, target, blocks, check=True)


# ---------------------------------------------------------------------------
# serialization


def kar_object_to_json_dict(obj: KarObject) -> dict:
    return {
        "summands": [str(w) for w in obj.summands],
        "flavor": obj.flavor,
        "idempotent": [
            [diag_to_json_dict(b) for b in row] for row in obj.idempotent
        ],
    }


def kar_morphism_to_json_dict(f: KarMorphism) -> dict:
    return {
        "source": kar_object_to_json_dict(f.source),
        "target": kar_object_to_json_dict(f.target),
        "blocks": [[diag_to_json_dict(b) for b in row] for row in f.blocks],
    }


def kar_object_from_json_dict(obj: dict) -> KarObject:
    from curcat.diagrams import word as _word

    flavor = obj["flavor"]
    ws = [_word(s, flavor) for s in obj["summands"]]
    e = [[diag_from_json_dict(b) for b in row] for row in obj["idempotent"]]
    return kar_object(ws, e)


def kar_morphism_from_json_dict(obj: dict) -> KarMorphism:
    source = kar_object_from_json_dict(obj["source"])
    target = kar_object_from_json_dict(obj["target"])
    blocks = [[diag_from_json_dict(b) for b in row] for row in obj["blocks"]]
    return kar_morphism(source, target, blocks)
