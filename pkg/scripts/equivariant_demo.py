#!/usr/bin/env python3
"""Walk through the bundled equivariant example: the order-two group acting
on sl2 by the flip e<->f, h->-h and on truncated polynomials by negating t.

Prints the isotypic dimensions, the fixed-point algebra, the ideal
stabilizer, the twisted evaluation checks, and the evaluation module report.
"""
from __future__ import annotations

import sys

from curcat.equivariant import (
    Character,
    all_characters,
    isotypic_dimensions,
    sl2_z2_truncated_setup,
    twisted_evaluation_zero_check,
)


def main() -> int:
    setup = sl2_z2_truncated_setup()
    print("group:", setup["group"].factors)
    print("isotypic dimensions on the Lie side:", isotypic_dimensions(setup["lie_act"]))
    print(
        "isotypic dimensions on the algebra side:",
        isotypic_dimensions(setup["algebra_act"]),
    )
    fixed = setup["fixed_algebra"]
    print("fixed-point algebra dimension:", fixed.dimension)
    print("bracket closed:", fixed.bracket_closed)
    for piece in fixed.pieces:
        print(
            f"  character {piece.character.exponents}: "
            f"{len(piece.lie_basis)} x {len(piece.algebra_basis)} piece"
        )
    stab = setup["stabilizer"]
    print(
        "stabilizer of the evaluation ideal: order",
        stab.order,
        "(full)" if stab.is_full else "(proper)",
    )
    sign = Character(setup["group"], (1,))
    twisted = twisted_evaluation_zero_check(
        setup["algebra"], setup["algebra_act"], setup["ideal"], sign
    )
    for entry in twisted:
        print(f"  {entry['status'].upper():>4}  {entry['identity']}")
    module = setup["module"]
    print("evaluation module dimension:", module.module_dim)
    print(
        "compatibility checks:",
        f"{sum(1 for e in module.report if e['status'] == 'pass')}"
        f"/{len(module.report)} pass",
    )
    return 0 if module.passed else 1


if __name__ == "__main__":
    sys.exit(main())
