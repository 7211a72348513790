#!/usr/bin/env python3
"""How does the check residual behave as arguments approach the cut?

Marches a fixed index's arguments toward the positive real axis (where the
identity's logarithms branch) and prints residual against approach angle.
The identity holds on the open region, so residuals should stay flat until
the panel route starts fighting the nearby singularities; this script shows
where that happens for a given configuration.
"""

import argparse
import cmath
import sys

from mplparity.numcore import EvalConfig
from mplparity.words import ArgVector, Index
from mplparity.parity import main_sides


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--index", default="2,1", help="comma-separated index")
    ap.add_argument("--moduli", default="2.0,1.6",
                    help="tail-product moduli, outermost first")
    ap.add_argument("--panel-order", type=int, default=None)
    ap.add_argument("--angles", default="1.0,0.3,0.1,0.03,0.01,0.003")
    args = ap.parse_args()

    k = Index(tuple(int(t) for t in args.index.split(",")))
    moduli = [float(t) for t in args.moduli.split(",")]
    if len(moduli) != k.depth:
        ap.error("need one modulus per index entry")
    overrides = {}
    if args.panel_order:
        overrides["panel_order"] = args.panel_order
    cfg = EvalConfig(**overrides)

    print(f"index {k.parts}, tail moduli {moduli}")
    print(f"{'angle':>10} {'residual':>14} {'star methods':>24}")
    for tok in args.angles.split(","):
        theta = float(tok)
        # stagger the angles: equal angles would put the argument ratios
        # exactly on the positive axis, outside the identity's domain
        tails = [cmath.rect(m, theta * (k.depth - i)) for i, m in enumerate(moduli)]
        entries = tuple(tails[i] / tails[i + 1] for i in range(k.depth - 1)) \
            + (tails[-1],)
        rep = main_sides(k, ArgVector.of(entries), cfg)
        print(f"{theta:>10.4f} {rep.residual:>14.3e} {','.join(rep.star_methods):>24}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
