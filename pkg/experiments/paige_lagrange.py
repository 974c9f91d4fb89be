"""
Moufang Loops and the Lagrange Properties
=========================================

Two checks around the Moufang case:

    1. The Paige loop M*(2): simple, nonassociative Moufang, order 120.
       All subloop orders divide 120.
    2. The order-10 loop from search-order10: weak Lagrange holds but strong
       fails, so the reduction to simple pieces cannot be dropped.

Chein doubles of small nonabelian groups are included as a Moufang baseline.

Usage:
    python experiments/paige_lagrange.py
    LOOPWORKS_THREADS=4 python experiments/paige_lagrange.py --stretch

--stretch also enumerates every subloop of M*(3) (order 1080). That run is
long; progress is checkpointed to results/paige3_checkpoint.json after every
round and resumed from there.
"""

import sys
import os
import json
import time
from datetime import datetime

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.census import search_order10_counterexample
from src.constructions import chein_double, dihedral_group, quaternion_group, symmetric_group
from src.decision import decide_strong, decide_weak, render_certificate
from src.limits import EngineLimits
from src.normality import is_simple
from src.paige import paige_loop
from src.subloops import all_subloops, weak_lagrange
from src.varieties import is_associative, is_moufang, m_k_class


def _moufang_row(name, L, limits):
    start = time.time()
    lattice = all_subloops(L, limits)
    weak = weak_lagrange(L, lattice)
    row = {
        "name": name,
        "order": L.n,
        "moufang": is_moufang(L, limits).holds,
        "associative": is_associative(L, limits).holds,
        "simple": is_simple(L, limits),
        "subloops": len(lattice),
        "subloopOrders": sorted(set(lattice.orders())),
        "weakLagrange": weak.holds,
        "mK": m_k_class(L),
        "seconds": round(time.time() - start, 3),
    }
    print(f"   {name:<10} order={L.n:<5} subloops={row['subloops']:<6} "
          f"simple={row['simple']!s:<5} weak={weak.holds}")
    return row


def _paige3_stretch(limits):
    print(f"\n{'='*50}")
    print("   M*(3) stretch")
    print(f"{'='*50}")
    results_dir = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "results")
    os.makedirs(results_dir, exist_ok=True)
    checkpoint = os.path.join(results_dir, "paige3_checkpoint.json")
    start = time.time()
    L = paige_loop(3, limits)
    lattice = all_subloops(L, limits, checkpoint)
    weak = weak_lagrange(L, lattice)
    print(f"   subloops={len(lattice)} weak={weak.holds} ({time.time() - start:.0f}s)")
    return {
        "order": L.n,
        "subloops": len(lattice),
        "subloopOrders": sorted(set(lattice.orders())),
        "weakLagrange": weak.holds,
    }


def run_experiment():
    print("=" * 70)
    print("    LOOPWORKS: MOUFANG LOOPS AND LAGRANGE")
    print("=" * 70)

    limits = EngineLimits.from_env()
    print(f"\n⚙️ Threads: {limits.threads}")

    print(f"\n{'='*50}")
    print("   Moufang loops")
    print(f"{'='*50}")
    loops = {
        "M(S3,2)": chein_double(symmetric_group(3)),
        "M(D4,2)": chein_double(dihedral_group(4)),
        "M(Q8,2)": chein_double(quaternion_group()),
        "M*(2)": paige_loop(2, limits),
    }
    moufang = [_moufang_row(name, L, limits) for name, L in loops.items()]

    print(f"\n{'='*50}")
    print("   Order-10 loop")
    print(f"{'='*50}")
    L10 = search_order10_counterexample(limits)
    weak = decide_weak(L10, limits=limits)
    strong = decide_strong(L10, limits=limits)
    print(render_certificate(strong))

    stretch = None
    if "--stretch" in sys.argv:
        stretch = _paige3_stretch(limits)

    print("\n" + "=" * 70)
    print("    VERDICT")
    print("=" * 70)
    paige = moufang[-1]
    divides = all(paige["order"] % k == 0 for k in paige["subloopOrders"])
    print(f"\n🎯 M*(2) simple: {'✅' if paige['simple'] else '❌'}   "
          f"subloop orders divide 120: {'✅' if divides else '❌'}")
    print(f"   Order 10 weak={weak.holds} strong={strong.holds}: "
          f"{'✅ separated' if weak.holds and not strong.holds else '❌ not separated'}")
    print("=" * 70)

    results_dir = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "results")
    os.makedirs(results_dir, exist_ok=True)
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    filename = os.path.join(results_dir, f"paige_lagrange_{timestamp}.json")

    with open(filename, 'w') as f:
        json.dump({
            "timestamp": timestamp,
            "experiment": "moufang_lagrange",
            "parameters": {"threads": limits.threads},
            "moufang": moufang,
            "order10": {
                "digest": L10.digest,
                "weak": render_certificate(weak),
                "strong": render_certificate(strong),
            },
            "paige3": stretch,
            "analysis": {
                "paigeOrdersDivide": divides,
                "order10Separates": weak.holds and not strong.holds,
            },
        }, f, indent=4, sort_keys=True)

    print(f"\n💾 Saved: {filename}")


if __name__ == "__main__":
    run_experiment()
