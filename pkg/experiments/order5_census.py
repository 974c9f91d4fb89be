"""
Small-Order Census: Where Lagrange First Fails
==============================================

Enumerates every loop of order 1..5 up to isomorphism and tallies which
ones have the weak and strong Lagrange properties.

Expected:
    - Class counts 1, 1, 1, 2, 6
    - Exactly the order-5 loops with an element of order 2 fail weak Lagrange
    - Every failure is caught by a simple-node certificate with a 2-element witness
"""

import sys
import os
import json
from datetime import datetime

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.census import enumerate_loops, has_element_of_order_two
from src.decision import decide_strong, decide_weak, strong_lagrange_reasons
from src.varieties import is_associative, is_commutative, is_power_associative


def run_census(max_order: int = 5):
    print("=" * 70)
    print("    LOOPWORKS: SMALL-ORDER CENSUS")
    print("=" * 70)

    rows = []
    for n in range(1, max_order + 1):
        loops = enumerate_loops(n)
        print(f"\n🔨 Order {n}: {len(loops)} isomorphism classes")
        for i, L in enumerate(loops):
            weak = decide_weak(L)
            strong = decide_strong(L)
            row = {
                "order": n,
                "index": i,
                "digest": L.digest,
                "associative": is_associative(L).holds,
                "commutative": is_commutative(L).holds,
                "powerAssociative": is_power_associative(L).holds,
                "hasOrderTwo": has_element_of_order_two(L),
                "weakLagrange": weak.holds,
                "strongLagrange": strong.holds,
                "certificateDepth": weak.root.depth(),
                "reasons": strong_lagrange_reasons(L),
            }
            if not weak.holds:
                row["witness"] = [list(w) for w in weak.root.witness]
            rows.append(row)
            mark = "✅" if weak.holds else "❌"
            print(f"   {mark} [{i}] assoc={row['associative']!s:<5} "
                  f"order-2={row['hasOrderTwo']!s:<5} weak={weak.holds!s:<5} strong={strong.holds}")

    print("\n" + "=" * 70)
    print("    ANALYSIS")
    print("=" * 70)

    failures = [r for r in rows if not r["weakLagrange"]]
    counts = [sum(1 for r in rows if r["order"] == n) for n in range(1, max_order + 1)]
    explained = all(r["hasOrderTwo"] == (not r["weakLagrange"]) for r in rows if r["order"] == 5)
    print(f"\n🎯 Class counts: {counts}")
    print(f"   Weak Lagrange failures: {len(failures)}")
    print(f"   Order-5 failures are exactly the loops with an involution: "
          f"{'✅ YES' if explained else '❌ NO'}")

    results_dir = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "results")
    os.makedirs(results_dir, exist_ok=True)
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    filename = os.path.join(results_dir, f"order5_census_{timestamp}.json")

    with open(filename, 'w') as f:
        json.dump({
            "timestamp": timestamp,
            "experiment": "small_order_census",
            "parameters": {"max_order": max_order},
            "classCounts": counts,
            "loops": rows,
            "analysis": {
                "weakFailures": len(failures),
                "failuresHaveInvolution": explained,
            },
        }, f, indent=4, sort_keys=True)

    print(f"\n💾 Saved: {filename}")
    return rows


if __name__ == "__main__":
    run_census()
