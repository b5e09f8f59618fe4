"""Smoke test for the `zerosum` extension module.

Uses an installed `zerosum` if there is one, otherwise loads the shared
library from target/release (build it with
`cargo build --release -p zerosum-py --features extension-module`).
"""

import importlib.util
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load():
    try:
        import zerosum

        return zerosum
    except ImportError:
        pass
    for name in ("libzerosum.so", "libzerosum.dylib", "zerosum.dll"):
        lib = ROOT / "target" / "release" / name
        if lib.exists():
            break
    else:
        sys.exit("zerosum extension not built")
    suffix = ".pyd" if lib.suffix == ".dll" else ".so"
    tmp = Path(tempfile.mkdtemp()) / f"zerosum{suffix}"
    shutil.copy(lib, tmp)
    spec = importlib.util.spec_from_file_location("zerosum", tmp)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    zs = load()
    checks = []

    def check(name, got, want):
        checks.append(got == want)
        print(f"{'ok  ' if got == want else 'FAIL'} {name}: {got!r}")

    check("davenport 3,3", zs.davenport("3,3"), 5)
    check("davenport_m 3,3 m=2", zs.davenport_m("3,3", 2), 8)
    check("davenport_short 3^3 k=3", zs.davenport_short("3^3", 3), 17)

    d, p, q = zs.smith_normal_form([[2, 4], [6, 8]])
    check("snf diagonal", [d[0][0], d[1][1]], [2, 4])
    check("solvable_mod 2x=1 mod 4", zs.solvable_mod([[2]], [1], 4), False)
    check("solvable_mod 2x=1 mod 5", zs.solvable_mod([[2]], [1], 5), True)
    check("pattern", zs.solvability_pattern([[2]], [1]), "cofinite d=2 T={1}")
    check("witness", zs.unsolvability_witness([[2]], [1]), 2)

    check("property_b 5", zs.property_b(5), True)
    check("completion_class", zs.completion_class(5, "(1,0)^3 (0,1)^3"), "C2")
    ledger = dict(zs.constants(3, 3, 4))
    check("constants c", ledger["c"], 81)

    check("lemma_length3", zs.lemma_length3(), (0, 1, True))
    check("enumerate_a13", len(zs.enumerate_a13()), 15)

    try:
        zs.davenport("3,x")
    except ValueError:
        checks.append(True)
        print("ok   bad group raises ValueError")
    else:
        checks.append(False)
        print("FAIL bad group accepted")

    sys.exit(0 if all(checks) else 1)


if __name__ == "__main__":
    main()
