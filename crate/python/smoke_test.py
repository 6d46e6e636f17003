#!/usr/bin/env python3
"""Smoke test for the ech_kit_py extension module.

Builds nothing itself: expects `cargo build -p ech-kit-py` to have produced
target/<profile>/libech_kit_py.so. Copies the library into a temp dir under
the importable name and drives the bindings end to end.
"""

import json
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def locate_library() -> pathlib.Path:
    candidates = [
        ROOT / "target" / profile / name
        for profile in ("debug", "release")
        for name in ("libech_kit_py.so", "ech_kit_py.so", "libech_kit_py.dylib")
    ]
    for path in candidates:
        if path.exists():
            return path
    sys.exit("build the extension first: cargo build -p ech-kit-py")


def main() -> None:
    lib = locate_library()
    with tempfile.TemporaryDirectory() as tmp:
        shutil.copy2(lib, pathlib.Path(tmp) / "ech_kit_py.so")
        sys.path.insert(0, tmp)
        import ech_kit_py as ek

        # Partitions and Conley-Zehnder values.
        assert ek.partition("1/3+e", 6, "+") == [3, 3]
        assert ek.partition("1/3+e", 6, "-") == [5, 1]
        assert ek.partition("1/5", 3, "+") == [1, 1, 1]
        assert ek.cz("5/2") == 5
        assert ek.cz_iterate_sum("1/2+e", 4) == 12

        # A synthetic chain round-trips through the catalog/audit API.
        catalog_json, chain_json = ek.synth_chain(seed=11, length=15)
        catalog = ek.Catalog(catalog_json)
        assert len(catalog) == len(json.loads(catalog_json)["orbits"])
        report = json.loads(ek.audit_chain(catalog, chain_json))
        assert report["checks"]["telescoping_holds"] is True
        assert report["checks"]["classes_exhaustive"] is True
        assert len(report["steps"]) == 15

        # Index calculators agree with hand values on a one-orbit catalog.
        first = json.loads(chain_json)["steps"][0]
        alpha, beta = first["alpha"], first["beta"]
        i = ek.ech_index(catalog, alpha, beta, first["ctau"], first["qtau"])
        assert i == first["I"]
        j0 = ek.j0(catalog, alpha, beta, first["ctau"], first["qtau"])
        # Big integers ride through the JSON reports as decimal strings.
        assert j0 == int(report["steps"][0]["j0"])

        # Scores of the first chain step.
        score = ek.score(catalog, json.dumps(first), big_m=4)
        assert score["t"] == int(report["steps"][0]["t"])
        assert score["j0"] == j0

        # Constants: thresholds and the frozen minimal chain length.
        assert catalog.choose_m() >= 3
        assert ek.solve_min_q("1", "1", "1", "1", 1) == 1247030736459523296205424793
        assert catalog.eps_m(3, "2") is not None

        # Rotation-model Fredholm index: single positive puncture just above
        # rotation 3/2 has CZ 3, so ind = -2 + 1 + 3 = 2.
        assert ek.fredholm_index(0, [("+", 1, "3/2+e", 1)]) == 2

        print("smoke test passed:", lib.relative_to(ROOT))


if __name__ == "__main__":
    main()
