"""Smoke test for the `triadic` extension module.

Uses an installed module (`pip install --no-build-isolation -e crates/python`)
if there is one, otherwise builds the cdylib with cargo and loads it from
target/.
"""

import importlib.machinery
import importlib.util
import json
import pathlib
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        import triadic
        return triadic
    except ImportError:
        pass
    subprocess.run(
        ["cargo", "build", "--release", "-p", "triadic-python", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    lib = ROOT / "target" / "release" / ("triadic.dll" if sys.platform == "win32" else "libtriadic.so")
    if sys.platform == "darwin":
        lib = lib.with_suffix(".dylib")
    loader = importlib.machinery.ExtensionFileLoader("triadic", str(lib))
    spec = importlib.util.spec_from_loader("triadic", loader)
    module = importlib.util.module_from_spec(spec)
    loader.exec_module(module)
    return module


def validate(report):
    try:
        import jsonschema
    except ImportError:
        print("jsonschema missing, schema check skipped")
        return
    schema = json.loads((ROOT / "crates/core/schema/report.schema.json").read_text())
    jsonschema.Draft202012Validator(schema).validate(report)


def main():
    triadic = load()
    T = triadic.Triad

    assert triadic.scale_dependent_index((1, 3, 2)) == 19 / 6
    assert triadic.scale_dependent_index(T(1, 6, 4)) == 5
    assert triadic.eval_index("cx5", (1, 8, 4)) == 17 / 4
    assert triadic.eval_index("cx6", (2, 32, 8)) == 9 / 4
    t = T(1, 3, 2)
    assert abs(triadic.koczkodaj_index(t) - (1 - 1 / triadic.natural_index(t))) < 1e-12

    report = triadic.audit("koczkodaj")
    validate(report)
    assert report["results"]["all_pass"], report["results"]

    si = triadic.audit("scale_dependent", "SI")
    validate(si)
    witness = si["witnesses"][0]
    print("SI witness:", [(p["triad"], p["value"]) for p in witness["points"]])

    table = triadic.independence_table()
    validate(table)
    for row in table["results"]["rows"]:
        cells = " ".join(f"{c['axiom']}={c['observed']}{'' if c['matches'] else '!'}" for c in row["cells"])
        print(f"{row['index']}: {cells}")

    conc = triadic.ranking_concordance("natural", "discretised_natural", samples=2000)
    validate(conc)
    assert conc["results"]["discordant"] == 0 and conc["results"]["ties_b_only"] > 0

    try:
        triadic.audit("natural", "NOT_AN_AXIOM")
    except ValueError as e:
        print("rejected:", e)
    else:
        raise AssertionError("unknown axiom accepted")
    print("smoke test ok")


if __name__ == "__main__":
    main()
