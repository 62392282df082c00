"""Smoke test for the compiled extension.

Build with `cargo build -p sigmafix-python --release`, copy
`target/release/libsigmafix_py.so` to `sigmafix.so` somewhere on
PYTHONPATH, then run this script.
"""

import json
import pathlib
import sys

import sigmafix

FIXTURES = pathlib.Path(__file__).resolve().parents[2] / "core" / "fixtures"


def load(name):
    return (FIXTURES / name).read_text()


def main():
    triangle = sigmafix.Group.from_json(load("triangle.json"))
    assert triangle.abelianize() == (1, [])
    assert triangle.sigma1().startswith("Σ^1 = whole sphere")

    free2 = sigmafix.Group.free(2)
    assert free2.kernel_type([1, 0]).answer == "No"
    assert free2.group_type().answer == "Yes"

    v = triangle.fgfpa(load("z.json"), [load("triangle_swap.psi.json")])
    assert v.answer == "No", v
    assert "Thm D" in v.citations
    assert json.loads(v.to_json())["witness"]["restricted"] == [1, 4]

    intro = sigmafix.Automorphism.from_json(load("intro.aut.json"))
    assert intro.fix_type().citations == ["Cor 5.3", "Thm 2.2(5)", "Thm 2.2(2)"]

    exa = sigmafix.Automorphism.from_json(load("exa.aut.json"))
    assert exa.fix_type().answer == exa.fix_type(general=True).answer == "No"
    assert any("P_φ" in line for line in exa.structure())

    assert sigmafix.free_witness(2, [1, -2]) is not None
    assert sigmafix.dihedral_exhaust(6)[1] == 0
    assert all(ok for _, ok, _ in sigmafix.reproduce())

    code, out, _ = sigmafix.run(["abelianize", str(FIXTURES / "triangle.json")])
    assert code == 0 and out.strip() == "Z, a↦1 b↦1 c↦1"

    try:
        sigmafix.Group.from_json("{")
    except ValueError:
        pass
    else:
        raise AssertionError("malformed JSON accepted")

    print("smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
