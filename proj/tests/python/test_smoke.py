"""Smoke test for the python module; run with PYTHONPATH at the staged package."""

import json

import heckeraise as hr


def main():
    assert hr.genus(77) == 7
    assert hr.genus(11) == 1
    assert hr.sturm_bound(77) == 16

    info = hr.space_summary(11)
    assert info["dim"] == 3
    assert info["cuspidal_dim"] == 2
    assert info["genus"] == 1
    assert len(info["fingerprint"]) == 64

    systems = hr.eigensystems(11, bound=7)
    assert len(systems) == 1
    assert systems[0]["a"][2] == -2
    assert systems[0]["a"][7] == -2

    found = hr.search(level=11, ell=3, pmax=50)
    assert (7, -1) in found
    assert (29, 1) in found

    cert = hr.certify(level=11, p=7, ell=3, sign=-1)
    doc = json.loads(cert)
    assert doc["level"] == "11"
    assert doc["up_eigenvalue"] == "2"
    assert doc["screen"] == "passed"

    report = hr.verify(cert)
    assert report["ok"]
    assert len(report["checks"]) == 10
    assert all(ok for _, ok, _ in report["checks"])

    # tampering must be caught
    doc["up_eigenvalue"] = "1"
    bad = hr.verify(json.dumps(doc))
    assert not bad["ok"]

    print("python smoke ok")


if __name__ == "__main__":
    main()
