#!/usr/bin/env python3
"""Regenerates the JSON files under fixtures/ (deterministic, numpy seeded)."""

import json
import pathlib

import numpy as np

OUT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def mat(m):
    m = np.asarray(m, dtype=complex)
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def write(name, doc):
    (OUT / name).write_text(json.dumps(doc, indent=2) + "\n")


def inv_sqrt(h):
    w, v = np.linalg.eigh(h)
    return (v / np.sqrt(w)) @ v.conj().T


def random_unital_kraus(d, count, rng):
    ks = [(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2) for _ in range(count)]
    for _ in range(10000):
        s = inv_sqrt(sum(k.conj().T @ k for k in ks))
        ks = [k @ s for k in ks]
        t = inv_sqrt(sum(k @ k.conj().T for k in ks))
        ks = [t @ k for k in ks]
        err = np.linalg.norm(sum(k.conj().T @ k for k in ks) - np.eye(d))
        if err < 1e-15 * d:
            break
    return ks


def clifford_group():
    s = 1 / np.sqrt(2)
    h = np.array([[s, s], [s, -s]], dtype=complex)
    p = np.diag([1, 1j])

    def normalize(u):
        flat = u.flatten()
        k = np.argmax(np.abs(flat) > 1e-9)
        return u * np.conj(flat[k]) / abs(flat[k])

    group = [np.eye(2, dtype=complex)]
    i = 0
    while i < len(group):
        for g in (h, p):
            c = normalize(g @ group[i])
            if all(np.linalg.norm(c - e) > 1e-9 for e in group):
                group.append(c)
        i += 1
    return group


def random_correlation(d, rank, rng, real=False):
    v = rng.normal(size=(d, rank))
    if not real:
        v = v + 1j * rng.normal(size=(d, rank))
    v = v / np.linalg.norm(v, axis=1, keepdims=True)
    c = v @ v.conj().T
    np.fill_diagonal(c, 1.0)
    return c


def main():
    rng = np.random.default_rng(20260416)
    OUT.mkdir(exist_ok=True)

    write("werner_holevo3.json", {"d": 3, "kind": "named", "name": "werner_holevo3"})
    write("depolarizing4.json", {"d": 4, "kind": "named", "name": "depolarizing", "params": {"d": 4}})
    write("depolarizing3.json", {"d": 3, "kind": "named", "name": "depolarizing", "params": {"d": 3}})
    write("identity3.json", {"d": 3, "kind": "named", "name": "identity", "params": {"d": 3}})
    write("map_to_diagonal3.json", {"d": 3, "kind": "named", "name": "map_to_diagonal", "params": {"d": 3}})

    ks = random_unital_kraus(3, 3, rng)
    write("random_unital3.json", {"d": 3, "kind": "kraus", "kraus": [mat(k) for k in ks]})

    # A non-unitary unital channel given by its Choi matrix: (id + delta_2) / 2.
    d = 2
    choi = np.zeros((4, 4), dtype=complex)
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d)); e[i, j] = 1
            out = 0.5 * e + 0.5 * (np.trace(e) / d) * np.eye(d)
            choi += np.kron(e, out)
    write("half_depolarizing2_choi.json", {"d": 2, "kind": "choi", "choi": mat(choi)})

    write("algebra_1x2_1x3.json", {"d": 5, "blocks": [[1, 2], [1, 3]]})

    write("clifford1q.json", {"d": 2, "unitaries": [mat(u) for u in clifford_group()]})

    write("corr_quadrature4.json", {"d": 4, "kind": "correlation", "matrix": mat(random_correlation(4, 4, rng))})
    write("corr_rank2_d5.json", {"d": 5, "kind": "correlation", "matrix": mat(random_correlation(5, 2, rng))})
    real = random_correlation(4, 2, rng, real=True).real
    write("corr_z2_member4.json", {"d": 4, "kind": "correlation", "matrix": mat((real + np.eye(4)) / 2)})
    bad = np.full((3, 3), -0.45)
    np.fill_diagonal(bad, 1.0)
    write("corr_z2_nonmember3.json", {"d": 3, "kind": "correlation", "matrix": mat(bad)})


if __name__ == "__main__":
    main()
