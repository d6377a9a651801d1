"""Acceptance criteria.  Each test prints one PASS/FAIL line in the pytest
terminal summary; ``python tests/test_acceptance.py`` prints the same lines
without pytest."""

import json
import random
import subprocess
import sys
import time
import warnings

from vankampen.complexes import build_K, build_Z, full_two_skeleton, named_subcomplex
from vankampen.intsolve import solve_integer_system
from vankampen.obstruction import (coboundary_matrix, cocycle_vector, obstruction_verdict,
                                   sample_generic_map, total_mod2, vk_cocycle)
from vankampen.plgeom import build_link_curves, join_sphere, pl_linking_number, realize_H, verify_embedding
from vankampen.words import (MagnusSeries, Word, commutator, exact_lcs_depth, exponent_sums,
                             magnus_expansion, milnor_invariants, parse_word)


def _certify(*args):
    r = subprocess.run([sys.executable, "-m", "vankampen", "certify", *args],
                       capture_output=True, text=True)
    return r.returncode, json.loads(r.stdout)


def _K(text):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return build_K(parse_word(text))


def _random_word(rng, max_len=12):
    return Word(tuple((rng.choice("ab"), rng.choice((1, -1))) for _ in range(rng.randint(0, max_len))))


def test_ac1_certify_a_aab_at_f3():
    start = time.perf_counter()
    code, cert = _certify("[a,[a,b]]", "--level", "f3", "--links")
    elapsed = time.perf_counter() - start
    assert code == 0
    assert cert["in_commutator"] and (cert["lk_g3_g1"], cert["lk_g3_g2"]) == (0, 0)
    assert cert["lcs_depth"] >= 3
    assert cert["mu123"] == 0
    assert cert["lk_g1_g2"] == 0
    assert cert["unlink_criterion"] and cert["hypothesis_met"]
    assert cert["geometric_linking"] == {"lk_g1_g2": 0, "lk_g3_g1": 0, "lk_g3_g2": 0, "concordant": True}
    assert elapsed < 60


def test_ac2_commutator_negative_control():
    code_f3, cert = _certify("[a,b]", "--level", "f3")
    assert cert["mu123"] == 1 and not cert["unlink_criterion"]
    assert code_f3 == 3
    code_comm, cert = _certify("[a,b]", "--level", "commutator")
    assert code_comm == 0 and cert["hypothesis_met"]


def test_ac3_vk_vanishes_for_disk_complexes():
    for text in ["[a,b]", "[b,a]", "[a,b]^2"]:
        start = time.perf_counter()
        v = obstruction_verdict(_K(text), 0)
        assert v.vanishes_over_Z and v.vanishes_mod_2, text
        assert time.perf_counter() - start < 300


def test_ac4_full_skeleton_nonvanishing():
    K = full_two_skeleton(7)
    assert obstruction_verdict(K, 0).vanishes_mod_2 is False
    assert [total_mod2(K, s) for s in range(20)] == [1] * 20


def test_ac5_class_well_defined():
    for K in (build_Z(), _K("[a,b]")):
        cob = coboundary_matrix(K)
        for s1, s2 in [(0, 1), (2, 3), (4, 5), (6, 7), (8, 9)]:
            c1 = cocycle_vector(cob, vk_cocycle(sample_generic_map(K, s1, cob.rows), K, cob.rows))
            c2 = cocycle_vector(cob, vk_cocycle(sample_generic_map(K, s2, cob.rows), K, cob.rows))
            diff = [a - b for a, b in zip(c1, c2)]
            res = solve_integer_system(cob.matrix, diff, "Z")
            assert res.solvable
            assert cob.matrix.matvec(res.witness) == diff


def test_ac6_linking_concordance():
    start = time.perf_counter()
    rng = random.Random(6)
    for _ in range(50):
        w = _random_word(rng)
        g1, g2, g3 = build_link_curves(w)
        ea, eb = exponent_sums(w)
        assert pl_linking_number(g3, g1) == ea, str(w)
        assert pl_linking_number(g3, g2) == eb, str(w)
        assert pl_linking_number(g1, g2) == 0
    assert time.perf_counter() - start < 120


def test_ac7_H_realization_embedded():
    start = time.perf_counter()
    G = realize_H(parse_word("[a,[a,b]]"))
    report = verify_embedding(G, "embedding")
    assert report.ok and report.violations == []
    assert G.complex == named_subcomplex(build_Z(), "H")
    assert time.perf_counter() - start < 120


def test_ac8_join_sphere():
    J = join_sphere()
    assert J.face_vector() == (6, 15, 18, 9)
    assert J.euler_characteristic() == 0
    assert verify_embedding(J.geometric(), "embedding").ok
    hx = named_subcomplex(build_Z(), "hatX")
    pos = {hx.resolve(f"x{i}"): i - 1 for i in range(1, 7)}
    assert sorted(tuple(sorted(pos[v] for v in t)) for t in hx.triangles) == J.triangles


def test_ac9_word_engine_algebra():
    rng = random.Random(9)
    for _ in range(200):
        w, v = _random_word(rng), _random_word(rng)
        d = rng.randint(1, 4)
        assert magnus_expansion(w * v, d) == magnus_expansion(w, d) * magnus_expansion(v, d)
        assert magnus_expansion(w.inverse(), d) * magnus_expansion(w, d) == MagnusSeries.one(d)
        (ax, bx), (ay, by) = exponent_sums(w), exponent_sums(v)
        assert milnor_invariants(commutator(w, v)).mu12 == ax * by - ay * bx
    gens = [Word.generator("a"), Word.generator("b"), Word.generator("a").inverse(), Word.generator("b").inverse()]

    def nested(depth):
        if depth == 1 or rng.random() < 0.3:
            return rng.choice(gens)
        return commutator(nested(depth - 1), nested(depth - 1))

    for _ in range(200):
        x, y = nested(rng.randint(1, 4)), nested(rng.randint(1, 4))
        c = commutator(x, y)
        if c.is_identity() or x.is_identity() or y.is_identity():
            continue
        assert exact_lcs_depth(c) >= exact_lcs_depth(x) + exact_lcs_depth(y)


CRITERIA = [
    ("AC1 certify [a,[a,b]] --level f3", test_ac1_certify_a_aab_at_f3),
    ("AC2 [a,b] fails f3, passes commutator", test_ac2_commutator_negative_control),
    ("AC3 vK vanishes for [a,b], [b,a], [a,b]^2", test_ac3_vk_vanishes_for_disk_complexes),
    ("AC4 full 7-vertex skeleton non-vanishing", test_ac4_full_skeleton_nonvanishing),
    ("AC5 cocycle class independent of map", test_ac5_class_well_defined),
    ("AC6 PL linking = exponent sums", test_ac6_linking_concordance),
    ("AC7 H embeds in Q^4", test_ac7_H_realization_embedded),
    ("AC8 join sphere", test_ac8_join_sphere),
    ("AC9 word-engine algebra", test_ac9_word_engine_algebra),
]


if __name__ == "__main__":
    failed = 0
    for label, fn in CRITERIA:
        try:
            fn()
            print(f"PASS  {label}")
        except Exception as exc:  # report and continue
            failed += 1
            print(f"FAIL  {label}: {exc!r}")
    sys.exit(1 if failed else 0)
