import json

import pytest

from cvlab.congruences import (
    NotWolstenholmePrime, ResidueClass, binom_mod_pk, check_congruence18, check_congruence20,
    check_glaisher, check_wolstenholme_theorem, congruence18_collapsed, congruence18_direct,
    exact_binom_mod, is_prime, is_wolstenholme, iter_scan, primes_up_to, wolstenholme_scan,
)
from cvlab.exact import DomainError, binomial


def test_primes():
    assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_up_to(1) == []
    assert [n for n in range(50) if is_prime(n)] == primes_up_to(50)


def test_residue_class():
    r = ResidueClass(130, 5, 3)
    assert r.value == 5 and str(r) == "5 mod 5^3"
    assert r.reduce(1) == ResidueClass(0, 5, 1)
    assert r.to_json() == {"value": "5", "modulus": "5^3"}
    with pytest.raises(DomainError):
        r.reduce(4)


@pytest.mark.parametrize("a, b, p, k, value", [
    (10, 5, 3, 2, 252 % 9),
    (14, 7, 7, 3, 3432 % 343),
    (25, 5, 5, 2, 53130 % 25),
    (6, 0, 2, 1, 1),
])
def test_binom_mod_pk_examples(a, b, p, k, value):
    assert binom_mod_pk(a, b, p, k).value == value


def test_binom_mod_pk_matches_exact():
    for p in primes_up_to(100):
        for a in range(0, 3 * p + 3, max(1, p // 7)):
            for b in range(0, a + 1, max(1, a // 9)):
                for k in range(1, 5):
                    assert binom_mod_pk(a, b, p, k).value == exact_binom_mod(a, b, p ** k), (a, b, p, k)


def test_binom_mod_pk_domain():
    with pytest.raises(DomainError):
        binom_mod_pk(3, 4, 5, 1)
    with pytest.raises(DomainError):
        binom_mod_pk(3, 1, 4, 1)
    with pytest.raises(DomainError):
        binom_mod_pk(3, 1, 5, 6)


def test_wolstenholme_theorem_range():
    for p in primes_up_to(1000):
        if p >= 5:
            assert check_wolstenholme_theorem(p).holds, p
    with pytest.raises(DomainError):
        check_wolstenholme_theorem(2)


def test_wolstenholme_fails_for_three():
    # C(5, 2) = 10 is 1 mod 9 but not mod 27
    r = check_wolstenholme_theorem(3)
    assert r.verdict == "fails" and r.lhs.value == 10
    assert binomial(5, 2) % 9 == 1


def test_glaisher():
    assert check_glaisher(7, 3).lhs.value == 3
    for p in primes_up_to(60):
        if p >= 5:
            for s in range(1, 6):
                assert check_glaisher(p, s).holds
                assert check_glaisher(p, s).lhs.value == exact_binom_mod(s * p, p, p ** 3)


def test_congruence18_paths_agree():
    for p in (5, 7, 11):
        for s in (1, 2, 3):
            r = check_congruence18(p, s, direct=True)
            assert r.holds and r.checks == {"mod_p_vanishes": True, "paths_agree": True}
            exact = congruence18_direct(p, s)
            assert exact == (s + 1) * p * binomial(s * p, p) // 2
            assert congruence18_collapsed(p, s, 4).value == exact % p ** 4


def test_congruence18_domain():
    with pytest.raises(DomainError):
        check_congruence18(3, 2)
    with pytest.raises(DomainError):
        check_congruence18(9, 2)


def test_congruence20():
    with pytest.raises(NotWolstenholmePrime):
        check_congruence20(5, 2)
    r = check_congruence20(16843, 3)
    assert r.holds and r.checks["glaisher_mod_p4"]


def test_is_wolstenholme():
    assert is_wolstenholme(16843)
    assert not any(is_wolstenholme(p) for p in primes_up_to(1000))


def test_scan_small():
    recs = wolstenholme_scan(100)
    assert [r.p for r in recs] == [p for p in primes_up_to(100) if p >= 5]
    assert not any(r.is_wolstenholme for r in recs)
    assert wolstenholme_scan(4) == []
    assert recs[0].to_json() == {"p": 5, "residue": str(binomial(9, 4) % 625),
                                 "modulus": "p^4", "wolstenholme": False}


def test_scan_checkpoint_resume(tmp_path):
    ck = tmp_path / "scan.jsonl"
    first = wolstenholme_scan(50, checkpoint=str(ck))
    lines = ck.read_text().splitlines()
    assert len(lines) == len(first)
    # simulate an interrupted run with a torn last line
    ck.write_text("\n".join(lines[:5]) + "\n" + lines[5][:7])
    resumed = wolstenholme_scan(100, checkpoint=str(ck))
    assert resumed == wolstenholme_scan(100)
    assert [json.loads(l)["p"] for l in ck.read_text().splitlines()] == [r.p for r in resumed]


def test_scan_workers_match_serial():
    assert list(iter_scan(300, workers=2)) == wolstenholme_scan(300)


@pytest.mark.slow
def test_scan_to_20000():
    hits = [r.p for r in iter_scan(20000) if r.is_wolstenholme]
    assert hits == [16843]
