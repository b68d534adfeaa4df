import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from lamprobe.graph import (
    Atom,
    EnumerationTooLarge,
    InjectivityViolation,
    PartialWeb,
    Pair,
    WebError,
    compare,
    engeler,
    enumerate_web,
    free_completion,
    interp_elements,
    load_web,
    member,
    parse_element,
    parse_env,
    parse_web,
)
from lamprobe.models import EQUAL, INCOMPARABLE
from lamprobe.reduce import Verdict
from lamprobe.syntax import F, I, K, OMEGA, parse
from oracles import A, L, V

a = Atom("a")
EMPTY = frozenset()


def to_oracle(e):
    if e.is_atom:
        return ("atom", e.name)
    return ("pair", frozenset(to_oracle(x) for x in e.argument), to_oracle(e.result))


# --- carrier -----------------------------------------------------------------


def test_rank_zero_is_the_atom_set():
    assert enumerate_web(engeler(3), 0) == [Atom("a"), Atom("b"), Atom("c")]


def test_one_atom_carrier_counts():
    w = engeler(1)
    assert enumerate_web(w, 1) == sorted([a, Pair([], a), Pair([a], a)])
    assert len(enumerate_web(w, 2)) == 25


def test_two_atom_carrier_rank_one():
    assert len(enumerate_web(engeler(2), 1)) == 2 + 4 * 2


@pytest.mark.parametrize("atoms,k", [(["a"], 1), (["a"], 2), (["a", "b"], 1), (["a", "b"], 2)])
def test_carrier_matches_oracle(atoms, k):
    w = free_completion(PartialWeb(frozenset(atoms)))
    assert {to_oracle(e) for e in enumerate_web(w, k)} == oracles.g_carrier(atoms, k)


def test_carrier_is_monotone_and_ranked():
    w = engeler(2)
    previous: set = set()
    for k in range(3):
        layer = set(enumerate_web(w, k))
        assert previous <= layer
        assert all(e.rank <= k for e in layer)
        assert all(e.rank == k for e in layer - previous)
        previous = layer


def test_element_order_is_canonical():
    b = Atom("b")
    assert Pair([b, a, a], a) == Pair([a, b], a)
    assert str(Pair([b, a], a)) == "({a,b}→a)"
    assert a < b < Pair([], a) < Pair([a], a)


def test_injective_coding():
    w = free_completion(PartialWeb(frozenset({"a"}), {(frozenset({"a"}), "a"): "a1"}))
    carrier = enumerate_web(w, 1)
    codes = {}
    for r in range(len(carrier) + 1):
        for arg in itertools.combinations(carrier, r):
            for res in carrier:
                e = w.code(arg, res)
                assert e not in codes, (arg, res, codes.get(e))
                codes[e] = (frozenset(arg), res)
                assert w.decode(e) == (frozenset(arg), res)


def test_precoding_overrides_free_pair():
    w = free_completion(PartialWeb(frozenset({"a"}), {(frozenset({"a"}), "a"): "a1"}))
    carrier = enumerate_web(w, 1)
    a1 = Atom("a1")
    assert a1 in carrier and Pair([a], a) not in carrier
    assert w.code([a], a) == a1
    assert len(carrier) == 2 + 4 * 2 - 1
    # the named code is a rank-0 element of [[I]]
    assert interp_elements(I, None, w, 0) == [a1]


def test_duplicate_names_are_injectivity_violations():
    with pytest.raises(InjectivityViolation):
        parse_web("atom a\ncode n = {a} -> a\ncode n = {} -> a\n")
    with pytest.raises(InjectivityViolation):
        parse_web("atom a\ncode n = {a} -> a\ncode m = {a} -> a\n")
    with pytest.raises(InjectivityViolation):
        parse_web("atom a\natom a\n")


def test_web_file_format(tmp_path):
    path = tmp_path / "w.web"
    path.write_text("# seed\natom a\natom b\ncode c = { a, b } -> a\ncode d = {c} → c\n")
    pw = load_web(path)
    assert pw.atoms == {"a", "b"}
    assert pw.precoded == {(frozenset({"a", "b"}), "a"): "c", (frozenset({"c"}), "c"): "d"}
    assert load_web(_write(tmp_path, "e.web", "atom a\n")) == PartialWeb(frozenset({"a"}))
    empty = load_web(_write(tmp_path, "empty.web", ""))
    assert empty == PartialWeb()


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_web_errors_have_line_numbers():
    with pytest.raises(WebError, match="line 2"):
        parse_web("atom a\ncode n = {b} -> a\n")
    with pytest.raises(WebError, match="line 1"):
        parse_web("atoms a\n")


def test_element_and_env_parsing():
    assert parse_element("({a,({}->a)}→a)") == Pair([a, Pair([], a)], a)
    env = parse_env("x = { a, ({a}→a) }\ny = {}\n")
    assert env == {"x": frozenset({a, Pair([a], a)}), "y": EMPTY}
    with pytest.raises(WebError):
        parse_element("({a}")


# --- interpretation ----------------------------------------------------------


def test_identity_at_rank_two():
    elems = interp_elements(I, None, engeler(1), 2)
    assert Pair([a], a) in elems
    assert len(elems) == 12


def test_omega_is_empty():
    assert interp_elements(OMEGA, None, engeler(1), 3, 100_000) == []


def test_k_and_f_witnesses():
    w = engeler(1)
    k_wit, f_wit = Pair([a], Pair([], a)), Pair([], Pair([a], a))
    assert member(k_wit, K, None, w) is Verdict.YES
    assert member(k_wit, parse(r"\x y.y"), None, w) is Verdict.NO
    result = compare(K, F, w, 2)
    assert result.kind == INCOMPARABLE
    assert k_wit in result.left_only and f_wit in result.right_only


def test_member_examples():
    w = engeler(1)
    assert member(Pair([a], a), I, None, w) is Verdict.YES
    assert member(Pair([], a), I, None, w) is Verdict.NO
    assert member(a, parse(r"\x y.x y"), None, w) is Verdict.NO
    assert member(Pair([a], a), OMEGA, None, w, fuel=50) is Verdict.UNKNOWN


def test_eta_fails_both_ways():
    w = engeler(1)
    eta = parse(r"\x y.x y")
    result = compare(I, eta, w, 2)
    assert Pair([a], a) in result.left_only
    # ({(∅→a)}→({a}→a)) is in [[\x y.x y]] but not in [[I]]
    assert Pair([Pair([], a)], Pair([a], a)) in result.right_only
    assert result.kind == INCOMPARABLE


def test_compare_with_itself():
    w = engeler(2)
    for t in (I, K, F, parse(r"\x.x x")):
        assert compare(t, t, w, 2).kind == EQUAL


NORMAL_CORPUS = [
    ("I", L("x", V("x"))),
    ("K", L("x", "y", V("x"))),
    (r"\x y.y", L("x", "y", V("y"))),
    (r"\x y.x y", L("x", "y", A(V("x"), V("y")))),
    (r"\x.x x", L("x", A(V("x"), V("x")))),
    (r"\f.f (f f)", L("f", A(V("f"), A(V("f"), V("f"))))),
    (r"\x.x (\y.y)", L("x", A(V("x"), L("y", V("y"))))),
    (r"\x y z.x z (y z)", oracles.OS),
]


@pytest.mark.parametrize("text,named", NORMAL_CORPUS)
@pytest.mark.parametrize("atoms,k", [(["a"], 1), (["a"], 2), (["a", "b"], 1)])
def test_interpretation_matches_oracle(text, named, atoms, k):
    w = free_completion(PartialWeb(frozenset(atoms)))
    ours = {to_oracle(e) for e in interp_elements(parse(text), None, w, k)}
    assert ours == oracles.g_interp(named, atoms, k)


def test_open_term_matches_oracle():
    w = engeler(1)
    env = {"u": frozenset({Pair([a], a), Pair([], Pair([a], a))}), "v": frozenset({a})}
    oenv = {k: frozenset(to_oracle(e) for e in v) for k, v in env.items()}
    for text, named in [
        ("u v", A(V("u"), V("v"))),
        ("u v v", A(V("u"), V("v"), V("v"))),
        (r"\z.u z", L("z", A(V("u"), V("z")))),
        (r"u (\z.z)", A(V("u"), L("z", V("z")))),
    ]:
        ours = {to_oracle(e) for e in interp_elements(parse(text), env, w, 2)}
        assert ours == oracles.g_interp(named, ["a"], 2, oenv), text


def test_env_must_live_in_the_web():
    with pytest.raises(WebError):
        interp_elements(parse("x"), {"x": frozenset({Atom("zz")})}, engeler(1), 1)


@pytest.mark.parametrize("text", [t for t, _ in NORMAL_CORPUS])
def test_rank_monotonicity(text):
    w = engeler(1)
    t = parse(text)
    top = interp_elements(t, None, w, 2)
    for k in range(3):
        assert interp_elements(t, None, w, k) == [e for e in top if e.rank <= k]


def test_empty_web_interprets_everything_as_empty():
    w = free_completion(PartialWeb())
    for t in (I, K, F, OMEGA, parse(r"\x.x x")):
        for k in range(4):
            assert interp_elements(t, None, w, k, 100) == []


def test_fuel_monotone_under_approximation():
    w = engeler(1)
    t = parse(r"(\x.x) ((\y z.y) (\u.u))")
    previous: list = []
    for fuel in range(4):
        now = interp_elements(t, None, w, 2, fuel)
        assert set(previous) <= set(now)
        previous = now
    assert previous == interp_elements(parse(r"\z u.u"), None, w, 2)


def test_enumeration_guard():
    with pytest.raises(EnumerationTooLarge):
        interp_elements(I, None, engeler(1), 4)


_rank1 = enumerate_web(engeler(1), 1)


@settings(max_examples=60, deadline=None)
@given(
    st.sets(st.sampled_from(_rank1)),
    st.sets(st.sampled_from(_rank1)),
    st.sampled_from([t for t, _ in NORMAL_CORPUS] + ["u u", r"u (\z.u z)", r"\z.z u", "u (u u)"]),
)
def test_environment_monotonicity(small, extra, text):
    w = engeler(1)
    env = {"u": frozenset(small)}
    bigger = {"u": frozenset(small | extra)}
    t = parse(text)
    assert set(interp_elements(t, env, w, 2)) <= set(interp_elements(t, bigger, w, 2))
