"""Smoke test for the densevec extension module.

Build and install first:
    pip install --no-build-isolation -e crates/python
then run `python python/smoke_test.py` (or `pytest python/`).
"""

import densevec


def test_decide():
    s = "(> (lam (- t 100) one) (const 0))"
    assert densevec.decide(s)
    assert not densevec.decide(s, completion="germ-zero")
    f = densevec.Formula(s)
    assert f.decide() and f.free_vars() == []


def test_qe():
    out = densevec.elim_quantifiers("(exists (x) (and (= (lam t x) y) (< x z)))")
    assert out == "(< (lam 1/t y) z)"
    assert str(densevec.Formula("(exists (x) (and (< y x) (< x z)))").qe()) == "(< y z)"
    assert densevec.elim_exists_inf("x", "(and (< y x) (< x z))") == "(< y z)"


def test_topology():
    assert densevec.interior("(> (lam t x) 0)") == "false"
    assert densevec.closure("(> (lam t x) 0)") == "true"
    assert densevec.is_open("(> x 0)")
    assert not densevec.is_open("(>= x 0)", vars=["x"])


def test_rational_functions():
    a = densevec.RatFunc("t")
    b = densevec.RatFunc("1/t")
    assert str(a * b) == "1"
    assert (a - densevec.RatFunc("100")).sign() == 1
    assert (a - densevec.RatFunc("100")).sign("germ-zero") == -1


def test_witness_and_session():
    s = densevec.Session("germ-pos-inf", seed=3)
    g, values = s.witness(["1", "t"], [("0", "1"), ("5", "6")])
    assert g == "g0"
    assert values == [("1", "1/2"), ("t", "11/2")]
    assert s.eval(densevec.Formula("(and (< 0 x) (< x one))"), [("x", "g0")])
    again = densevec.Session.restore(s.dump())
    assert again.dump() == s.dump()


def test_span_and_exchange():
    assert densevec.span_membership("(+ g0 (lam t g1))", ["g0", "g1"]) == ["1", "t"]
    assert densevec.span_membership("g2", ["g0", "g1"]) is None
    assert densevec.exchange_check(["g1"], "(+ g0 g1)", "g0") == "HOLDS"


def test_skolem():
    sig = densevec.SkolemSignature("(signature (level 1) (base L_t) (skolem-fn F (x) (theta y (< x y))))")
    assert sig.symbols() == ["F"]
    assert sig.split("(chain (x) (F x) (+ y1 x))") == ("(= y2 (+ x y1))", "(config (= (F x) y1))")
    assert sig.eligibility_code("(config (= (F x) y))") == "(or (not (exists (w) (< x w))) (< x y))"
    ax = sig.axiom(["x1", "x2"], 1, "(< x1 x2)", "(config (= (F x1) x2))")
    assert ax.startswith("(forall (x1) (implies (exists-inf (x2)")


def test_errors():
    for bad in [lambda: densevec.decide("(< x"), lambda: densevec.decide("(< x 0)")]:
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")
    try:
        densevec.Session().witness(["1", "2"], [("0", "1"), ("2", "3")])
    except RuntimeError:
        pass
    else:
        raise AssertionError("expected RuntimeError")


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print(f"{t.__name__}: ok")
    print(f"{len(tests)} smoke tests passed")
