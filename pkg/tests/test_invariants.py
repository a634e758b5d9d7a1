"""Expression DSL: parsing, round-trips, invariance checking."""

import math

import pytest

from shapeinv.errors import EvalDomainError, ExpressionError, ValidationError
from shapeinv.invariants import (
    InvariantExpr,
    ParamVector,
    check_invariance,
    eval_invariant,
    parse_invariant,
    verify_invariant,
)


def test_param_vector_translate_subtracts():
    p = ParamVector((1.0, 2.0, 6.0))
    q = p.translate(2)
    assert q.m == (-1.0, 0.0, 4.0)
    assert q.mean == pytest.approx(p.mean - 2.0)


def test_param_vector_bounds():
    with pytest.raises(ValidationError):
        ParamVector(())
    with pytest.raises(ValidationError):
        ParamVector(tuple(range(10)))


def test_parse_round_trip_is_fixed_point():
    sources = [
        "1",
        "m1",
        "m1 - m2",
        "sin(2*pi*m1)",
        "sin(2*pi*m1)^2 + cos(2*pi*m1) + 1",
        "exp(-(m1-m2)^2)",
        "sqrt(abs(m1-m3)) + tanh(m2-m3)",
        "(m1-m2)*(m2-m3)/(1+(m1-m3)^2)",
        "cos(2*pi*M)",
        "-m1 + m2",
        "2/(3+sin(pi*(m1-m2)))",
        "ln(2+cos(2*pi*m1))",
    ]
    for src in sources:
        e1 = parse_invariant(src)
        e2 = parse_invariant(e1.source)
        assert e2.source == e1.source, src


def test_eval_basics():
    p = ParamVector((0.2,))
    e = parse_invariant("sin(2*pi*m1)^2 + cos(2*pi*m1) + 1")
    want = math.sin(0.4 * math.pi) ** 2 + math.cos(0.4 * math.pi) + 1.0
    assert eval_invariant(e, p) == pytest.approx(want, rel=1e-15)
    assert eval_invariant(parse_invariant("e"), p) == pytest.approx(math.e)
    assert eval_invariant(parse_invariant("M"), ParamVector((1.0, 3.0))) == 2.0


def test_operator_precedence_and_unary():
    p = ParamVector((2.0,))
    assert eval_invariant(parse_invariant("1+2*3"), p) == 7.0
    assert eval_invariant(parse_invariant("2^3^2"), p) == 512.0  # right assoc
    assert eval_invariant(parse_invariant("-2^2"), p) == -4.0
    assert eval_invariant(parse_invariant("(1+2)*3"), p) == 9.0
    assert eval_invariant(parse_invariant("2*-3"), p) == -6.0


@pytest.mark.parametrize("bad", [
    "", "sin(", "m10", "foo(m1)", "1 +* 2", "m1 m2", "1..2", ")", "m1 + unknown",
])
def test_parse_errors_carry_offset(bad):
    with pytest.raises(ExpressionError) as exc:
        parse_invariant(bad)
    assert isinstance(exc.value.offset, int)
    assert 0 <= exc.value.offset <= len(bad)


def test_eval_domain_errors():
    p = ParamVector((1.0,))
    with pytest.raises(EvalDomainError):
        eval_invariant(parse_invariant("ln(0-1)"), p)
    with pytest.raises(EvalDomainError):
        eval_invariant(parse_invariant("1/(m1-m1)"), p)
    with pytest.raises(EvalDomainError):
        eval_invariant(parse_invariant("sqrt(0-2)"), p)
    with pytest.raises(EvalDomainError):
        eval_invariant(parse_invariant("m2"), p)  # index above n


def test_check_invariance_accepts_period_one():
    res = check_invariance(parse_invariant("sin(2*pi*m1)"), 1)
    assert res.verified and res.violation is None
    out = res.to_json()
    assert out["verified"] is True and out["trials"] == 64


def test_check_invariance_accepts_differences():
    for src in ("m1-m2", "exp(-(m1-m2)^2)", "cos(2*pi*M) + (m1-m3)^2"):
        assert check_invariance(parse_invariant(src), 3).verified, src


def test_check_invariance_rejects_m1_with_violation():
    res = check_invariance(parse_invariant("m1"), 1)
    assert not res.verified
    v = res.violation
    assert v is not None and v.shift in (1, 2, 3)
    # m1 -> m1 - shift moves the value by exactly shift
    assert v.delta == pytest.approx(float(v.shift), rel=1e-12)
    out = res.to_json()
    assert out["violation"]["delta"] == v.delta


def test_check_invariance_rejects_mean():
    # M drops by 1 per translation step, so bare M must fail
    assert not check_invariance(parse_invariant("M"), 3).verified


def test_verify_invariant_marks_and_raises():
    good = verify_invariant(parse_invariant("cos(2*pi*m1)"), 1)
    assert isinstance(good, InvariantExpr) and good.verified
    with pytest.raises(ValidationError):
        verify_invariant(parse_invariant("m1+m2"), 2)


def test_verify_deterministic_across_calls():
    a = check_invariance(parse_invariant("m1"), 1, seed=7)
    b = check_invariance(parse_invariant("m1"), 1, seed=7)
    assert a.violation.m == b.violation.m
