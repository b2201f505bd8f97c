import random
from fractions import Fraction as F

import pytest

from hkcert.chow import GradedClass
from hkcert.planner import (
    ChernFunctional,
    HKCertificate,
    SignPattern,
    Step2Result,
    admissible_patterns,
    combine_functionals,
    correction_class,
    default_test_class,
    hk_eval,
    hk_eval_via_psi,
    plan,
    recover_coefficients,
    step2_induct,
    step3_assemble,
)
from hkcert.exactalg import sign


def test_sign_pattern_validation():
    assert SignPattern.parse("0,0,0,-1,1").d == 4
    for bad in ["0,0,0,1,0", "0,1,0,1", "0,0,0,2,1", "1"]:
        with pytest.raises(ValueError, match="invalid pattern"):
            SignPattern.parse(bad)


def test_admissible_pattern_counts():
    assert [len(admissible_patterns(d)) for d in (3, 4, 5, 6, 7)] == [3, 3, 9, 9, 27]


def test_combine_functionals_examples():
    one = ChernFunctional((0, 1, 1))
    assert combine_functionals([one], [1])[0] == [1]
    # values are (lambda_0, lambda_1, lambda_2) with d = 2, i1 = 1, i2 = 0
    f1, f2 = ChernFunctional((0, 1, 1)), ChernFunctional((1, 0, 1))
    mults, comb = combine_functionals([f1, f2], [1, 0])
    assert mults == [1, 1] and comb.values == (1, 1, 2)
    g1, g2 = ChernFunctional((0, 1, 1)), ChernFunctional((1, -1, 1))
    mults, comb = combine_functionals([g1, g2], [1, 0])
    assert mults == [2, 1]
    assert all(comb[i] != 0 for i in (0, 1)) and comb[2] > 0


def test_combine_functionals_unreachable():
    with pytest.raises(ValueError, match="target not reachable"):
        combine_functionals([ChernFunctional((0, 1, 1)), ChernFunctional((0, 0, 1))], [1, 0])


def test_correction_class_examples():
    tc = default_test_class(4)
    L, n = correction_class(GradedClass.unit(4, 2, F(1, 3)), tc)
    assert n == 3 and L[2] == 1 and L.top > 0
    L, n = correction_class(GradedClass.unit(4, 2, -2), tc)
    assert n == 1 and L[2] == -2 and L.top > 0
    with pytest.raises(ValueError, match="inhomogeneous"):
        correction_class(GradedClass.zero(4), tc)
    with pytest.raises(ValueError, match="inhomogeneous"):
        correction_class(GradedClass(4, (0, 0, 0, 1, 1)), tc)


def test_correction_class_random_lower_terms():
    L, _ = correction_class(GradedClass.unit(7, 6, 1), default_test_class(7), random.Random(3))
    assert all(L[i] == 0 for i in range(0, 4))
    assert all(-3 <= L[i] <= 3 for i in (4, 5))


def test_step2_no_correction():
    pat = SignPattern.parse("0,0,0,0,1")
    res = step2_induct(pat, ChernFunctional.ones(4), GradedClass.top_only(4, 3))
    assert res.steps == () and res.betas[-1] == 3


def test_step2_negative_sign_step():
    pat = SignPattern.parse("0,0,0,-1,1")
    seed = GradedClass.from_dict(4, {4: 1, 3: 1})
    res = step2_induct(pat, ChernFunctional.ones(4), seed)
    (step,) = res.steps
    assert (step.dimension, step.e, step.n, step.f) == (3, 1, 1, 2)
    assert step.b == GradedClass.unit(4, 3, -1)
    assert res.final[3] < 0 and res.betas[3] == -res.final[3]


def test_step2_zero_sign_step():
    pat = SignPattern.parse("0,0,0,0,1")
    seed = GradedClass.from_dict(4, {4: 1, 3: F(1, 2)})
    res = step2_induct(pat, ChernFunctional.ones(4), seed)
    (step,) = res.steps
    assert step.b == GradedClass.unit(4, 3, F(-1, 2))
    assert (step.n, step.e, step.f) == (2, 2, 1)
    assert res.final[3] == 0


def test_step2_rejects_bad_input():
    pat = SignPattern.parse("0,0,0,-1,1")
    with pytest.raises(ValueError, match="cannot realize"):
        step2_induct(pat, ChernFunctional((1, 1, 1, 0, 1)), GradedClass.top_only(4, 1))
    with pytest.raises(ValueError):
        step2_induct(pat, ChernFunctional.ones(4), GradedClass.from_dict(4, {4: 1, 1: 1}))


def _trace(beta_d, d=3):
    pat = SignPattern(tuple([0] * d + [1]))
    return Step2Result(pat, ChernFunctional.ones(d), GradedClass.top_only(d, beta_d),
                       GradedClass.top_only(d, beta_d), (), tuple([F(1)] * d + [F(beta_d)]))


def test_step3_examples():
    assert step3_assemble(_trace(2), (1,)).alpha == 3
    assert step3_assemble(_trace(F(1, 2)), ()).alpha == F(1, 2)
    assert step3_assemble(_trace(1), (2, 3)).alpha == 6
    assert step3_assemble(_trace(1)).colengths == (1,)
    with pytest.raises(ValueError):
        step3_assemble(_trace(1), (1,), p=4)


def test_hk_eval_examples():
    cert = HKCertificate(SignPattern.parse("0,0,0,-1,1"), (1, 1, 1, F(1, 2), 1), F(2), (1,), 2)
    assert hk_eval(cert, 1) == 28
    assert hk_eval(cert, 2) == 480
    flat = HKCertificate(SignPattern.parse("0,0,0,0,1"), (1,) * 5, F(1), (1,), 3)
    assert [hk_eval(flat, n) for n in (1, 2)] == [3**4, 3**8]


@pytest.mark.parametrize("d", [4, 5, 6])
@pytest.mark.parametrize("random_seed", [None, 11])
def test_pattern_realization(d, random_seed):
    for pat in admissible_patterns(d):
        cert = plan(pat, 2, random_seed=random_seed)
        lam, v = cert.functional, cert.final
        assert len(cert.steps) <= d
        assert all(sign(lam[i] * v[i]) == pat.eps[i] for i in range(d + 1))
        assert all(b > 0 for b in cert.betas) and cert.alpha > 0
        values = [hk_eval(cert, n) for n in range(1, d + 2)]
        assert recover_coefficients(values, 2, d) == cert.coefficients()
        assert [hk_eval_via_psi(cert, n) for n in range(1, d + 2)] == values
        # fixed dimensions keep their sign under later steps
        for k, step in enumerate(cert.steps):
            for later in cert.steps[k:]:
                r = later.result
                assert all(sign(lam[i] * r[i]) == pat.eps[i] for i in range(step.dimension, d + 1))


def test_certificate_json_round_trip():
    cert = plan(SignPattern.parse("0,0,0,-1,1,1"), 3, colengths=(1, 2), random_seed=5)
    back = HKCertificate.from_json(cert.to_json())
    assert back == cert
    assert back.to_json() == cert.to_json()
    assert cert.to_json()["random_seed"] == 5


def test_plan_is_deterministic():
    pat = SignPattern.parse("0,0,0,0,-1,-1,1")
    assert plan(pat, 2, random_seed=9).to_json() == plan(pat, 2, random_seed=9).to_json()
