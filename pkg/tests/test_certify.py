"""Tests for Taylor certificates and the two sign-verdict mechanisms."""

import math

import pytest

from majorant.certify import (
    BudgetError,
    SignCertificate,
    TaylorCertificate,
    build_certificate,
    check_sign_chain,
    check_sign_variation,
    eval_cert_poly,
    remainder_bound,
    required_steps,
)
from majorant.integrand import IntegrandSpec, h4_sup_bound
from majorant.pipeline import DEFAULT_CONFIG
from majorant.trigpoly import SignVariant


def stage_certificate(name):
    stage = DEFAULT_CONFIG["stages"][name]
    cert = build_certificate(
        stage["center"], stage["radius"], stage["base_order"], stage["degree"],
        stage["budgets"], stage["steps"], stage["mode"], stage["total_delta"],
    )
    return cert, stage


@pytest.fixture(scope="module")
def cert_a():
    return stage_certificate("gap_d4_on_5.000_5.130")[0]


@pytest.fixture(scope="module")
def cert_b():
    return stage_certificate("gap_d1_on_5.130_5.330")[0]


@pytest.fixture(scope="module")
def cert_c():
    return stage_certificate("gap_d1_on_5.330_5.720")[0]


@pytest.fixture(scope="module")
def cert_d():
    return stage_certificate("gap_d2_on_5.720_6.000")[0]


class TestRemainderBound:
    def test_frozen_values(self):
        assert remainder_bound(5.065, 0.065, 4, 6) == pytest.approx(
            0.0008807972696323334, rel=1e-12
        )

    def test_window_must_stay_inside_proven_range(self):
        with pytest.raises(ValueError, match="leaves \\[5, 6\\]"):
            remainder_bound(5.5, 0.6, 1, 8)

    def test_rejects_nonpositive_radius(self):
        with pytest.raises(ValueError, match="radius"):
            remainder_bound(5.5, 0.0, 1, 8)


class TestRequiredSteps:
    def test_reproduces_step_table_entry(self):
        sup4 = h4_sup_bound(IntegrandSpec(5, 3, SignVariant.PLUS))
        assert required_steps(sup4, 0.182, 1.0, 0) == 475

    def test_scales_with_budget(self):
        assert required_steps(1e12, 0.01, 0.1, 0) > required_steps(1e12, 0.1, 0.1, 0)

    def test_validation(self):
        with pytest.raises(ValueError):
            required_steps(-1.0, 0.1, 0.1, 0)
        with pytest.raises(ValueError):
            required_steps(1.0, 0.0, 0.1, 0)


class TestBuildCertificate:
    def test_default_certificates_build(self, cert_a, cert_b, cert_c, cert_d):
        for cert, degree in ((cert_a, 6), (cert_b, 8), (cert_c, 9), (cert_d, 8)):
            assert cert.degree == degree
            assert len(cert.coeffs) == degree + 1
            assert math.fsum(cert.termwise_budget) + cert.remainder <= cert.total_delta

    def test_frozen_spot_coefficients(self, cert_a, cert_b, cert_d):
        assert cert_a.coeffs[0] == pytest.approx(0.38173750763962744, rel=1e-12)
        assert cert_a.coeffs[6] == pytest.approx(-8940.145590490196, rel=1e-12)
        assert cert_b.coeffs[8] == pytest.approx(-4474.521415974479, rel=1e-12)
        assert cert_d.coeffs[0] == pytest.approx(-0.9827616166949156, rel=1e-12)

    def test_frozen_remainders(self, cert_a, cert_b, cert_c, cert_d):
        assert cert_a.remainder == pytest.approx(0.0008807972696323334, rel=1e-12)
        assert cert_b.remainder == pytest.approx(1.7624792815122383e-06, rel=1e-12)
        assert cert_c.remainder == pytest.approx(7.252690769103944e-05, rel=1e-12)
        assert cert_d.remainder == pytest.approx(0.0003487331808599205, rel=1e-12)

    def test_coefficient_budget_violation_names_culprit(self):
        stage = DEFAULT_CONFIG["stages"]["gap_d4_on_5.000_5.130"]
        budgets = list(stage["budgets"])
        budgets[2] = 1e-12
        with pytest.raises(BudgetError, match="coefficient 2"):
            build_certificate(
                stage["center"], stage["radius"], stage["base_order"], stage["degree"],
                budgets, stage["steps"], stage["mode"], stage["total_delta"],
            )

    def test_total_allowance_violation(self):
        stage = DEFAULT_CONFIG["stages"]["gap_d1_on_5.130_5.330"]
        with pytest.raises(BudgetError, match="total allowance"):
            build_certificate(
                stage["center"], stage["radius"], stage["base_order"], stage["degree"],
                stage["budgets"], stage["steps"], stage["mode"], total_delta=1e-05,
            )

    def test_plain_mode_fails_first_budget_at_wide_centers(self):
        """The leading coefficients need the refined bound; plain cannot fit."""
        for name in ("gap_d4_on_5.000_5.130", "gap_d2_on_5.720_6.000"):
            stage = DEFAULT_CONFIG["stages"][name]
            with pytest.raises(BudgetError, match="coefficient 0"):
                build_certificate(
                    stage["center"], stage["radius"], stage["base_order"],
                    stage["degree"], stage["budgets"], stage["steps"], "plain",
                    stage["total_delta"],
                )

    def test_broadcast_length_mismatch(self):
        with pytest.raises(ValueError, match="expected 3"):
            build_certificate(5.5, 0.1, 1, 2, [0.1, 0.1, 0.1], [100, 100], "refined", 0.5)


class TestEvalCertPoly:
    def test_center_values_are_coefficients(self, cert_b):
        for m in range(cert_b.degree + 1):
            assert eval_cert_poly(cert_b, m, cert_b.center) == pytest.approx(
                cert_b.coeffs[m], rel=1e-12
            )

    def test_rejects_out_of_window(self, cert_b):
        with pytest.raises(ValueError, match="outside certified window"):
            eval_cert_poly(cert_b, 0, 5.5)

    def test_rejects_bad_order(self, cert_b):
        with pytest.raises(ValueError, match="order must be in"):
            eval_cert_poly(cert_b, 9, cert_b.center)


class TestSignChain:
    def test_first_interval_positive(self, cert_a):
        verdict = check_sign_chain(cert_a, "positive", (5.0, 5.13))
        assert verdict.certified
        rows = {(r["quantity"], r["order"]): r["value"] for r in verdict.evidence}
        assert rows[("shifted_value", 0)] == pytest.approx(0.0016940309549638155, rel=1e-9)
        expected_chain = [
            -0.8065026990649153,
            -15.964277705573258,
            -103.81631240218665,
            -496.9504606376079,
            -1940.2778727383761,
            -8940.145590490196,
        ]
        for m, ref in enumerate(expected_chain, start=1):
            assert rows[("derivative", m)] == pytest.approx(ref, rel=1e-9)
        assert all("orientation" not in r for r in verdict.evidence)

    def test_last_interval_negative(self, cert_d):
        verdict = check_sign_chain(cert_d, "negative", (5.72, 6.0))
        assert verdict.certified
        rows = {(r["quantity"], r["order"]): r["value"] for r in verdict.evidence}
        assert rows[("shifted_value", 0)] == pytest.approx(-0.011374125936343293, rel=1e-9)
        expected_chain = [
            -3.226759089062916,
            -21.525764045541987,
            -110.71187852467465,
            -483.62648438088524,
            -1873.4022691477255,
            -6804.708219318975,
            -19454.556827396616,
            -105414.59926776215,
        ]
        for m, ref in enumerate(expected_chain, start=1):
            assert rows[("derivative", m)] == pytest.approx(ref, rel=1e-9)

    def test_reflected_orientation_rescues_mirrored_case(self):
        """A rising linear certificate only closes after reflection."""
        cert = TaylorCertificate(
            center=5.5, radius=0.1, base_order=1, degree=1,
            coeffs=(1.0, 2.0), coefficient_errors=(0.0, 0.0),
            termwise_budget=(1e-9, 1e-9), remainder=0.0, total_delta=0.1,
        )
        verdict = check_sign_chain(cert, "positive", (5.4, 5.6))
        assert verdict.certified
        assert all(r.get("orientation") == "reflected" for r in verdict.evidence)
        by_quantity = {r["quantity"]: r for r in verdict.evidence}
        # the reflected anchor lands at the original left endpoint
        assert by_quantity["shifted_value"]["location"] == pytest.approx(5.4)
        assert by_quantity["shifted_value"]["value"] == pytest.approx(0.7)
        assert by_quantity["derivative"]["location"] == pytest.approx(5.6)

    def test_middle_interval_fails_both_orientations(self, cert_b):
        verdict = check_sign_chain(cert_b, "positive", (5.13, 5.33))
        assert not verdict.certified
        assert "both orientations" in verdict.failure_reason

    def test_target_validation(self, cert_a):
        with pytest.raises(ValueError, match="positive.*negative"):
            check_sign_chain(cert_a, "nonzero", (5.0, 5.13))

    def test_interval_validation(self, cert_a):
        with pytest.raises(ValueError, match="certified window"):
            check_sign_chain(cert_a, "positive", (5.0, 5.4))
        with pytest.raises(ValueError, match="empty interval"):
            check_sign_chain(cert_a, "positive", (5.1, 5.1))


class TestSignVariation:
    def test_second_interval_contradicts_at_order_four(self, cert_b):
        verdict = check_sign_variation(cert_b, "positive", (5.13, 5.33))
        assert verdict.certified
        last = verdict.evidence[-1]
        assert last["quantity"] == "contradiction_order" and last["order"] == 4
        means = {
            r["order"]: r["value"]
            for r in verdict.evidence
            if r["quantity"] == "mean_lower"
        }
        assert means[1] == pytest.approx(0.12546538950239158, rel=1e-9)
        assert means[2] == pytest.approx(0.43413662993170155, rel=1e-9)
        assert means[3] == pytest.approx(2.5447198061052516, rel=1e-9)
        assert means[4] == pytest.approx(18.342617281494054, rel=1e-9)

    def test_third_interval_split_contradicts_at_two_and_one(self, cert_c):
        first = check_sign_variation(cert_c, "positive", (5.33, 5.56))
        second = check_sign_variation(cert_c, "positive", (5.56, 5.72))
        assert first.certified and second.certified
        assert first.evidence[-1]["order"] == 2
        assert second.evidence[-1]["order"] == 1
        means = {
            r["order"]: r["value"] for r in first.evidence if r["quantity"] == "mean_lower"
        }
        assert means[1] == pytest.approx(0.208046885373024, rel=1e-9)
        assert means[2] == pytest.approx(1.1708236187295464, rel=1e-9)
        means2 = {
            r["order"]: r["value"] for r in second.evidence if r["quantity"] == "mean_lower"
        }
        assert means2[1] == pytest.approx(0.3544888344971688, rel=1e-9)

    def test_rejects_negative_targets(self, cert_d):
        with pytest.raises(ValueError, match="positive targets only"):
            check_sign_variation(cert_d, "negative", (5.72, 6.0))

    def test_nonpositive_endpoints_fail_fast(self, cert_d):
        verdict = check_sign_variation(cert_d, "positive", (5.72, 6.0))
        assert not verdict.certified
        assert "not both positive" in verdict.failure_reason

    def test_flat_certificate_with_steep_tail_is_inconclusive(self):
        """Endpoint means stay below endpoint derivative magnitudes: no verdict.

        The cubic 1 + u/2 - 10 u^3 around 5.5 with allowance 0.95 is genuinely
        positive on [5.35, 5.65] (its minimum is about 0.0069 above the
        allowance) but the cascade cannot see it: the only order whose mean
        clears the endpoint magnitudes has a rising derivative behind it.
        """
        cert = TaylorCertificate(
            center=5.5, radius=0.15, base_order=1, degree=3,
            coeffs=(1.0, 0.5, 0.0, -60.0), coefficient_errors=(0.0,) * 4,
            termwise_budget=(1e-9,) * 4, remainder=0.0, total_delta=0.95,
        )
        verdict = check_sign_variation(cert, "positive", (5.35, 5.65))
        assert isinstance(verdict, SignCertificate)
        assert not verdict.certified
        assert "monotone tail" in verdict.failure_reason
