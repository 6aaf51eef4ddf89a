import pytest

from parspec.elf import ELFStatus, boundary_preimage_of_one, classify_elf, elf_expression
from parspec.errors import DomainError
from parspec.poly import ComplexPolynomial, circle_parameter, make_quadratic


def numeric_expression(p, h=1e-4):
    # finite differences at 1 from the left-hand side of the disk
    f = lambda x: p(x)
    d1 = (f(1 + h) - f(1 - h)) / (2 * h)
    d2 = (f(1 + h) - 2 * f(1) + f(1 - h)) / h**2
    return 1 / d1 - 1 + d2 / d1**2


@pytest.mark.parametrize("a", [0.25, 0.3 + 0.1j, 0.5, 0.25 + 0.25j, 0.1 + 0.05j])
def test_expression_equals_two_a(a):
    s = make_quadratic(a)
    assert abs(elf_expression(s) - 2 * s.a) < 1e-13
    assert abs(numeric_expression(s.poly) - 2 * s.a) < 1e-6


def test_expression_of_linear_fractional_like_map():
    # (z + 1)/2 has phi'(1) = 1/2, phi'' = 0
    assert elf_expression(ComplexPolynomial([0.5, 0.5])) == pytest.approx(1.0)


def test_classification_matrix():
    assert classify_elf(make_quadratic(0.25)).status is ELFStatus.ELF
    assert classify_elf(make_quadratic(0.5)).status is ELFStatus.NOT_ELF
    v = classify_elf(make_quadratic(0.25 + 0.25j))
    assert v.status is ELFStatus.ELF_AFTER_ONE_COMPOSITION
    with pytest.raises(DomainError):
        classify_elf(make_quadratic(0.7))


def test_special_half_has_two_boundary_preimages():
    pre = boundary_preimage_of_one(make_quadratic(0.5))
    assert len(pre) == 2 and min(abs(p + 1) for p in pre) < 1e-15


def test_circle_parameter_second_preimage_outside():
    pre = boundary_preimage_of_one(make_quadratic(0.25 + 0.25j))
    assert pre == [1.0 + 0j]


@pytest.mark.parametrize("theta", [0.2, 0.9, 1.6, 2.3, 2.9, 3.4, 4.0, 4.8, 5.6])
def test_composite_has_single_boundary_preimage(theta):
    s = circle_parameter(theta)
    if abs(s.a - 0.5) < 1e-12:
        return
    v = classify_elf(s)
    on_circle = [z for z in v.composite_preimages if abs(abs(z) - 1) < 1e-6]
    assert len(on_circle) == 1 and abs(on_circle[0] - 1) < 1e-6
    # phi(-1) = 4a - 1 lies on the circle, then phi maps it inside
    w = s.poly(s.poly(-1.0))
    assert abs(w) < 1


def test_composite_second_derivative_chain_rule():
    # (phi o phi)'' (1) = phi''(1) phi'(1)^2 + phi'(1) phi''(1) = 4a
    for theta in (0.7, 2.0, 4.0):
        s = circle_parameter(theta)
        v = classify_elf(s)
        assert v.composite_second_derivative == pytest.approx(4 * s.a, abs=1e-12)
