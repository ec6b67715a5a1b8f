"""Numerical engine: quaternion core, grids, families, and the cocycles.

Oracles used here: the commuting torus pair whose pairing is exactly -1
(the integrand collapses to 4 pi r, which midpoint-by-trapezoid quadrature
integrates without error, and sympy confirms the closed form); the built-in
winding generator with unit degree; the boundary form of the current
pairing on a pure harmonic pair, equal to -1/pi in closed form. Analytic
partials are cross-checked against central finite differences for every
node type of the family grammar.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cocycle_lab.loop import (
    AlgebraElement,
    AlgebraField,
    AntipodeError,
    CentralElement,
    CocycleValue,
    DomainError,
    FieldAtom,
    GridSpec,
    MIN_RESOLUTION,
    MapFamily,
    RelativeError,
    SU2Element,
    ScalarField,
    builtin_families,
    change_representative,
    circle_gauss,
    coboundary_relation_check,
    conjugate,
    conjugation_invariance_check,
    constant,
    cylinder_nodes,
    delta_C,
    disk_nodes,
    eq1_check,
    exp_map,
    family_from_dict,
    infinitesimal_limit_check,
    integrate,
    inverse,
    kac_moody_product,
    lie_cocycle,
    lift,
    load_family,
    maurer_cartan_defect,
    mickelsson_C,
    product,
    qconj,
    qexp,
    qlog,
    qmul,
    qnorm,
    random_algebra_field,
    reference_algebra_pair,
    relative_defect,
    representative_audit,
    suspension_generator,
    t_reparam,
    to_matrix,
    top_slice,
    trace_pair,
    tree_sum,
    triple_product_trace,
    wzw_Lambda,
)

SPEC = GridSpec(nr=64, ntheta=64, nt=16, ncircle=64)
SPEC_LADDER = GridSpec(nr=64, ntheta=64, nt=32, ncircle=64)

FAMS = builtin_families()
F = family_from_dict(FAMS["disk-f"])
G = family_from_dict(FAMS["disk-g"])
K = family_from_dict(FAMS["disk-k"])
U = family_from_dict(FAMS["torus-u"])
V = family_from_dict(FAMS["torus-v"])
BG = family_from_dict(FAMS["bump-g"])
BH = family_from_dict(FAMS["bump-h"])
SUSP = suspension_generator()

unit_quats = st.builds(
    lambda w, x, y, z: np.array([w, x, y, z]) / math.sqrt(w * w + x * x + y * y + z * z),
    *(st.floats(-1.0, 1.0).filter(lambda v: abs(v) > 1e-3) for _ in range(4)),
)
small_vecs = st.builds(
    lambda x, y, z: np.array([x, y, z]),
    *(st.floats(-0.9, 0.9) for _ in range(3)),
)


class TestQuaternionCore:
    @given(unit_quats, unit_quats, unit_quats)
    @settings(max_examples=60, deadline=None)
    def test_product_associative(self, a, b, c):
        assert np.allclose(qmul(qmul(a, b), c), qmul(a, qmul(b, c)), atol=1e-12)

    @given(unit_quats)
    @settings(max_examples=60, deadline=None)
    def test_conjugate_inverts_units(self, q):
        assert np.allclose(qmul(q, qconj(q)), [1, 0, 0, 0], atol=1e-12)

    @given(small_vecs)
    @settings(max_examples=60, deadline=None)
    def test_exp_log_roundtrip(self, v):
        assert np.allclose(qlog(qexp(v)), v, atol=1e-12)

    def test_exp_of_zero(self):
        assert np.allclose(qexp(np.zeros(3)), [1, 0, 0, 0])

    def test_exp_lands_on_unit_sphere(self):
        v = np.array([[0.3, -1.2, 0.7], [2.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
        assert np.allclose(qnorm(qexp(v)), 1.0, atol=1e-14)

    def test_log_rejects_antipode(self):
        with pytest.raises(AntipodeError):
            qlog(np.array([-1.0, 0.0, 0.0, 0.0]))
        batch = np.stack([np.array([1.0, 0, 0, 0]),
                          np.array([-1.0, 1e-9, 0, 0])])
        with pytest.raises(AntipodeError):
            qlog(batch)

    @given(unit_quats, unit_quats)
    @settings(max_examples=40, deadline=None)
    def test_matrix_image_is_homomorphism(self, a, b):
        assert np.allclose(
            to_matrix(qmul(a, b)), to_matrix(a) @ to_matrix(b), atol=1e-12
        )

    @given(unit_quats)
    @settings(max_examples=40, deadline=None)
    def test_matrix_image_is_special_unitary(self, q):
        m = to_matrix(q)
        assert np.allclose(m @ m.conj().T, np.eye(2), atol=1e-12)
        assert np.linalg.det(m) == pytest.approx(1.0, abs=1e-12)

    @given(small_vecs, small_vecs)
    @settings(max_examples=40, deadline=None)
    def test_trace_pairing_matches_matrices(self, x, y):
        mx = AlgebraElement(*x).matrix()
        my = AlgebraElement(*y).matrix()
        assert np.trace(mx @ my).real == pytest.approx(trace_pair(x, y), abs=1e-12)
        assert abs(np.trace(mx @ my).imag) <= 1e-12

    @given(small_vecs, small_vecs, small_vecs)
    @settings(max_examples=40, deadline=None)
    def test_triple_trace_matches_matrices(self, a, b, c):
        ma = AlgebraElement(*a).matrix()
        mb = AlgebraElement(*b).matrix()
        mc = AlgebraElement(*c).matrix()
        want = np.trace((ma @ mb - mb @ ma) @ mc)
        assert want.real == pytest.approx(triple_product_trace(a, b, c), abs=1e-12)

    def test_group_element_must_be_unit(self):
        with pytest.raises(ValueError):
            SU2Element(1.0, 0.2, 0.0, 0.0)
        SU2Element(0.6, 0.0, 0.8, 0.0)

    def test_algebra_element_exponentiates(self):
        el = AlgebraElement(0.1, -0.2, 0.3).exp()
        assert isinstance(el, SU2Element)


class TestGrids:
    def test_spec_rejects_degenerate_resolutions(self):
        with pytest.raises(ValueError):
            GridSpec(nr=4)
        with pytest.raises(ValueError):
            GridSpec(nt=7)

    def test_scaled_clamps_at_minimum(self):
        s = GridSpec(nr=16, ntheta=16, nt=16, ncircle=16).scaled(0.25)
        assert s.nr == s.ntheta == s.nt == s.ncircle == MIN_RESOLUTION

    def test_disk_weight_normalization(self):
        r, theta, w = disk_nodes(SPEC)
        assert integrate(np.ones(SPEC.disk_shape), SPEC.disk_shape, w) == (
            pytest.approx(2.0 * math.pi, rel=1e-14)
        )
        # midpoint is exact on polynomials of degree one per cell
        assert integrate(
            np.broadcast_to(r, SPEC.disk_shape), SPEC.disk_shape, w
        ) == pytest.approx(math.pi, rel=1e-13)

    def test_trapezoid_kills_low_harmonics(self):
        r, theta, w = disk_nodes(SPEC)
        for m in (1, 2, 5, 31):
            cells = np.broadcast_to(np.cos(m * theta), SPEC.disk_shape)
            assert abs(integrate(cells, SPEC.disk_shape, w)) <= 1e-12

    def test_cylinder_weight_normalization(self):
        *_, w = cylinder_nodes(SPEC)
        assert integrate(
            np.ones(SPEC.cylinder_shape), SPEC.cylinder_shape, w
        ) == pytest.approx(2.0 * math.pi, rel=1e-14)

    def test_circle_gauss_rules(self):
        x, w = circle_gauss(12)
        assert w.sum() == pytest.approx(2.0 * math.pi, rel=1e-14)
        # trig is not polynomial: twelve nodes leave a ~1e-12 tail
        assert float(np.sum(np.cos(x) ** 2 * w)) == pytest.approx(
            math.pi, rel=1e-9
        )
        with pytest.raises(ValueError):
            circle_gauss(4)

    @given(st.lists(st.floats(-1e6, 1e6), min_size=0, max_size=200))
    @settings(max_examples=50, deadline=None)
    def test_tree_sum_matches_fsum(self, values):
        got = tree_sum(np.array(values, dtype=np.float64))
        assert got == pytest.approx(math.fsum(values), rel=1e-12, abs=1e-9)

    def test_tree_sum_of_empty(self):
        assert tree_sum(np.array([])) == 0.0


def fd_partials(fam: MapFamily, coords: dict, h: float = 1e-5) -> dict:
    out = {}
    for name in fam.coord_names:
        up = dict(coords)
        dn = dict(coords)
        up[name] = coords[name] + h
        dn[name] = coords[name] - h
        qu, _ = fam.sample(up)
        qd, _ = fam.sample(dn)
        out[name] = (qu - qd) / (2.0 * h)
    return out


DISK_PROBE = {"r": np.array([0.31, 0.62, 0.88]), "theta": np.array([0.7, 2.9, 5.1])}
CYL_PROBE = dict(DISK_PROBE, t=np.array([0.26, 0.55, 0.81]))


class TestFamilyPartials:
    @pytest.mark.parametrize("name", ["disk-f", "disk-g", "disk-k", "torus-u"])
    def test_exp_disk_partials(self, name):
        fam = family_from_dict(FAMS[name])
        q, dq = fam.sample(DISK_PROBE)
        fd = fd_partials(fam, DISK_PROBE)
        for coord in fam.coord_names:
            assert np.max(np.abs(dq[coord] - fd[coord])) <= 1e-8

    @pytest.mark.parametrize("name", ["bump-g", "bump-h"])
    def test_bump_partials(self, name):
        fam = family_from_dict(FAMS[name])
        q, dq = fam.sample(CYL_PROBE)
        fd = fd_partials(fam, CYL_PROBE)
        for coord in fam.coord_names:
            assert np.max(np.abs(dq[coord] - fd[coord])) <= 1e-8

    def test_composite_partials(self):
        composites = [
            product(F, G),
            inverse(G),
            conjugate(F, K),
            top_slice(BG),
        ]
        for fam in composites:
            _, dq = fam.sample(DISK_PROBE)
            fd = fd_partials(fam, DISK_PROBE)
            for coord in fam.coord_names:
                assert np.max(np.abs(dq[coord] - fd[coord])) <= 1e-8

    def test_cylinder_composite_partials(self):
        for fam in (lift(F), t_reparam(BG), product(BG, BH), conjugate(BH, G)):
            _, dq = fam.sample(CYL_PROBE)
            fd = fd_partials(fam, CYL_PROBE)
            for coord in fam.coord_names:
                assert np.max(np.abs(dq[coord] - fd[coord])) <= 1e-8

    def test_suspension_partials(self):
        # probe inside the bump, outside it, and across generic points
        probe = {
            "r": np.array([0.05, 0.2, 0.35, 0.7]),
            "theta": np.array([0.4, 1.5, 3.3, 5.9]),
            "t": np.array([0.5, 0.42, 0.6, 0.3]),
        }
        _, dq = SUSP.sample(probe)
        fd = fd_partials(SUSP, probe, h=1e-6)
        for coord in SUSP.coord_names:
            assert np.max(np.abs(dq[coord] - fd[coord])) <= 1e-5

    def test_values_stay_on_unit_sphere(self):
        for fam, probe in ((F, DISK_PROBE), (BG, CYL_PROBE), (SUSP, CYL_PROBE)):
            q, dq = fam.sample(probe)
            assert np.max(np.abs(qnorm(q) - 1.0)) <= 1e-12
            # tangency: d|q|^2 = 2 q . dq vanishes
            for coord in fam.coord_names:
                assert np.max(np.abs(np.sum(q * dq[coord], axis=-1))) <= 1e-12


class TestFamilyGrammar:
    def test_domain_mismatch_rejected(self):
        with pytest.raises(DomainError):
            product(F, BG)
        with pytest.raises(DomainError):
            lift(BG)
        with pytest.raises(DomainError):
            top_slice(F)
        with pytest.raises(DomainError):
            t_reparam(F)
        with pytest.raises(DomainError):
            conjugate(F, BG)

    def test_constant_must_be_unit(self):
        with pytest.raises(ValueError):
            constant("disk", [1.0, 1.0, 0.0, 0.0])

    def test_suspension_radius_window(self):
        with pytest.raises(ValueError):
            suspension_generator(radius=0.5)
        with pytest.raises(ValueError):
            suspension_generator(radius=0.0)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            family_from_dict({"kind": "spline"})

    def test_bump_families_are_exactly_relative(self):
        assert relative_defect(BG) == 0.0
        assert relative_defect(BH) == 0.0
        assert relative_defect(SUSP) <= 1e-15

    def test_lifted_generic_map_is_not_relative(self):
        assert relative_defect(lift(F)) > 1e-3

    def test_load_family_roundtrip(self, tmp_path):
        path = tmp_path / "fam.toml"
        path.write_text(
            'kind = "torus"\ndomain = "disk"\naxis = [0.0, 0.0, 1.0]\n'
            '[[field]]\ncoef = 1.5\nr_pow = 1\nharmonic = 1\nphase = 0.25\n'
        )
        fam = load_family(path)
        q, _ = fam.sample(DISK_PROBE)
        want = family_from_dict({
            "kind": "torus", "domain": "disk", "axis": [0.0, 0.0, 1.0],
            "field": [{"coef": 1.5, "r_pow": 1, "harmonic": 1, "phase": 0.25}],
        }).sample(DISK_PROBE)[0]
        assert np.allclose(q, want, atol=1e-15)

    def test_scalar_field_blocks_height_on_disk(self):
        field = ScalarField((FieldAtom(coef=1.0, t_pow=1),))
        with pytest.raises(DomainError):
            field.sample(np.array([0.5]), np.array([1.0]))


class TestDiskPairing:
    def test_torus_oracle_every_grid(self):
        # integrand degenerates to 4 pi r: exact under midpoint-trapezoid
        for n in (8, 16, 64):
            spec = GridSpec(nr=n, ntheta=n, nt=8, ncircle=8)
            got = mickelsson_C(U, V, spec)
            assert got.value == pytest.approx(-1.0, abs=1e-13)

    def test_torus_oracle_closed_form(self):
        sympy = pytest.importorskip("sympy")
        r, th = sympy.symbols("r theta", positive=True)
        a = 2 * sympy.pi * r * sympy.cos(th)
        b = 2 * r * sympy.sin(th)
        form = sympy.diff(a, r) * sympy.diff(b, th) - sympy.diff(a, th) * sympy.diff(b, r)
        integral = sympy.integrate(
            sympy.integrate(form, (r, 0, 1)), (th, 0, 2 * sympy.pi)
        )
        value = -2 * integral / (8 * sympy.pi**2)
        assert sympy.simplify(value + 1) == 0

    def test_neutral_element_pairs_to_zero(self):
        one = constant("disk")
        assert mickelsson_C(one, G, SPEC).value == 0.0
        assert mickelsson_C(F, one, SPEC).value == 0.0

    def test_lattice_agrees_with_analytic(self):
        spec = GridSpec(nr=64, ntheta=64, nt=8, ncircle=8)
        a = mickelsson_C(F, G, spec).value
        l = mickelsson_C(F, G, spec, method="lattice").value
        assert a == pytest.approx(l, abs=5e-4)

    def test_lattice_converges_to_torus_value(self):
        errs = []
        for n in (32, 64, 128):
            spec = GridSpec(nr=n, ntheta=n, nt=8, ncircle=8)
            errs.append(abs(mickelsson_C(U, V, spec, method="lattice").value + 1.0))
        assert errs[-1] <= 1e-3
        assert errs[0] > errs[1] > errs[2]

    def test_error_field_is_half_grid_gap(self):
        got = mickelsson_C(F, G, SPEC)
        half = mickelsson_C(F, G, SPEC.scaled(0.5))
        assert got.error == pytest.approx(abs(got.value - half.value), rel=1e-12)
        assert got.grid == (64, 64)

    def test_method_and_domain_validation(self):
        with pytest.raises(ValueError):
            mickelsson_C(F, G, SPEC, method="simpson")
        with pytest.raises(ValueError):
            mickelsson_C(BG, G, SPEC)


class TestCocycleClosure:
    def test_analytic_closure_at_roundoff(self):
        got = delta_C(F, G, K, SPEC)
        assert abs(got.value) <= 1e-12

    def test_lattice_closure_second_order(self):
        from cocycle_lab.report import observed_order
        errs = []
        ns = (32, 64, 128)
        for n in ns:
            spec = GridSpec(nr=n, ntheta=n, nt=8, ncircle=8)
            errs.append(abs(delta_C(F, G, K, spec, method="lattice").value))
        assert observed_order(errs, ns) >= 1.5

    def test_left_log_product_rule(self):
        assert maurer_cartan_defect(F, G, SPEC) <= 1e-12

    def test_constant_conjugation_leaves_pairing_alone(self):
        rep = conjugation_invariance_check(
            F, G, constant("disk", [0.6, 0.0, 0.8, 0.0]), SPEC
        )
        assert rep["residual"] <= 1e-12

    def test_conjugator_must_be_constant(self):
        with pytest.raises(ValueError):
            conjugation_invariance_check(F, G, K, SPEC)


class TestWindingFunctional:
    def test_constant_map_winds_zero(self):
        got = wzw_Lambda(constant("cylinder"), SPEC)
        assert got.value == 0.0

    def test_generator_has_unit_winding(self):
        got = wzw_Lambda(SUSP, SPEC)
        assert abs(abs(got.value) - 1.0) <= 1e-2

    def test_mirrored_generator_flips_sign(self):
        plain = wzw_Lambda(SUSP, SPEC)
        flipped = wzw_Lambda(suspension_generator(flip=True), SPEC)
        assert flipped.value == pytest.approx(-plain.value, abs=1e-13)

    def test_doubled_generator_winds_twice(self):
        got = wzw_Lambda(product(SUSP, SUSP), SPEC)
        assert got.value == pytest.approx(2.0 * wzw_Lambda(SUSP, SPEC).value, abs=2e-2)

    def test_height_reparameterization_shifts_by_integer(self):
        K_map = product(BG, SUSP)
        gap = wzw_Lambda(t_reparam(K_map), SPEC).value - wzw_Lambda(K_map, SPEC).value
        assert abs(gap - round(gap)) <= 1e-2

    def test_generator_shifts_winding_by_unit(self):
        shift = wzw_Lambda(product(BG, SUSP), SPEC).value - wzw_Lambda(BG, SPEC).value
        assert abs(abs(shift) - 1.0) <= 2e-2

    def test_non_relative_map_rejected(self):
        with pytest.raises(RelativeError):
            wzw_Lambda(lift(F), SPEC)
        with pytest.raises(ValueError):
            wzw_Lambda(F, SPEC)

    def test_validation_can_be_waived(self):
        got = wzw_Lambda(lift(F), SPEC, validate=False)
        assert math.isfinite(got.value)


class TestIntegralIdentities:
    def test_coboundary_cancellation(self):
        rep = coboundary_relation_check(BG, BH, SPEC_LADDER)
        assert rep["nearest_int_distance"] <= 1e-2
        assert rep["observed_order"] >= 1.0
        ints = [round(v) for _, v, _ in rep["per_grid"][-2:]]
        assert ints[0] == ints[1]

    def test_conjugation_mixed_identity(self):
        rep = eq1_check(product(F, G), product(BG, BH), SPEC_LADDER)
        assert rep["nearest_int_distance"] <= 1e-2
        assert rep["observed_order"] >= 1.0

    def test_mixed_identity_single_factor(self):
        rep = eq1_check(F, BH, SPEC_LADDER)
        assert rep["nearest_int_distance"] <= 1e-2

    def test_ladder_report_shape(self):
        rep = coboundary_relation_check(BG, BH, SPEC_LADDER)
        assert len(rep["per_grid"]) == 3
        assert rep["grids"][-1] == SPEC_LADDER.cylinder_shape

    def test_identities_validate_inputs(self):
        with pytest.raises(RelativeError):
            coboundary_relation_check(lift(F), BH, SPEC_LADDER)
        with pytest.raises(ValueError):
            eq1_check(BG, BH, SPEC_LADDER)


class TestCentralProduct:
    def test_neutral_element(self):
        one = CentralElement(constant("disk"), 0.0)
        b = CentralElement(G, 0.55)
        assert kac_moody_product(one, b, SPEC).phase == pytest.approx(0.55, abs=1e-12)
        assert kac_moody_product(b, one, SPEC).phase == pytest.approx(0.55, abs=1e-12)

    def test_phase_stays_mod_one(self):
        a = CentralElement(F, 0.9)
        b = CentralElement(G, 0.8)
        got = kac_moody_product(a, b, SPEC)
        assert 0.0 <= got.phase < 1.0

    def test_associativity_defect_at_roundoff(self):
        a = CentralElement(F, 0.2)
        b = CentralElement(G, 0.55)
        c = CentralElement(K, 0.83)
        p1 = kac_moody_product(kac_moody_product(a, b, SPEC), c, SPEC)
        p2 = kac_moody_product(a, kac_moody_product(b, c, SPEC), SPEC)
        gap = abs(p1.phase - p2.phase)
        assert min(gap, 1.0 - gap) <= 1e-12

    def test_representative_change_is_consistent(self):
        a = CentralElement(F, 0.2)
        b = CentralElement(G, 0.55)
        audit = representative_audit(a, b, product(BG, BH), SPEC_LADDER)
        assert audit["ok"]
        assert audit["defect"] <= audit["threshold"]

    def test_representative_change_validates(self):
        a = CentralElement(F, 0.2)
        with pytest.raises(RelativeError):
            change_representative(a, lift(G), SPEC)


FOURIER_AXIS = (0.0, 0.0, 1.0)
FOURIER_X = AlgebraField(((FOURIER_AXIS, ScalarField((
    FieldAtom(coef=1.0, r_pow=2, harmonic=2, phase=0.0),))),))
FOURIER_Y = AlgebraField(((FOURIER_AXIS, ScalarField((
    FieldAtom(coef=1.0, r_pow=2, harmonic=2, phase=-math.pi / 2.0),))),))


class TestCurrentPairing:
    def test_pairing_with_itself_vanishes(self):
        rep = lie_cocycle(FOURIER_X, FOURIER_X, SPEC)
        assert abs(rep["disk"]) <= 1e-12
        assert abs(rep["boundary"]) <= 1e-12

    def test_antisymmetry(self):
        ab = lie_cocycle(FOURIER_X, FOURIER_Y, SPEC)["disk"]
        ba = lie_cocycle(FOURIER_Y, FOURIER_X, SPEC)["disk"]
        assert ab == pytest.approx(-ba, abs=1e-14)

    def test_harmonic_boundary_oracle(self):
        # boundary values cos(2 theta) and sin(2 theta) along one axis:
        # the ring integral is m/(4 pi) tr(axis^2) = -1/pi at m = 2
        rep = lie_cocycle(FOURIER_X, FOURIER_Y, SPEC)
        assert rep["boundary"] == pytest.approx(-1.0 / math.pi, abs=1e-12)
        assert rep["stokes_gap"] <= 1e-3

    def test_stokes_agreement_on_random_fields(self):
        rng = np.random.default_rng(20260815)
        for _ in range(4):
            X = random_algebra_field(rng)
            Y = random_algebra_field(rng)
            rep = lie_cocycle(X, Y, SPEC)
            assert rep["stokes_gap"] <= 1e-3


class TestInfinitesimalLimit:
    def test_reference_pair_certifies_second_order(self):
        X, Y = reference_algebra_pair()
        rep = infinitesimal_limit_check(X, Y, SPEC)
        assert 3.0 <= rep["halving_ratio"] <= 5.0
        assert rep["sign"] in (-1.0, 1.0)
        assert rep["residual"] <= 1e-3

    def test_reference_pair_frozen_values(self):
        X, Y = reference_algebra_pair()
        rep = infinitesimal_limit_check(X, Y, SPEC)
        assert rep["value"] == pytest.approx(0.15041468, abs=1e-6)
        assert rep["target"] == pytest.approx(0.15047826, abs=1e-6)
        assert rep["sign"] == 1.0

    def test_step_window_enforced(self):
        X, Y = reference_algebra_pair()
        for eps in (0.0, -0.05, 0.2):
            with pytest.raises(ValueError):
                infinitesimal_limit_check(X, Y, SPEC, eps=eps)

    def test_value_shape(self):
        X, Y = reference_algebra_pair()
        rep = infinitesimal_limit_check(X, Y, SPEC, eps=0.05)
        assert set(rep) == {"value", "target", "sign", "residual",
                            "halving_ratio", "grid"}
