import pytest

from rorcert.closedloop import (
    DegenerateParametrization,
    IllPosedError,
    NotStabilizingError,
    closed_loop,
    controller_param,
    param_data,
    plant_param,
    sample_stable_matrix,
    stabilizes,
    well_posed,
)
from rorcert.exactalg import RatFunc, S
from rorcert.ratmat import DimensionError, RatMat, block, mat_is_stable

s = RatFunc(S)
I1 = RatMat.identity(1)


def M(*rows):
    return RatMat.from_rows(rows)


P_stable = M([1 / (s + 1), 2 / (s + 3)], [0, (s - 1) / (s + 2)])


class TestWellPosed:
    def test_zero_plant(self):
        assert well_posed(RatMat.zeros(2, 2), M([1 / s, s], [2, 3]))

    def test_unit_loop(self):
        assert not well_posed(M([1]), M([1]))

    def test_fixture_pair(self, quadtank):
        assert well_posed(quadtank.plant, quadtank.controller)

    def test_dimensions(self):
        with pytest.raises(DimensionError):
            well_posed(RatMat.zeros(2, 1), RatMat.zeros(2, 1))


class TestClosedLoop:
    def test_zero_plant(self):
        C = M([1 / s, 0], [s, 1])
        b = closed_loop(RatMat.zeros(2, 2), C)
        assert b.e_from_r == RatMat.identity(2)
        assert b.e_from_d.is_zero()
        assert b.u_from_r == C
        assert b.u_from_d == RatMat.identity(2)

    def test_zero_controller(self):
        b = closed_loop(P_stable, RatMat.zeros(2, 2))
        assert (b.e_from_r, b.e_from_d, b.u_from_r, b.u_from_d) == (
            RatMat.identity(2), P_stable, RatMat.zeros(2, 2), RatMat.identity(2))

    def test_fixture_blocks_stable(self, quadtank):
        b = closed_loop(quadtank.plant, quadtank.controller)
        for B in b.as_dict().values():
            assert mat_is_stable(B)[0]

    def test_block_identities(self, quadtank):
        P, C = quadtank.plant, quadtank.controller
        b = closed_loop(P, C)
        assert b.e_from_r - P @ b.u_from_r == RatMat.identity(2)
        assert b.u_from_d == RatMat.identity(2) + C @ b.e_from_d
        # the shortcut for (I-CP)^-1 agrees with direct inversion
        from rorcert.ratmat import mat_inv
        assert b.u_from_d == mat_inv(RatMat.identity(2) - C @ P)

    def test_ill_posed(self):
        with pytest.raises(IllPosedError):
            closed_loop(M([1]), M([1]))


class TestStabilizes:
    def test_stable_plant_no_controller(self):
        assert stabilizes(P_stable, RatMat.zeros(2, 2)).stable

    def test_unstable_plant_no_controller(self):
        rep = stabilizes(M([1 / (s - 1)]), M([0]))
        assert not rep.stable and "e_from_d" in rep.failures

    def test_fixture_pair(self, quadtank):
        assert stabilizes(quadtank.plant, quadtank.controller).stable

    def test_ill_posed_is_a_verdict(self):
        rep = stabilizes(M([1]), M([1]))
        assert not rep.stable and not rep.well_posed

    def test_symmetry(self, quadtank):
        P, C = quadtank.plant, quadtank.controller
        assert stabilizes(C, P).stable == stabilizes(P, C).stable
        Pu = M([1 / (s - 1)])
        for c in (M([0]), M([-3]), M([-(s + 5) / (s + 2)]), M([2])):
            assert stabilizes(c, Pu).stable == stabilizes(Pu, c).stable

    def test_unstable_plant_stabilized_by_gain(self):
        # 1/(s-1) with C = -3: closed loop pole at s = -2
        assert stabilizes(M([1 / (s - 1)]), M([-3])).stable
        assert not stabilizes(M([1 / (s - 1)]), M([-1])).stable


class TestParamData:
    def test_zero_pair(self):
        Z = RatMat.zeros(2, 2)
        d = param_data(Z, Z)
        I = RatMat.identity(2)
        assert d.Ltilde == block([[Z, I]])
        assert d.L == block([[I], [Z]])
        assert d.Mtilde == block([[Z, I]])
        assert d.M == block([[I], [Z]])

    def test_fixture_all_stable(self, quadtank):
        d = param_data(quadtank.plant, quadtank.controller)
        for Z in (d.L, d.Ltilde, d.M, d.Mtilde):
            assert mat_is_stable(Z)[0]

    def test_mtilde_definition(self, quadtank):
        P, C = quadtank.plant, quadtank.controller
        b = closed_loop(P, C)
        assert param_data(P, C).Mtilde == block([[-b.e_from_d, b.e_from_r]])

    def test_dimensions_nonsquare(self):
        P = M([1 / (s + 1)], [2 / (s + 2)], [0])  # n=3, m=1
        C = RatMat.zeros(1, 3)
        d = param_data(P, C)
        assert d.Ltilde.shape == (1, 4) and d.L.shape == (4, 3)
        assert d.Mtilde.shape == (3, 4) and d.M.shape == (4, 1)
        W = sample_stable_matrix(4, 4, 1, 5)
        assert (d.Ltilde @ W @ d.L).shape == (1, 3)

    def test_requires_stabilizing(self):
        with pytest.raises(NotStabilizingError):
            param_data(M([1 / (s - 1)]), M([0]))


class TestPlantParam:
    def test_zero_parameter(self, quadtank):
        P, C = quadtank.plant, quadtank.controller
        assert plant_param(P, C, RatMat.zeros(4, 4)) == P

    @pytest.mark.parametrize("seed", range(5))
    def test_sampled_plants_stabilized(self, quadtank, seed):
        P, C = quadtank.plant, quadtank.controller
        X = sample_stable_matrix(4, 4, 2, seed)
        assert stabilizes(plant_param(P, C, X), C).stable

    def test_small_constant(self, quadtank):
        P, C = quadtank.plant, quadtank.controller
        X = RatMat.build(4, 4, lambda i, j: RatFunc(1, 10) if (i, j) == (2, 0) else 0)
        PX = plant_param(P, C, X)
        assert PX != P and stabilizes(PX, C).stable

    def test_degenerate(self):
        # P = 0, C = 1: P(X) = x (1 + x)^-1 with x = X[1,0]; x = -1 is excluded
        X = M([0, 0], [-1, 0])
        with pytest.raises(DegenerateParametrization):
            plant_param(M([0]), M([1]), X)

    def test_unstable_parameter_rejected(self, quadtank):
        X = RatMat.build(4, 4, lambda i, j: 1 / s if i == j == 0 else 0)
        with pytest.raises(ValueError):
            plant_param(quadtank.plant, quadtank.controller, X)


class TestControllerParam:
    def test_zero_parameter(self, quadtank):
        P, C = quadtank.plant, quadtank.controller
        assert controller_param(P, C, RatMat.zeros(4, 4)) == C

    @pytest.mark.parametrize("seed", range(5))
    def test_sampled_controllers_stabilize(self, quadtank, seed):
        P, C = quadtank.plant, quadtank.controller
        W = sample_stable_matrix(4, 4, 2, seed)
        assert stabilizes(P, controller_param(P, C, W)).stable

    def test_degenerate(self):
        # P = 1, C = 0: C(W) = w (1 + w)^-1 with w = W[1,0]
        W = M([0, 0], [-1, 0])
        with pytest.raises(DegenerateParametrization):
            controller_param(M([1]), M([0]), W)

    def test_youla_for_stable_plant(self):
        W = sample_stable_matrix(4, 4, 1, 9)
        Cw = controller_param(P_stable, RatMat.zeros(2, 2), W)
        assert stabilizes(P_stable, Cw).stable


class TestSampling:
    def test_constant(self):
        A = sample_stable_matrix(2, 3, 0, 1)
        assert all(e.den.degree == 0 and e.num.degree <= 0 for e in A.entries)
        assert mat_is_stable(A)[0]

    def test_deterministic(self):
        assert sample_stable_matrix(3, 3, 2, 17) == sample_stable_matrix(3, 3, 2, 17)
        assert sample_stable_matrix(3, 3, 2, 17) != sample_stable_matrix(3, 3, 2, 18)

    @pytest.mark.parametrize("seed", range(20))
    def test_stable(self, seed):
        assert mat_is_stable(sample_stable_matrix(3, 2, 3, seed))[0]

    def test_negative_degree(self):
        with pytest.raises(ValueError):
            sample_stable_matrix(1, 1, -1, 0)
