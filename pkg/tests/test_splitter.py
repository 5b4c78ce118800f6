import pytest

from semicomplete.errors import BudgetExceededError
from semicomplete.splitter import CoveringFamily, build_covering_family, verify_covering_family


class TestBuildCoveringFamily:
    def test_p_zero_one_empty_set(self):
        fam = build_covering_family(6, 0, 4)
        assert fam.masks == (0,)
        assert verify_covering_family(fam, 0, 4)

    def test_q_zero_full_set(self):
        fam = build_covering_family(6, 4, 0)
        assert fam.masks == ((1 << 6) - 1,)
        assert verify_covering_family(fam, 4, 0)

    def test_u6_p1_q2(self):
        fam = build_covering_family(6, 1, 2)
        assert verify_covering_family(fam, 1, 2)

    def test_deterministic(self):
        a = build_covering_family(9, 2, 3)
        b = build_covering_family(9, 2, 3)
        assert a.masks == b.masks

    def test_build_then_verify_grid(self):
        for u in range(1, 13):
            for p in range(0, 4):
                for q in range(0, 4):
                    fam = build_covering_family(u, p, q)
                    assert verify_covering_family(fam, p, q), (u, p, q)

    def test_complement_duality(self):
        u = 8
        full = (1 << u) - 1
        fam = build_covering_family(u, 2, 1)
        flipped = CoveringFamily(u, 1, 2, tuple(full & ~m for m in fam.masks), "flipped")
        assert verify_covering_family(flipped, 1, 2)

    def test_hash_splitter_strategy_meets_contract(self):
        for p, q in [(1, 2), (2, 1), (2, 2)]:
            fam = build_covering_family(7, p, q, strategy="hash-splitter")
            assert fam.strategy == "hash-splitter"
            assert verify_covering_family(fam, p, q), (p, q)


class TestVerifyCoveringFamily:
    def test_empty_family_p0(self):
        fam = CoveringFamily(3, 0, 2, (0,), "manual")
        assert verify_covering_family(fam, 0, 2)

    def test_p1_q0_singleton_universe_fails(self):
        fam = CoveringFamily(1, 1, 0, (0,), "manual")
        assert not verify_covering_family(fam, 1, 0)

    def test_singletons_plus_empty(self):
        u = 5
        masks = tuple([0] + [1 << v for v in range(u)])
        fam = CoveringFamily(u, 1, u - 1, masks, "manual")
        assert verify_covering_family(fam, 1, u - 1)

    def test_oversized_instance_refused(self):
        fam = CoveringFamily(64, 5, 5, (0,), "manual")
        with pytest.raises(BudgetExceededError) as exc:
            verify_covering_family(fam, 5, 5)
        assert exc.value.estimate is not None
