"""Expression construction, flag profiles, validation, serialization."""

import pytest
from hypothesis import given, strategies as st

from dlc.core import (
    ALL_FUZZY,
    DL2,
    DL2_FLAGS,
    FUZZY_FLAGS,
    GODEL,
    STL_FLAGS,
    STL_INFTY,
    And,
    BoolConst,
    Cmp,
    CmpOp,
    Impl,
    IndexConst,
    MAnd,
    MOr,
    Not,
    Or,
    RealConst,
    VecConst,
    build_node,
    children_of,
    expr_from_text,
    expr_to_text,
    random_formula,
    stl,
    validate_for_logic,
    walk,
    yager,
)
from dlc.errors import (
    ArityMismatch,
    FlagViolation,
    IndexOutOfRange,
    ValidationError,
)


def atom(flags=FUZZY_FLAGS, a=1.0, b=2.0):
    return Cmp(CmpOp.LE, RealConst(a), RealConst(b), flags)


class TestFlagProfiles:
    def test_fuzzy_profile_allows_everything(self):
        x = atom()
        for node in (Not(x), Impl(x, x), And((x, x)), Or((x, x)),
                     MAnd((x, x)), MOr((x, x))):
            assert node.tag.flags == FUZZY_FLAGS

    def test_negation_rejected_when_profile_lacks_it(self):
        x = atom(DL2_FLAGS)
        with pytest.raises(FlagViolation):
            Not(x)

    def test_implication_rejected_when_profile_lacks_it(self):
        x = atom(STL_FLAGS)
        with pytest.raises(FlagViolation):
            Impl(x, x)

    def test_monoidal_rejected_when_profile_lacks_it(self):
        x = atom(STL_FLAGS)
        with pytest.raises(FlagViolation):
            MAnd((x, x))
        with pytest.raises(FlagViolation):
            MOr((x, x))

    def test_mixed_profiles_rejected(self):
        with pytest.raises(Exception):
            And((atom(FUZZY_FLAGS), atom(DL2_FLAGS)))

    def test_empty_connective_rejected(self):
        with pytest.raises(Exception):
            And(())


class TestConstruction:
    def test_index_bounds(self):
        IndexConst(0, 1)
        with pytest.raises(IndexOutOfRange):
            IndexConst(3, 3)
        with pytest.raises(IndexOutOfRange):
            IndexConst(-1, 3)

    def test_vector_nonempty(self):
        with pytest.raises(ArityMismatch):
            VecConst([])

    def test_comparison_needs_real_operands(self):
        x = atom()
        with pytest.raises(Exception):
            Cmp(CmpOp.LE, x, RealConst(1.0), FUZZY_FLAGS)

    def test_structural_equality(self):
        assert atom() == atom()
        assert And((atom(), atom())) == And((atom(), atom()))
        assert atom(a=1.0) != atom(a=2.0)


class TestValidation:
    def test_profile_must_match_logic(self):
        x = atom(FUZZY_FLAGS)
        validate_for_logic(x, GODEL)
        with pytest.raises(FlagViolation):
            validate_for_logic(x, DL2)
        validate_for_logic(atom(DL2_FLAGS), DL2)
        validate_for_logic(atom(STL_FLAGS), stl(1.0))
        validate_for_logic(atom(FUZZY_FLAGS), STL_INFTY)

    def test_yager_requires_positive_r(self):
        with pytest.raises(ValidationError):
            yager(0.0)
        with pytest.raises(ValidationError):
            yager(-1.0)

    def test_stl_requires_positive_nu(self):
        with pytest.raises(ValidationError):
            stl(0.0)


PROFILES = [FUZZY_FLAGS, DL2_FLAGS, STL_FLAGS]


@given(
    profile=st.sampled_from(PROFILES),
    depth=st.integers(0, 4),
    seed=st.integers(0, 10_000),
)
def test_random_formula_respects_profile(profile, depth, seed):
    f = random_formula(profile, depth, seed)
    for node in walk(f):
        if hasattr(node.tag, "flags"):
            assert node.tag.flags == profile


@given(
    profile=st.sampled_from(PROFILES),
    depth=st.integers(0, 4),
    seed=st.integers(0, 10_000),
)
def test_random_formula_deterministic(profile, depth, seed):
    assert random_formula(profile, depth, seed) == random_formula(
        profile, depth, seed
    )


@given(
    profile=st.sampled_from(PROFILES),
    depth=st.integers(0, 5),
    seed=st.integers(0, 10_000),
)
def test_text_serialization_round_trip(profile, depth, seed):
    f = random_formula(profile, depth, seed)
    assert expr_from_text(expr_to_text(f)) == f


def test_build_node_matches_constructors():
    x = atom()
    assert build_node("and", [x, x]) == And((x, x))
    assert build_node("impl", [x, x]) == Impl(x, x)
    assert build_node("not", [x]) == Not(x)
    assert children_of(And((x, x))) == (x, x)


def test_all_fuzzy_enumeration():
    kinds = [lg.kind.value for lg in ALL_FUZZY]
    assert kinds == ["goedel", "lukasiewicz", "yager", "product"]
