"""Ingestion: symbolic tables, binarization, derivation operators, usage logs."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from galimp import (
    ParseError,
    UnknownLabelError,
    ValidationError,
    binarize,
    context_from_csv,
    context_to_csv,
    extent,
    intent,
    parse_observations,
    parse_symbolic_table,
)
from golden_values import CONTEXT_TRUTH


class TestParseSymbolicTable:
    def test_demo_table(self, symbolic_table):
        assert symbolic_table.system_objects == ("Char", "Word", "Key")
        assert len(symbolic_table.informants) == 5
        assert symbolic_table.cell("Char", "Novice User 1") == "The number"
        assert symbolic_table.cell("Key", "Novice User 5") == "The letters"

    def test_minimal_single_cell(self):
        t = parse_symbolic_table("object,i1\no1,x\n")
        assert t.cells == (("x",),)

    def test_blank_first_header_cell(self):
        t = parse_symbolic_table(",i1,i2\no1,x,y\n")
        assert t.informants == ("i1", "i2")

    def test_ragged_row_names_row(self):
        text = "object,i1,i2\no1,x,y\no2,x\n"
        with pytest.raises(ParseError, match="row 2"):
            parse_symbolic_table(text)

    def test_empty_cell_rejected(self):
        with pytest.raises(ParseError, match="empty cell"):
            parse_symbolic_table("object,i1,i2\no1,x,\n")

    def test_multi_term_cell_rejected(self):
        with pytest.raises(ParseError, match="multi-term"):
            parse_symbolic_table('object,i1\no1,"a, b"\n')

    def test_bad_header(self):
        with pytest.raises(ParseError, match="header"):
            parse_symbolic_table("thing,i1\no1,x\n")

    def test_duplicate_object_rejected(self):
        with pytest.raises(ParseError, match="duplicate"):
            parse_symbolic_table("object,i1\no1,x\no1,y\n")

    def test_whitespace_trimmed(self):
        t = parse_symbolic_table("object,i1\no1,  spaced term \n")
        assert t.cells[0][0] == "spaced term"


class TestBinarize:
    def test_demo_incidence_matches_truth(self, symbolic_table):
        ctx = binarize(symbolic_table)
        assert ctx.objects == ("Char", "Word", "Key")
        assert set(ctx.attributes) == set(CONTEXT_TRUTH["Char"])
        for obj in ctx.objects:
            for attr in ctx.attributes:
                assert ctx.has(obj, attr) == bool(CONTEXT_TRUTH[obj][attr]), (obj, attr)

    def test_demo_rows_in_attribute_order(self, symbolic_table):
        ctx = binarize(symbolic_table)
        row = {o: tuple(int(v) for v in ctx.incidence[i]) for i, o in enumerate(ctx.objects)}
        # Char uses the first four terms only, Key the last three in context order.
        assert row["Char"] == (1, 1, 1, 1, 0, 0)
        assert row["Key"] == (0, 0, 1, 0, 1, 1)

    def test_first_appearance_attribute_order(self, symbolic_table):
        ctx = binarize(symbolic_table)
        seen = []
        for cells in symbolic_table.cells:
            for term in cells:
                if term not in seen:
                    seen.append(term)
        assert list(ctx.attributes) == seen

    def test_single_repeated_term(self):
        t = parse_symbolic_table("object,i1,i2\no1,t,t\no2,t,t\n")
        ctx = binarize(t)
        assert ctx.attributes == ("t",)
        assert all(row == (True,) for row in ctx.incidence)

    def test_deterministic(self, symbolic_table):
        assert binarize(symbolic_table) == binarize(symbolic_table)


class TestDerivation:
    def test_extent_examples(self, demo_context):
        assert extent(demo_context, {"The letters"}) == {"Char", "Word", "Key"}
        assert extent(demo_context, {"The Sign", "Substantive"}) == {"Word"}
        assert extent(demo_context, set()) == set(demo_context.objects)

    def test_intent_examples(self, demo_context):
        assert intent(demo_context, {"Char", "Word"}) == {
            "The Sign", "The letters", "The numbers",
        }
        assert intent(demo_context, {"Key"}) == {
            "The letters", "The Characters", "Substantive",
        }
        assert intent(demo_context, set()) == set(demo_context.attributes)

    def test_unknown_labels(self, demo_context):
        with pytest.raises(UnknownLabelError):
            extent(demo_context, {"nope"})
        with pytest.raises(UnknownLabelError):
            intent(demo_context, {"nope"})


@st.composite
def contexts(draw, max_objects=8, max_attributes=8):
    n_obj = draw(st.integers(0, max_objects))
    n_att = draw(st.integers(1, max_attributes))
    rows = draw(
        st.lists(
            st.lists(st.booleans(), min_size=n_att, max_size=n_att),
            min_size=n_obj,
            max_size=n_obj,
        )
    )
    from galimp import FormalContext

    return FormalContext(
        tuple(f"o{i}" for i in range(n_obj)),
        tuple(f"a{j}" for j in range(n_att)),
        tuple(tuple(r) for r in rows),
    )


class TestGaloisLaws:
    @given(contexts(), st.data())
    @settings(max_examples=80, deadline=None)
    def test_antitone(self, ctx, data):
        attrs = list(ctx.attributes)
        small = set(data.draw(st.lists(st.sampled_from(attrs), unique=True))) if attrs else set()
        bigger = small | (
            set(data.draw(st.lists(st.sampled_from(attrs), unique=True))) if attrs else set()
        )
        assert extent(ctx, bigger) <= extent(ctx, small)

    @given(contexts(), st.data())
    @settings(max_examples=80, deadline=None)
    def test_closure_laws(self, ctx, data):
        attrs = list(ctx.attributes)
        a = set(data.draw(st.lists(st.sampled_from(attrs), unique=True))) if attrs else set()
        closed = intent(ctx, extent(ctx, a))
        assert a <= closed
        assert extent(ctx, a) == extent(ctx, closed)


class TestParseObservations:
    def test_pair_log_counts(self, pair_usage):
        from galimp import contingency

        assert len(pair_usage.users) == 215
        t = contingency(pair_usage, "the number", "the Sign")
        assert t.counts() == (100, 30, 85, 553)
        assert t.n == 768

    def test_empty_log(self):
        usage = parse_observations("", 0)
        assert usage.users == () and usage.terms == ()
        assert usage.population == 0

    def test_header_only(self):
        usage = parse_observations("user_id,term\n", 5)
        assert usage.users == ()
        assert usage.population == 5

    def test_duplicates_collapse(self):
        base = "user_id,term\nu1,a\nu1,b\n"
        noisy = "user_id,term\n" + "u1,a\n" * 5 + "u1,b\n"
        assert parse_observations(base, 1) == parse_observations(noisy, 1)

    def test_order_insensitive(self):
        a = parse_observations("user_id,term\nu1,x\nu2,y\nu1,y\n", 4)
        b = parse_observations("user_id,term\nu1,y\nu1,x\nu2,y\n", 4)
        assert a.usage_pairs() == b.usage_pairs()
        assert set(a.users) == set(b.users)
        assert set(a.terms) == set(b.terms)
        assert a.population == b.population

    def test_population_too_small(self):
        with pytest.raises(ValidationError, match="population"):
            parse_observations("user_id,term\nu1,a\nu2,a\n", 1)

    def test_population_defaults_to_distinct_users(self):
        usage = parse_observations("user_id,term\nu1,a\nu2,b\n")
        assert usage.population == 2

    def test_empty_term_field(self):
        with pytest.raises(ParseError, match="empty term"):
            parse_observations("user_id,term\nu1,\n", 10)

    def test_bad_header(self):
        with pytest.raises(ParseError, match="header"):
            parse_observations("who,what\nu1,a\n", 10)


class TestContextCsv:
    def test_round_trip(self, demo_context):
        assert context_from_csv(context_to_csv(demo_context)) == demo_context

    def test_bad_cell_value(self):
        with pytest.raises(ParseError, match="0 or 1"):
            context_from_csv("object,a\no1,2\n")

    def test_ragged(self):
        with pytest.raises(ParseError, match="row 1"):
            context_from_csv("object,a,b\no1,1\n")
