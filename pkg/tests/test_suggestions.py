import itertools
import random

import pytest

from pmt.core import (
    DeflectionBasin,
    FwdTestPoint,
    Rating,
    RoadClass,
    SurfaceSegment,
    default_thresholds,
)
from pmt.errors import InvalidRecordError
from pmt.fusion import Completeness, FusedSegmentProfile
from pmt.suggestions import (
    DECISION_DEPTH,
    DECISION_PRIORITY,
    DEEP_SERIES,
    EXPORT_COLUMNS,
    MARKER_COLORS,
    PATCH_AREA_M2,
    RATED_SERIES,
    SHALLOW_SERIES,
    Decision,
    PatchDepth,
    Priority,
    RatingVector,
    decide,
    export_patching_table,
    rate_profile,
    suggest,
    suggest_road,
)

INTERSTATE = default_thresholds(RoadClass.INTERSTATE)


def vector(**overrides) -> RatingVector:
    fields = {name: Rating.GOOD for name in RATED_SERIES}
    fields.update(overrides)
    return RatingVector(**fields)


def oracle_decision(ratings: RatingVector) -> Decision:
    """The decision rule, restated declaratively."""
    deep = [ratings.series(s) for s in DEEP_SERIES]
    shallow = [ratings.series(s) for s in SHALLOW_SERIES]
    if Rating.POOR in deep:
        return Decision.FULL_DEPTH_REQUIRED
    if Rating.FAIR in deep:
        return Decision.FULL_DEPTH_WARNING
    if Rating.POOR in shallow:
        return Decision.SURFACE_REQUIRED
    if Rating.FAIR in shallow:
        return Decision.SURFACE_WARNING
    return Decision.NO_ACTION


def all_rating_vectors():
    for combo in itertools.product(tuple(Rating), repeat=len(RATED_SERIES)):
        yield RatingVector(**dict(zip(RATED_SERIES, combo)))


@pytest.fixture(scope="module")
def outcomes():
    return {v: decide(v) for v in all_rating_vectors()}


class TestDecideExhaustively:
    """Every one of the 4^8 rating vectors, against the stated rule."""

    def test_total_and_matches_oracle(self, outcomes):
        assert len(outcomes) == 4 ** 8
        for v, outcome in outcomes.items():
            assert outcome.decision is oracle_decision(v)

    def test_triggers_are_the_governing_series(self, outcomes):
        governing = {
            Decision.FULL_DEPTH_REQUIRED: (DEEP_SERIES, Rating.POOR),
            Decision.FULL_DEPTH_WARNING: (DEEP_SERIES, Rating.FAIR),
            Decision.SURFACE_REQUIRED: (SHALLOW_SERIES, Rating.POOR),
            Decision.SURFACE_WARNING: (SHALLOW_SERIES, Rating.FAIR),
        }
        for v, outcome in outcomes.items():
            if outcome.decision is Decision.NO_ACTION:
                assert outcome.triggers == ()
            else:
                group, level = governing[outcome.decision]
                assert outcome.triggers == tuple(
                    s for s in group if v.series(s) is level
                )
                assert len(outcome.triggers) >= 1

    def test_completeness_tracks_deep_group(self, outcomes):
        for v, outcome in outcomes.items():
            surface_only = all(v.series(s) is Rating.UNKNOWN for s in DEEP_SERIES)
            expected = Completeness.SURFACE_ONLY if surface_only else Completeness.FULL
            assert outcome.completeness is expected

    def test_worsening_any_series_never_softens_the_decision(self, outcomes):
        worse = {Rating.GOOD: Rating.FAIR, Rating.FAIR: Rating.POOR}
        severity = {v: o.decision.severity for v, o in outcomes.items()}
        for v in outcomes:
            for name in RATED_SERIES:
                current = v.series(name)
                if current not in worse:
                    continue
                bumped = RatingVector(
                    **{
                        s: (worse[current] if s == name else v.series(s))
                        for s in RATED_SERIES
                    }
                )
                assert severity[bumped] >= severity[v]


class TestDecideCases:
    def test_all_good_is_no_action(self):
        outcome = decide(vector())
        assert outcome.decision is Decision.NO_ACTION
        assert outcome.triggers == ()

    def test_single_poor_deep_dominates_everything(self):
        outcome = decide(vector(d60=Rating.POOR, l_iri=Rating.POOR, cd=Rating.POOR))
        assert outcome.decision is Decision.FULL_DEPTH_REQUIRED
        assert outcome.triggers == ("d60",)

    def test_poor_deep_with_good_partner(self):
        outcome = decide(vector(bci=Rating.POOR))
        assert outcome.decision is Decision.FULL_DEPTH_REQUIRED
        assert outcome.triggers == ("bci",)

    def test_fair_deep_beats_poor_shallow(self):
        outcome = decide(vector(bci=Rating.FAIR, d0=Rating.POOR, sci=Rating.POOR))
        assert outcome.decision is Decision.FULL_DEPTH_WARNING
        assert outcome.triggers == ("bci",)

    def test_unknown_deep_lets_shallow_govern(self):
        outcome = decide(
            vector(d60=Rating.UNKNOWN, bci=Rating.UNKNOWN, r_iri=Rating.POOR)
        )
        assert outcome.decision is Decision.SURFACE_REQUIRED
        assert outcome.triggers == ("r_iri",)
        assert outcome.completeness is Completeness.SURFACE_ONLY

    def test_all_unknown_is_no_action(self):
        outcome = decide(RatingVector(**{s: Rating.UNKNOWN for s in RATED_SERIES}))
        assert outcome.decision is Decision.NO_ACTION
        assert outcome.completeness is Completeness.SURFACE_ONLY

    def test_unknown_series_name_rejected(self):
        with pytest.raises(InvalidRecordError):
            vector().series("d12")


def basin_for(d0, sci, bdi, bci, d60):
    d12 = d0 - sci
    d24 = d12 - bdi
    d36 = d24 - bci
    return DeflectionBasin(d0=d0, d12=d12, d24=d24, d36=d36, d60=d60, load_lbf=9000.0)


def profile_for(l_iri, r_iri, cd, basin, dmi=0):
    segment = SurfaceSegment(
        route="I-65", direction="NB", lane="DL", dmi=dmi,
        latitude=39.5, longitude=-86.1,
        l_iri=l_iri, r_iri=r_iri, cd_left=cd, cd_right=cd,
    )
    if basin is None:
        return FusedSegmentProfile(segment, None, None, Completeness.SURFACE_ONLY)
    point = FwdTestPoint(
        route="I-65", direction="NB", lane="DL", latitude=39.5, longitude=-86.1,
        basin=basin, station_m=segment.station_m, hp_in=12.0,
    )
    return FusedSegmentProfile(segment, point, 0.0, Completeness.FULL)


#: (iri, cd, basin) -> expected decision, exercising every decision once.
CANONICAL_ROWS = [
    (2.5, 15.0, basin_for(250.0, 55.0, 45.0, 40.0, 50.0),
     Decision.FULL_DEPTH_REQUIRED, ("d60", "bci")),
    (1.9, 12.8, basin_for(180.0, 46.0, 30.0, 30.0, 42.0),
     Decision.FULL_DEPTH_WARNING, ("d60", "bci")),
    (2.5, 15.0, basin_for(250.0, 55.0, 45.0, 15.0, 30.0),
     Decision.SURFACE_REQUIRED, ("l_iri", "r_iri", "cd", "d0", "sci", "bdi")),
    (1.9, 12.8, basin_for(180.0, 46.0, 30.0, 15.0, 30.0),
     Decision.SURFACE_WARNING, ("l_iri", "r_iri", "cd", "d0", "sci", "bdi")),
    (1.5, 10.0, basin_for(120.0, 40.0, 20.0, 15.0, 30.0),
     Decision.NO_ACTION, ()),
]


class TestRateAndSuggest:
    def test_canonical_rows_hit_every_decision(self):
        seen = []
        for iri, cd, basin, expected, triggers in CANONICAL_ROWS:
            s = suggest(profile_for(iri, iri, cd, basin), INTERSTATE)
            assert s.decision is expected
            assert s.triggers == triggers
            seen.append(s.decision)
        assert set(seen) == set(Decision)

    def test_marker_colors_follow_severity(self):
        expected = ["red", "orange", "yellow", "blue", "green"]
        for (iri, cd, basin, _, _), color in zip(CANONICAL_ROWS, expected):
            assert suggest(profile_for(iri, iri, cd, basin), INTERSTATE).marker_color == color
        assert MARKER_COLORS[Decision.FULL_DEPTH_REQUIRED] == "red"
        assert MARKER_COLORS[Decision.NO_ACTION] == "green"

    def test_patch_area_only_for_action(self):
        rows = [suggest(profile_for(i, i, c, b), INTERSTATE)
                for i, c, b, _, _ in CANONICAL_ROWS]
        assert [r.patch_area_m2 for r in rows] == [6.48, 6.48, 6.48, 6.48, 0.0]
        assert PATCH_AREA_M2 == pytest.approx(6.48)

    def test_depth_and_priority_mappings(self):
        assert DECISION_DEPTH[Decision.SURFACE_REQUIRED] is PatchDepth.SURFACE
        assert DECISION_DEPTH[Decision.FULL_DEPTH_WARNING] is PatchDepth.FULL_DEPTH
        assert DECISION_PRIORITY[Decision.SURFACE_WARNING] is Priority.WARNING
        assert DECISION_PRIORITY[Decision.FULL_DEPTH_REQUIRED] is Priority.REQUIRED
        assert DECISION_PRIORITY[Decision.NO_ACTION] is Priority.NONE

    def test_boundaries_rate_less_severe(self):
        # exactly at the lower edge -> good, exactly at the upper -> fair
        at_lower = profile_for(1.73, 1.73, 12.5, basin_for(149.1, 43.2, 25.4, 21.8, 37.1))
        ratings = rate_profile(at_lower, INTERSTATE)
        assert all(ratings.series(s) is Rating.GOOD for s in RATED_SERIES)
        at_upper = profile_for(2.07, 2.07, 13.2, basin_for(214.9, 49.3, 37.6, 33.8, 47.5))
        ratings = rate_profile(at_upper, INTERSTATE)
        assert all(ratings.series(s) is Rating.FAIR for s in RATED_SERIES)

    def test_crack_density_rated_on_worse_wheel_path(self):
        segment = SurfaceSegment(
            route="I-65", direction="NB", lane="DL", dmi=0,
            latitude=39.5, longitude=-86.1,
            l_iri=1.0, r_iri=1.0, cd_left=5.0, cd_right=14.0,
        )
        profile = FusedSegmentProfile(segment, None, None, Completeness.SURFACE_ONLY)
        assert rate_profile(profile, INTERSTATE).cd is Rating.POOR

    def test_surface_only_profile(self):
        s = suggest(profile_for(2.5, 2.5, 15.0, None), INTERSTATE)
        for name in ("d0", "sci", "bdi", "d60", "bci"):
            assert s.ratings.series(name) is Rating.UNKNOWN
        assert s.decision is Decision.SURFACE_REQUIRED
        assert s.triggers == ("l_iri", "r_iri", "cd")
        assert s.completeness is Completeness.SURFACE_ONLY

    def test_missing_functional_bands_rate_unknown(self):
        state = default_thresholds(RoadClass.STATE_ROAD)
        ratings = rate_profile(
            profile_for(2.5, 2.5, 15.0, basin_for(120.0, 40.0, 20.0, 15.0, 30.0)), state
        )
        assert ratings.l_iri is Rating.UNKNOWN
        assert ratings.r_iri is Rating.UNKNOWN
        assert ratings.cd is Rating.UNKNOWN
        assert ratings.d0 is Rating.GOOD


def canonical_table():
    profiles = [
        profile_for(iri, iri, cd, basin, dmi=i)
        for i, (iri, cd, basin, _, _) in enumerate(CANONICAL_ROWS)
    ]
    return suggest_road(profiles, INTERSTATE)


class TestRoadTable:
    def test_rows_ordered_by_dmi(self):
        profiles = [
            profile_for(iri, iri, cd, basin, dmi=dmi)
            for dmi, (iri, cd, basin, _, _) in zip((9, 3, 7, 1, 5), CANONICAL_ROWS)
        ]
        table = suggest_road(profiles, INTERSTATE)
        assert [s.segment.dmi for s in table.suggestions] == [1, 3, 5, 7, 9]

    def test_input_order_does_not_matter(self):
        profiles = [
            profile_for(iri, iri, cd, basin, dmi=i)
            for i, (iri, cd, basin, _, _) in enumerate(CANONICAL_ROWS)
        ]
        shuffled = profiles[:]
        random.Random(13).shuffle(shuffled)
        assert suggest_road(shuffled, INTERSTATE) == suggest_road(profiles, INTERSTATE)

    def test_summary_equals_column_sums(self):
        table = canonical_table()
        rows = table.suggestions
        assert table.summary.n_segments == len(rows) == 5
        for decision in Decision:
            assert table.summary.decision_counts[decision.value] == sum(
                1 for r in rows if r.decision is decision
            )
        assert table.summary.surface_area_m2 == pytest.approx(
            sum(r.patch_area_m2 for r in rows if r.depth is PatchDepth.SURFACE)
        )
        assert table.summary.full_depth_area_m2 == pytest.approx(
            sum(r.patch_area_m2 for r in rows if r.depth is PatchDepth.FULL_DEPTH)
        )
        assert table.summary.total_area_m2 == pytest.approx(
            table.summary.surface_area_m2 + table.summary.full_depth_area_m2
        )

    def test_empty_road(self):
        table = suggest_road([], INTERSTATE)
        assert table.suggestions == ()
        assert table.summary.n_segments == 0
        assert table.summary.total_area_m2 == 0.0


class TestExport:
    def test_header_and_shape(self):
        lines = export_patching_table(canonical_table()).splitlines()
        assert lines[0] == ",".join(EXPORT_COLUMNS)
        assert len(EXPORT_COLUMNS) == 30
        assert len(lines) == 6
        for line in lines[1:]:
            assert len(line.split(",")) == 30

    def test_no_action_row_renders_exactly(self):
        iri, cd, basin, _, _ = CANONICAL_ROWS[4]
        table = suggest_road([profile_for(iri, iri, cd, basin, dmi=2)], INTERSTATE)
        row = export_patching_table(table).splitlines()[1]
        assert row == (
            "I-65,NB,DL,2,3.6,39.500000,-86.100000,full-depth asphalt,"
            "1.50,1.50,10.0,10.0,120.0,40.0,20.0,30.0,15.0,"
            "good,good,good,good,good,good,good,good,"
            "none,none,0.00,,full"
        )

    def test_triggers_join_with_semicolons(self):
        iri, cd, basin, _, triggers = CANONICAL_ROWS[2]
        table = suggest_road([profile_for(iri, iri, cd, basin)], INTERSTATE)
        row = export_patching_table(table).splitlines()[1]
        assert ";".join(triggers) in row
        assert row.split(",")[28] == "l_iri;r_iri;cd;d0;sci;bdi"

    def test_segment_without_fwd_leaves_deflections_empty(self):
        table = suggest_road([profile_for(2.5, 2.5, 15.0, None)], INTERSTATE)
        fields = export_patching_table(table).splitlines()[1].split(",")
        assert fields[12:17] == [""] * 5
        assert fields[20:25] == ["unknown"] * 5
        assert fields[-1] == "surface_only"

    def test_empty_table_exports_header_only(self):
        assert export_patching_table(suggest_road([], INTERSTATE)) == (
            ",".join(EXPORT_COLUMNS) + "\n"
        )

    def test_export_is_deterministic(self):
        assert export_patching_table(canonical_table()) == export_patching_table(
            canonical_table()
        )
