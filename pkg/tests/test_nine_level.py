import numpy as np
import pytest

from src.model.nine_level import (
    ALLOWED_COUPLINGS,
    INDEX,
    DipoleEntry,
    NineLevelParams,
    beat_frequencies,
    default_dipoles,
    nine_level_h,
    nine_level_model,
    superposition_norms,
    validate_dipoles,
)
from src.scenarios.config import ScenarioConfig
from src.scenarios.defaults import default_document
from src.utils.errors import ConfigurationError, SelectionRuleError


@pytest.fixture
def fig2_params(fig2_scenario):
    return fig2_scenario.nine_level_params()


def _allowed_pairs():
    return {(INDEX[g], INDEX[e]) for g, e, _ in ALLOWED_COUPLINGS}


# ── Dipole table ────────────────────────────────────────────────────────


class TestDipoles:
    def test_default_table_is_valid(self):
        dipoles = default_dipoles()
        validate_dipoles(dipoles)
        assert {d.key for d in dipoles} == ALLOWED_COUPLINGS

    def test_forbidden_entry_rejected(self):
        extra = DipoleEntry(ground="ms0", excited="A1", channel="pump", strength=(0.5, 0.0))
        with pytest.raises(SelectionRuleError, match="forbidden ms0/A1/pump"):
            validate_dipoles(default_dipoles() + (extra,))

    def test_missing_entry_rejected(self):
        with pytest.raises(SelectionRuleError, match="missing"):
            validate_dipoles(default_dipoles()[1:])

    def test_duplicate_entry_rejected(self):
        dipoles = default_dipoles()
        with pytest.raises(SelectionRuleError, match="duplicated"):
            validate_dipoles(dipoles + (dipoles[0],))

    def test_params_validate_on_construction(self, small_fine_structure, designed_schedule):
        with pytest.raises(SelectionRuleError):
            NineLevelParams(small_fine_structure, designed_schedule, dipoles=default_dipoles()[:-1])


# ── Hamiltonian ─────────────────────────────────────────────────────────


class TestNineLevelH:
    def test_fields_off_leaves_a_diagonal(self, small_fine_structure, frozen_schedule):
        params = NineLevelParams(small_fine_structure, frozen_schedule)
        h = nine_level_h(0.3, params)
        assert np.allclose(h, np.diag(np.diag(h)))
        assert np.allclose(np.diag(h).real, params.energies() - params.frame())

    def test_qubit_and_driven_levels_are_on_resonance(self, fig2_params):
        diag = np.diag(nine_level_h(0.0, fig2_params)).real
        assert diag[INDEX["ms-1"]] == pytest.approx(0.0)
        assert diag[INDEX["ms+1"]] == pytest.approx(0.0)
        assert diag[INDEX["A1"]] == pytest.approx(fig2_params.d1)
        assert diag[INDEX["A2"]] == pytest.approx(-fig2_params.d2)

    def test_only_allowed_pairs_couple(self, fig2_params, rng):
        allowed = _allowed_pairs()
        for t in rng.uniform(0, 1, 20):
            h = nine_level_h(t, fig2_params)
            for g in range(9):
                for e in range(g + 1, 9):
                    if (g, e) not in allowed and (e, g) not in allowed:
                        assert h[g, e] == 0

    def test_ms0_uncoupled_without_xy_tones(self, fig2_params):
        h = nine_level_h(0.4, fig2_params)
        off_diagonal = np.delete(h[INDEX["ms0"]], INDEX["ms0"])
        assert np.all(off_diagonal == 0)

    def test_xy_tones_reach_ms0(self, fig2_scenario):
        scenario = fig2_scenario.model_copy(update={"xy_tones": fig2_scenario.xy_tones.model_copy(update={"x_rabi": 3.0})})
        h = nine_level_h(0.4, scenario.nine_level_params())
        assert abs(h[INDEX["ms0"], INDEX["E'y"]]) == pytest.approx(1.5)
        assert h[INDEX["ms0"], INDEX["E'x"]] == 0

    def test_hermitian_everywhere(self, fig2_params, rng):
        h = nine_level_h(rng.uniform(0, 1, 1000), fig2_params)
        assert np.max(np.abs(h - np.conj(np.swapaxes(h, -1, -2)))) <= 1e-12

    def test_four_level_legs_are_resonant(self, fig2_params):
        beats = beat_frequencies(fig2_params)
        for key in [("ms-1", "A1", "p1"), ("ms-1", "A2", "p2"), ("ms+1", "A1", "s1"), ("ms+1", "A2", "s2")]:
            assert beats[key] == pytest.approx(0.0, abs=1e-9)

    def test_beat_phase_on_a_shared_transition(self, fig2_params):
        beats = beat_frequencies(fig2_params)
        beat = beats[("ms-1", "A1", "p2")]
        assert beat != 0
        t = 0.137
        h = nine_level_h(t, fig2_params)
        omega_p = 14.0
        expected = 0.5j * (omega_p - omega_p * np.exp(1j * beat * t))
        assert h[INDEX["ms-1"], INDEX["A1"]] == pytest.approx(expected)

    def test_model_metadata(self, fig2_params):
        model = nine_level_model(fig2_params)
        assert model.dim == 9
        assert model.frame == "rotating-with-beats"
        assert model.qubit_indices == (INDEX["ms-1"], INDEX["ms+1"])


class TestFineStructure:
    def test_scaled_keeps_reference_and_ground(self, fine_structure):
        scaled = fine_structure.scaled(0.5)
        assert scaled.ex == fine_structure.ex
        assert scaled.ground_splitting == fine_structure.ground_splitting
        assert scaled.a1 == pytest.approx(fine_structure.a1 / 2)
        assert "x0.5" in scaled.provenance

    def test_provenance_recorded(self, fine_structure):
        assert "Doherty" in fine_structure.provenance

    def test_nine_level_without_fine_structure(self):
        document = default_document("fig2")
        del document["fine_structure"]
        scenario = ScenarioConfig.model_validate(document)
        with pytest.raises(ConfigurationError, match="fine_structure"):
            scenario.build_model()


def test_superposition_norms():
    state = np.zeros((1, 9), dtype=complex)
    state[0, INDEX["Ex"]] = 1 / np.sqrt(2)
    state[0, INDEX["E'x"]] = 1 / np.sqrt(2)
    norms = superposition_norms(state)
    assert norms["Ex+E'x"][0] == pytest.approx(1.0)
    assert norms["Ex-E'x"][0] == pytest.approx(0.0)
    assert norms["Ey+E'y"][0] == 0.0
