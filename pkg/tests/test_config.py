"""Configuration, irrationality screen, artifact round trips."""

from fractions import Fraction

import pytest

from symdenjoy.cantor import GapSchedule
from symdenjoy.config import (
    BuildConfig,
    build_artifact,
    build_system,
    canonical_json,
    config_hash,
    continued_fraction_terms,
    load_artifact,
    screen_irrational,
    system_from_artifact,
    write_artifact,
)
from symdenjoy.errors import ConfigInvalid

GOLDEN_155 = (
    "0."
    "6180339887498948482045868343656381177203"
    "0917980576286213544862270526046281890244"
    "9707207204189391137484754088075386891752"
    "126633862223536931793180060766726354"
)


class TestValidate:
    def test_default_is_valid(self):
        BuildConfig().validate()

    @pytest.mark.parametrize(
        "kwargs,field",
        [
            ({"m": 0}, "m"),
            ({"depth": 0}, "depth"),
            ({"precision_bits": 32}, "precision_bits"),
            ({"pi_cap": Fraction(1, 2)}, "pi_cap"),
            ({"tau": "nonsense"}, "tau"),
        ],
    )
    def test_rejects_with_field_name(self, kwargs, field):
        with pytest.raises(ConfigInvalid) as exc:
            BuildConfig(**kwargs).validate()
        assert exc.value.field == field

    def test_rejects_partial_mass(self):
        cfg = BuildConfig(schedule=GapSchedule(mass=Fraction(9, 10)))
        with pytest.raises(ConfigInvalid) as exc:
            cfg.validate()
        assert exc.value.field == "schedule.mass"


class TestIrrationalityScreen:
    @pytest.mark.parametrize("tau", ["1/2", "1/3", "0.5", "0.0000000001"])
    def test_rejects_rational_like(self, tau):
        with pytest.raises(ConfigInvalid) as exc:
            BuildConfig(tau=tau).validate()
        assert exc.value.field == "tau"

    @pytest.mark.parametrize("tau", ["golden", "sqrt2m1", GOLDEN_155])
    def test_accepts_irrational_like(self, tau):
        BuildConfig(tau=tau).validate()

    def test_cf_terms_of_golden_are_ones(self):
        cfg = BuildConfig()
        terms, ended = continued_fraction_terms(
            Fraction(cfg.tau_ticks, 1 << 256), 40
        )
        assert not ended
        assert terms[:40] == [0] + [1] * 39

    def test_screen_accepts_golden_directly(self):
        cfg = BuildConfig()
        screen_irrational(cfg.tau_ticks, 256)

    def test_screen_rejects_exact_binary_rational(self):
        with pytest.raises(ConfigInvalid):
            screen_irrational((1 << 256) // 4, 256)


class TestRoundTrip:
    def test_dict_round_trip(self):
        cfg = BuildConfig(m=3, tau="sqrt2m1", depth=5, pi_cap=Fraction(1, 5))
        assert BuildConfig.from_dict(cfg.to_dict()) == cfg

    def test_unknown_field_rejected(self):
        data = BuildConfig().to_dict()
        data["extra"] = 1
        with pytest.raises(ConfigInvalid) as exc:
            BuildConfig.from_dict(data)
        assert exc.value.field == "extra"

    def test_unreadable_field_rejected(self):
        data = BuildConfig().to_dict()
        data["pi_cap"] = "one quarter"
        with pytest.raises(ConfigInvalid):
            BuildConfig.from_dict(data)

    def test_hash_depends_on_config(self):
        a = config_hash(BuildConfig())
        b = config_hash(BuildConfig(m=3))
        assert a != b and len(a) == 64


class TestArtifact:
    def test_byte_deterministic(self):
        cfg = BuildConfig()
        assert canonical_json(build_artifact(cfg)) == canonical_json(build_artifact(cfg))

    def test_shape_and_eps_levels(self):
        art = build_artifact(BuildConfig())
        assert art["schema"] == "symdenjoy/artifact/1"
        levels = art["derived"]["eps_levels"]
        assert levels["1e-10"]["depth"] == 34
        assert levels["1e-20"]["depth"] == 67
        assert levels["1e-30"]["depth"] == 101
        assert art["derived"]["tau"].startswith("0.6180339887498948")

    def test_write_load_rebuild(self, tmp_path):
        path = tmp_path / "system.json"
        cfg = BuildConfig(m=3)
        write_artifact(path, cfg)
        loaded = load_artifact(path)
        cfg2, system = system_from_artifact(loaded)
        assert cfg2 == cfg
        assert system.cantor.config_hash() == build_system(cfg).cantor.config_hash()

    def test_load_rejects_wrong_schema(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"schema": "something/else", "config": {}}')
        with pytest.raises(ConfigInvalid):
            load_artifact(path)

    def test_load_rejects_missing_config(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"schema": "symdenjoy/artifact/1"}')
        with pytest.raises(ConfigInvalid):
            load_artifact(path)

    def test_load_is_lenient_about_config_contents(self, tmp_path):
        """A defective config must load, so verification can indict it."""
        import json

        path = tmp_path / "system.json"
        write_artifact(path, BuildConfig())
        data = json.loads(path.read_text())
        data["config"]["schedule"]["params"]["mass"] = "9/10"
        path.write_bytes(canonical_json(data))
        loaded = load_artifact(path)
        assert loaded["config"]["schedule"]["params"]["mass"] == "9/10"
