import os
import tempfile
import unittest

import attr

from irs_parafac.config import (
    BalsSettings,
    ScenarioConfig,
    ScenarioDims,
    config_from_dict,
    config_to_dict,
    load_config,
    load_config_document,
)
from irs_parafac.exceptions import ConfigError
from irs_parafac.registry import Registry
from irs_parafac.tests import test_data

CONF_PATH = os.path.join(os.path.dirname(__file__), test_data.conf_file)


class TestConfig(unittest.TestCase):

    def test_load_config(self):
        config = load_config(CONF_PATH)
        self.assertEqual(config.dims, ScenarioDims(M=3, L=2, N=10, T=4, K=50))
        self.assertEqual(config.n_values, (10, 20))
        self.assertEqual(config.snr_grid_db, (10.0, 30.0))
        self.assertEqual(config.estimators, ("lskrf", "bals"))
        self.assertEqual(config.bals, BalsSettings())
        self.assertFalse(config.record_runtime)
        self.assertEqual(config.dims_for(20).N, 20)

    def test_round_trip_through_dict(self):
        config = load_config(CONF_PATH)
        self.assertEqual(config_from_dict(config_to_dict(config)), config)

    def test_defaults(self):
        config = ScenarioConfig(dims=test_data.fig3_dims)
        self.assertEqual(config.n_values, (10,))
        self.assertEqual(config.snr_grid_db, test_data.fig3_snr_grid)
        self.assertEqual(config.trials, 200)
        self.assertEqual(config.s_design, "unit_modulus")
        self.assertEqual(config.estimators, ("lskrf", "bals"))

    def test_n_from_n_values(self):
        config = config_from_dict({"dims": {"M": 3, "L": 2, "T": 4, "K": 50}, "n_values": [40, 10]})
        self.assertEqual(config.dims.N, 40)
        with self.assertRaises(ConfigError):
            config_from_dict({"dims": {"M": 3, "L": 2, "T": 4, "K": 50}})

    def test_unknown_keys(self):
        document = load_config_document(CONF_PATH)
        with self.assertRaises(ConfigError) as context:
            config_from_dict(dict(document, colour="blue"))
        self.assertIn("colour", str(context.exception))
        with self.assertRaises(ConfigError) as context:
            config_from_dict(dict(document, bals={"tolerence": 1e-6}))
        self.assertIn("bals", str(context.exception))

    def test_schema_violations(self):
        document = load_config_document(CONF_PATH)
        for key, value in (("trials", 0), ("estimators", ["music"]), ("s_design", "hadamard"),
                           ("snr_grid_db", []), ("estimators", ["bals", "bals"]),
                           ("snr_grid_db", [10.0, 4000.0]), ("snr_grid_db", [-400.0])):
            with self.assertRaises(ConfigError, msg=key):
                config_from_dict(dict(document, **{key: value}))

    def test_attrs_validators(self):
        with self.assertRaises(ValueError):
            ScenarioDims(M=0, L=2, N=10, T=4, K=50)
        with self.assertRaises(TypeError):
            ScenarioDims(M=3.0, L=2, N=10, T=4, K=50)
        with self.assertRaises(ValueError):
            BalsSettings(tolerance=0)
        with self.assertRaises(ValueError):
            attr.evolve(ScenarioConfig(dims=test_data.fig3_dims), estimators="lskrf,esprit")
        self.assertEqual(ScenarioConfig(dims=test_data.fig3_dims, estimators="BALS").estimators, ("bals",))

    def test_bad_files(self):
        with self.assertRaises(FileNotFoundError):
            load_config("missing.toml")
        with tempfile.NamedTemporaryFile("w", suffix=".toml", delete=False) as conf_file:
            conf_file.write("dims = [unclosed\n")
        try:
            with self.assertRaises(ConfigError):
                load_config(conf_file.name)
        finally:
            os.remove(conf_file.name)


class TestRegistry(unittest.TestCase):

    @classmethod
    def setUpClass(self):
        self.registry = Registry()

    def test_preset_names(self):
        self.assertEqual(self.registry.preset_names(), ["paper-fig3", "paper-fig3-full", "requirements-gate"])

    def test_fig3_preset(self):
        config = self.registry.load_preset_by_name("paper-fig3")
        self.assertEqual(config.dims, test_data.fig3_dims)
        self.assertEqual(config.n_values, (10, 40))
        self.assertEqual(config.snr_grid_db, test_data.fig3_snr_grid)
        self.assertEqual(config.trials, 200)
        self.assertEqual(self.registry.load_preset_by_name("paper-fig3-full").trials, 3000)

    def test_gate_preset(self):
        config = self.registry.load_preset_by_name("requirements-gate")
        self.assertEqual(config.dims, test_data.gate_dims)
        self.assertEqual(config.estimators, ("bals",))
        self.assertEqual(config.s_design, "random_phase")

    def test_unknown_preset(self):
        with self.assertRaises(KeyError):
            self.registry.load_preset_by_name("paper-fig9")

    def test_missing_presets_file(self):
        with self.assertRaises(FileNotFoundError):
            Registry("absent.json").preset_names()
