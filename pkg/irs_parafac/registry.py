import json
from importlib import resources
from typing import List

from irs_parafac.config import (
    ScenarioConfig,
    config_from_dict,
)

PRESETS_FILE = "presets.json"


class Registry:
    """
    Named scenario presets shipped with the package in presets.json

    Attributes:
        presets_file: str
            resource name inside the irs_parafac package
    """

    def __init__(self, presets_file: str = PRESETS_FILE):
        self.presets_file = presets_file

    def _load(self) -> dict:
        try:
            with resources.open_text("irs_parafac", self.presets_file) as json_file:
                return json.load(json_file)
        except FileNotFoundError:
            raise FileNotFoundError(
                f"File with scenario presets {self.presets_file} not found")

    def preset_names(self) -> List[str]:
        return sorted(self._load())

    def load_preset_document_by_name(self, preset_name: str) -> dict:
        """
        Returns the raw config document of a preset, shaped like a TOML config file

        Parameters:
            preset_name: str
        Returns:
            dict
        """
        presets = self._load()
        try:
            return presets[preset_name]["config"]
        except KeyError:
            raise KeyError(
                f"Preset '{preset_name}' not found in {self.presets_file}, known presets: {sorted(presets)}")

    def load_preset_by_name(self, preset_name: str) -> ScenarioConfig:
        """
        Get a validated ScenarioConfig by preset name

        Parameters:
            preset_name: str
        Returns:
            ScenarioConfig
        """
        return config_from_dict(self.load_preset_document_by_name(preset_name))
