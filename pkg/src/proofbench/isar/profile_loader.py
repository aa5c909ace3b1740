"""Load restriction profiles from the bundled or a course TOML file."""

from __future__ import annotations

import sys
from importlib import resources
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .restrictions import ProfileError, SyntaxProfile


def parse_profiles(text: str, source: str = "<profiles>") -> dict[str, SyntaxProfile]:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ProfileError(f"{source}: {exc}") from exc
    profiles: dict[str, SyntaxProfile] = {}
    for index, raw in enumerate(data.get("profile", []), start=1):
        where = f"{source}: profile {index}"
        profile_id = raw.get("id")
        if not isinstance(profile_id, str) or not profile_id:
            raise ProfileError(f"{where}: missing id")
        if profile_id in profiles:
            raise ProfileError(f"{where}: duplicate profile id {profile_id!r}")
        profiles[profile_id] = SyntaxProfile(
            id=profile_id,
            allowed_commands=frozenset(raw.get("allowed_commands", [])),
            forbidden_methods=frozenset(raw.get("forbidden_methods", [])),
            forbidden_rules=frozenset(raw.get("forbidden_rules", [])),
            pattern_restrictions=dict(raw.get("pattern_restrictions", {})),
            blocking=bool(raw.get("blocking", True)),
            locales=tuple(raw.get("locales", ("en", "de"))),
            message_templates=raw.get("messages", {}),
        )
    return profiles


def load_profiles(path: str | Path | None = None) -> dict[str, SyntaxProfile]:
    if path is None:
        text = resources.files("proofbench.data").joinpath("profiles.toml").read_text("utf-8")
        return parse_profiles(text, "data/profiles.toml")
    return parse_profiles(Path(path).read_text("utf-8"), str(path))
