"""Shipped demonstration data: rule file and synthetic lexicon."""

from importlib import resources


def demo_rules_text() -> str:
    return (resources.files(__package__) / "demo.rules").read_text(encoding="utf-8")


def demo_lexicon_text() -> str:
    return (resources.files(__package__) / "lexicon_demo.txt").read_text(encoding="utf-8")


def demo_rules_path() -> str:
    return str(resources.files(__package__) / "demo.rules")


def demo_lexicon_path() -> str:
    return str(resources.files(__package__) / "lexicon_demo.txt")
