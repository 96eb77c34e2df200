"""Shared helper: expose a dataclass config as command-line flags."""

import argparse
from dataclasses import fields


def parse_config(cls, description=None):
    parser = argparse.ArgumentParser(description=description)
    for f in fields(cls):
        parser.add_argument(f"--{f.name.replace('_', '-')}", type=type(f.default), default=f.default)
    return cls(**vars(parser.parse_args()))
